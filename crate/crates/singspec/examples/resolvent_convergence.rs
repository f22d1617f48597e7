//! Continuity of the operator in its potential: mollify the delta comb at
//! widths 1/n, decompose and assemble both operators on one mesh, and
//! watch the resolvent difference shrink linearly with the dual-norm
//! distance of the potentials.
//!
//! ```bash
//! cargo run --release --example resolvent_convergence
//! ```

use singspec::distribution::DistributionW1;
use singspec::galerkin::{convergence_experiment, ConvergenceOptions};

fn main() -> singspec::Result<()> {
    let comb = DistributionW1::delta_comb(1.0, 1.0)?;
    let opts = ConvergenceOptions::default();
    let report = convergence_experiment(&comb, &[4, 8, 16, 32, 64], &opts)?;

    println!(
        "truncation [-{l}, {l}], mesh h = {h}, resolvent at lambda = {lam:.3}, seed {seed:#x}",
        l = report.half_width,
        h = report.mesh_h,
        lam = report.lambda,
        seed = report.seed
    );
    println!("({})", report.norm_note);
    println!(
        "\n{:>4} {:>16} {:>16} {:>12}",
        "n", "w_norm_gap", "resolvent_gap", "ratio"
    );
    for row in &report.rows {
        println!(
            "{:>4} {:>16.6e} {:>16.6e} {:>12.4e}",
            row.n,
            row.w_norm_gap,
            row.resolvent_gap,
            row.ratio()
        );
    }
    println!(
        "\nthe dual-norm column decays like 1/sqrt(n) (the intrinsic rate for \
         mollified point interactions); the resolvent column follows it \
         linearly, with a uniformly bounded ratio"
    );
    Ok(())
}
