//! Band structure of the delta lattice (Kronig-Penney model): the comb
//! `q = sum alpha delta(. - n)` is decomposed into the sawtooth
//! `sigma = alpha (1/2 - t)` plus the constant `tau = alpha`, integrated
//! through the quasi-derivative system, and cross-checked against the
//! closed-form transfer-matrix trace `2 cos k + alpha sin(k)/k`.
//!
//! ```bash
//! cargo run --release --example kp_band_structure
//! ```

use singspec::decompose::decompose_periodic;
use singspec::distribution::DistributionW1;
use singspec::floquet::CellOperator;
use singspec::oracles::{kp_trace, KPModel};
use singspec::poly::bisect_root;

fn main() -> singspec::Result<()> {
    let alpha = 1.0;
    let comb = DistributionW1::delta_comb(alpha, 1.0)?;
    let st = decompose_periodic(&comb, 1.0)?;
    println!(
        "decomposition: sigma(0+) = {} (sawtooth slope {}), tau = {}",
        st.sigma.evaluate(0.0),
        st.sigma.pieces()[0].coeffs()[1],
        st.tau.evaluate(0.0),
    );

    let cell = CellOperator::new(st.sigma, st.tau, 1e-10)?;
    let bs = cell.band_edges(-1.0, 60.0)?;
    let model = KPModel { alpha, a: 1.0 };

    println!("\nbands on [-1, 60] (energies lambda = k^2):");
    println!(
        "{:>3} {:>12} {:>12} {:>11} {:>12}",
        "k", "lo", "hi", "gap after", "oracle dev"
    );
    for (i, band) in bs.bands.iter().enumerate() {
        // oracle edge: nearest root of the closed-form trace = +/-2
        let dev = |edge: f64| -> f64 {
            let target = kp_trace(model, edge).signum() * 2.0;
            let r = bisect_root(
                |lam| kp_trace(model, lam) - target,
                edge - 0.25,
                edge + 0.25,
            );
            (r - edge).abs()
        };
        let gap = bs
            .gap_after(i)
            .map(|g| format!("{g:.6}"))
            .unwrap_or_else(|| "-".into());
        let oracle_dev = if band.hi_clipped {
            dev(band.lo)
        } else {
            dev(band.lo).max(dev(band.hi))
        };
        println!(
            "{:>3} {:>12.6} {:>12.6} {:>11} {:>12.2e}",
            band.index, band.lo, band.hi, gap, oracle_dev
        );
    }

    println!("\ndiscriminant along the first two bands:");
    for i in 0..9 {
        let lam = -1.0 + 41.0 * i as f64 / 8.0;
        let d = cell.discriminant(lam)?;
        let marker = if d.abs() <= 2.0 { "band" } else { "gap" };
        println!(
            "  D({lam:>6.2}) = {d:>8.4}  (oracle {:>8.4})  {marker}",
            kp_trace(model, lam)
        );
    }
    Ok(())
}
