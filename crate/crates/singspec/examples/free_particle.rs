//! The zero potential, where everything is known in closed form: the
//! monodromy matrix is `[[cos k, -k sin k], [sin k / k, cos k]]` with
//! `k = sqrt(lambda)`, the discriminant is `2 cos k`, the spectrum is
//! `[0, inf)` and every gap is closed.
//!
//! ```bash
//! cargo run --release --example free_particle
//! ```

use num_complex::Complex64;
use singspec::floquet::CellOperator;
use singspec::oracles::free_monodromy;
use singspec::piecewise::PiecewiseFunction;
use singspec::quasi_ode::{monodromy, Coefficients};

fn main() -> singspec::Result<()> {
    let tol = 1e-10;
    let c = Coefficients::free(Complex64::new(0.0, 0.0));

    println!("monodromy vs closed form:");
    println!("{:>10} {:>14} {:>14}", "lambda", "|M - F|", "|det M - 1|");
    let mut worst = 0.0f64;
    for i in 0..8 {
        let lam = -5.0 + 15.0 * i as f64;
        let m = monodromy(&c.with_lambda(Complex64::new(lam, 0.0)), tol)?;
        let o = free_monodromy(Complex64::new(lam, 0.0));
        let dev = (m.m11 - o.m11)
            .norm()
            .max((m.m12 - o.m12).norm())
            .max((m.m21 - o.m21).norm())
            .max((m.m22 - o.m22).norm());
        worst = worst.max(dev);
        println!(
            "{:>10.2} {:>14.3e} {:>14.3e}",
            lam,
            dev,
            (m.det() - Complex64::new(1.0, 0.0)).norm()
        );
    }
    println!("worst deviation: {worst:.3e}\n");

    let cell = CellOperator::new(PiecewiseFunction::zero(), PiecewiseFunction::zero(), tol)?;
    let bs = cell.band_edges(-1.0, 100.0)?;
    println!("bands of the free operator on [-1, 100]:");
    println!("{:>3} {:>12} {:>12} {:>12}", "k", "lo", "hi", "gap after");
    for (i, band) in bs.bands.iter().enumerate() {
        let gap = bs
            .gap_after(i)
            .map(|g| format!("{g:.3e}"))
            .unwrap_or_else(|| "-".into());
        println!("{:>3} {:>12.6} {:>12.6} {:>12}", band.index, band.lo, band.hi, gap);
    }
    println!("(edges sit at (k pi)^2; every gap closes)");
    Ok(())
}
