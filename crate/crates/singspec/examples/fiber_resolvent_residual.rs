//! The resolvent of one fiber operator: quasi-periodic boundary
//! conditions `w(1) = e^{i theta} w(0)`, `w^[1](1) = e^{i theta} w^[1](0)`
//! at a nonreal spectral parameter. The output is verified by applying the
//! differential expression back to `w` with an independent five-point
//! numerical derivative and comparing against the input.
//!
//! ```bash
//! cargo run --release --example fiber_resolvent_residual
//! ```

use num_complex::Complex64;

use singspec::decompose::decompose_periodic;
use singspec::distribution::DistributionW1;
use singspec::floquet::CellOperator;
use singspec::galerkin::fiber_residual;

fn main() -> singspec::Result<()> {
    let st = decompose_periodic(&DistributionW1::delta_comb(1.0, 1.0)?, 1.0)?;
    let cell = CellOperator::new(st.sigma, st.tau, 1e-10)?;

    let theta = 2.1;
    let lambda = Complex64::new(3.0, 1.2);
    let f = |t: f64| Complex64::new(1.0 - 0.5 * t, 0.25 * t * t);

    let r = cell.fiber_resolvent(theta, lambda, &f)?;
    println!("theta = {theta}, lambda = {lambda}");
    println!("correction coefficients: alpha1 = {:.6}, alpha2 = {:.6}", r.alpha1, r.alpha2);
    println!("system determinant d(theta) = {:.6} (|d| = {:.3e})", r.d_theta, r.d_theta.norm());

    let z = Complex64::from_polar(1.0, theta);
    let w0 = r.w[0];
    let w1 = *r.w.last().unwrap();
    println!(
        "boundary check: |w(1) - z w(0)| = {:.3e}, |w1(1) - z w1(0)| = {:.3e}",
        (w1 - z * w0).norm(),
        (*r.w_qd.last().unwrap() - z * r.w_qd[0]).norm()
    );

    let residuals = fiber_residual(cell.sigma(), cell.tau(), &r, &f);
    let max_res = residuals.iter().cloned().fold(0.0f64, f64::max);
    println!(
        "residual |l(w) - lambda w - f| at {} interior points: max {max_res:.3e}",
        residuals.len()
    );

    println!("\nsample of w on the cell:");
    for (t, w) in r.nodes.iter().zip(&r.w).step_by(r.nodes.len() / 8) {
        println!("  w({t:>6.4}) = {:>9.6} + {:>9.6} i", w.re, w.im);
    }
    Ok(())
}
