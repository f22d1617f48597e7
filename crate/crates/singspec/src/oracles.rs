//! Independent closed-form references used to cross-validate the main
//! computational paths. Nothing here calls the quasi-derivative integrator,
//! the decomposition, or the Galerkin assembly.
//!
//! ## Free propagation
//!
//! For `-u'' = lambda u` the fundamental matrix over an interval of length
//! `L` in `(u', u)` coordinates is, with `k = sqrt(lambda)`,
//!
//! ```text
//! F(L) = [ cos kL     -k sin kL ]
//!        [ sin kL / k   cos kL  ]
//! ```
//!
//! All three entry functions are entire in `lambda` (even in `k`), so the
//! branch of the square root is irrelevant; near `lambda = 0` they are
//! evaluated by their power series. Note `-k sin kL = -lambda (sin kL)/k`,
//! which gives `det F = cos^2 + lambda (sin/k)^2 = 1` identically.
//!
//! ## Delta lattice transfer matrix
//!
//! A lattice of delta interactions of weight `alpha` and spacing `a`
//! imposes the jump `u'(na+) - u'(na-) = alpha u(na)` while `u` stays
//! continuous, i.e. the matrix `J = [[1, alpha], [0, 1]]` in `(u', u)`
//! coordinates. One period starting just right of a lattice point is free
//! propagation followed by one jump:
//!
//! ```text
//! M_cl = J F(a) = [ cos ka + alpha sin(ka)/k,  -k sin ka + alpha cos ka ]
//!                 [ sin(ka)/k,                  cos ka                  ]
//! ```
//!
//! hence the frozen trace formula
//!
//! ```text
//! tr M_cl = 2 cos ka + alpha sin(ka)/k     (limit 2 + alpha a at lambda -> 0).
//! ```
//!
//! The main path computes monodromies in `(u^[1], u) = (u' - sigma u, u)`
//! coordinates. With `s0 = sigma(0+)` (equal to `sigma(1+)` by
//! periodicity), the change of basis at both cell ends is
//! `C = [[1, -s0], [0, 1]]`, so `M_quasi = C M_cl C^{-1}` — same trace and
//! determinant, different off-diagonal entries.

use num_complex::Complex64;

use crate::distribution::{DistributionW1, TestFunction};
use crate::error::{Error, Result};
use crate::quasi_ode::Monodromy;

/// Kronig-Penney model: weight `alpha`, lattice spacing `a`.
#[derive(Debug, Clone, Copy)]
pub struct KPModel {
    pub alpha: f64,
    pub a: f64,
}

/// `(cos kL, -k sin kL, sin kL / k)` as entire functions of `lambda`.
fn propagation_entries(lambda: Complex64, len: f64) -> (Complex64, Complex64, Complex64) {
    let x = lambda * len * len;
    if x.norm() < 1e-4 {
        // cos sqrt(x), sinc sqrt(x); truncation error below 1e-19 here
        let c = Complex64::new(1.0, 0.0) - x / 2.0 + x * x / 24.0 - x * x * x / 720.0;
        let sinc = Complex64::new(1.0, 0.0) - x / 6.0 + x * x / 120.0 - x * x * x / 5040.0;
        let s = sinc * len;
        (c, -lambda * s, s)
    } else {
        let k = lambda.sqrt();
        let c = (k * len).cos();
        let s = (k * len).sin() / k;
        (c, -lambda * s, s)
    }
}

/// Free monodromy over the unit cell:
/// `[[cos k, -k sin k], [sin k / k, cos k]]`, `k = sqrt(lambda)`.
pub fn free_monodromy(lambda: Complex64) -> Monodromy {
    let (c, ms, s) = propagation_entries(lambda, 1.0);
    Monodromy {
        m11: c,
        m12: ms,
        m21: s,
        m22: c,
    }
}

/// One-period transfer matrix `J F(a)` of the delta lattice in `(u', u)`
/// coordinates, mapping the state just right of a lattice point across one
/// period.
pub fn kp_transfer_matrix(model: KPModel, lambda: f64) -> Monodromy {
    let (c, ms, s) = propagation_entries(Complex64::new(lambda, 0.0), model.a);
    let alpha = Complex64::new(model.alpha, 0.0);
    Monodromy {
        m11: c + alpha * s,
        m12: ms + alpha * c,
        m21: s,
        m22: c,
    }
}

/// Frozen trace formula `2 cos ka + alpha sin(ka)/k`.
pub fn kp_trace(model: KPModel, lambda: f64) -> f64 {
    let (c, _, s) = propagation_entries(Complex64::new(lambda, 0.0), model.a);
    (2.0 * c + Complex64::new(model.alpha, 0.0) * s).re
}

/// Conjugate a classical-coordinate matrix into quasi-derivative
/// coordinates: `C M C^{-1}` with `C = [[1, -sigma0], [0, 1]]`.
pub fn conjugate_to_quasi(m: &Monodromy, sigma0: f64) -> Monodromy {
    let s0 = Complex64::new(sigma0, 0.0);
    let a = m.m11 - s0 * m.m21;
    let b = m.m12 - s0 * m.m22;
    Monodromy {
        m11: a,
        m12: a * s0 + b,
        m21: m.m21,
        m22: m.m21 * s0 + m.m22,
    }
}

/// Adaptive-quadrature pairing `-int g psi' + int h psi + sum c_k psi(x_k)`,
/// independent of the exact piecewise integrator.
pub fn quad_pair(f: &DistributionW1, psi: &TestFunction, tol: f64) -> Result<f64> {
    let Some((s0, s1)) = psi.support() else {
        return Ok(0.0);
    };
    let (a, b) = (s0 - 0.25, s1 + 0.25);
    let g = f.g().materialize(a, b);
    let h = f.h().materialize(a, b);
    let dpsi = psi.derivative();

    // panels split at every breakpoint so the integrand is smooth inside
    let mut cuts: Vec<f64> = vec![a, b];
    for part in [&g, &h] {
        cuts.extend(part.breakpoints().iter().copied().filter(|&x| x > a && x < b));
    }
    cuts.extend(
        psi.underlying()
            .breakpoints()
            .iter()
            .copied()
            .filter(|&x| x > a && x < b),
    );
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-13 * (1.0 + y.abs()));

    let integrand = |t: f64| -g.evaluate(t) * dpsi.evaluate(t) + h.evaluate(t) * psi.evaluate(t);
    let total_len = b - a;
    let mut acc = 0.0;
    for w in cuts.windows(2) {
        let panel_tol = tol * (w[1] - w[0]) / total_len;
        acc += adaptive_simpson(&integrand, w[0], w[1], panel_tol)?;
    }

    match f.period() {
        None => {
            for &(x, c) in f.atoms() {
                if x >= s0 && x <= s1 {
                    acc += c * psi.evaluate(x);
                }
            }
        }
        Some(t) => {
            for &(x, c) in f.atoms() {
                let n_lo = ((s0 - x) / t).ceil() as i64;
                let n_hi = ((s1 - x) / t).floor() as i64;
                for n in n_lo..=n_hi {
                    acc += c * psi.evaluate(x + n as f64 * t);
                }
            }
        }
    }
    Ok(acc)
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        // the second disjunct is the rounding floor of the refinement test
        if delta.abs() <= 15.0 * tol || delta.abs() <= 1e-14 * (1.0 + whole.abs()) {
            return Ok(left + right + delta / 15.0);
        }
        if depth == 0 {
            return Err(Error::QuadratureTolerance {
                tol,
                residual: delta.abs(),
            });
        }
        Ok(recurse(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)?
            + recurse(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)?)
    }
    if b - a <= 0.0 {
        return Ok(0.0);
    }
    let (fa, fb) = (f(a), f(b));
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol.max(1e-15), 48)
}
