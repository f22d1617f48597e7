//! Constructive decomposition `f = sigma' + tau`.
//!
//! Any first-order distribution whose unit-window dual norms are uniformly
//! bounded splits into a locally square-integrable `sigma` and a bounded
//! step function `tau`. The construction is window-by-window: with the
//! quadratic bump `phi` (a partition of unity under integer translates),
//! each localization `f phi_n` minus its mean-matching box
//! `a_n chi_[n-1/2, n+1/2)` has zero total mass and compact support, so it
//! is the derivative of a unique function `sigma_n` vanishing outside
//! `[n-1, n+1]`. Summing windows gives `sigma = sum sigma_n` and
//! `tau = sum a_n chi_n`.
//!
//! For a periodic input a single window suffices: `sigma` is the
//! periodization of `sigma_0` (normalized to zero mean over one period) and
//! `tau` is the constant `a_0`. Other periods are handled by rescaling to
//! the unit cell and back.

use crate::distribution::{pair, DistributionW1, TestFunction};
use crate::error::{Error, Result};
use crate::piecewise::PiecewiseFunction;
use crate::poly::Poly;

/// The quadratic bump: `2(t+1)^2` on `[-1,-1/2)`, `1-2t^2` on `[-1/2,1/2)`,
/// `2(t-1)^2` on `[1/2,1]`, zero elsewhere. Integer translates sum to one.
pub fn bump() -> PiecewiseFunction {
    PiecewiseFunction::compact(
        vec![-1.0, -0.5, 0.5, 1.0],
        vec![
            Poly::from_coeffs(vec![2.0, 4.0, 2.0]),
            Poly::from_coeffs(vec![1.0, 0.0, -2.0]),
            Poly::from_coeffs(vec![2.0, -4.0, 2.0]),
        ],
    )
    .expect("bump pieces are valid")
}

pub fn bump_phi(t: f64) -> f64 {
    bump().evaluate(t)
}

/// The bump translated to window `n`, as a test function.
pub fn bump_test_function(n: i64) -> TestFunction {
    TestFunction::new(bump().translate(n as f64)).expect("bump is continuous and compact")
}

/// One window of the construction.
#[derive(Debug, Clone)]
pub struct WindowPiece {
    pub n: i64,
    pub a_n: f64,
    pub sigma_n: PiecewiseFunction,
}

/// Decomposition output with the window coefficients that produced it.
#[derive(Debug, Clone)]
pub struct SigmaTau {
    pub sigma: PiecewiseFunction,
    pub tau: PiecewiseFunction,
    pub provenance: Vec<(i64, f64)>,
}

impl SigmaTau {
    pub fn zero() -> Self {
        SigmaTau {
            sigma: PiecewiseFunction::zero(),
            tau: PiecewiseFunction::zero(),
            provenance: Vec::new(),
        }
    }

    /// `sigma' + tau` as a distribution, for round-trip checks.
    pub fn as_distribution(&self) -> DistributionW1 {
        DistributionW1::from_sigma_tau(self.sigma.clone(), self.tau.clone())
    }

    pub fn sup_abs_tau(&self) -> f64 {
        self.provenance.iter().fold(0.0f64, |m, &(_, a)| m.max(a.abs()))
    }
}

/// `a_n = <f phi_n, 1>`, computed as the pairing of `f` against `phi_n`.
pub fn window_coefficient(f: &DistributionW1, n: i64) -> f64 {
    pair(f, &bump_test_function(n))
}

/// `f phi_n` in the same representation, supported in `[n-1, n+1]`:
/// `(g phi_n)' - g phi_n' + h phi_n + sum c_k phi_n(x_k) delta_{x_k}`.
pub fn localize(f: &DistributionW1, n: i64) -> Result<DistributionW1> {
    let (a, b) = (n as f64 - 1.0, n as f64 + 1.0);
    let phi_n = bump().translate(n as f64);
    let dphi_n = phi_n.derivative();

    let g_mat = f.g().materialize(a, b);
    let h_mat = f.h().materialize(a, b);
    let g_loc = g_mat.mul(&phi_n)?;
    let h_loc = h_mat.mul(&phi_n)?.sub(&g_mat.mul(&dphi_n)?)?;

    let mut atoms = Vec::new();
    match f.period() {
        None => {
            for &(x, c) in f.atoms() {
                let w = c * phi_n.evaluate(x);
                if x > a && x < b && w != 0.0 {
                    atoms.push((x, w));
                }
            }
        }
        Some(t) => {
            for &(x, c) in f.atoms() {
                let k_lo = ((a - x) / t).ceil() as i64;
                let k_hi = ((b - x) / t).floor() as i64;
                for k in k_lo..=k_hi {
                    let y = x + k as f64 * t;
                    let w = c * phi_n.evaluate(y);
                    if y > a && y < b && w != 0.0 {
                        atoms.push((y, w));
                    }
                }
            }
        }
    }
    DistributionW1::new(g_loc, h_loc, atoms, None)
}

/// Step function with jumps `c_k` at `x_k` (zero far left).
fn step_sum(atoms: &[(f64, f64)]) -> PiecewiseFunction {
    if atoms.is_empty() {
        return PiecewiseFunction::zero();
    }
    let mut sorted = atoms.to_vec();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let breakpoints: Vec<f64> = sorted.iter().map(|&(x, _)| x).collect();
    let mut pieces = Vec::with_capacity(sorted.len().saturating_sub(1));
    let mut acc = 0.0;
    for (i, &(_, c)) in sorted.iter().enumerate() {
        acc += c;
        if i + 1 < sorted.len() {
            pieces.push(Poly::constant(acc));
        }
    }
    PiecewiseFunction::aperiodic(breakpoints, pieces, Poly::zero(), Poly::constant(acc))
        .expect("step function breakpoints are sorted")
}

/// The window piece: `sigma_n` is the unique antiderivative of
/// `f phi_n - a_n chi_[n-1/2, n+1/2)` vanishing outside `[n-1, n+1]`.
pub fn local_sigma(f: &DistributionW1, n: i64) -> Result<WindowPiece> {
    let a_n = window_coefficient(f, n);
    let loc = localize(f, n)?;
    let (lo, hi) = (n as f64 - 1.0, n as f64 + 1.0);
    let chi = PiecewiseFunction::compact(
        vec![n as f64 - 0.5, n as f64 + 0.5],
        vec![Poly::constant(a_n)],
    )?;
    let h_n = loc.h().sub(&chi)?;

    let cumulative = h_n.antiderivative(None)?;
    let sigma_raw = loc.g().add(&cumulative)?.add(&step_sum(loc.atoms()))?;

    let end_value = sigma_raw.evaluate(hi);
    let scale = 1.0 + a_n.abs() + sigma_raw.evaluate(n as f64).abs();
    if end_value.abs() > 1e-10 * scale {
        return Err(Error::Consistency(format!(
            "window {n}: local antiderivative does not vanish at {hi} (value {end_value:.3e}); \
             the zero-mean balance <f phi_n - a_n chi, 1> = 0 failed"
        )));
    }
    let sigma_n = sigma_raw.materialize(lo, hi);
    Ok(WindowPiece { n, a_n, sigma_n })
}

/// Window-by-window decomposition of an aperiodic distribution whose
/// support lies in `[n_min, n_max]`.
pub fn decompose(f: &DistributionW1, n_min: i64, n_max: i64) -> Result<SigmaTau> {
    if f.period().is_some() {
        return Err(Error::Invalid(
            "periodic input: use decompose_periodic".into(),
        ));
    }
    if n_min > n_max {
        return Err(Error::Invalid("empty window range".into()));
    }
    let hull = f.support_hull()?;
    let Some((lo, hi)) = hull else {
        return Ok(SigmaTau::zero());
    };
    if lo < n_min as f64 - 1e-12 || hi > n_max as f64 + 1e-12 {
        return Err(Error::SupportNotCovered {
            support_lo: lo,
            support_hi: hi,
            n_min,
            n_max,
        });
    }

    let mut sigma = PiecewiseFunction::zero();
    let mut provenance = Vec::new();
    let mut tau_pieces = Vec::new();
    let mut tau_breaks = Vec::new();
    for n in n_min..=n_max {
        let window_touches_support = (n as f64 + 1.0) > lo && (n as f64 - 1.0) < hi;
        let piece = if window_touches_support {
            local_sigma(f, n)?
        } else {
            WindowPiece {
                n,
                a_n: 0.0,
                sigma_n: PiecewiseFunction::zero(),
            }
        };
        provenance.push((n, piece.a_n));
        tau_breaks.push(n as f64 - 0.5);
        tau_pieces.push(Poly::constant(piece.a_n));
        if !piece.sigma_n.is_identically_zero() {
            sigma = sigma.add(&piece.sigma_n)?;
        }
    }
    tau_breaks.push(n_max as f64 + 0.5);
    let tau = PiecewiseFunction::compact(tau_breaks, tau_pieces)?;
    Ok(SigmaTau {
        sigma,
        tau,
        provenance,
    })
}

/// Periodic specialization: one window, periodized and rescaled.
/// `sigma` is normalized to zero mean over one period; `tau` is constant.
pub fn decompose_periodic(f: &DistributionW1, period: f64) -> Result<SigmaTau> {
    let Some(t) = f.period() else {
        return Err(Error::Invalid("decompose_periodic needs a periodic input".into()));
    };
    if (t - period).abs() > 1e-12 * (1.0 + period) {
        return Err(Error::Invalid(format!(
            "declared period {period} does not match the distribution's period {t}"
        )));
    }
    if f.is_zero() {
        return Ok(SigmaTau::zero());
    }

    if (period - 1.0).abs() <= 1e-12 {
        let piece = local_sigma(f, 0)?;
        let shifted = piece.sigma_n.translate(1.0);
        let cell = piece.sigma_n.add(&shifted)?.materialize(0.0, 1.0);
        let mut breakpoints = Vec::new();
        let mut pieces = Vec::new();
        for s in cell.segments_on(0.0, 1.0) {
            breakpoints.push(s.lo);
            pieces.push(s.poly.clone());
        }
        let mut sigma = PiecewiseFunction::periodic(breakpoints, pieces, 1.0)?;
        let mean = sigma.integral(0.0, 1.0);
        sigma = sigma.sub(&PiecewiseFunction::constant(mean))?;
        let tau = PiecewiseFunction::periodic(vec![0.0], vec![Poly::constant(piece.a_n)], 1.0)?;
        return Ok(SigmaTau {
            sigma,
            tau,
            provenance: vec![(0, piece.a_n)],
        });
    }

    // rescale to the unit cell, decompose, and scale back:
    // sigma(t) = T sigma_hat(t/T), tau = tau_hat
    let unit = f.to_unit_period()?;
    let st = decompose_periodic(&unit, 1.0)?;
    let sigma = st.sigma.scale_x(period).scale(period);
    let tau_val = st.provenance[0].1;
    let tau = PiecewiseFunction::periodic(vec![0.0], vec![Poly::constant(tau_val)], period)?;
    Ok(SigmaTau {
        sigma,
        tau,
        provenance: st.provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_values() {
        assert_eq!(bump_phi(0.0), 1.0);
        assert_eq!(bump_phi(-1.0), 0.0);
        assert_eq!(bump_phi(1.0), 0.0);
        assert!((bump_phi(0.25) - 0.875).abs() < 1e-15);
        assert!((bump_phi(-0.75) - 0.125).abs() < 1e-15);
        assert!((bump_phi(0.25) + bump_phi(0.25 - 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bump_integral_is_one() {
        // forced by the partition of unity: integral phi = integral_0^1 sum phi(t-n) dt = 1
        let phi = bump();
        assert!((phi.integral(-1.0, 1.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn partition_of_unity_symbolic() {
        // sum of the two translates covering [0,1] is the constant 1
        let phi = bump();
        let total = phi.add(&phi.translate(1.0)).unwrap();
        let on_cell = total.materialize(0.0, 1.0);
        let one = PiecewiseFunction::compact(vec![0.0, 1.0], vec![Poly::constant(1.0)]).unwrap();
        let diff = on_cell.sub(&one).unwrap();
        for s in diff.segments_on(0.0, 1.0) {
            assert!(s.poly.max_abs_coeff() < 1e-12, "not a partition of unity: {s:?}");
        }
    }

    #[test]
    fn window_coefficient_of_delta() {
        let d = DistributionW1::delta(0.0, 1.0);
        assert!((window_coefficient(&d, 0) - 1.0).abs() < 1e-14);
        assert_eq!(window_coefficient(&d, 1), 0.0);
        assert_eq!(window_coefficient(&DistributionW1::zero(), 7), 0.0);
    }

    #[test]
    fn localize_examples() {
        let d = DistributionW1::delta(0.0, 1.0);
        let loc = localize(&d, 0).unwrap();
        assert_eq!(loc.atoms(), &[(0.0, 1.0)]);
        assert!(loc.g().is_identically_zero());
        assert!(loc.h().is_identically_zero());

        let z = localize(&DistributionW1::zero(), 5).unwrap();
        assert!(z.is_zero());

        let one = DistributionW1::from_h(PiecewiseFunction::constant(1.0));
        let loc1 = localize(&one, 0).unwrap();
        let phi = bump();
        for &t in &[-0.9, -0.3, 0.0, 0.4, 0.8] {
            assert!((loc1.h().evaluate(t) - phi.evaluate(t)).abs() < 1e-14);
        }
    }

    #[test]
    fn local_sigma_of_delta_matches_closed_form() {
        let d = DistributionW1::delta(0.0, 1.0);
        let w = local_sigma(&d, 0).unwrap();
        assert!((w.a_n - 1.0).abs() < 1e-14);
        // 0 on [-1,-1/2], -(t+1/2) on (-1/2,0), 1/2-t on [0,1/2), 0 on [1/2,1]
        assert_eq!(w.sigma_n.evaluate(-0.75), 0.0);
        assert!((w.sigma_n.evaluate(-0.25) + 0.25).abs() < 1e-14);
        assert!((w.sigma_n.evaluate(0.0) - 0.5).abs() < 1e-14);
        assert!((w.sigma_n.evaluate(0.25) - 0.25).abs() < 1e-14);
        assert_eq!(w.sigma_n.evaluate(0.75), 0.0);
        assert_eq!(w.sigma_n.evaluate(1.5), 0.0);
    }

    #[test]
    fn local_sigma_of_constant_h() {
        // a_0 = integral phi = 1; sigma_0 = antiderivative of (phi - chi)
        let one = DistributionW1::from_h(PiecewiseFunction::constant(1.0));
        let w = local_sigma(&one, 0).unwrap();
        assert!((w.a_n - 1.0).abs() < 1e-14);
        assert!((w.sigma_n.evaluate(-0.5) - 1.0 / 12.0).abs() < 1e-14);
        assert!(w.sigma_n.evaluate(0.0).abs() < 1e-14);
        assert!((w.sigma_n.evaluate(0.5) + 1.0 / 12.0).abs() < 1e-14);
        assert!(w.sigma_n.evaluate(1.0).abs() < 1e-12);
    }

    #[test]
    fn decompose_delta_round_trip() {
        let d = DistributionW1::delta(0.0, 1.0);
        let st = decompose(&d, -2, 2).unwrap();
        // tau is the unit box on [-1/2, 1/2)
        assert!((st.tau.evaluate(0.0) - 1.0).abs() < 1e-14);
        assert_eq!(st.tau.evaluate(0.75), 0.0);
        for (i, psi) in [
            TestFunction::hat(0.0, 1.0),
            TestFunction::hat(0.3, 0.7),
            TestFunction::plateau(-1.5, -0.5, 0.5, 1.5).unwrap(),
        ]
        .iter()
        .enumerate()
        {
            let lhs = pair(&d, psi);
            let rhs = pair(&st.as_distribution(), psi);
            assert!((lhs - rhs).abs() < 1e-10, "psi {i}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn decompose_zero() {
        let st = decompose(&DistributionW1::zero(), -5, 5).unwrap();
        assert!(st.sigma.is_identically_zero());
        assert!(st.tau.is_identically_zero());
    }

    #[test]
    fn decompose_heaviside_derivative() {
        let g = PiecewiseFunction::aperiodic(
            vec![0.0, 1.0],
            vec![Poly::constant(1.0)],
            Poly::zero(),
            Poly::zero(),
        )
        .unwrap();
        // g = indicator of [0,1): g' = delta_0 - delta_1
        let f = DistributionW1::from_g(g);
        let st = decompose(&f, -2, 3).unwrap();
        for psi in [TestFunction::hat(0.0, 0.8), TestFunction::hat(1.0, 0.9)] {
            assert!((pair(&f, &psi) - pair(&st.as_distribution(), &psi)).abs() < 1e-10);
        }
    }

    #[test]
    fn decompose_rejects_uncovered_support() {
        let d = DistributionW1::delta(5.0, 1.0);
        assert!(matches!(
            decompose(&d, -2, 2),
            Err(Error::SupportNotCovered { .. })
        ));
    }

    #[test]
    fn decompose_periodic_delta_comb() {
        let comb = DistributionW1::delta_comb(1.0, 1.0).unwrap();
        let st = decompose_periodic(&comb, 1.0).unwrap();
        assert!((st.tau.evaluate(0.3) - 1.0).abs() < 1e-13);
        // sigma = 1/2 - t on [0,1), already zero-mean
        for &t in &[0.1, 0.4, 0.9] {
            assert!((st.sigma.evaluate(t) - (0.5 - t)).abs() < 1e-12, "t = {t}");
            assert!((st.sigma.evaluate(t + 1.0) - st.sigma.evaluate(t)).abs() < 1e-13);
        }
        assert_eq!(st.sigma.period(), Some(1.0));
    }

    #[test]
    fn decompose_periodic_rescales() {
        // comb with spacing a: sigma = alpha/2 - alpha t / a on [0, a)
        let alpha = 2.0;
        let a = 0.5;
        let comb = DistributionW1::delta_comb(alpha, a).unwrap();
        let st = decompose_periodic(&comb, a).unwrap();
        assert!((st.tau.evaluate(0.2) - alpha / a).abs() < 1e-12);
        for &t in &[0.05, 0.2, 0.4] {
            let want = alpha / 2.0 - alpha * t / a;
            assert!((st.sigma.evaluate(t) - want).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn decompose_periodic_constant() {
        let c = 3.25;
        let h = PiecewiseFunction::periodic(vec![0.0], vec![Poly::constant(c)], 1.0).unwrap();
        let f = DistributionW1::from_h(h);
        let st = decompose_periodic(&f, 1.0).unwrap();
        assert!((st.tau.evaluate(0.7) - c).abs() < 1e-12);
        assert!(
            st.sigma.is_identically_zero() || st.sigma.norm_l2_unif().unwrap() < 1e-12,
            "sigma should vanish after zero-mean normalization"
        );
    }

    #[test]
    fn sigma_windows_have_declared_support() {
        let d = DistributionW1::delta(0.25, -1.5);
        for n in -1..=1 {
            let w = local_sigma(&d, n).unwrap();
            if let Some((lo, hi)) = w.sigma_n.compact_support() {
                assert!(lo >= n as f64 - 1.0 - 1e-12 && hi <= n as f64 + 1.0 + 1e-12);
            }
        }
    }
}
