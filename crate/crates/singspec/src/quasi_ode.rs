//! Integration of the first-order quasi-derivative system.
//!
//! For a potential `sigma' + tau` the second-order eigenvalue equation is
//! rewritten with the quasi-derivative `u^[1] = u' - sigma u` as
//!
//! ```text
//! d/dt [u^[1]]   [ -sigma   -sigma^2 + tau - lambda ] [u^[1]]
//!      [  u   ] = [   1              sigma          ] [  u  ]
//! ```
//!
//! Both components stay absolutely continuous across jumps of `sigma`; a
//! delta interaction is nothing but such a jump. The trace of the system
//! matrix vanishes, so fundamental matrices have unit determinant.
//!
//! The integrator is an adaptive Dormand-Prince 5(4) pair with error-per-
//! unit-step control; steps never cross a breakpoint of `sigma` or `tau`
//! (each smooth segment is integrated with its own polynomial
//! coefficients). The Prüfer angle `theta = arg(u^[1] + i u)` of a tracked
//! solution satisfies
//!
//! ```text
//! theta' = lambda sin^2 theta - tau sin^2 theta + (cos theta + sigma sin theta)^2,
//! ```
//!
//! which is integrated with the same machinery; its value at t = 1 is
//! strictly increasing in real `lambda`, the working horse of eigenvalue
//! counting. Initial angle conventions: `theta0 = 0` tracks the solution
//! with `u(0) = 0` (Dirichlet start), `theta0 = pi/2` tracks the one with
//! `(u^[1], u)(0) = (0, 1)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::piecewise::PiecewiseFunction;
use crate::poly::Poly;

/// State of the quasi-derivative system: `(u^[1], u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiState {
    pub qd: Complex64,
    pub u: Complex64,
}

impl QuasiState {
    pub fn new(qd: Complex64, u: Complex64) -> Self {
        QuasiState { qd, u }
    }

    pub fn real(qd: f64, u: f64) -> Self {
        QuasiState {
            qd: Complex64::new(qd, 0.0),
            u: Complex64::new(u, 0.0),
        }
    }
}

/// Coefficients of the system: `sigma`, `tau` and the spectral parameter.
#[derive(Debug, Clone)]
pub struct Coefficients {
    pub sigma: PiecewiseFunction,
    pub tau: PiecewiseFunction,
    pub lambda: Complex64,
}

impl Coefficients {
    pub fn new(sigma: PiecewiseFunction, tau: PiecewiseFunction, lambda: Complex64) -> Self {
        Coefficients { sigma, tau, lambda }
    }

    pub fn free(lambda: Complex64) -> Self {
        Coefficients {
            sigma: PiecewiseFunction::zero(),
            tau: PiecewiseFunction::zero(),
            lambda,
        }
    }

    pub fn with_lambda(&self, lambda: Complex64) -> Self {
        Coefficients {
            sigma: self.sigma.clone(),
            tau: self.tau.clone(),
            lambda,
        }
    }
}

/// One-period fundamental matrix in `(u^[1], u)` coordinates:
/// `[[v1^[1](1), v2^[1](1)], [v1(1), v2(1)]]`.
#[derive(Debug, Clone, Copy)]
pub struct Monodromy {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

impl Monodromy {
    pub fn det(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn trace(&self) -> Complex64 {
        self.m11 + self.m22
    }

    /// Apply to a state: columns act on `(x^[1](0), x(0))`.
    pub fn apply(&self, x: QuasiState) -> QuasiState {
        QuasiState {
            qd: self.m11 * x.qd + self.m12 * x.u,
            u: self.m21 * x.qd + self.m22 * x.u,
        }
    }
}

/// Prüfer angle advanced over the period cell.
#[derive(Debug, Clone, Copy)]
pub struct PrueferTrajectory {
    pub theta0: f64,
    pub theta1: f64,
}

/// Dirichlet pair on the cell with Wronskian
/// `u1 u2^[1] - u1^[1] u2` normalized to exactly one.
#[derive(Debug, Clone)]
pub struct DirichletSolutions {
    pub nodes: Vec<f64>,
    pub u1: Vec<QuasiState>,
    pub u2: Vec<QuasiState>,
    pub u1_at_1: Complex64,
    pub u2_at_0: Complex64,
    pub u1_qd_at_0: Complex64,
    pub u2_qd_at_1: Complex64,
}

impl DirichletSolutions {
    /// Wronskian at sample index `i` (should be 1 for all `i`).
    pub fn wronskian(&self, i: usize) -> Complex64 {
        self.u1[i].u * self.u2[i].qd - self.u1[i].qd * self.u2[i].u
    }
}

// ---------------------------------------------------------------------------
// breakpoint-aware segments
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub(crate) struct Seg {
    pub lo: f64,
    pub hi: f64,
    pub sigma: Poly,
    pub tau: Poly,
}

#[derive(Debug, Clone)]
pub(crate) struct CoeffSegments {
    pub segs: Vec<Seg>,
}

impl CoeffSegments {
    pub fn build(sigma: &PiecewiseFunction, tau: &PiecewiseFunction, t0: f64, t1: f64) -> Self {
        let s_segs = sigma.segments_on(t0, t1);
        let t_segs = tau.segments_on(t0, t1);
        let mut cuts: Vec<f64> = Vec::new();
        for s in s_segs.iter().chain(t_segs.iter()) {
            cuts.push(s.lo);
            cuts.push(s.hi);
        }
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * (1.0 + b.abs()));
        let locate = |segs: &[crate::piecewise::Segment], mid: f64| -> Poly {
            segs.iter()
                .find(|s| mid >= s.lo && mid < s.hi)
                .map(|s| s.poly.clone())
                .unwrap_or_else(Poly::zero)
        };
        let mut segs = Vec::with_capacity(cuts.len().saturating_sub(1));
        for w in cuts.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            segs.push(Seg {
                lo: w[0],
                hi: w[1],
                sigma: locate(&s_segs, mid),
                tau: locate(&t_segs, mid),
            });
        }
        CoeffSegments { segs }
    }
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4)
// ---------------------------------------------------------------------------

const STAGE_OFFSETS: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [0.2];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const A7: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
const ERR_W: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const MIN_STEP: f64 = 1e-14;
const MAX_STEPS: usize = 1_000_000;

fn axpy<const N: usize>(
    y: &[Complex64; N],
    h: f64,
    weights: &[f64],
    ks: &[[Complex64; N]],
) -> [Complex64; N] {
    let mut out = *y;
    for (w, k) in weights.iter().zip(ks.iter()) {
        if *w != 0.0 {
            for i in 0..N {
                out[i] += h * w * k[i];
            }
        }
    }
    out
}

/// Adaptive integration over one smooth span `[t0, t1]`.
fn rk_adaptive<const N: usize>(
    mut rhs: impl FnMut(f64, &[Complex64; N]) -> [Complex64; N],
    t0: f64,
    t1: f64,
    y0: [Complex64; N],
    tol: f64,
) -> Result<[Complex64; N]> {
    debug_assert!(t1 > t0);
    let mut t = t0;
    let mut y = y0;
    let mut h = t1 - t0;
    let mut k1 = rhs(t, &y);
    for _ in 0..MAX_STEPS {
        if t >= t1 - 1e-15 * (1.0 + t1.abs()) {
            return Ok(y);
        }
        h = h.min(t1 - t);
        if h < MIN_STEP * (1.0 + t.abs()) {
            return Err(Error::IntegrationFailure { t, step: h });
        }
        let k2 = rhs(t + STAGE_OFFSETS[1] * h, &axpy(&y, h, &A2, &[k1]));
        let k3 = rhs(t + STAGE_OFFSETS[2] * h, &axpy(&y, h, &A3, &[k1, k2]));
        let k4 = rhs(t + STAGE_OFFSETS[3] * h, &axpy(&y, h, &A4, &[k1, k2, k3]));
        let k5 = rhs(t + STAGE_OFFSETS[4] * h, &axpy(&y, h, &A5, &[k1, k2, k3, k4]));
        let k6 = rhs(t + h, &axpy(&y, h, &A6, &[k1, k2, k3, k4, k5]));
        let y1 = axpy(&y, h, &A7, &[k1, k2, k3, k4, k5, k6]);
        let k7 = rhs(t + h, &y1);

        let ks = [k1, k2, k3, k4, k5, k6, k7];
        let mut err: f64 = 0.0;
        for i in 0..N {
            let mut e = Complex64::new(0.0, 0.0);
            for (w, k) in ERR_W.iter().zip(ks.iter()) {
                e += *w * k[i];
            }
            let scale = 1.0 + y[i].norm().max(y1[i].norm());
            err = err.max((h * e).norm() / scale);
        }

        // error-per-unit-step acceptance keeps the global error near tol
        let target = tol * h;
        if err <= target {
            t += h;
            y = y1;
            k1 = k7; // first-same-as-last
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * (target / err).powf(0.25)).clamp(0.2, 5.0)
            };
            h *= factor;
        } else {
            h *= (0.9 * (target / err).powf(0.25)).clamp(0.1, 0.9);
        }
    }
    Err(Error::IntegrationFailure { t, step: h })
}

/// Integrate across segments, landing exactly on every requested output
/// point (sorted, within the overall span). Returns states at the outputs.
fn integrate_segmented<const N: usize>(
    segs: &CoeffSegments,
    rhs: impl Fn(&Seg, f64, &[Complex64; N]) -> [Complex64; N] + Copy,
    y0: [Complex64; N],
    tol: f64,
    outputs: &[f64],
) -> Result<Vec<[Complex64; N]>> {
    let mut results = Vec::with_capacity(outputs.len());
    let mut y = y0;
    let mut out_iter = outputs.iter().copied().peekable();
    let eps = 1e-13;
    while let Some(&x) = out_iter.peek() {
        if segs.segs.first().map_or(true, |s| x <= s.lo + eps) {
            results.push(y);
            out_iter.next();
        } else {
            break;
        }
    }
    for seg in &segs.segs {
        let mut t = seg.lo;
        loop {
            let next_out = out_iter.peek().copied().filter(|&x| x <= seg.hi + eps);
            let stop = next_out.map_or(seg.hi, |x| x.min(seg.hi));
            if stop > t + eps {
                y = rk_adaptive(|tt, yy| rhs(seg, tt, yy), t, stop, y, tol)?;
                t = stop;
            }
            if let Some(x) = next_out {
                if x <= t + eps {
                    results.push(y);
                    out_iter.next();
                    continue;
                }
            }
            if t >= seg.hi - eps {
                break;
            }
        }
    }
    for _ in out_iter {
        results.push(y);
    }
    Ok(results)
}

fn system_rhs(seg: &Seg, lambda: Complex64, t: f64, y: &[Complex64; 2]) -> [Complex64; 2] {
    let s = seg.sigma.eval(t);
    let tau = seg.tau.eval(t);
    let qd = y[0];
    let u = y[1];
    [
        -s * qd + (Complex64::new(tau - s * s, 0.0) - lambda) * u,
        qd + s * u,
    ]
}

/// Advance `(u^[1], u)` from `t0` to `t1`.
pub fn integrate_system(
    c: &Coefficients,
    t0: f64,
    t1: f64,
    x0: QuasiState,
    tol: f64,
) -> Result<QuasiState> {
    let states = integrate_system_with_outputs(c, t0, t1, x0, tol, &[t1])?;
    Ok(states[0])
}

/// Advance the system recording the state at each output point.
pub fn integrate_system_with_outputs(
    c: &Coefficients,
    t0: f64,
    t1: f64,
    x0: QuasiState,
    tol: f64,
    outputs: &[f64],
) -> Result<Vec<QuasiState>> {
    if !(tol > 0.0) {
        return Err(Error::Invalid("tolerance must be positive".into()));
    }
    if !(t1 > t0) {
        return Err(Error::Invalid("need t0 < t1".into()));
    }
    let segs = CoeffSegments::build(&c.sigma, &c.tau, t0, t1);
    let lambda = c.lambda;
    let ys = integrate_segmented(
        &segs,
        move |seg, t, y| system_rhs(seg, lambda, t, y),
        [x0.qd, x0.u],
        tol,
        outputs,
    )?;
    Ok(ys.into_iter().map(|y| QuasiState::new(y[0], y[1])).collect())
}

/// Fundamental matrix over `[0, 1]` from the canonical initial states
/// `(1, 0)` and `(0, 1)`.
pub fn monodromy(c: &Coefficients, tol: f64) -> Result<Monodromy> {
    let v1 = integrate_system(c, 0.0, 1.0, QuasiState::real(1.0, 0.0), tol)?;
    let v2 = integrate_system(c, 0.0, 1.0, QuasiState::real(0.0, 1.0), tol)?;
    Ok(Monodromy {
        m11: v1.qd,
        m12: v2.qd,
        m21: v1.u,
        m22: v2.u,
    })
}

/// Dirichlet solutions `u1(0) = 0`, `u2(1) = 0` sampled at `nodes`
/// (sorted points of `[0, 1]` ending at 1), Wronskian normalized to one.
///
/// `u2` is assembled from the forward fundamental system:
/// `u2 = (v2(1)/v1(1)) v1 - v2`, which vanishes at 1 and has `u2(0) = -1`,
/// making `W = u1 u2^[1] - u1^[1] u2 = 1` exact at t = 0.
pub fn dirichlet_solutions(
    c: &Coefficients,
    tol: f64,
    nodes: &[f64],
) -> Result<DirichletSolutions> {
    let last = *nodes
        .last()
        .ok_or_else(|| Error::Invalid("need at least one node".into()))?;
    if (last - 1.0).abs() > 1e-12 {
        return Err(Error::Invalid("nodes must end at t = 1".into()));
    }
    let v1 = integrate_system_with_outputs(c, 0.0, 1.0, QuasiState::real(1.0, 0.0), tol, nodes)?;
    let v2 = integrate_system_with_outputs(c, 0.0, 1.0, QuasiState::real(0.0, 1.0), tol, nodes)?;
    let v1_end = *v1.last().unwrap();
    let v2_end = *v2.last().unwrap();
    if v1_end.u.norm() < 1e-10 {
        return Err(Error::DirichletEigenvalue { lambda: c.lambda.re });
    }
    let ratio = v2_end.u / v1_end.u;
    let u2: Vec<QuasiState> = v1
        .iter()
        .zip(v2.iter())
        .map(|(a, b)| QuasiState::new(ratio * a.qd - b.qd, ratio * a.u - b.u))
        .collect();
    Ok(DirichletSolutions {
        u1_at_1: v1_end.u,
        u2_at_0: u2[0].u,
        u1_qd_at_0: v1[0].qd,
        u2_qd_at_1: u2.last().unwrap().qd,
        nodes: nodes.to_vec(),
        u1: v1,
        u2,
    })
}

/// Advance the Prüfer angle over `[0, 1]` for real `lambda`.
pub fn pruefer_advance(c: &Coefficients, theta0: f64, tol: f64) -> Result<PrueferTrajectory> {
    if c.lambda.im != 0.0 {
        return Err(Error::Invalid(
            "the Prüfer angle needs a real spectral parameter".into(),
        ));
    }
    let lambda = c.lambda.re;
    let segs = CoeffSegments::build(&c.sigma, &c.tau, 0.0, 1.0);
    let rhs = move |seg: &Seg, t: f64, y: &[Complex64; 1]| -> [Complex64; 1] {
        let s = seg.sigma.eval(t);
        let tau = seg.tau.eval(t);
        let theta = y[0].re;
        let (sin, cos) = theta.sin_cos();
        let v = (lambda - tau) * sin * sin + (cos + s * sin) * (cos + s * sin);
        [Complex64::new(v, 0.0)]
    };
    let out = integrate_segmented(&segs, rhs, [Complex64::new(theta0, 0.0)], tol, &[1.0])?;
    Ok(PrueferTrajectory {
        theta0,
        theta1: out[0][0].re,
    })
}
