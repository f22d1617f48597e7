//! Band-gap structure of the periodic operator.
//!
//! With `M(1, lambda)` the one-period fundamental matrix, the discriminant
//! `D(lambda) = tr M(1, lambda)` characterizes the spectrum: `lambda` lies
//! in a spectral band exactly when `|D| <= 2`, and the fiber operator with
//! quasi-periodic boundary conditions `f(1) = e^{i theta} f(0)` has an
//! eigenvalue at `lambda` exactly when `D(lambda) = 2 cos theta`.
//!
//! ## Locating band edges
//!
//! The edges are the roots of `D = +2` and `D = -2`. Instead of sweeping
//! `D` (which misses closed gaps), cells are cut at the Dirichlet
//! eigenvalues `mu_k` of the period cell: the Prüfer angle `theta(1,
//! lambda)` started at zero is continuous and strictly increasing in
//! `lambda` and crosses `k pi` exactly at `mu_k`, so each `mu_k` is found
//! by bisection of a monotone function and cannot be missed. Classical
//! interlacing places exactly one band inside each cell
//! `[mu_{k-1}, mu_k]`, where `D` is strictly monotone between its
//! `|D| = 2` crossings. A closed gap is a tangency of `D` at `±2`; there
//! the two touching band edges coincide with `mu_k` itself (at a double
//! (anti)periodic eigenvalue `M(1, lambda) = ±I`, so every solution —
//! the Dirichlet one included — satisfies the boundary conditions), which
//! the cell logic reports as a zero-length gap without ever resolving an
//! ill-conditioned tangent root.
//!
//! ## Fiber resolvent
//!
//! For `lambda` off the spectrum of the fiber operator, the resolvent is
//! the Dirichlet Green kernel built from the solutions `u1(0) = 0`,
//! `u2(1) = 0` (Wronskian normalized to 1), plus a rank-two correction
//! `alpha_1 u_1 + alpha_2 u_2` matching the quasi-periodic boundary
//! conditions; `alpha_i` solve a 2x2 system whose determinant `d(theta)`
//! is nonzero off the fiber spectrum, and depend analytically on `theta`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::piecewise::PiecewiseFunction;
use crate::poly::bisect_root;
use crate::quasi_ode::{self, Coefficients, DirichletSolutions};

/// A sampled discriminant value.
#[derive(Debug, Clone, Copy)]
pub struct Discriminant {
    pub lambda: f64,
    pub value: f64,
}

/// One spectral band `[lo, hi]`, 1-indexed from the bottom of the spectrum.
#[derive(Debug, Clone, Copy)]
pub struct Band {
    pub index: usize,
    pub lo: f64,
    pub hi: f64,
    /// True when the band was cut off by the top of the search range.
    pub hi_clipped: bool,
}

#[derive(Debug, Clone)]
pub struct BandStructure {
    pub bands: Vec<Band>,
}

impl BandStructure {
    /// Gap between band `i` and the next one; `None` for the last band or
    /// when the band was clipped by the range.
    pub fn gap_after(&self, i: usize) -> Option<f64> {
        if i + 1 >= self.bands.len() || self.bands[i].hi_clipped {
            return None;
        }
        Some((self.bands[i + 1].lo - self.bands[i].hi).max(0.0))
    }
}

/// A dispersion branch `lambda_k(theta)` sampled over `(0, 2 pi)`.
#[derive(Debug, Clone)]
pub struct DispersionBranch {
    pub index: usize,
    pub samples: Vec<(f64, f64)>,
}

/// Monotonicity report for one branch on `(0, pi)` and `(pi, 2 pi)`.
#[derive(Debug, Clone)]
pub struct MonotonicityReport {
    pub branch_index: usize,
    pub lower_samples: usize,
    pub upper_samples: usize,
    pub increasing_lower: Option<bool>,
    pub increasing_upper: Option<bool>,
    /// Offending pairs `(theta_i, theta_j, lambda_i, lambda_j)`.
    pub violations: Vec<(f64, f64, f64, f64)>,
}

impl MonotonicityReport {
    pub fn is_strictly_monotone(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Fiber resolvent output on the period cell.
#[derive(Debug, Clone)]
pub struct ThetaResolvent {
    pub theta: Complex64,
    pub lambda: Complex64,
    /// Panel boundaries where `w` and `w^[1]` are reported.
    pub nodes: Vec<f64>,
    pub w: Vec<Complex64>,
    pub w_qd: Vec<Complex64>,
    pub alpha1: Complex64,
    pub alpha2: Complex64,
    pub d_theta: Complex64,
    pub beta: Complex64,
    /// Index ranges of `nodes` per smooth segment (no coefficient
    /// breakpoints inside; node spacing uniform within a range).
    pub segment_ranges: Vec<(usize, usize)>,
}

/// The period cell of a potential with unit period.
#[derive(Debug, Clone)]
pub struct CellOperator {
    sigma: PiecewiseFunction,
    tau: PiecewiseFunction,
    tol: f64,
}

/// Threshold deciding that a discriminant value sits on `±2`.
const EDGE_EPS: f64 = 1e-9;
/// Bisection iteration cap (interval halvings).
const BISECT_ITERS: usize = 80;

impl CellOperator {
    /// `sigma`, `tau` with period one (or aperiodic, read on `[0, 1]`).
    pub fn new(sigma: PiecewiseFunction, tau: PiecewiseFunction, tol: f64) -> Result<Self> {
        for part in [&sigma, &tau] {
            if let Some(p) = part.period() {
                if (p - 1.0).abs() > 1e-12 {
                    return Err(Error::Invalid(format!(
                        "cell coefficients must have unit period, got {p}; rescale first"
                    )));
                }
            }
        }
        if !(tol > 0.0) {
            return Err(Error::Invalid("tolerance must be positive".into()));
        }
        Ok(CellOperator { sigma, tau, tol })
    }

    pub fn coefficients(&self, lambda: Complex64) -> Coefficients {
        Coefficients::new(self.sigma.clone(), self.tau.clone(), lambda)
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn sigma(&self) -> &PiecewiseFunction {
        &self.sigma
    }

    pub fn tau(&self) -> &PiecewiseFunction {
        &self.tau
    }

    /// `D(lambda) = tr M(1, lambda)` for real `lambda`.
    pub fn discriminant(&self, lambda: f64) -> Result<f64> {
        let m = quasi_ode::monodromy(&self.coefficients(Complex64::new(lambda, 0.0)), self.tol)?;
        let tr = m.trace();
        debug_assert!(tr.im.abs() < 1e-6, "discriminant should be real");
        Ok(tr.re)
    }

    pub fn discriminant_curve(&self, lambdas: &[f64]) -> Result<Vec<Discriminant>> {
        lambdas
            .iter()
            .map(|&lambda| {
                Ok(Discriminant {
                    lambda,
                    value: self.discriminant(lambda)?,
                })
            })
            .collect()
    }

    /// Prüfer angle at t = 1 of the Dirichlet-start solution.
    fn rotation(&self, lambda: f64) -> Result<f64> {
        let c = self.coefficients(Complex64::new(lambda, 0.0));
        Ok(quasi_ode::pruefer_advance(&c, 0.0, self.tol)?.theta1)
    }

    /// k-th Dirichlet eigenvalue of the cell: the unique root of
    /// `theta(1, lambda) = k pi` in `[lo, hi]` (requires a sign change).
    pub fn dirichlet_eigenvalue(&self, k: usize, lo: f64, hi: f64) -> Result<f64> {
        let target = k as f64 * std::f64::consts::PI;
        let flo = self.rotation(lo)? - target;
        let fhi = self.rotation(hi)? - target;
        if flo >= 0.0 || fhi <= 0.0 {
            return Err(Error::Bracketing(format!(
                "Dirichlet eigenvalue {k} not bracketed by [{lo}, {hi}]"
            )));
        }
        self.bisect(lo, hi, |lam| Ok(self.rotation(lam)? - target))
    }

    fn bisect(&self, mut lo: f64, mut hi: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
        // invariant: f(lo) > 0 is false, i.e. f(lo) <= 0 not required here;
        // caller guarantees a sign change f(lo) < 0 < f(hi) or the reverse
        let mut flo = f(lo)?;
        for _ in 0..BISECT_ITERS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 1e-12 * (1.0 + lo.abs().max(hi.abs())) {
                break;
            }
            let fm = f(mid)?;
            if fm == 0.0 {
                return Ok(mid);
            }
            if (flo < 0.0) == (fm < 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// All spectral bands intersecting `[lambda_min, lambda_max]`.
    /// `lambda_min` must lie below the spectrum.
    pub fn band_edges(&self, lambda_min: f64, lambda_max: f64) -> Result<BandStructure> {
        if !(lambda_max > lambda_min) {
            return Err(Error::Invalid("need lambda_min < lambda_max".into()));
        }
        if self.discriminant(lambda_min)? <= 2.0 + EDGE_EPS {
            return Err(Error::NotBelowSpectrum { lambda: lambda_min });
        }

        // cell boundaries: Dirichlet eigenvalues found through the strictly
        // increasing rotation function
        let pi = std::f64::consts::PI;
        let rot_min = self.rotation(lambda_min)?;
        let rot_max = self.rotation(lambda_max)?;
        let k_first = (rot_min / pi).floor() as i64 + 1;
        let k_last = (rot_max / pi).floor() as i64;
        let mut cuts = vec![lambda_min];
        for k in k_first..=k_last {
            cuts.push(self.dirichlet_eigenvalue(k as usize, lambda_min, lambda_max)?);
        }
        cuts.push(lambda_max);

        let mut bands = Vec::new();
        for (cell_idx, w) in cuts.windows(2).enumerate() {
            let (a, b) = (w[0], w[1]);
            if b - a <= 1e-12 * (1.0 + a.abs()) {
                continue;
            }
            let index = bands.len() + 1;
            let s_lo = if index % 2 == 1 { 1.0 } else { -1.0 };
            let is_last_cell = cell_idx + 2 == cuts.len();
            let d_b = self.discriminant(b)?;

            if is_last_cell && s_lo * d_b >= 2.0 - EDGE_EPS {
                // the range ends inside the gap before this band
                break;
            }
            if is_last_cell && d_b.abs() < 2.0 - EDGE_EPS {
                // range ends strictly inside the band
                let lo = self.find_lo_edge(a, b, s_lo)?;
                bands.push(Band {
                    index,
                    lo,
                    hi: b,
                    hi_clipped: true,
                });
                break;
            }

            // full band inside the cell: first the in-band reference point
            // where D = 0, then both edges
            let mid = self.bisect(a, b, |lam| Ok(s_lo * self.discriminant(lam)?))?;
            let lo = self.find_lo_edge(a, mid, s_lo)?;
            let (hi, hi_clipped) = self.find_hi_edge(mid, b, s_lo, is_last_cell)?;
            bands.push(Band {
                index,
                lo,
                hi,
                hi_clipped,
            });
        }
        Ok(BandStructure { bands })
    }

    /// Lower edge in `[a, mid]`: the root of `s_lo D - 2` next to the band,
    /// with the cell boundary itself taken when `D(a)` already sits on the
    /// edge value and the band starts immediately (closed or touching gap).
    fn find_lo_edge(&self, a: f64, mid: f64, s_lo: f64) -> Result<f64> {
        let f = |lam: f64| -> Result<f64> { Ok(s_lo * self.discriminant(lam)? - 2.0) };
        let fa = f(a)?;
        if fa > EDGE_EPS {
            return self.bisect_edge(a, mid, &f);
        }
        if fa < -EDGE_EPS {
            return Err(Error::Consistency(format!(
                "discriminant inside the band at a cell boundary (lambda = {a})"
            )));
        }
        // |D(a)| = 2: either a closed/touching gap (band starts at a) or an
        // open gap whose other edge lies to the right
        for h_rel in [1e-3, 1e-5, 1e-7] {
            let h = h_rel * (mid - a);
            let v = f(a + h)?;
            if v > EDGE_EPS {
                return self.bisect_edge(a + h, mid, &f);
            }
            if v < -EDGE_EPS {
                return Ok(a);
            }
        }
        Ok(a)
    }

    fn find_hi_edge(
        &self,
        mid: f64,
        b: f64,
        s_lo: f64,
        is_last_cell: bool,
    ) -> Result<(f64, bool)> {
        let g = |lam: f64| -> Result<f64> { Ok(-s_lo * self.discriminant(lam)? - 2.0) };
        let gb = g(b)?;
        if gb > EDGE_EPS {
            return Ok((self.bisect_edge_rev(mid, b, &g)?, false));
        }
        if gb < -EDGE_EPS {
            // still inside the band at the cell end: only legal when the
            // range clipped the band
            if is_last_cell {
                return Ok((b, true));
            }
            return Err(Error::Consistency(format!(
                "discriminant inside the band at a cell boundary (lambda = {b})"
            )));
        }
        for h_rel in [1e-3, 1e-5, 1e-7] {
            let h = h_rel * (b - mid);
            let v = g(b - h)?;
            if v > EDGE_EPS {
                return Ok((self.bisect_edge_rev(mid, b - h, &g)?, false));
            }
            if v < -EDGE_EPS {
                return Ok((b, is_last_cell));
            }
        }
        Ok((b, is_last_cell))
    }

    /// Bisect `f` with `f(lo) > 0 > f(hi)` refined toward the sign change.
    fn bisect_edge(&self, lo: f64, hi: f64, f: &dyn Fn(f64) -> Result<f64>) -> Result<f64> {
        let (mut lo, mut hi) = (lo, hi);
        for _ in 0..BISECT_ITERS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 1e-12 * (1.0 + lo.abs().max(hi.abs())) {
                break;
            }
            if f(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Bisect `f` with `f(lo) < 0 < f(hi)`.
    fn bisect_edge_rev(&self, lo: f64, hi: f64, f: &dyn Fn(f64) -> Result<f64>) -> Result<f64> {
        let (mut lo, mut hi) = (lo, hi);
        for _ in 0..BISECT_ITERS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 1e-12 * (1.0 + lo.abs().max(hi.abs())) {
                break;
            }
            if f(mid)? < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Solve `D(lambda) = 2 cos theta` inside one band.
    pub fn band_point(&self, band: &Band, theta: f64) -> Result<f64> {
        let target = 2.0 * theta.cos();
        let d_lo = self.discriminant(band.lo)?;
        let d_hi = self.discriminant(band.hi)?;
        if (d_lo - target).abs() <= EDGE_EPS * 10.0 {
            return Ok(band.lo);
        }
        if (d_hi - target).abs() <= EDGE_EPS * 10.0 {
            return Ok(band.hi);
        }
        if (d_lo - target) * (d_hi - target) > 0.0 {
            return Err(Error::Bracketing(format!(
                "2 cos(theta) = {target} is not attained on band {} = [{}, {}]",
                band.index, band.lo, band.hi
            )));
        }
        self.bisect(band.lo, band.hi, |lam| Ok(self.discriminant(lam)? - target))
    }

    /// Sample the dispersion branch of one band over the given angles.
    pub fn dispersion(&self, band: &Band, thetas: &[f64]) -> Result<DispersionBranch> {
        let samples = thetas
            .iter()
            .map(|&theta| Ok((theta, self.band_point(band, theta)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(DispersionBranch {
            index: band.index,
            samples,
        })
    }

    /// Fiber eigenvalues up to `lambda_max`: one per band, sorted.
    pub fn theta_eigenvalues(
        &self,
        theta: f64,
        lambda_min: f64,
        lambda_max: f64,
    ) -> Result<Vec<f64>> {
        if !(0.0..2.0 * std::f64::consts::PI).contains(&theta) {
            return Err(Error::Invalid("theta must lie in [0, 2 pi)".into()));
        }
        let structure = self.band_edges(lambda_min, lambda_max)?;
        self.theta_eigenvalues_in(&structure, theta)
    }

    /// Same, against precomputed bands.
    pub fn theta_eigenvalues_in(&self, structure: &BandStructure, theta: f64) -> Result<Vec<f64>> {
        let target = 2.0 * theta.cos();
        let mut out = Vec::with_capacity(structure.bands.len());
        for band in &structure.bands {
            if band.hi_clipped {
                // the branch may exit through the clipped end
                let d_lo = self.discriminant(band.lo)?;
                let d_hi = self.discriminant(band.hi)?;
                if (d_lo - target) * (d_hi - target) > 0.0
                    && (d_lo - target).abs() > EDGE_EPS * 10.0
                    && (d_hi - target).abs() > EDGE_EPS * 10.0
                {
                    continue;
                }
            }
            out.push(self.band_point(band, theta)?);
        }
        Ok(out)
    }

    /// Fiber resolvent at real `theta`.
    pub fn fiber_resolvent(
        &self,
        theta: f64,
        lambda: Complex64,
        f: &dyn Fn(f64) -> Complex64,
    ) -> Result<ThetaResolvent> {
        self.fiber_resolvent_at(Complex64::new(theta, 0.0), lambda, f)
    }

    /// Fiber resolvent; `theta` may be complex (used by analyticity
    /// stencils in `theta`).
    pub fn fiber_resolvent_at(
        &self,
        theta: Complex64,
        lambda: Complex64,
        f: &dyn Fn(f64) -> Complex64,
    ) -> Result<ThetaResolvent> {
        let quad = CellQuadrature::build(&self.sigma, &self.tau);
        let d = quasi_ode::dirichlet_solutions(
            &self.coefficients(lambda),
            self.tol,
            &quad.all_points,
        )?;
        self.assemble_fiber(theta, lambda, f, &quad, &d)
    }

    fn assemble_fiber(
        &self,
        theta: Complex64,
        lambda: Complex64,
        f: &dyn Fn(f64) -> Complex64,
        quad: &CellQuadrature,
        d: &DirichletSolutions,
    ) -> Result<ThetaResolvent> {
        let zero = Complex64::new(0.0, 0.0);
        let fvals: Vec<Complex64> = quad.all_points.iter().map(|&t| f(t)).collect();

        // cumulative integrals at panel boundaries:
        // i1(b) = int_0^b u1 f, i2(b) = int_b^1 u2 f
        let n_bounds = quad.boundary_index.len();
        let mut i1 = vec![zero; n_bounds];
        let mut i2 = vec![zero; n_bounds];
        let mut acc = zero;
        for (p, panel) in quad.panels.iter().enumerate() {
            let mut s = zero;
            for (w, idx) in panel.weights.iter().zip(&panel.node_index) {
                s += *w * d.u1[*idx].u * fvals[*idx];
            }
            acc += s;
            i1[p + 1] = acc;
        }
        let mut acc2 = zero;
        for (p, panel) in quad.panels.iter().enumerate().rev() {
            let mut s = zero;
            for (w, idx) in panel.weights.iter().zip(&panel.node_index) {
                s += *w * d.u2[*idx].u * fvals[*idx];
            }
            acc2 += s;
            i2[p] = acc2;
        }

        // Dirichlet part: w_D = -(u1 I2 + u2 I1), w_D^[1] likewise; the
        // sign comes from the Wronskian normalization W = +1
        let mut w_d = vec![zero; n_bounds];
        let mut w_d_qd = vec![zero; n_bounds];
        for b in 0..n_bounds {
            let idx = quad.boundary_index[b];
            w_d[b] = -(d.u1[idx].u * i2[b] + d.u2[idx].u * i1[b]);
            w_d_qd[b] = -(d.u1[idx].qd * i2[b] + d.u2[idx].qd * i1[b]);
        }

        let z = (Complex64::i() * theta).exp();
        let beta = z * w_d_qd[0] - w_d_qd[n_bounds - 1];
        // 2x2 system for the quasi-periodic correction:
        //   u1(1) a1 - z u2(0) a2 = 0
        //   (u1^[1](1) - z u1^[1](0)) a1 + (u2^[1](1) - z u2^[1](0)) a2 = beta
        let a11 = d.u1_at_1;
        let a12 = -z * d.u2_at_0;
        let a21 = d.u1.last().unwrap().qd - z * d.u1_qd_at_0;
        let a22 = d.u2_qd_at_1 - z * d.u2[0].qd;
        let det = a11 * a22 - a12 * a21;
        if det.norm() < 1e-12 {
            return Err(Error::SingularFiberSystem {
                theta: theta.re,
                magnitude: det.norm(),
            });
        }
        let alpha1 = -a12 * beta / det;
        let alpha2 = a11 * beta / det;

        let mut w = vec![zero; n_bounds];
        let mut w_qd = vec![zero; n_bounds];
        let mut nodes = vec![0.0; n_bounds];
        for b in 0..n_bounds {
            let idx = quad.boundary_index[b];
            nodes[b] = quad.all_points[idx];
            w[b] = w_d[b] + alpha1 * d.u1[idx].u + alpha2 * d.u2[idx].u;
            w_qd[b] = w_d_qd[b] + alpha1 * d.u1[idx].qd + alpha2 * d.u2[idx].qd;
        }
        Ok(ThetaResolvent {
            theta,
            lambda,
            nodes,
            w,
            w_qd,
            alpha1,
            alpha2,
            d_theta: det,
            beta,
            segment_ranges: quad.segment_ranges.clone(),
        })
    }
}

/// Strict-monotonicity report over the two open half-circles.
pub fn verify_monotonicity(branch: &DispersionBranch) -> MonotonicityReport {
    let pi = std::f64::consts::PI;
    let eps = 1e-12;
    let lower: Vec<&(f64, f64)> = branch
        .samples
        .iter()
        .filter(|(t, _)| *t > eps && *t < pi - eps)
        .collect();
    let upper: Vec<&(f64, f64)> = branch
        .samples
        .iter()
        .filter(|(t, _)| *t > pi + eps && *t < 2.0 * pi - eps)
        .collect();

    let mut violations = Vec::new();
    let mut direction = |part: &[&(f64, f64)]| -> Option<bool> {
        if part.len() < 2 {
            return None;
        }
        let increasing = part.last().unwrap().1 > part[0].1;
        for w in part.windows(2) {
            let ok = if increasing {
                w[1].1 > w[0].1
            } else {
                w[1].1 < w[0].1
            };
            if !ok {
                violations.push((w[0].0, w[1].0, w[0].1, w[1].1));
            }
        }
        Some(increasing)
    };
    let increasing_lower = direction(&lower);
    let increasing_upper = direction(&upper);
    MonotonicityReport {
        branch_index: branch.index,
        lower_samples: lower.len(),
        upper_samples: upper.len(),
        increasing_lower,
        increasing_upper,
        violations,
    }
}

/// Rescale a `T`-periodic pair onto the unit cell:
/// `sigma_hat(s) = T sigma(T s)`, `tau_hat(s) = T^2 tau(T s)`; spectra map
/// by `lambda_hat = T^2 lambda`.
pub fn rescale_to_unit_cell(
    sigma: &PiecewiseFunction,
    tau: &PiecewiseFunction,
    period: f64,
) -> (PiecewiseFunction, PiecewiseFunction) {
    let sigma_hat = sigma.scale_x(1.0 / period).scale(period);
    let tau_hat = tau.scale_x(1.0 / period).scale(period * period);
    (sigma_hat, tau_hat)
}

// ---------------------------------------------------------------------------
// composite Gauss-Legendre quadrature on the cell
// ---------------------------------------------------------------------------

/// 8-point Gauss-Legendre nodes and weights on [-1, 1].
const GL8_X: [f64; 8] = [
    -0.9602898564975363,
    -0.7966664774136267,
    -0.5255324099163290,
    -0.1834346424956498,
    0.1834346424956498,
    0.5255324099163290,
    0.7966664774136267,
    0.9602898564975363,
];
const GL8_W: [f64; 8] = [
    0.1012285362903763,
    0.2223810344533745,
    0.3137066458778873,
    0.3626837833783620,
    0.3626837833783620,
    0.3137066458778873,
    0.2223810344533745,
    0.1012285362903763,
];

struct Panel {
    node_index: Vec<usize>,
    weights: Vec<Complex64>,
}

struct CellQuadrature {
    /// Sorted union of panel boundaries and interior Gauss nodes.
    all_points: Vec<f64>,
    /// Indices of panel boundaries within `all_points`.
    boundary_index: Vec<usize>,
    panels: Vec<Panel>,
    segment_ranges: Vec<(usize, usize)>,
}

impl CellQuadrature {
    fn build(sigma: &PiecewiseFunction, tau: &PiecewiseFunction) -> CellQuadrature {
        // smooth segments of the coefficients over the cell
        let segs = quasi_ode::CoeffSegments::build(sigma, tau, 0.0, 1.0);
        let mut boundaries: Vec<f64> = Vec::new();
        let mut seg_spans: Vec<(usize, usize)> = Vec::new();
        let mut panel_bounds: Vec<(f64, f64)> = Vec::new();
        for seg in &segs.segs {
            let len = seg.hi - seg.lo;
            let m = ((len * 96.0).ceil() as usize).max(24);
            let start = boundaries.len();
            for j in 0..=m {
                let t = seg.lo + len * j as f64 / m as f64;
                if j < m {
                    panel_bounds.push((t, seg.lo + len * (j + 1) as f64 / m as f64));
                }
                if boundaries.last().map_or(true, |&l| t > l + 1e-15) {
                    boundaries.push(t);
                }
            }
            seg_spans.push((start, boundaries.len() - 1));
        }

        let mut all_points: Vec<f64> = boundaries.clone();
        for &(lo, hi) in &panel_bounds {
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for x in GL8_X {
                all_points.push(mid + half * x);
            }
        }
        all_points.sort_by(|a, b| a.partial_cmp(b).unwrap());
        all_points.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);

        let locate = |t: f64| -> usize {
            all_points
                .binary_search_by(|x| x.partial_cmp(&t).unwrap())
                .unwrap_or_else(|i| i.min(all_points.len() - 1))
        };
        let boundary_index: Vec<usize> = boundaries.iter().map(|&t| locate(t)).collect();
        let panels: Vec<Panel> = panel_bounds
            .iter()
            .map(|&(lo, hi)| {
                let half = 0.5 * (hi - lo);
                let mid = 0.5 * (hi + lo);
                Panel {
                    node_index: GL8_X.iter().map(|&x| locate(mid + half * x)).collect(),
                    weights: GL8_W
                        .iter()
                        .map(|&w| Complex64::new(w * half, 0.0))
                        .collect(),
                }
            })
            .collect();
        CellQuadrature {
            all_points,
            boundary_index,
            panels,
            segment_ranges: seg_spans,
        }
    }
}

/// Convenience root finder against a plain closure (used by tests and the
/// KP oracle pipeline).
pub fn bisect_plain(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    bisect_root(f, lo, hi)
}
