//! Quadratic-form (Galerkin) realization on a truncated interval.
//!
//! The operator acts through the form
//!
//! ```text
//! t(u, v) = (u', v') - (sigma u', v) - (sigma u, v') + (tau u, v)
//! ```
//!
//! discretized with continuous piecewise-linear hats and Dirichlet cut-off
//! at the truncation ends. Because `sigma`, `tau` and the hats are all
//! piecewise polynomial, every element integral is evaluated exactly —
//! provided the mesh contains every coefficient breakpoint, which
//! `assemble` enforces.
//!
//! The module also hosts the potential-side tooling of the resolvent
//! convergence experiment: mollification inside the piecewise class,
//! finite-element estimation of the unit-window dual norms, and the
//! B-weighted resolvent gap between two assembled operators.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decompose::{self, SigmaTau};
use crate::distribution::{pair, DistributionW1, TestFunction};
use crate::error::{Error, Result};
use crate::linalg::{dot, negative_inertia, power_iteration_b_norm, SymTridiag, TridiagLu};
use crate::piecewise::PiecewiseFunction;
use crate::poly::Poly;

/// Truncation interval and nodes (strictly increasing, first = a, last = b).
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub a: f64,
    pub b: f64,
    pub nodes: Vec<f64>,
}

impl Mesh {
    pub fn uniform(a: f64, b: f64, h: f64) -> Result<Mesh> {
        Mesh::with_breakpoints(a, b, h, &[])
    }

    /// Uniform nodes of spacing at most `h`, refined by the given
    /// breakpoints.
    pub fn with_breakpoints(a: f64, b: f64, h: f64, breaks: &[f64]) -> Result<Mesh> {
        if !(b > a) || !(h > 0.0) {
            return Err(Error::Invalid("mesh needs a < b and h > 0".into()));
        }
        let m = ((b - a) / h).ceil() as usize;
        let mut nodes: Vec<f64> = (0..=m).map(|i| a + (b - a) * i as f64 / m as f64).collect();
        nodes.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
        nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());
        nodes.dedup_by(|x, y| (*x - *y).abs() <= 1e-11 * (1.0 + y.abs()));
        Ok(Mesh { a, b, nodes })
    }

    pub fn n_interior(&self) -> usize {
        self.nodes.len().saturating_sub(2)
    }

    /// Hat basis function at interior node `i` (0-based interior index).
    pub fn hat(&self, i: usize) -> TestFunction {
        TestFunction::from_samples(
            vec![self.nodes[i], self.nodes[i + 1], self.nodes[i + 2]],
            vec![0.0, 1.0, 0.0],
        )
        .expect("mesh nodes are increasing")
    }
}

/// Assembled form and mass matrices on the hat basis.
#[derive(Debug, Clone)]
pub struct FormMatrices {
    pub a: SymTridiag,
    pub b: SymTridiag,
    pub mesh: Mesh,
}

/// Exact element-by-element assembly of the form and the L^2 mass matrix.
pub fn assemble(st: &SigmaTau, mesh: &Mesh) -> Result<FormMatrices> {
    let (a, b) = (mesh.a, mesh.b);
    let sigma = st.sigma.materialize(a, b);
    let tau = st.tau.materialize(a, b);
    for part in [&sigma, &tau] {
        for &x in part.breakpoints() {
            if x <= a + 1e-11 || x >= b - 1e-11 {
                continue;
            }
            let hit = mesh
                .nodes
                .iter()
                .any(|&nd| (nd - x).abs() <= 1e-9 * (1.0 + x.abs()));
            if !hit {
                return Err(Error::MeshMissingBreakpoint { x });
            }
        }
    }

    let n = mesh.n_interior();
    let mut mat_a = SymTridiag::zeros(n);
    let mut mat_b = SymTridiag::zeros(n);
    let n_nodes = mesh.nodes.len();
    for e in 0..n_nodes - 1 {
        let (x0, x1) = (mesh.nodes[e], mesh.nodes[e + 1]);
        let h = x1 - x0;
        // hats restricted to the element: left descending, right ascending
        let left = Poly::from_coeffs(vec![x1 / h, -1.0 / h]);
        let right = Poly::from_coeffs(vec![-x0 / h, 1.0 / h]);
        let dleft = -1.0 / h;
        let dright = 1.0 / h;
        let shapes = [(left, dleft), (right, dright)];
        let mid = 0.5 * (x0 + x1);
        let sig_piece = sigma
            .segments_on(x0, x1)
            .into_iter()
            .find(|s| mid >= s.lo && mid < s.hi)
            .map(|s| s.poly)
            .unwrap_or_else(Poly::zero);
        let tau_piece = tau
            .segments_on(x0, x1)
            .into_iter()
            .find(|s| mid >= s.lo && mid < s.hi)
            .map(|s| s.poly)
            .unwrap_or_else(Poly::zero);

        let mut ae = [[0.0; 2]; 2];
        let mut be = [[0.0; 2]; 2];
        for (i, (pi, dpi)) in shapes.iter().enumerate() {
            for (j, (pj, dpj)) in shapes.iter().enumerate() {
                let stiff = dpi * dpj * h;
                let mass = pi.mul(pj)?.integral(x0, x1);
                // -(sigma u', v) - (sigma u, v') = -int sigma (u_i u_j)'
                let cross = pi.scale(*dpj).add(&pj.scale(*dpi));
                let sig_term = -sig_piece.mul(&cross)?.integral(x0, x1);
                let tau_term = tau_piece.mul(&pi.mul(pj)?)?.integral(x0, x1);
                ae[i][j] = stiff + sig_term + tau_term;
                be[i][j] = mass;
            }
        }
        // scatter: element nodes e (interior dof e-1) and e+1 (dof e)
        let dof = |node: usize| -> Option<usize> {
            if node == 0 || node == n_nodes - 1 {
                None
            } else {
                Some(node - 1)
            }
        };
        let idx = [dof(e), dof(e + 1)];
        for i in 0..2 {
            for j in 0..2 {
                if let (Some(r), Some(c)) = (idx[i], idx[j]) {
                    if r == c {
                        mat_a.diag[r] += ae[i][j];
                        mat_b.diag[r] += be[i][j];
                    } else if c == r + 1 {
                        mat_a.off[r] += ae[i][j];
                        mat_b.off[r] += be[i][j];
                    }
                }
            }
        }
    }
    Ok(FormMatrices {
        a: mat_a,
        b: mat_b,
        mesh: mesh.clone(),
    })
}

/// Explicit lower bound of the form:
/// `-(2 (4 |sigma|_2,unif)^4 + 16 |tau|_1,unif^2 + 6)`.
pub fn gamma_bound(st: &SigmaTau) -> Result<f64> {
    let s = st.sigma.norm_l2_unif()?;
    let t = st.tau.norm_l1_unif()?;
    Ok(-(2.0 * (4.0 * s).powi(4) + 16.0 * t * t + 6.0))
}

/// Lowest `count` generalized eigenvalues of `(A, B)` by inertia-count
/// bisection (deterministic, cannot skip eigenvalues).
pub fn eigen(fm: &FormMatrices, count: usize) -> Result<Vec<f64>> {
    let n = fm.a.n();
    if count > n {
        return Err(Error::Invalid(format!(
            "asked for {count} eigenvalues of a {n}-dimensional problem"
        )));
    }
    if fm.b.cholesky().is_none() {
        return Err(Error::Consistency("mass matrix is not positive definite".into()));
    }
    // bracket the spectrum from below and above
    let mut lo = fm
        .a
        .diag
        .iter()
        .zip(&fm.b.diag)
        .map(|(a, b)| a / b)
        .fold(f64::INFINITY, f64::min)
        .min(0.0)
        - 1.0;
    let mut guard = 0;
    while negative_inertia(&fm.a, &fm.b, lo) > 0 {
        lo = lo * 2.0 - 1.0;
        guard += 1;
        if guard > 80 {
            return Err(Error::EigenConvergence("no lower spectral bound found".into()));
        }
    }
    let mut hi = lo.abs().max(1.0);
    guard = 0;
    while negative_inertia(&fm.a, &fm.b, hi) < count {
        hi = hi * 2.0 + 1.0;
        guard += 1;
        if guard > 80 {
            return Err(Error::EigenConvergence(format!(
                "could not bracket {count} eigenvalues"
            )));
        }
    }

    let mut out = Vec::with_capacity(count);
    let mut left = lo;
    for j in 1..=count {
        let mut a = left;
        let mut b = hi;
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b || b - a <= 1e-12 * (1.0 + a.abs().max(b.abs())) {
                break;
            }
            if negative_inertia(&fm.a, &fm.b, mid) >= j {
                b = mid;
            } else {
                a = mid;
            }
        }
        let lam = 0.5 * (a + b);
        out.push(lam);
        left = a;
    }
    Ok(out)
}

/// B-weighted 2-norm of the resolvent difference
/// `(A1 - lambda B)^{-1} B - (A2 - lambda B)^{-1} B` (power iteration on
/// the symmetric difference in the B inner product).
pub fn resolvent_gap(fm1: &FormMatrices, fm2: &FormMatrices, lambda: f64, seed: u64) -> Result<f64> {
    if fm1.mesh.nodes.len() != fm2.mesh.nodes.len() {
        return Err(Error::Invalid("resolvent gap needs a shared mesh".into()));
    }
    for (x, y) in fm1.mesh.nodes.iter().zip(&fm2.mesh.nodes) {
        if (x - y).abs() > 1e-11 * (1.0 + x.abs()) {
            return Err(Error::Invalid("resolvent gap needs a shared mesh".into()));
        }
    }
    for fm in [fm1, fm2] {
        if negative_inertia(&fm.a, &fm.b, lambda) > 0 {
            return Err(Error::NotBelowSpectrum { lambda });
        }
    }
    let shifted1 = fm1.a.add_scaled(&fm1.b, -lambda);
    let shifted2 = fm2.a.add_scaled(&fm2.b, -lambda);
    let lu1 = TridiagLu::from_sym(&shifted1)?;
    let lu2 = TridiagLu::from_sym(&shifted2)?;
    let bmat = &fm1.b;
    let apply = |v: &[f64]| -> Vec<f64> {
        let bv = bmat.matvec(v);
        let x1 = lu1.solve(&bv);
        let x2 = lu2.solve(&bv);
        x1.iter().zip(&x2).map(|(a, b)| a - b).collect()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start: Vec<f64> = (0..fm1.a.n()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Ok(power_iteration_b_norm(&apply, bmat, start, 20_000, 1e-10))
}

/// Mollification inside the piecewise class: atoms become mass-preserving
/// triangular hats of half-width `1/n`, the `g` part becomes the centered
/// difference quotient `n (g(t + 1/2n) - g(t - 1/2n))`, and the regular
/// part is averaged over the same moving window. The result is a regular
/// potential (empty `g`, no atoms).
pub fn mollify(q: &DistributionW1, n: u32) -> Result<DistributionW1> {
    if n == 0 {
        return Err(Error::Invalid("mollification level must be positive".into()));
    }
    let nf = n as f64;
    let w = 0.5 / nf;
    let mut h_total = PiecewiseFunction::zero();

    if !q.g().is_identically_zero() {
        let dq = q
            .g()
            .translate(-w)
            .sub(&q.g().translate(w))?
            .scale(nf);
        h_total = h_total.add(&dq)?;
    }

    if !q.h().is_identically_zero() {
        let conv = match q.h().period() {
            None => {
                let prim = q.h().antiderivative(None)?;
                prim.translate(-w).sub(&prim.translate(w))?.scale(nf)
            }
            Some(period) => {
                let b0 = q.h().breakpoints()[0];
                let mean = q.h().integral(b0, b0 + period) / period;
                let centered = q.h().sub(&PiecewiseFunction::constant(mean))?;
                let prim = centered.antiderivative(None)?;
                prim.translate(-w)
                    .sub(&prim.translate(w))?
                    .scale(nf)
                    .add(&PiecewiseFunction::constant(mean))?
            }
        };
        h_total = h_total.add(&conv)?;
    }

    if !q.atoms().is_empty() {
        let mut hats = PiecewiseFunction::zero();
        for &(x, c) in q.atoms() {
            let peak = c * nf;
            let slope = c * nf * nf;
            let hat = PiecewiseFunction::compact(
                vec![x - 1.0 / nf, x, x + 1.0 / nf],
                vec![
                    Poly::from_coeffs(vec![peak + slope * (x - 1.0 / nf) - slope * x, 0.0])
                        .add(&Poly::from_coeffs(vec![-slope * (x - 1.0 / nf), slope])),
                    Poly::from_coeffs(vec![peak + slope * x, -slope]),
                ],
            )?;
            hats = hats.add(&hat)?;
        }
        let contribution = match q.period() {
            None => hats,
            Some(period) => periodize(&hats, period)?,
        };
        h_total = h_total.add(&contribution)?;
    }

    DistributionW1::new(PiecewiseFunction::zero(), h_total, Vec::new(), q.period())
}

/// Periodize a compactly supported function by summing its translates.
fn periodize(f: &PiecewiseFunction, period: f64) -> Result<PiecewiseFunction> {
    let Some((lo, hi)) = f.compact_support() else {
        return PiecewiseFunction::periodic(vec![0.0], vec![Poly::zero()], period);
    };
    let copies = ((hi - lo) / period).ceil() as i64 + 1;
    let mut acc = PiecewiseFunction::zero();
    for k in -copies..=copies {
        acc = acc.add(&f.translate(k as f64 * period))?;
    }
    let cell = acc.materialize(lo, lo + period);
    let mut breaks = Vec::new();
    let mut pieces = Vec::new();
    for s in cell.segments_on(lo, lo + period) {
        breaks.push(s.lo);
        pieces.push(s.poly.clone());
    }
    PiecewiseFunction::periodic(breaks, pieces, period)
}

/// Finite-element estimate of the dual norm of the window localization
/// `f phi_n`: `sqrt(b^T G^{-1} b)` with `G` the Sobolev Gram matrix of the
/// hat basis and `b_i = <f phi_n, hat_i>`. A certified lower bound of the
/// true dual norm, increasing under mesh refinement.
pub fn wminus_norm_estimate(f: &DistributionW1, window: i64, mesh: &Mesh) -> Result<f64> {
    let (lo, hi) = (window as f64 - 1.0, window as f64 + 1.0);
    if mesh.a > lo - 0.5 || mesh.b < hi + 0.5 {
        return Err(Error::Invalid(format!(
            "estimator mesh [{}, {}] must cover the window [{lo}, {hi}] with margin",
            mesh.a, mesh.b
        )));
    }
    let loc = decompose::localize(f, window)?;
    if loc.is_zero() {
        return Ok(0.0);
    }
    let n = mesh.n_interior();
    // Sobolev Gram = stiffness + mass = the form with sigma = 0, tau = 1
    let unit = SigmaTau {
        sigma: PiecewiseFunction::zero(),
        tau: PiecewiseFunction::constant(1.0),
        provenance: Vec::new(),
    };
    let gram = assemble(&unit, mesh)?.a;
    let mut rhs = vec![0.0; n];
    for (i, r) in rhs.iter_mut().enumerate() {
        let hat = mesh.hat(i);
        if let Some((hl, hr)) = hat.support() {
            if hr <= lo || hl >= hi {
                continue;
            }
        }
        *r = pair(&loc, &hat);
    }
    let x = gram.solve_spd(&rhs)?;
    Ok(dot(&rhs, &x).max(0.0).sqrt())
}

/// One row of the convergence experiment.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceRow {
    pub n: u32,
    pub w_norm_gap: f64,
    pub resolvent_gap: f64,
}

impl ConvergenceRow {
    pub fn ratio(&self) -> f64 {
        if self.w_norm_gap == 0.0 {
            0.0
        } else {
            self.resolvent_gap / self.w_norm_gap
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub mesh_h: f64,
    pub half_width: f64,
    pub lambda: f64,
    pub seed: u64,
    /// The discrete operator norm is the B-weighted matrix 2-norm on the
    /// truncated space, standing in for the L^2(R) operator norm.
    pub norm_note: &'static str,
}

pub struct ConvergenceOptions {
    pub half_width: f64,
    pub mesh_h: f64,
    pub lambda: Option<f64>,
    pub seed: u64,
    pub estimator_h: f64,
}

impl Default for ConvergenceOptions {
    fn default() -> Self {
        ConvergenceOptions {
            half_width: 8.0,
            mesh_h: 1.0 / 64.0,
            lambda: None,
            seed: 0x5EED,
            estimator_h: 1.0 / 64.0,
        }
    }
}

fn decompose_any(q: &DistributionW1) -> Result<SigmaTau> {
    match q.period() {
        Some(period) => decompose::decompose_periodic(q, period),
        None => {
            let hull = q.support_hull()?;
            let Some((lo, hi)) = hull else {
                return Ok(SigmaTau::zero());
            };
            decompose::decompose(q, lo.floor() as i64, hi.ceil() as i64)
        }
    }
}

/// Mollify `q` at each level, assemble both operators on one shared mesh,
/// and record the dual-norm and resolvent gaps.
pub fn convergence_experiment(
    q: &DistributionW1,
    levels: &[u32],
    opts: &ConvergenceOptions,
) -> Result<ConvergenceReport> {
    let l = opts.half_width;
    let st_q = decompose_any(q)?;

    let mollified: Vec<(u32, SigmaTau, DistributionW1)> = levels
        .iter()
        .map(|&n| {
            let qn = mollify(q, n)?;
            let st = decompose_any(&qn)?;
            Ok((n, st, qn))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut breaks: Vec<f64> = Vec::new();
    for st in std::iter::once(&st_q).chain(mollified.iter().map(|(_, st, _)| st)) {
        breaks.extend(st.sigma.materialize(-l, l).breakpoints());
        breaks.extend(st.tau.materialize(-l, l).breakpoints());
    }
    let mesh = Mesh::with_breakpoints(-l, l, opts.mesh_h, &breaks)?;
    let fm_q = assemble(&st_q, &mesh)?;

    let gamma_q = gamma_bound(&st_q)?;
    let mut gamma_min = gamma_q;
    for (_, st, _) in &mollified {
        gamma_min = gamma_min.min(gamma_bound(st)?);
    }
    let lambda = opts.lambda.unwrap_or(gamma_min - 30.0);
    if lambda >= gamma_min - 1.0 {
        return Err(Error::NotBelowSpectrum { lambda });
    }

    let mut rows = Vec::with_capacity(levels.len());
    for (n, st_n, qn) in &mollified {
        let diff = qn.sub(q)?;
        let w_gap = match q.period() {
            Some(_) => {
                // one window suffices by periodicity
                let est_mesh = estimator_mesh(&diff, 0, opts.estimator_h)?;
                wminus_norm_estimate(&diff, 0, &est_mesh)?
            }
            None => {
                let (lo, hi) = diff.support_hull()?.unwrap_or((0.0, 0.0));
                let mut best = 0.0f64;
                for w in (lo.floor() as i64 - 1)..=(hi.ceil() as i64 + 1) {
                    let est_mesh = estimator_mesh(&diff, w, opts.estimator_h)?;
                    best = best.max(wminus_norm_estimate(&diff, w, &est_mesh)?);
                }
                best
            }
        };
        let fm_n = assemble(st_n, &mesh)?;
        let r_gap = resolvent_gap(&fm_n, &fm_q, lambda, opts.seed)?;
        rows.push(ConvergenceRow {
            n: *n,
            w_norm_gap: w_gap,
            resolvent_gap: r_gap,
        });
    }
    Ok(ConvergenceReport {
        rows,
        mesh_h: opts.mesh_h,
        half_width: l,
        lambda,
        seed: opts.seed,
        norm_note: "resolvent gaps are B-weighted matrix 2-norms on the truncated space",
    })
}

fn estimator_mesh(diff: &DistributionW1, window: i64, h: f64) -> Result<Mesh> {
    let (lo, hi) = (window as f64 - 2.0, window as f64 + 2.0);
    let mut breaks: Vec<f64> = Vec::new();
    breaks.extend(diff.g().materialize(lo, hi).breakpoints());
    breaks.extend(diff.h().materialize(lo, hi).breakpoints());
    match diff.period() {
        None => breaks.extend(diff.atoms().iter().map(|&(x, _)| x)),
        Some(t) => {
            for &(x, _) in diff.atoms() {
                let k_lo = ((lo - x) / t).ceil() as i64;
                let k_hi = ((hi - x) / t).floor() as i64;
                for k in k_lo..=k_hi {
                    breaks.push(x + k as f64 * t);
                }
            }
        }
    }
    Mesh::with_breakpoints(lo, hi, h, &breaks)
}

/// Residual `l(w) - lambda w - f` of a fiber-resolvent output, evaluated
/// at interior panel boundaries by five-point numerical differentiation of
/// the quasi-derivative (independent of the integral identities used to
/// build `w`).
pub fn fiber_residual(
    sigma: &PiecewiseFunction,
    tau: &PiecewiseFunction,
    resolvent: &crate::floquet::ThetaResolvent,
    f: &dyn Fn(f64) -> Complex64,
) -> Vec<f64> {
    let mut residuals = Vec::new();
    for &(s0, s1) in &resolvent.segment_ranges {
        if s1 - s0 < 4 {
            continue;
        }
        let h = resolvent.nodes[s0 + 1] - resolvent.nodes[s0];
        for i in (s0 + 2)..=(s1 - 2) {
            let t = resolvent.nodes[i];
            // five-point centered derivative of w^[1]
            let dqd = (-resolvent.w_qd[i + 2] + 8.0 * resolvent.w_qd[i + 1]
                - 8.0 * resolvent.w_qd[i - 1]
                + resolvent.w_qd[i - 2])
                / (12.0 * h);
            let s = sigma.evaluate(t);
            let ta = tau.evaluate(t);
            let w = resolvent.w[i];
            let wqd = resolvent.w_qd[i];
            let wprime = wqd + s * w;
            // l(w) = -(w^[1])' - sigma w' + tau w
            let lw = -dqd - s * wprime + ta * w;
            let res = lw - resolvent.lambda * w - f(t);
            residuals.push(res.norm());
        }
    }
    residuals
}
