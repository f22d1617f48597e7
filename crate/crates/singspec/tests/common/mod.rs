//! Shared generators and independent oracles for the integration suites.
//! Everything here is deliberately dumb and slow: brute-force grids,
//! finite differences, dense solves. None of it calls the code paths it
//! is used to check.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use singspec::distribution::{DistributionW1, TestFunction};
use singspec::piecewise::PiecewiseFunction;
use singspec::poly::Poly;

pub const SEED: u64 = 0x5EED;

pub fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

/// Random continuous piecewise-linear test function supported in [-5, 5].
pub fn random_test_function(rng: &mut ChaCha8Rng) -> TestFunction {
    let k = rng.gen_range(4..9usize);
    let mut xs = vec![rng.gen_range(-4.5..-1.0)];
    for _ in 0..k {
        let next = xs.last().unwrap() + rng.gen_range(0.15..1.1);
        xs.push(next);
    }
    let mut vals = vec![0.0];
    for _ in 1..k {
        vals.push(rng.gen_range(-1.0..1.0));
    }
    vals.push(0.0);
    TestFunction::from_samples(xs, vals).expect("generated samples are valid")
}

fn random_compact_piecewise(rng: &mut ChaCha8Rng, max_deg: usize) -> PiecewiseFunction {
    let k = rng.gen_range(2..5usize);
    let mut xs = vec![rng.gen_range(-3.0..-0.5)];
    for _ in 0..k {
        let next = xs.last().unwrap() + rng.gen_range(0.3..1.4);
        xs.push(next);
    }
    let pieces = (0..k)
        .map(|_| {
            let deg = rng.gen_range(0..=max_deg);
            Poly::from_coeffs((0..=deg).map(|_| rng.gen_range(-1.0..1.0)).collect())
        })
        .collect();
    PiecewiseFunction::compact(xs, pieces).expect("sorted breakpoints")
}

/// Random mixed distribution `g' + h + atoms` supported in [-4, 4].
pub fn random_distribution(rng: &mut ChaCha8Rng) -> DistributionW1 {
    let g = if rng.gen_bool(0.8) {
        random_compact_piecewise(rng, 2)
    } else {
        PiecewiseFunction::zero()
    };
    let h = if rng.gen_bool(0.8) {
        random_compact_piecewise(rng, 2)
    } else {
        PiecewiseFunction::zero()
    };
    let n_atoms = rng.gen_range(0..4usize);
    let mut atoms: Vec<(f64, f64)> = Vec::new();
    while atoms.len() < n_atoms {
        let x: f64 = rng.gen_range(-3.0..3.0);
        if atoms.iter().all(|&(y, _)| (x - y).abs() > 0.05) {
            atoms.push((x, rng.gen_range(-1.0..1.0)));
        }
    }
    DistributionW1::new(g, h, atoms, None).expect("valid random distribution")
}

/// A deterministic "messy" periodic potential: jumps, a polynomial bump
/// and an off-center atom in every cell.
pub fn messy_periodic_potential() -> DistributionW1 {
    let g = PiecewiseFunction::periodic(
        vec![0.0, 0.35, 0.7],
        vec![
            Poly::from_coeffs(vec![0.2, -0.5]),
            Poly::from_coeffs(vec![-0.1, 0.3, 0.4]),
            Poly::from_coeffs(vec![0.05]),
        ],
        1.0,
    )
    .unwrap();
    let h = PiecewiseFunction::periodic(
        vec![0.0, 0.5],
        vec![Poly::from_coeffs(vec![0.6]), Poly::from_coeffs(vec![-0.4, 0.2])],
        1.0,
    )
    .unwrap();
    DistributionW1::new(g, h, vec![(0.3, -0.8)], Some(1.0)).unwrap()
}

// ---------------------------------------------------------------------------
// brute-force window norm oracle
// ---------------------------------------------------------------------------

fn simpson_abs_pow(f: &PiecewiseFunction, a: f64, b: f64, power: i32, m: usize) -> f64 {
    // the right span end may sit on a jump of f; the span integral needs
    // the left limit there
    let h = (b - a) / m as f64;
    let eval = |x: f64| f.evaluate(x).abs().powi(power);
    let mut acc = eval(a) + f.left_limit(b).abs().powi(power);
    for j in 1..m {
        let w = if j % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * eval(a + j as f64 * h);
    }
    acc * h / 3.0
}

/// `int_t^{t+1} |f|^p` split at the breakpoints of `f` (where `f` may
/// jump), composite Simpson inside each smooth span.
fn window_integral_abs_pow(f: &PiecewiseFunction, t: f64, power: i32, m: usize) -> f64 {
    let mut cuts = vec![t, t + 1.0];
    cuts.extend(
        f.breakpoints()
            .iter()
            .copied()
            .filter(|&x| x > t && x < t + 1.0),
    );
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut acc = 0.0;
    for w in cuts.windows(2) {
        if w[1] - w[0] > 1e-12 {
            acc += simpson_abs_pow(f, w[0], w[1], power, m);
        }
    }
    acc
}

/// Grid search for `sup_t int_t^{t+1} |f|^p` (coarse step 1e-3, local
/// refinement 1e-6).
pub fn grid_window_sup(f: &PiecewiseFunction, power: i32, t_lo: f64, t_hi: f64) -> f64 {
    let coarse = 1e-3;
    let steps = ((t_hi - t_lo) / coarse).ceil() as usize;
    let mut best_t = t_lo;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=steps {
        let t = t_lo + (t_hi - t_lo) * i as f64 / steps as f64;
        let v = window_integral_abs_pow(f, t, power, 128);
        if v > best {
            best = v;
            best_t = t;
        }
    }
    let fine_lo = (best_t - coarse).max(t_lo);
    let fine_hi = (best_t + coarse).min(t_hi);
    let fine_steps = (((fine_hi - fine_lo) / 1e-6).ceil() as usize).clamp(1, 4000);
    for i in 0..=fine_steps {
        let t = fine_lo + (fine_hi - fine_lo) * i as f64 / fine_steps as f64;
        let v = window_integral_abs_pow(f, t, power, 1024);
        best = best.max(v);
    }
    best
}

// ---------------------------------------------------------------------------
// dense finite-difference oracle for the fiber problem (free potential)
// ---------------------------------------------------------------------------

fn thomas_complex(
    sub: &[Complex64],
    diag: &[Complex64],
    sup: &[Complex64],
    rhs: &[Complex64],
) -> Vec<Complex64> {
    let n = diag.len();
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    let mut d = vec![Complex64::new(0.0, 0.0); n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i - 1] * c[i - 1];
        if i < n - 1 {
            c[i] = sup[i] / m;
        }
        d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / m;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        let xi = x[i] - c[i] * x[i + 1];
        x[i] = xi;
    }
    x
}

/// Interior finite-difference solve of `-w'' + (q - lambda) w = rhs` on
/// the grid `t_j = j/n` with prescribed end values `w_0 = a`, `w_n = b`.
/// Returns the full vector including the end values.
fn fd_dirichlet_like(
    lambda: Complex64,
    q: &dyn Fn(f64) -> f64,
    rhs: &dyn Fn(f64) -> Complex64,
    a: Complex64,
    b: Complex64,
    n: usize,
) -> Vec<Complex64> {
    let h = 1.0 / n as f64;
    let h2 = h * h;
    let off = Complex64::new(-1.0 / h2, 0.0);
    let mut diag = Vec::with_capacity(n - 1);
    let mut r = Vec::with_capacity(n - 1);
    for j in 1..n {
        let t = j as f64 * h;
        diag.push(Complex64::new(2.0 / h2 + q(t), 0.0) - lambda);
        r.push(rhs(t));
    }
    r[0] -= off * a;
    r[n - 2] -= off * b;
    let sub = vec![off; n - 2];
    let sup = vec![off; n - 2];
    let inner = thomas_complex(&sub, &diag, &sup, &r);
    let mut w = Vec::with_capacity(n + 1);
    w.push(a);
    w.extend(inner);
    w.push(b);
    w
}

/// Solve `-w'' + (q - lambda) w = f` on [0, 1] with `w(1) = z w(0)`,
/// `w'(1) = z w'(0)` by second-order finite differences: superposition of
/// a particular solution with zero end values and the two homogeneous
/// FD solutions with unit end values; the derivative condition is closed
/// with one-sided second-order stencils. Returns `(grid, w)` with
/// `grid[j] = j/n`, `j = 0..n`.
pub fn fd_fiber_solve(
    theta: f64,
    lambda: Complex64,
    q: &dyn Fn(f64) -> f64,
    f: &dyn Fn(f64) -> Complex64,
    n: usize,
) -> (Vec<f64>, Vec<Complex64>) {
    let z = Complex64::from_polar(1.0, theta);
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let h = 1.0 / n as f64;

    let wp = fd_dirichlet_like(lambda, q, f, zero, zero, n);
    let u1 = fd_dirichlet_like(lambda, q, &|_| zero, one, zero, n);
    let u2 = fd_dirichlet_like(lambda, q, &|_| zero, zero, one, n);

    let d_left = |w: &[Complex64]| (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * h);
    let d_right = |w: &[Complex64]| (3.0 * w[n] - 4.0 * w[n - 1] + w[n - 2]) / (2.0 * h);

    // w = wp + A u1 + B u2 with w(0) = A, w(1) = B; conditions
    // B = z A and w'(1) = z w'(0)
    let num = d_right(&wp) - z * d_left(&wp);
    let den = z * d_left(&u1) + z * z * d_left(&u2) - d_right(&u1) - z * d_right(&u2);
    let a = num / den;
    let b = z * a;

    let grid: Vec<f64> = (0..=n).map(|j| j as f64 * h).collect();
    let w: Vec<Complex64> = (0..=n)
        .map(|j| wp[j] + a * u1[j] + b * u2[j])
        .collect();
    (grid, w)
}

// ---------------------------------------------------------------------------
// Kronig-Penney band-edge oracle from the frozen trace formula
// ---------------------------------------------------------------------------

/// All solutions of `|2 cos k + alpha sin(k)/k| = 2` in `[lo, hi]`, by a
/// dense scan of the closed-form trace refined by bisection.
pub fn kp_band_edges_oracle(alpha: f64, lo: f64, hi: f64) -> Vec<f64> {
    let model = singspec::oracles::KPModel { alpha, a: 1.0 };
    let trace = |lam: f64| singspec::oracles::kp_trace(model, lam);
    let mut edges = Vec::new();
    let steps = ((hi - lo) / 0.005).ceil() as usize;
    for target in [2.0, -2.0] {
        let g = |lam: f64| trace(lam) - target;
        let mut prev = g(lo);
        for i in 1..=steps {
            let lam = lo + (hi - lo) * i as f64 / steps as f64;
            let cur = g(lam);
            if prev == 0.0 {
                edges.push(lo + (hi - lo) * (i - 1) as f64 / steps as f64);
            } else if prev * cur < 0.0 {
                let a = lo + (hi - lo) * (i - 1) as f64 / steps as f64;
                edges.push(singspec::poly::bisect_root(g, a, lam));
            }
            prev = cur;
        }
    }
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    edges.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    edges
}
