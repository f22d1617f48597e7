//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its runtime when it holds. Run with
//! `cargo test --release --test acceptance -- --nocapture --test-threads=1`
//! to see every line.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;

use singspec::decompose::{decompose, decompose_periodic, local_sigma, SigmaTau};
use singspec::distribution::{pair, DistributionW1, TestFunction};
use singspec::floquet::{verify_monotonicity, CellOperator};
use singspec::galerkin::{
    assemble, convergence_experiment, eigen, fiber_residual, gamma_bound, wminus_norm_estimate,
    ConvergenceOptions, Mesh,
};
use singspec::oracles::{free_monodromy, kp_trace, KPModel};
use singspec::piecewise::PiecewiseFunction;
use singspec::poly::Poly;
use singspec::quasi_ode::{dirichlet_solutions, monodromy, pruefer_advance, Coefficients};

const TOL: f64 = 1e-10;

fn kp_sigma_tau() -> SigmaTau {
    decompose_periodic(&DistributionW1::delta_comb(1.0, 1.0).unwrap(), 1.0).unwrap()
}

fn kp_cell() -> CellOperator {
    let st = kp_sigma_tau();
    CellOperator::new(st.sigma, st.tau, TOL).unwrap()
}

fn free_cell() -> CellOperator {
    CellOperator::new(PiecewiseFunction::zero(), PiecewiseFunction::zero(), TOL).unwrap()
}

fn messy_cell() -> CellOperator {
    let st = decompose_periodic(&common::messy_periodic_potential(), 1.0).unwrap();
    CellOperator::new(st.sigma, st.tau, TOL).unwrap()
}

fn estimator_mesh(f: &DistributionW1, window: i64) -> Mesh {
    let (lo, hi) = (window as f64 - 2.0, window as f64 + 2.0);
    let mut breaks: Vec<f64> = Vec::new();
    breaks.extend(f.g().materialize(lo, hi).breakpoints());
    breaks.extend(f.h().materialize(lo, hi).breakpoints());
    breaks.extend(f.atoms().iter().map(|&(x, _)| x).filter(|x| *x > lo && *x < hi));
    Mesh::with_breakpoints(lo, hi, 1.0 / 64.0, &breaks).unwrap()
}

#[test]
fn criterion_01_free_particle_exactness() {
    let start = Instant::now();
    let c = Coefficients::free(Complex64::new(0.0, 0.0));
    let mut max_entry_dev = 0.0f64;
    let mut max_disc_dev = 0.0f64;
    for i in 0..50 {
        let lam = -5.0 + 105.0 * i as f64 / 49.0;
        let m = monodromy(&c.with_lambda(Complex64::new(lam, 0.0)), TOL).unwrap();
        let o = free_monodromy(Complex64::new(lam, 0.0));
        let dev = (m.m11 - o.m11)
            .norm()
            .max((m.m12 - o.m12).norm())
            .max((m.m21 - o.m21).norm())
            .max((m.m22 - o.m22).norm());
        max_entry_dev = max_entry_dev.max(dev);
        max_disc_dev = max_disc_dev.max((m.trace().re - o.trace().re).abs());
    }
    assert!(max_entry_dev <= 1e-8, "monodromy deviation {max_entry_dev:.3e} > 1e-8");
    assert!(max_disc_dev <= 1e-8, "discriminant deviation {max_disc_dev:.3e}");

    let bs = free_cell().band_edges(-1.0, 100.0).unwrap();
    assert!(bs.bands.len() >= 3);
    let mut max_gap = 0.0f64;
    for i in 0..bs.bands.len() {
        if let Some(g) = bs.gap_after(i) {
            max_gap = max_gap.max(g);
        }
    }
    assert!(max_gap <= 1e-6, "free gaps must close, worst {max_gap:.3e}");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() <= 5.0, "runtime {elapsed:?} > 5 s");
    println!(
        "criterion 1 PASS: free-particle exactness (entries {max_entry_dev:.2e}, \
         gaps {max_gap:.2e}) in {elapsed:.2?}"
    );
}

#[test]
fn criterion_02_kronig_penney_cross_validation() {
    let start = Instant::now();
    let cell = kp_cell();
    let model = KPModel { alpha: 1.0, a: 1.0 };

    let mut max_trace_dev = 0.0f64;
    for i in 0..50 {
        let lam = -5.0 + 65.0 * i as f64 / 49.0;
        let d = cell.discriminant(lam).unwrap();
        max_trace_dev = max_trace_dev.max((d - kp_trace(model, lam)).abs());
    }
    assert!(max_trace_dev <= 1e-8, "trace deviation {max_trace_dev:.3e} > 1e-8");

    let bs = cell.band_edges(-1.0, 60.0).unwrap();
    let oracle_edges = common::kp_band_edges_oracle(1.0, -1.0, 60.0);
    let mut ours: Vec<f64> = Vec::new();
    for band in &bs.bands {
        ours.push(band.lo);
        if !band.hi_clipped {
            ours.push(band.hi);
        }
    }
    assert!(
        ours.len() <= oracle_edges.len(),
        "more edges than the oracle found: {ours:?} vs {oracle_edges:?}"
    );
    let mut max_edge_dev = 0.0f64;
    for (a, b) in ours.iter().zip(oracle_edges.iter()) {
        max_edge_dev = max_edge_dev.max((a - b).abs());
    }
    assert!(max_edge_dev <= 1e-6, "band edge deviation {max_edge_dev:.3e} > 1e-6");

    let pi_edge_dev = (bs.bands[0].hi - PI * PI).abs();
    assert!(pi_edge_dev <= 1e-8, "pi^2 edge deviation {pi_edge_dev:.3e} > 1e-8");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() <= 30.0, "runtime {elapsed:?} > 30 s");
    println!(
        "criterion 2 PASS: KP cross-validation (trace {max_trace_dev:.2e}, edges \
         {max_edge_dev:.2e}, pi^2 edge {pi_edge_dev:.2e}) in {elapsed:.2?}"
    );
}

#[test]
fn criterion_03_structure_theorem_round_trip() {
    let start = Instant::now();
    let mut rng = common::rng();
    let mut worst_rt = 0.0f64;
    let mut worst_bound_margin = f64::INFINITY;
    for case in 0..20 {
        let f = common::random_distribution(&mut rng);
        let st = decompose(&f, -5, 5).unwrap();
        let recon = st.as_distribution();
        for _ in 0..100 {
            let psi = common::random_test_function(&mut rng);
            let lhs = pair(&f, &psi);
            let rhs = pair(&recon, &psi);
            let budget = 1e-9 * (1.0 + psi.h1_norm());
            let dev = (lhs - rhs).abs();
            worst_rt = worst_rt.max(dev / budget);
            assert!(dev <= budget, "case {case}: round trip {dev:.3e} > {budget:.3e}");
        }
        // exact support of every window piece
        for n in -5..=5 {
            let piece = local_sigma(&f, n).unwrap();
            assert!(piece.sigma_n.has_zero_tails());
            if let Some((lo, hi)) = piece.sigma_n.compact_support() {
                assert!(
                    lo >= n as f64 - 1.0 - 1e-12 && hi <= n as f64 + 1.0 + 1e-12,
                    "case {case}, window {n}: support [{lo}, {hi}]"
                );
            }
        }
        // uniform dual-norm estimate dominates the step heights
        let mut west = 0.0f64;
        for w in -5..=5 {
            let mesh = estimator_mesh(&f, w);
            west = west.max(wminus_norm_estimate(&f, w, &mesh).unwrap());
        }
        let sup_tau = st.sup_abs_tau();
        if sup_tau > 0.0 {
            worst_bound_margin = worst_bound_margin.min(3.0 * west * 1.05 / sup_tau);
        }
        assert!(
            sup_tau <= 3.0 * west * 1.05 + 1e-12,
            "case {case}: sup|tau| = {sup_tau:.6} > 3 * {west:.6} * 1.05"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() <= 60.0, "runtime {elapsed:?} > 60 s");
    println!(
        "criterion 3 PASS: structure-theorem round trip (worst residual at \
         {:.1}% of budget, tau-bound margin {worst_bound_margin:.2}) in {elapsed:.2?}",
        100.0 * worst_rt
    );
}

#[test]
fn criterion_04_determinant_and_wronskian() {
    let start = Instant::now();
    let kp = kp_sigma_tau();
    let messy = decompose_periodic(&common::messy_periodic_potential(), 1.0).unwrap();
    let potentials: Vec<(&str, PiecewiseFunction, PiecewiseFunction)> = vec![
        ("free", PiecewiseFunction::zero(), PiecewiseFunction::zero()),
        ("kp", kp.sigma.clone(), kp.tau.clone()),
        ("messy", messy.sigma.clone(), messy.tau.clone()),
    ];
    let lambdas = [
        Complex64::new(-4.0, 0.0),
        Complex64::new(0.7, 0.0),
        Complex64::new(27.0, 0.0),
        Complex64::new(2.5, 1.0),
        Complex64::new(-3.0, 0.5),
        Complex64::new(40.0, -2.0),
        Complex64::new(11.0, 3.0),
    ];
    let nodes: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let mut worst_det = 0.0f64;
    let mut worst_wronskian = 0.0f64;
    for (name, sigma, tau) in &potentials {
        for &lam in &lambdas {
            let c = Coefficients::new(sigma.clone(), tau.clone(), lam);
            let m = monodromy(&c, TOL).unwrap();
            let det_dev = (m.det() - Complex64::new(1.0, 0.0)).norm();
            worst_det = worst_det.max(det_dev);
            assert!(det_dev <= 10.0 * TOL, "{name}, lambda {lam}: det dev {det_dev:.3e}");
            if lam.im.abs() >= 0.5 {
                let d = dirichlet_solutions(&c, TOL, &nodes).unwrap();
                for i in 0..nodes.len() {
                    let w_dev = (d.wronskian(i) - Complex64::new(1.0, 0.0)).norm();
                    worst_wronskian = worst_wronskian.max(w_dev);
                    assert!(
                        w_dev <= 10.0 * TOL,
                        "{name}, lambda {lam}, t = {}: Wronskian dev {w_dev:.3e}",
                        nodes[i]
                    );
                }
            }
        }
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 4 PASS: det M (worst {worst_det:.2e}) and Wronskian \
         (worst {worst_wronskian:.2e}) within 10*tol in {elapsed:.2?}"
    );
}

#[test]
fn criterion_05_monotonicity_suite() {
    let start = Instant::now();
    let mut violations = 0usize;

    // Pruefer angle strictly increasing in lambda
    let kp = kp_sigma_tau();
    let messy = decompose_periodic(&common::messy_periodic_potential(), 1.0).unwrap();
    let potentials: Vec<(&str, PiecewiseFunction, PiecewiseFunction)> = vec![
        ("free", PiecewiseFunction::zero(), PiecewiseFunction::zero()),
        ("kp", kp.sigma.clone(), kp.tau.clone()),
        ("messy", messy.sigma.clone(), messy.tau.clone()),
    ];
    for (name, sigma, tau) in &potentials {
        let mut prev = f64::NEG_INFINITY;
        for i in 0..50 {
            let lam = -5.0 + 65.0 * i as f64 / 49.0;
            let c = Coefficients::new(sigma.clone(), tau.clone(), Complex64::new(lam, 0.0));
            let theta1 = pruefer_advance(&c, 0.0, TOL).unwrap().theta1;
            if theta1 <= prev {
                violations += 1;
                eprintln!("{name}: theta(1, {lam}) = {theta1} not increasing");
            }
            prev = theta1;
        }
    }

    // discriminant strictly monotone inside every band; dispersion branches
    // strictly monotone on both half circles; fiber eigenvalues cover bands
    let cells = [("free", free_cell()), ("kp", kp_cell()), ("messy", messy_cell())];
    let thetas: Vec<f64> = (1..64).map(|j| j as f64 * 2.0 * PI / 64.0).collect();
    let cover_thetas: Vec<f64> = (0..64).map(|j| j as f64 * 2.0 * PI / 64.0).collect();
    for (name, cell) in &cells {
        let bs = cell.band_edges(-1.0, 60.0).unwrap();
        for (bi, band) in bs.bands.iter().enumerate() {
            if band.hi_clipped {
                continue;
            }
            let width = band.hi - band.lo;
            let mut prev = cell.discriminant(band.lo + width / 64.0).unwrap();
            let mut direction = 0.0f64;
            for i in 1..32 {
                let lam = band.lo + width * (i as f64 + 0.5) / 33.0;
                let d = cell.discriminant(lam).unwrap();
                let step = d - prev;
                if direction == 0.0 {
                    direction = step.signum();
                } else if step.signum() != direction || step == 0.0 {
                    violations += 1;
                    eprintln!("{name} band {bi}: discriminant not monotone at {lam}");
                }
                prev = d;
            }

            let branch = cell.dispersion(band, &thetas).unwrap();
            let report = verify_monotonicity(&branch);
            assert!(report.lower_samples >= 16 && report.upper_samples >= 16);
            if !report.is_strictly_monotone() {
                violations += report.violations.len();
                eprintln!("{name} band {bi}: {:?}", report.violations);
            }

            // band covering by fiber eigenvalues across the theta grid
            let mut inside: Vec<f64> = Vec::new();
            for &theta in &cover_thetas {
                let evs = cell.theta_eigenvalues_in(&bs, theta).unwrap();
                inside.push(evs[bi]);
            }
            inside.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let cover_lo = inside.first().unwrap() - band.lo;
            let cover_hi = band.hi - inside.last().unwrap();
            let max_gap = inside
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(0.0f64, f64::max);
            if cover_lo > 0.02 * width || cover_hi > 0.02 * width || max_gap > 0.15 * width {
                violations += 1;
                eprintln!(
                    "{name} band {bi}: covering defect lo {cover_lo:.3e} hi {cover_hi:.3e} \
                     gap {max_gap:.3e} (width {width:.3})"
                );
            }
        }
    }

    assert_eq!(violations, 0, "{violations} monotonicity violations");
    let elapsed = start.elapsed();
    println!("criterion 5 PASS: zero monotonicity violations in {elapsed:.2?}");
}

#[test]
fn criterion_06_form_and_shooting_agree() {
    let start = Instant::now();
    // delta comb shifted to mid-cell so the atoms act inside the Dirichlet
    // cell (at integer positions the boundary condition annihilates them
    // and both sides reduce to the free problem)
    let comb = DistributionW1::new(
        PiecewiseFunction::zero(),
        PiecewiseFunction::zero(),
        vec![(0.5, 1.0)],
        Some(1.0),
    )
    .unwrap();
    let st = decompose_periodic(&comb, 1.0).unwrap();
    let cell = CellOperator::new(st.sigma.clone(), st.tau.clone(), TOL).unwrap();

    let mut shooting = Vec::with_capacity(5);
    for k in 1..=5 {
        shooting.push(cell.dirichlet_eigenvalue(k, -1.0, 300.0).unwrap());
    }

    let mut breaks: Vec<f64> = st.sigma.materialize(0.0, 1.0).breakpoints().to_vec();
    breaks.extend(st.tau.materialize(0.0, 1.0).breakpoints());
    let mesh = Mesh::with_breakpoints(0.0, 1.0, 1.0 / 512.0, &breaks).unwrap();
    let fm = assemble(&st, &mesh).unwrap();
    let galerkin_eigs = eigen(&fm, 5).unwrap();

    let mut worst_rel = 0.0f64;
    for (k, (sh, ga)) in shooting.iter().zip(&galerkin_eigs).enumerate() {
        let rel = (sh - ga).abs() / sh.abs();
        worst_rel = worst_rel.max(rel);
        assert!(rel <= 1e-3, "eigenvalue {k}: shooting {sh} vs Galerkin {ga} (rel {rel:.3e})");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() <= 60.0, "runtime {elapsed:?} > 60 s");
    println!(
        "criterion 6 PASS: lowest 5 Galerkin vs shooting eigenvalues agree \
         (worst rel {worst_rel:.2e}) in {elapsed:.2?}"
    );
}

#[test]
fn criterion_07_window_inequalities() {
    let start = Instant::now();
    let mut rng = common::rng();
    let mut checked = 0usize;
    for _ in 0..1000 {
        // random continuous piecewise-linear f on [0, 1]
        let k = rng.gen_range(2..9usize);
        let mut xs = vec![0.0];
        for i in 1..k {
            xs.push(i as f64 / k as f64 + rng.gen_range(-0.3..0.3) / k as f64);
        }
        xs.push(1.0);
        let vals: Vec<f64> = (0..=k).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let mut pieces = Vec::with_capacity(k);
        for i in 0..k {
            let slope = (vals[i + 1] - vals[i]) / (xs[i + 1] - xs[i]);
            pieces.push(Poly::from_coeffs(vec![vals[i] - slope * xs[i], slope]));
        }
        let f = PiecewiseFunction::compact(xs.clone(), pieces).unwrap();
        let df = f.derivative();

        // exact integrals in the piecewise class
        let max_sq = vals.iter().fold(0.0f64, |m, v| m.max(v * v));
        let int_df_sq = df.mul(&df).unwrap().integral(0.0, 1.0);
        let int_f_sq = f.mul(&f).unwrap().integral(0.0, 1.0);
        let int_dff_sq = df
            .mul(&f)
            .unwrap()
            .mul(&df.mul(&f).unwrap())
            .unwrap()
            .integral(0.0, 1.0);

        for eps in [1.0, 0.5, 0.25, 0.125] {
            let rhs1 = eps * int_df_sq + 8.0 / eps * int_f_sq;
            assert!(
                max_sq <= rhs1 + 1e-12,
                "max|f|^2 = {max_sq} > {rhs1} (eps {eps})"
            );
            let rhs2 = eps * int_df_sq + 4.0 / (eps * eps * eps) * int_f_sq;
            assert!(
                int_dff_sq.max(0.0).sqrt() <= rhs2 + 1e-12,
                "(int |f'f|^2)^(1/2) = {} > {rhs2} (eps {eps})",
                int_dff_sq.sqrt()
            );
            checked += 2;
        }
    }
    let elapsed = start.elapsed();
    println!("criterion 7 PASS: {checked} window inequalities, zero violations in {elapsed:.2?}");
}

#[test]
fn criterion_08_resolvent_convergence() {
    let start = Instant::now();
    let q = DistributionW1::delta_comb(1.0, 1.0).unwrap();
    let opts = ConvergenceOptions::default();
    let report = convergence_experiment(&q, &[4, 8, 16, 32, 64], &opts).unwrap();

    println!("criterion 8 table (lambda = {:.3}):", report.lambda);
    println!("  n    w_norm_gap     resolvent_gap  ratio");
    for row in &report.rows {
        println!(
            "  {:<4} {:<14.6e} {:<14.6e} {:.6e}",
            row.n,
            row.w_norm_gap,
            row.resolvent_gap,
            row.ratio()
        );
    }

    // strictly decreasing resolvent gaps; both columns nonincreasing up to
    // the report invariant's slack factor 1.2
    for w in report.rows.windows(2) {
        assert!(
            w[1].resolvent_gap < w[0].resolvent_gap,
            "resolvent gap not strictly decreasing: {} -> {}",
            w[0].resolvent_gap,
            w[1].resolvent_gap
        );
        assert!(w[1].w_norm_gap <= 1.2 * w[0].w_norm_gap);
        assert!(w[1].resolvent_gap <= 1.2 * w[0].resolvent_gap);
    }
    // single linear-control constant across all levels
    const K: f64 = 0.01;
    for row in &report.rows {
        assert!(
            row.resolvent_gap <= K * row.w_norm_gap,
            "n = {}: resolvent gap {} > K * {} with K = {K}",
            row.n,
            row.resolvent_gap,
            row.w_norm_gap
        );
    }
    let last = report.rows.last().unwrap();
    assert!(
        last.resolvent_gap < 1e-2,
        "resolvent gap at n = 64 is {}",
        last.resolvent_gap
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() <= 120.0, "runtime {elapsed:?} > 120 s");

    // The final sub-criterion is stated as "both columns below 1e-2 at
    // n = 64". The dual-norm column cannot reach it: mollifying a delta at
    // width 1/n moves it by ~0.32 n^{-1/2} in the unit-window dual norm
    // (the measured column follows that rate), giving ~3e-2 at n = 64; the
    // threshold would need n ~ 1024. Asserted as stated; see the ledger.
    assert!(
        last.w_norm_gap < 1e-2,
        "w_norm_gap at n = 64 is {:.4e} >= 1e-2: the dual-norm column of the \
         mollification experiment converges at the intrinsic rate ~0.32/sqrt(n) \
         (measured {:.3} at n = 4 down to {:.3e} at n = 64, ratio ~1/sqrt(2) per \
         doubling), so the 1e-2 threshold is unattainable at n = 64; all other \
         sub-criteria of criterion 8 passed (strict decrease, single K = {K}, \
         resolvent gap {:.3e} < 1e-2, runtime {:.1?} <= 120 s)",
        last.w_norm_gap,
        report.rows[0].w_norm_gap,
        last.w_norm_gap,
        last.resolvent_gap,
        elapsed
    );
    println!("criterion 8 PASS in {elapsed:.2?}");
}

#[test]
fn criterion_09_lower_bound() {
    let start = Instant::now();
    let free = SigmaTau {
        sigma: PiecewiseFunction::zero(),
        tau: PiecewiseFunction::zero(),
        provenance: Vec::new(),
    };
    assert_eq!(gamma_bound(&free).unwrap(), -6.0, "gamma(0, 0) must be exactly -6");

    let tau_one = SigmaTau {
        sigma: PiecewiseFunction::zero(),
        tau: PiecewiseFunction::constant(1.0),
        provenance: Vec::new(),
    };
    let kp = kp_sigma_tau();
    let shifted = decompose_periodic(
        &DistributionW1::new(
            PiecewiseFunction::zero(),
            PiecewiseFunction::zero(),
            vec![(0.5, 1.0)],
            Some(1.0),
        )
        .unwrap(),
        1.0,
    )
    .unwrap();
    let messy = decompose_periodic(&common::messy_periodic_potential(), 1.0).unwrap();
    let delta = decompose(&DistributionW1::delta(0.0, 1.0), -3, 3).unwrap();
    let mut rng = common::rng();
    let random = decompose(&common::random_distribution(&mut rng), -5, 5).unwrap();

    let corpus: Vec<(&str, SigmaTau)> = vec![
        ("free", free),
        ("tau=1", tau_one),
        ("kp", kp),
        ("kp-shifted", shifted),
        ("messy", messy),
        ("delta", delta),
        ("random", random),
    ];
    let mut worst_margin = f64::INFINITY;
    for (name, st) in &corpus {
        let mut breaks: Vec<f64> = st.sigma.materialize(-8.0, 8.0).breakpoints().to_vec();
        breaks.extend(st.tau.materialize(-8.0, 8.0).breakpoints());
        let mesh = Mesh::with_breakpoints(-8.0, 8.0, 1.0 / 32.0, &breaks).unwrap();
        let fm = assemble(st, &mesh).unwrap();
        let lowest = eigen(&fm, 1).unwrap()[0];
        let gamma = gamma_bound(st).unwrap();
        worst_margin = worst_margin.min(lowest - (gamma - 0.5));
        assert!(
            lowest >= gamma - 0.5,
            "{name}: lowest eigenvalue {lowest} < gamma - 0.5 = {}",
            gamma - 0.5
        );
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 9 PASS: semiboundedness over {} potentials \
         (worst margin {worst_margin:.2}) in {elapsed:.2?}",
        corpus.len()
    );
}

#[test]
fn criterion_10_fiber_resolvent() {
    let start = Instant::now();
    let mut rng = common::rng();
    let cells = [("kp", kp_cell()), ("messy", messy_cell())];
    let mut worst_residual = 0.0f64;
    for case in 0..10 {
        let (name, cell) = &cells[case % 2];
        let theta = rng.gen_range(0.3..5.9);
        let lambda = Complex64::new(rng.gen_range(0.0..30.0), rng.gen_range(0.5..2.0));
        let coeffs: Vec<Complex64> = (0..4)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let f = move |t: f64| {
            coeffs[0] + coeffs[1] * t + coeffs[2] * t * t + coeffs[3] * t * t * t
        };
        let r = cell.fiber_resolvent(theta, lambda, &f).unwrap();
        assert!(r.d_theta.norm() > 1e-12, "singular fiber system");
        let (sigma, tau) = (cell.sigma(), cell.tau());
        let residuals = fiber_residual(sigma, tau, &r, &f);
        assert!(!residuals.is_empty());
        let max_res = residuals.iter().cloned().fold(0.0f64, f64::max);
        worst_residual = worst_residual.max(max_res);
        assert!(
            max_res <= 1e-5,
            "case {case} ({name}): residual {max_res:.3e} > 1e-5 at theta {theta:.3}, \
             lambda {lambda}"
        );
    }

    // analyticity of alpha_1 in theta: Cauchy-Riemann stencil
    let cell = kp_cell();
    let lambda = Complex64::new(2.0, 0.8);
    let f = |t: f64| Complex64::new(1.0 + 0.3 * t, -0.2 * t * t);
    let theta0 = Complex64::new(2.0, 0.0);
    let h = 1e-3;
    let alpha = |th: Complex64| -> Complex64 {
        cell.fiber_resolvent_at(th, lambda, &f).unwrap().alpha1
    };
    let d_real = (alpha(theta0 + h) - alpha(theta0 - h)) / (2.0 * h);
    let d_imag = (alpha(theta0 + Complex64::new(0.0, h)) - alpha(theta0 - Complex64::new(0.0, h)))
        / Complex64::new(0.0, 2.0 * h);
    let cr_residual = (d_real - d_imag).norm();
    assert!(cr_residual <= 1e-5, "Cauchy-Riemann residual {cr_residual:.3e} > 1e-5");

    let elapsed = start.elapsed();
    println!(
        "criterion 10 PASS: fiber resolvent residuals (worst {worst_residual:.2e}) \
         and alpha analyticity ({cr_residual:.2e}) in {elapsed:.2?}"
    );
}
