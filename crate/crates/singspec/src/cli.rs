//! Pipeline driver behind the `singspec` binary: resolves a run
//! configuration (config file < command-line overrides < defaults), runs
//! one of the pipelines, and emits CSV/JSON artifacts plus a run manifest.
//!
//! Outputs are deterministic for a fixed configuration and seed: CSV
//! bodies are byte-identical across runs; only the manifest carries wall
//! time.

use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decompose::{decompose, decompose_periodic, SigmaTau};
use crate::distribution::DistributionW1;
use crate::error::{Error, Result};
use crate::floquet::{rescale_to_unit_cell, BandStructure, CellOperator};
use crate::galerkin::{convergence_experiment, ConvergenceOptions};
use crate::oracles::{conjugate_to_quasi, kp_transfer_matrix, KPModel};
use crate::potfile::{self, fmt_float, PotentialSpec};
use crate::quasi_ode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Decompose,
    Bands,
    Dispersion,
    Eigs,
    Converge,
    KpCheck,
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Decompose => "decompose",
            CommandKind::Bands => "bands",
            CommandKind::Dispersion => "dispersion",
            CommandKind::Eigs => "eigs",
            CommandKind::Converge => "converge",
            CommandKind::KpCheck => "kp-check",
        }
    }
}

/// Optional fields as supplied by flags or a config file; `None` falls back
/// to the default.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub potential: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub theta_grid: Option<usize>,
    pub mesh_h: Option<f64>,
    #[serde(rename = "L")]
    pub half_width: Option<f64>,
    pub seed: Option<u64>,
    pub n_min: Option<i64>,
    pub n_max: Option<i64>,
    pub levels: Option<Vec<u32>>,
    pub lambda_resolvent: Option<f64>,
}

impl PartialConfig {
    /// Field-wise overlay: `self` wins over `base`.
    pub fn over(self, base: PartialConfig) -> PartialConfig {
        PartialConfig {
            potential: self.potential.or(base.potential),
            out: self.out.or(base.out),
            tol: self.tol.or(base.tol),
            lambda_min: self.lambda_min.or(base.lambda_min),
            lambda_max: self.lambda_max.or(base.lambda_max),
            theta_grid: self.theta_grid.or(base.theta_grid),
            mesh_h: self.mesh_h.or(base.mesh_h),
            half_width: self.half_width.or(base.half_width),
            seed: self.seed.or(base.seed),
            n_min: self.n_min.or(base.n_min),
            n_max: self.n_max.or(base.n_max),
            levels: self.levels.or(base.levels),
            lambda_resolvent: self.lambda_resolvent.or(base.lambda_resolvent),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub potential_path: PathBuf,
    pub out_dir: PathBuf,
    pub tol: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub theta_grid: usize,
    pub mesh_h: f64,
    pub half_width: f64,
    pub seed: u64,
    pub n_min: i64,
    pub n_max: i64,
    pub levels: Vec<u32>,
    pub lambda_resolvent: Option<f64>,
}

impl RunConfig {
    pub fn resolve(command: CommandKind, p: PartialConfig) -> Result<RunConfig> {
        let potential_path = p
            .potential
            .ok_or_else(|| Error::Invalid("--potential <path> is required".into()))?;
        let cfg = RunConfig {
            command,
            potential_path,
            out_dir: p.out.unwrap_or_else(|| PathBuf::from(".")),
            tol: p.tol.unwrap_or(1e-10),
            lambda_min: p.lambda_min.unwrap_or(-1.0),
            lambda_max: p.lambda_max.unwrap_or(60.0),
            theta_grid: p.theta_grid.unwrap_or(64),
            mesh_h: p.mesh_h.unwrap_or(1.0 / 64.0),
            half_width: p.half_width.unwrap_or(16.0),
            seed: p.seed.unwrap_or(0x5EED),
            n_min: p.n_min.unwrap_or(-8),
            n_max: p.n_max.unwrap_or(8),
            levels: p.levels.unwrap_or_else(|| vec![4, 8, 16, 32, 64]),
            lambda_resolvent: p.lambda_resolvent,
        };
        if !(cfg.tol > 0.0) {
            return Err(Error::Invalid("tol must be positive".into()));
        }
        if !(cfg.lambda_max > cfg.lambda_min) {
            return Err(Error::Invalid("need lambda_min < lambda_max".into()));
        }
        if cfg.theta_grid < 2 {
            return Err(Error::Invalid("theta grid needs at least 2 points".into()));
        }
        if !(cfg.mesh_h > 0.0) || !(cfg.half_width > 0.0) {
            return Err(Error::Invalid("mesh parameters must be positive".into()));
        }
        if cfg.levels.is_empty() || cfg.levels.iter().any(|&n| n == 0) {
            return Err(Error::Invalid("mollifier levels must be positive".into()));
        }
        Ok(cfg)
    }
}

/// Run one pipeline; returns a short human-readable summary.
pub fn run(config: &RunConfig) -> Result<String> {
    let started = Instant::now();
    std::fs::create_dir_all(&config.out_dir)?;
    let potential = potfile::parse_spec(&config.potential_path)?;
    let summary = match config.command {
        CommandKind::Decompose => run_decompose(config, &potential)?,
        CommandKind::Bands => run_bands(config, &potential)?,
        CommandKind::Dispersion => run_dispersion(config, &potential)?,
        CommandKind::Eigs => run_eigs(config, &potential)?,
        CommandKind::Converge => run_converge(config, &potential)?,
        CommandKind::KpCheck => run_kp_check(config, &potential)?,
    };
    write_manifest(config, started.elapsed().as_secs_f64(), &summary)?;
    Ok(summary)
}

fn write_manifest(config: &RunConfig, wall_time_s: f64, summary: &str) -> Result<()> {
    let manifest = serde_json::json!({
        "command": config.command.name(),
        "config": config,
        "version": env!("CARGO_PKG_VERSION"),
        "wall_time_s": wall_time_s,
        "summary": summary,
    });
    std::fs::write(
        config.out_dir.join("run_manifest.json"),
        serde_json::to_string_pretty(&manifest)? + "\n",
    )?;
    Ok(())
}

fn write_file(dir: &Path, name: &str, body: &str) -> Result<()> {
    std::fs::write(dir.join(name), body)?;
    Ok(())
}

fn decompose_potential(config: &RunConfig, q: &DistributionW1) -> Result<SigmaTau> {
    match q.period() {
        Some(t) => decompose_periodic(q, t),
        None => decompose(q, config.n_min, config.n_max),
    }
}

fn run_decompose(config: &RunConfig, q: &DistributionW1) -> Result<String> {
    let st = decompose_potential(config, q)?;
    let as_dist = DistributionW1::from_sigma_tau(st.sigma.clone(), st.tau.clone());
    let spec = PotentialSpec::from_distribution(&as_dist)?;
    write_file(&config.out_dir, "decomposed.json", &potfile::write_spec(&spec))?;
    let mut sidecar = String::from("[\n");
    for (i, (n, a)) in st.provenance.iter().enumerate() {
        if i > 0 {
            sidecar.push_str(",\n");
        }
        sidecar.push_str(&format!("  {{\"n\": {n}, \"a_n\": {}}}", fmt_float(*a)));
    }
    sidecar.push_str("\n]\n");
    write_file(&config.out_dir, "provenance.json", &sidecar)?;
    Ok(format!(
        "decomposed into sigma ({} pieces) and tau; {} window coefficients",
        st.sigma.pieces().len(),
        st.provenance.len()
    ))
}

/// Build the unit-period cell operator, returning the scale factor `a`
/// such that reported energies are `lambda = lambda_hat / a^2`.
fn unit_cell(config: &RunConfig, q: &DistributionW1) -> Result<(CellOperator, f64)> {
    let Some(period) = q.period() else {
        return Err(Error::Invalid(format!(
            "`{}` needs a periodic potential",
            config.command.name()
        )));
    };
    let st = decompose_periodic(q, period)?;
    let (sigma, tau) = rescale_to_unit_cell(&st.sigma, &st.tau, period);
    Ok((CellOperator::new(sigma, tau, config.tol)?, period))
}

fn compute_bands(config: &RunConfig, q: &DistributionW1) -> Result<(CellOperator, f64, BandStructure)> {
    let (cell, a) = unit_cell(config, q)?;
    let scale = a * a;
    let structure = cell.band_edges(config.lambda_min * scale, config.lambda_max * scale)?;
    Ok((cell, a, structure))
}

fn run_bands(config: &RunConfig, q: &DistributionW1) -> Result<String> {
    let (_, a, structure) = compute_bands(config, q)?;
    let scale = a * a;
    let mut csv = String::from("k,lo,hi,gap_after\n");
    for (i, band) in structure.bands.iter().enumerate() {
        let gap = structure
            .gap_after(i)
            .map(|g| g / scale)
            .unwrap_or(f64::NAN);
        csv.push_str(&format!(
            "{},{},{},{}\n",
            band.index,
            fmt_float(band.lo / scale),
            fmt_float(band.hi / scale),
            fmt_float(gap)
        ));
    }
    write_file(&config.out_dir, "bands.csv", &csv)?;
    Ok(format!("located {} bands", structure.bands.len()))
}

fn dispersion_thetas(m: usize) -> Vec<f64> {
    (1..m)
        .map(|j| j as f64 * 2.0 * std::f64::consts::PI / m as f64)
        .collect()
}

fn run_dispersion(config: &RunConfig, q: &DistributionW1) -> Result<String> {
    let (cell, a, structure) = compute_bands(config, q)?;
    let scale = a * a;
    let thetas = dispersion_thetas(config.theta_grid);
    let branches = structure
        .bands
        .par_iter()
        .filter(|b| !b.hi_clipped)
        .map(|band| cell.dispersion(band, &thetas))
        .collect::<Result<Vec<_>>>()?;
    let mut csv = String::from("k,theta,lambda\n");
    for branch in &branches {
        for (theta, lam) in &branch.samples {
            csv.push_str(&format!(
                "{},{},{}\n",
                branch.index,
                fmt_float(*theta),
                fmt_float(lam / scale)
            ));
        }
    }
    write_file(&config.out_dir, "dispersion.csv", &csv)?;
    Ok(format!(
        "sampled {} branches at {} angles",
        branches.len(),
        thetas.len()
    ))
}

fn run_eigs(config: &RunConfig, q: &DistributionW1) -> Result<String> {
    let (cell, a, structure) = compute_bands(config, q)?;
    let scale = a * a;
    let m = config.theta_grid;
    let thetas: Vec<f64> = (0..m)
        .map(|j| j as f64 * 2.0 * std::f64::consts::PI / m as f64)
        .collect();
    let per_theta = thetas
        .par_iter()
        .map(|&theta| Ok((theta, cell.theta_eigenvalues_in(&structure, theta)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut csv = String::from("theta,k,lambda\n");
    let mut count = 0usize;
    for (theta, evs) in &per_theta {
        for (i, lam) in evs.iter().enumerate() {
            csv.push_str(&format!(
                "{},{},{}\n",
                fmt_float(*theta),
                structure.bands[i].index,
                fmt_float(lam / scale)
            ));
            count += 1;
        }
    }
    write_file(&config.out_dir, "eigs.csv", &csv)?;
    Ok(format!("computed {count} fiber eigenvalues"))
}

fn run_converge(config: &RunConfig, q: &DistributionW1) -> Result<String> {
    let opts = ConvergenceOptions {
        half_width: config.half_width,
        mesh_h: config.mesh_h,
        lambda: config.lambda_resolvent,
        seed: config.seed,
        estimator_h: config.mesh_h.min(1.0 / 64.0),
    };
    let report = convergence_experiment(q, &config.levels, &opts)?;
    let mut csv = String::new();
    csv.push_str(&format!("# mesh_h = {}\n", fmt_float(report.mesh_h)));
    csv.push_str(&format!("# L = {}\n", fmt_float(report.half_width)));
    csv.push_str(&format!("# lambda = {}\n", fmt_float(report.lambda)));
    csv.push_str(&format!("# seed = {}\n", report.seed));
    csv.push_str(&format!("# note: {}\n", report.norm_note));
    csv.push_str("n,w_norm_gap,resolvent_gap,ratio\n");
    for row in &report.rows {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            row.n,
            fmt_float(row.w_norm_gap),
            fmt_float(row.resolvent_gap),
            fmt_float(row.ratio())
        ));
    }
    write_file(&config.out_dir, "convergence.csv", &csv)?;
    Ok(format!(
        "convergence experiment over {} mollification levels (lambda = {:.3})",
        report.rows.len(),
        report.lambda
    ))
}

fn run_kp_check(config: &RunConfig, q: &DistributionW1) -> Result<String> {
    let Some(period) = q.period() else {
        return Err(Error::Invalid("kp-check needs a periodic delta comb".into()));
    };
    if !q.g().is_identically_zero() || !q.h().is_identically_zero() || q.atoms().len() != 1 {
        return Err(Error::Invalid(
            "kp-check expects a pure delta comb: no g/h parts, one atom per cell".into(),
        ));
    }
    let (x0, alpha) = q.atoms()[0];
    if (x0 / period - (x0 / period).round()).abs() > 1e-9 {
        return Err(Error::Invalid(
            "kp-check expects the lattice at integer multiples of the period".into(),
        ));
    }
    let (cell, a) = unit_cell(config, q)?;
    let scale = a * a;
    // rescaled comb has weight alpha * a on the unit cell; the sawtooth
    // sigma starts at alpha * a / 2 just right of the lattice point
    let model = KPModel {
        alpha: alpha * a,
        a: 1.0,
    };
    let sigma0 = alpha * a / 2.0;

    let count = 50usize;
    let lambdas: Vec<f64> = (0..count)
        .map(|i| {
            config.lambda_min + (config.lambda_max - config.lambda_min) * i as f64 / (count - 1) as f64
        })
        .collect();
    let deviations = lambdas
        .par_iter()
        .map(|&lam| {
            let lam_hat = lam * scale;
            let m = quasi_ode::monodromy(
                &cell.coefficients(Complex64::new(lam_hat, 0.0)),
                config.tol,
            )?;
            let oracle = conjugate_to_quasi(&kp_transfer_matrix(model, lam_hat), sigma0);
            let dev = (m.m11 - oracle.m11)
                .norm()
                .max((m.m12 - oracle.m12).norm())
                .max((m.m21 - oracle.m21).norm())
                .max((m.m22 - oracle.m22).norm());
            Ok(dev)
        })
        .collect::<Result<Vec<f64>>>()?;
    let max_dev = deviations.iter().cloned().fold(0.0f64, f64::max);
    Ok(format!(
        "kp-check: max deviation between quasi-derivative monodromy and \
         conjugated transfer-matrix oracle over {count} lambda values in \
         [{}, {}] is {max_dev:.3e}",
        config.lambda_min, config.lambda_max
    ))
}
