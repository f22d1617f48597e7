//! # singspec
//!
//! Spectral analysis of one-dimensional Schrödinger operators whose
//! potentials are first-order distributions `q = sigma' + tau` (delta
//! lattices, jump potentials, and their mixtures), built on an exact
//! piecewise-polynomial calculus.
//!
//! The crate provides:
//!
//! - [`piecewise`] / [`distribution`]: exact arithmetic, duality pairings
//!   and uniform window norms for piecewise polynomials, step functions and
//!   delta atoms;
//! - [`decompose`]: the constructive window-by-window decomposition of such
//!   a distribution into `sigma' + tau` with `sigma` square-integrable on
//!   unit windows and `tau` a bounded step function;
//! - [`quasi_ode`]: adaptive integration of the first-order quasi-derivative
//!   system, monodromy matrices and Prüfer angles;
//! - [`floquet`]: discriminant sweeps, band/gap edges, dispersion branches,
//!   fiber eigenvalues and the fiber resolvent on the period cell;
//! - [`galerkin`]: the quadratic-form (Galerkin) realization on a truncated
//!   interval, dual-norm estimation and the resolvent-convergence
//!   experiment under mollification;
//! - [`oracles`]: independent closed-form references (free monodromy,
//!   delta-comb transfer matrices, adaptive quadrature pairing).
//!
//! Runnable walkthroughs live in `examples/`; the `singspec` binary exposes
//! the same pipelines as subcommands emitting CSV and JSON.


pub mod cli;
pub mod decompose;
pub mod distribution;
pub mod error;
pub mod floquet;
pub mod galerkin;
pub mod linalg;



pub mod oracles;
pub mod potfile;
pub mod piecewise;
pub mod poly;

pub mod quasi_ode;

pub use distribution::{pair, DistributionW1, TestFunction};
pub use error::{Error, Result};
pub use piecewise::PiecewiseFunction;
pub use poly::Poly;

/// Default integration tolerance used by the CLI and the examples.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Build the global rayon pool honoring the `SINGSPEC_THREADS` cap.
/// Call once at process start; later calls are no-ops.
pub fn init_thread_pool_from_env() {
    if let Ok(v) = std::env::var("SINGSPEC_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}
