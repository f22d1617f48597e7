//! Crate-wide error type.

/// Errors produced by construction, integration and spectral routines.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("polynomial degree {degree} exceeds the product cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("periodic function has nonzero mean {mean:.6e}; its antiderivative is not periodic")]
    PeriodicAntiderivative { mean: f64 },
    #[error("support [{support_lo}, {support_hi}] is not covered by windows [{n_min}, {n_max}]")]
    SupportNotCovered {
        support_lo: f64,
        support_hi: f64,
        n_min: i64,
        n_max: i64,
    },
    #[error("adaptive step underflow at t = {t:.12e} (step {step:.3e}); integration failed")]
    IntegrationFailure { t: f64, step: f64 },
    #[error("lambda = {lambda:.12e} is (numerically) a Dirichlet eigenvalue of the period cell")]
    DirichletEigenvalue { lambda: f64 },
    #[error("lambda = {lambda:.6e} is not below the spectrum")]
    NotBelowSpectrum { lambda: f64 },
    #[error("fiber resolvent singular: |d(theta)| = {magnitude:.3e} at theta = {theta:.6}")]
    SingularFiberSystem { theta: f64, magnitude: f64 },
    #[error("mesh is missing potential breakpoint at x = {x:.12}")]
    MeshMissingBreakpoint { x: f64 },
    #[error("quadrature failed to reach tolerance {tol:.3e} (residual {residual:.3e})")]
    QuadratureTolerance { tol: f64, residual: f64 },
    #[error("root bracketing failed: {0}")]
    Bracketing(String),
    #[error("eigensolver did not converge: {0}")]
    EigenConvergence(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("potential file parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable discriminant for error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Invalid(_) => "invalid",
            Error::DegreeCapExceeded { .. } => "degree_cap_exceeded",
            Error::PeriodicAntiderivative { .. } => "periodic_antiderivative",
            Error::SupportNotCovered { .. } => "support_not_covered",
            Error::IntegrationFailure { .. } => "integration_failure",
            Error::DirichletEigenvalue { .. } => "dirichlet_eigenvalue",
            Error::NotBelowSpectrum { .. } => "not_below_spectrum",
            Error::SingularFiberSystem { .. } => "singular_fiber_system",
            Error::MeshMissingBreakpoint { .. } => "mesh_missing_breakpoint",
            Error::QuadratureTolerance { .. } => "quadrature_tolerance",
            Error::Bracketing(_) => "bracketing",
            Error::EigenConvergence(_) => "eigen_convergence",
            Error::Consistency(_) => "consistency",
            Error::Io(_) => "io",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(format!("{e} (line {}, column {})", e.line(), e.column()))
    }
}
