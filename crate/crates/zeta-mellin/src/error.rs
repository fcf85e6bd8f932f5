use num_complex::Complex64;
use thiserror::Error;

/// Library-wide error type. Numerical failure modes are first-class values:
/// callers that batch work (the verification harness) downgrade them to
/// per-point records, everything else propagates them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma has a pole at the nonpositive integer {0}")]
    GammaPole(f64),

    #[error("gamma overflows the double range at z = {0}")]
    GammaOverflow(Complex64),

    #[error("zeta has a pole at s = 1")]
    ZetaPole,

    #[error("{0}")]
    Domain(String),

    #[error("series tail budget exhausted at x = {x}: N = {n_reached} still misses tolerance {tol:e}")]
    TailBudget { x: f64, n_reached: usize, tol: f64 },

    #[error("quadrature failed to converge: estimate {estimate:e} > tolerance {tol:e} after {subdivisions} subdivisions")]
    QuadratureNonConvergence {
        estimate: f64,
        tol: f64,
        subdivisions: usize,
    },

    #[error("s = {s} lies outside the strip {lo} < Re s < {hi}")]
    StripViolation { s: Complex64, lo: f64, hi: f64 },

    #[error("contour integrand not analytic on the punctured disk: residue moved by {deviation:e} when the radius halved")]
    NonAnalyticity { deviation: f64 },

    #[error("residue polynomial fit residual {residual:e} exceeds {limit:e}; the cubic-in-log basis does not capture the residue, report this instead of proceeding")]
    FitResidual { residual: f64, limit: f64 },

    #[error("oracle-resolved subtraction polynomial requested before the residue fit ran")]
    OracleNotRun,

    #[error("line truncation height {needed} exceeds the cap {cap}")]
    TruncationUnreachable { needed: f64, cap: f64 },

    #[error("cancellation budget exceeded in Xi at t = {t}: residual imaginary fraction {ratio:e}")]
    XiCancellation { t: f64, ratio: f64 },

    #[error("{context} left an imaginary residue {magnitude:e} beyond its reality budget")]
    RealityViolation { context: String, magnitude: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Convenience constructor for domain violations.
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
