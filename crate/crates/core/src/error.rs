use thiserror::Error;

/// Errors raised by the scattering engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("samples violate the declared {symmetry} symmetry (deviation {deviation:e})")]
    SymmetryViolation {
        symmetry: &'static str,
        deviation: f64,
    },

    #[error("quadrature did not converge on [{a}, {b}] (error estimate {estimate:e})")]
    QuadratureFailure { a: f64, b: f64, estimate: f64 },

    #[error("resolvent denominator vanishes at q = {q} (|D| = {abs_d:e})")]
    Condition7Violation { q: f64, abs_d: f64 },

    #[error("denominator of the forward integral vanishes at q = {q} while xi(q) = {xi:e}")]
    ZeroDenominator { q: f64, xi: f64 },

    #[error("curve passes within {distance:e} of the origin near sample {index}")]
    OriginHit { index: usize, distance: f64 },

    #[error("argument increment {increment} at sample {index} is not below pi/2; refine the grid")]
    UnderResolved { index: usize, increment: f64 },

    #[error("solvability conditions violated: {0}")]
    ConditionsViolated(String),

    #[error(
        "solver did not converge after {iterations} iterations (relative residual {residual:e})"
    )]
    NonConvergence {
        iterations: usize,
        residual: f64,
        /// Last iterate, kept so callers can still report metrics.
        best: Option<Vec<f64>>,
    },

    #[error("fixed-point map is not contractive above A = {a} (factor {factor})")]
    NotContractive { a: f64, factor: f64 },

    #[error("xi changes sign beyond the tolerance band (min {min:e}, max {max:e})")]
    SignInconsistent { min: f64, max: f64 },

    #[error("xi vanishes identically; the potential must be nonzero")]
    NoPotential,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
