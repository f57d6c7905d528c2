use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A gamma-type function was asked for a value at one of its poles.
    #[error("pole: {0}")]
    Pole(String),

    /// Parameters are well formed but outside the orthogonality range.
    #[error("not admissible: {0}")]
    Admissibility(String),

    /// Parameters violate a structural requirement of the construction.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A moment or norm integral does not exist.
    #[error("divergent integral: {0}")]
    Divergence(String),

    #[error("quadrature did not converge after level {level}: estimate {estimate:e}, error {error:e}")]
    NonConvergence { level: u32, estimate: f64, error: f64 },

    /// Complex arithmetic produced a coefficient that is not real within tolerance.
    #[error("coefficient of x^{exponent} has imaginary residue {residue:e} (relative)")]
    Realness { exponent: u32, residue: f64 },

    #[error("unsupported equation shape: {0}")]
    UnsupportedShape(String),

    /// Two independent routes to the same quantity disagree.
    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}
