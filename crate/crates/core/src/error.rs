use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BorelError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("ray angle {theta} outside the sector |theta| < {limit}")]
    SectorViolation { theta: f64, limit: f64 },
    #[error("functions live on different grids")]
    GridMismatch,
    #[error("radius {s} outside (0, {p_max}]")]
    OutOfRange { s: f64, p_max: f64 },
    #[error("y = {y} below the convergence abscissa {abscissa}")]
    BelowAbscissa { y: String, abscissa: f64 },
    #[error("contour tail estimate {estimate:e} exceeds tolerance")]
    ContourTail { estimate: f64 },
    #[error("Picard iteration diverged at step {iteration} (ratio {ratio:.3})")]
    Divergence { iteration: usize, ratio: f64 },
    #[error("Picard iteration did not converge in {max_iter} steps (last increment {increment:e})")]
    MaxIterations { max_iter: usize, increment: f64 },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl BorelError {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        BorelError::InvalidParameter { name, reason: reason.into() }
    }
}

pub type Result<T> = std::result::Result<T, BorelError>;
