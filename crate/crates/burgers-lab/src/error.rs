//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    /// Invalid argument (bad cutoff, mismatched bands, empty level list, ...).
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A simulated field left the stable regime.
    #[error("divergence at step {step} (t = {time:.6}): squared norm {norm_sq:.3e} exceeds threshold {threshold:.3e}")]
    Divergence {
        step: usize,
        time: f64,
        norm_sq: f64,
        threshold: f64,
    },

    /// The heat-equation field lost strict positivity on the evaluation grid.
    #[error("positivity lost at step {step} (t = {time:.6}): min grid value {min_value:.3e}")]
    Positivity {
        step: usize,
        time: f64,
        min_value: f64,
    },

    /// Exponentiation would overflow (Cole-Hopf state construction).
    #[error("range error: max |h| = {max_abs:.3e} too large for exp")]
    Range { max_abs: f64 },

    /// Not enough data for the requested statistic.
    #[error("statistics error: {0}")]
    Statistics(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, LabError>;
