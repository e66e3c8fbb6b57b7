use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("mode 0 is not part of the phase space")]
    ZeroMode,
    #[error("small divisor {value:e} at index {index} (step {step})")]
    SmallDivisor { index: String, value: f64, step: usize },
    #[error("resonance: divisor {value:e} at index {index}")]
    Resonance { index: String, value: f64 },
    #[error("box mismatch: {0} vs {1}")]
    BoxMismatch(u32, u32),
    #[error("map has no identity part")]
    MissingIdentity,
    #[error("problem not admissible: {0}")]
    NotAdmissible(String),
    #[error("iteration did not converge: {0}")]
    NonConvergence(String),
    #[error("corrupted data: {0}")]
    Corrupted(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl LabError {
    /// Resonance-type failures map to exit code 2 on the command line.
    pub fn is_resonance(&self) -> bool {
        matches!(self, LabError::SmallDivisor { .. } | LabError::Resonance { .. })
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
