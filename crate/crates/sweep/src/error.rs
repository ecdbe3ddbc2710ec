use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("malformed scenario: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error("rows vary along more than one axis ({0})")]
    MixedAxes(String),

    #[error(transparent)]
    Core(#[from] ddsense_core::Error),
}

impl SweepError {
    /// Process exit code: 1 for bad input, 2 for numerical failures, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            SweepError::Read { .. } | SweepError::Io(_) | SweepError::Csv(_) => 3,
            SweepError::Core(
                ddsense_core::Error::SingularFim { .. } | ddsense_core::Error::IndefiniteFim { .. },
            ) => 2,
            _ => 1,
        }
    }
}
