//! Failure kinds and the exit codes they map to.

use std::path::PathBuf;

use thiserror::Error;
use twistor_core::cocycle::CocycleError;
use twistor_core::field::FieldError;
use twistor_core::pairing::PairingError;
use twistor_core::recipes::RecipeError;
use twistor_core::transform::TransformError;

#[derive(Debug, Error)]
pub enum CliError {
    /// Some verification check failed.
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
    #[error(transparent)]
    UnknownBundle(RecipeError),
    /// A pole sits on the contour, or a factor straddles it.
    #[error("{0}")]
    Pole(TransformError),
    #[error("{0}")]
    Input(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("well-definedness residual {measured:.3e} exceeds threshold {threshold:.3e}")]
    NotWellDefined { measured: f64, threshold: f64 },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ChecksFailed(_) | CliError::Io { .. } => 1,
            CliError::UnknownBundle(_) => 2,
            CliError::Pole(_) => 3,
            CliError::Input(_) => 4,
            CliError::GridMismatch(_) => 5,
            CliError::NotWellDefined { .. } => 6,
        }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<RecipeError> for CliError {
    fn from(e: RecipeError) -> Self {
        match e {
            RecipeError::UnknownBundle { .. } => CliError::UnknownBundle(e),
            RecipeError::InvalidBundle(_) => CliError::Input(e.to_string()),
        }
    }
}

impl From<CocycleError> for CliError {
    fn from(e: CocycleError) -> Self {
        CliError::Input(format!("cocycle: {e}"))
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::GridMismatch(m) => CliError::GridMismatch(m),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> Self {
        match &e {
            TransformError::Cocycle {
                source: CocycleError::PoleOnContour { .. } | CocycleError::MixedFactor { .. } | CocycleError::PoleHit { .. },
                ..
            }
            | TransformError::Quadrature { .. } => CliError::Pole(e),
            TransformError::Field(f) => f.clone().into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<PairingError> for CliError {
    fn from(e: PairingError) -> Self {
        match e {
            PairingError::GridMismatch(m) => CliError::GridMismatch(m),
            PairingError::Field(f) => f.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}
