use sl2act_core::cayley::CayleyError;
use sl2act_core::dynamics::DynamicsError;
use sl2act_core::sl2::Sl2Error;
use sl2act_core::spectra::SpectraError;

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const REFUTED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const FAILURE: i32 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Capacity(String),
    #[error("{0}")]
    Refuted(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => exit::USAGE,
            CliError::Capacity(_) => exit::FAILURE,
            CliError::Refuted(_) => exit::REFUTED,
        }
    }
}

impl From<Sl2Error> for CliError {
    fn from(e: Sl2Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<CayleyError> for CliError {
    fn from(e: CayleyError) -> Self {
        match e {
            CayleyError::Capacity { .. } => CliError::Capacity(e.to_string()),
            CayleyError::NoGenerators => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SpectraError> for CliError {
    fn from(e: SpectraError) -> Self {
        match e {
            SpectraError::DenseCap { .. } => CliError::Capacity(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::Capacity { .. } => CliError::Capacity(e.to_string()),
            DynamicsError::NotGenerated { .. } => CliError::Refuted(e.to_string()),
            DynamicsError::Cayley(inner) => inner.into(),
            DynamicsError::Spectra(inner) => inner.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
