use avfilt::bimod::BimodError;
use avfilt::filtgen::FiltError;
use avfilt::voa::VoaError;
use avfilt::zhu::ZhuError;

/// Failure of a command before it could report. `Config` covers bad input,
/// `Invariant` a computation that contradicts what it should satisfy.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Invariant(_) => 1,
        }
    }
}

impl From<VoaError> for CliError {
    fn from(e: VoaError) -> Self {
        match e {
            VoaError::NonHomogeneous => CliError::Invariant(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<ZhuError> for CliError {
    fn from(e: ZhuError) -> Self {
        match e {
            ZhuError::Voa(v) => v.into(),
            ZhuError::Invariant(_) => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<BimodError> for CliError {
    fn from(e: BimodError) -> Self {
        match e {
            BimodError::Voa(v) => v.into(),
            BimodError::Zhu(z) => z.into(),
            // Preconditions here are mathematical hypotheses, such as
            // strong generation, that the input fails.
            BimodError::Precondition(_) | BimodError::Invariant(_) => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<FiltError> for CliError {
    fn from(e: FiltError) -> Self {
        match e {
            FiltError::Config(_) | FiltError::Precondition(_) | FiltError::Axiom(_) | FiltError::Filtration(_) => {
                CliError::Config(e.to_string())
            }
            FiltError::Lin(_) | FiltError::Invariant(_) | FiltError::Import(_) => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(e.to_string())
    }
}
