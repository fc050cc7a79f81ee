use plumbing_hf::Error;
use thiserror::Error as ThisError;

#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum CliError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("no vertices")]
    NoVertices,
    #[error("{0}: {1}")]
    Io(String, String),
    #[error("triangle file: {0}")]
    Json(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_APPLICABLE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                Error::NotNegativeDefinite | Error::NotApplicable(_) | Error::Singular => EXIT_NOT_APPLICABLE,
                Error::BoxTooLarge { .. }
                | Error::SearchCapExceeded(_)
                | Error::HullExhausted(_)
                | Error::LevelCapExceeded(_)
                | Error::BudgetExhausted(_) => EXIT_CAP,
                _ => EXIT_INPUT,
            },
            _ => EXIT_INPUT,
        }
    }
}
