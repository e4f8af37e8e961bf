use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(
        "target degree {target} is not below the nominal degree {degree}; \
         pass --allow-identity to echo the input unchanged"
    )]
    TargetTooHigh { target: usize, degree: usize },

    #[error("half-width must be strictly positive")]
    NonPositiveHalfWidth,

    #[error("stability check failed: {0}")]
    StrictFailure(String),

    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },

    #[error(transparent)]
    Library(#[from] polyreduce::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Malformed(_) => 2,
            CliError::TargetTooHigh { .. } => 3,
            CliError::NonPositiveHalfWidth => 4,
            CliError::StrictFailure(_) => 5,
            CliError::Write { .. } | CliError::Library(_) => 1,
        }
    }
}
