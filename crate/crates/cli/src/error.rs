use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical diagnostic: {0}")]
    Numerical(String),

    #[error("size cap: {0}")]
    SizeCap(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 0 ok, 1 configuration (and output path) problems, 2 numerical
    /// diagnostics, 3 oracle size cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) | CliError::Csv(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::SizeCap(_) => 3,
        }
    }
}

impl From<spinenv::Error> for CliError {
    fn from(e: spinenv::Error) -> Self {
        use spinenv::Error as E;
        match e {
            E::InvalidSpec(_) | E::UnsupportedChain(_) | E::InvalidArgument(_) => CliError::Config(e.to_string()),
            E::SizeCap { .. } => CliError::SizeCap(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}
