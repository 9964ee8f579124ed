use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("not converged: {0}")]
    NotConverged(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::NotConverged(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<proxavg::Error> for CliError {
    fn from(e: proxavg::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}
