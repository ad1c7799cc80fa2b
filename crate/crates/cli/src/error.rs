use thiserror::Error;

/// Everything that ends the process with status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid document at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Kernel {
        context: String,
        #[source]
        source: nmono::Error,
    },
}

impl CliError {
    pub fn kernel(context: impl Into<String>) -> impl FnOnce(nmono::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Kernel { context, source }
    }
}
