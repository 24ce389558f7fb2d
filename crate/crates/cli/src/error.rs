use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] rcw_core::Error),

    #[error("cannot read {what}: {detail}\nexpected schema:\n  {schema}")]
    Schema {
        what: String,
        detail: String,
        schema: &'static str,
    },

    #[error("{0}")]
    Io(String),

    #[error("{0}")]
    Usage(String),
}
