use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error("header must contain a `value` column and at most two factor columns, got {0:?}")]
    Schema(Vec<String>),
    #[error("line {line}: value {field:?} is not a number")]
    NonNumeric { line: u64, field: String },
    #[error("line {line}: value {field:?} is not finite")]
    NonFinite { line: u64, field: String },
    #[error("line {line}: empty factor level")]
    EmptyLevel { line: u64 },
    #[error("input has no data rows")]
    NoData,
    #[error("unbalanced two-way design: {0}")]
    Unbalanced(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] anova_core::Error),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::Io { .. } => "E_IO",
            Self::Csv { .. } => "E_CSV",
            Self::Schema(_) => "E_SCHEMA",
            Self::NonNumeric { .. } => "E_NONNUMERIC",
            Self::NonFinite { .. } => "E_NONFINITE",
            Self::EmptyLevel { .. } => "E_EMPTY_LEVEL",
            Self::NoData => "E_NO_DATA",
            Self::Unbalanced(_) => "E_UNBALANCED",
            Self::Usage(_) => "E_USAGE",
            Self::Core(e) => e.code(),
        }
    }
}
