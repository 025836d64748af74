//! Crate-wide error type.

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("corpus error: {0}")]
    Corpus(String),

    #[error("non-finite loss at epoch {epoch}, batch {batch}")]
    NonFiniteLoss { epoch: usize, batch: usize },

    #[error("too few hallucinated generations for pair '{tag}': found {found}, need {need}; increase training epochs or the insertion probability")]
    TooFewHallucinations { tag: String, found: usize, need: usize },

    #[error("no entity pair reached the memorization threshold {threshold}: {detail}; increase training epochs or the insertion probability")]
    NoMemorization { threshold: f64, detail: String },

    #[error("degenerate labels: {0}")]
    DegenerateLabels(String),

    #[error("trace error: {0}")]
    Trace(String),

    #[error("distill error: {0}")]
    Distill(String),

    #[error("missing artifact {path}: {hint}")]
    MissingArtifact { path: PathBuf, hint: String },

    #[error("stale artifact {path}: file hash does not match the run manifest")]
    StaleArtifact { path: PathBuf },

    #[error("run directory {0} already contains artifacts; pass --force to overwrite")]
    DirNotEmpty(PathBuf),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("toml error: {0}")]
    Toml(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Stable machine-readable kind tag, used in CLI error records and logs.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidConfig(_) => "invalid_config",
            Error::Corpus(_) => "corpus",
            Error::NonFiniteLoss { .. } => "non_finite_loss",
            Error::TooFewHallucinations { .. } => "too_few_hallucinations",
            Error::NoMemorization { .. } => "no_memorization",
            Error::DegenerateLabels(_) => "degenerate_labels",
            Error::Trace(_) => "trace",
            Error::Distill(_) => "distill",
            Error::MissingArtifact { .. } => "missing_artifact",
            Error::StaleArtifact { .. } => "stale_artifact",
            Error::DirNotEmpty(_) => "dir_not_empty",
            Error::Io { .. } => "io",
            Error::Json(_) => "json",
            Error::Toml(_) => "toml",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
