use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("schema error: required column `{0}` not found in header")]
    MissingColumn(String),

    #[error("parse error at data row {row}, column `{column}`: cannot parse {value:?} as a non-negative integer")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row}: label cell is empty")]
    EmptyLabel { row: usize },

    #[error("unmapped label {0:?}")]
    UnmappedLabel(String),

    #[error("asset {name}, line {line}: {message}")]
    Asset {
        name: String,
        line: usize,
        message: String,
    },

    #[error("cannot fit on an empty corpus")]
    EmptyCorpus,

    #[error("no term survives document-frequency pruning")]
    EmptyVocabulary,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("class {0} has no samples")]
    DegenerateClass(&'static str),

    #[error("training data contains only one class")]
    SingleClass,

    #[error("non-finite value in training input at row {row}")]
    NonFinite { row: usize },

    #[error("training error: {0}")]
    Training(String),

    #[error("cannot stratify: class {class} has {count} member(s), at least 2 required")]
    Stratification { class: &'static str, count: usize },

    #[error("invalid fraction {0}: must lie strictly between 0 and 1")]
    Fraction(f64),

    #[error("confusion matrix is empty")]
    EmptyEvaluation,

    #[error("unsupported bundle format version {found} (supported: {supported})")]
    UnsupportedVersion { found: u32, supported: u32 },

    #[error("bundle integrity error: {0}")]
    Integrity(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
