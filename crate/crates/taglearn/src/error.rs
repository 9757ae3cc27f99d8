use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{row}: {reason}")]
    MalformedRow {
        path: PathBuf,
        row: usize,
        reason: String,
    },

    #[error("duplicate record id {id:?} (row {row})")]
    DuplicateId { id: String, row: usize },

    #[error("record {id:?} has an empty label list")]
    EmptyLabels { id: String },

    #[error("record {id:?} has empty text")]
    EmptyText { id: String },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("cannot split a dataset of {n} records")]
    TooFewRecords { n: usize },

    #[error("train fraction {fraction} leaves the {side} side empty")]
    EmptySplit { fraction: f64, side: &'static str },

    #[error("label {label:?} contains the csv label delimiter '|'")]
    LabelDelimiter { label: String },

    #[error("no label reaches the selection threshold {threshold}")]
    NoLabelSelected { threshold: usize },

    #[error("every record lost all of its labels at threshold {threshold}")]
    AllRecordsRemoved { threshold: usize },

    #[error("label {label:?} is not in the vocabulary")]
    UnknownLabel { label: String },

    #[error("expected length {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("unknown stopword list {id:?}")]
    UnknownStopwordList { id: String },

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("max_len {max_len} is too small (need at least 3 for [CLS] + token + [SEP])")]
    MaxLenTooSmall { max_len: usize },

    #[error("token id {id} is outside the vocabulary (size {vocab_size})")]
    OutOfRangeId { id: u32, vocab_size: usize },

    #[error("shape mismatch: {context}")]
    ShapeMismatch { context: String },

    #[error("invalid configuration: {reason}")]
    InvalidConfig { reason: String },

    #[error("invalid factorization order: {reason}")]
    InvalidPermutation { reason: String },

    #[error("sequence has no maskable tokens")]
    NoMaskableTokens,

    #[error("prediction set is empty")]
    EmptyPredictionSet,

    #[error("non-finite gradient in tensor {tensor:?}")]
    NonFiniteGradient { tensor: String },

    #[error("non-finite loss: {context}")]
    NonFiniteLoss { context: String },

    #[error("checkpoint {path}: {reason}")]
    BadCheckpoint { path: PathBuf, reason: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn shape(context: impl Into<String>) -> Self {
        Error::ShapeMismatch {
            context: context.into(),
        }
    }

    pub fn config(reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            reason: reason.into(),
        }
    }

    /// True for failures of the numeric kind (non-finite loss or gradient),
    /// which the CLI maps to a distinct exit code.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NonFiniteGradient { .. } | Error::NonFiniteLoss { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
