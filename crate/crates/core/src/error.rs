//! Error type shared by all pipeline stages.

use std::path::PathBuf;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, AtsError>;

/// Errors surfaced by the summarization pipeline.
#[derive(Debug, thiserror::Error)]
pub enum AtsError {
    /// File or directory access failed.
    #[error("io failure on {path}: {source}")]
    IoFailure {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A serialized segmenter model could not be parsed or has an
    /// unsupported version.
    #[error("malformed segmenter model: {0}")]
    MalformedModel(String),

    /// A character-map file violated the mapping invariants.
    #[error("malformed character map at line {line}: {message}")]
    MalformedCharMap { line: usize, message: String },

    /// A suffix inventory file could not be used.
    #[error("malformed suffix inventory: {0}")]
    MalformedSuffixes(String),

    /// A stopword JSON file could not be parsed.
    #[error("malformed stopword file {path}: {message}")]
    MalformedStopwords { path: PathBuf, message: String },

    /// Training corpus contained no tokens.
    #[error("training corpus has no tokens")]
    EmptyCorpus,

    /// Document has no sentences to score.
    #[error("document has no sentences")]
    EmptyDocument,

    /// Department id absent from the domain stopword lists.
    #[error("unknown department: {0}")]
    UnknownDepartment(String),

    /// Final-summary word limit below 1.
    #[error("invalid word limit: {0} (must be >= 1)")]
    InvalidLimit(usize),

    /// ROUGE reference text is empty.
    #[error("missing reference text for evaluation")]
    MissingReference,

    /// A department has too few documents to split.
    #[error("department {department} has {count} documents, need at least 3 to split")]
    TooFewDocuments { department: String, count: usize },

    /// Split ratios outside (0,1) or not summing to 1.
    #[error("invalid split ratios: {0}")]
    InvalidRatios(String),

    /// A conclusion sidecar file is unusable.
    #[error("malformed conclusion meta {path}: {message}")]
    MalformedMeta { path: PathBuf, message: String },

    /// Experiment configuration file could not be parsed.
    #[error("invalid experiment config {path}: {message}")]
    InvalidConfig { path: PathBuf, message: String },

    /// A summary state file did not parse back.
    #[error("malformed summary state: {0}")]
    MalformedState(String),
}

impl AtsError {
    /// Wraps an IO error with the path it concerned.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        AtsError::IoFailure {
            path: path.into(),
            source,
        }
    }
}
