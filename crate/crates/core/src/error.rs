use std::path::PathBuf;

use thiserror::Error;

use crate::lightfield::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(Violation),

    #[error("{axis} index {index} out of bounds (must be < {bound})")]
    Index {
        axis: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("texture read out of range: {0}")]
    OutOfRange(String),

    #[error("macro-pixel size k={k} out of range, must satisfy 1 <= k <= min(U, V) = {max}")]
    TradeOff { k: usize, max: usize },

    #[error("spatial grid {height}x{width} is smaller than macro-pixel size k={k}; crop would leave no pixels")]
    EmptyOutput {
        height: usize,
        width: usize,
        k: usize,
    },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("convolution layer {layer}: {reason}")]
    Layer { layer: usize, reason: String },

    #[error("unsupported baseline between views ({ru},{rv}) and ({tu},{tv}): views must differ along exactly one angular axis")]
    UnsupportedBaseline {
        ru: usize,
        rv: usize,
        tu: usize,
        tv: usize,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("need at least 2 views along the angular axis, got {0}")]
    InsufficientViews(usize),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("export aborted after {succeeded} records: {reason}")]
    ExportAborted {
        succeeded: usize,
        reason: String,
        report: Box<crate::dataset::ExportReport>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            reason: reason.into(),
        }
    }
}
