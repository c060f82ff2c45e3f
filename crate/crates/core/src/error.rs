//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("not a NIfTI-1 file (bad magic or header size): {0}")]
    NiftiMagic(String),
    #[error("unsupported NIfTI datatype code {0}")]
    NiftiDatatype(i16),
    #[error("expected a 3-D volume, header declares {0} dimensions")]
    NiftiDimCount(i16),
    #[error("truncated NIfTI payload: expected {expected} bytes, got {actual}")]
    NiftiTruncated { expected: usize, actual: usize },
    #[error("volume geometry invalid: {0}")]
    Geometry(String),
    #[error("mask voxel value {0} is not a small non-negative integer")]
    NonIntegerLabel(f64),
    #[error("mask contains label {0} absent from the label semantics")]
    UnknownLabel(u16),
    #[error("grids do not match: {0}")]
    GridMismatch(String),
    #[error("cohort CSV: {0}")]
    CohortCsv(String),
    #[error("feature table: {0}")]
    FeatureTable(String),
    #[error("normalization region has zero standard deviation (degenerate image)")]
    DegenerateImage,
    #[error("empty mask where a non-empty one is required")]
    EmptyMask,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("selection: {0}")]
    Selection(String),
    #[error("model: {0}")]
    Model(String),
    #[error("class {0} is absent from the training labels")]
    MissingClass(String),
    #[error("ensemble member {index} failed to train: {reason}")]
    EnsembleMember { index: usize, reason: String },
    #[error("evaluation: {0}")]
    Evaluation(String),
    #[error("registration did not converge within the iteration budget")]
    RegistrationBudget,
    #[error("atlas definition: {0}")]
    Atlas(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("pipeline: {0}")]
    Pipeline(String),
    #[error("artifact fingerprint mismatch: {0}")]
    FingerprintMismatch(String),
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Exit code the CLI maps this error to (config errors are 2, rest 1).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            _ => 1,
        }
    }
}
