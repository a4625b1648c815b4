use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("missing header row")]
    MissingHeader,
    #[error("non-numeric value in feature column `{0}`")]
    NonNumericFeature(String),
    #[error("label column has a single distinct class")]
    SingleClass,
    #[error("ragged row at line {0}")]
    RaggedRow(usize),
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error("class {0} has too few rows for a stratified split")]
    ClassTooSmall(usize),

    #[error("all sample weights are zero")]
    AllZeroWeights,
    #[error("k = {k} exceeds reference size {n}")]
    KTooLarge { k: usize, n: usize },

    #[error("boosting produced {0} model(s); a pool needs at least 2")]
    DegeneratePool(usize),
    #[error("invalid pool request: {0}")]
    InvalidPool(String),

    #[error("dynamic selection set has {have} rows, need at least {need}")]
    DselTooSmall { have: usize, need: usize },
    #[error("meta-training pairs contain a single competence class")]
    SingleMetaClass,
    #[error("META-DES requires a fitted meta-model")]
    MissingMetaModel,

    #[error("grid is incomplete for the requested candidates")]
    IncompleteGrid,
    #[error("meta-dataset is empty")]
    EmptyMetaDataset,
    #[error("meta-feature schema mismatch: expected {expected}, got {got}")]
    SchemaMismatch { expected: String, got: String },
    #[error("corpus has {0} usable datasets, need at least 3")]
    CorpusTooSmall(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported registry payload: {0}")]
    Registry(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
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
}
