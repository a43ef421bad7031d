use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed delimited text: {0}")]
    Csv(#[from] csv::Error),

    #[error("row {row}, column `{column}`: cannot parse `{value}` as a number")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row}, column `{column}`: value is not finite")]
    NonFinite { row: usize, column: String },

    #[error("row {row} has {found} cells, expected {expected}")]
    RaggedRow {
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("duplicate feature name `{0}`")]
    DuplicateName(String),

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("need at least {required} observations, got {found}")]
    TooFewObservations { required: usize, found: usize },

    #[error("matrix has no features")]
    NoFeatures,

    #[error("all features constant")]
    AllConstant,

    #[error("feature `{0}` is constant; run constant removal first")]
    ConstantFeature(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("rank vector is constant, correlation undefined")]
    ConstantRanks,

    #[error("invalid label `{0}`: labels must be non-negative integers")]
    InvalidLabel(String),

    #[error("{name} = {value} is out of range ({expected})")]
    OutOfRange {
        name: &'static str,
        value: String,
        expected: String,
    },

    #[error("flat score curve has no elbow")]
    NoElbow,

    #[error("class {0} not present in true labels")]
    MissingClass(usize),

    #[error("no observations outside the major class")]
    NoMinorObservations,

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}

impl Error {
    pub(crate) fn out_of_range(
        name: &'static str,
        value: impl ToString,
        expected: impl Into<String>,
    ) -> Self {
        Error::OutOfRange {
            name,
            value: value.to_string(),
            expected: expected.into(),
        }
    }
}
