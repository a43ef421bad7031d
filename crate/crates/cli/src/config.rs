use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use distrank::eval::DEFAULT_REPEATS;
use distrank::io::LoadOptions;
use distrank::preprocess::DEFAULT_CORR_THRESHOLD;
use distrank::scores::DEFAULT_KNN_K;
use distrank::synth::GeneratorSpec;
use distrank::Method;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Data(#[from] distrank::Error),

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 1 for usage errors, 2 for everything the data or file system
    /// caused.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) | CliError::Write { .. } => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    File { path: PathBuf, options: LoadOptions },
    Generated { spec: GeneratorSpec, balanced: bool },
}

/// How many features to keep after scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureCount {
    Top(usize),
    Elbow,
}

impl FromStr for FeatureCount {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "elbow" {
            return Ok(FeatureCount::Elbow);
        }
        match s.parse::<usize>() {
            Ok(q) if q >= 1 => Ok(FeatureCount::Top(q)),
            _ => Err(format!("expected a positive count or `elbow`, got `{s}`")),
        }
    }
}

impl fmt::Display for FeatureCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureCount::Top(q) => write!(f, "{q}"),
            FeatureCount::Elbow => f.write_str("elbow"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: DataSource,
    pub method: Method,
    pub q: FeatureCount,
    /// Number of clusters; defaults to the number of true classes.
    pub k: Option<usize>,
    pub repeats: usize,
    pub corr_threshold: f64,
    pub knn_k: usize,
    /// Subsample fractions for `bench`, each in `(0, 1]`.
    pub fractions: Vec<f64>,
    /// Subsample draws per fraction for `bench`.
    pub draws: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
}

impl RunConfig {
    pub fn new(source: DataSource, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            source,
            method: Method::DistanceRank,
            q: FeatureCount::Elbow,
            k: None,
            repeats: DEFAULT_REPEATS,
            corr_threshold: DEFAULT_CORR_THRESHOLD,
            knn_k: DEFAULT_KNN_K,
            fractions: vec![1.0, 0.5, 0.3],
            draws: 5,
            seed: 0,
            out_dir: out_dir.into(),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        if self.repeats == 0 {
            return usage("--repeats must be at least 1".into());
        }
        if self.draws == 0 {
            return usage("--draws must be at least 1".into());
        }
        if self.knn_k == 0 {
            return usage("--knn-k must be at least 1".into());
        }
        if self.k == Some(0) {
            return usage("--k must be at least 1".into());
        }
        if self.q == FeatureCount::Top(0) {
            return usage("--q must be at least 1".into());
        }
        if !(self.corr_threshold > 0.0 && self.corr_threshold <= 1.0) {
            return usage(format!("--corr-threshold {} is not in (0, 1]", self.corr_threshold));
        }
        if self.fractions.is_empty() {
            return usage("at least one --fraction is required".into());
        }
        if let Some(f) = self.fractions.iter().find(|&&f| !(f > 0.0 && f <= 1.0)) {
            return usage(format!("--fraction {f} is not in (0, 1]"));
        }
        Ok(())
    }
}
