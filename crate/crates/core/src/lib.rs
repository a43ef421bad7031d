//! Unsupervised filter feature selection for imbalanced multi-class data.
//!
//! The central scorer is the Distance Rank Score: for every feature, the
//! Spearman correlation between the ranks of all pairwise squared
//! distances in the full feature space and the ranks of the pairwise
//! squared differences on that feature alone. A feature whose geometry
//! mirrors the global one scores close to 1, whether or not its total
//! variance is large, which keeps features that isolate small groups of
//! unusual observations.
//!
//! Around it the crate provides the Laplacian, Compactness and Max
//! Variance baselines, the preparation pipeline (constant removal,
//! correlation pruning, min-max scaling), score curves with an elbow
//! rule, k-means clustering with aligned ACC / NMI / weighted F1, and the
//! two-step protocol that scores the major class and the minor classes
//! separately.
//!
//! ```
//! use distrank::preprocess::prepare;
//! use distrank::scores::distance_rank_score;
//! use distrank::select::select_top;
//! use distrank::synth::{generate_imbalanced, GeneratorSpec};
//!
//! let (raw, _labels) = generate_imbalanced(&GeneratorSpec::imbalanced_fixture(0))?;
//! let (m, _report) = prepare(&raw, 0.95)?;
//! let scores = distance_rank_score(&m)?;
//! let top = select_top(&scores, 5)?;
//! assert!(top.iter().filter(|n| n.starts_with("inf_")).count() >= 4);
//! # Ok::<(), distrank::Error>(())
//! ```

pub mod error;
pub mod eval;
pub mod io;
pub mod matrix;
pub mod preprocess;
pub mod scores;
pub mod select;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use matrix::{DataMatrix, LabelVector};
pub use scores::{FeatureScoreReport, Method};
