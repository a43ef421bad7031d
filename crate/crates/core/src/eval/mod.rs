//! Clustering-based evaluation of a feature subset: k-means, label
//! alignment, metrics and the two-step imbalanced protocol.

mod align;
mod kmeans;
mod metrics;
mod protocol;

pub use align::{align_labels, Alignment, ConfusionMatrix};
pub use kmeans::{kmeans, ClusteringRun, KMeansOptions};
pub use metrics::{accuracy, nmi, nmi_with, weighted_f1, weighted_f1_with, F1Variant, NmiNormalization};
pub use protocol::{
    evaluate_pipeline, run_metrics, two_step_evaluate, EvaluationReport, MeanStd, Metric,
    PipelineOptions, RunMetrics, TwoStepScores, DEFAULT_REPEATS,
};
