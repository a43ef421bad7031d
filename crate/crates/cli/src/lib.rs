//! Commands behind the `distrank` binary.
//!
//! Each command takes a [`RunConfig`], runs the pipeline (load, prepare,
//! score, select, cluster, evaluate) as far as it needs, and writes
//! delimited text files into the configured output directory. The
//! functions return the in-memory results as well so that callers can
//! inspect them without re-reading the files.

mod commands;
mod config;

pub use commands::{
    cmd_bench, cmd_curve, cmd_evaluate, cmd_generate, cmd_score, load, BenchOutput, BenchRow,
    CurveOutput, EvaluateOutput, GenerateOutput, Loaded, ScoreOutput,
};
pub use config::{CliError, DataSource, FeatureCount, RunConfig};
