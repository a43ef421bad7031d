//! The imbalanced-data evaluation protocol.
//!
//! Clustering runs once on the whole dataset. Its labels are then scored
//! three ways: on everything (weighted F1), on the major class against
//! the merged minor classes (step I), and among the minor classes only
//! (step II).

use std::io::Write;

use rayon::prelude::*;

use super::align::align_labels;
use super::kmeans::{kmeans, KMeansOptions};
use super::metrics::{accuracy, nmi, weighted_f1};
use crate::error::{Error, Result};
use crate::matrix::{DataMatrix, LabelVector};
use crate::stats::{mean, population_std};

pub const DEFAULT_REPEATS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStepScores {
    /// Weighted F1 of major vs merged minors.
    pub step1_f1: f64,
    /// NMI among true-minor observations.
    pub step2_nmi: f64,
    /// Accuracy among true-minor observations, after realignment.
    pub step2_acc: f64,
}

pub fn two_step_evaluate(
    truth: &LabelVector,
    predicted: &LabelVector,
    major_class: usize,
) -> Result<TwoStepScores> {
    let (t, p) = (truth.as_slice(), predicted.as_slice());
    if t.len() != p.len() {
        return Err(Error::LengthMismatch {
            left: t.len(),
            right: p.len(),
        });
    }
    if !t.contains(&major_class) {
        return Err(Error::MissingClass(major_class));
    }
    let minor_rows: Vec<usize> = (0..t.len()).filter(|&i| t[i] != major_class).collect();
    if minor_rows.is_empty() {
        return Err(Error::NoMinorObservations);
    }

    // step I: the predicted label aligned to the major class stands for
    // "major"; every other predicted label means "minor"
    let alignment = align_labels(t, p)?;
    let major_pred = alignment.preimage(major_class);
    let bin_truth: Vec<usize> = t.iter().map(|&c| usize::from(c != major_class)).collect();
    let bin_pred: Vec<usize> = p
        .iter()
        .map(|&c| usize::from(Some(c) != major_pred))
        .collect();
    let step1_f1 = weighted_f1(&bin_truth, &bin_pred)?;

    // step II: restrict to true minors and realign from scratch
    let minor_truth = truth.select(&minor_rows);
    let minor_pred = predicted.select(&minor_rows);
    let (mt, mp) = (minor_truth.as_slice(), minor_pred.as_slice());
    let step2_nmi = nmi(mt, mp)?;
    let realigned = align_labels(mt, mp)?.apply(mp);
    let step2_acc = accuracy(mt, &realigned)?;

    Ok(TwoStepScores {
        step1_f1,
        step2_nmi,
        step2_acc,
    })
}

/// Metrics of one clustering run against the truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunMetrics {
    pub seed: u64,
    pub total_f1: f64,
    pub total_nmi: f64,
    pub total_acc: f64,
    pub two_step: TwoStepScores,
}

pub fn run_metrics(
    truth: &LabelVector,
    predicted: &LabelVector,
    major_class: usize,
    seed: u64,
) -> Result<RunMetrics> {
    let (t, p) = (truth.as_slice(), predicted.as_slice());
    let aligned = align_labels(t, p)?.apply(p);
    Ok(RunMetrics {
        seed,
        total_f1: weighted_f1(t, &aligned)?,
        total_nmi: nmi(t, p)?,
        total_acc: accuracy(t, &aligned)?,
        two_step: two_step_evaluate(truth, predicted, major_class)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    /// Mean and population standard deviation.
    pub fn of(values: &[f64]) -> Self {
        Self {
            mean: mean(values),
            std: population_std(values),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    TotalF1,
    TotalNmi,
    TotalAcc,
    Step1F1,
    Step2Nmi,
    Step2Acc,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::TotalF1,
        Metric::TotalNmi,
        Metric::TotalAcc,
        Metric::Step1F1,
        Metric::Step2Nmi,
        Metric::Step2Acc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::TotalF1 => "total_f1w",
            Metric::TotalNmi => "total_nmi",
            Metric::TotalAcc => "total_acc",
            Metric::Step1F1 => "step1_f1w",
            Metric::Step2Nmi => "step2_nmi",
            Metric::Step2Acc => "step2_acc",
        }
    }

    pub fn of(self, run: &RunMetrics) -> f64 {
        match self {
            Metric::TotalF1 => run.total_f1,
            Metric::TotalNmi => run.total_nmi,
            Metric::TotalAcc => run.total_acc,
            Metric::Step1F1 => run.two_step.step1_f1,
            Metric::Step2Nmi => run.two_step.step2_nmi,
            Metric::Step2Acc => run.two_step.step2_acc,
        }
    }
}

/// Mean and standard deviation of every metric over repeated runs.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub runs: Vec<RunMetrics>,
    pub major_class: usize,
}

impl EvaluationReport {
    /// Runs are sorted by seed so aggregation does not depend on the
    /// order they finished in.
    pub fn from_runs(mut runs: Vec<RunMetrics>, major_class: usize) -> Self {
        runs.sort_by_key(|r| r.seed);
        Self { runs, major_class }
    }

    pub fn repeats(&self) -> usize {
        self.runs.len()
    }

    pub fn metric(&self, metric: Metric) -> MeanStd {
        let values: Vec<f64> = self.runs.iter().map(|r| metric.of(r)).collect();
        MeanStd::of(&values)
    }

    /// `method,metric,mean,std` rows.
    pub fn write_delimited<W: Write>(&self, writer: W, method: &str) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["method", "metric", "mean", "std"])?;
        self.write_rows(&mut w, method)?;
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn write_rows<W: Write>(&self, w: &mut csv::Writer<W>, method: &str) -> Result<()> {
        for metric in Metric::ALL {
            let s = self.metric(metric);
            w.write_record([method, metric.as_str(), &s.mean.to_string(), &s.std.to_string()])?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineOptions {
    pub k: usize,
    pub repeats: usize,
    pub base_seed: u64,
    pub kmeans: KMeansOptions,
}

/// Clusters `m` restricted to `features` once per seed
/// `base_seed..base_seed + repeats` and scores every run. The major class
/// is the most populated true class.
pub fn evaluate_pipeline<S: AsRef<str> + Sync>(
    m: &DataMatrix,
    truth: &LabelVector,
    features: &[S],
    opts: &PipelineOptions,
) -> Result<EvaluationReport> {
    if truth.len() != m.n() {
        return Err(Error::LengthMismatch {
            left: m.n(),
            right: truth.len(),
        });
    }
    if opts.repeats == 0 {
        return Err(Error::out_of_range("repeats", 0, "at least 1"));
    }
    let restricted = m.select_features(features)?;
    let major = truth.majority_class().expect("n >= 2");
    let runs = (0..opts.repeats as u64)
        .into_par_iter()
        .map(|r| {
            let seed = opts.base_seed.wrapping_add(r);
            let run = kmeans(&restricted, opts.k, seed, opts.kmeans)?;
            run_metrics(truth, &run.predicted, major, seed)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EvaluationReport::from_runs(runs, major))
}
