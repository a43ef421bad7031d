//! Accuracy, normalized mutual information and weighted F1.

use std::collections::BTreeMap;

use super::align::{check_lengths, ConfusionMatrix};
use crate::error::{Error, Result};

/// Fraction of positions where the aligned prediction equals the truth.
pub fn accuracy(truth: &[usize], aligned: &[usize]) -> Result<f64> {
    check_lengths(truth, aligned)?;
    if truth.is_empty() {
        return Err(Error::TooFewObservations {
            required: 1,
            found: 0,
        });
    }
    let hits = truth.iter().zip(aligned).filter(|(t, p)| t == p).count();
    Ok(hits as f64 / truth.len() as f64)
}

/// Denominator used to scale mutual information into `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NmiNormalization {
    #[default]
    Arithmetic,
    Geometric,
    Min,
    Max,
}

/// Normalized mutual information with natural logarithms and plug-in
/// probabilities, normalized by the arithmetic mean of the two
/// entropies. Labels need not be aligned.
///
/// When either labeling has a single class its entropy is zero and the
/// result is defined as 0.
pub fn nmi(truth: &[usize], predicted: &[usize]) -> Result<f64> {
    nmi_with(truth, predicted, NmiNormalization::Arithmetic)
}

pub fn nmi_with(truth: &[usize], predicted: &[usize], norm: NmiNormalization) -> Result<f64> {
    check_lengths(truth, predicted)?;
    if truth.is_empty() {
        return Err(Error::TooFewObservations {
            required: 1,
            found: 0,
        });
    }
    let n = truth.len() as f64;
    let mut joint: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut pt: BTreeMap<usize, usize> = BTreeMap::new();
    let mut pp: BTreeMap<usize, usize> = BTreeMap::new();
    for (&t, &p) in truth.iter().zip(predicted) {
        *joint.entry((t, p)).or_default() += 1;
        *pt.entry(t).or_default() += 1;
        *pp.entry(p).or_default() += 1;
    }
    let entropy = |counts: &BTreeMap<usize, usize>| -> f64 {
        -counts
            .values()
            .map(|&c| {
                let q = c as f64 / n;
                q * q.ln()
            })
            .sum::<f64>()
    };
    let (ht, hp) = (entropy(&pt), entropy(&pp));
    if pt.len() < 2 || pp.len() < 2 {
        return Ok(0.0);
    }
    let mi: f64 = joint
        .iter()
        .map(|(&(t, p), &c)| {
            let pj = c as f64 / n;
            let marg = (pt[&t] as f64 / n) * (pp[&p] as f64 / n);
            pj * (pj / marg).ln()
        })
        .sum();
    let denom = match norm {
        NmiNormalization::Arithmetic => (ht + hp) / 2.0,
        NmiNormalization::Geometric => (ht * hp).sqrt(),
        NmiNormalization::Min => ht.min(hp),
        NmiNormalization::Max => ht.max(hp),
    };
    Ok((mi / denom).clamp(0.0, 1.0))
}

/// Per-class F1 formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum F1Variant {
    /// Harmonic mean `2PR / (P + R)`.
    #[default]
    Standard,
    /// `PR / (P + R)`, half the harmonic mean.
    Halved,
}

/// Per-class F1 averaged with weights proportional to the true class
/// sizes. Predictions must already be aligned to the true classes.
pub fn weighted_f1(truth: &[usize], aligned: &[usize]) -> Result<f64> {
    weighted_f1_with(truth, aligned, F1Variant::Standard)
}

pub fn weighted_f1_with(truth: &[usize], aligned: &[usize], variant: F1Variant) -> Result<f64> {
    if truth.is_empty() {
        return Err(Error::TooFewObservations {
            required: 1,
            found: 0,
        });
    }
    let c = ConfusionMatrix::from_labels(truth, aligned)?;
    let n = truth.len() as f64;
    let factor = match variant {
        F1Variant::Standard => 2.0,
        F1Variant::Halved => 1.0,
    };
    let mut total = 0.0;
    for (class, row) in c.rows().iter().enumerate() {
        let support: usize = row.iter().sum();
        if support == 0 {
            continue;
        }
        let tp = row.get(class).copied().unwrap_or(0) as f64;
        let predicted: usize = if class < c.k_pred() {
            c.rows().iter().map(|r| r[class]).sum()
        } else {
            0
        };
        let precision = if predicted > 0 { tp / predicted as f64 } else { 0.0 };
        let recall = tp / support as f64;
        let f1 = if precision + recall > 0.0 {
            factor * precision * recall / (precision + recall)
        } else {
            0.0
        };
        total += support as f64 / n * f1;
    }
    Ok(total)
}
