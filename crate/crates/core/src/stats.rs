//! Variance, average ranks and rank correlation.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Population variance (divides by `n`).
pub fn variance(column: &[f64]) -> Result<f64> {
    if column.len() < 2 {
        return Err(Error::TooFewObservations {
            required: 2,
            found: column.len(),
        });
    }
    if is_constant(column) {
        return Ok(0.0);
    }
    let n = column.len() as f64;
    let m = column.iter().sum::<f64>() / n;
    Ok(column.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n)
}

/// True when every value equals the first one. Used instead of
/// `variance == 0`, which rounding can miss.
pub fn is_constant(column: &[f64]) -> bool {
    match column.split_first() {
        Some((first, rest)) => rest.iter().all(|v| v == first),
        None => true,
    }
}

/// Mean that is exact when all values are equal.
pub fn mean(values: &[f64]) -> f64 {
    match values.split_first() {
        Some((&first, _)) => {
            first + values.iter().map(|v| v - first).sum::<f64>() / values.len() as f64
        }
        None => f64::NAN,
    }
}

/// Population standard deviation; exactly zero when all values are equal.
pub fn population_std(values: &[f64]) -> f64 {
    let m = mean(values);
    (values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64).sqrt()
}

/// Pearson correlation with population moments. `None` when either
/// column is constant.
pub fn pearson(a: &[f64], b: &[f64]) -> Result<Option<f64>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 || is_constant(a) || is_constant(b) {
        return Ok(None);
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return Ok(None);
    }
    Ok(Some((sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0)))
}

/// Ranks `1..=m` with ties sharing the mean of the ranks they span.
#[derive(Debug, Clone, PartialEq)]
pub struct RankVector(Vec<f64>);

impl RankVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// Average ranks; the smallest value gets rank 1.
pub fn average_ranks(values: &[f64]) -> Result<RankVector> {
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            row: i,
            column: "rank input".into(),
        });
    }
    Ok(RankVector(ranks_unchecked(values)))
}

/// Ranking without the finiteness scan, for callers that already
/// guarantee finite input.
pub(crate) fn ranks_unchecked(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<(f64, u32)> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as u32))
        .collect();
    order.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let value = order[start].0;
        let mut end = start + 1;
        while end < order.len() && order[end].0 == value {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let rank = (start + end + 1) as f64 / 2.0;
        for &(_, i) in &order[start..end] {
            ranks[i as usize] = rank;
        }
        start = end;
    }
    ranks
}

/// Spearman's rank correlation: Pearson correlation of the two rank
/// vectors, valid with ties.
///
/// Returns [`Error::ConstantRanks`] when either vector is constant.
pub fn spearman_correlation(a: &RankVector, b: &RankVector) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::TooFewObservations {
            required: 2,
            found: a.len(),
        });
    }
    let ca = CenteredRanks::new(a.as_slice());
    ca.correlation(b.as_slice()).ok_or(Error::ConstantRanks)
}

/// A rank vector with its mean removed and its norm cached, so one side
/// of many correlations is prepared once.
#[derive(Debug, Clone)]
pub(crate) struct CenteredRanks {
    centered: Vec<f64>,
    norm: f64,
}

impl CenteredRanks {
    pub(crate) fn new(ranks: &[f64]) -> Self {
        // average ranks of m values always sum to m(m+1)/2
        let mid = (ranks.len() as f64 + 1.0) / 2.0;
        let centered: Vec<f64> = ranks.iter().map(|r| r - mid).collect();
        let norm = centered.iter().map(|c| c * c).sum::<f64>().sqrt();
        Self { centered, norm }
    }

    pub(crate) fn is_constant(&self) -> bool {
        self.norm == 0.0
    }

    /// Correlation against another rank vector of the same length, or
    /// `None` if either is constant.
    pub(crate) fn correlation(&self, ranks: &[f64]) -> Option<f64> {
        debug_assert_eq!(ranks.len(), self.centered.len());
        let mid = (ranks.len() as f64 + 1.0) / 2.0;
        let (mut dot, mut ss) = (0.0, 0.0);
        for (c, r) in self.centered.iter().zip(ranks) {
            let d = r - mid;
            dot += c * d;
            ss += d * d;
        }
        if self.norm == 0.0 || ss == 0.0 {
            return None;
        }
        Some((dot / (self.norm * ss.sqrt())).clamp(-1.0, 1.0))
    }
}

/// Orders indices by descending (or ascending) score, ties by index.
pub(crate) fn argsort(scores: &[f64], descending: bool) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| {
        let ord = scores[a].total_cmp(&scores[b]);
        let ord = if descending { ord.reverse() } else { ord };
        match ord {
            Ordering::Equal => a.cmp(&b),
            o => o,
        }
    });
    idx
}
