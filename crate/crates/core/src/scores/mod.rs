//! Feature scorers.
//!
//! Each scorer maps a matrix to one raw score per feature and a
//! relevance ordering. Distance Rank and Max Variance rank high scores
//! first; Laplacian and Compactness rank low scores first.

mod baselines;
mod distance_rank;
mod knn;
mod pairs;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

pub use baselines::{compactness_score, laplacian_score, max_variance_score};
pub use distance_rank::{distance_rank_score, CONSTANT_SENTINEL};
pub use knn::{knn_graph, KnnGraph, DEFAULT_KNN_K};
pub use pairs::{pair_count, pair_index, pairs, pairwise_vectors, PairDistanceVectors};

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::stats::argsort;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    DistanceRank,
    Laplacian,
    Compactness,
    MaxVariance,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::DistanceRank,
        Method::Laplacian,
        Method::Compactness,
        Method::MaxVariance,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::DistanceRank => "distance-rank",
            Method::Laplacian => "laplacian",
            Method::Compactness => "compactness",
            Method::MaxVariance => "max-variance",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            Method::DistanceRank | Method::MaxVariance => Direction::HighIsRelevant,
            Method::Laplacian | Method::Compactness => Direction::LowIsRelevant,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                format!("unknown method `{s}` (expected distance-rank, laplacian, compactness or max-variance)")
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    HighIsRelevant,
    LowIsRelevant,
}

/// A feature whose score could not be computed normally.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreWarning {
    pub feature: String,
    pub message: String,
}

/// Scores from one method, with features ordered most relevant first.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureScoreReport {
    pub method: Method,
    pub direction: Direction,
    pub feature_names: Vec<String>,
    pub raw_scores: Vec<f64>,
    pub relevance_order: Vec<usize>,
    pub warnings: Vec<ScoreWarning>,
}

impl FeatureScoreReport {
    pub(crate) fn new(
        method: Method,
        feature_names: Vec<String>,
        raw_scores: Vec<f64>,
        warnings: Vec<ScoreWarning>,
    ) -> Self {
        let direction = method.direction();
        let relevance_order = argsort(&raw_scores, direction == Direction::HighIsRelevant);
        Self {
            method,
            direction,
            feature_names,
            raw_scores,
            relevance_order,
            warnings,
        }
    }

    pub fn p(&self) -> usize {
        self.raw_scores.len()
    }

    /// Feature names, most relevant first.
    pub fn ranked_names(&self) -> impl Iterator<Item = &str> + '_ {
        self.relevance_order
            .iter()
            .map(|&r| self.feature_names[r].as_str())
    }

    /// 1-based relevance rank of each feature, indexed by feature.
    pub fn ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0; self.p()];
        for (pos, &r) in self.relevance_order.iter().enumerate() {
            ranks[r] = pos + 1;
        }
        ranks
    }

    /// `feature,score,rank` rows in relevance order.
    pub fn write_delimited<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["feature", "score", "rank"])?;
        for (pos, &r) in self.relevance_order.iter().enumerate() {
            w.write_record([
                self.feature_names[r].as_str(),
                &self.raw_scores[r].to_string(),
                &(pos + 1).to_string(),
            ])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// Scores every feature of `m` with `method`; `knn_k` is used by the
/// graph-based methods only.
pub fn score(method: Method, m: &DataMatrix, knn_k: usize) -> Result<FeatureScoreReport> {
    match method {
        Method::DistanceRank => distance_rank_score(m),
        Method::MaxVariance => max_variance_score(m),
        Method::Laplacian => laplacian_score(m, &knn_graph(m, knn_k)?),
        Method::Compactness => compactness_score(m, &knn_graph(m, knn_k)?),
    }
}

pub(crate) fn require_features(m: &DataMatrix) -> Result<()> {
    if m.p() == 0 {
        return Err(Error::NoFeatures);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_stable_under_ties() {
        let r = FeatureScoreReport::new(
            Method::MaxVariance,
            vec!["a".into(), "b".into(), "c".into()],
            vec![0.5, 1.0, 0.5],
            vec![],
        );
        assert_eq!(r.relevance_order, vec![1, 0, 2]);
        assert_eq!(r.ranks(), vec![2, 1, 3]);
        let low = FeatureScoreReport::new(
            Method::Laplacian,
            vec!["a".into(), "b".into(), "c".into()],
            vec![0.5, 1.0, 0.5],
            vec![],
        );
        assert_eq!(low.relevance_order, vec![0, 2, 1]);
    }

    #[test]
    fn serializes_in_relevance_order() {
        let r = FeatureScoreReport::new(
            Method::DistanceRank,
            vec!["a".into(), "b".into()],
            vec![0.25, 0.75],
            vec![],
        );
        let mut buf = Vec::new();
        r.write_delimited(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "feature,score,rank\nb,0.75,1\na,0.25,2\n"
        );
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!("pca".parse::<Method>().is_err());
    }
}
