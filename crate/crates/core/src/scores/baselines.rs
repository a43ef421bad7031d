use rayon::prelude::*;

use super::{require_features, FeatureScoreReport, KnnGraph, Method};
use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::stats::{is_constant, variance};

fn check_graph(m: &DataMatrix, g: &KnnGraph) -> Result<()> {
    require_features(m)?;
    if g.n() != m.n() {
        return Err(Error::LengthMismatch {
            left: m.n(),
            right: g.n(),
        });
    }
    Ok(())
}

fn per_feature<F>(m: &DataMatrix, numerator: F) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    (0..m.p())
        .into_par_iter()
        .map(|r| {
            let col = m.column(r);
            if is_constant(col) {
                return Err(Error::ConstantFeature(m.names()[r].clone()));
            }
            Ok(numerator(col) / variance(col)?)
        })
        .collect()
}

/// Laplacian score: the sum of squared feature differences over every
/// ordered pair of graph neighbors, divided by the feature variance.
/// Each undirected edge is counted twice. Lower is more relevant.
pub fn laplacian_score(m: &DataMatrix, g: &KnnGraph) -> Result<FeatureScoreReport> {
    check_graph(m, g)?;
    let scores = per_feature(m, |col| {
        let s: f64 = g
            .edges()
            .iter()
            .map(|&(i, j)| (col[i] - col[j]) * (col[i] - col[j]))
            .sum();
        2.0 * s
    })?;
    Ok(FeatureScoreReport::new(
        Method::Laplacian,
        m.names().to_vec(),
        scores,
        vec![],
    ))
}

/// Compactness score: the sum over observations of the absolute feature
/// differences to each of its `k` directed neighbors, divided by the
/// feature variance. Lower is more relevant.
pub fn compactness_score(m: &DataMatrix, g: &KnnGraph) -> Result<FeatureScoreReport> {
    check_graph(m, g)?;
    let scores = per_feature(m, |col| {
        (0..col.len())
            .map(|i| {
                g.neighbors(i)
                    .iter()
                    .map(|&j| (col[i] - col[j]).abs())
                    .sum::<f64>()
            })
            .sum()
    })?;
    Ok(FeatureScoreReport::new(
        Method::Compactness,
        m.names().to_vec(),
        scores,
        vec![],
    ))
}

/// Population variance of each feature. Higher is more relevant.
pub fn max_variance_score(m: &DataMatrix) -> Result<FeatureScoreReport> {
    require_features(m)?;
    let scores = m.columns().map(variance).collect::<Result<Vec<_>>>()?;
    Ok(FeatureScoreReport::new(
        Method::MaxVariance,
        m.names().to_vec(),
        scores,
        vec![],
    ))
}
