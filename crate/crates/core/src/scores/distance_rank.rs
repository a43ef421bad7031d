use rayon::prelude::*;

use super::pairs::{feature_pair_distances, pairwise_vectors};
use super::{require_features, FeatureScoreReport, Method, ScoreWarning};
use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::stats::{ranks_unchecked, CenteredRanks};

/// Score given to a feature whose pairwise distances are all equal.
pub const CONSTANT_SENTINEL: f64 = -1.0;

/// Distance Rank Score of every feature: the Spearman correlation
/// between the ranks of the total pairwise squared distances `V^D` and
/// the ranks of the feature's own pairwise squared differences `V^r`.
///
/// Scores lie in `[-1, 1]`; close to 1 means the feature orders pairs of
/// observations the way the full feature space does. Features with a
/// constant `V^r` get [`CONSTANT_SENTINEL`] and a warning.
///
/// Features are scored in parallel on the current rayon pool. Each
/// feature's arithmetic runs in a fixed order, so results do not depend
/// on the number of workers.
pub fn distance_rank_score(m: &DataMatrix) -> Result<FeatureScoreReport> {
    require_features(m)?;
    if m.n() < 3 {
        return Err(Error::TooFewObservations {
            required: 3,
            found: m.n(),
        });
    }
    let vectors = pairwise_vectors(m)?;
    let total = CenteredRanks::new(&ranks_unchecked(vectors.total()));

    let scores: Vec<Option<f64>> = (0..m.p())
        .into_par_iter()
        .map_init(Vec::new, |buf, r| {
            feature_pair_distances(m.column(r), buf);
            total.correlation(&ranks_unchecked(buf))
        })
        .collect();

    Ok(finish(m.names().to_vec(), scores, total.is_constant()))
}

/// Same score computed from explicit distance vectors.
#[cfg(test)]
pub(crate) fn from_distance_vectors(total: &[f64], per_feature: &[Vec<f64>]) -> Vec<Option<f64>> {
    let total = CenteredRanks::new(&ranks_unchecked(total));
    per_feature
        .iter()
        .map(|v| total.correlation(&ranks_unchecked(v)))
        .collect()
}

fn finish(names: Vec<String>, scores: Vec<Option<f64>>, total_constant: bool) -> FeatureScoreReport {
    let mut warnings = Vec::new();
    let raw = names
        .iter()
        .zip(&scores)
        .map(|(name, s)| {
            s.unwrap_or_else(|| {
                let message = if total_constant {
                    "all pairwise total distances are equal; correlation undefined"
                } else {
                    "pairwise distances on this feature are constant; correlation undefined"
                };
                warnings.push(ScoreWarning {
                    feature: name.clone(),
                    message: message.into(),
                });
                CONSTANT_SENTINEL
            })
        })
        .collect();
    FeatureScoreReport::new(Method::DistanceRank, names, raw, warnings)
}
