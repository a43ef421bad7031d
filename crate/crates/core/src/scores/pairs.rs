use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

/// Pairwise squared distances over the `N = n(n-1)/2` unordered pairs
/// `(i, j)`, `i < j`, enumerated lexicographically.
///
/// Only the total distance vector is stored; a per-feature vector is
/// `N` long and is produced on demand by [`per_feature`](Self::per_feature).
#[derive(Debug, Clone)]
pub struct PairDistanceVectors<'a> {
    matrix: &'a DataMatrix,
    total: Vec<f64>,
}

/// Number of unordered pairs among `n` observations.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of the pair `(i, j)`, `i < j < n`, in the canonical order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// All pairs in canonical order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

pub fn pairwise_vectors(m: &DataMatrix) -> Result<PairDistanceVectors<'_>> {
    let n = m.n();
    if n < 2 {
        return Err(Error::TooFewObservations {
            required: 2,
            found: n,
        });
    }
    let p = m.p();
    let rows = m.to_row_major();
    let total = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let a = &rows[i * p..(i + 1) * p];
            let rows = &rows;
            (i + 1..n).map(move |j| {
                let b = &rows[j * p..(j + 1) * p];
                // feature order, so the sum matches summing per-feature vectors
                a.iter()
                    .zip(b)
                    .fold(0.0, |acc, (x, y)| acc + (x - y) * (x - y))
            })
        })
        .collect();
    Ok(PairDistanceVectors { matrix: m, total })
}

impl PairDistanceVectors<'_> {
    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn len(&self) -> usize {
        self.total.len()
    }

    pub fn is_empty(&self) -> bool {
        self.total.is_empty()
    }

    /// `V^D`: the squared Euclidean distance of every pair.
    pub fn total(&self) -> &[f64] {
        &self.total
    }

    /// `V^r`: the squared difference of feature `r` for every pair.
    pub fn per_feature(&self, r: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.total.len());
        feature_pair_distances(self.matrix.column(r), &mut out);
        out
    }
}

pub(crate) fn feature_pair_distances(col: &[f64], out: &mut Vec<f64>) {
    out.clear();
    for (i, &a) in col.iter().enumerate() {
        out.extend(col[i + 1..].iter().map(|&b| (a - b) * (a - b)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(n: usize, p: usize, seed: u64) -> DataMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cols = (0..p)
            .map(|_| (0..n).map(|_| rng.random::<f64>()).collect())
            .collect();
        DataMatrix::from_columns((0..p).map(|r| format!("f{r}")).collect(), cols).unwrap()
    }

    #[test]
    fn two_observations_give_one_pair() {
        let m = DataMatrix::from_rows(
            vec!["a".into(), "b".into()],
            &[vec![0.0, 1.0], vec![3.0, 5.0]],
        )
        .unwrap();
        let v = pairwise_vectors(&m).unwrap();
        assert_eq!(v.total(), &[25.0]);
    }

    #[test]
    fn canonical_enumeration() {
        let order: Vec<_> = pairs(4).collect();
        assert_eq!(order, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        for (k, (i, j)) in order.into_iter().enumerate() {
            assert_eq!(pair_index(4, i, j), k);
        }
        assert_eq!(pair_count(4), 6);
    }

    #[test]
    fn total_is_sum_of_per_feature_vectors() {
        let m = random_matrix(10, 5, 1);
        let v = pairwise_vectors(&m).unwrap();
        assert_eq!(v.len(), 45);
        let mut sum = vec![0.0; v.len()];
        for r in 0..m.p() {
            for (s, x) in sum.iter_mut().zip(v.per_feature(r)) {
                assert!(x >= 0.0);
                *s += x;
            }
        }
        // direct summation from the definition
        for (k, (i, j)) in pairs(10).enumerate() {
            let direct: f64 = (0..5).map(|r| (m.get(i, r) - m.get(j, r)).powi(2)).sum();
            assert!((direct - v.total()[k]).abs() <= 1e-9 * direct.max(1.0));
            assert!((sum[k] - v.total()[k]).abs() <= 1e-9 * v.total()[k].max(1.0));
        }
    }
}
