//! Matching predicted clusters to true classes.

use crate::error::{Error, Result};

/// Counts of (true class, predicted label) pairs: `counts[t][p]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    counts: Vec<Vec<usize>>,
}

impl ConfusionMatrix {
    pub fn from_labels(truth: &[usize], predicted: &[usize]) -> Result<Self> {
        check_lengths(truth, predicted)?;
        let kt = truth.iter().max().map_or(0, |m| m + 1);
        let kp = predicted.iter().max().map_or(0, |m| m + 1);
        let mut counts = vec![vec![0; kp]; kt];
        for (&t, &p) in truth.iter().zip(predicted) {
            counts[t][p] += 1;
        }
        Ok(Self { counts })
    }

    pub fn k_true(&self) -> usize {
        self.counts.len()
    }

    pub fn k_pred(&self) -> usize {
        self.counts.first().map_or(0, Vec::len)
    }

    pub fn get(&self, t: usize, p: usize) -> usize {
        self.counts[t][p]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }
}

pub(crate) fn check_lengths(a: &[usize], b: &[usize]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

/// An optimal one-to-one relabeling of predicted clusters onto true
/// classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    /// `mapping[p]` is the true class assigned to predicted label `p`, or
    /// [`unmatched`](Self::unmatched) when there are more predicted
    /// labels than true classes.
    pub mapping: Vec<usize>,
    pub confusion: ConfusionMatrix,
    /// Observations whose aligned prediction equals the truth.
    pub matched: usize,
}

impl Alignment {
    /// Class id used for predicted labels left without a partner. It is
    /// never a valid true class.
    pub fn unmatched(&self) -> usize {
        self.confusion.k_true()
    }

    /// Predicted labels translated into true-class ids.
    pub fn apply(&self, predicted: &[usize]) -> Vec<usize> {
        predicted.iter().map(|&p| self.mapping[p]).collect()
    }

    /// The predicted label mapped onto true class `t`, if any.
    pub fn preimage(&self, t: usize) -> Option<usize> {
        self.mapping.iter().position(|&m| m == t)
    }
}

/// Finds the assignment between predicted labels and true classes that
/// maximizes the number of agreeing observations, solved exactly with
/// the Hungarian algorithm on the confusion matrix.
pub fn align_labels(truth: &[usize], predicted: &[usize]) -> Result<Alignment> {
    let confusion = ConfusionMatrix::from_labels(truth, predicted)?;
    let (kt, kp) = (confusion.k_true(), confusion.k_pred());
    let size = kt.max(kp);
    // square cost matrix, rows = predicted, cols = true; padding costs 0
    let max = confusion.rows().iter().flatten().copied().max().unwrap_or(0) as i64;
    let cost: Vec<Vec<i64>> = (0..size)
        .map(|p| {
            (0..size)
                .map(|t| {
                    if p < kp && t < kt {
                        max - confusion.get(t, p) as i64
                    } else {
                        max
                    }
                })
                .collect()
        })
        .collect();
    let assignment = hungarian(&cost);
    let mapping: Vec<usize> = (0..kp)
        .map(|p| if assignment[p] < kt { assignment[p] } else { kt })
        .collect();
    let matched = (0..kp)
        .filter(|&p| mapping[p] < kt)
        .map(|p| confusion.get(mapping[p], p))
        .sum();
    Ok(Alignment {
        mapping,
        confusion,
        matched,
    })
}

/// Minimum-cost perfect matching on a square matrix; returns the column
/// assigned to each row. O(n^3) shortest augmenting path formulation.
fn hungarian(cost: &[Vec<i64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    // 1-based potentials with a virtual column 0
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut col_owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        col_owner[0] = row;
        let mut j0 = 0;
        let mut minv = vec![i64::MAX; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = col_owner[j0];
            let mut delta = i64::MAX;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[col_owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if col_owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            col_owner[j0] = col_owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        assignment[col_owner[j] - 1] = j - 1;
    }
    assignment
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn permutations(items: Vec<usize>) -> Vec<Vec<usize>> {
        if items.len() <= 1 {
            return vec![items];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            let mut rest = items.clone();
            let head = rest.remove(i);
            for mut tail in permutations(rest) {
                tail.insert(0, head);
                out.push(tail);
            }
        }
        out
    }

    // Oracle: try every injective relabeling of predicted ids.
    fn brute_force_matches(truth: &[usize], pred: &[usize], k: usize) -> usize {
        permutations((0..k).collect())
            .into_iter()
            .map(|perm| {
                truth
                    .iter()
                    .zip(pred)
                    .filter(|(&t, &p)| perm[p] == t)
                    .count()
            })
            .max()
            .unwrap()
    }

    #[test]
    fn pure_relabeling() {
        let a = align_labels(&[0, 0, 1, 1], &[1, 1, 0, 0]).unwrap();
        assert_eq!(a.mapping, vec![1, 0]);
        assert_eq!(a.matched, 4);
        assert_eq!(a.apply(&[1, 1, 0, 0]), vec![0, 0, 1, 1]);
    }

    #[test]
    fn identity() {
        let t = [0, 1, 2, 2, 1, 0];
        let a = align_labels(&t, &t).unwrap();
        assert_eq!(a.mapping, vec![0, 1, 2]);
        assert_eq!(a.matched, 6);
    }

    #[test]
    fn extra_predicted_labels_are_unmatched() {
        let a = align_labels(&[0, 0, 1, 1], &[0, 2, 1, 1]).unwrap();
        assert_eq!(a.matched, 3);
        assert_eq!(a.mapping[2], a.unmatched());
        assert_eq!(a.preimage(0), Some(0));
    }

    #[test]
    fn fewer_predicted_labels() {
        let a = align_labels(&[0, 1, 2, 2], &[0, 0, 0, 0]).unwrap();
        assert_eq!(a.mapping, vec![2]);
        assert_eq!(a.matched, 2);
        assert_eq!(a.preimage(0), None);
    }

    #[test]
    fn matches_exhaustive_six_class_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..20 {
            let truth: Vec<usize> = (0..60).map(|_| rng.random_range(0..6)).collect();
            let pred: Vec<usize> = truth
                .iter()
                .map(|&t| if rng.random_bool(0.5) { (t + 2) % 6 } else { rng.random_range(0..6) })
                .collect();
            let a = align_labels(&truth, &pred).unwrap();
            let k = a.confusion.k_true().max(a.confusion.k_pred());
            assert_eq!(a.matched, brute_force_matches(&truth, &pred, k));
            let aligned = a.apply(&pred);
            let direct = truth.iter().zip(&aligned).filter(|(t, p)| t == p).count();
            assert_eq!(direct, a.matched);
        }
    }

    #[test]
    fn confusion_totals() {
        let c = ConfusionMatrix::from_labels(&[0, 1, 1, 2], &[1, 1, 0, 0]).unwrap();
        assert_eq!(c.total(), 4);
        assert_eq!(c.rows()[1].iter().sum::<usize>(), 2);
        assert!(ConfusionMatrix::from_labels(&[0], &[0, 1]).is_err());
    }
}
