use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

pub const DEFAULT_KNN_K: usize = 5;

/// Exact Euclidean k-nearest-neighbor graph over the observations.
///
/// `neighbors[i]` holds the `k` nearest other observations of `i`,
/// closest first, distance ties going to the lower index. The binary
/// similarity `S` is the union symmetrization: `S[i][j] = 1` when
/// `j` is a neighbor of `i` or `i` a neighbor of `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnGraph {
    k: usize,
    neighbors: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

pub fn knn_graph(m: &DataMatrix, k: usize) -> Result<KnnGraph> {
    let n = m.n();
    if k < 1 || k >= n {
        return Err(Error::out_of_range("k", k, format!("1 <= k < n = {n}")));
    }
    let p = m.p();
    let rows = m.to_row_major();
    let neighbors: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let a = &rows[i * p..(i + 1) * p];
            let mut cand: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let b = &rows[j * p..(j + 1) * p];
                    let d = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
                    (d, j)
                })
                .collect();
            let by_dist = |x: &(f64, usize), y: &(f64, usize)| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1));
            cand.select_nth_unstable_by(k - 1, by_dist);
            cand.truncate(k);
            cand.sort_unstable_by(by_dist);
            cand.into_iter().map(|(_, j)| j).collect()
        })
        .collect();

    let mut edges: Vec<(usize, usize)> = neighbors
        .iter()
        .enumerate()
        .flat_map(|(i, nb)| nb.iter().map(move |&j| (i.min(j), i.max(j))))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    Ok(KnnGraph { k, neighbors, edges })
}

impl KnnGraph {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.neighbors.len()
    }

    /// Directed neighbor list of observation `i`, closest first.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    /// Undirected edges `(i, j)`, `i < j`, of the symmetrized graph,
    /// sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Binary similarity weight `S[i][j]`.
    pub fn similarity(&self, i: usize, j: usize) -> f64 {
        let key = (i.min(j), i.max(j));
        if i != j && self.edges.binary_search(&key).is_ok() {
            1.0
        } else {
            0.0
        }
    }
}
