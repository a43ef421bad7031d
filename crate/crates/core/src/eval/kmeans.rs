//! Lloyd's k-means with distance-squared-weighted seeding, restarted
//! from several initializations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{DataMatrix, LabelVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansOptions {
    /// Independent initializations; the one with the lowest final inertia
    /// wins, the earliest on ties.
    pub n_init: usize,
    pub max_iter: usize,
    /// Stop once no centroid moves farther than this (Euclidean).
    pub tol: f64,
}

impl Default for KMeansOptions {
    fn default() -> Self {
        Self {
            n_init: 10,
            max_iter: 300,
            tol: 1e-6,
        }
    }
}

/// One clustering of the observations.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringRun {
    pub predicted: LabelVector,
    pub seed: u64,
    /// Within-cluster sum of squared distances of the final assignment.
    pub inertia: f64,
    pub iterations: usize,
    /// Inertia after every assignment step, in order.
    pub inertia_trace: Vec<f64>,
}

pub fn kmeans(m: &DataMatrix, k: usize, seed: u64, opts: KMeansOptions) -> Result<ClusteringRun> {
    let n = m.n();
    if k < 1 || k > n {
        return Err(Error::out_of_range("k", k, format!("1..={n}")));
    }
    if opts.n_init < 1 {
        return Err(Error::out_of_range("n_init", opts.n_init, "at least 1"));
    }
    let p = m.p();
    let rows = m.to_row_major();
    // one stream feeds every initialization in turn
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<Lloyd> = None;
    for _ in 0..opts.n_init {
        let run = lloyd(&rows, n, p, k, &mut rng, opts);
        if best.as_ref().is_none_or(|b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    let best = best.expect("n_init >= 1");
    Ok(ClusteringRun {
        predicted: LabelVector::new(best.labels),
        seed,
        inertia: best.inertia,
        iterations: best.iterations,
        inertia_trace: best.trace,
    })
}

struct Lloyd {
    labels: Vec<usize>,
    inertia: f64,
    iterations: usize,
    trace: Vec<f64>,
}

fn lloyd(rows: &[f64], n: usize, p: usize, k: usize, rng: &mut ChaCha8Rng, opts: KMeansOptions) -> Lloyd {
    let row = |i: usize| &rows[i * p..(i + 1) * p];
    let mut centroids = seed_centroids(rows, n, p, k, rng);
    let mut labels = vec![0usize; n];
    let mut inertia = assign(rows, p, &centroids, &mut labels);
    inertia = repair_empty(rows, p, k, &mut centroids, &mut labels, inertia);
    let mut trace = vec![inertia];
    let mut iterations = 0;

    while iterations < opts.max_iter {
        iterations += 1;
        let mut next = vec![0.0; k * p];
        let mut counts = vec![0usize; k];
        for (i, &c) in labels.iter().enumerate() {
            counts[c] += 1;
            for (acc, v) in next[c * p..(c + 1) * p].iter_mut().zip(row(i)) {
                *acc += v;
            }
        }
        let mut shift: f64 = 0.0;
        for c in 0..k {
            let cnt = counts[c] as f64;
            let mut d = 0.0;
            for (new, old) in next[c * p..(c + 1) * p]
                .iter_mut()
                .zip(&centroids[c * p..(c + 1) * p])
            {
                *new /= cnt;
                d += (*new - old) * (*new - old);
            }
            shift = shift.max(d.sqrt());
        }
        centroids = next;
        inertia = assign(rows, p, &centroids, &mut labels);
        inertia = repair_empty(rows, p, k, &mut centroids, &mut labels, inertia);
        trace.push(inertia);
        if shift < opts.tol {
            break;
        }
    }
    Lloyd {
        labels,
        inertia,
        iterations,
        trace,
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// First center uniform, each later one drawn with probability
/// proportional to the squared distance to the nearest chosen center.
fn seed_centroids(rows: &[f64], n: usize, p: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let row = |i: usize| &rows[i * p..(i + 1) * p];
    let mut chosen = vec![rng.random_range(0..n)];
    let mut nearest: Vec<f64> = (0..n).map(|i| sq_dist(row(i), row(chosen[0]))).collect();
    while chosen.len() < k {
        let total: f64 = nearest.iter().sum();
        let next = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &d) in nearest.iter().enumerate() {
                acc += d;
                if d > 0.0 && acc > target {
                    pick = Some(i);
                    break;
                }
            }
            // rounding can leave target past the last positive weight
            pick.unwrap_or_else(|| nearest.iter().rposition(|&d| d > 0.0).expect("total > 0"))
        } else {
            // every point coincides with a center; take any unused one
            let unused: Vec<usize> = (0..n).filter(|i| !chosen.contains(i)).collect();
            unused[rng.random_range(0..unused.len())]
        };
        chosen.push(next);
        for (i, d) in nearest.iter_mut().enumerate() {
            *d = d.min(sq_dist(row(i), row(next)));
        }
    }
    chosen.iter().flat_map(|&i| row(i).iter().copied()).collect()
}

/// Nearest centroid for every row, ties to the lower centroid index.
fn assign(rows: &[f64], p: usize, centroids: &[f64], labels: &mut [usize]) -> f64 {
    let mut inertia = 0.0;
    for (i, label) in labels.iter_mut().enumerate() {
        let x = &rows[i * p..(i + 1) * p];
        let (best, d) = centroids
            .chunks_exact(p)
            .map(|c| sq_dist(x, c))
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (c, d)| if d < acc.1 { (c, d) } else { acc });
        *label = best;
        inertia += d;
    }
    inertia
}

/// Gives every empty cluster the point farthest from the centroid of the
/// currently largest cluster. Returns the updated inertia.
fn repair_empty(
    rows: &[f64],
    p: usize,
    k: usize,
    centroids: &mut [f64],
    labels: &mut [usize],
    mut inertia: f64,
) -> f64 {
    loop {
        let mut counts = vec![0usize; k];
        for &c in labels.iter() {
            counts[c] += 1;
        }
        let Some(empty) = counts.iter().position(|&c| c == 0) else {
            return inertia;
        };
        let largest = (0..k)
            .max_by(|&a, &b| counts[a].cmp(&counts[b]).then(b.cmp(&a)))
            .expect("k >= 1");
        let centre = centroids[largest * p..(largest + 1) * p].to_vec();
        let (far, d) = (0..labels.len())
            .filter(|&i| labels[i] == largest)
            .map(|i| (i, sq_dist(&rows[i * p..(i + 1) * p], &centre)))
            .fold((usize::MAX, -1.0), |acc, (i, d)| if d > acc.1 { (i, d) } else { acc });
        labels[far] = empty;
        centroids[empty * p..(empty + 1) * p].copy_from_slice(&rows[far * p..(far + 1) * p]);
        inertia -= d;
    }
}
