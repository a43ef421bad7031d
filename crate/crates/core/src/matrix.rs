//! Dense observation-by-feature matrices and class label vectors.
//!
//! Values are stored column-major: every scorer works one feature at a
//! time, so a feature is a contiguous slice.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};

/// An `n x p` table of finite reals: `n` observations (rows), `p` named
/// features (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: Vec<f64>,
    names: Vec<String>,
    n: usize,
}

impl DataMatrix {
    /// Builds a matrix from feature columns, all of the same length.
    pub fn from_columns(names: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if names.len() != columns.len() {
            return Err(Error::LengthMismatch {
                left: names.len(),
                right: columns.len(),
            });
        }
        if columns.is_empty() {
            return Err(Error::NoFeatures);
        }
        let n = columns[0].len();
        let mut values = Vec::with_capacity(n * columns.len());
        for (name, col) in names.iter().zip(&columns) {
            if col.len() != n {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: col.len(),
                });
            }
            if let Some(row) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    row,
                    column: name.clone(),
                });
            }
            values.extend_from_slice(col);
        }
        Self::validated(values, names, n)
    }

    /// Builds a matrix from observation rows.
    pub fn from_rows(names: Vec<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let p = names.len();
        let mut columns = vec![Vec::with_capacity(rows.len()); p];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != p {
                return Err(Error::RaggedRow {
                    row: i,
                    found: row.len(),
                    expected: p,
                });
            }
            for (col, &v) in columns.iter_mut().zip(row) {
                col.push(v);
            }
        }
        Self::from_columns(names, columns)
    }

    fn validated(values: Vec<f64>, names: Vec<String>, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewObservations {
                required: 2,
                found: n,
            });
        }
        if names.is_empty() {
            return Err(Error::NoFeatures);
        }
        let mut seen = HashSet::with_capacity(names.len());
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        Ok(Self { values, names, n })
    }

    /// Number of observations.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of features.
    pub fn p(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column(&self, r: usize) -> &[f64] {
        &self.values[r * self.n..(r + 1) * self.n]
    }

    pub fn columns(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.n)
    }

    pub fn get(&self, i: usize, r: usize) -> f64 {
        self.values[r * self.n + i]
    }

    /// Row-major copy of the values, `n * p` long.
    pub fn to_row_major(&self) -> Vec<f64> {
        let p = self.p();
        let mut out = vec![0.0; self.n * p];
        for (r, col) in self.columns().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                out[i * p + r] = v;
            }
        }
        out
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Keeps the named features, in the order given.
    pub fn select_features<S: AsRef<str>>(&self, names: &[S]) -> Result<Self> {
        let idx = names
            .iter()
            .map(|s| {
                self.feature_index(s.as_ref())
                    .ok_or_else(|| Error::UnknownColumn(s.as_ref().to_owned()))
            })
            .collect::<Result<Vec<_>>>()?;
        self.select_indices(&idx)
    }

    pub fn select_indices(&self, idx: &[usize]) -> Result<Self> {
        let names = idx.iter().map(|&r| self.names[r].clone()).collect();
        let mut values = Vec::with_capacity(idx.len() * self.n);
        for &r in idx {
            values.extend_from_slice(self.column(r));
        }
        Self::validated(values, names, self.n)
    }

    /// Keeps the given observations, in the order given.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        let mut values = Vec::with_capacity(rows.len() * self.p());
        for col in self.columns() {
            values.extend(rows.iter().map(|&i| col[i]));
        }
        Self::validated(values, self.names.clone(), rows.len())
    }
}

/// Class identifiers for each observation, compacted to `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelVector {
    labels: Vec<usize>,
    k: usize,
}

impl LabelVector {
    /// Relabels the distinct ids to `0..k`, preserving their numeric order.
    /// Already-compact input is returned unchanged.
    pub fn new(raw: Vec<usize>) -> Self {
        let distinct: BTreeMap<usize, usize> = raw.iter().map(|&l| (l, 0)).collect();
        let k = distinct.len();
        if distinct.keys().last().is_some_and(|&max| max + 1 == k) {
            return Self { labels: raw, k };
        }
        let map: BTreeMap<usize, usize> = distinct
            .into_keys()
            .enumerate()
            .map(|(dense, id)| (id, dense))
            .collect();
        let labels = raw.into_iter().map(|l| map[&l]).collect();
        Self { labels, k }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of distinct classes.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// The most populated class; ties go to the lowest id.
    pub fn majority_class(&self) -> Option<usize> {
        let sizes = self.class_sizes();
        let max = *sizes.iter().max()?;
        sizes.iter().position(|&s| s == max)
    }

    pub fn select(&self, rows: &[usize]) -> Self {
        Self::new(rows.iter().map(|&i| self.labels[i]).collect())
    }
}

impl std::ops::Index<usize> for LabelVector {
    type Output = usize;

    fn index(&self, i: usize) -> &usize {
        &self.labels[i]
    }
}
