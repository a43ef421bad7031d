//! Data preparation: drop constant features, prune highly correlated
//! features, then min-max scale every survivor to `[0, 1]`.

use std::io::Write;

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::stats::{is_constant, pearson};

pub const DEFAULT_CORR_THRESHOLD: f64 = 0.95;

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatedDrop {
    pub removed: String,
    pub kept: String,
    pub correlation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRange {
    pub name: String,
    pub min: f64,
    pub max: f64,
}

/// Audit trail of [`prepare`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PreprocessReport {
    pub dropped_constant: Vec<String>,
    pub dropped_correlated: Vec<CorrelatedDrop>,
    pub scaling: Vec<FeatureRange>,
}

impl PreprocessReport {
    /// One record per feature: `feature,action,partner,value`. Dropped
    /// features come first, then the scaling range of each survivor as
    /// `name,scaled,min,max`.
    pub fn write_delimited<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["feature", "action", "partner", "value"])?;
        for name in &self.dropped_constant {
            w.write_record([name.as_str(), "constant", "", ""])?;
        }
        for d in &self.dropped_correlated {
            w.write_record([
                d.removed.as_str(),
                "correlated",
                d.kept.as_str(),
                &d.correlation.to_string(),
            ])?;
        }
        for s in &self.scaling {
            w.write_record([
                s.name.as_str(),
                "scaled",
                &s.min.to_string(),
                &s.max.to_string(),
            ])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

pub fn drop_constant_features(m: &DataMatrix) -> Result<(DataMatrix, Vec<String>)> {
    let (keep, drop): (Vec<usize>, Vec<usize>) = (0..m.p()).partition(|&r| !is_constant(m.column(r)));
    if keep.is_empty() {
        return Err(Error::AllConstant);
    }
    let dropped = drop.iter().map(|&r| m.names()[r].clone()).collect();
    Ok((m.select_indices(&keep)?, dropped))
}

/// Greedy left-to-right scan: a column is dropped when its absolute
/// Pearson correlation with an earlier kept column exceeds `threshold`.
/// The first such kept column is reported as the partner.
pub fn drop_correlated_features(
    m: &DataMatrix,
    threshold: f64,
) -> Result<(DataMatrix, Vec<CorrelatedDrop>)> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::out_of_range("corr_threshold", threshold, "[0, 1]"));
    }
    let mut kept: Vec<usize> = Vec::new();
    let mut dropped = Vec::new();
    for r in 0..m.p() {
        let col = m.column(r);
        if is_constant(col) {
            return Err(Error::ConstantFeature(m.names()[r].clone()));
        }
        let mut partner = None;
        for &k in &kept {
            let c = pearson(m.column(k), col)?.expect("kept columns are non-constant");
            if c.abs() > threshold {
                partner = Some((k, c));
                break;
            }
        }
        match partner {
            Some((k, c)) => dropped.push(CorrelatedDrop {
                removed: m.names()[r].clone(),
                kept: m.names()[k].clone(),
                correlation: c,
            }),
            None => kept.push(r),
        }
    }
    Ok((m.select_indices(&kept)?, dropped))
}

/// Maps each column by `(x - min) / (max - min)`.
pub fn minmax_scale(m: &DataMatrix) -> Result<(DataMatrix, Vec<FeatureRange>)> {
    let mut ranges = Vec::with_capacity(m.p());
    let mut columns = Vec::with_capacity(m.p());
    for (name, col) in m.names().iter().zip(m.columns()) {
        let min = col.iter().copied().fold(f64::INFINITY, f64::min);
        let max = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if min >= max {
            return Err(Error::ConstantFeature(name.clone()));
        }
        let span = max - min;
        columns.push(col.iter().map(|x| (x - min) / span).collect());
        ranges.push(FeatureRange {
            name: name.clone(),
            min,
            max,
        });
    }
    Ok((DataMatrix::from_columns(m.names().to_vec(), columns)?, ranges))
}

/// Constant removal, then correlation pruning, then scaling.
pub fn prepare(m: &DataMatrix, corr_threshold: f64) -> Result<(DataMatrix, PreprocessReport)> {
    let (m, dropped_constant) = drop_constant_features(m)?;
    let (m, dropped_correlated) = drop_correlated_features(&m, corr_threshold)?;
    let (m, scaling) = minmax_scale(&m)?;
    Ok((
        m,
        PreprocessReport {
            dropped_constant,
            dropped_correlated,
            scaling,
        },
    ))
}
