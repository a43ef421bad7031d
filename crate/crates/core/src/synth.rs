//! Seeded Gaussian-blob datasets with planted relevant features.
//!
//! Informative features are Gaussian around a class-specific mean with a
//! small spread; noise features are class-independent Gaussians with a
//! larger spread. In the imbalanced regime this makes the informative
//! features discriminative yet low in total variance.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::{DataMatrix, LabelVector};

pub const INFORMATIVE_PREFIX: &str = "inf_";
pub const NOISE_PREFIX: &str = "noise_";

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    /// Observations per class; class 0 comes first.
    pub class_sizes: Vec<usize>,
    /// `offsets[c][f]`: mean of informative feature `f` in class `c`, in
    /// units of `informative_sigma`.
    pub offsets: Vec<Vec<f64>>,
    pub informative_sigma: f64,
    pub noise_features: usize,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    /// Planted layout: class 0 sits at 0 on every informative feature and
    /// minor class `m = c - 1` sits at `1 + (m + f) mod (k - 1)` times
    /// `separation` standard deviations on feature `f`. Every informative
    /// feature separates all classes; the order of the minor classes
    /// rotates from feature to feature.
    pub fn planted(
        class_sizes: Vec<usize>,
        informative: usize,
        separation: f64,
        informative_sigma: f64,
        noise_features: usize,
        noise_sigma: f64,
        seed: u64,
    ) -> Self {
        let k = class_sizes.len();
        let offsets = (0..k)
            .map(|c| {
                (0..informative)
                    .map(|f| {
                        if c == 0 {
                            return 0.0;
                        }
                        let m = c - 1;
                        (1 + (m + f) % (k - 1)) as f64 * separation
                    })
                    .collect()
            })
            .collect();
        Self {
            class_sizes,
            offsets,
            informative_sigma,
            noise_features,
            noise_sigma,
            seed,
        }
    }

    /// The 480/10/10 imbalanced fixture: 5 informative features at 10
    /// standard deviations (sigma 0.02) and 45 noise features (sigma 0.3).
    pub fn imbalanced_fixture(seed: u64) -> Self {
        Self::planted(vec![480, 10, 10], 5, 10.0, 0.02, 45, 0.3, seed)
    }

    pub fn informative_features(&self) -> usize {
        self.offsets.first().map_or(0, Vec::len)
    }

    pub fn p(&self) -> usize {
        self.informative_features() + self.noise_features
    }

    fn validate(&self) -> Result<()> {
        let invalid = |m: &str| Err(Error::InvalidSpec(m.into()));
        if self.class_sizes.len() < 2 {
            return invalid("need at least 2 classes");
        }
        if self.class_sizes.iter().any(|&s| s < 2) {
            return invalid("every class needs at least 2 observations");
        }
        if self.offsets.len() != self.class_sizes.len() {
            return invalid("offsets need one row per class");
        }
        let inf = self.informative_features();
        if self.offsets.iter().any(|row| row.len() != inf) {
            return invalid("offset rows differ in length");
        }
        if self.offsets.iter().flatten().any(|o| !o.is_finite()) {
            return invalid("offsets must be finite");
        }
        if self.p() == 0 {
            return invalid("need at least one feature");
        }
        if inf > 0 && !(self.informative_sigma > 0.0 && self.informative_sigma.is_finite()) {
            return invalid("informative_sigma must be positive");
        }
        if self.noise_features > 0 && !(self.noise_sigma > 0.0 && self.noise_sigma.is_finite()) {
            return invalid("noise_sigma must be positive");
        }
        Ok(())
    }
}

/// One major class (the first, and the largest) and smaller minor
/// classes. Rows are grouped by class in order.
pub fn generate_imbalanced(spec: &GeneratorSpec) -> Result<(DataMatrix, LabelVector)> {
    spec.validate()?;
    let major = spec.class_sizes[0];
    if spec.class_sizes[1..].iter().any(|&s| s > major) {
        return Err(Error::InvalidSpec(
            "the first class must be the largest".into(),
        ));
    }
    generate(spec)
}

/// Every class has the same size.
pub fn generate_balanced(spec: &GeneratorSpec) -> Result<(DataMatrix, LabelVector)> {
    spec.validate()?;
    if spec.class_sizes.iter().any(|&s| s != spec.class_sizes[0]) {
        return Err(Error::InvalidSpec("class sizes must be equal".into()));
    }
    generate(spec)
}

fn generate(spec: &GeneratorSpec) -> Result<(DataMatrix, LabelVector)> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let labels: Vec<usize> = spec
        .class_sizes
        .iter()
        .enumerate()
        .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
        .collect();
    let mut gauss = || -> f64 { StandardNormal.sample(&mut rng) };

    let mut names = Vec::with_capacity(spec.p());
    let mut columns = Vec::with_capacity(spec.p());
    for f in 0..spec.informative_features() {
        names.push(format!("{INFORMATIVE_PREFIX}{f}"));
        let sigma = spec.informative_sigma;
        columns.push(
            labels
                .iter()
                .map(|&c| sigma * (spec.offsets[c][f] + gauss()))
                .collect(),
        );
    }
    for f in 0..spec.noise_features {
        names.push(format!("{NOISE_PREFIX}{f}"));
        columns.push(labels.iter().map(|_| spec.noise_sigma * gauss()).collect());
    }
    Ok((
        DataMatrix::from_columns(names, columns)?,
        LabelVector::new(labels),
    ))
}
