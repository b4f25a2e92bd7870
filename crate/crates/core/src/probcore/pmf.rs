use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on total mass for every distribution the toolkit accepts.
pub const MASS_TOL: f64 = 1e-12;

/// Sup-norm tolerance used when deciding whether two laws are equal.
pub const EQUALITY_TOL: f64 = 1e-12;

pub(crate) fn check_probs(probs: &[f64], what: &str) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::InvalidDistribution(format!("{what}: empty support")));
    }
    for (i, &p) in probs.iter().enumerate() {
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidDistribution(format!(
                "{what}: entry {i} = {p} is not in [0, 1]"
            )));
        }
    }
    let total = super::neumaier_sum(probs.iter().copied());
    if (total - 1.0).abs() > MASS_TOL {
        return Err(Error::InvalidDistribution(format!(
            "{what}: total mass {total} differs from 1 by {:.3e}",
            (total - 1.0).abs()
        )));
    }
    Ok(())
}

/// A probability mass function on `{0, .., support_size - 1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_probs(&probs, "pmf")?;
        Ok(Self { probs })
    }

    /// Scales nonnegative weights to unit mass.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDistribution(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let total = super::neumaier_sum(weights.iter().copied());
        if total <= 0.0 {
            return Err(Error::InvalidDistribution("weights have zero mass".into()));
        }
        Self::new(weights.into_iter().map(|w| w / total).collect())
    }

    pub fn uniform(size: usize) -> Self {
        assert!(size > 0, "uniform pmf needs a nonempty support");
        Self {
            probs: vec![1.0 / size as f64; size],
        }
    }

    pub fn point_mass(size: usize, at: usize) -> Self {
        assert!(at < size, "point mass outside the support");
        let mut probs = vec![0.0; size];
        probs[at] = 1.0;
        Self { probs }
    }

    pub fn support_size(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn sup_distance(&self, other: &Pmf) -> Result<f64> {
        if self.support_size() != other.support_size() {
            return Err(Error::SupportMismatch {
                left: self.support_size(),
                right: other.support_size(),
            });
        }
        Ok(self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Equality up to [`EQUALITY_TOL`] in sup norm.
    pub fn approx_eq(&self, other: &Pmf) -> bool {
        self.sup_distance(other)
            .map(|d| d <= EQUALITY_TOL)
            .unwrap_or(false)
    }
}

impl TryFrom<Vec<f64>> for Pmf {
    type Error = Error;

    fn try_from(probs: Vec<f64>) -> Result<Self> {
        Self::new(probs)
    }
}

impl From<Pmf> for Vec<f64> {
    fn from(p: Pmf) -> Self {
        p.probs
    }
}
