//! Entropies, divergences and distances in nats.

use super::{neumaier_sum, JointPmf, Pmf};
use crate::error::{Error, Result};

/// `-x ln x` with the convention `0 ln 0 = 0`.
#[inline]
pub(crate) fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.ln()
    } else {
        0.0
    }
}

/// Entropy of a raw mass vector.
pub fn entropy_of(probs: &[f64]) -> f64 {
    neumaier_sum(probs.iter().map(|&p| plogp(p))).max(0.0)
}

pub fn entropy(p: &Pmf) -> f64 {
    entropy_of(p.probs())
}

/// `sum p ln(p/q)` over raw vectors; `+inf` when `p` is not absolutely
/// continuous with respect to `q`.
pub fn kl_of(p: &[f64], q: &[f64]) -> f64 {
    let mut terms = Vec::with_capacity(p.len());
    for (&a, &b) in p.iter().zip(q) {
        if a > 0.0 {
            if b <= 0.0 {
                return f64::INFINITY;
            }
            terms.push(a * (a / b).ln());
        }
    }
    neumaier_sum(terms).max(0.0)
}

pub fn kl_divergence(p: &Pmf, q: &Pmf) -> Result<f64> {
    if p.support_size() != q.support_size() {
        return Err(Error::SupportMismatch {
            left: p.support_size(),
            right: q.support_size(),
        });
    }
    Ok(kl_of(p.probs(), q.probs()))
}

pub fn kl_divergence_joint(p: &JointPmf, q: &JointPmf) -> Result<f64> {
    if !p.same_shape(q) {
        return Err(Error::ShapeMismatch("divergence between laws on different axes".into()));
    }
    Ok(kl_of(p.probs(), q.probs()))
}

/// Anything that is a finite probability vector with a comparable shape.
pub trait Law {
    fn masses(&self) -> &[f64];
    fn shape_matches(&self, other: &Self) -> bool;
}

impl Law for Pmf {
    fn masses(&self) -> &[f64] {
        self.probs()
    }
    fn shape_matches(&self, other: &Self) -> bool {
        self.support_size() == other.support_size()
    }
}

impl Law for JointPmf {
    fn masses(&self) -> &[f64] {
        self.probs()
    }
    fn shape_matches(&self, other: &Self) -> bool {
        self.same_shape(other)
    }
}

pub fn tv_of(p: &[f64], q: &[f64]) -> f64 {
    (0.5 * neumaier_sum(p.iter().zip(q).map(|(a, b)| (a - b).abs()))).clamp(0.0, 1.0)
}

pub fn total_variation<L: Law>(p: &L, q: &L) -> Result<f64> {
    if !p.shape_matches(q) {
        return Err(Error::ShapeMismatch("total variation between laws of different shape".into()));
    }
    Ok(tv_of(p.masses(), q.masses()))
}

fn check_disjoint(groups: &[&[&str]]) -> Result<()> {
    let mut seen: Vec<&str> = Vec::new();
    for g in groups {
        for a in g.iter() {
            if seen.contains(a) {
                return Err(Error::OverlappingAxes(a.to_string()));
            }
            seen.push(a);
        }
    }
    Ok(())
}

/// Joint entropy of the listed axes (zero for an empty list).
pub fn joint_entropy(j: &JointPmf, axes: &[&str]) -> Result<f64> {
    if axes.is_empty() {
        return Ok(0.0);
    }
    Ok(entropy_of(j.marginal(axes)?.probs()))
}

/// `H(target | given)`.
pub fn conditional_entropy(j: &JointPmf, target: &[&str], given: &[&str]) -> Result<f64> {
    check_disjoint(&[target, given])?;
    let all: Vec<&str> = target.iter().chain(given).copied().collect();
    Ok((joint_entropy(j, &all)? - joint_entropy(j, given)?).max(0.0))
}

/// `I(a; b)`.
pub fn mutual_information(j: &JointPmf, a: &[&str], b: &[&str]) -> Result<f64> {
    conditional_mutual_information(j, a, b, &[])
}

/// `I(a; b | given)`.
pub fn conditional_mutual_information(
    j: &JointPmf,
    a: &[&str],
    b: &[&str],
    given: &[&str],
) -> Result<f64> {
    check_disjoint(&[a, b, given])?;
    let ag: Vec<&str> = a.iter().chain(given).copied().collect();
    let bg: Vec<&str> = b.iter().chain(given).copied().collect();
    let abg: Vec<&str> = a.iter().chain(b).chain(given).copied().collect();
    let v = joint_entropy(j, &ag)? + joint_entropy(j, &bg)?
        - joint_entropy(j, &abg)?
        - joint_entropy(j, given)?;
    Ok(v.max(0.0))
}

/// Right side of the entropy continuity bound `|H(p) - H(q)| <= -2 rho ln(2 rho / |X|)`,
/// valid for `rho <= 1/4`.
pub fn entropy_continuity_bound(rho: f64, alphabet: usize) -> Result<f64> {
    if !(0.0..=0.25).contains(&rho) {
        return Err(Error::Domain {
            value: rho,
            domain: "[0, 0.25]",
        });
    }
    if rho == 0.0 {
        return Ok(0.0);
    }
    Ok(-2.0 * rho * (2.0 * rho / alphabet as f64).ln())
}
