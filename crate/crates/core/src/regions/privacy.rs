use super::pair::Distortion;
use crate::error::{Error, Result};
use crate::probcore::{JointPmf, Pmf};

/// Bayes reconstruction for a posterior on `S`: the `s_hat` minimizing the
/// expected distortion, smallest index on ties.
pub fn bayes_estimator(posterior: &Pmf, d: &Distortion) -> Result<(usize, f64)> {
    if posterior.support_size() != d.source_size() {
        return Err(Error::SupportMismatch {
            left: posterior.support_size(),
            right: d.source_size(),
        });
    }
    Ok(bayes_weights(posterior.probs(), d))
}

/// Same as [`bayes_estimator`] on unnormalized weights; the risk scales
/// with the total weight.
pub(crate) fn bayes_weights(weights: &[f64], d: &Distortion) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for s_hat in 0..d.reconstruction_size() {
        let risk: f64 = weights
            .iter()
            .enumerate()
            .map(|(s, &w)| w * d.get(s, s_hat))
            .sum();
        if risk < best.1 {
            best = (s_hat, risk);
        }
    }
    best
}

/// `min_phi E[d(S, phi(given))]` under `law`, which must carry axis `S`.
pub fn bayes_risk(law: &JointPmf, given: &[&str], d: &Distortion) -> Result<f64> {
    let mut axes = given.to_vec();
    axes.push("S");
    let m = law.marginal(&axes)?;
    let s = *m.sizes().last().unwrap();
    if s != d.source_size() {
        return Err(Error::SupportMismatch {
            left: s,
            right: d.source_size(),
        });
    }
    Ok(m.probs().chunks(s).map(|w| bayes_weights(w, d).1).sum())
}
