//! Plug-in Monte Carlo estimates of the exact privacy quantities.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::exact::{group_messages, LetterTables, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::probcore::{draw, SequenceSample};
use crate::regions::{bayes_weights, Distortion, HypothesisPair};
use crate::schemes::{sample_suv, trial_rng, MessageLaw};

/// Sample means with standard errors. These are estimates, not bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrivacyEstimate {
    pub n: usize,
    pub hypothesis: u8,
    pub trials: u64,
    pub equivocation_per_letter: f64,
    pub equivocation_se: f64,
    pub causal_distortion_per_letter: Option<f64>,
    pub causal_distortion_se: Option<f64>,
    pub exact: bool,
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    if xs.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// Posterior weights of `s^n` (first letter slowest) given `u^n`, `v^n`.
fn posterior_column(tables: &LetterTables, u: &[usize], v: &[usize], w: f64, out: &mut [f64]) {
    let mut cur = vec![w];
    for (&x, &y) in u.iter().zip(v) {
        let t = &tables.t[x];
        let next: Vec<f64> = cur
            .iter()
            .flat_map(|&p| (0..tables.s).map(move |s| p * t[s * tables.v + y]))
            .collect();
        cur = next;
    }
    for (o, c) in out.iter_mut().zip(cur) {
        *o += c;
    }
}

/// `sum_i min_shat E[d(S_i, shat) | s^{i-1}]` along the realized path.
fn path_risk(post: &[f64], s_seq: &[usize], s: usize, d: &Distortion) -> f64 {
    let n = s_seq.len();
    let mut lo = 0usize;
    let mut width = post.len();
    let mut risk = 0.0;
    for &si in s_seq.iter().take(n) {
        let block = width / s;
        let weights: Vec<f64> = (0..s).map(|a| post[lo + a * block..lo + (a + 1) * block].iter().sum()).collect();
        let total: f64 = weights.iter().sum();
        if total > 0.0 {
            risk += bayes_weights(&weights, d).1 / total;
        }
        lo += si * block;
        width = block;
    }
    risk
}

/// Estimates `H(S^n | M, V^n)` and, when the pair has a distortion table,
/// the causal distortion, from `trials` seeded draws.
pub fn mc_privacy_estimate(
    model: &dyn MessageLaw,
    pair: &HypothesisPair,
    hypothesis: u8,
    trials: u64,
    seed: u64,
) -> Result<PrivacyEstimate> {
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let n = model.blocklength();
    let tables = LetterTables::new(pair.law(hypothesis))?;
    let (s, u, _) = pair.sizes();
    let cost = (u as f64).powi(n as i32) * (s as f64).powi(n as i32);
    if cost > DEFAULT_BUDGET {
        return Err(Error::BudgetExceeded {
            required: cost,
            budget: DEFAULT_BUDGET,
        });
    }
    let groups = group_messages(model, u, n)?;
    let d = pair.distortion();
    let samples: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<(f64, f64)> {
            let mut rng: ChaCha8Rng = trial_rng(seed, hypothesis, t);
            let [sn, un, vn] = sample_suv(pair, hypothesis, n, &mut rng);
            let law = model.message_law(&un)?;
            let probs: Vec<f64> = law.iter().map(|(_, p)| *p).collect();
            let m = law[draw(&probs, &mut rng)].0;
            let mut post = vec![0.0; s.pow(n as u32)];
            for &(ui, w) in &groups[&m] {
                let useq = SequenceSample::from_index(u, n, ui);
                posterior_column(&tables, useq.symbols(), vn.symbols(), w, &mut post);
            }
            let total: f64 = post.iter().sum();
            let h = -(post[sn.index()] / total).ln();
            let r = d.map(|d| path_risk(&post, sn.symbols(), s, d)).unwrap_or(0.0);
            Ok((h, r))
        })
        .collect::<Result<_>>()?;
    let nf = n as f64;
    let (h, hse) = mean_se(&samples.iter().map(|x| x.0 / nf).collect::<Vec<_>>());
    let (r, rse) = mean_se(&samples.iter().map(|x| x.1 / nf).collect::<Vec<_>>());
    Ok(PrivacyEstimate {
        n,
        hypothesis,
        trials,
        equivocation_per_letter: h,
        equivocation_se: hse,
        causal_distortion_per_letter: d.map(|_| r),
        causal_distortion_se: d.map(|_| rse),
        exact: false,
    })
}
