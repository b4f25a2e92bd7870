//! Exact `n`-letter privacy by enumeration of `u^n`, grouped by message.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::probcore::{neumaier_sum, plogp, JointPmf, SequenceSample};
use crate::regions::{bayes_weights, Distortion, HypothesisPair};
use crate::schemes::{Message, MessageLaw};

/// Default cap on `|S|^n |V|^n |M_active| + |U|^n`.
pub const DEFAULT_BUDGET: f64 = 1e8;

/// Per-letter privacy of one scheme under both hypotheses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrivacyReport {
    pub n: usize,
    pub equivocation_per_letter_h0: f64,
    pub equivocation_per_letter_h1: f64,
    pub causal_distortion_per_letter_h0: Option<f64>,
    pub causal_distortion_per_letter_h1: Option<f64>,
    pub exact: bool,
}

/// `law(s_i, u, v_i)` tables for one hypothesis, `t[u][s * |V| + v]`.
pub(crate) struct LetterTables {
    pub s: usize,
    pub u: usize,
    pub v: usize,
    pub t: Vec<Vec<f64>>,
}

impl LetterTables {
    pub fn new(law: &JointPmf) -> Result<Self> {
        let law = law.permuted(&["S", "U", "V"])?;
        let sz = law.sizes();
        let (s, u, v) = (sz[0], sz[1], sz[2]);
        let t = (0..u)
            .map(|b| {
                let mut row = Vec::with_capacity(s * v);
                for a in 0..s {
                    for c in 0..v {
                        row.push(law.get(&[a, b, c]));
                    }
                }
                row
            })
            .collect();
        Ok(Self { s, u, v, t })
    }

    /// Adds `w * prod_i t[u_i]` into `out`, laid out as `s^n` (first letter
    /// slowest) times `v^n`.
    pub fn accumulate(&self, u: &[usize], w: f64, out: &mut [f64], scratch: &mut Vec<f64>) {
        let mut cur = vec![w];
        let (mut rows, mut cols) = (1usize, 1usize);
        for &x in u {
            let t = &self.t[x];
            scratch.clear();
            scratch.resize(rows * self.s * cols * self.v, 0.0);
            let nc = cols * self.v;
            for a in 0..rows {
                for b in 0..cols {
                    let p = cur[a * cols + b];
                    if p == 0.0 {
                        continue;
                    }
                    for si in 0..self.s {
                        let base = (a * self.s + si) * nc + b * self.v;
                        for vi in 0..self.v {
                            scratch[base + vi] = p * t[si * self.v + vi];
                        }
                    }
                }
            }
            std::mem::swap(&mut cur, scratch);
            rows *= self.s;
            cols *= self.v;
        }
        for (o, c) in out.iter_mut().zip(&cur) {
            *o += c;
        }
    }
}

/// Messages with the `u^n` that can emit them.
pub(crate) type Groups = BTreeMap<Message, Vec<(usize, f64)>>;

pub(crate) fn group_messages(model: &dyn MessageLaw, u_size: usize, n: usize) -> Result<Groups> {
    let mut groups = Groups::new();
    for i in 0..u_size.pow(n as u32) {
        let u = SequenceSample::from_index(u_size, n, i);
        for (m, p) in model.message_law(&u)? {
            if p > 0.0 {
                groups.entry(m).or_default().push((i, p));
            }
        }
    }
    Ok(groups)
}

fn pow(base: usize, n: usize) -> f64 {
    (base as f64).powi(n as i32)
}

/// Evaluates `f` on the joint `P(s^n, v^n, m)` slice of every message and
/// sums the results.
pub(crate) fn fold_slices<F>(model: &dyn MessageLaw, pair: &HypothesisPair, hypothesis: u8, budget: f64, f: F) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let n = model.blocklength();
    let tables = LetterTables::new(pair.law(hypothesis))?;
    let (s, u, v) = (tables.s, tables.u, tables.v);
    let pre = pow(s, n) * pow(v, n) + pow(u, n);
    if pre > budget {
        return Err(Error::BudgetExceeded { required: pre, budget });
    }
    let groups = group_messages(model, u, n)?;
    let required = pow(s, n) * pow(v, n) * groups.len() as f64 + pow(u, n);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let cells = s.pow(n as u32) * v.pow(n as u32);
    let parts: Vec<f64> = groups
        .par_iter()
        .map_init(
            || (vec![0.0; cells], Vec::new()),
            |(slice, scratch), (_, members)| {
                slice.iter_mut().for_each(|x| *x = 0.0);
                for &(ui, w) in members {
                    let useq = SequenceSample::from_index(u, n, ui);
                    tables.accumulate(useq.symbols(), w, slice, scratch);
                }
                f(slice)
            },
        )
        .collect();
    Ok(neumaier_sum(parts))
}

/// `H(S^n | M, V^n)` in nats, summed over `s` columns of one slice.
fn slice_equivocation(slice: &[f64], vn: usize) -> f64 {
    let mut h = 0.0;
    for c in 0..vn {
        let mut total = 0.0;
        let mut sum = 0.0;
        for x in slice.iter().skip(c).step_by(vn) {
            total += x;
            sum += plogp(*x);
        }
        h += sum - plogp(total);
    }
    h
}

/// Exact `H(S^n | M, V^n)` in nats under the given hypothesis.
pub fn exact_equivocation(model: &dyn MessageLaw, pair: &HypothesisPair, hypothesis: u8) -> Result<f64> {
    exact_equivocation_with_budget(model, pair, hypothesis, DEFAULT_BUDGET)
}

pub fn exact_equivocation_with_budget(model: &dyn MessageLaw, pair: &HypothesisPair, hypothesis: u8, budget: f64) -> Result<f64> {
    let vn = pair.sizes().2.pow(model.blocklength() as u32);
    let h = fold_slices(model, pair, hypothesis, budget, |slice| slice_equivocation(slice, vn))?;
    Ok(h.max(0.0))
}

/// Causal risk of one `s^n` column: `sum_i sum_{s^{i-1}} min_shat ...`.
pub(crate) fn column_causal_risk(col: &mut Vec<f64>, s: usize, d: &Distortion) -> f64 {
    let mut risk = 0.0;
    while col.len() > 1 {
        let prefixes = col.len() / s;
        for k in 0..prefixes {
            risk += bayes_weights(&col[k * s..(k + 1) * s], d).1;
        }
        for k in 0..prefixes {
            col[k] = col[k * s..(k + 1) * s].iter().sum();
        }
        col.truncate(prefixes);
    }
    risk
}

/// Exact `sum_i min_phi E[d(S_i, phi(M, V^n, S^{i-1}))]` under the given
/// hypothesis.
pub fn exact_causal_distortion(model: &dyn MessageLaw, pair: &HypothesisPair, hypothesis: u8) -> Result<f64> {
    exact_causal_distortion_with_budget(model, pair, hypothesis, DEFAULT_BUDGET)
}

pub fn exact_causal_distortion_with_budget(
    model: &dyn MessageLaw,
    pair: &HypothesisPair,
    hypothesis: u8,
    budget: f64,
) -> Result<f64> {
    let d = pair.distortion_or_err()?;
    let (s, _, v) = pair.sizes();
    let vn = v.pow(model.blocklength() as u32);
    fold_slices(model, pair, hypothesis, budget, |slice| {
        let mut col = Vec::new();
        (0..vn)
            .map(|c| {
                col.clear();
                col.extend(slice.iter().skip(c).step_by(vn));
                column_causal_risk(&mut col, s, d)
            })
            .sum()
    })
}

/// Exact report under both hypotheses; distortion only when the pair has
/// a distortion table.
pub fn exact_privacy_report(model: &dyn MessageLaw, pair: &HypothesisPair) -> Result<PrivacyReport> {
    let n = model.blocklength() as f64;
    let dist = |h| -> Result<Option<f64>> {
        if pair.distortion().is_none() {
            return Ok(None);
        }
        Ok(Some(exact_causal_distortion(model, pair, h)? / n))
    };
    Ok(PrivacyReport {
        n: model.blocklength(),
        equivocation_per_letter_h0: exact_equivocation(model, pair, 0)? / n,
        equivocation_per_letter_h1: exact_equivocation(model, pair, 1)? / n,
        causal_distortion_per_letter_h0: dist(0)?,
        causal_distortion_per_letter_h1: dist(1)?,
        exact: true,
    })
}
