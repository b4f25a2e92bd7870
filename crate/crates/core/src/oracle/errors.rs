use super::{all_sequences, naive_prob, OracleBudget};
use crate::error::{Error, Result};
use crate::probcore::SequenceSample;
use crate::regions::HypothesisPair;
use crate::schemes::{Message, MessageLaw};

/// Exact `(alpha, beta)` by summing over every `(s^n, u^n, v^n, m)`.
/// `accept(m, v)` is the acceptance region of the null.
pub fn exact_error_probabilities(
    model: &dyn MessageLaw,
    accept: &dyn Fn(&Message, &SequenceSample) -> bool,
    pair: &HypothesisPair,
    budget: &OracleBudget,
) -> Result<(f64, f64)> {
    let n = model.blocklength();
    let (s, u, v) = pair.sizes();
    let cells = ((s * u * v) as f64).powi(n as i32);
    if cells > budget.max_joint_cells {
        return Err(Error::BudgetExceeded {
            required: cells,
            budget: budget.max_joint_cells,
        });
    }
    let ss = all_sequences(s, n);
    let us = all_sequences(u, n);
    let vs = all_sequences(v, n);
    let mut reject_p = 0.0;
    let mut accept_q = 0.0;
    for useq in &us {
        let law = model.message_law(&SequenceSample::new(u, useq.clone())?)?;
        for vseq in &vs {
            let vs_ = SequenceSample::new(v, vseq.clone())?;
            let mut acc_w = 0.0;
            for (m, w) in &law {
                if accept(m, &vs_) {
                    acc_w += w;
                }
            }
            for sseq in &ss {
                let p = naive_prob(pair.p(), sseq, useq, vseq);
                let q = naive_prob(pair.q(), sseq, useq, vseq);
                reject_p += p * (1.0 - acc_w);
                accept_q += q * acc_w;
            }
        }
    }
    Ok((reject_p, accept_q))
}
