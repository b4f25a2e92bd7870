use std::collections::BTreeMap;

use super::{all_sequences, naive_prob, OracleBudget};
use crate::error::{Error, Result};
use crate::probcore::SequenceSample;
use crate::regions::HypothesisPair;
use crate::schemes::{Message, MessageLaw};

/// Largest `n` accepted.
pub const MAX_N: usize = 2;
/// Cap on the number of estimator tables tried for one letter.
pub const MAX_TABLES: f64 = 1e6;

/// `sum_i min over every deterministic table phi_i(m, v^n, s^{i-1})` of
/// `E[d(S_i, phi_i)]`, found by trying each table in full.
pub fn exhaustive_causal_estimators(
    model: &dyn MessageLaw,
    pair: &HypothesisPair,
    hypothesis: u8,
    budget: &OracleBudget,
) -> Result<f64> {
    let n = model.blocklength();
    if n > MAX_N {
        return Err(Error::BudgetExceeded {
            required: n as f64,
            budget: MAX_N as f64,
        });
    }
    let d = pair.distortion_or_err()?;
    let (s, u, v) = pair.sizes();
    let law = pair.law(hypothesis);
    let cells = ((s * u * v) as f64).powi(n as i32);
    if cells > budget.max_joint_cells {
        return Err(Error::BudgetExceeded {
            required: cells,
            budget: budget.max_joint_cells,
        });
    }

    // Joint law of (s^n, v^n, m) as a list.
    let mut joint: BTreeMap<(Vec<usize>, Vec<usize>, Message), f64> = BTreeMap::new();
    for useq in all_sequences(u, n) {
        let mlaw = model.message_law(&SequenceSample::new(u, useq.clone())?)?;
        for sseq in all_sequences(s, n) {
            for vseq in all_sequences(v, n) {
                let p = naive_prob(law, &sseq, &useq, &vseq);
                for (m, w) in &mlaw {
                    *joint.entry((sseq.clone(), vseq.clone(), *m)).or_default() += p * w;
                }
            }
        }
    }
    let messages: Vec<Message> = {
        let mut m: Vec<Message> = joint.keys().map(|k| k.2).collect();
        m.sort();
        m.dedup();
        m
    };
    let vseqs = all_sequences(v, n);
    let shat = d.reconstruction_size();

    let mut total = 0.0;
    for i in 0..n {
        let prefixes = all_sequences(s, i);
        // Domain points (m, v^n, s^{i-1}) enumerated in a fixed order.
        let mut domain = Vec::new();
        for m in &messages {
            for vseq in &vseqs {
                for pre in &prefixes {
                    domain.push((*m, vseq.clone(), pre.clone()));
                }
            }
        }
        let tables = (shat as f64).powi(domain.len() as i32);
        if tables > MAX_TABLES {
            return Err(Error::BudgetExceeded {
                required: tables,
                budget: MAX_TABLES,
            });
        }
        let lookup: BTreeMap<(Message, Vec<usize>, Vec<usize>), usize> =
            domain.iter().enumerate().map(|(k, x)| (x.clone(), k)).collect();
        let cells: Vec<(usize, usize, f64)> = joint
            .iter()
            .map(|((sseq, vseq, m), &p)| (lookup[&(*m, vseq.clone(), sseq[..i].to_vec())], sseq[i], p))
            .collect();
        let mut best = f64::INFINITY;
        let mut table = vec![0usize; domain.len()];
        loop {
            let risk: f64 = cells.iter().map(|&(k, si, p)| p * d.get(si, table[k])).sum();
            best = best.min(risk);
            let mut k = 0;
            loop {
                if k == table.len() {
                    break;
                }
                table[k] += 1;
                if table[k] < shat {
                    break;
                }
                table[k] = 0;
                k += 1;
            }
            if k == table.len() {
                break;
            }
        }
        total += best;
    }
    Ok(total)
}
