//! Brute-force references at tiny scale. Deliberately naive: nothing here
//! reuses the optimized enumeration or solver code, so agreement between
//! the two is evidence rather than tautology. Single-threaded.

mod errors;
mod estimators;
mod grid;

pub use errors::exact_error_probabilities;
pub use estimators::exhaustive_causal_estimators;
pub use grid::grid_min_kl;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleBudget {
    /// Cap on enumerated joint cells (or grid points).
    pub max_joint_cells: f64,
    /// Grid step is `1 / grid_steps`.
    pub grid_steps: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_joint_cells: 1e7,
            grid_steps: 200,
        }
    }
}

/// Product probability of one letter-by-letter sequence triple.
pub(crate) fn naive_prob(law: &crate::probcore::JointPmf, s: &[usize], u: &[usize], v: &[usize]) -> f64 {
    let mut p = 1.0;
    for i in 0..s.len() {
        p *= law.get(&[s[i], u[i], v[i]]);
    }
    p
}

/// All length-`n` sequences over `a` letters, first letter slowest.
pub(crate) fn all_sequences(a: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for prefix in &out {
            for x in 0..a {
                let mut p = prefix.clone();
                p.push(x);
                next.push(p);
            }
        }
        out = next;
    }
    out
}
