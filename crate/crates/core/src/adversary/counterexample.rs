//! Exact evaluation of the time-shared quantization scheme, and the total
//! variation between a product law and its typicality-conditioned version.

use serde::{Deserialize, Serialize};

use super::exact::{exact_equivocation, LetterTables};
use crate::error::{Error, Result};
use crate::probcore::{conditional_entropy, is_typical, JointPmf, Pmf, SequenceSample};
use crate::regions::HypothesisPair;
use crate::schemes::{DetectionScheme, TimeshareScheme};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleRecord {
    pub n: usize,
    pub epsilon_star: f64,
    pub alpha_exact: f64,
    pub equivocation_per_letter: f64,
    /// `H_P(S|U,V)`.
    pub weak_converse: f64,
    /// `H_P(S|V)`.
    pub zero_rate_equivocation: f64,
}

/// Exact type I error of any scheme under the null: sum over `u^n`, `v^n`
/// and the message law.
pub fn exact_type1_error(scheme: &dyn DetectionScheme, pair: &HypothesisPair) -> Result<f64> {
    let n = scheme.blocklength();
    let p_uv = pair.p().marginal(&["U", "V"])?;
    let sz = p_uv.sizes();
    let (u, v) = (sz[0], sz[1]);
    let mut alpha = 0.0;
    for ui in 0..u.pow(n as u32) {
        let useq = SequenceSample::from_index(u, n, ui);
        let law = scheme.message_law(&useq)?;
        for vi in 0..v.pow(n as u32) {
            let vseq = SequenceSample::from_index(v, n, vi);
            let p: f64 = useq
                .symbols()
                .iter()
                .zip(vseq.symbols())
                .map(|(&a, &b)| p_uv.get(&[a, b]))
                .product();
            if p == 0.0 {
                continue;
            }
            for (m, w) in &law {
                if scheme.decide(m, &vseq) != 0 {
                    alpha += p * w;
                }
            }
        }
    }
    Ok(alpha)
}

/// Type I error and null equivocation of the time-shared scheme for each
/// `n`. Requires `H_P(S|U,V) < H_P(S|V)`.
pub fn counterexample_curve(
    pair: &HypothesisPair,
    epsilon_star: f64,
    n_list: &[usize],
    delta: f64,
    delta_prime: f64,
) -> Result<Vec<CounterexampleRecord>> {
    let hsuv = conditional_entropy(pair.p(), &["S"], &["U", "V"])?;
    let hsv = conditional_entropy(pair.p(), &["S"], &["V"])?;
    if hsuv >= hsv - 1e-12 {
        return Err(Error::Assumption(format!(
            "need H_P(S|U,V) < H_P(S|V), got {hsuv} and {hsv}"
        )));
    }
    let p_uv = pair.p().marginal(&["U", "V"])?;
    n_list
        .iter()
        .map(|&n| {
            let scheme = TimeshareScheme::new(&p_uv, n, delta, delta_prime, epsilon_star)?;
            Ok(CounterexampleRecord {
                n,
                epsilon_star,
                alpha_exact: exact_type1_error(&scheme, pair)?,
                equivocation_per_letter: exact_equivocation(&scheme, pair, 0)? / n as f64,
                weak_converse: hsuv,
                zero_rate_equivocation: hsv,
            })
        })
        .collect()
}

/// `|| L_{S^n V^n} - L_{S^n V^n | Pi = pi} ||` under the hypothesis law,
/// where `Pi = 1(u^n not in T[P_U]_delta)` uses the null marginal of `U`.
pub fn conditioned_tv(pair: &HypothesisPair, hypothesis: u8, delta: f64, n: usize, pi: bool) -> Result<f64> {
    conditioned_tv_law(pair.law(hypothesis), &pair.p_u(), delta, n, pi)
}

/// Same as [`conditioned_tv`] for a single law on `S, U, V` and an
/// arbitrary reference marginal `p_u`.
pub fn conditioned_tv_law(law: &JointPmf, p_u: &Pmf, delta: f64, n: usize, pi: bool) -> Result<f64> {
    let tables = LetterTables::new(law)?;
    if tables.u != p_u.support_size() {
        return Err(Error::SupportMismatch {
            left: tables.u,
            right: p_u.support_size(),
        });
    }
    let (s, u, v) = (tables.s, tables.u, tables.v);
    let cells = (s * v).pow(n as u32);
    let mut all = vec![0.0; cells];
    let mut cond = vec![0.0; cells];
    let mut scratch = Vec::new();
    for ui in 0..u.pow(n as u32) {
        let useq = SequenceSample::from_index(u, n, ui);
        tables.accumulate(useq.symbols(), 1.0, &mut all, &mut scratch);
        if !is_typical(&useq, p_u, delta)? == pi {
            tables.accumulate(useq.symbols(), 1.0, &mut cond, &mut scratch);
        }
    }
    let mass: f64 = cond.iter().sum();
    if mass <= 0.0 {
        return Err(Error::Assumption("conditioning event has zero probability".into()));
    }
    Ok(0.5 * all.iter().zip(&cond).map(|(a, c)| (a - c / mass).abs()).sum::<f64>())
}
