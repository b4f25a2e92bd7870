//! Finite sequences, empirical types and typicality.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{entropy_of, Axis, JointPmf, Pmf};
use crate::error::{Error, Result};

/// A length-`n` sequence over `{0, .., alphabet - 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SequenceSample {
    alphabet: usize,
    symbols: Vec<usize>,
}

impl SequenceSample {
    pub fn new(alphabet: usize, symbols: Vec<usize>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::Config("sequences must have length n >= 1".into()));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s >= alphabet) {
            return Err(Error::SymbolOutOfRange {
                symbol: s,
                alphabet,
            });
        }
        Ok(Self { alphabet, symbols })
    }

    /// The `index`-th sequence in lexicographic order (first symbol slowest).
    pub fn from_index(alphabet: usize, n: usize, mut index: usize) -> Self {
        let mut symbols = vec![0; n];
        for s in symbols.iter_mut().rev() {
            *s = index % alphabet;
            index /= alphabet;
        }
        Self { alphabet, symbols }
    }

    pub fn index(&self) -> usize {
        self.symbols.iter().fold(0, |acc, &s| acc * self.alphabet + s)
    }

    /// I.i.d. draw of length `n` from `p`.
    pub fn sample<R: Rng + ?Sized>(p: &Pmf, n: usize, rng: &mut R) -> Self {
        let symbols = (0..n).map(|_| draw(p.probs(), rng)).collect();
        Self {
            alphabet: p.support_size(),
            symbols,
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.alphabet];
        for &s in &self.symbols {
            c[s] += 1;
        }
        c
    }

    /// Empirical type as a pmf.
    pub fn type_pmf(&self) -> Pmf {
        let n = self.len() as f64;
        Pmf::normalized(self.counts().into_iter().map(|c| c as f64 / n).collect())
            .expect("nonempty sequence")
    }
}

/// Inverse-CDF draw from a mass vector.
pub(crate) fn draw<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let x: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = i;
        if x < acc {
            return i;
        }
    }
    last
}

/// Slack absorbing rounding in frequency comparisons.
const FREQ_SLACK: f64 = 1e-12;

/// Typicality of a count vector of total `n`.
pub fn counts_typical(counts: &[usize], n: usize, p: &Pmf, delta: f64) -> bool {
    counts
        .iter()
        .zip(p.probs())
        .all(|(&c, &q)| (q - c as f64 / n as f64).abs() <= delta + FREQ_SLACK)
}

/// `|P(a) - freq(a)| <= delta` for every letter `a`.
pub fn is_typical(x: &SequenceSample, p: &Pmf, delta: f64) -> Result<bool> {
    if x.alphabet() != p.support_size() {
        return Err(Error::SupportMismatch {
            left: x.alphabet(),
            right: p.support_size(),
        });
    }
    if !(delta >= 0.0) {
        return Err(Error::Domain {
            value: delta,
            domain: "[0, inf)",
        });
    }
    Ok(counts_typical(&x.counts(), x.len(), p, delta))
}

/// Joint count matrix of `(x, y)`, row-major in `x` then `y`.
pub fn joint_counts(x: &SequenceSample, y: &SequenceSample) -> Result<Vec<usize>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let mut c = vec![0; x.alphabet() * y.alphabet()];
    for (&a, &b) in x.symbols().iter().zip(y.symbols()) {
        c[a * y.alphabet() + b] += 1;
    }
    Ok(c)
}

/// Joint empirical type on axes `X`, `Y`.
pub fn joint_type(x: &SequenceSample, y: &SequenceSample) -> Result<JointPmf> {
    let c = joint_counts(x, y)?;
    let n = x.len() as f64;
    JointPmf::from_weights(
        vec![Axis::new("X", x.alphabet()), Axis::new("Y", y.alphabet())],
        c.into_iter().map(|k| k as f64 / n).collect(),
    )
}

/// `H_e(y | x)`: conditional entropy of the joint type, in nats.
pub fn empirical_cond_entropy(y: &SequenceSample, x: &SequenceSample) -> Result<f64> {
    let c = joint_counts(x, y)?;
    Ok(cond_entropy_from_counts(&c, x.alphabet(), y.alphabet(), x.len()))
}

pub(crate) fn cond_entropy_from_counts(c: &[usize], xs: usize, ys: usize, n: usize) -> f64 {
    let n = n as f64;
    let joint: Vec<f64> = c.iter().map(|&k| k as f64 / n).collect();
    let marg: Vec<f64> = (0..xs)
        .map(|a| c[a * ys..(a + 1) * ys].iter().sum::<usize>() as f64 / n)
        .collect();
    (entropy_of(&joint) - entropy_of(&marg)).max(0.0)
}
