//! Likelihood encoder with optional random binning, minimum empirical
//! entropy decoding and a joint-typicality detector.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::codebook::{Codebook, CodebookPlan, DEFAULT_CODEBOOK_CAP};
use super::message::{type_is_typical, type_rank, DetectionScheme, Hypothesis, Message, MessageLaw};
use crate::error::{Error, Result};
use crate::probcore::{
    cond_entropy_from_counts, counts_typical, is_typical, mutual_information, Channel, JointPmf,
    Pmf, SequenceSample,
};

/// Typicality slacks derived from one `delta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Deltas {
    /// Encoder typicality of `u`.
    pub delta_prime: f64,
    /// Joint-type gate at the detector.
    pub delta: f64,
    /// Decoder typicality of candidate codewords.
    pub delta_hat: f64,
    /// Final `(w, v)` test.
    pub delta_tilde: f64,
}

impl Deltas {
    pub fn from_delta(delta: f64, u_size: usize) -> Self {
        Self {
            delta_prime: delta / 2.0,
            delta,
            delta_hat: u_size as f64 * delta,
            delta_tilde: 2.0 * delta,
        }
    }
}

/// Index `j` selected by the likelihood encoder, with probability
/// proportional to `prod_i P_{U|W}(u_i | w_i(j))`.
fn likelihood_weights(cb: &Codebook, u: &SequenceSample, p_u_given_w: &Channel) -> Result<Vec<f64>> {
    if u.len() != cb.n() {
        return Err(Error::LengthMismatch(u.len(), cb.n()));
    }
    let logs: Vec<f64> = (0..cb.len())
        .map(|j| {
            cb.word(j)
                .iter()
                .zip(u.symbols())
                .map(|(&w, &x)| p_u_given_w.get(w as usize, x).ln())
                .sum()
        })
        .collect();
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Err(Error::EncoderDegenerate);
    }
    let w: Vec<f64> = logs.iter().map(|&l| (l - max).exp()).collect();
    let t: f64 = w.iter().sum();
    Ok(w.into_iter().map(|x| x / t).collect())
}

/// Selection probabilities of the likelihood encoder for `u` (no
/// typicality gate).
pub fn likelihood_probabilities(cb: &Codebook, u: &SequenceSample, p_u_given_w: &Channel) -> Result<Vec<f64>> {
    likelihood_weights(cb, u, p_u_given_w)
}

fn joint_type_index(u: &SequenceSample, w: &[u8], w_size: usize) -> Result<u128> {
    let mut c = vec![0usize; u.alphabet() * w_size];
    for (&a, &b) in u.symbols().iter().zip(w) {
        c[a * w_size + b as usize] += 1;
    }
    type_rank(&c)
}

fn payload(cb: &Codebook, u: &SequenceSample, j: usize) -> Result<Message> {
    Ok(Message::Payload {
        type_index: joint_type_index(u, cb.word(j), cb.w_size())?,
        index: cb.bin(j),
    })
}

/// Error message for atypical `u`, otherwise `(t, bin(j))` with `j` drawn
/// by likelihood.
pub fn likelihood_encode(
    cb: &Codebook,
    u: &SequenceSample,
    p_u: &Pmf,
    p_u_given_w: &Channel,
    delta_prime: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Message> {
    if !is_typical(u, p_u, delta_prime)? {
        return Ok(Message::Error);
    }
    let probs = likelihood_weights(cb, u, p_u_given_w)?;
    let x: f64 = rng.gen();
    let mut acc = 0.0;
    let mut pick = probs.len() - 1;
    for (j, &p) in probs.iter().enumerate() {
        acc += p;
        if x < acc && p > 0.0 {
            pick = j;
            break;
        }
    }
    while probs[pick] == 0.0 {
        pick -= 1;
    }
    payload(cb, u, pick)
}

/// Decoded codeword index, or `None` when no candidate survives.
pub fn min_entropy_decode(cb: &Codebook, m: &Message, v: &SequenceSample, p_w: &Pmf, delta_hat: f64) -> Option<usize> {
    let Message::Payload { index, .. } = *m else {
        return None;
    };
    if cb.identity_bins() {
        return ((index as usize) < cb.len()).then_some(index as usize);
    }
    let mut best: Option<(usize, f64)> = None;
    for l in cb.members(index) {
        let w = cb.word(l);
        let mut counts = vec![0usize; cb.w_size()];
        w.iter().for_each(|&s| counts[s as usize] += 1);
        if !counts_typical(&counts, cb.n(), p_w, delta_hat) {
            continue;
        }
        let mut joint = vec![0usize; v.alphabet() * cb.w_size()];
        for (&b, &a) in v.symbols().iter().zip(w) {
            joint[b * cb.w_size() + a as usize] += 1;
        }
        let h = cond_entropy_from_counts(&joint, v.alphabet(), cb.w_size(), cb.n());
        if best.map(|(_, bh)| h < bh).unwrap_or(true) {
            best = Some((l, h));
        }
    }
    best.map(|(l, _)| l)
}

/// Null is accepted iff the message is a payload, its type passes the
/// gate, decoding succeeded and `(w_hat, v)` is jointly typical.
pub fn detect(
    w_hat: Option<&SequenceSample>,
    v: &SequenceSample,
    m: &Message,
    t_check: bool,
    p_wv: &Pmf,
    delta_tilde: f64,
) -> Hypothesis {
    if m.is_error() || !t_check {
        return 1;
    }
    let Some(w) = w_hat else {
        return 1;
    };
    if w.len() != v.len() {
        return 1;
    }
    let mut c = vec![0usize; w.alphabet() * v.alphabet()];
    for (&a, &b) in w.symbols().iter().zip(v.symbols()) {
        c[a * v.alphabet() + b] += 1;
    }
    if counts_typical(&c, w.len(), p_wv, delta_tilde) {
        0
    } else {
        1
    }
}

/// The full scheme for one auxiliary channel.
pub struct LikelihoodScheme {
    pub codebook: Codebook,
    pub deltas: Deltas,
    p_u: Pmf,
    p_w: Pmf,
    p_uw: Pmf,
    p_wv: Pmf,
    u_given_w: Channel,
    plan: CodebookPlan,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LikelihoodParams {
    pub n: usize,
    pub delta: f64,
    pub eta: f64,
    pub rate: f64,
    pub seed: u64,
    pub cap: usize,
}

impl Default for LikelihoodParams {
    fn default() -> Self {
        Self {
            n: 4,
            delta: 0.05,
            eta: 0.05,
            rate: 0.0,
            seed: 0,
            cap: DEFAULT_CODEBOOK_CAP,
        }
    }
}

impl LikelihoodScheme {
    /// `p_uv` is the null law of `(U, V)`.
    pub fn new(p_uv: &JointPmf, w_channel: &Channel, params: &LikelihoodParams) -> Result<Self> {
        let p_uv = p_uv.permuted(&["U", "V"])?;
        let j = p_uv.attach_channel("U", w_channel, "W")?;
        let i_uw = mutual_information(&j, &["U"], &["W"])?;
        let p_u = j.marginal_pmf("U")?;
        let p_w = j.marginal_pmf("W")?;
        let as_pmf = |x: JointPmf| Pmf::normalized(x.probs().to_vec());
        let p_uw = as_pmf(j.marginal(&["U", "W"])?)?;
        let p_wv = as_pmf(j.marginal(&["W", "V"])?)?;
        let u_given_w = j.conditional_channel("U", &["W"])?;
        let plan = CodebookPlan::new(i_uw, p_u.support_size(), p_w.support_size(), params.n, params.eta, params.rate)?;
        let codebook = Codebook::build(&p_w, params.n, &plan, params.eta, params.seed, params.cap)?;
        Ok(Self {
            codebook,
            deltas: Deltas::from_delta(params.delta, p_u.support_size()),
            p_u,
            p_w,
            p_uw,
            p_wv,
            u_given_w,
            plan,
        })
    }

    pub fn plan(&self) -> &CodebookPlan {
        &self.plan
    }

    pub fn p_w(&self) -> &Pmf {
        &self.p_w
    }

    pub fn u_given_w(&self) -> &Channel {
        &self.u_given_w
    }
}

impl MessageLaw for LikelihoodScheme {
    fn blocklength(&self) -> usize {
        self.codebook.n()
    }

    fn message_law(&self, u: &SequenceSample) -> Result<Vec<(Message, f64)>> {
        if !is_typical(u, &self.p_u, self.deltas.delta_prime)? {
            return Ok(vec![(Message::Error, 1.0)]);
        }
        let probs = likelihood_weights(&self.codebook, u, &self.u_given_w)?;
        let mut out: Vec<(Message, f64)> = Vec::new();
        for (j, &p) in probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            out.push((payload(&self.codebook, u, j)?, p));
        }
        out.sort_by_key(|a| a.0);
        let mut merged: Vec<(Message, f64)> = Vec::with_capacity(out.len());
        for (m, p) in out {
            match merged.last_mut() {
                Some((lm, lp)) if *lm == m => *lp += p,
                _ => merged.push((m, p)),
            }
        }
        Ok(merged)
    }
}

impl DetectionScheme for LikelihoodScheme {
    fn encode(&self, u: &SequenceSample, rng: &mut ChaCha8Rng) -> Result<Message> {
        likelihood_encode(&self.codebook, u, &self.p_u, &self.u_given_w, self.deltas.delta_prime, rng)
    }

    fn decide(&self, m: &Message, v: &SequenceSample) -> Hypothesis {
        let Message::Payload { type_index, .. } = *m else {
            return 1;
        };
        let n = self.codebook.n();
        let t_ok = type_is_typical(type_index, n, &self.p_uw, self.deltas.delta);
        let j = min_entropy_decode(&self.codebook, m, v, &self.p_w, self.deltas.delta_hat);
        let w_hat = j.map(|j| self.codebook.codeword(j));
        detect(w_hat.as_ref(), v, m, t_ok, &self.p_wv, self.deltas.delta_tilde)
    }
}
