use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::probcore::{Pmf, SequenceSample};

/// What the observer sends. `Error` is the reserved message 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Message {
    Error,
    Payload { type_index: u128, index: u64 },
}

impl Message {
    pub fn is_error(&self) -> bool {
        matches!(self, Message::Error)
    }

    /// Payload carrying only an index (type index 0).
    pub fn index(index: u64) -> Self {
        Message::Payload {
            type_index: 0,
            index,
        }
    }
}

/// Decision of the detector: 0 accepts the null.
pub type Hypothesis = u8;

/// A conditional law of the message given the observer's sequence.
pub trait MessageLaw: Sync {
    fn blocklength(&self) -> usize;

    /// Every message with positive probability given `u`, with its probability.
    fn message_law(&self, u: &SequenceSample) -> Result<Vec<(Message, f64)>>;
}

/// An encoder and a detector sharing a message law.
pub trait DetectionScheme: MessageLaw {
    fn encode(&self, u: &SequenceSample, rng: &mut ChaCha8Rng) -> Result<Message>;

    fn decide(&self, m: &Message, v: &SequenceSample) -> Hypothesis;
}

/// Number of compositions of `total` into `parts` nonnegative parts.
fn compositions(total: u64, parts: u64) -> Result<u128> {
    if parts == 0 {
        return Ok((total == 0) as u128);
    }
    // C(total + parts - 1, parts - 1)
    let k = parts - 1;
    let mut c: u128 = 1;
    for i in 0..k {
        c = c
            .checked_mul((total + k - i) as u128)
            .ok_or_else(|| Error::Unsupported("type index overflows 128 bits".into()))?
            / (i as u128 + 1);
    }
    Ok(c)
}

/// Lexicographic rank of a count vector among all vectors of the same
/// length and total.
pub fn type_rank(counts: &[usize]) -> Result<u128> {
    let total: u64 = counts.iter().map(|&c| c as u64).sum();
    let k = counts.len() as u64;
    let mut rank: u128 = 0;
    let mut rem = total;
    for (i, &c) in counts.iter().enumerate().take(counts.len().saturating_sub(1)) {
        let after = k - i as u64 - 1;
        for v in 0..c as u64 {
            rank += compositions(rem - v, after)?;
        }
        rem -= c as u64;
    }
    Ok(rank)
}

/// Inverse of [`type_rank`].
pub fn type_unrank(mut rank: u128, total: usize, cells: usize) -> Result<Vec<usize>> {
    if rank >= compositions(total as u64, cells as u64)? {
        return Err(Error::Config(format!("type index {rank} out of range")));
    }
    let mut counts = vec![0; cells];
    let mut rem = total as u64;
    for (i, slot) in counts.iter_mut().enumerate() {
        let after = (cells - i - 1) as u64;
        if after == 0 {
            *slot = rem as usize;
            break;
        }
        let mut v = 0u64;
        loop {
            let block = compositions(rem - v, after)?;
            if rank < block {
                break;
            }
            rank -= block;
            v += 1;
        }
        *slot = v as usize;
        rem -= v;
    }
    Ok(counts)
}

/// Whether the joint type with index `t` on `|U| x |W|` cells lies within
/// `delta` of `p_uw` (row-major) in every cell.
pub fn type_is_typical(t: u128, n: usize, p_uw: &Pmf, delta: f64) -> bool {
    match type_unrank(t, n, p_uw.support_size()) {
        Ok(c) => crate::probcore::counts_typical(&c, n, p_uw, delta),
        Err(_) => false,
    }
}
