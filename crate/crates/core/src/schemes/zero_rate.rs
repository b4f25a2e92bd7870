//! One-bit typicality scheme for the zero-rate regime, and the two
//! constant detectors.

use rand_chacha::ChaCha8Rng;

use super::message::{DetectionScheme, Hypothesis, Message, MessageLaw};
use crate::error::Result;
use crate::probcore::{is_typical, Pmf, SequenceSample};

/// `M = 1(u typical)`.
pub fn zero_rate_encode(u: &SequenceSample, p_u: &Pmf, delta: f64) -> Result<u8> {
    Ok(is_typical(u, p_u, delta)? as u8)
}

/// Null iff `M = 1` and `v` is typical.
pub fn zero_rate_detect(bit: u8, v: &SequenceSample, p_v: &Pmf, delta: f64) -> Hypothesis {
    if bit == 1 && is_typical(v, p_v, delta).unwrap_or(false) {
        0
    } else {
        1
    }
}

fn bit_message(bit: u8) -> Message {
    if bit == 1 {
        Message::index(1)
    } else {
        Message::Error
    }
}

#[derive(Clone, Debug)]
pub struct ZeroRateScheme {
    pub n: usize,
    pub p_u: Pmf,
    pub p_v: Pmf,
    pub delta: f64,
}

impl MessageLaw for ZeroRateScheme {
    fn blocklength(&self) -> usize {
        self.n
    }

    fn message_law(&self, u: &SequenceSample) -> Result<Vec<(Message, f64)>> {
        Ok(vec![(bit_message(zero_rate_encode(u, &self.p_u, self.delta)?), 1.0)])
    }
}

impl DetectionScheme for ZeroRateScheme {
    fn encode(&self, u: &SequenceSample, _rng: &mut ChaCha8Rng) -> Result<Message> {
        Ok(bit_message(zero_rate_encode(u, &self.p_u, self.delta)?))
    }

    fn decide(&self, m: &Message, v: &SequenceSample) -> Hypothesis {
        let bit = (*m == Message::index(1)) as u8;
        zero_rate_detect(bit, v, &self.p_v, self.delta)
    }
}

/// Sends nothing and always returns the same decision.
#[derive(Clone, Copy, Debug)]
pub struct ConstantScheme {
    pub n: usize,
    pub decision: Hypothesis,
}

impl ConstantScheme {
    pub fn always_accept(n: usize) -> Self {
        Self { n, decision: 0 }
    }

    pub fn always_reject(n: usize) -> Self {
        Self { n, decision: 1 }
    }
}

impl MessageLaw for ConstantScheme {
    fn blocklength(&self) -> usize {
        self.n
    }

    fn message_law(&self, _u: &SequenceSample) -> Result<Vec<(Message, f64)>> {
        Ok(vec![(Message::index(0), 1.0)])
    }
}

impl DetectionScheme for ConstantScheme {
    fn encode(&self, _u: &SequenceSample, _rng: &mut ChaCha8Rng) -> Result<Message> {
        Ok(Message::index(0))
    }

    fn decide(&self, _m: &Message, _v: &SequenceSample) -> Hypothesis {
        self.decision
    }
}
