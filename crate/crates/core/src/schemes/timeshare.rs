//! Lossless quantization of typical `u^n` and its time-shared variant,
//! which replaces the index by the error message with probability `eps`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::message::{DetectionScheme, Hypothesis, Message, MessageLaw};
use crate::error::{Error, Result};
use crate::probcore::{counts_typical, is_typical, JointPmf, Pmf, SequenceSample};

fn check_epsilon(eps: f64) -> Result<()> {
    if (0.0..=1.0).contains(&eps) {
        Ok(())
    } else {
        Err(Error::Domain {
            value: eps,
            domain: "[0, 1]",
        })
    }
}

/// Keeps `base` with probability `1 - eps`, else emits the error message.
/// One uniform draw is consumed either way.
pub fn timeshare_encode(base: Message, eps: f64, rng: &mut ChaCha8Rng) -> Result<Message> {
    check_epsilon(eps)?;
    let x: f64 = rng.gen();
    Ok(if x < eps { Message::Error } else { base })
}

/// Quantizer on `T[P_U]_delta` whose index is the base-`|U|` value of
/// `u^n`, with detector test `(u^n(M), v^n) in T[P_UV]_delta_prime`.
#[derive(Clone, Debug)]
pub struct TimeshareScheme {
    pub n: usize,
    pub delta: f64,
    pub delta_prime: f64,
    pub epsilon_star: f64,
    p_u: Pmf,
    p_uv: Pmf,
    v_size: usize,
}

impl TimeshareScheme {
    /// `p_uv` is the null law of `(U, V)`.
    pub fn new(p_uv: &JointPmf, n: usize, delta: f64, delta_prime: f64, epsilon_star: f64) -> Result<Self> {
        check_epsilon(epsilon_star)?;
        if n == 0 {
            return Err(Error::Config("blocklength must be at least 1".into()));
        }
        let p_uv = p_uv.permuted(&["U", "V"])?;
        Ok(Self {
            n,
            delta,
            delta_prime,
            epsilon_star,
            p_u: p_uv.marginal_pmf("U")?,
            v_size: p_uv.axis_size("V")?,
            p_uv: Pmf::new(p_uv.probs().to_vec())?,
        })
    }

    fn base(&self, u: &SequenceSample) -> Result<Message> {
        Ok(if is_typical(u, &self.p_u, self.delta)? {
            Message::index(u.index() as u64)
        } else {
            Message::Error
        })
    }
}

impl MessageLaw for TimeshareScheme {
    fn blocklength(&self) -> usize {
        self.n
    }

    fn message_law(&self, u: &SequenceSample) -> Result<Vec<(Message, f64)>> {
        let base = self.base(u)?;
        let eps = self.epsilon_star;
        Ok(match base {
            Message::Error => vec![(Message::Error, 1.0)],
            _ if eps == 0.0 => vec![(base, 1.0)],
            _ if eps == 1.0 => vec![(Message::Error, 1.0)],
            _ => vec![(Message::Error, eps), (base, 1.0 - eps)],
        })
    }
}

impl DetectionScheme for TimeshareScheme {
    fn encode(&self, u: &SequenceSample, rng: &mut ChaCha8Rng) -> Result<Message> {
        match self.base(u)? {
            Message::Error => Ok(Message::Error),
            base => timeshare_encode(base, self.epsilon_star, rng),
        }
    }

    fn decide(&self, m: &Message, v: &SequenceSample) -> Hypothesis {
        let Message::Payload { index, .. } = *m else {
            return 1;
        };
        let u_size = self.p_u.support_size();
        if (index as f64) >= (u_size as f64).powi(self.n as i32) || v.len() != self.n {
            return 1;
        }
        let u = SequenceSample::from_index(u_size, self.n, index as usize);
        let mut c = vec![0usize; u_size * self.v_size];
        for (&a, &b) in u.symbols().iter().zip(v.symbols()) {
            c[a * self.v_size + b] += 1;
        }
        if counts_typical(&c, self.n, &self.p_uv, self.delta_prime) {
            0
        } else {
            1
        }
    }
}
