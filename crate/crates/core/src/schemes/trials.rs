//! Seeded Monte Carlo estimates of the two error probabilities.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::likelihood::{LikelihoodParams, LikelihoodScheme};
use super::message::DetectionScheme;
use super::timeshare::TimeshareScheme;
use super::zero_rate::ZeroRateScheme;
use super::codebook::DEFAULT_CODEBOOK_CAP;
use crate::error::{Error, Result};
use crate::probcore::{draw, unravel, Channel, SequenceSample};
use crate::regions::HypothesisPair;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    // The interval reaches 0 (resp. 1) exactly when k = 0 (resp. k = n);
    // pin those ends rather than trust the rounding.
    let lo = if k == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if k == n { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub n: usize,
    pub trials: u64,
    pub type1_errors: u64,
    pub type2_errors: u64,
    pub alpha_hat: f64,
    pub beta_hat: f64,
    pub alpha_ci: (f64, f64),
    pub beta_ci: (f64, f64),
}

impl TrialStats {
    fn from_counts(n: usize, trials: u64, e1: u64, e2: u64) -> Self {
        Self {
            n,
            trials,
            type1_errors: e1,
            type2_errors: e2,
            alpha_hat: e1 as f64 / trials as f64,
            beta_hat: e2 as f64 / trials as f64,
            alpha_ci: wilson_interval(e1, trials, Z95),
            beta_ci: wilson_interval(e2, trials, Z95),
        }
    }
}

/// Draws `(s^n, u^n, v^n)` i.i.d. from the hypothesis law.
pub fn sample_suv(pair: &HypothesisPair, hypothesis: u8, n: usize, rng: &mut ChaCha8Rng) -> [SequenceSample; 3] {
    let law = pair.law(hypothesis);
    let sizes = law.sizes();
    let mut cols: [Vec<usize>; 3] = Default::default();
    let mut c = [0usize; 3];
    for _ in 0..n {
        unravel(draw(law.probs(), rng), &sizes, &mut c);
        for k in 0..3 {
            cols[k].push(c[k]);
        }
    }
    let [s, u, v] = cols;
    let mk = |a: usize, x: Vec<usize>| SequenceSample::new(a, x).expect("drawn symbols are in range");
    [mk(sizes[0], s), mk(sizes[1], u), mk(sizes[2], v)]
}

/// Generator for trial `t` under hypothesis `h`.
pub fn trial_rng(seed: u64, hypothesis: u8, t: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((hypothesis as u64) << 62) | t);
    rng
}

/// Runs `trials` independent encode/decide rounds under each hypothesis.
pub fn run_trials(scheme: &dyn DetectionScheme, pair: &HypothesisPair, trials: u64, seed: u64) -> Result<TrialStats> {
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let n = scheme.blocklength();
    let errors = |h: u8| -> Result<u64> {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(seed, h, t);
                let [_, u, v] = sample_suv(pair, h, n, &mut rng);
                let m = scheme.encode(&u, &mut rng)?;
                Ok((scheme.decide(&m, &v) != h) as u64)
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))
    };
    let e1 = errors(0)?;
    let e2 = errors(1)?;
    Ok(TrialStats::from_counts(n, trials, e1, e2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    Likelihood,
    ZeroRate,
    Timeshare,
}

fn default_delta() -> f64 {
    0.05
}

fn default_eta() -> f64 {
    0.05
}

fn default_trials() -> u64 {
    1000
}

/// JSON scheme configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    pub scheme: SchemeKind,
    pub n: usize,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_eta")]
    pub eta: f64,
    #[serde(default)]
    pub rate_nats: f64,
    #[serde(default)]
    pub epsilon_star: f64,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    /// Auxiliary channel for the likelihood scheme; identity when absent.
    #[serde(default)]
    pub w_channel: Option<Channel>,
    /// Detector slack for the time-shared scheme; `2 delta` when absent.
    #[serde(default)]
    pub delta_prime: Option<f64>,
}

impl SchemeConfig {
    pub fn build(&self, pair: &HypothesisPair) -> Result<Box<dyn DetectionScheme>> {
        if self.n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        if !(self.delta >= 0.0) {
            return Err(Error::Domain {
                value: self.delta,
                domain: "[0, inf)",
            });
        }
        let p_uv = pair.p().marginal(&["U", "V"])?;
        Ok(match self.scheme {
            SchemeKind::ZeroRate => Box::new(ZeroRateScheme {
                n: self.n,
                p_u: p_uv.marginal_pmf("U")?,
                p_v: p_uv.marginal_pmf("V")?,
                delta: self.delta,
            }),
            SchemeKind::Timeshare => Box::new(TimeshareScheme::new(
                &p_uv,
                self.n,
                self.delta,
                self.delta_prime.unwrap_or(2.0 * self.delta),
                self.epsilon_star,
            )?),
            SchemeKind::Likelihood => {
                let (_, u, _) = pair.sizes();
                let ch = self.w_channel.clone().unwrap_or_else(|| Channel::identity(u));
                if ch.input_size() != u {
                    return Err(Error::ShapeMismatch(format!(
                        "w_channel has {} rows but |U| = {u}",
                        ch.input_size()
                    )));
                }
                let params = LikelihoodParams {
                    n: self.n,
                    delta: self.delta,
                    eta: self.eta,
                    rate: self.rate_nats,
                    seed: self.seed,
                    cap: DEFAULT_CODEBOOK_CAP,
                };
                Box::new(LikelihoodScheme::new(&p_uv, &ch, &params)?)
            }
        })
    }

    /// Builds the scheme and runs the configured number of trials.
    pub fn run(&self, pair: &HypothesisPair) -> Result<TrialStats> {
        let scheme = self.build(pair)?;
        run_trials(scheme.as_ref(), pair, self.trials, self.seed)
    }
}
