//! Finite-blocklength encoders and detectors, and a seeded trial runner.

mod codebook;
mod likelihood;
mod message;
mod timeshare;
mod trials;
mod zero_rate;

pub use codebook::{Codebook, CodebookPlan, DEFAULT_CODEBOOK_CAP};
pub use likelihood::{
    detect, likelihood_encode, likelihood_probabilities, min_entropy_decode, Deltas, LikelihoodParams,
    LikelihoodScheme,
};
pub use message::{type_is_typical, type_rank, type_unrank, DetectionScheme, Hypothesis, Message, MessageLaw};
pub use timeshare::{timeshare_encode, TimeshareScheme};
pub use trials::{run_trials, sample_suv, trial_rng, wilson_interval, SchemeConfig, SchemeKind, TrialStats, Z95};
pub use zero_rate::{zero_rate_detect, zero_rate_encode, ConstantScheme, ZeroRateScheme};
