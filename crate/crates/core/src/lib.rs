//! Rate, error-exponent and privacy trade-offs for distributed hypothesis
//! testing over finite alphabets.
//!
//! * [`probcore`]: probability and information calculus.
//! * [`regions`]: single-letter exponents, privacy bounds and frontiers.
//! * [`schemes`]: finite-blocklength encoders, decoders and trial runners.
//! * [`adversary`]: exact equivocation and causal-disclosure distortion.
//! * [`oracle`]: brute-force references for tests.

pub mod error;
pub mod probcore;
pub mod regions;
pub mod schemes;
pub mod adversary;
pub mod oracle;

pub use error::{Error, Result};
