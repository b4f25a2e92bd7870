//! Finite-alphabet probability and information calculus.
//!
//! Everything is in nats except the binary helpers, which work in bits.

mod binary;
mod channel;
mod info;
mod joint;
mod pmf;
mod sequence;

pub use binary::{binary_entropy, inv_binary_entropy, star};
pub use channel::Channel;
pub use info::{
    conditional_entropy, conditional_mutual_information, entropy, entropy_continuity_bound,
    entropy_of, joint_entropy, kl_divergence, kl_divergence_joint, kl_of, mutual_information,
    total_variation, tv_of, Law,
};
pub use joint::{Axis, JointPmf};
pub use pmf::{Pmf, EQUALITY_TOL, MASS_TOL};
pub use sequence::{
    counts_typical, empirical_cond_entropy, is_typical, joint_counts, joint_type, SequenceSample,
};

pub(crate) use info::plogp;
pub(crate) use joint::{ravel, unravel};
pub(crate) use pmf::check_probs;
pub(crate) use sequence::{cond_entropy_from_counts, draw};

/// Compensated (Neumaier) summation.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub const LN_2: f64 = std::f64::consts::LN_2;

pub fn nats_to_bits(x: f64) -> f64 {
    x / LN_2
}

pub fn bits_to_nats(x: f64) -> f64 {
    x * LN_2
}
