//! Privacy at blocklength `n` for schemes given as a message law: exact
//! equivocation and causal-disclosure distortion by enumeration, plug-in
//! Monte Carlo estimates, and the time-sharing counterexample.

mod counterexample;
mod exact;
mod mc;
mod model;

pub use counterexample::{conditioned_tv, conditioned_tv_law, counterexample_curve, exact_type1_error, CounterexampleRecord};
pub use exact::{
    exact_causal_distortion, exact_causal_distortion_with_budget, exact_equivocation, exact_equivocation_with_budget,
    exact_privacy_report, PrivacyReport, DEFAULT_BUDGET,
};
pub use mc::{mc_privacy_estimate, PrivacyEstimate};
pub use model::{SymbolwiseModel, TableModel, ROW_TOL};
