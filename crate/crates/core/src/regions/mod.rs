//! Single-letter trade-off expressions and their optimization.

pub mod coupling;
mod examples;
mod exponents;
mod frontier;
mod pair;
mod privacy;
mod taci;

pub use coupling::{
    CouplingProblem, CouplingSolution, EntropyConstraint, MarginalConstraint, Solver, SolverConfig,
};
pub use examples::{
    example1_closed_form, example1_instance, example1_pair, example2_channel, example2_laws,
    example2_pair, Example1Point,
};
pub use exponents::{
    e1_problem, e2_problem, exponent_e1, exponent_e1_solution, exponent_e2,
    exponent_e2_divergence, exponent_e2_ungated, extend, kappa_star, pair_zero_rate_exponent,
    rate_needed, theorem1_point, theorem2_point, zero_rate_exponent, zero_rate_point,
    zero_rate_privacy, zero_rate_solution, Extended, ZeroRatePrivacy, RATE_TOL,
};
pub use frontier::{pareto_filter, taci_frontier, w_sizes, FrontierConfig, FrontierPoint};
pub use pair::{Distortion, HypothesisPair, InstanceFile, PrivacyKind, TradeoffPoint, SUV};
pub use privacy::{bayes_estimator, bayes_risk};
pub use taci::{taci_point, with_trivial_z, TaciInstance, TaciPoint, SUYZ};

pub(crate) use privacy::bayes_weights;
