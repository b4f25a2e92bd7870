//! Single-letter exponents and privacy bounds for a fixed auxiliary channel.

use serde::Serialize;

use super::coupling::{CouplingProblem, CouplingSolution, EntropyConstraint, MarginalConstraint};
use super::pair::{HypothesisPair, PrivacyKind, TradeoffPoint};
use super::privacy::bayes_risk;
use crate::error::{Error, Result};
use crate::probcore::{
    conditional_entropy, conditional_mutual_information, mutual_information, Channel, JointPmf, Pmf,
};

/// Tolerance for comparing a rate against an information quantity.
pub const RATE_TOL: f64 = 1e-12;

/// Laws on `S, U, V, W` under both hypotheses with `W` drawn through the
/// channel from `U`.
pub struct Extended {
    pub p: JointPmf,
    pub q: JointPmf,
}

pub fn extend(pair: &HypothesisPair, w_channel: &Channel) -> Result<Extended> {
    Ok(Extended {
        p: pair.p().attach_channel("U", w_channel, "W")?,
        q: pair.q().attach_channel("U", w_channel, "W")?,
    })
}

/// `(P_UVW, Q_UV P_{W|U})` on axes `U, V, W`.
fn uvw_laws(pair: &HypothesisPair, w_channel: &Channel) -> Result<(JointPmf, JointPmf)> {
    let ext = extend(pair, w_channel)?;
    Ok((
        ext.p.marginal(&["U", "V", "W"])?,
        ext.q.marginal(&["U", "V", "W"])?,
    ))
}

pub fn e1_problem(pair: &HypothesisPair, w_channel: &Channel) -> Result<CouplingProblem> {
    let (p, r) = uvw_laws(pair, w_channel)?;
    Ok(CouplingProblem {
        marginals: vec![
            MarginalConstraint::from_law(&p, &["U", "W"])?,
            MarginalConstraint::from_law(&p, &["V", "W"])?,
        ],
        reference: r,
        entropy: None,
    })
}

pub fn e2_problem(pair: &HypothesisPair, w_channel: &Channel) -> Result<CouplingProblem> {
    let (p, r) = uvw_laws(pair, w_channel)?;
    let lower = conditional_entropy(&p, &["W"], &["V"])?;
    Ok(CouplingProblem {
        marginals: vec![
            MarginalConstraint::from_law(&p, &["U", "W"])?,
            MarginalConstraint::from_law(&p, &["V"])?,
        ],
        reference: r,
        entropy: Some(EntropyConstraint {
            target: "W".into(),
            given: "V".into(),
            lower,
        }),
    })
}

/// `E1` with its minimizing coupling.
pub fn exponent_e1_solution(pair: &HypothesisPair, w_channel: &Channel) -> Result<CouplingSolution> {
    e1_problem(pair, w_channel)?.solve()
}

pub fn exponent_e1(pair: &HypothesisPair, w_channel: &Channel) -> Result<f64> {
    Ok(exponent_e1_solution(pair, w_channel)?.value)
}

/// The divergence part of `E2`: its minimum over the set with marginals
/// `P_UW`, `P_V` and `H(W|V)` at least its null value.
pub fn exponent_e2_divergence(pair: &HypothesisPair, w_channel: &Channel) -> Result<CouplingSolution> {
    e2_problem(pair, w_channel)?.solve()
}

/// `E2` without the gate on `I(U;W) > R`: divergence + `R - I_P(U;W|V)`.
pub fn exponent_e2_ungated(rate: f64, pair: &HypothesisPair, w_channel: &Channel) -> Result<f64> {
    check_rate(rate)?;
    let (p, _) = uvw_laws(pair, w_channel)?;
    let i_cond = conditional_mutual_information(&p, &["U"], &["W"], &["V"])?;
    let d = exponent_e2_divergence(pair, w_channel)?.value;
    Ok(d + rate - i_cond)
}

pub fn exponent_e2(rate: f64, pair: &HypothesisPair, w_channel: &Channel) -> Result<f64> {
    check_rate(rate)?;
    let (p, _) = uvw_laws(pair, w_channel)?;
    if mutual_information(&p, &["U"], &["W"])? <= rate + RATE_TOL {
        return Ok(f64::INFINITY);
    }
    exponent_e2_ungated(rate, pair, w_channel)
}

pub fn kappa_star(rate: f64, pair: &HypothesisPair, w_channel: &Channel) -> Result<f64> {
    let e1 = exponent_e1(pair, w_channel)?;
    Ok(e1.min(exponent_e2(rate, pair, w_channel)?))
}

fn check_rate(rate: f64) -> Result<()> {
    if rate.is_nan() || rate < 0.0 {
        return Err(Error::Domain {
            value: rate,
            domain: "[0, inf)",
        });
    }
    Ok(())
}

/// Rate the auxiliary channel needs: `I_P(W;U|V)`.
pub fn rate_needed(pair: &HypothesisPair, w_channel: &Channel) -> Result<f64> {
    let ext = extend(pair, w_channel)?;
    conditional_mutual_information(&ext.p, &["W"], &["U"], &["V"])
}

/// Equivocation point for a fixed channel and rate.
pub fn theorem1_point(pair: &HypothesisPair, w_channel: &Channel, rate: f64) -> Result<TradeoffPoint> {
    check_rate(rate)?;
    let ext = extend(pair, w_channel)?;
    let needed = conditional_mutual_information(&ext.p, &["W"], &["U"], &["V"])?;
    let privacy0 = conditional_entropy(&ext.p, &["S"], &["W", "V"])?;
    let privacy1 = if pair.same_u_marginal() {
        conditional_entropy(&ext.q, &["S"], &["W", "V"])?
    } else {
        conditional_entropy(&ext.q, &["S"], &["V"])?
    };
    point(pair, w_channel, rate, needed, privacy0, privacy1, PrivacyKind::Equivocation)
}

/// Distortion point for a fixed channel and rate.
pub fn theorem2_point(pair: &HypothesisPair, w_channel: &Channel, rate: f64) -> Result<TradeoffPoint> {
    check_rate(rate)?;
    let d = pair.distortion_or_err()?;
    let ext = extend(pair, w_channel)?;
    let needed = conditional_mutual_information(&ext.p, &["W"], &["U"], &["V"])?;
    let privacy0 = bayes_risk(&ext.p, &["W", "V"], d)?;
    let privacy1 = if pair.same_u_marginal() {
        bayes_risk(&ext.q, &["W", "V"], d)?
    } else {
        bayes_risk(&ext.q, &["V"], d)?
    };
    point(pair, w_channel, rate, needed, privacy0, privacy1, PrivacyKind::Distortion)
}

fn point(
    pair: &HypothesisPair,
    w_channel: &Channel,
    rate: f64,
    needed: f64,
    privacy0: f64,
    privacy1: f64,
    privacy_kind: PrivacyKind,
) -> Result<TradeoffPoint> {
    let feasible = rate + RATE_TOL >= needed;
    let exponent = if feasible {
        kappa_star(rate, pair, w_channel)?
    } else {
        0.0
    };
    Ok(TradeoffPoint {
        rate,
        exponent,
        privacy0,
        privacy1,
        privacy_kind,
        feasible,
    })
}

/// Zero-rate exponent: min over couplings of `(P_U, P_V)` of `D(. || Q_UV)`.
pub fn zero_rate_solution(p_u: &Pmf, p_v: &Pmf, q_uv: &JointPmf) -> Result<CouplingSolution> {
    let q_uv = q_uv.permuted(&["U", "V"])?;
    let sizes = q_uv.sizes();
    if sizes != [p_u.support_size(), p_v.support_size()] {
        return Err(Error::ShapeMismatch(format!(
            "marginals of sizes ({}, {}) against a {:?} reference",
            p_u.support_size(),
            p_v.support_size(),
            sizes
        )));
    }
    CouplingProblem {
        reference: q_uv,
        marginals: vec![
            MarginalConstraint {
                axes: vec!["U".into()],
                target: JointPmf::from_pmf("U", p_u),
            },
            MarginalConstraint {
                axes: vec!["V".into()],
                target: JointPmf::from_pmf("V", p_v),
            },
        ],
        entropy: None,
    }
    .solve()
}

pub fn zero_rate_exponent(p_u: &Pmf, p_v: &Pmf, q_uv: &JointPmf) -> Result<f64> {
    Ok(zero_rate_solution(p_u, p_v, q_uv)?.value)
}

/// Zero-rate exponent of a hypothesis pair.
pub fn pair_zero_rate_exponent(pair: &HypothesisPair) -> Result<f64> {
    zero_rate_exponent(
        &pair.p_u(),
        &pair.p().marginal_pmf("V")?,
        &pair.q().marginal(&["U", "V"])?,
    )
}

/// Maximal privacy attainable at zero rate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroRatePrivacy {
    pub delta0_max: Option<f64>,
    pub delta1_max: Option<f64>,
    pub lambda0_max: f64,
    pub lambda1_max: f64,
}

pub fn zero_rate_privacy(pair: &HypothesisPair) -> Result<ZeroRatePrivacy> {
    let (delta0_max, delta1_max) = match pair.distortion() {
        Some(d) => (
            Some(bayes_risk(pair.p(), &["V"], d)?),
            Some(bayes_risk(pair.q(), &["V"], d)?),
        ),
        None => (None, None),
    };
    Ok(ZeroRatePrivacy {
        delta0_max,
        delta1_max,
        lambda0_max: conditional_entropy(pair.p(), &["S"], &["V"])?,
        lambda1_max: conditional_entropy(pair.q(), &["S"], &["V"])?,
    })
}

/// The zero-rate corner: exponent from the coupling problem, maximal privacy.
pub fn zero_rate_point(pair: &HypothesisPair, kind: PrivacyKind) -> Result<TradeoffPoint> {
    let exponent = pair_zero_rate_exponent(pair)?;
    let z = zero_rate_privacy(pair)?;
    let (privacy0, privacy1) = match kind {
        PrivacyKind::Equivocation => (z.lambda0_max, z.lambda1_max),
        PrivacyKind::Distortion => (
            z.delta0_max.ok_or_else(|| Error::Config("instance has no distortion table".into()))?,
            z.delta1_max.unwrap_or_default(),
        ),
    };
    Ok(TradeoffPoint {
        rate: 0.0,
        exponent,
        privacy0,
        privacy1,
        privacy_kind: kind,
        feasible: true,
    })
}
