use clap::ValueEnum;
use htpl::adversary::{
    counterexample_curve, exact_equivocation, exact_privacy_report, mc_privacy_estimate, SymbolwiseModel,
};
use htpl::oracle::{exact_error_probabilities, OracleBudget};
use htpl::probcore::{nats_to_bits, SequenceSample};
use htpl::regions::{
    example1_closed_form, example2_channel, example2_pair, pair_zero_rate_exponent, taci_frontier, theorem1_point,
    with_trivial_z, zero_rate_privacy, FrontierConfig, HypothesisPair, TaciInstance,
};
use htpl::schemes::{
    run_trials, wilson_interval, DetectionScheme, Message, SchemeConfig, SchemeKind, ZeroRateScheme, Z95,
};
use htpl::Error;

use crate::error::{CliError, CliResult};
use crate::output::{num, Table};
use crate::params::Params;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    Frontier,
    Example1,
    Example2,
    ZeroRate,
    Simulate,
    Counterexample,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Frontier => "frontier",
            Experiment::Example1 => "example1",
            Experiment::Example2 => "example2",
            Experiment::ZeroRate => "zero-rate",
            Experiment::Simulate => "simulate",
            Experiment::Counterexample => "counterexample",
        }
    }

    /// Built-in experiments carry their own laws.
    pub fn needs_instance(self) -> bool {
        !matches!(self, Experiment::Example1 | Experiment::Example2)
    }

    pub fn run(self, pair: Option<&HypothesisPair>, params: &Params, seed: u64) -> CliResult<Table> {
        let pair = || pair.expect("instance presence checked by the caller");
        match self {
            Experiment::Frontier => frontier(pair(), params, seed),
            Experiment::Example1 => example1(params),
            Experiment::Example2 => example2(params),
            Experiment::ZeroRate => zero_rate(pair(), params),
            Experiment::Simulate => simulate(pair(), params, seed),
            Experiment::Counterexample => counterexample(pair(), params),
        }
    }
}

fn bits(x: f64) -> String {
    num(nats_to_bits(x))
}

/// Reads the pair as a testing-against-conditional-independence instance
/// with `Y = V` and a trivial `Z`. Requires `Q_UV = P_U P_V`.
pub fn taci_from_pair(pair: &HypothesisPair) -> CliResult<TaciInstance> {
    let (_, u, v) = pair.sizes();
    let p_uv = pair.p().marginal(&["U", "V"])?;
    let q_uv = pair.q().marginal(&["U", "V"])?;
    let (p_u, p_v) = (p_uv.marginal_pmf("U")?, p_uv.marginal_pmf("V")?);
    let mut gap: f64 = 0.0;
    for a in 0..u {
        for b in 0..v {
            gap = gap.max((q_uv.get(&[a, b]) - p_u.get(a) * p_v.get(b)).abs());
        }
    }
    if gap > 1e-9 {
        return Err(Error::Assumption(format!(
            "frontier needs Q_UV = P_U x P_V, largest cell gap is {gap:e}"
        ))
        .into());
    }
    let p_suyz = with_trivial_z(&pair.p().clone().renamed("V", "Y")?)?;
    let q_s = pair.q().conditional_channel("S", &["U", "V"])?;
    Ok(TaciInstance::new(p_suyz, q_s)?)
}

pub const FRONTIER_COLUMNS: &[&str] =
    &["channel_id", "w_size", "rate_bits", "exponent_bits", "privacy0_bits", "privacy1_bits"];

fn frontier(pair: &HypothesisPair, params: &Params, seed: u64) -> CliResult<Table> {
    params.allow("frontier", &["seeds_per_size", "max_w", "only_w", "step", "shrink", "step_floor"])?;
    let d = FrontierConfig::default();
    let cfg = FrontierConfig {
        seeds_per_size: params.get_or("seeds_per_size", d.seeds_per_size)?,
        step: params.get_or("step", d.step)?,
        shrink: params.get_or("shrink", d.shrink)?,
        step_floor: params.get_or("step_floor", d.step_floor)?,
        max_w: params.get("max_w")?,
        only_w: params.get("only_w")?,
        seed,
        ..d
    };
    let inst = taci_from_pair(pair)?;
    let points = taci_frontier(&inst, &cfg)?;
    let mut table = Table::new("frontier", FRONTIER_COLUMNS);
    let mut channels = Vec::with_capacity(points.len());
    for (id, f) in points.iter().enumerate() {
        table.push(vec![
            id.to_string(),
            f.channel.output_size().to_string(),
            bits(f.point.rate),
            bits(f.point.exponent),
            bits(f.point.privacy0),
            bits(f.point.privacy1),
        ]);
        let rows: Vec<&[f64]> = f.channel.rows().iter().map(|r| r.probs()).collect();
        channels.push(serde_json::json!({ "channel_id": id, "rows": rows }));
    }
    table.sidecar = Some(serde_json::json!({ "experiment": "frontier", "seed": seed, "channels": channels }));
    Ok(table)
}

pub const EXAMPLE1_P: [f64; 3] = [0.15, 0.25, 0.35];
pub const EXAMPLE1_Q: [f64; 2] = [0.0, 0.1];

fn example1(params: &Params) -> CliResult<Table> {
    params.allow("example1", &[])?;
    let mut table = Table::new("example1", &["p", "q", "r", "rate_bits", "kappa_bits", "lambda0_bits"]);
    for p in EXAMPLE1_P {
        for q in EXAMPLE1_Q {
            for k in 0..=50u32 {
                let r = f64::from(k) / 100.0;
                let c = example1_closed_form(p, q, r)?;
                table.push(vec![
                    num(p),
                    num(q),
                    num(r),
                    num(c.rate_bits),
                    num(c.kappa_bits),
                    num(c.lambda0_bits),
                ]);
            }
        }
    }
    Ok(table)
}

fn example2(params: &Params) -> CliResult<Table> {
    params.allow("example2", &["n_max"])?;
    let n_max: usize = params.get_or("n_max", 4)?;
    if n_max == 0 {
        return Err(CliError::Usage("n_max must be at least 1".into()));
    }
    let pair = example2_pair()?;
    let ch = example2_channel();
    let rate = (ch.output_size() as f64).ln();
    let t = theorem1_point(&pair, &ch, rate)?;
    let mut table = Table::new(
        "example2",
        &["kind", "n", "rate_bits", "kappa_bits", "lambda0_bits", "lambda1_bits", "matches_single_letter"],
    );
    table.push(vec![
        "single_letter".into(),
        "1".into(),
        bits(t.rate),
        bits(t.exponent),
        bits(t.privacy0),
        bits(t.privacy1),
        String::new(),
    ]);
    let map: Vec<usize> = (0..ch.input_size())
        .map(|u| (0..ch.output_size()).find(|&w| ch.get(u, w) == 1.0).expect("deterministic channel"))
        .collect();
    for n in 1..=n_max {
        let model = SymbolwiseModel::new(n, map.clone(), ch.output_size())?;
        let e0 = exact_equivocation(&model, &pair, 0)? / n as f64;
        let e1 = exact_equivocation(&model, &pair, 1)? / n as f64;
        let ok = (e0 - t.privacy0).abs() <= 1e-10 && (e1 - t.privacy1).abs() <= 1e-10;
        table.push(vec![
            "exact".into(),
            n.to_string(),
            bits(rate),
            String::new(),
            bits(e0),
            bits(e1),
            ok.to_string(),
        ]);
    }
    Ok(table)
}

fn zero_rate(pair: &HypothesisPair, params: &Params) -> CliResult<Table> {
    params.allow("zero-rate", &["n_list", "delta"])?;
    let n_list: Vec<usize> = params.list_or("n_list", &[2, 4, 6])?;
    let delta: f64 = params.get_or("delta", 0.1)?;
    let e0 = pair_zero_rate_exponent(pair)?;
    let z = zero_rate_privacy(pair)?;
    let mut table = Table::new(
        "zero-rate",
        &[
            "n",
            "delta",
            "alpha",
            "beta",
            "neg_log_beta_per_letter_bits",
            "zero_rate_exponent_bits",
            "equivocation0_bits_per_letter",
            "equivocation1_bits_per_letter",
            "lambda0_max_bits",
            "lambda1_max_bits",
        ],
    );
    for n in n_list {
        let scheme = ZeroRateScheme {
            n,
            p_u: pair.p_u(),
            p_v: pair.p().marginal_pmf("V")?,
            delta,
        };
        let accept = |m: &Message, v: &SequenceSample| scheme.decide(m, v) == 0;
        let (alpha, beta) = exact_error_probabilities(&scheme, &accept, pair, &OracleBudget::default())?;
        let report = exact_privacy_report(&scheme, pair)?;
        table.push(vec![
            n.to_string(),
            num(delta),
            num(alpha),
            num(beta),
            bits(-beta.ln() / n as f64),
            bits(e0),
            bits(report.equivocation_per_letter_h0),
            bits(report.equivocation_per_letter_h1),
            bits(z.lambda0_max),
            bits(z.lambda1_max),
        ]);
    }
    Ok(table)
}

fn scheme_kind(name: &str) -> CliResult<SchemeKind> {
    match name {
        "likelihood" => Ok(SchemeKind::Likelihood),
        "zero_rate" => Ok(SchemeKind::ZeroRate),
        "timeshare" => Ok(SchemeKind::Timeshare),
        other => Err(CliError::Usage(format!(
            "unknown scheme `{other}`; expected likelihood, zero_rate or timeshare"
        ))),
    }
}

fn simulate(pair: &HypothesisPair, params: &Params, seed: u64) -> CliResult<Table> {
    params.allow(
        "simulate",
        &["scheme", "n_list", "delta", "eta", "rate_bits", "epsilon_star", "delta_prime", "trials"],
    )?;
    let kind = scheme_kind(&params.get_or("scheme", "zero_rate".to_string())?)?;
    let n_list: Vec<usize> = params.list_or("n_list", &[4])?;
    let base = SchemeConfig {
        scheme: kind,
        n: 1,
        delta: params.get_or("delta", 0.05)?,
        eta: params.get_or("eta", 0.05)?,
        rate_nats: params.get_or("rate_bits", 0.0)? * std::f64::consts::LN_2,
        epsilon_star: params.get_or("epsilon_star", 0.0)?,
        trials: params.get_or("trials", 1000)?,
        seed,
        w_channel: None,
        delta_prime: params.get("delta_prime")?,
    };
    let mut table = Table::new(
        "simulate",
        &[
            "scheme",
            "n",
            "hypothesis",
            "trials",
            "errors",
            "error_rate",
            "wilson_lo",
            "wilson_hi",
            "equivocation_bits_per_letter",
            "distortion_per_letter",
            "privacy_source",
        ],
    );
    let scheme_name = params.get_or("scheme", "zero_rate".to_string())?;
    for n in n_list {
        let cfg = SchemeConfig { n, ..base.clone() };
        let scheme = cfg.build(pair)?;
        let stats = run_trials(scheme.as_ref(), pair, cfg.trials, cfg.seed)?;
        // Exact privacy when enumerable, a seeded estimate otherwise.
        let privacy: [(Option<f64>, Option<f64>); 2];
        let source;
        match exact_privacy_report(scheme.as_ref(), pair) {
            Ok(r) => {
                privacy = [
                    (Some(r.equivocation_per_letter_h0), r.causal_distortion_per_letter_h0),
                    (Some(r.equivocation_per_letter_h1), r.causal_distortion_per_letter_h1),
                ];
                source = "exact";
            }
            Err(Error::BudgetExceeded { .. }) => {
                let est = |h| mc_privacy_estimate(scheme.as_ref(), pair, h, cfg.trials, cfg.seed);
                match (est(0), est(1)) {
                    (Ok(a), Ok(b)) => {
                        privacy = [
                            (Some(a.equivocation_per_letter), a.causal_distortion_per_letter),
                            (Some(b.equivocation_per_letter), b.causal_distortion_per_letter),
                        ];
                        source = "estimate";
                    }
                    (Err(Error::BudgetExceeded { .. }), _) | (_, Err(Error::BudgetExceeded { .. })) => {
                        privacy = [(None, None); 2];
                        source = "skipped";
                    }
                    (Err(e), _) | (_, Err(e)) => return Err(e.into()),
                }
            }
            Err(e) => return Err(e.into()),
        }
        for h in 0..2u8 {
            let errors = if h == 0 { stats.type1_errors } else { stats.type2_errors };
            let (lo, hi) = wilson_interval(errors, stats.trials, Z95);
            let (eq, dist) = privacy[h as usize];
            table.push(vec![
                scheme_name.clone(),
                n.to_string(),
                h.to_string(),
                stats.trials.to_string(),
                errors.to_string(),
                num(errors as f64 / stats.trials as f64),
                num(lo),
                num(hi),
                eq.map(bits).unwrap_or_default(),
                dist.map(num).unwrap_or_default(),
                source.into(),
            ]);
        }
    }
    Ok(table)
}

fn counterexample(pair: &HypothesisPair, params: &Params) -> CliResult<Table> {
    params.allow("counterexample", &["epsilon_star", "n_list", "delta", "delta_prime"])?;
    let eps: f64 = params.get_or("epsilon_star", 0.25)?;
    let n_list: Vec<usize> = params.list_or("n_list", &[2, 4, 6])?;
    let delta: f64 = params.get_or("delta", 0.2)?;
    let delta_prime: f64 = params.get_or("delta_prime", delta)?;
    let records = counterexample_curve(pair, eps, &n_list, delta, delta_prime)?;
    let mut table = Table::new(
        "counterexample",
        &[
            "n",
            "epsilon_star",
            "alpha_exact",
            "equivocation_bits_per_letter",
            "weak_converse_bits",
            "zero_rate_equivocation_bits",
        ],
    );
    for r in records {
        table.push(vec![
            r.n.to_string(),
            num(r.epsilon_star),
            num(r.alpha_exact),
            bits(r.equivocation_per_letter),
            bits(r.weak_converse),
            bits(r.zero_rate_equivocation),
        ]);
    }
    Ok(table)
}
