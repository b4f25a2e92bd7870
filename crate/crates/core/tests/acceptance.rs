//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use htpl::adversary::*;
use htpl::oracle::*;
use htpl::probcore::*;
use htpl::regions::*;
use htpl::schemes::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = (bool, String);

fn law_suv(s: usize, u: usize, v: usize, probs: Vec<f64>) -> JointPmf {
    JointPmf::new(vec![Axis::new("S", s), Axis::new("U", u), Axis::new("V", v)], probs).unwrap()
}

/// Binary `S = U xor Bern(a)`, `V = U xor Bern(b)`, `P(U = 1) = pu`.
fn bsc_law(pu: f64, a: f64, b: f64) -> JointPmf {
    let mut probs = Vec::new();
    for s in 0..2 {
        for u in 0..2 {
            for v in 0..2 {
                let pu_ = if u == 1 { pu } else { 1.0 - pu };
                let ps = if s == u { 1.0 - a } else { a };
                let pv = if v == u { 1.0 - b } else { b };
                probs.push(pu_ * ps * pv);
            }
        }
    }
    law_suv(2, 2, 2, probs)
}

fn example1() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for p in [0.15, 0.25, 0.35] {
        let rs: Vec<f64> = (0..=10).map(|k| k as f64 * 0.05).collect();
        let closed: Vec<_> = rs.iter().map(|&r| example1_closed_form(p, 0.0, r).unwrap()).collect();
        let cfg = FrontierConfig {
            only_w: Some(2),
            rate_targets: closed.iter().map(|c| bits_to_nats(c.rate_bits)).collect(),
            seed: 1,
            ..Default::default()
        };
        let frontier = taci_frontier(&example1_instance(p, 0.0).unwrap(), &cfg).unwrap();
        for c in &closed {
            let err = frontier
                .iter()
                .map(|f| {
                    let d = [
                        bits(f.point.rate) - c.rate_bits,
                        bits(f.point.exponent) - c.kappa_bits,
                        bits(f.point.privacy0) - c.lambda0_bits,
                    ];
                    d.iter().fold(0.0f64, |m, x| m.max(x.abs()))
                })
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(err);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (
        worst < 1e-3 && secs < 120.0,
        format!("max coordinate error {worst:.2e} bits over 33 points, {secs:.1}s"),
    )
}

fn taci_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let (u, y, z) = (rng.gen_range(1..4), rng.gen_range(1..4), rng.gen_range(1..4));
        let p = rand_joint(&mut rng, &[("S", 2), ("U", u), ("Y", y), ("Z", z)]);
        let inst = TaciInstance::new(p, rand_channel(&mut rng, u * y * z, 2)).unwrap();
        let pair = HypothesisPair::from_taci(&inst.p_suyz, &inst.q_suyz().unwrap(), None).unwrap();
        let w = rng.gen_range(1..u + 3);
        let ch = rand_channel(&mut rng, u, w);
        let e1 = exponent_e1(&pair, &ch).unwrap();
        let closed = taci_point(&inst.p_suyz, &ch).unwrap().exponent;
        worst = worst.max((e1 - closed).abs());
    }
    (worst < 1e-6, format!("max |E1 - I(Y;W|Z)| = {worst:.2e} nats over 10 instances"))
}

fn zero_rate_vs_grid() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    let mut worst_indep: f64 = 0.0;
    for _ in 0..10 {
        let (p_u, p_v) = (rand_pmf(&mut rng, 2), rand_pmf(&mut rng, 2));
        let q_uv = rand_joint(&mut rng, &[("U", 2), ("V", 2)]);
        let e = zero_rate_exponent(&p_u, &p_v, &q_uv).unwrap();
        let cons = [
            MarginalConstraint::from_law(&JointPmf::from_pmf("U", &p_u), &["U"]).unwrap(),
            MarginalConstraint::from_law(&JointPmf::from_pmf("V", &p_v), &["V"]).unwrap(),
        ];
        let g = grid_min_kl(&q_uv, &cons, &OracleBudget::default()).unwrap();
        worst = worst.max((e - g).abs());
        let indep = JointPmf::product(&[("U", &p_u), ("V", &p_v)]).unwrap();
        worst_indep = worst_indep.max(zero_rate_exponent(&p_u, &p_v, &indep).unwrap().abs());
    }
    (
        worst < 2e-3 && worst_indep < 1e-9,
        format!("max |optimizer - grid| = {worst:.2e} nats; product alternate max {worst_indep:.1e}"),
    )
}

fn finite_n_consistency() -> Outcome {
    // P: uniform U, V = U through a BSC(0.1). Q: independent Bern(0.2) pair.
    let pair = HypothesisPair::new(
        law_suv(1, 2, 2, vec![0.45, 0.05, 0.05, 0.45]),
        law_suv(1, 2, 2, vec![0.64, 0.16, 0.16, 0.04]),
        None,
    )
    .unwrap();
    let delta = 0.1;
    let e0 = pair_zero_rate_exponent(&pair).unwrap();
    let within = |(lo, hi): (f64, f64), x: f64| lo - 1e-12 <= x && x <= hi + 1e-12;
    let (mut mc_ok, mut bound_ok) = (true, true);
    let mut rates = Vec::new();
    let mut detail = Vec::new();
    for n in [2usize, 4, 6] {
        let cfg = SchemeConfig {
            scheme: SchemeKind::ZeroRate,
            n,
            delta,
            eta: 0.05,
            rate_nats: 0.0,
            epsilon_star: 0.0,
            trials: 100_000,
            seed: 4,
            w_channel: None,
            delta_prime: None,
        };
        let scheme = cfg.build(&pair).unwrap();
        let accept = |m: &Message, v: &SequenceSample| scheme.decide(m, v) == 0;
        let (alpha, beta) = exact_error_probabilities(scheme.as_ref(), &accept, &pair, &OracleBudget::default()).unwrap();
        let st = run_trials(scheme.as_ref(), &pair, cfg.trials, cfg.seed).unwrap();
        let ok = within(wilson_interval(st.type1_errors, st.trials, 3.0), alpha)
            && within(wilson_interval(st.type2_errors, st.trials, 3.0), beta);
        mc_ok &= ok;
        let rate = -beta.ln() / n as f64;
        let bound = e0 + 4.0 * ((n + 1) as f64).ln() / n as f64 + delta;
        bound_ok &= rate <= bound;
        rates.push(rate);
        detail.push(format!(
            "n={n} alpha={alpha:.4}/{:.4} beta={beta:.4}/{:.4} -ln(beta)/n={rate:.4}",
            st.alpha_hat, st.beta_hat
        ));
    }
    let monotone = rates.windows(2).all(|w| w[1] >= w[0] - 1e-12);
    (
        mc_ok && monotone && bound_ok,
        format!(
            "3-sigma {mc_ok}, nondecreasing {monotone}, below bound {bound_ok} (E0={e0:.4}); {}",
            detail.join("; ")
        ),
    )
}

fn perfect_privacy() -> Outcome {
    let pair = example2_pair().unwrap();
    let mut worst: f64 = 0.0;
    for n in 1..=6 {
        let model = SymbolwiseModel::new(n, vec![0, 1, 0, 1], 2).unwrap();
        for h in 0..2u8 {
            let e = bits(exact_equivocation(&model, &pair, h).unwrap()) / n as f64;
            worst = worst.max((e - 2.0).abs());
        }
    }
    let (p, _) = example2_laws().unwrap();
    let t = taci_point(&with_trivial_z(&p).unwrap(), &example2_channel()).unwrap();
    let kappa = bits(t.exponent);
    (
        worst < 1e-10 && (kappa - 1.0).abs() < 1e-10,
        format!("max |equivocation - 2| = {worst:.1e} bits for n=1..6; exponent {kappa:.12} bits"),
    )
}

fn ln_factorial(k: usize) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

/// Type I error of the time-sharing scheme by a sum over joint type
/// classes of `(u, v)`.
fn timeshare_alpha(p_uv: [[f64; 2]; 2], n: usize, delta: f64, delta_prime: f64, eps: f64) -> f64 {
    let p_u = [p_uv[0][0] + p_uv[0][1], p_uv[1][0] + p_uv[1][1]];
    let mut pass = 0.0;
    for a in 0..=n {
        for b in 0..=n - a {
            for c in 0..=n - a - b {
                let d = n - a - b - c;
                let k = [[a, b], [c, d]];
                let nf = n as f64;
                let u1 = (c + d) as f64 / nf;
                let u_typ = (p_u[1] - u1).abs() <= delta + 1e-12 && (p_u[0] - (1.0 - u1)).abs() <= delta + 1e-12;
                let j_typ = (0..2).all(|x| (0..2).all(|y| (p_uv[x][y] - k[x][y] as f64 / nf).abs() <= delta_prime + 1e-12));
                if u_typ && j_typ {
                    let log_coef = ln_factorial(n) - ln_factorial(a) - ln_factorial(b) - ln_factorial(c) - ln_factorial(d);
                    let log_p: f64 = (0..2).flat_map(|x| (0..2).map(move |y| (x, y))).map(|(x, y)| k[x][y] as f64 * p_uv[x][y].ln()).sum();
                    pass += (log_coef + log_p).exp();
                }
            }
        }
    }
    1.0 - (1.0 - eps) * pass
}

fn strong_converse() -> Outcome {
    let p = bsc_law(0.5, 0.1, 0.2);
    // Testing against independence: Q keeps S|U and decouples V from U.
    let mut q = Vec::new();
    for s in 0..2 {
        for u in 0..2usize {
            for _v in 0..2 {
                q.push(0.5 * if s == u { 0.9 } else { 0.1 } * 0.5);
            }
        }
    }
    let pair = HypothesisPair::new(p, law_suv(2, 2, 2, q), None).unwrap();
    let (eps, delta) = (0.25, 0.2);
    let rec = &counterexample_curve(&pair, eps, &[6], delta, delta).unwrap()[0];
    let analytic = timeshare_alpha([[0.4, 0.1], [0.1, 0.4]], 6, delta, delta, eps);
    let gap = rec.zero_rate_equivocation - rec.weak_converse;
    let floor = rec.weak_converse + 0.1 * eps * gap;
    (
        (rec.alpha_exact - analytic).abs() < 1e-9 && rec.equivocation_per_letter > floor,
        format!(
            "alpha {:.12} vs analytic {analytic:.12}; equivocation {:.4} > {floor:.4} nats",
            rec.alpha_exact, rec.equivocation_per_letter
        ),
    )
}

fn tv_decay() -> Outcome {
    // S and V are both BSC(0.3) views of U; P(U=1) = 0.95 under the null
    // and 0.45 under the alternate.
    let pair = HypothesisPair::new(bsc_law(0.95, 0.3, 0.3), bsc_law(0.45, 0.3, 0.3), None).unwrap();
    let tv: Vec<f64> = (2..=8).map(|n| conditioned_tv(&pair, 1, 0.06, n, true).unwrap()).collect();
    let monotone = tv.windows(2).all(|w| w[1] <= w[0]);
    let c = tv
        .iter()
        .zip(2..)
        .map(|(&t, n)| -t.ln() / n as f64)
        .fold(f64::INFINITY, f64::min);
    let below = tv.iter().zip(2..).all(|(&t, n)| t <= (-(n as f64) * c).exp() * (1.0 + 1e-12));
    (
        monotone && c > 0.0 && tv[0] > 0.0 && below,
        format!(
            "TV(n=2..8) = [{}], fitted c = {c:.4}",
            tv.iter().map(|t| format!("{t:.3e}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn causal_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let pair = rand_pair(&mut rng, 2, 2, 2, false);
        let model = rand_table_model(&mut rng, 2, 2, 2);
        for h in 0..2u8 {
            let fast = exact_causal_distortion(&model, &pair, h).unwrap();
            let slow = exhaustive_causal_estimators(&model, &pair, h, &OracleBudget::default()).unwrap();
            worst = worst.max((fast - slow).abs());
        }
    }
    (worst <= 1e-12, format!("max difference {worst:.1e} over 5 toys, both hypotheses"))
}

fn property_suites() -> Outcome {
    let start = Instant::now();
    let mut failed = Vec::new();
    for (name, prop) in ALL {
        if let Err(e) = prop() {
            failed.push(format!("{name} ({})", e.lines().next().unwrap_or("")));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = failed.is_empty() && secs < 600.0;
    let detail = if failed.is_empty() {
        format!("{} properties, {secs:.1}s", ALL.len())
    } else {
        format!("{}/{} failed in {secs:.1}s: {}", failed.len(), ALL.len(), failed.join("; "))
    };
    (ok, detail)
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, example1),
        (2, taci_identity),
        (3, zero_rate_vs_grid),
        (4, finite_n_consistency),
        (5, perfect_privacy),
        (6, strong_converse),
        (7, tv_decay),
        (8, causal_oracle),
        (9, property_suites),
    ];
    let mut all = true;
    for (k, f) in criteria {
        let (ok, detail) = f();
        all &= ok;
        println!("criterion {k}: {} {detail}", if ok { "PASS" } else { "FAIL" });
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
