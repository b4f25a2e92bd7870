//! Random instance builders and the invariant suites shared by the
//! `properties` and `acceptance` targets.
#![allow(dead_code)]

use std::cell::Cell;

use htpl::adversary::*;
use htpl::oracle::*;
use htpl::probcore::*;
use htpl::regions::*;
use htpl::schemes::*;
use proptest::prelude::*;
use proptest::test_runner::{RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MASTER_SEED: u64 = 0x5eed_2024;
pub const CASES: u32 = 100;

pub fn runner(cases: u32) -> TestRunner {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&MASTER_SEED.to_le_bytes());
    let cfg = ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    };
    TestRunner::new_with_rng(cfg, TestRng::from_seed(RngAlgorithm::ChaCha, &seed))
}

// ---- builders ----

pub fn rand_weights(rng: &mut ChaCha8Rng, k: usize, floor: f64) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| floor - (1.0 - rng.gen::<f64>()).ln()).collect();
    let t: f64 = w.iter().sum();
    w.into_iter().map(|x| x / t).collect()
}

pub fn rand_pmf(rng: &mut ChaCha8Rng, k: usize) -> Pmf {
    Pmf::new(rand_weights(rng, k, 0.05)).unwrap()
}

pub fn rand_joint(rng: &mut ChaCha8Rng, axes: &[(&str, usize)]) -> JointPmf {
    let cells: usize = axes.iter().map(|a| a.1).product();
    let axes = axes.iter().map(|(n, s)| Axis::new(*n, *s)).collect();
    JointPmf::new(axes, rand_weights(rng, cells, 0.05)).unwrap()
}

pub fn rand_channel(rng: &mut ChaCha8Rng, input: usize, output: usize) -> Channel {
    Channel::from_rows((0..input).map(|_| rand_weights(rng, output, 0.02)).collect()).unwrap()
}

/// Random pair on `S, U, V`; with `same_u` the alternate keeps `P_U`.
pub fn rand_pair(rng: &mut ChaCha8Rng, s: usize, u: usize, v: usize, same_u: bool) -> HypothesisPair {
    let axes = [("S", s), ("U", u), ("V", v)];
    let p = rand_joint(rng, &axes);
    let mut q = rand_joint(rng, &axes);
    if same_u {
        let pu = p.marginal_pmf("U").unwrap();
        let qu = q.marginal_pmf("U").unwrap();
        let probs: Vec<f64> = (0..s * u * v)
            .map(|i| {
                let b = (i / v) % u;
                q.probs()[i] * pu.get(b) / qu.get(b)
            })
            .collect();
        q = JointPmf::from_weights(q.axes().to_vec(), probs).unwrap();
    }
    HypothesisPair::new(p, q, Some(Distortion::hamming(s))).unwrap()
}

/// A random stochastic message law with up to `m` messages per row.
pub fn rand_table_model(rng: &mut ChaCha8Rng, n: usize, u: usize, m: usize) -> TableModel {
    let rows = (0..u.pow(n as u32))
        .map(|_| {
            rand_weights(rng, m, 0.0)
                .into_iter()
                .enumerate()
                .map(|(j, p)| (Message::index(j as u64), p))
                .collect()
        })
        .collect();
    TableModel::new(n, u, rows).unwrap()
}

pub fn bits(x: f64) -> f64 {
    nats_to_bits(x)
}

/// Entropy of a raw vector, written out here rather than borrowed.
pub fn naive_entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
}

// ---- property plumbing ----

macro_rules! property {
    ($(#[$m:meta])* $name:ident, |$rng:ident| $body:block) => {
        $(#[$m])*
        pub fn $name() -> Result<(), String> {
            runner(CASES)
                .run(&any::<u64>(), |seed| {
                    #[allow(unused_mut)]
                    let mut $rng = ChaCha8Rng::seed_from_u64(seed);
                    $body
                    Ok(())
                })
                .map_err(|e| e.to_string())
        }
    };
}

// ---- probcore ----

property!(chain_rule, |rng| {
    let (a, b) = (rng.gen_range(1..5), rng.gen_range(1..5));
    let j = rand_joint(&mut rng, &[("X", a), ("Y", b)]);
    let lhs = joint_entropy(&j, &["X", "Y"]).unwrap();
    let rhs = joint_entropy(&j, &["X"]).unwrap() + conditional_entropy(&j, &["Y"], &["X"]).unwrap();
    prop_assert!((lhs - rhs).abs() < 1e-10);
});

property!(mutual_information_identity, |rng| {
    let (a, b) = (rng.gen_range(1..5), rng.gen_range(1..5));
    let j = rand_joint(&mut rng, &[("X", a), ("Y", b)]);
    let i = mutual_information(&j, &["X"], &["Y"]).unwrap();
    let alt = joint_entropy(&j, &["X"]).unwrap() - conditional_entropy(&j, &["X"], &["Y"]).unwrap();
    prop_assert!(i >= 0.0);
    prop_assert!((i - alt).abs() < 1e-10);
});

property!(pinsker, |rng| {
    let k = rng.gen_range(2..6);
    let (p, q) = (rand_pmf(&mut rng, k), rand_pmf(&mut rng, k));
    let d = kl_divergence(&p, &q).unwrap();
    let tv = total_variation(&p, &q).unwrap();
    prop_assert!(d >= 2.0 * tv * tv - 1e-15);
});

property!(entropy_continuity, |rng| {
    let k = rng.gen_range(2..6);
    let p = rand_pmf(&mut rng, k);
    // Move a random amount of mass (at most 1/4) between two letters.
    let (i, j) = (rng.gen_range(0..k), rng.gen_range(0..k));
    let mut q = p.probs().to_vec();
    let moved = (rng.gen::<f64>() * 0.25).min(q[i]);
    q[i] -= moved;
    q[j] += moved;
    let q = Pmf::normalized(q).unwrap();
    let rho = total_variation(&p, &q).unwrap().min(0.25);
    let gap = (entropy(&p) - entropy(&q)).abs();
    prop_assert!(gap <= entropy_continuity_bound(rho, k).unwrap() + 1e-12);
});

property!(binary_helpers, |rng| {
    let (a, b) = (rng.gen::<f64>(), rng.gen::<f64>());
    prop_assert_eq!(star(a, b).unwrap(), star(b, a).unwrap());
    prop_assert!((star(a, 0.0).unwrap() - a).abs() < 1e-15);
    let y = rng.gen::<f64>();
    prop_assert!((binary_entropy(inv_binary_entropy(y).unwrap()).unwrap() - y).abs() < 1e-9);
    for k in 0..=100 {
        let y = k as f64 / 100.0;
        prop_assert!((binary_entropy(inv_binary_entropy(y).unwrap()).unwrap() - y).abs() < 1e-9);
    }
});

property!(type_class_is_typical, |rng| {
    let k = rng.gen_range(1..5);
    let n = rng.gen_range(1..13);
    let mut symbols: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    let t = SequenceSample::new(k, symbols.clone()).unwrap().type_pmf();
    // Any rearrangement has the same type.
    for i in (1..n).rev() {
        symbols.swap(i, rng.gen_range(0..=i));
    }
    let x = SequenceSample::new(k, symbols).unwrap();
    let delta = if rng.gen_bool(0.3) { 0.0 } else { rng.gen::<f64>() };
    prop_assert!(is_typical(&x, &t, delta).unwrap());
});

// ---- regions ----

fn small_pair(rng: &mut ChaCha8Rng) -> (HypothesisPair, Channel) {
    let (s, u, v, w) = (rng.gen_range(1..3), rng.gen_range(2..4), rng.gen_range(2..4), rng.gen_range(1..4));
    let same_u = rng.gen_bool(0.3);
    let pair = rand_pair(rng, s, u, v, same_u);
    let ch = rand_channel(rng, u, w);
    (pair, ch)
}

fn check_certificate(sol: &CouplingSolution, problem: &CouplingProblem) -> Result<(), TestCaseError> {
    prop_assert!(sol.residual < 1e-9, "residual {}", sol.residual);
    for c in &problem.marginals {
        let axes: Vec<&str> = c.axes.iter().map(String::as_str).collect();
        let got = sol.coupling.marginal(&axes).unwrap();
        prop_assert!(got.sup_distance(&c.target.permuted(&axes).unwrap()).unwrap() < 1e-9);
    }
    let re = kl_divergence_joint(&sol.coupling, &problem.reference).unwrap();
    prop_assert!((re - sol.value).abs() < 1e-10, "reported {} re-evaluated {}", sol.value, re);
    Ok(())
}

fn zero_rate_problem(pair: &HypothesisPair) -> CouplingProblem {
    CouplingProblem {
        reference: pair.q().marginal(&["U", "V"]).unwrap(),
        marginals: vec![
            MarginalConstraint::from_law(pair.p(), &["U"]).unwrap(),
            MarginalConstraint::from_law(pair.p(), &["V"]).unwrap(),
        ],
        entropy: None,
    }
}

property!(coupling_certificates, |rng| {
    let (pair, ch) = small_pair(&mut rng);
    let e1 = e1_problem(&pair, &ch).unwrap();
    check_certificate(&e1.solve().unwrap(), &e1)?;
    let e2 = e2_problem(&pair, &ch).unwrap();
    let sol = e2.solve().unwrap();
    check_certificate(&sol, &e2)?;
    let h = conditional_entropy(&sol.coupling, &["W"], &["V"]).unwrap();
    prop_assert!(h >= e2.entropy.as_ref().unwrap().lower - 1e-9);
    let zr = zero_rate_problem(&pair);
    check_certificate(&zr.solve().unwrap(), &zr)?;
});

property!(convex_restarts, |rng| {
    let (pair, ch) = small_pair(&mut rng);
    for problem in [e1_problem(&pair, &ch).unwrap(), zero_rate_problem(&pair)] {
        let base = problem.solve().unwrap().value;
        let solver = Solver::new(&problem, SolverConfig::default()).unwrap();
        for _ in 0..5 {
            let start = rand_weights(&mut rng, problem.reference.num_cells(), 0.05);
            let v = solver.solve_from(&start).unwrap().value;
            prop_assert!((v - base).abs() < 1e-7, "restart {} vs {}", v, base);
        }
    }
});

property!(kappa_star_monotone, |rng| {
    let (pair, ch) = small_pair(&mut rng);
    let e1 = exponent_e1(&pair, &ch).unwrap();
    let mut rates: Vec<f64> = (0..4).map(|_| rng.gen::<f64>() * 1.5).collect();
    rates.sort_by(f64::total_cmp);
    let ks: Vec<f64> = rates.iter().map(|&r| kappa_star(r, &pair, &ch).unwrap()).collect();
    for w in ks.windows(2) {
        prop_assert!(w[0] <= w[1] + 1e-9, "{:?}", ks);
    }
    for k in ks {
        prop_assert!(k <= e1 + 1e-12);
    }
});

property!(point_privacy0_matches_entropy, |rng| {
    let (pair, ch) = small_pair(&mut rng);
    let t = theorem1_point(&pair, &ch, rng.gen::<f64>()).unwrap();
    // H(S | W, V) from an explicit four-way table.
    let (s, u, v) = pair.sizes();
    let w = ch.output_size();
    let mut svw = vec![0.0; s * v * w];
    for a in 0..s {
        for b in 0..u {
            for c in 0..v {
                for d in 0..w {
                    svw[(a * v + c) * w + d] += pair.p().get(&[a, b, c]) * ch.get(b, d);
                }
            }
        }
    }
    let vw: Vec<f64> = (0..v * w).map(|k| (0..s).map(|a| svw[a * v * w + k]).sum()).collect();
    let direct = naive_entropy(&svw) - naive_entropy(&vw);
    prop_assert!((t.privacy0 - direct).abs() < 1e-10);
    let hs = naive_entropy(pair.p().marginal(&["S"]).unwrap().probs());
    prop_assert!(t.privacy0 <= hs + 1e-12);
});

property!(taci_exponent_below_rate, |rng| {
    let sizes = [("S", 2), ("U", rng.gen_range(2..4)), ("Y", rng.gen_range(1..4)), ("Z", rng.gen_range(1..4))];
    let p = rand_joint(&mut rng, &sizes);
    let w = rng.gen_range(1..5);
    let ch = rand_channel(&mut rng, sizes[1].1, w);
    let t = taci_point(&p, &ch).unwrap();
    prop_assert!(t.exponent <= t.rate_needed + 1e-12);
});

property!(frontier_matches_example1, |rng| {
    let p = 0.05 + 0.4 * rng.gen::<f64>();
    let r = 0.5 * rng.gen::<f64>();
    let cf = example1_closed_form(p, 0.0, r).unwrap();
    let cfg = FrontierConfig {
        only_w: Some(2),
        seeds_per_size: 20,
        rate_targets: vec![bits_to_nats(cf.rate_bits)],
        seed: rng.gen(),
        ..Default::default()
    };
    let f = taci_frontier(&example1_instance(p, 0.0).unwrap(), &cfg).unwrap();
    let best = f
        .iter()
        .min_by(|a, b| {
            (bits(a.point.rate) - cf.rate_bits)
                .abs()
                .total_cmp(&(bits(b.point.rate) - cf.rate_bits).abs())
        })
        .unwrap();
    prop_assert!((bits(best.point.rate) - cf.rate_bits).abs() < 1e-3);
    prop_assert!((bits(best.point.exponent) - cf.kappa_bits).abs() < 1e-3);
    prop_assert!((bits(best.point.privacy0) - cf.lambda0_bits).abs() < 1e-3);
});

// ---- schemes ----

fn binary_pair(rng: &mut ChaCha8Rng, same_u: bool) -> HypothesisPair {
    let s = rng.gen_range(1..3);
    rand_pair(rng, s, 2, 2, same_u)
}

property!(scheme_determinism, |rng| {
    let pair = binary_pair(&mut rng, false);
    let n = rng.gen_range(2..6);
    let seed = rng.gen();
    let kind = [SchemeKind::Likelihood, SchemeKind::ZeroRate, SchemeKind::Timeshare][rng.gen_range(0..3)];
    let cfg = SchemeConfig {
        scheme: kind,
        n,
        delta: 0.3,
        eta: 0.05,
        rate_nats: rng.gen::<f64>(),
        epsilon_star: 0.3,
        trials: 200,
        seed,
        // Full support, so the likelihood encoder never meets an all-zero row.
        w_channel: Some(rand_channel(&mut rng, 2, 3)),
        delta_prime: None,
    };
    prop_assert_eq!(cfg.run(&pair).unwrap(), cfg.run(&pair).unwrap());
    let (a, b) = (cfg.build(&pair).unwrap(), cfg.build(&pair).unwrap());
    let u = SequenceSample::sample(&pair.p_u(), n, &mut rng);
    let (mut r1, mut r2) = (trial_rng(seed, 0, 7), trial_rng(seed, 0, 7));
    prop_assert_eq!(a.encode(&u, &mut r1).unwrap(), b.encode(&u, &mut r2).unwrap());
});

property!(identity_binning_decodes_sent_index, |rng| {
    let pair = binary_pair(&mut rng, false);
    let n = rng.gen_range(2..5);
    let ch = rand_channel(&mut rng, 2, 2);
    let params = LikelihoodParams {
        n,
        delta: 0.5,
        eta: 0.05,
        rate: 50.0,
        seed: rng.gen(),
        cap: DEFAULT_CODEBOOK_CAP,
    };
    let scheme = LikelihoodScheme::new(&pair.p().marginal(&["U", "V"]).unwrap(), &ch, &params).unwrap();
    prop_assert!(scheme.codebook.identity_bins());
    let u = SequenceSample::sample(&pair.p_u(), n, &mut rng);
    let v = SequenceSample::sample(&pair.p().marginal_pmf("V").unwrap(), n, &mut rng);
    let m = scheme.encode(&u, &mut rng).unwrap();
    if let Message::Payload { index, .. } = m {
        let j = min_entropy_decode(&scheme.codebook, &m, &v, scheme.p_w(), 0.0);
        prop_assert_eq!(j, Some(index as usize));
    }
});

property!(error_message_rejects, |rng| {
    let pair = binary_pair(&mut rng, false);
    let n = rng.gen_range(1..6);
    let v = SequenceSample::sample(&pair.p().marginal_pmf("V").unwrap(), n, &mut rng);
    let p_v = pair.p().marginal_pmf("V").unwrap();
    prop_assert_eq!(zero_rate_detect(0, &v, &p_v, rng.gen::<f64>()), 1);
    let w = SequenceSample::sample(&Pmf::uniform(2), n, &mut rng);
    prop_assert_eq!(detect(Some(&w), &v, &Message::Error, true, &Pmf::uniform(4), 1.0), 1);
    for kind in [SchemeKind::Likelihood, SchemeKind::ZeroRate, SchemeKind::Timeshare] {
        let cfg = SchemeConfig {
            scheme: kind,
            n,
            delta: 1.0,
            eta: 0.05,
            rate_nats: 0.0,
            epsilon_star: 0.0,
            trials: 1,
            seed: 0,
            w_channel: None,
            delta_prime: None,
        };
        prop_assert_eq!(cfg.build(&pair).unwrap().decide(&Message::Error, &v), 1);
    }
});

/// Pooled over all cases: the oracle's exact values fall inside the 3-sigma
/// Wilson interval in at least 99% of seeded repetitions.
pub fn monte_carlo_consistency() -> Result<(), String> {
    const REPS: u64 = 10;
    const TRIALS: u64 = 2000;
    let inside = Cell::new(0u64);
    let total = Cell::new(0u64);
    runner(CASES)
        .run(&any::<u64>(), |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let same_u = rng.gen_bool(0.5);
            let pair = binary_pair(&mut rng, same_u);
            let n = rng.gen_range(2..7);
            let cfg = SchemeConfig {
                scheme: if rng.gen_bool(0.5) { SchemeKind::ZeroRate } else { SchemeKind::Timeshare },
                n,
                delta: 0.1 + 0.3 * rng.gen::<f64>(),
                eta: 0.05,
                rate_nats: 0.0,
                epsilon_star: 0.5 * rng.gen::<f64>(),
                trials: TRIALS,
                seed: 0,
                w_channel: None,
                delta_prime: None,
            };
            let scheme = cfg.build(&pair).unwrap();
            let accept = |m: &Message, v: &SequenceSample| scheme.decide(m, v) == 0;
            let (alpha, beta) = exact_error_probabilities(scheme.as_ref(), &accept, &pair, &OracleBudget::default()).unwrap();
            for r in 0..REPS {
                let st = run_trials(scheme.as_ref(), &pair, TRIALS, seed ^ r).unwrap();
                let a = wilson_interval(st.type1_errors, TRIALS, 3.0);
                let b = wilson_interval(st.type2_errors, TRIALS, 3.0);
                // 1e-12 absorbs summation rounding in the oracle only.
                let within = |(lo, hi): (f64, f64), x: f64| lo - 1e-12 <= x && x <= hi + 1e-12;
                let ok = within(a, alpha) && within(b, beta);
                inside.set(inside.get() + ok as u64);
                total.set(total.get() + 1);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    let frac = inside.get() as f64 / total.get() as f64;
    if frac >= 0.99 {
        Ok(())
    } else {
        Err(format!("only {frac:.4} of repetitions inside 3-sigma bounds"))
    }
}

property!(timeshare_containment, |rng| {
    let pair = binary_pair(&mut rng, false);
    let n = rng.gen_range(2..6);
    let delta = 0.1 + 0.3 * rng.gen::<f64>();
    let p_uv = pair.p().marginal(&["U", "V"]).unwrap();
    let eps = rng.gen::<f64>();
    let base = TimeshareScheme::new(&p_uv, n, delta, 2.0 * delta, 0.0).unwrap();
    let shared = TimeshareScheme::new(&p_uv, n, delta, 2.0 * delta, eps).unwrap();
    let budget = OracleBudget::default();
    let acc0 = |m: &Message, v: &SequenceSample| base.decide(m, v) == 0;
    let acc1 = |m: &Message, v: &SequenceSample| shared.decide(m, v) == 0;
    let (_, b0) = exact_error_probabilities(&base, &acc0, &pair, &budget).unwrap();
    let (_, b1) = exact_error_probabilities(&shared, &acc1, &pair, &budget).unwrap();
    prop_assert!(b1 <= b0 + 1e-15, "{} > {}", b1, b0);
    // The error message is never accepted, so the regions nest.
    for vi in 0..(1usize << n) {
        let v = SequenceSample::from_index(2, n, vi);
        prop_assert_eq!(shared.decide(&Message::Error, &v), 1);
    }
});

// ---- adversary ----

fn small_model(rng: &mut ChaCha8Rng) -> (HypothesisPair, TableModel) {
    let (s, u, v) = (rng.gen_range(1..4), rng.gen_range(1..4), rng.gen_range(1..3));
    let pair = rand_pair(rng, s, u, v, false);
    let n = rng.gen_range(1..4);
    let m = rng.gen_range(1..4);
    let model = rand_table_model(rng, n, u, m);
    (pair, model)
}

property!(equivocation_bounds, |rng| {
    let (pair, model) = small_model(&mut rng);
    let n = model.blocklength() as f64;
    for h in 0..2u8 {
        let e = exact_equivocation(&model, &pair, h).unwrap();
        let hsv = conditional_entropy(pair.law(h), &["S"], &["V"]).unwrap();
        prop_assert!(e >= 0.0);
        prop_assert!(e <= n * hsv + 1e-10, "{} > {}", e, n * hsv);
    }
});

property!(causal_distortion_bound, |rng| {
    let (pair, model) = small_model(&mut rng);
    let n = model.blocklength() as f64;
    let z = zero_rate_privacy(&pair).unwrap();
    let caps = [z.delta0_max.unwrap(), z.delta1_max.unwrap()];
    for h in 0..2u8 {
        let d = exact_causal_distortion(&model, &pair, h).unwrap();
        prop_assert!(d >= 0.0);
        prop_assert!(d <= n * caps[h as usize] + 1e-10);
    }
});

property!(refinement_lowers_equivocation, |rng| {
    let (s, u, v) = (rng.gen_range(1..4), rng.gen_range(2..4), rng.gen_range(1..3));
    let pair = rand_pair(&mut rng, s, u, v, false);
    let n = rng.gen_range(1..4);
    let fine_size = rng.gen_range(1..6);
    let g: Vec<usize> = (0..u.pow(n as u32)).map(|_| rng.gen_range(0..fine_size)).collect();
    let h: Vec<usize> = (0..fine_size).map(|_| rng.gen_range(0..3)).collect();
    let fine = TableModel::deterministic(n, u, |x| Message::index(g[x.index()] as u64)).unwrap();
    let coarse = TableModel::deterministic(n, u, |x| Message::index(h[g[x.index()]] as u64)).unwrap();
    for hyp in 0..2u8 {
        let ef = exact_equivocation(&fine, &pair, hyp).unwrap();
        let ec = exact_equivocation(&coarse, &pair, hyp).unwrap();
        prop_assert!(ef <= ec + 1e-12, "{} > {}", ef, ec);
    }
});

property!(zero_rate_gap_nonincreasing, |rng| {
    let pair = binary_pair(&mut rng, true);
    let delta = 0.05 + 0.3 * rng.gen::<f64>();
    let hsv = conditional_entropy(pair.q(), &["S"], &["V"]).unwrap();
    let gaps: Vec<f64> = [2usize, 4, 6]
        .iter()
        .map(|&n| {
            let scheme = ZeroRateScheme {
                n,
                p_u: pair.p_u(),
                p_v: pair.p().marginal_pmf("V").unwrap(),
                delta,
            };
            (hsv - exact_equivocation(&scheme, &pair, 1).unwrap() / n as f64).abs()
        })
        .collect();
    for w in gaps.windows(2) {
        prop_assert!(w[1] <= w[0] + 1e-12, "gaps {:?} at delta {}", gaps, delta);
    }
});

// ---- oracle ----

property!(grid_brackets_optimizer, |rng| {
    let pair = rand_pair(&mut rng, 1, 2, 2, false);
    let zr = zero_rate_problem(&pair);
    let opt = zr.solve().unwrap().value;
    let grid = grid_min_kl(&zr.reference, &zr.marginals, &OracleBudget::default()).unwrap();
    prop_assert!(grid >= opt - 1e-9 && grid <= opt + 2e-3, "grid {} optimizer {}", grid, opt);
    let ch = rand_channel(&mut rng, 2, 2);
    let e1 = e1_problem(&pair, &ch).unwrap();
    let opt = e1.solve().unwrap().value;
    let grid = grid_min_kl(&e1.reference, &e1.marginals, &OracleBudget::default()).unwrap();
    prop_assert!(grid >= opt - 1e-9 && grid <= opt + 2e-3, "grid {} optimizer {}", grid, opt);
});

pub type Property = fn() -> Result<(), String>;

pub const ALL: &[(&str, Property)] = &[
    ("chain_rule", chain_rule),
    ("mutual_information_identity", mutual_information_identity),
    ("pinsker", pinsker),
    ("entropy_continuity", entropy_continuity),
    ("binary_helpers", binary_helpers),
    ("type_class_is_typical", type_class_is_typical),
    ("coupling_certificates", coupling_certificates),
    ("convex_restarts", convex_restarts),
    ("kappa_star_monotone", kappa_star_monotone),
    ("point_privacy0_matches_entropy", point_privacy0_matches_entropy),
    ("taci_exponent_below_rate", taci_exponent_below_rate),
    ("frontier_matches_example1", frontier_matches_example1),
    ("scheme_determinism", scheme_determinism),
    ("identity_binning_decodes_sent_index", identity_binning_decodes_sent_index),
    ("error_message_rejects", error_message_rejects),
    ("monte_carlo_consistency", monte_carlo_consistency),
    ("timeshare_containment", timeshare_containment),
    ("equivocation_bounds", equivocation_bounds),
    ("causal_distortion_bound", causal_distortion_bound),
    ("refinement_lowers_equivocation", refinement_lowers_equivocation),
    ("zero_rate_gap_nonincreasing", zero_rate_gap_nonincreasing),
    ("grid_brackets_optimizer", grid_brackets_optimizer),
];
