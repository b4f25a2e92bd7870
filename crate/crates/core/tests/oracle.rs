mod common;

use common::*;
use htpl::adversary::TableModel;
use htpl::oracle::*;
use htpl::probcore::*;
use htpl::regions::*;
use htpl::schemes::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn axes3(s: usize, u: usize, v: usize) -> Vec<Axis> {
    vec![Axis::new("S", s), Axis::new("U", u), Axis::new("V", v)]
}

#[test]
fn constant_detectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pair = rand_pair(&mut rng, 2, 2, 2, false);
    let b = OracleBudget::default();
    let acc = ConstantScheme::always_accept(3);
    let rej = ConstantScheme::always_reject(3);
    let (a0, b0) = exact_error_probabilities(&acc, &|m, v| acc.decide(m, v) == 0, &pair, &b).unwrap();
    let (a1, b1) = exact_error_probabilities(&rej, &|m, v| rej.decide(m, v) == 0, &pair, &b).unwrap();
    assert!(a0.abs() < 1e-12 && (b0 - 1.0).abs() < 1e-12);
    assert!((a1 - 1.0).abs() < 1e-12 && b1.abs() < 1e-12);
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |c, i| c * (n - i) as f64 / (i + 1) as f64)
}

#[test]
fn zero_rate_errors_by_hand() {
    // U uniform, V a BSC(0.2) view under the null; both Bern(0.3) and
    // independent under the alternate. At n = 4 and delta = 0.1 a binary
    // sequence is typical for the uniform law iff it has two ones.
    let (pv, qu, qv) = (0.2, 0.3, 0.3);
    let mut p = Vec::new();
    let mut q = Vec::new();
    for u in 0..2 {
        for v in 0..2 {
            p.push(0.5 * if u == v { 1.0 - pv } else { pv });
            q.push((if u == 1 { qu } else { 1.0 - qu }) * (if v == 1 { qv } else { 1.0 - qv }));
        }
    }
    let pair = HypothesisPair::new(
        JointPmf::new(axes3(1, 2, 2), p).unwrap(),
        JointPmf::new(axes3(1, 2, 2), q).unwrap(),
        None,
    )
    .unwrap();
    let scheme = ZeroRateScheme {
        n: 4,
        p_u: Pmf::uniform(2),
        p_v: Pmf::uniform(2),
        delta: 0.1,
    };
    let (alpha, beta) =
        exact_error_probabilities(&scheme, &|m, v| scheme.decide(m, v) == 0, &pair, &OracleBudget::default()).unwrap();
    // Under the null, (U_i, V_i) pairs agree with probability 0.8. Count
    // u^n with two ones, then v^n with two ones: j of the two ones of u are
    // kept, and 2 - j of the zeros flip.
    let mut both = 0.0;
    for j in 0..=2 {
        let keep = binom(2, j) * (1.0 - pv).powi(j as i32) * pv.powi(2 - j as i32);
        let flip = binom(2, 2 - j) * pv.powi(2 - j as i32) * (1.0 - pv).powi(j as i32);
        both += binom(4, 2) * 0.5f64.powi(4) * keep * flip;
    }
    let typ_q = |x: f64| binom(4, 2) * x * x * (1.0 - x) * (1.0 - x);
    assert!((alpha - (1.0 - both)).abs() < 1e-12, "{alpha} vs {}", 1.0 - both);
    assert!((beta - typ_q(qu) * typ_q(qv)).abs() < 1e-12);
}

#[test]
fn grid_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let b = OracleBudget::default();
    let on_grid = JointPmf::new(vec![Axis::new("U", 3)], vec![0.25, 0.35, 0.4]).unwrap();
    assert!(grid_min_kl(&on_grid, &[], &b).unwrap().abs() < 1e-12);
    let r = rand_joint(&mut rng, &[("U", 2), ("V", 2)]);

    let (pu, pv) = (Pmf::new(vec![0.25, 0.75]).unwrap(), Pmf::new(vec![0.6, 0.4]).unwrap());
    let prod = JointPmf::product(&[("U", &pu), ("V", &pv)]).unwrap();
    let cons = [
        MarginalConstraint::from_law(&prod, &["U"]).unwrap(),
        MarginalConstraint::from_law(&prod, &["V"]).unwrap(),
    ];
    assert!(grid_min_kl(&prod, &cons, &b).unwrap().abs() < 1e-12);

    let cons = [
        MarginalConstraint::from_law(&JointPmf::from_pmf("U", &pu), &["U"]).unwrap(),
        MarginalConstraint::from_law(&JointPmf::from_pmf("V", &pv), &["V"]).unwrap(),
    ];
    let opt = zero_rate_exponent(&pu, &pv, &r).unwrap();
    let g = grid_min_kl(&r, &cons, &b).unwrap();
    assert!(g >= opt - 1e-9 && g <= opt + 2e-3, "{g} vs {opt}");
}

#[test]
fn estimator_search_examples() {
    let b = OracleBudget::default();
    // S = U: disclosing U reveals S.
    let mut probs = vec![0.0; 8];
    for (u, v, p) in [(0, 0, 0.3), (0, 1, 0.2), (1, 0, 0.1), (1, 1, 0.4)] {
        probs[u * 4 + u * 2 + v] = p;
    }
    let law = JointPmf::new(axes3(2, 2, 2), probs).unwrap();
    let pair = HypothesisPair::new(law.clone(), law, Some(Distortion::hamming(2))).unwrap();
    let full = TableModel::full_disclosure(1, 2).unwrap();
    assert!(exhaustive_causal_estimators(&full, &pair, 0, &b).unwrap().abs() < 1e-15);

    // S uniform and independent of everything.
    let law = JointPmf::new(axes3(2, 2, 2), vec![0.125; 8]).unwrap();
    let pair = HypothesisPair::new(law.clone(), law, Some(Distortion::hamming(2))).unwrap();
    let silent = TableModel::constant(2, 2).unwrap();
    assert!((exhaustive_causal_estimators(&silent, &pair, 0, &b).unwrap() - 1.0).abs() < 1e-12);

    assert!(matches!(
        exhaustive_causal_estimators(&TableModel::constant(3, 2).unwrap(), &pair, 0, &b),
        Err(htpl::Error::BudgetExceeded { .. })
    ));
}

#[test]
fn estimator_search_agrees_with_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..3 {
        let pair = rand_pair(&mut rng, 2, 2, 2, false);
        let model = rand_table_model(&mut rng, 2, 2, 2);
        for h in 0..2 {
            let slow = exhaustive_causal_estimators(&model, &pair, h, &OracleBudget::default()).unwrap();
            let fast = htpl::adversary::exact_causal_distortion(&model, &pair, h).unwrap();
            assert!((slow - fast).abs() <= 1e-12);
        }
    }
}
