//! Pareto frontier of `(rate, exponent, equivocation)` over auxiliary
//! channels, by seeded random scalarizations plus coordinate local search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::pair::{PrivacyKind, TradeoffPoint};
use super::taci::{TaciEvaluator, TaciInstance, TaciPoint};
use crate::error::{Error, Result};
use crate::probcore::{Channel, Pmf};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct FrontierConfig {
    /// Random channel seeds per output alphabet size.
    pub seeds_per_size: usize,
    pub step: f64,
    pub shrink: f64,
    pub step_floor: f64,
    /// Largest `|W|`; defaults to `|U| + 2` and is capped there.
    pub max_w: Option<usize>,
    /// Only search this single `|W|` when set.
    pub only_w: Option<usize>,
    pub seed: u64,
    /// Rates (nats) to hit with exponent-only scalarizations.
    pub rate_targets: Vec<f64>,
    pub mu_range: (f64, f64),
    pub mu_bisections: usize,
}

impl Default for FrontierConfig {
    fn default() -> Self {
        Self {
            seeds_per_size: 200,
            step: 0.01,
            shrink: 0.5,
            step_floor: 1e-4,
            max_w: None,
            only_w: None,
            seed: 0,
            rate_targets: Vec::new(),
            mu_range: (1e-6, 1e4),
            mu_bisections: 40,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FrontierPoint {
    pub point: TradeoffPoint,
    pub channel: Channel,
}

type Rows = Vec<Vec<f64>>;

/// Scalarized objective `kappa - mu R + theta Lambda0`.
#[derive(Clone, Copy)]
struct Weights {
    mu: f64,
    theta: f64,
}

impl Weights {
    fn score(&self, t: &TaciPoint) -> f64 {
        t.exponent - self.mu * t.rate_needed + self.theta * t.equivocation0
    }
}

fn random_rows<R: Rng>(u: usize, w: usize, rng: &mut R) -> Rows {
    (0..u)
        .map(|_| {
            let e: Vec<f64> = (0..w).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
            let t: f64 = e.iter().sum();
            e.into_iter().map(|x| x / t).collect()
        })
        .collect()
}

/// Deterministic start: `u -> u mod |W|`.
fn folding_rows(u: usize, w: usize) -> Rows {
    (0..u)
        .map(|a| (0..w).map(|b| if a % w == b { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn local_search(ev: &TaciEvaluator, rows: &mut Rows, wts: Weights, cfg: &FrontierConfig) -> TaciPoint {
    let w = rows[0].len();
    let mut cur_pt = ev.eval(rows);
    let mut cur = wts.score(&cur_pt);
    let mut step = cfg.step;
    while step >= cfg.step_floor && w > 1 {
        let mut improved = false;
        for a in 0..rows.len() {
            for from in 0..w {
                for to in 0..w {
                    if from == to || rows[a][from] <= 0.0 {
                        continue;
                    }
                    let (old_f, old_t) = (rows[a][from], rows[a][to]);
                    let amt = step.min(old_f);
                    rows[a][from] = if amt == old_f { 0.0 } else { old_f - amt };
                    rows[a][to] = old_t + amt;
                    let pt = ev.eval(rows);
                    let v = wts.score(&pt);
                    if v > cur + 1e-14 {
                        cur = v;
                        cur_pt = pt;
                        improved = true;
                    } else {
                        rows[a][from] = old_f;
                        rows[a][to] = old_t;
                    }
                }
            }
        }
        if !improved {
            step *= cfg.shrink;
        }
    }
    cur_pt
}

fn to_channel(rows: &Rows) -> Channel {
    Channel::new(
        rows.iter()
            .map(|r| Pmf::normalized(r.clone()).expect("channel row keeps unit mass"))
            .collect(),
    )
    .expect("rows share one output size")
}

struct Candidate {
    pt: TaciPoint,
    rows: Rows,
}

fn seed_rng(seed: u64, w: usize, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((w as u64) << 40) | index);
    rng
}

/// Random-scalarization seeds for one `|W|`.
fn seeded_candidates(ev: &TaciEvaluator, w: usize, cfg: &FrontierConfig) -> Vec<Candidate> {
    let (lo, hi) = (cfg.mu_range.0.ln(), cfg.mu_range.1.ln());
    (0..cfg.seeds_per_size as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed_rng(cfg.seed, w, i);
            let wts = Weights {
                mu: rng.gen_range(lo..=hi).exp(),
                theta: rng.gen::<f64>(),
            };
            let mut rows = random_rows(ev.u_size(), w, &mut rng);
            let pt = local_search(ev, &mut rows, wts, cfg);
            Candidate { pt, rows }
        })
        .collect()
}

/// Exponent-only scalarizations, bisecting the rate price to land near
/// `target`. Returns the evaluated candidate whose rate is closest.
fn rate_target_candidate(ev: &TaciEvaluator, w: usize, target: f64, cfg: &FrontierConfig) -> Candidate {
    let (mut lo, mut hi) = (cfg.mu_range.0.ln(), cfg.mu_range.1.ln());
    let mut warm = folding_rows(ev.u_size(), w);
    let mut best: Option<Candidate> = None;
    for _ in 0..cfg.mu_bisections {
        let mid = 0.5 * (lo + hi);
        let wts = Weights {
            mu: mid.exp(),
            theta: 0.0,
        };
        let mut a = warm.clone();
        let pa = local_search(ev, &mut a, wts, cfg);
        let mut b = folding_rows(ev.u_size(), w);
        let pb = local_search(ev, &mut b, wts, cfg);
        let (pt, rows) = if wts.score(&pb) > wts.score(&pa) { (pb, b) } else { (pa, a) };
        warm = rows.clone();
        let closer = best
            .as_ref()
            .map(|c| (pt.rate_needed - target).abs() < (c.pt.rate_needed - target).abs())
            .unwrap_or(true);
        if pt.rate_needed > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if closer {
            best = Some(Candidate { pt, rows });
        }
    }
    best.expect("at least one bisection step")
}

fn dominates(a: &TradeoffPoint, b: &TradeoffPoint) -> bool {
    const TOL: f64 = 1e-12;
    let weak = a.rate <= b.rate + TOL && a.exponent >= b.exponent - TOL && a.privacy0 >= b.privacy0 - TOL;
    let strict = a.rate < b.rate - TOL || a.exponent > b.exponent + TOL || a.privacy0 > b.privacy0 + TOL;
    weak && strict
}

/// Drops dominated points and exact duplicates; output sorted by rate.
pub fn pareto_filter(mut points: Vec<FrontierPoint>) -> Vec<FrontierPoint> {
    points.sort_by(|a, b| {
        a.point
            .rate
            .total_cmp(&b.point.rate)
            .then(b.point.exponent.total_cmp(&a.point.exponent))
            .then(b.point.privacy0.total_cmp(&a.point.privacy0))
    });
    let mut keep: Vec<FrontierPoint> = Vec::new();
    for p in points {
        let dominated = keep.iter().any(|k| {
            dominates(&k.point, &p.point)
                || (k.point.rate == p.point.rate
                    && k.point.exponent == p.point.exponent
                    && k.point.privacy0 == p.point.privacy0)
        });
        if dominated {
            continue;
        }
        keep.retain(|k| !dominates(&p.point, &k.point));
        keep.push(p);
    }
    keep
}

/// Channel sizes searched for an instance with `|U| = u`.
pub fn w_sizes(u: usize, cfg: &FrontierConfig) -> Result<Vec<usize>> {
    let cap = u + 2;
    if let Some(w) = cfg.only_w {
        if w == 0 || w > cap {
            return Err(Error::Config(format!("|W| = {w} outside 1..={cap}")));
        }
        return Ok(vec![w]);
    }
    let max = cfg.max_w.unwrap_or(cap).min(cap);
    Ok((1..=max).collect())
}

pub fn taci_frontier(instance: &TaciInstance, cfg: &FrontierConfig) -> Result<Vec<FrontierPoint>> {
    if !(cfg.step > 0.0 && cfg.step_floor > 0.0 && cfg.shrink > 0.0 && cfg.shrink < 1.0) {
        return Err(Error::Config("step, floor and shrink must be positive, shrink < 1".into()));
    }
    if !(cfg.mu_range.0 > 0.0 && cfg.mu_range.0 < cfg.mu_range.1) {
        return Err(Error::Config("mu range must be positive and increasing".into()));
    }
    let ev = TaciEvaluator::new(&instance.p_suyz)?;
    let lambda_min = instance.lambda_min()?;
    let mut cands = Vec::new();
    for w in w_sizes(ev.u_size(), cfg)? {
        cands.extend(seeded_candidates(&ev, w, cfg));
        let targeted: Vec<Candidate> = cfg
            .rate_targets
            .par_iter()
            .map(|&t| rate_target_candidate(&ev, w, t, cfg))
            .collect();
        cands.extend(targeted);
    }
    let points = cands
        .into_iter()
        .map(|c| {
            let channel = to_channel(&c.rows);
            // Coordinates are recomputed on the normalized channel that is
            // actually stored.
            let pt = ev.eval(&channel.rows().iter().map(|r| r.probs().to_vec()).collect::<Vec<_>>());
            FrontierPoint {
                point: TradeoffPoint {
                    rate: pt.rate_needed,
                    exponent: pt.exponent,
                    privacy0: pt.equivocation0,
                    privacy1: lambda_min,
                    privacy_kind: PrivacyKind::Equivocation,
                    feasible: true,
                },
                channel,
            }
        })
        .collect();
    Ok(pareto_filter(points))
}
