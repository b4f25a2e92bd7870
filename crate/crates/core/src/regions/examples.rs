//! Two worked instances with known answers.

use serde::Serialize;

use super::pair::HypothesisPair;
use super::taci::{with_trivial_z, TaciInstance};
use crate::error::{Error, Result};
use crate::probcore::{binary_entropy, star, Axis, Channel, JointPmf};

/// `(R, kappa, Lambda0)` in bits on the binary repetition family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Example1Point {
    pub rate_bits: f64,
    pub kappa_bits: f64,
    pub lambda0_bits: f64,
}

/// Closed form for the binary family: `U` uniform, `S = U` through a
/// BSC(q), `Y = S` through a BSC(p) under the null and pure noise under
/// the alternate, with `W = U` through a BSC(r).
pub fn example1_closed_form(p: f64, q: f64, r: f64) -> Result<Example1Point> {
    if !(0.0..=0.5).contains(&r) {
        return Err(Error::Domain {
            value: r,
            domain: "[0, 0.5]",
        });
    }
    let qr = star(q, r)?;
    Ok(Example1Point {
        rate_bits: 1.0 - binary_entropy(r)?,
        kappa_bits: 1.0 - binary_entropy(star(star(r, q)?, p)?)?,
        lambda0_bits: binary_entropy(p)? + binary_entropy(qr)? - binary_entropy(star(p, qr)?)?,
    })
}

fn bsc(e: f64) -> Result<Channel> {
    Channel::from_rows(vec![vec![1.0 - e, e], vec![e, 1.0 - e]])
}

/// The binary family as a TACI instance (`Z` trivial).
pub fn example1_instance(p: f64, q: f64) -> Result<TaciInstance> {
    for (v, _) in [(p, "p"), (q, "q")] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain {
                value: v,
                domain: "[0, 1]",
            });
        }
    }
    let s_u = bsc(q)?;
    let y_s = bsc(p)?;
    let mut w = Vec::with_capacity(8);
    for s in 0..2 {
        for u in 0..2 {
            for y in 0..2 {
                w.push(0.5 * s_u.get(u, s) * y_s.get(s, y));
            }
        }
    }
    let p_suy = JointPmf::new(
        vec![Axis::new("S", 2), Axis::new("U", 2), Axis::new("Y", 2)],
        w,
    )?;
    // Alternate: S depends on U only.
    let rows: Vec<Vec<f64>> = (0..2)
        .flat_map(|u| (0..2).map(move |_y| u))
        .map(|u| vec![s_u.get(u, 0), s_u.get(u, 1)])
        .collect();
    TaciInstance::new(with_trivial_z(&p_suy)?, Channel::from_rows(rows)?)
}

/// The binary family as a hypothesis pair on `S, U, V = Y`.
pub fn example1_pair(p: f64, q: f64) -> Result<HypothesisPair> {
    let inst = example1_instance(p, q)?;
    let q_suyz = inst.q_suyz()?;
    HypothesisPair::from_taci(&inst.p_suyz, &q_suyz, None)
}

/// Four-letter `S`, `U`, binary `Y = U mod 2` under the null, `Y`
/// independent under the alternate.
pub fn example2_laws() -> Result<(JointPmf, JointPmf)> {
    let block = |s: usize, u: usize| (s / 2 == u / 2) as u8 as f64 * 0.125;
    let mut p = Vec::with_capacity(32);
    let mut q = Vec::with_capacity(32);
    for s in 0..4 {
        for u in 0..4 {
            for y in 0..2 {
                let psu = block(s, u);
                p.push(if u % 2 == y { psu } else { 0.0 });
                q.push(psu * 0.5);
            }
        }
    }
    let axes = vec![Axis::new("S", 4), Axis::new("U", 4), Axis::new("Y", 2)];
    Ok((JointPmf::new(axes.clone(), p)?, JointPmf::new(axes, q)?))
}

pub fn example2_pair() -> Result<HypothesisPair> {
    let (p, q) = example2_laws()?;
    HypothesisPair::new(p.renamed("Y", "V")?, q.renamed("Y", "V")?, None)
}

/// `W = U mod 2`.
pub fn example2_channel() -> Channel {
    Channel::deterministic(&[0, 1, 0, 1], 2).expect("valid map")
}
