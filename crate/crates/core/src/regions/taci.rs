//! Testing against conditional independence: detector sees `V = (Y, Z)`
//! and the alternate law makes `U` and `Y` independent given `Z`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::probcore::{
    conditional_entropy, conditional_mutual_information, entropy_of, Axis, Channel, JointPmf,
};

pub const SUYZ: [&str; 4] = ["S", "U", "Y", "Z"];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TaciPoint {
    /// `I_P(W;U|Z)`.
    pub rate_needed: f64,
    /// `I_P(W;Y|Z)`.
    pub exponent: f64,
    /// `H_P(S|W,Y,Z)`.
    pub equivocation0: f64,
}

/// Adds a trivial `Z` axis to a law on `S, U, Y`.
pub fn with_trivial_z(p_suy: &JointPmf) -> Result<JointPmf> {
    let p = p_suy.permuted(&["S", "U", "Y"])?;
    let mut axes = p.axes().to_vec();
    axes.push(Axis::new("Z", 1));
    JointPmf::new(axes, p.probs().to_vec())
}

pub fn taci_point(p_suyz: &JointPmf, w_channel: &Channel) -> Result<TaciPoint> {
    let p = p_suyz.permuted(&SUYZ)?;
    let j = p.attach_channel("U", w_channel, "W")?;
    Ok(TaciPoint {
        rate_needed: conditional_mutual_information(&j, &["W"], &["U"], &["Z"])?,
        exponent: conditional_mutual_information(&j, &["W"], &["Y"], &["Z"])?,
        equivocation0: conditional_entropy(&j, &["S"], &["W", "Y", "Z"])?,
    })
}

/// `P_SUYZ` together with the alternate conditional `Q_{S|UYZ}`; the
/// alternate law is `Q_{S|UYZ} P_{U|Z} P_{Y|Z} P_Z`.
#[derive(Clone, Debug)]
pub struct TaciInstance {
    pub p_suyz: JointPmf,
    /// Input index is the row-major rank of `(u, y, z)`.
    pub q_s_given_uyz: Channel,
}

impl TaciInstance {
    pub fn new(p_suyz: JointPmf, q_s_given_uyz: Channel) -> Result<Self> {
        let p_suyz = p_suyz.permuted(&SUYZ)?;
        let sz = p_suyz.sizes();
        if q_s_given_uyz.input_size() != sz[1] * sz[2] * sz[3] || q_s_given_uyz.output_size() != sz[0] {
            return Err(Error::ShapeMismatch(format!(
                "alternate channel is {}x{}, expected {}x{}",
                q_s_given_uyz.input_size(),
                q_s_given_uyz.output_size(),
                sz[1] * sz[2] * sz[3],
                sz[0]
            )));
        }
        Ok(Self {
            p_suyz,
            q_s_given_uyz,
        })
    }

    /// The alternate law on `S, U, Y, Z`.
    pub fn q_suyz(&self) -> Result<JointPmf> {
        let uz = self.p_suyz.marginal(&["Z", "U"])?;
        let y_given_z = self.p_suyz.conditional_channel("Y", &["Z"])?;
        let uzy = uz.attach_channel("Z", &y_given_z, "Y")?;
        let uyz = uzy.marginal(&["U", "Y", "Z"])?;
        // Attach S through the (u, y, z) rank.
        let merged = uyz.merge_axes(&["U", "Y", "Z"], "UYZ")?;
        let with_s = merged.attach_channel("UYZ", &self.q_s_given_uyz, "S")?;
        let sz = self.p_suyz.sizes();
        let axes = vec![
            Axis::new("U", sz[1]),
            Axis::new("Y", sz[2]),
            Axis::new("Z", sz[3]),
            Axis::new("S", sz[0]),
        ];
        JointPmf::new(axes, with_s.probs().to_vec())?.permuted(&SUYZ)
    }

    /// `H_Q(S|U,Y,Z)`, the equivocation with `U` in the detector's hands.
    pub fn lambda_min(&self) -> Result<f64> {
        conditional_entropy(&self.q_suyz()?, &["S"], &["U", "Y", "Z"])
    }
}

/// Direct evaluation of the three coordinates for many channels on one
/// instance, without building intermediate joint laws.
pub(crate) struct TaciEvaluator {
    s: usize,
    u: usize,
    y: usize,
    z: usize,
    p: Vec<f64>,
    p_u: Vec<f64>,
    p_uz: Vec<f64>,
    p_uyz: Vec<f64>,
    h_z: f64,
    h_yz: f64,
}

impl TaciEvaluator {
    pub fn new(p_suyz: &JointPmf) -> Result<Self> {
        let p = p_suyz.permuted(&SUYZ)?;
        let sz = p.sizes();
        let (s, u, y, z) = (sz[0], sz[1], sz[2], sz[3]);
        let p_uyz = p.marginal(&["U", "Y", "Z"])?.probs().to_vec();
        let p_uz = p.marginal(&["U", "Z"])?.probs().to_vec();
        let p_u = p.marginal(&["U"])?.probs().to_vec();
        let h_z = entropy_of(p.marginal(&["Z"])?.probs());
        let h_yz = entropy_of(p.marginal(&["Y", "Z"])?.probs());
        Ok(Self {
            s,
            u,
            y,
            z,
            p: p.probs().to_vec(),
            p_u,
            p_uz,
            p_uyz,
            h_z,
            h_yz,
        })
    }

    pub fn u_size(&self) -> usize {
        self.u
    }

    /// `rows[u][w]`.
    pub fn eval(&self, rows: &[Vec<f64>]) -> TaciPoint {
        let w = rows[0].len();
        let (s, u, y, z) = (self.s, self.u, self.y, self.z);
        let mut wz = vec![0.0; w * z];
        for a in 0..u {
            for c in 0..z {
                let m = self.p_uz[a * z + c];
                for b in 0..w {
                    wz[b * z + c] += m * rows[a][b];
                }
            }
        }
        let h_w_given_uz: f64 = (0..u).map(|a| self.p_u[a] * entropy_of(&rows[a])).sum();
        let mut wyz = vec![0.0; w * y * z];
        for a in 0..u {
            for yz in 0..y * z {
                let m = self.p_uyz[a * y * z + yz];
                if m == 0.0 {
                    continue;
                }
                for b in 0..w {
                    wyz[b * y * z + yz] += m * rows[a][b];
                }
            }
        }
        let mut swyz = vec![0.0; s * w * y * z];
        for si in 0..s {
            for a in 0..u {
                let base = (si * u + a) * y * z;
                for yz in 0..y * z {
                    let m = self.p[base + yz];
                    if m == 0.0 {
                        continue;
                    }
                    for b in 0..w {
                        swyz[(si * w + b) * y * z + yz] += m * rows[a][b];
                    }
                }
            }
        }
        let h_wz = entropy_of(&wz);
        let h_wyz = entropy_of(&wyz);
        let h_w_given_z = h_wz - self.h_z;
        TaciPoint {
            rate_needed: (h_w_given_z - h_w_given_uz).max(0.0),
            exponent: (h_w_given_z - (h_wyz - self.h_yz)).max(0.0),
            equivocation0: (entropy_of(&swyz) - h_wyz).max(0.0),
        }
    }
}
