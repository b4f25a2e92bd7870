use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::probcore::{JointPmf, Pmf, EQUALITY_TOL};

/// Bounded additive distortion `d(s, s_hat)` with bound `d_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDistortion")]
pub struct Distortion {
    table: Vec<Vec<f64>>,
    d_max: f64,
}

#[derive(Deserialize)]
struct RawDistortion {
    table: Vec<Vec<f64>>,
    d_max: f64,
}

impl TryFrom<RawDistortion> for Distortion {
    type Error = Error;
    fn try_from(r: RawDistortion) -> Result<Self> {
        Distortion::new(r.table, r.d_max)
    }
}

impl Distortion {
    pub fn new(table: Vec<Vec<f64>>, d_max: f64) -> Result<Self> {
        let cols = table.first().map(Vec::len).unwrap_or(0);
        if table.is_empty() || cols == 0 || table.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("distortion table must be a nonempty matrix".into()));
        }
        if !(d_max.is_finite() && d_max >= 0.0) {
            return Err(Error::Domain {
                value: d_max,
                domain: "[0, inf)",
            });
        }
        for row in &table {
            for &d in row {
                if !(0.0..=d_max).contains(&d) {
                    return Err(Error::Domain {
                        value: d,
                        domain: "[0, d_max]",
                    });
                }
            }
        }
        Ok(Self { table, d_max })
    }

    /// Hamming distortion on `size` letters.
    pub fn hamming(size: usize) -> Self {
        let table = (0..size)
            .map(|s| (0..size).map(|t| if s == t { 0.0 } else { 1.0 }).collect())
            .collect();
        Self { table, d_max: 1.0 }
    }

    pub fn source_size(&self) -> usize {
        self.table.len()
    }

    pub fn reconstruction_size(&self) -> usize {
        self.table[0].len()
    }

    pub fn get(&self, s: usize, s_hat: usize) -> f64 {
        self.table[s][s_hat]
    }

    pub fn d_max(&self) -> f64 {
        self.d_max
    }

    pub fn table(&self) -> &[Vec<f64>] {
        &self.table
    }
}

/// Null and alternate laws on axes `S`, `U`, `V` (in that order), plus an
/// optional distortion measure on `S`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisPair {
    p_suv: JointPmf,
    q_suv: JointPmf,
    distortion: Option<Distortion>,
}

pub const SUV: [&str; 3] = ["S", "U", "V"];

impl HypothesisPair {
    /// Axes may come in any order; they are rearranged to `S, U, V`.
    pub fn new(p_suv: JointPmf, q_suv: JointPmf, distortion: Option<Distortion>) -> Result<Self> {
        let p_suv = p_suv.permuted(&SUV)?;
        let q_suv = q_suv.permuted(&SUV)?;
        if !p_suv.same_shape(&q_suv) {
            return Err(Error::ShapeMismatch(format!(
                "null law has shape {:?}, alternate has {:?}",
                p_suv.sizes(),
                q_suv.sizes()
            )));
        }
        if let Some(d) = &distortion {
            if d.source_size() != p_suv.sizes()[0] {
                return Err(Error::ShapeMismatch(format!(
                    "distortion table has {} rows but |S| = {}",
                    d.source_size(),
                    p_suv.sizes()[0]
                )));
            }
        }
        Ok(Self {
            p_suv,
            q_suv,
            distortion,
        })
    }

    /// Builds a pair from laws on `S, U, Y, Z`, merging `(Y, Z)` into `V`
    /// with `Y` varying slowest.
    pub fn from_taci(p_suyz: &JointPmf, q_suyz: &JointPmf, distortion: Option<Distortion>) -> Result<Self> {
        let merge = |j: &JointPmf| j.merge_axes(&["Y", "Z"], "V");
        Self::new(merge(p_suyz)?, merge(q_suyz)?, distortion)
    }

    pub fn p(&self) -> &JointPmf {
        &self.p_suv
    }

    pub fn q(&self) -> &JointPmf {
        &self.q_suv
    }

    /// `(hypothesis 0 law, hypothesis 1 law)` selector.
    pub fn law(&self, hypothesis: u8) -> &JointPmf {
        if hypothesis == 0 {
            &self.p_suv
        } else {
            &self.q_suv
        }
    }

    pub fn distortion(&self) -> Option<&Distortion> {
        self.distortion.as_ref()
    }

    pub fn distortion_or_err(&self) -> Result<&Distortion> {
        self.distortion
            .as_ref()
            .ok_or_else(|| Error::Config("instance has no distortion table".into()))
    }

    pub fn sizes(&self) -> (usize, usize, usize) {
        let s = self.p_suv.sizes();
        (s[0], s[1], s[2])
    }

    pub fn p_u(&self) -> Pmf {
        self.p_suv.marginal_pmf("U").expect("axis U present")
    }

    pub fn q_u(&self) -> Pmf {
        self.q_suv.marginal_pmf("U").expect("axis U present")
    }

    /// The indicator `1(P_U = Q_U)` at sup-norm tolerance [`EQUALITY_TOL`].
    pub fn same_u_marginal(&self) -> bool {
        self.p_u()
            .sup_distance(&self.q_u())
            .map(|d| d <= EQUALITY_TOL)
            .unwrap_or(false)
    }
}

/// On-disk instance: the pair plus free-form labels.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub p_suv: JointPmf,
    pub q_suv: JointPmf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distortion: Option<Distortion>,
    #[serde(default)]
    pub labels: serde_json::Map<String, serde_json::Value>,
}

impl InstanceFile {
    pub fn into_pair(self) -> Result<HypothesisPair> {
        HypothesisPair::new(self.p_suv, self.q_suv, self.distortion)
    }

    pub fn from_pair(pair: &HypothesisPair) -> Self {
        Self {
            p_suv: pair.p_suv.clone(),
            q_suv: pair.q_suv.clone(),
            distortion: pair.distortion.clone(),
            labels: Default::default(),
        }
    }
}

/// Which privacy measure a [`TradeoffPoint`] carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrivacyKind {
    Equivocation,
    Distortion,
}

/// `(R, kappa, privacy0, privacy1)`, rates and equivocations in nats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TradeoffPoint {
    pub rate: f64,
    pub exponent: f64,
    pub privacy0: f64,
    pub privacy1: f64,
    pub privacy_kind: PrivacyKind,
    /// False when the rate is below what the auxiliary channel needs.
    pub feasible: bool,
}
