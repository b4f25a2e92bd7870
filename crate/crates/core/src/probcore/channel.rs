use serde::{Deserialize, Serialize};

use super::Pmf;
use crate::error::{Error, Result};

/// Row-stochastic conditional law: `rows[x]` is the output law given input `x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Pmf>", into = "Vec<Pmf>")]
pub struct Channel {
    rows: Vec<Pmf>,
}

impl Channel {
    pub fn new(rows: Vec<Pmf>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::ShapeMismatch("channel needs at least one row".into()));
        };
        let out = first.support_size();
        if let Some(bad) = rows.iter().find(|r| r.support_size() != out) {
            return Err(Error::SupportMismatch {
                left: out,
                right: bad.support_size(),
            });
        }
        Ok(Self { rows })
    }

    /// Rows given as raw vectors; each is validated as a pmf.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(rows.into_iter().map(Pmf::new).collect::<Result<_>>()?)
    }

    pub fn identity(size: usize) -> Self {
        Self {
            rows: (0..size).map(|i| Pmf::point_mass(size, i)).collect(),
        }
    }

    /// Deterministic map `x -> f[x]` onto `output_size` letters.
    pub fn deterministic(f: &[usize], output_size: usize) -> Result<Self> {
        let rows = f
            .iter()
            .map(|&y| {
                if y >= output_size {
                    Err(Error::SymbolOutOfRange {
                        symbol: y,
                        alphabet: output_size,
                    })
                } else {
                    Ok(Pmf::point_mass(output_size, y))
                }
            })
            .collect::<Result<_>>()?;
        Self::new(rows)
    }

    /// Every input mapped to the same output law.
    pub fn constant(input_size: usize, out: &Pmf) -> Self {
        Self {
            rows: vec![out.clone(); input_size],
        }
    }

    pub fn input_size(&self) -> usize {
        self.rows.len()
    }

    pub fn output_size(&self) -> usize {
        self.rows[0].support_size()
    }

    pub fn row(&self, x: usize) -> &Pmf {
        &self.rows[x]
    }

    pub fn rows(&self) -> &[Pmf] {
        &self.rows
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.rows[x].get(y)
    }

    /// Output law when the input is drawn from `input`.
    pub fn push_forward(&self, input: &Pmf) -> Result<Pmf> {
        if input.support_size() != self.input_size() {
            return Err(Error::SupportMismatch {
                left: input.support_size(),
                right: self.input_size(),
            });
        }
        let mut out = vec![0.0; self.output_size()];
        for (x, row) in self.rows.iter().enumerate() {
            for (y, o) in out.iter_mut().enumerate() {
                *o += input.get(x) * row.get(y);
            }
        }
        Pmf::normalized(out)
    }
}

impl TryFrom<Vec<Pmf>> for Channel {
    type Error = Error;

    fn try_from(rows: Vec<Pmf>) -> Result<Self> {
        Self::new(rows)
    }
}

impl From<Channel> for Vec<Pmf> {
    fn from(c: Channel) -> Self {
        c.rows
    }
}
