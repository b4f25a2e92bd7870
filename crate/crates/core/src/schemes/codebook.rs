use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::probcore::{draw, Pmf, SequenceSample};

/// Default cap on the number of codewords.
pub const DEFAULT_CODEBOOK_CAP: usize = 1 << 24;

/// Random codebook with an optional binning map.
#[derive(Clone, Debug, Serialize)]
pub struct Codebook {
    n: usize,
    w_size: usize,
    /// Codeword `j` occupies `words[j * n .. (j + 1) * n]`.
    words: Vec<u8>,
    bins: Vec<u64>,
    num_bins: u64,
    identity_bins: bool,
    eta: f64,
}

/// Size and binning decisions for a codebook, before any randomness.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CodebookPlan {
    /// `ceil(exp(n (I + eta)))`.
    pub codewords: f64,
    /// Penalty `|U||W| ln(n + 1) / n`.
    pub type_penalty: f64,
    pub identity_bins: bool,
    /// Number of bins when binning (at least one).
    pub num_bins: f64,
}

impl CodebookPlan {
    pub fn new(mutual_info: f64, u_size: usize, w_size: usize, n: usize, eta: f64, rate: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("blocklength must be at least 1".into()));
        }
        if !(eta > 0.0) {
            return Err(Error::Domain {
                value: eta,
                domain: "(0, inf)",
            });
        }
        if !(rate >= 0.0) {
            return Err(Error::Domain {
                value: rate,
                domain: "[0, inf)",
            });
        }
        let nf = n as f64;
        let type_penalty = (u_size * w_size) as f64 * (nf + 1.0).ln() / nf;
        let codewords = (nf * (mutual_info + eta)).exp().ceil();
        let identity_bins = mutual_info + eta + type_penalty <= rate;
        let num_bins = if identity_bins {
            codewords
        } else {
            (nf * (rate - type_penalty)).exp().floor().max(1.0)
        };
        Ok(Self {
            codewords,
            type_penalty,
            identity_bins,
            num_bins,
        })
    }
}

impl Codebook {
    /// Draws `plan.codewords` i.i.d. codewords from `p_w` and, unless the
    /// plan says otherwise, a uniform bin for each.
    pub fn build(p_w: &Pmf, n: usize, plan: &CodebookPlan, eta: f64, seed: u64, cap: usize) -> Result<Self> {
        if plan.codewords > cap as f64 {
            return Err(Error::CodebookTooLarge {
                requested: plan.codewords,
                cap,
            });
        }
        if p_w.support_size() > u8::MAX as usize + 1 {
            return Err(Error::Unsupported("codeword alphabet above 256 letters".into()));
        }
        let m = plan.codewords as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let words: Vec<u8> = (0..m * n).map(|_| draw(p_w.probs(), &mut rng) as u8).collect();
        let (bins, num_bins) = if plan.identity_bins {
            ((0..m as u64).collect(), m as u64)
        } else {
            let k = plan.num_bins.min(u64::MAX as f64) as u64;
            ((0..m).map(|_| rng.gen_range(0..k)).collect(), k)
        };
        Ok(Self {
            n,
            w_size: p_w.support_size(),
            words,
            bins,
            num_bins,
            identity_bins: plan.identity_bins,
            eta,
        })
    }

    /// Codebook from explicit codewords and bins (used for hand-built cases).
    pub fn from_parts(w_size: usize, codewords: &[Vec<usize>], bins: Option<Vec<u64>>) -> Result<Self> {
        let n = codewords.first().map(Vec::len).unwrap_or(0);
        if n == 0 || codewords.iter().any(|c| c.len() != n) {
            return Err(Error::Config("codewords must share a positive length".into()));
        }
        if let Some(&s) = codewords.iter().flatten().find(|&&s| s >= w_size) {
            return Err(Error::SymbolOutOfRange { symbol: s, alphabet: w_size });
        }
        let m = codewords.len();
        let identity_bins = bins.is_none();
        let bins = bins.unwrap_or_else(|| (0..m as u64).collect());
        if bins.len() != m {
            return Err(Error::Config("one bin per codeword required".into()));
        }
        let num_bins = bins.iter().max().map(|b| b + 1).unwrap_or(1);
        Ok(Self {
            n,
            w_size,
            words: codewords.iter().flatten().map(|&s| s as u8).collect(),
            bins,
            num_bins,
            identity_bins,
            eta: 0.0,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn w_size(&self) -> usize {
        self.w_size
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn identity_bins(&self) -> bool {
        self.identity_bins
    }

    pub fn num_bins(&self) -> u64 {
        self.num_bins
    }

    pub fn bin(&self, j: usize) -> u64 {
        self.bins[j]
    }

    pub(crate) fn word(&self, j: usize) -> &[u8] {
        &self.words[j * self.n..(j + 1) * self.n]
    }

    pub fn codeword(&self, j: usize) -> SequenceSample {
        SequenceSample::new(self.w_size, self.word(j).iter().map(|&s| s as usize).collect())
            .expect("stored symbols are in range")
    }

    /// Indices in bin `b`, ascending.
    pub fn members(&self, b: u64) -> impl Iterator<Item = usize> + '_ {
        self.bins
            .iter()
            .enumerate()
            .filter(move |(_, &x)| x == b)
            .map(|(j, _)| j)
    }
}
