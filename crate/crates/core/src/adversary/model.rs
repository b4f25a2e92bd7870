use crate::error::{Error, Result};
use crate::probcore::SequenceSample;
use crate::schemes::{Message, MessageLaw};

/// Row-sum tolerance of an explicit message law.
pub const ROW_TOL: f64 = 1e-10;

/// Message law given as one row per `u^n`, indexed lexicographically.
#[derive(Clone, Debug)]
pub struct TableModel {
    n: usize,
    u_size: usize,
    rows: Vec<Vec<(Message, f64)>>,
}

impl TableModel {
    pub fn new(n: usize, u_size: usize, rows: Vec<Vec<(Message, f64)>>) -> Result<Self> {
        let expected = (u_size as f64).powi(n as i32);
        if n == 0 || rows.len() as f64 != expected {
            return Err(Error::ShapeMismatch(format!(
                "expected {expected} rows for n = {n}, |U| = {u_size}, got {}",
                rows.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            let total: f64 = row.iter().map(|(_, p)| *p).sum();
            if row.iter().any(|(_, p)| !(*p >= 0.0)) || (total - 1.0).abs() > ROW_TOL {
                return Err(Error::InvalidDistribution(format!("message law row {i} sums to {total}")));
            }
        }
        Ok(Self { n, u_size, rows })
    }

    /// Tabulates any other law.
    pub fn from_law(law: &dyn MessageLaw, u_size: usize) -> Result<Self> {
        let n = law.blocklength();
        let rows = (0..u_size.pow(n as u32))
            .map(|i| law.message_law(&SequenceSample::from_index(u_size, n, i)))
            .collect::<Result<_>>()?;
        Self::new(n, u_size, rows)
    }

    /// Deterministic `m = f(u^n)`.
    pub fn deterministic(n: usize, u_size: usize, f: impl Fn(&SequenceSample) -> Message) -> Result<Self> {
        let rows = (0..u_size.pow(n as u32))
            .map(|i| vec![(f(&SequenceSample::from_index(u_size, n, i)), 1.0)])
            .collect();
        Self::new(n, u_size, rows)
    }

    /// The same message for every `u^n`.
    pub fn constant(n: usize, u_size: usize) -> Result<Self> {
        Self::deterministic(n, u_size, |_| Message::index(0))
    }

    /// `M = U^n`.
    pub fn full_disclosure(n: usize, u_size: usize) -> Result<Self> {
        Self::deterministic(n, u_size, |u| Message::index(u.index() as u64))
    }

    pub fn u_size(&self) -> usize {
        self.u_size
    }
}

impl MessageLaw for TableModel {
    fn blocklength(&self) -> usize {
        self.n
    }

    fn message_law(&self, u: &SequenceSample) -> Result<Vec<(Message, f64)>> {
        if u.len() != self.n || u.alphabet() != self.u_size {
            return Err(Error::LengthMismatch(u.len(), self.n));
        }
        Ok(self.rows[u.index()].clone())
    }
}

/// Letter-by-letter disclosure `m_i = f(u_i)`.
#[derive(Clone, Debug)]
pub struct SymbolwiseModel {
    pub n: usize,
    pub map: Vec<usize>,
    pub out_size: usize,
}

impl SymbolwiseModel {
    pub fn new(n: usize, map: Vec<usize>, out_size: usize) -> Result<Self> {
        if let Some(&x) = map.iter().find(|&&x| x >= out_size) {
            return Err(Error::SymbolOutOfRange {
                symbol: x,
                alphabet: out_size,
            });
        }
        Ok(Self { n, map, out_size })
    }
}

impl MessageLaw for SymbolwiseModel {
    fn blocklength(&self) -> usize {
        self.n
    }

    fn message_law(&self, u: &SequenceSample) -> Result<Vec<(Message, f64)>> {
        if u.len() != self.n {
            return Err(Error::LengthMismatch(u.len(), self.n));
        }
        let idx = u
            .symbols()
            .iter()
            .fold(0u64, |acc, &x| acc * self.out_size as u64 + self.map[x] as u64);
        Ok(vec![(Message::index(idx), 1.0)])
    }
}
