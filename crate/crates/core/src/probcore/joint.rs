use serde::{Deserialize, Serialize};

use super::{check_probs, Channel, Pmf, EQUALITY_TOL};
use crate::error::{Error, Result};

/// A labeled finite axis of a joint law.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub size: usize,
}

impl Axis {
    pub fn new(name: impl Into<String>, size: usize) -> Self {
        Self {
            name: name.into(),
            size,
        }
    }
}

#[derive(Deserialize)]
struct RawJoint {
    axes: Vec<Axis>,
    probs: Vec<f64>,
}

/// Dense probability tensor over named axes, stored row-major in the
/// declared axis order (last axis varies fastest).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawJoint")]
pub struct JointPmf {
    axes: Vec<Axis>,
    probs: Vec<f64>,
}

impl TryFrom<RawJoint> for JointPmf {
    type Error = Error;

    fn try_from(raw: RawJoint) -> Result<Self> {
        JointPmf::new(raw.axes, raw.probs)
    }
}

/// Splits a row-major linear index into per-axis coordinates.
pub(crate) fn unravel(mut index: usize, sizes: &[usize], out: &mut [usize]) {
    for k in (0..sizes.len()).rev() {
        out[k] = index % sizes[k];
        index /= sizes[k];
    }
}

pub(crate) fn ravel(coords: &[usize], sizes: &[usize]) -> usize {
    coords
        .iter()
        .zip(sizes)
        .fold(0, |acc, (&c, &s)| acc * s + c)
}

impl JointPmf {
    pub fn new(axes: Vec<Axis>, probs: Vec<f64>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::ShapeMismatch("joint law needs at least one axis".into()));
        }
        for (i, a) in axes.iter().enumerate() {
            if a.size == 0 {
                return Err(Error::ShapeMismatch(format!("axis `{}` has size 0", a.name)));
            }
            if axes[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::OverlappingAxes(a.name.clone()));
            }
        }
        let cells: usize = axes.iter().map(|a| a.size).product();
        if cells != probs.len() {
            return Err(Error::ShapeMismatch(format!(
                "axes describe {cells} cells but {} probabilities were given",
                probs.len()
            )));
        }
        check_probs(&probs, "joint pmf")?;
        Ok(Self { axes, probs })
    }

    /// Builds a joint law from nonnegative weights by normalizing them.
    pub fn from_weights(axes: Vec<Axis>, weights: Vec<f64>) -> Result<Self> {
        let total = super::neumaier_sum(weights.iter().copied());
        if !(total > 0.0) || weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDistribution(
                "weights must be nonnegative with positive mass".into(),
            ));
        }
        Self::new(axes, weights.into_iter().map(|w| w / total).collect())
    }

    pub fn from_pmf(name: impl Into<String>, pmf: &Pmf) -> Self {
        Self {
            axes: vec![Axis::new(name, pmf.support_size())],
            probs: pmf.probs().to_vec(),
        }
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.size).collect()
    }

    pub fn num_cells(&self) -> usize {
        self.probs.len()
    }

    pub fn axis_index(&self, name: &str) -> Result<usize> {
        self.axes
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::UnknownAxis(name.to_string()))
    }

    pub fn axis_size(&self, name: &str) -> Result<usize> {
        Ok(self.axes[self.axis_index(name)?].size)
    }

    pub fn has_axis(&self, name: &str) -> bool {
        self.axes.iter().any(|a| a.name == name)
    }

    pub fn same_shape(&self, other: &JointPmf) -> bool {
        self.axes == other.axes
    }

    /// Probability at the given coordinates (declared axis order).
    pub fn get(&self, coords: &[usize]) -> f64 {
        self.probs[ravel(coords, &self.sizes())]
    }

    /// Marginal law on `keep`, with axes in the order requested.
    pub fn marginal(&self, keep: &[&str]) -> Result<JointPmf> {
        let positions = keep
            .iter()
            .map(|n| self.axis_index(n))
            .collect::<Result<Vec<_>>>()?;
        for (i, p) in positions.iter().enumerate() {
            if positions[..i].contains(p) {
                return Err(Error::OverlappingAxes(keep[i].to_string()));
            }
        }
        if keep.is_empty() {
            return Err(Error::ShapeMismatch("marginal over no axes".into()));
        }
        let sizes = self.sizes();
        let out_sizes: Vec<usize> = positions.iter().map(|&p| sizes[p]).collect();
        let mut out = vec![0.0; out_sizes.iter().product()];
        let mut coords = vec![0; sizes.len()];
        let mut sub = vec![0; positions.len()];
        for (i, &p) in self.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            unravel(i, &sizes, &mut coords);
            for (k, &pos) in positions.iter().enumerate() {
                sub[k] = coords[pos];
            }
            out[ravel(&sub, &out_sizes)] += p;
        }
        Ok(JointPmf {
            axes: positions.iter().map(|&p| self.axes[p].clone()).collect(),
            probs: out,
        })
    }

    /// Marginal on a single axis as a plain pmf.
    pub fn marginal_pmf(&self, axis: &str) -> Result<Pmf> {
        let m = self.marginal(&[axis])?;
        Ok(Pmf::normalized(m.probs).expect("marginal of a valid law has unit mass"))
    }

    /// Reorders the axes.
    pub fn permuted(&self, order: &[&str]) -> Result<JointPmf> {
        if order.len() != self.axes.len() {
            return Err(Error::ShapeMismatch(
                "permutation must mention every axis exactly once".into(),
            ));
        }
        self.marginal(order)
    }

    /// Appends an axis `name` distributed as `channel(. | input_axis)`.
    pub fn attach_channel(&self, input_axis: &str, channel: &Channel, name: &str) -> Result<JointPmf> {
        let pos = self.axis_index(input_axis)?;
        if self.has_axis(name) {
            return Err(Error::OverlappingAxes(name.to_string()));
        }
        if channel.input_size() != self.axes[pos].size {
            return Err(Error::ShapeMismatch(format!(
                "channel has {} inputs but axis `{input_axis}` has size {}",
                channel.input_size(),
                self.axes[pos].size
            )));
        }
        let sizes = self.sizes();
        let out_size = channel.output_size();
        let mut probs = Vec::with_capacity(self.probs.len() * out_size);
        let mut coords = vec![0; sizes.len()];
        for (i, &p) in self.probs.iter().enumerate() {
            unravel(i, &sizes, &mut coords);
            let row = channel.row(coords[pos]);
            probs.extend(row.probs().iter().map(|w| p * w));
        }
        let mut axes = self.axes.clone();
        axes.push(Axis::new(name, out_size));
        Ok(JointPmf { axes, probs })
    }

    /// Collapses `merge` into one axis `name` (first listed varies slowest),
    /// placed after the remaining axes.
    pub fn merge_axes(&self, merge: &[&str], name: &str) -> Result<JointPmf> {
        let rest: Vec<&str> = self
            .axes
            .iter()
            .map(|a| a.name.as_str())
            .filter(|n| !merge.contains(n))
            .collect();
        if rest.contains(&name) {
            return Err(Error::OverlappingAxes(name.to_string()));
        }
        let order: Vec<&str> = rest.iter().copied().chain(merge.iter().copied()).collect();
        let permuted = self.permuted(&order)?;
        let merged_size: usize = permuted.axes[rest.len()..].iter().map(|a| a.size).product();
        let mut axes: Vec<Axis> = permuted.axes[..rest.len()].to_vec();
        axes.push(Axis::new(name, merged_size));
        Ok(JointPmf {
            axes,
            probs: permuted.probs,
        })
    }

    /// Renames an axis.
    pub fn renamed(mut self, from: &str, to: &str) -> Result<JointPmf> {
        if from != to && self.has_axis(to) {
            return Err(Error::OverlappingAxes(to.to_string()));
        }
        let pos = self.axis_index(from)?;
        self.axes[pos].name = to.to_string();
        Ok(self)
    }

    /// Conditional law of `target` given `given`, as a channel whose input
    /// index is the row-major rank of the `given` coordinates. Rows with zero
    /// conditioning mass are filled with the uniform law.
    pub fn conditional_channel(&self, target: &str, given: &[&str]) -> Result<Channel> {
        let mut order: Vec<&str> = given.to_vec();
        order.push(target);
        let m = self.marginal(&order)?;
        let t = m.axes.last().unwrap().size;
        let rows = m
            .probs
            .chunks(t)
            .map(|chunk| {
                let mass: f64 = chunk.iter().sum();
                if mass > 0.0 {
                    Pmf::normalized(chunk.to_vec()).expect("positive mass")
                } else {
                    Pmf::uniform(t)
                }
            })
            .collect();
        Channel::new(rows)
    }

    pub fn sup_distance(&self, other: &JointPmf) -> Result<f64> {
        if !self.same_shape(other) {
            return Err(Error::ShapeMismatch("joint laws over different axes".into()));
        }
        Ok(self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &JointPmf) -> bool {
        self.sup_distance(other)
            .map(|d| d <= EQUALITY_TOL)
            .unwrap_or(false)
    }

    /// Joint law of independent components, axes in argument order.
    pub fn product(parts: &[(&str, &Pmf)]) -> Result<JointPmf> {
        let mut axes = Vec::new();
        let mut probs = vec![1.0];
        for (name, p) in parts {
            axes.push(Axis::new(*name, p.support_size()));
            probs = probs
                .iter()
                .flat_map(|a| p.probs().iter().map(move |b| a * b))
                .collect();
        }
        JointPmf::new(axes, probs)
    }

    pub(crate) fn from_parts_unchecked(axes: Vec<Axis>, probs: Vec<f64>) -> JointPmf {
        JointPmf { axes, probs }
    }
}
