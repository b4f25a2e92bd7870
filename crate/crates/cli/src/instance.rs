use std::fs;
use std::path::Path;

use htpl::probcore::{JointPmf, MASS_TOL};
use htpl::regions::{Distortion, HypothesisPair};
use serde_json::Value;

use crate::error::{CliError, CliResult};

pub const TENSORS: [&str; 2] = ["p_suv", "q_suv"];

pub fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Parse(format!(
            "{} line {} column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

/// Sum of the `probs` array of one tensor, before any validation.
pub fn raw_mass(doc: &Value, tensor: &str) -> CliResult<f64> {
    let probs = doc
        .get(tensor)
        .ok_or_else(|| CliError::Parse(format!("missing field `{tensor}`")))?
        .get("probs")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Parse(format!("field `{tensor}.probs` must be an array")))?;
    probs
        .iter()
        .enumerate()
        .map(|(i, p)| {
            p.as_f64()
                .ok_or_else(|| CliError::Parse(format!("field `{tensor}.probs[{i}]` is not a number")))
        })
        .sum()
}

fn field<T: serde::de::DeserializeOwned>(doc: &Value, name: &str) -> CliResult<Option<T>> {
    match doc.get(name) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => serde_json::from_value(v.clone())
            .map(Some)
            .map_err(|e| CliError::Parse(format!("field `{name}`: {e}"))),
    }
}

/// Parses an instance document into a hypothesis pair. Normalization is
/// checked first so the message names the offending tensor.
pub fn pair_from_doc(doc: &Value) -> CliResult<HypothesisPair> {
    if !doc.is_object() {
        return Err(CliError::Parse("instance must be a JSON object".into()));
    }
    for t in TENSORS {
        let mass = raw_mass(doc, t)?;
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(CliError::Normalization(format!(
                "{t} sums to {mass}, residual {:e}",
                (mass - 1.0).abs()
            )));
        }
    }
    let p: JointPmf = field(doc, "p_suv")?.expect("checked above");
    let q: JointPmf = field(doc, "q_suv")?.expect("checked above");
    let d: Option<Distortion> = field(doc, "distortion")?;
    if let Some(labels) = doc.get("labels") {
        if !labels.is_object() {
            return Err(CliError::Parse("field `labels` must be an object".into()));
        }
    }
    Ok(HypothesisPair::new(p, q, d)?)
}

pub fn load_pair(path: &Path) -> CliResult<HypothesisPair> {
    pair_from_doc(&read_json(path)?)
}
