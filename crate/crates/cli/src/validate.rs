use std::path::Path;

use htpl::probcore::{conditional_entropy, nats_to_bits, JointPmf, MASS_TOL};
use htpl::regions::HypothesisPair;

use crate::error::{CliError, CliResult};
use crate::instance::{pair_from_doc, raw_mass, read_json, TENSORS};
use crate::output::num;

/// Cells where `p > 0` and `q = 0`, as coordinate strings.
fn continuity_violations(p: &JointPmf, q: &JointPmf) -> Vec<String> {
    let sizes = p.sizes();
    let mut coords = vec![0usize; sizes.len()];
    let mut out = Vec::new();
    for (&a, &b) in p.probs().iter().zip(q.probs()) {
        if a > 0.0 && b == 0.0 {
            out.push(format!("({})", coords.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")));
        }
        for k in (0..sizes.len()).rev() {
            coords[k] += 1;
            if coords[k] < sizes[k] {
                break;
            }
            coords[k] = 0;
        }
    }
    out
}

fn continuity_line(name: &str, p: &JointPmf, q: &JointPmf) -> String {
    let bad = continuity_violations(p, q);
    let shown: Vec<&str> = bad.iter().take(8).map(String::as_str).collect();
    format!(
        "check=absolute_continuity laws={name} status={} violations={}{}",
        if bad.is_empty() { "pass" } else { "fail" },
        bad.len(),
        if shown.is_empty() { String::new() } else { format!(" cells={}", shown.join(",")) }
    )
}

/// Diagnostic lines for a parsed pair.
pub fn pair_report(pair: &HypothesisPair) -> CliResult<Vec<String>> {
    let mut lines = Vec::new();
    lines.push(continuity_line("p_suv<<q_suv", pair.p(), pair.q()));
    let (p_uv, q_uv) = (pair.p().marginal(&["U", "V"])?, pair.q().marginal(&["U", "V"])?);
    lines.push(continuity_line("p_uv<<q_uv", &p_uv, &q_uv));

    let same = pair.same_u_marginal();
    lines.push(format!(
        "check=same_u_marginal status=info value={same} sup_distance={} privacy1_given={}",
        num(pair.p_u().sup_distance(&pair.q_u())?),
        if same { "W,V" } else { "V" }
    ));

    let h_suv = conditional_entropy(pair.p(), &["S"], &["U", "V"])?;
    let h_sv = conditional_entropy(pair.p(), &["S"], &["V"])?;
    lines.push(format!(
        "check=side_information_assumption status={} h_s_given_uv_bits={} h_s_given_v_bits={}",
        if h_suv < h_sv - 1e-12 { "pass" } else { "fail" },
        num(nats_to_bits(h_suv)),
        num(nats_to_bits(h_sv))
    ));
    Ok(lines)
}

/// Prints one line per check. Fails only when the file cannot be loaded;
/// the other checks are reported, not enforced.
pub fn validate(path: &Path) -> CliResult<()> {
    let doc = read_json(path)?;
    for t in TENSORS {
        if let Ok(mass) = raw_mass(&doc, t) {
            let residual = (mass - 1.0).abs();
            println!(
                "check=normalization tensor={t} status={} sum={} residual={}",
                if residual <= MASS_TOL { "pass" } else { "fail" },
                num(mass),
                num(residual)
            );
        }
    }
    let pair = pair_from_doc(&doc)?;
    if let Some(d) = pair.distortion() {
        let (s, _, _) = pair.sizes();
        if d.source_size() != s {
            return Err(CliError::Parse(format!(
                "field `distortion`: table has {} rows but |S| = {s}",
                d.source_size()
            )));
        }
    }
    for line in pair_report(&pair)? {
        println!("{line}");
    }
    Ok(())
}
