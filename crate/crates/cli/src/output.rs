use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{json, Value};

use comphom_core::complex::Chain;
use comphom_core::conformance::{ClaimStatus, ConformanceReport};
use comphom_core::json::number;
use comphom_core::verifier::ConfigGraph;

use crate::{GraphArg, ShapeArg};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// Pretty JSON with a trailing newline. Key order is fixed by serde_json's
/// sorted maps, so equal inputs give identical bytes.
pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn graph_arg_name(g: GraphArg) -> &'static str {
    match g {
        GraphArg::AllSatisfying => "all-satisfying",
        GraphArg::AllAssignments => "all-assignments",
        GraphArg::Single => "single",
        GraphArg::Dpll => "dpll",
    }
}

pub fn shape_name(s: ShapeArg) -> &'static str {
    match s {
        ShapeArg::Plain => "plain",
        ShapeArg::Subdivided => "subdivided",
    }
}

pub fn chain_terms(chain: &Chain, labels: &[String]) -> Value {
    Value::Array(
        chain
            .terms()
            .map(|(i, c)| {
                json!({
                    "index": i,
                    "label": labels.get(i).cloned().unwrap_or_default(),
                    "coefficient": number(c),
                })
            })
            .collect(),
    )
}

fn s(v: &Value) -> String {
    match v {
        Value::String(x) => x.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

pub fn homology_table(doc: &Value) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "input   {}", s(&doc["input"]));
    let _ = writeln!(out, "model   {}", s(&doc["model"]));
    let _ = writeln!(out, "{:>6}  {:>10}  {:>6}  group", "degree", "generators", "betti");
    let sizes = doc["basis_sizes"].as_array().cloned().unwrap_or_default();
    for d in doc["degrees"].as_array().into_iter().flatten() {
        let k = d["degree"].as_u64().unwrap_or(0) as usize;
        let _ = writeln!(
            out,
            "{:>6}  {:>10}  {:>6}  {}",
            k,
            sizes.get(k).map(s).unwrap_or_default(),
            s(&d["betti"]),
            s(&d["group"])
        );
    }
    let h = &doc["h_value"];
    let _ = writeln!(out, "h       {} {}", s(&h["kind"]), s(&h["value"]));
    out
}

pub fn gamma_table(doc: &Value) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "assignment  {}", s(&doc["assignment"]));
    for t in doc["chain"].as_array().into_iter().flatten() {
        let _ = writeln!(out, "  {:>3} * {}", s(&t["coefficient"]), s(&t["label"]));
    }
    let _ = writeln!(out, "parity      {} ({})", s(&doc["parity"]), s(&doc["parity_variant"]));
    let _ = writeln!(out, "cycle       {}", doc["is_cycle"]);
    let _ = writeln!(out, "boundary    {}", doc["is_boundary"]);
    for a in doc["audit"].as_array().into_iter().flatten() {
        let _ = writeln!(
            out,
            "audit       {}: {} of {} triangles violate",
            s(&a["variant"]),
            a["violation_count"],
            a["triangles"]
        );
    }
    out
}

pub fn homotopy_table(doc: &Value) -> String {
    let mut out = String::new();
    let r = &doc["report"];
    let _ = writeln!(out, "model {}  augmented {}", s(&r["model"]), r["augmented"]);
    for d in r["degrees"].as_array().into_iter().flatten() {
        let _ = write!(
            out,
            "degree {}: {} generators, {} failures",
            d["degree"], d["generators"], d["failures"]
        );
        if let Some(ce) = d["counterexample"].as_object() {
            let terms: Vec<String> = ce["residual"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|t| format!("{}*{}", t["coefficient"], s(&t["generator"])))
                .collect();
            let _ = write!(out, "  e.g. {} -> {}", s(&ce["generator"]), terms.join(" + "));
        }
        out.push('\n');
    }
    let _ = writeln!(out, "holds {}", doc["all_hold"]);
    out
}

pub fn conformance_table(r: &ConformanceReport) -> String {
    let mut out = String::new();
    for c in &r.claims {
        let status = match c.status {
            ClaimStatus::Match => "match",
            ClaimStatus::Mismatch => "MISMATCH",
            ClaimStatus::NotApplicable => "n/a",
        };
        let _ = writeln!(
            out,
            "{:<34} {:<9} computed {}  stated {}",
            c.claim_id, status, c.computed_value, c.paper_value
        );
    }
    let failed: Vec<&str> = r.cross_checks.iter().filter(|c| !c.ok).map(|c| c.name.as_str()).collect();
    let _ = writeln!(
        out,
        "cross-checks: {} of {} hold{}",
        r.cross_checks.len() - failed.len(),
        r.cross_checks.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!(" (failing: {})", failed.join(", "))
        }
    );
    out
}

pub fn audit_table(doc: &Value) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} triangles", doc["triangles"]);
    for a in doc["audits"].as_array().into_iter().flatten() {
        let _ = writeln!(out, "{}: {} violations", s(&a["variant"]), a["violation_count"]);
        for v in a["violations"].as_array().into_iter().flatten() {
            let _ = writeln!(out, "  {}  parity {}", s(&v["label"]), s(&v["value"]));
        }
    }
    out
}

pub fn graph_table(g: &ConfigGraph) -> String {
    let mut out = String::new();
    for (i, c) in g.nodes().iter().enumerate() {
        let _ = writeln!(out, "c{i}: {}", c.label());
    }
    for e in g.edges() {
        let _ = writeln!(out, "c{} -> c{}", e.from, e.to);
    }
    out
}
