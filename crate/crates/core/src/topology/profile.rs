use serde::{Deserialize, Serialize};

use crate::complex::HomologyGroup;
use crate::error::{Error, Result};
use crate::paths::{build_complex, build_trace_complex, PathModel, TraceShape};
use crate::verifier::{all_orders, build_config_graph, CnfFormula, GraphMode};
use crate::BuildOptions;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileModel {
    Step,
    Reachability,
    /// Subdivided trace complex of the first satisfying assignment over
    /// every clause order.
    Trace,
}

/// Largest degree with nonzero homology. When the top computed degree is
/// itself nonzero the true value is only bounded below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum HValue {
    Exact(usize),
    AtLeast(usize),
}

impl HValue {
    pub fn from_homology(h: &[HomologyGroup]) -> HValue {
        let top = h.len().saturating_sub(1);
        match h.iter().rposition(|g| !g.is_trivial()) {
            Some(n) if n == top => HValue::AtLeast(n),
            Some(n) => HValue::Exact(n),
            None => HValue::Exact(0),
        }
    }

    /// For a complex with nothing above the computed range.
    pub fn from_complete(h: &[HomologyGroup]) -> HValue {
        HValue::Exact(h.iter().rposition(|g| !g.is_trivial()).unwrap_or(0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityProfile {
    pub formula_id: String,
    pub model: ProfileModel,
    pub max_degree: usize,
    pub homology: Vec<HomologyGroup>,
    pub h_value: HValue,
}

/// Homology `H_0 … H_max` of a formula's complex. Path models are built one
/// degree higher than reported so that `H_max` sees its incoming boundary.
pub fn complexity_profile(
    formula: &CnfFormula,
    formula_id: &str,
    model: ProfileModel,
    max_degree: usize,
    opts: &BuildOptions,
) -> Result<ComplexityProfile> {
    let m = formula.num_clauses();
    let mut complete = false;
    let homology = match model {
        ProfileModel::Step | ProfileModel::Reachability => {
            let graph = build_config_graph(formula, &GraphMode::AllSatisfying, m + 1, opts.graph_var_cap)?;
            let pm = if model == ProfileModel::Step {
                PathModel::Step
            } else {
                PathModel::Reachability
            };
            let c = build_complex(&graph, max_degree + 1, pm, opts)?;
            let mut h = c.homology(opts.execution)?;
            h.truncate(max_degree + 1);
            h
        }
        ProfileModel::Trace => {
            let a = formula
                .first_satisfying(opts.var_cap)?
                .ok_or(Error::NoSatisfyingAssignment)?;
            let orders = all_orders(m, opts.generator_cap)?;
            let tc = build_trace_complex(formula, &a, &orders, TraceShape::Subdivided)?;
            complete = tc.complex.max_degree() <= max_degree;
            let mut h = tc.complex.homology(opts.execution)?;
            h.resize(max_degree + 1, HomologyGroup::default());
            h.truncate(max_degree + 1);
            h
        }
    };
    Ok(ComplexityProfile {
        formula_id: formula_id.to_string(),
        model,
        max_degree,
        h_value: if complete {
            HValue::from_complete(&homology)
        } else {
            HValue::from_homology(&homology)
        },
        homology,
    })
}
