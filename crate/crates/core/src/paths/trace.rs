use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Generator, PathBasis, TraceDecoratedEdge, TraceTriangle};
use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::verifier::{verification_trace, Assignment, CnfFormula, ConfigKey, VerifierConfig};
use crate::Execution;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceShape {
    /// Initial and accepting configurations joined by one edge per order.
    #[default]
    Plain,
    /// Additionally splits every order at each intermediate configuration:
    /// the two partial edges and the triangle they bound with the full edge.
    Subdivided,
}

/// A trace-decorated complex together with the objects behind its bases.
#[derive(Clone, Debug)]
pub struct TraceComplex {
    pub complex: ChainComplex,
    pub configs: Vec<VerifierConfig>,
    pub edges: Vec<TraceDecoratedEdge>,
    pub triangles: Vec<TraceTriangle>,
    pub orders: Vec<Vec<usize>>,
    pub shape: TraceShape,
}

impl TraceComplex {
    pub fn initial(&self) -> usize {
        0
    }

    pub fn terminal(&self) -> usize {
        self.configs.len() - 1
    }

    /// Index of the full-length edge carrying `order`.
    pub fn edge_for_order(&self, order: &[usize]) -> Option<usize> {
        let (i, t) = (self.initial(), self.terminal());
        self.edges
            .iter()
            .position(|e| e.from == i && e.to == t && e.trace == order)
    }
}

/// Trace complex of one satisfying assignment under the given clause orders.
pub fn build_trace_complex(
    formula: &CnfFormula,
    assignment: &Assignment,
    orders: &[Vec<usize>],
    shape: TraceShape,
) -> Result<TraceComplex> {
    if !formula.eval(assignment)? {
        return Err(Error::NotSatisfying);
    }
    if orders.is_empty() {
        return Err(Error::invalid("trace complex needs at least one clause order"));
    }
    let m = formula.num_clauses();
    let traces: Vec<Vec<VerifierConfig>> = orders
        .iter()
        .map(|o| verification_trace(formula, assignment, o))
        .collect::<Result<_>>()?;

    let mut configs: BTreeMap<ConfigKey, VerifierConfig> = BTreeMap::new();
    for t in &traces {
        let first = &t[0];
        let last = t.last().expect("traces are nonempty");
        configs.entry(first.key()).or_insert_with(|| first.clone());
        configs.entry(last.key()).or_insert_with(|| last.clone());
        if shape == TraceShape::Subdivided {
            for c in t.iter().take(m).skip(1) {
                configs.entry(c.key()).or_insert_with(|| c.clone());
            }
        }
    }
    let keys: Vec<ConfigKey> = configs.keys().cloned().collect();
    let id = |c: &VerifierConfig| keys.binary_search(&c.key()).expect("config registered");
    let configs: Vec<VerifierConfig> = configs.into_values().collect();

    let mut edges = std::collections::BTreeSet::new();
    let mut triangles = std::collections::BTreeSet::new();
    for (order, t) in orders.iter().zip(&traces) {
        let init = id(&t[0]);
        let term = id(t.last().unwrap());
        edges.insert(TraceDecoratedEdge {
            from: init,
            to: term,
            trace: order.clone(),
        });
        if shape == TraceShape::Subdivided {
            // t[k] is the configuration after checking order[..k]
            for k in 1..m {
                let mid = id(&t[k]);
                let tri = TraceTriangle {
                    configs: [init, mid, term],
                    first: order[..k].to_vec(),
                    second: order[k..].to_vec(),
                };
                edges.insert(tri.edge_01());
                edges.insert(tri.edge_12());
                triangles.insert(tri);
            }
        }
    }
    let edges: Vec<TraceDecoratedEdge> = edges.into_iter().collect();
    let triangles: Vec<TraceTriangle> = triangles.into_iter().collect();

    let b0 = PathBasis {
        degree: 0,
        generators: (0..configs.len()).map(Generator::vertex).collect(),
    };
    let b1 = PathBasis {
        degree: 1,
        generators: edges.iter().cloned().map(Generator::Edge).collect(),
    };
    let b2 = PathBasis {
        degree: 2,
        generators: triangles.iter().cloned().map(Generator::Triangle).collect(),
    };
    let labels = vec![
        configs
            .iter()
            .enumerate()
            .map(|(i, c)| format!("c{i}: {}", c.label()))
            .collect(),
        edges.iter().map(TraceDecoratedEdge::label).collect(),
        triangles.iter().map(TraceTriangle::label).collect(),
    ];
    let exec = Execution::Sequential;
    let d1 = super::boundary_matrix(&b1, &b0, exec);
    let d2 = super::boundary_matrix(&b2, &b1, exec);
    let complex = ChainComplex::new(labels, vec![d1, d2])?;
    Ok(TraceComplex {
        complex,
        configs,
        edges,
        triangles,
        orders: orders.to_vec(),
        shape,
    })
}
