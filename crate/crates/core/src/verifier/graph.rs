use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::trace::{dpll_trace, verification_trace, ConfigKey, Phase, StepKind, VerifierConfig};
use super::{natural_order, Assignment, CnfFormula};
use crate::error::{Error, Result};

/// Which verifier runs contribute to a configuration graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphMode {
    /// One assignment under each listed clause order.
    Single {
        assignment: Assignment,
        orders: Vec<Vec<usize>>,
    },
    /// Every satisfying assignment, natural clause order.
    AllSatisfying,
    /// Every total assignment (accepting and rejecting runs), natural order.
    AllAssignments,
    /// The single DPLL run.
    Dpll,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConfigEdge {
    pub from: usize,
    pub to: usize,
    pub kind: StepKind,
}

/// Directed graph of verifier configurations; every edge advances time by
/// one step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigGraph {
    nodes: Vec<VerifierConfig>,
    edges: Vec<ConfigEdge>,
    time_bound: usize,
}

#[derive(Serialize, Deserialize)]
struct NodeJson {
    id: usize,
    phase: Phase,
    next_clause: Option<usize>,
    time: usize,
    assignment: Vec<Option<bool>>,
    checked: Vec<usize>,
    step: StepKind,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    schema: String,
    time_bound: usize,
    nodes: Vec<NodeJson>,
    edges: Vec<ConfigEdge>,
}

const GRAPH_SCHEMA: &str = "comphom.config-graph/1";

impl ConfigGraph {
    /// Deduplicates configurations by [`ConfigKey`] and edges by endpoints.
    pub fn from_traces<'a, I>(traces: I, time_bound: usize) -> Result<ConfigGraph>
    where
        I: IntoIterator<Item = &'a [VerifierConfig]>,
    {
        let mut index: HashMap<ConfigKey, usize> = HashMap::new();
        let mut nodes = Vec::new();
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut kinds: HashMap<(usize, usize), StepKind> = HashMap::new();
        for trace in traces {
            let mut prev: Option<usize> = None;
            for cfg in trace {
                let id = *index.entry(cfg.key()).or_insert_with(|| {
                    nodes.push(cfg.clone());
                    nodes.len() - 1
                });
                if let Some(p) = prev {
                    edges.insert((p, id));
                    kinds.entry((p, id)).or_insert(cfg.step);
                }
                prev = Some(id);
            }
        }
        let edges = edges
            .into_iter()
            .map(|(from, to)| ConfigEdge {
                from,
                to,
                kind: kinds[&(from, to)],
            })
            .collect();
        let g = ConfigGraph {
            nodes,
            edges,
            time_bound,
        };
        g.check()?;
        Ok(g)
    }

    fn check(&self) -> Result<()> {
        for e in &self.edges {
            let (Some(a), Some(b)) = (self.nodes.get(e.from), self.nodes.get(e.to)) else {
                return Err(Error::invalid(format!("edge {} -> {} leaves the node set", e.from, e.to)));
            };
            if b.time <= a.time {
                return Err(Error::invalid(format!(
                    "edge {} -> {} does not advance time",
                    e.from, e.to
                )));
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[VerifierConfig] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &VerifierConfig {
        &self.nodes[id]
    }

    pub fn edges(&self) -> &[ConfigEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn time_bound(&self) -> usize {
        self.time_bound
    }

    /// Sorted, distinct successor ids per node.
    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            out[e.from].push(e.to);
        }
        for s in &mut out {
            s.sort_unstable();
            s.dedup();
        }
        out
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut out = vec![0; self.nodes.len()];
        for e in &self.edges {
            out[e.to] += 1;
        }
        out
    }

    /// First node with two or more successors, with its successor count.
    pub fn first_branching(&self) -> Option<(usize, usize)> {
        self.successors()
            .iter()
            .enumerate()
            .find(|(_, s)| s.len() >= 2)
            .map(|(i, s)| (i, s.len()))
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = GraphJson {
            schema: GRAPH_SCHEMA.to_string(),
            time_bound: self.time_bound,
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .map(|(id, c)| NodeJson {
                    id,
                    phase: c.phase,
                    next_clause: c.next_clause,
                    time: c.time,
                    assignment: c.assignment.clone(),
                    checked: c.checked.clone(),
                    step: c.step,
                })
                .collect(),
            edges: self.edges.clone(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<ConfigGraph> {
        let doc: GraphJson = serde_json::from_str(text)?;
        if doc.schema != GRAPH_SCHEMA {
            return Err(Error::invalid(format!("unsupported graph schema `{}`", doc.schema)));
        }
        for (i, n) in doc.nodes.iter().enumerate() {
            if n.id != i {
                return Err(Error::invalid(format!("node ids must be 0..n in order; found {} at {i}", n.id)));
            }
        }
        let g = ConfigGraph {
            nodes: doc
                .nodes
                .into_iter()
                .map(|n| VerifierConfig {
                    assignment: n.assignment,
                    checked: n.checked,
                    next_clause: n.next_clause,
                    phase: n.phase,
                    step: n.step,
                    time: n.time,
                })
                .collect(),
            edges: doc.edges,
            time_bound: doc.time_bound,
        };
        g.check()?;
        Ok(g)
    }
}

fn check_bound(trace: &[VerifierConfig], bound: usize, name: impl FnOnce() -> String) -> Result<()> {
    let steps = trace.len().saturating_sub(1);
    if steps > bound {
        return Err(Error::TimeBoundExceeded {
            trace: name(),
            steps,
            bound,
        });
    }
    Ok(())
}

/// Union of the verifier runs selected by `mode`. `graph_var_cap` bounds the
/// brute-force enumeration behind the all-assignment modes.
pub fn build_config_graph(
    formula: &CnfFormula,
    mode: &GraphMode,
    time_bound: usize,
    graph_var_cap: usize,
) -> Result<ConfigGraph> {
    let m = formula.num_clauses();
    let mut traces: Vec<Vec<VerifierConfig>> = Vec::new();
    match mode {
        GraphMode::Single { assignment, orders } => {
            for order in orders {
                let t = verification_trace(formula, assignment, order)?;
                check_bound(&t, time_bound, || format!("assignment {assignment} order {order:?}"))?;
                traces.push(t);
            }
        }
        GraphMode::AllSatisfying | GraphMode::AllAssignments => {
            let all = Assignment::enumerate(formula.num_vars(), graph_var_cap)?;
            let order = natural_order(m);
            for a in all {
                if *mode == GraphMode::AllSatisfying && !formula.eval(&a)? {
                    continue;
                }
                let t = verification_trace(formula, &a, &order)?;
                check_bound(&t, time_bound, || format!("assignment {a}"))?;
                traces.push(t);
            }
        }
        GraphMode::Dpll => {
            let t = dpll_trace(formula);
            check_bound(&t, time_bound, || "dpll".to_string())?;
            traces.push(t);
        }
    }
    ConfigGraph::from_traces(traces.iter().map(Vec::as_slice), time_bound)
}
