use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::paths::{enumerate_paths, ComputationPath, Generator, PathBasis, PathModel};
use crate::verifier::{ConfigGraph, Phase};
use crate::BuildOptions;

/// One nonzero coordinate of a residual chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualTerm {
    pub generator: String,
    #[serde(with = "crate::json::big")]
    pub coefficient: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub generator: String,
    pub residual: Vec<ResidualTerm>,
}

/// `(d∘s + s∘d − id)` evaluated on every generator of one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub degree: usize,
    pub generators: usize,
    pub failures: usize,
    pub holds: bool,
    /// First failing generator in basis order; present iff `holds` is false.
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyReport {
    pub model: PathModel,
    pub max_degree: usize,
    pub augmented: bool,
    pub degrees: Vec<DegreeReport>,
}

impl HomotopyReport {
    pub fn all_hold(&self) -> bool {
        self.degrees.iter().all(|d| d.holds)
    }
}

type Sparse = BTreeMap<usize, BigInt>;

fn add(acc: &mut Sparse, i: usize, v: BigInt) {
    let slot = acc.entry(i).or_insert_with(BigInt::zero);
    *slot += v;
    if slot.is_zero() {
        acc.remove(&i);
    }
}

struct Operators<'a> {
    bases: &'a [PathBasis],
    index: Vec<HashMap<&'a Generator, usize>>,
    successor: Vec<Option<usize>>,
    base_point: Option<usize>,
    augmented: bool,
}

impl Operators<'_> {
    fn path(&self, n: usize, i: usize) -> &ComputationPath {
        match &self.bases[n].generators[i] {
            Generator::Path(p) => p,
            _ => unreachable!("path models only hold paths"),
        }
    }

    /// `d_n` on a chain of degree `n ≥ 1`; faces outside the basis drop out.
    fn d(&self, n: usize, chain: &Sparse) -> Sparse {
        let mut out = Sparse::new();
        for (&i, c) in chain {
            for (s, f) in self.bases[n].generators[i].faces() {
                if let Some(&r) = self.index[n - 1].get(&f) {
                    add(&mut out, r, c * s);
                }
            }
        }
        out
    }

    /// `s_n : C_n → C_{n+1}`. A path whose last configuration is terminal
    /// is complete and maps to zero; otherwise it is extended by the unique
    /// successor with sign `(−1)^n`.
    fn s(&self, n: usize, chain: &Sparse) -> Sparse {
        let mut out = Sparse::new();
        let sign = if n % 2 == 0 { 1 } else { -1 };
        for (&i, c) in chain {
            let p = self.path(n, i);
            let Some(next) = self.successor[p.last()] else {
                continue;
            };
            let ext = Generator::Path(p.extended(next));
            if let Some(&r) = self.index[n + 1].get(&ext) {
                add(&mut out, r, c * sign);
            }
        }
        out
    }

    /// `(d s + s d − id)(g)` for generator `i` of degree `n`.
    fn residual(&self, n: usize, i: usize) -> Sparse {
        let g: Sparse = [(i, BigInt::from(1))].into();
        let mut r = self.d(n + 1, &self.s(n, &g));
        if n > 0 {
            for (k, v) in self.s(n - 1, &self.d(n, &g)) {
                add(&mut r, k, v);
            }
        } else if self.augmented {
            // s_{-1}(ε(g)) with ε(g) = 1
            if let Some(b) = self.base_point {
                add(&mut r, b, BigInt::from(1));
            }
        }
        add(&mut r, i, BigInt::from(-1));
        r
    }
}

/// Checks `d∘s + s∘d = id` on the path complex of a deterministic graph.
///
/// With `augmented`, degree 0 uses the augmentation `ε(c) = 1` and
/// `s_{−1}(1)` = the lowest-numbered initial configuration; otherwise
/// `s_{−1} = 0`.
pub fn chain_homotopy_check(
    graph: &ConfigGraph,
    model: PathModel,
    max_degree: usize,
    augmented: bool,
    opts: &BuildOptions,
) -> Result<HomotopyReport> {
    let succ = graph.successors();
    if let Some((node, successors)) = graph.first_branching() {
        return Err(Error::Nondeterministic { node, successors });
    }
    let successor: Vec<Option<usize>> = succ.iter().map(|s| s.first().copied()).collect();
    let bases = enumerate_paths(graph, max_degree + 1, model, opts)?;
    let index = bases.iter().map(PathBasis::index).collect();
    let base_point = graph
        .nodes()
        .iter()
        .position(|c| c.phase == Phase::Initial)
        .or_else(|| (!graph.is_empty()).then_some(0));
    let ops = Operators {
        bases: &bases,
        index,
        successor,
        base_point,
        augmented,
    };

    let degrees = (0..=max_degree)
        .map(|n| {
            let count = bases[n].len();
            let residuals: Vec<Sparse> = opts.execution.map_range(0..count, |i| ops.residual(n, i));
            let failures = residuals.iter().filter(|r| !r.is_empty()).count();
            let counterexample = residuals.iter().position(|r| !r.is_empty()).map(|i| Counterexample {
                generator: bases[n].generators[i].label(),
                residual: residuals[i]
                    .iter()
                    .map(|(&k, v)| ResidualTerm {
                        generator: bases[n].generators[k].label(),
                        coefficient: v.clone(),
                    })
                    .collect(),
            });
            DegreeReport {
                degree: n,
                generators: count,
                failures,
                holds: failures == 0,
                counterexample,
            }
        })
        .collect();
    Ok(HomotopyReport {
        model,
        max_degree,
        augmented,
        degrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::{build_config_graph, natural_order, reverse_order, CnfFormula, GraphMode, StepKind, VerifierConfig};

    fn node(time: usize, phase: Phase) -> VerifierConfig {
        VerifierConfig {
            assignment: vec![],
            checked: vec![],
            next_clause: None,
            phase,
            step: StepKind::None,
            time,
        }
    }

    #[test]
    fn single_node_passes() {
        let g = ConfigGraph::from_traces([[node(0, Phase::Initial)].as_slice()], 1).unwrap();
        for model in [PathModel::Step, PathModel::Reachability] {
            let r = chain_homotopy_check(&g, model, 2, true, &BuildOptions::default()).unwrap();
            assert!(r.all_hold());
            assert_eq!(r.degrees[0].generators, 1);
            assert_eq!(r.degrees[1].generators, 0);
            // without augmentation the vertex maps to −c0
            let r = chain_homotopy_check(&g, model, 0, false, &BuildOptions::default()).unwrap();
            let ce = r.degrees[0].counterexample.as_ref().unwrap();
            assert_eq!(ce.residual[0].coefficient, BigInt::from(-1));
        }
    }

    #[test]
    fn linear_chain_residuals_by_hand() {
        let t = [node(0, Phase::Initial), node(1, Phase::Checking), node(2, Phase::Accepting)];
        let g = ConfigGraph::from_traces([t.as_slice()], 5).unwrap();
        let r = chain_homotopy_check(&g, PathModel::Step, 0, true, &BuildOptions::default()).unwrap();
        let d0 = &r.degrees[0];
        // a: d(a,b) + a − a = b − a
        // b: d(b,c) + a − b = a − 2b + c
        // c: terminal, s(c) = 0, so a − c
        assert_eq!(d0.generators, 3);
        assert_eq!(d0.failures, 3);
        let ce = d0.counterexample.as_ref().unwrap();
        let coeffs: Vec<i64> = ce.residual.iter().map(|t| i64::try_from(&t.coefficient).unwrap()).collect();
        assert_eq!(coeffs, vec![-1, 1]);
    }

    #[test]
    fn refuses_branching_graphs() {
        let f = CnfFormula::new(2, vec![vec![1, 2], vec![-1, 2], vec![1, -2]]).unwrap();
        let mode = GraphMode::Single {
            assignment: "TT".parse().unwrap(),
            orders: vec![natural_order(3), reverse_order(3)],
        };
        let g = build_config_graph(&f, &mode, 10, 12).unwrap();
        let err = chain_homotopy_check(&g, PathModel::Reachability, 2, true, &BuildOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Nondeterministic { node: 0, successors: 2 }));
    }

    #[test]
    fn clause_check_trace_report_is_complete() {
        let f = CnfFormula::new(2, vec![vec![1, 2], vec![-1, 2], vec![1, -2]]).unwrap();
        let mode = GraphMode::Single {
            assignment: "TT".parse().unwrap(),
            orders: vec![natural_order(3)],
        };
        let g = build_config_graph(&f, &mode, 10, 12).unwrap();
        for model in [PathModel::Step, PathModel::Reachability] {
            let r = chain_homotopy_check(&g, model, 2, true, &BuildOptions::default()).unwrap();
            assert_eq!(r.degrees.len(), 3);
            for d in &r.degrees {
                assert_eq!(d.holds, d.counterexample.is_none());
            }
        }
    }
}
