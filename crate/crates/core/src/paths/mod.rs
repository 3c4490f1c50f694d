//! Chain complexes generated by computation paths in a configuration graph.
//!
//! Two path models are available:
//!
//! * [`PathModel::Reachability`]: degree-`n` generators are strictly
//!   time-increasing sequences `(c_0, …, c_n)` with each `c_{i+1}` reachable
//!   from `c_i`. Every face of a generator is again a generator, so the
//!   alternating face sum is a boundary operator as it stands.
//! * [`PathModel::Step`]: degree-`n` generators are walks of `n` single
//!   verifier steps. Removing an interior configuration from a walk usually
//!   leaves a sequence that is not a walk; those faces are dropped by
//!   [`boundary_matrix`], which on its own does not square to zero. The
//!   complex built for this model therefore restricts to the sublattice of
//!   walk chains whose boundary is again a combination of walks, the usual
//!   allowed-path construction for digraphs.

mod trace;

use std::collections::HashMap;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::{read_complex, ChainComplex};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{kernel_basis, IntMatrix, SmithSolver};
use crate::verifier::ConfigGraph;
use crate::BuildOptions;

pub use trace::{build_trace_complex, TraceComplex, TraceShape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathModel {
    Step,
    Reachability,
}

/// A sequence of configuration ids without repeats.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComputationPath {
    pub config_ids: Vec<usize>,
}

impl ComputationPath {
    pub fn new(config_ids: Vec<usize>) -> Self {
        ComputationPath { config_ids }
    }

    pub fn length(&self) -> usize {
        self.config_ids.len().saturating_sub(1)
    }

    pub fn first(&self) -> usize {
        self.config_ids[0]
    }

    pub fn last(&self) -> usize {
        *self.config_ids.last().expect("paths are nonempty")
    }

    /// The path with configuration `i` removed.
    pub fn face(&self, i: usize) -> ComputationPath {
        let mut ids = self.config_ids.clone();
        ids.remove(i);
        ComputationPath { config_ids: ids }
    }

    pub fn extended(&self, next: usize) -> ComputationPath {
        let mut ids = self.config_ids.clone();
        ids.push(next);
        ComputationPath { config_ids: ids }
    }

    pub fn label(&self) -> String {
        let ids: Vec<String> = self.config_ids.iter().map(|i| format!("c{i}")).collect();
        format!("({})", ids.join(","))
    }
}

/// A degree-1 generator from `from` to `to` that remembers which clauses were
/// verified along it, in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TraceDecoratedEdge {
    pub from: usize,
    pub to: usize,
    pub trace: Vec<usize>,
}

impl TraceDecoratedEdge {
    pub fn label(&self) -> String {
        let t: Vec<String> = self.trace.iter().map(|c| format!("C{}", c + 1)).collect();
        format!("c{}->c{} [{}]", self.from, self.to, t.join(" "))
    }
}

/// A degree-2 generator `(c_0, c_1, c_2)` whose long edge carries the
/// concatenation of the two short traces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TraceTriangle {
    pub configs: [usize; 3],
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

impl TraceTriangle {
    pub fn edge_01(&self) -> TraceDecoratedEdge {
        TraceDecoratedEdge {
            from: self.configs[0],
            to: self.configs[1],
            trace: self.first.clone(),
        }
    }

    pub fn edge_12(&self) -> TraceDecoratedEdge {
        TraceDecoratedEdge {
            from: self.configs[1],
            to: self.configs[2],
            trace: self.second.clone(),
        }
    }

    pub fn edge_02(&self) -> TraceDecoratedEdge {
        TraceDecoratedEdge {
            from: self.configs[0],
            to: self.configs[2],
            trace: [self.first.as_slice(), self.second.as_slice()].concat(),
        }
    }

    pub fn label(&self) -> String {
        format!(
            "c{}->c{}->c{} [{}|{}]",
            self.configs[0],
            self.configs[1],
            self.configs[2],
            self.first.iter().map(|c| format!("C{}", c + 1)).collect::<Vec<_>>().join(" "),
            self.second.iter().map(|c| format!("C{}", c + 1)).collect::<Vec<_>>().join(" "),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Path(ComputationPath),
    Edge(TraceDecoratedEdge),
    Triangle(TraceTriangle),
}

impl Generator {
    pub fn vertex(id: usize) -> Self {
        Generator::Path(ComputationPath::new(vec![id]))
    }

    pub fn degree(&self) -> usize {
        match self {
            Generator::Path(p) => p.length(),
            Generator::Edge(_) => 1,
            Generator::Triangle(_) => 2,
        }
    }

    /// `(sign, face)` pairs of the alternating face sum.
    pub fn faces(&self) -> Vec<(i64, Generator)> {
        match self {
            Generator::Path(p) => {
                if p.length() == 0 {
                    return Vec::new();
                }
                (0..p.config_ids.len())
                    .map(|i| (sign(i), Generator::Path(p.face(i))))
                    .collect()
            }
            Generator::Edge(e) => vec![(1, Generator::vertex(e.to)), (-1, Generator::vertex(e.from))],
            Generator::Triangle(t) => vec![
                (1, Generator::Edge(t.edge_12())),
                (-1, Generator::Edge(t.edge_02())),
                (1, Generator::Edge(t.edge_01())),
            ],
        }
    }

    pub fn label(&self) -> String {
        match self {
            Generator::Path(p) => p.label(),
            Generator::Edge(e) => e.label(),
            Generator::Triangle(t) => t.label(),
        }
    }
}

fn sign(i: usize) -> i64 {
    if i % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The generators of one chain group, in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathBasis {
    pub degree: usize,
    pub generators: Vec<Generator>,
}

impl PathBasis {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn index(&self) -> HashMap<&Generator, usize> {
        self.generators.iter().enumerate().map(|(i, g)| (g, i)).collect()
    }
}

/// Transitive closure of the successor relation, as sorted id lists. Edges
/// advance time, so processing nodes by decreasing time visits successors
/// first.
fn reachability(graph: &ConfigGraph) -> Vec<Vec<usize>> {
    let succ = graph.successors();
    let mut order: Vec<usize> = (0..graph.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(graph.node(i).time));
    let mut reach: Vec<Vec<usize>> = vec![Vec::new(); graph.len()];
    for u in order {
        let mut acc: Vec<usize> = Vec::new();
        for &v in &succ[u] {
            acc.push(v);
            acc.extend_from_slice(&reach[v]);
        }
        acc.sort_unstable();
        acc.dedup();
        reach[u] = acc;
    }
    reach
}

/// Generators of degrees `0..=max_degree`, each list sorted
/// lexicographically by configuration ids.
pub fn enumerate_paths(
    graph: &ConfigGraph,
    max_degree: usize,
    model: PathModel,
    opts: &BuildOptions,
) -> Result<Vec<PathBasis>> {
    let next = match model {
        PathModel::Step => graph.successors(),
        PathModel::Reachability => reachability(graph),
    };
    let mut current: Vec<ComputationPath> =
        (0..graph.len()).map(|i| ComputationPath::new(vec![i])).collect();
    check_cap(0, current.len(), opts)?;
    let mut out = Vec::with_capacity(max_degree + 1);
    for degree in 0..=max_degree {
        if degree > 0 {
            let extended: Vec<Vec<ComputationPath>> = opts.execution.map(&current, |p| {
                next[p.last()].iter().map(|&v| p.extended(v)).collect()
            });
            // Extending a sorted list by sorted successor lists keeps it sorted.
            current = extended.into_iter().flatten().collect();
            check_cap(degree, current.len(), opts)?;
        }
        out.push(PathBasis {
            degree,
            generators: current.iter().cloned().map(Generator::Path).collect(),
        });
    }
    Ok(out)
}

fn check_cap(degree: usize, count: usize, opts: &BuildOptions) -> Result<()> {
    if count > opts.generator_cap {
        return Err(Error::CapExceeded {
            what: match degree {
                0 => "degree-0 generators",
                1 => "degree-1 generators",
                2 => "degree-2 generators",
                _ => "generators in one degree",
            },
            count,
            cap: opts.generator_cap,
        });
    }
    Ok(())
}

/// Sign-rule matrix from `basis_n` to `basis_prev`: the column of `π` has
/// `(-1)^i` at the row of its `i`-th face. Faces missing from `basis_prev`
/// contribute nothing.
pub fn boundary_matrix(basis_n: &PathBasis, basis_prev: &PathBasis, exec: Execution) -> IntMatrix {
    let index = basis_prev.index();
    let columns: Vec<Vec<(usize, i64)>> = exec.map(&basis_n.generators, |g| {
        g.faces()
            .into_iter()
            .filter_map(|(s, f)| index.get(&f).map(|&r| (r, s)))
            .collect()
    });
    let triplets = columns
        .into_iter()
        .enumerate()
        .flat_map(|(c, col)| col.into_iter().map(move |(r, s)| (r, c, BigInt::from(s))));
    IntMatrix::from_triplets(basis_prev.len(), basis_n.len(), triplets)
        .expect("face rows lie inside the previous basis")
}

fn vertex_labels(graph: &ConfigGraph) -> Vec<String> {
    graph
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, c)| format!("c{i}: {}", c.label()))
        .collect()
}

/// The chain complex of `graph` in degrees `0..=max_degree` under `model`.
pub fn build_complex(
    graph: &ConfigGraph,
    max_degree: usize,
    model: PathModel,
    opts: &BuildOptions,
) -> Result<ChainComplex> {
    let bases = enumerate_paths(graph, max_degree, model, opts)?;
    match model {
        PathModel::Reachability => {
            let mut labels = vec![vertex_labels(graph)];
            labels.extend(bases[1..].iter().map(|b| b.generators.iter().map(Generator::label).collect()));
            let boundaries = (1..bases.len())
                .map(|n| boundary_matrix(&bases[n], &bases[n - 1], opts.execution))
                .collect();
            ChainComplex::new(labels, boundaries)
        }
        PathModel::Step => build_allowed_complex(graph, &bases, opts),
    }
}

/// Sparse integer vector over the walks of one degree.
type SparseVec = Vec<(usize, BigInt)>;

/// Lattice basis of the allowed chains in one degree, split into walks whose
/// faces are all walks (unit vectors) and combinations supported on the
/// remaining walks.
struct AllowedBasis {
    units: Vec<usize>,
    combos: Vec<SparseVec>,
    // walks that appear in combos, and the solver for combo coordinates
    combo_support: Vec<usize>,
    combo_solver: Option<SmithSolver>,
}

impl AllowedBasis {
    fn len(&self) -> usize {
        self.units.len() + self.combos.len()
    }

    fn all_units(walks: usize) -> Self {
        AllowedBasis {
            units: (0..walks).collect(),
            combos: Vec::new(),
            combo_support: Vec::new(),
            combo_solver: None,
        }
    }

    /// Coordinates of an allowed chain given over walks.
    fn coordinates(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        let mut out: Vec<BigInt> = self.units.iter().map(|&w| v[w].clone()).collect();
        if let Some(solver) = &self.combo_solver {
            let rhs: Vec<BigInt> = self.combo_support.iter().map(|&w| v[w].clone()).collect();
            let x = solver
                .solve(&rhs)?
                .ok_or_else(|| Error::invalid("boundary of an allowed chain is not allowed"))?;
            out.extend(x);
        }
        Ok(out)
    }
}

fn build_allowed_complex(graph: &ConfigGraph, bases: &[PathBasis], opts: &BuildOptions) -> Result<ChainComplex> {
    let exec = opts.execution;
    let mut allowed: Vec<AllowedBasis> = Vec::with_capacity(bases.len());
    let mut labels: Vec<Vec<String>> = Vec::with_capacity(bases.len());
    let mut boundaries: Vec<IntMatrix> = Vec::new();

    for (n, basis) in bases.iter().enumerate() {
        if n <= 1 {
            allowed.push(AllowedBasis::all_units(basis.len()));
            labels.push(if n == 0 {
                vertex_labels(graph)
            } else {
                basis.generators.iter().map(Generator::label).collect()
            });
            if n == 1 {
                boundaries.push(boundary_matrix(basis, &bases[0], exec));
            }
            continue;
        }
        let prev_index = bases[n - 1].index();
        // Split each walk's faces into walks (raw) and non-walks (missing).
        let faces: Vec<(SparseVec, Vec<(Generator, i64)>)> = exec.map(&basis.generators, |g| {
            let mut raw = Vec::new();
            let mut missing = Vec::new();
            for (s, f) in g.faces() {
                match prev_index.get(&f) {
                    Some(&r) => raw.push((r, BigInt::from(s))),
                    None => missing.push((f, s)),
                }
            }
            (raw, missing)
        });

        let mut missing_index: HashMap<Generator, usize> = HashMap::new();
        let mut units = Vec::new();
        let mut support = Vec::new();
        let mut q_triplets = Vec::new();
        for (w, (_, missing)) in faces.iter().enumerate() {
            if missing.is_empty() {
                units.push(w);
                continue;
            }
            let col = support.len();
            support.push(w);
            for (f, s) in missing {
                let next_id = missing_index.len();
                let row = *missing_index.entry(f.clone()).or_insert(next_id);
                q_triplets.push((row, col, BigInt::from(*s)));
            }
        }
        let q = IntMatrix::from_triplets(missing_index.len(), support.len(), q_triplets)?;
        let combos: Vec<SparseVec> = kernel_basis(&q)
            .into_iter()
            .map(|k| normalize_sign(k.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (support[i], v)).collect()))
            .collect();
        check_cap(n, units.len() + combos.len(), opts)?;
        let combo_solver = if combos.is_empty() {
            None
        } else {
            let local: HashMap<usize, usize> = support.iter().enumerate().map(|(i, &w)| (w, i)).collect();
            let cols: Vec<Vec<BigInt>> = combos
                .iter()
                .map(|c| {
                    let mut v = vec![BigInt::zero(); support.len()];
                    for (w, x) in c {
                        v[local[w]] = x.clone();
                    }
                    v
                })
                .collect();
            Some(SmithSolver::new(&IntMatrix::from_columns(support.len(), &cols)?))
        };

        let mut lab: Vec<String> = units.iter().map(|&w| basis.generators[w].label()).collect();
        lab.extend(combos.iter().map(|c| combo_label(c, basis)));
        labels.push(lab);

        // d_n on the allowed basis, written in allowed coordinates of degree n-1.
        let prev = &allowed[n - 1];
        let prev_walks = bases[n - 1].len();
        let image = |vec: &SparseVec| -> Result<Vec<BigInt>> {
            let mut acc = vec![BigInt::zero(); prev_walks];
            for (w, coeff) in vec {
                for (r, s) in &faces[*w].0 {
                    acc[*r] += coeff * s;
                }
            }
            prev.coordinates(&acc)
        };
        let mut cols: Vec<SparseVec> = units.iter().map(|&w| vec![(w, BigInt::one())]).collect();
        cols.extend(combos.iter().cloned());
        let images: Vec<Vec<BigInt>> = exec.try_map(&cols, |c| image(c))?;
        boundaries.push(IntMatrix::from_columns(prev.len(), &images)?);

        allowed.push(AllowedBasis {
            units,
            combos,
            combo_support: support,
            combo_solver,
        });
    }
    ChainComplex::new(labels, boundaries)
}

fn normalize_sign(mut v: SparseVec) -> SparseVec {
    v.sort_by_key(|(i, _)| *i);
    if v.first().is_some_and(|(_, x)| x.is_negative()) {
        for (_, x) in &mut v {
            *x = -std::mem::take(x);
        }
    }
    v
}

fn combo_label(v: &SparseVec, basis: &PathBasis) -> String {
    let mut s = String::new();
    for (k, (w, x)) in v.iter().enumerate() {
        let name = basis.generators[*w].label();
        let mag = x.abs();
        let coeff = if mag.is_one() { String::new() } else { format!("{mag}") };
        match (k, x.is_negative()) {
            (0, false) => s.push_str(&format!("{coeff}{name}")),
            (0, true) => s.push_str(&format!("-{coeff}{name}")),
            (_, false) => s.push_str(&format!(" + {coeff}{name}")),
            (_, true) => s.push_str(&format!(" - {coeff}{name}")),
        }
    }
    s
}

/// Reads a complex in either on-disk layout.
pub fn load_fixture_complex(path: &Path) -> Result<ChainComplex> {
    read_complex(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::{Phase, StepKind, VerifierConfig};

    fn node(time: usize) -> VerifierConfig {
        VerifierConfig {
            assignment: vec![],
            checked: vec![],
            next_clause: None,
            phase: if time == 0 { Phase::Initial } else { Phase::Checking },
            step: StepKind::None,
            time,
        }
    }

    /// `a → b → c`
    fn chain3() -> ConfigGraph {
        let trace = vec![node(0), node(1), node(2)];
        ConfigGraph::from_traces([trace.as_slice()], 10).unwrap()
    }

    fn opts() -> BuildOptions {
        BuildOptions::default()
    }

    fn ids(b: &PathBasis) -> Vec<Vec<usize>> {
        b.generators
            .iter()
            .map(|g| match g {
                Generator::Path(p) => p.config_ids.clone(),
                _ => unreachable!(),
            })
            .collect()
    }

    /// All strictly increasing index subsequences of length `k + 1` whose
    /// consecutive entries satisfy `ok`, by exhaustive subset enumeration.
    fn brute_force(n: usize, k: usize, ok: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for mask in 0u32..1 << n {
            let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if s.len() == k + 1 && s.windows(2).all(|w| ok(w[0], w[1])) {
                out.push(s);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn single_node() {
        let g = ConfigGraph::from_traces([[node(0)].as_slice()], 1).unwrap();
        for model in [PathModel::Step, PathModel::Reachability] {
            let b = enumerate_paths(&g, 2, model, &opts()).unwrap();
            assert_eq!(b.iter().map(PathBasis::len).collect::<Vec<_>>(), vec![1, 0, 0]);
        }
    }

    #[test]
    fn chain_enumeration_matches_subsequence_oracle() {
        let g = chain3();
        let reach = enumerate_paths(&g, 2, PathModel::Reachability, &opts()).unwrap();
        let step = enumerate_paths(&g, 2, PathModel::Step, &opts()).unwrap();
        for k in 0..=2 {
            assert_eq!(ids(&reach[k]), brute_force(3, k, |_, _| true));
            assert_eq!(ids(&step[k]), brute_force(3, k, |a, b| b == a + 1));
        }
        assert_eq!(reach[1].len(), 3);
        assert_eq!(reach[2].len(), 1);
        assert_eq!(step[1].len(), 2);
        assert_eq!(step[2].len(), 1);
    }

    #[test]
    fn sign_rule_columns() {
        let g = chain3();
        let b = enumerate_paths(&g, 2, PathModel::Reachability, &opts()).unwrap();
        // degree 1 order: (0,1), (0,2), (1,2)
        let d2 = boundary_matrix(&b[2], &b[1], Execution::Sequential);
        assert_eq!(d2.column(0), [1, -1, 1].map(BigInt::from).to_vec());
        let d1 = boundary_matrix(&b[1], &b[0], Execution::Sequential);
        assert_eq!(d1.column(0), [-1, 1, 0].map(BigInt::from).to_vec());
        assert!(d1.mul(&d2).unwrap().is_zero());
    }

    #[test]
    fn raw_step_boundary_fails_to_square_to_zero() {
        let g = chain3();
        let b = enumerate_paths(&g, 2, PathModel::Step, &opts()).unwrap();
        let d1 = boundary_matrix(&b[1], &b[0], Execution::Sequential);
        let d2 = boundary_matrix(&b[2], &b[1], Execution::Sequential);
        assert!(!d1.mul(&d2).unwrap().is_zero());
    }

    #[test]
    fn step_complex_is_valid() {
        let g = chain3();
        let c = build_complex(&g, 2, PathModel::Step, &opts()).unwrap();
        assert!(c.validate().is_valid());
        assert_eq!(c.basis_sizes(), vec![3, 2, 0]);
        assert_eq!(c.homology_at(0).unwrap().free_rank, 1);
        assert!(c.homology_at(1).unwrap().is_trivial());
    }

    #[test]
    fn step_complex_keeps_filled_squares() {
        // a → b → d and a → c → d: (a,b,d) − (a,c,d) has walk-only boundary.
        let a = node(0);
        let mut b = node(1);
        b.checked = vec![0];
        let mut c = node(1);
        c.checked = vec![1];
        let d = node(2);
        let t1 = vec![a.clone(), b, d.clone()];
        let t2 = vec![a, c, d];
        let g = ConfigGraph::from_traces([t1.as_slice(), t2.as_slice()], 10).unwrap();
        let cx = build_complex(&g, 2, PathModel::Step, &opts()).unwrap();
        assert!(cx.validate().is_valid());
        assert_eq!(cx.basis_size(2), 1);
        assert!(cx.labels(2)[0].contains(" - "), "{}", cx.labels(2)[0]);
        assert!(cx.homology_at(1).unwrap().is_trivial());
        assert_eq!(cx.homology_at(0).unwrap().free_rank, 1);
    }

    #[test]
    fn reachability_complex_of_chain_is_a_simplex() {
        let g = chain3();
        let c = build_complex(&g, 2, PathModel::Reachability, &opts()).unwrap();
        assert!(c.validate().is_valid());
        let h = c.homology(Execution::Sequential).unwrap();
        assert_eq!(h[0].free_rank, 1);
        assert!(h[1].is_trivial() && h[2].is_trivial());
        assert_eq!(c.labels(0)[0], "c0: t0 initial  {}");
    }

    #[test]
    fn empty_graph_gives_zero_complex() {
        let g = ConfigGraph::from_traces(std::iter::empty(), 1).unwrap();
        for model in [PathModel::Step, PathModel::Reachability] {
            let c = build_complex(&g, 2, model, &opts()).unwrap();
            assert_eq!(c.basis_sizes(), vec![0, 0, 0]);
            assert!(c.homology(Execution::Sequential).unwrap().iter().all(|h| h.is_trivial()));
        }
    }

    #[test]
    fn cap_refusal_reports_count() {
        let g = chain3();
        let o = BuildOptions {
            generator_cap: 2,
            ..BuildOptions::default()
        };
        match enumerate_paths(&g, 1, PathModel::Reachability, &o) {
            Err(Error::CapExceeded { count, cap, .. }) => assert_eq!((count, cap), (3, 2)),
            other => panic!("{other:?}"),
        }
    }
}
