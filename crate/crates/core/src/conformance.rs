//! Registry of claims that can be checked by computation, and the report
//! comparing each claimed value with the computed one.
//!
//! A disagreement is a finding, not an error: [`run_conformance`] only fails
//! when an input is missing or malformed. Arithmetic self-checks (rank plus
//! nullity, Betti numbers against ranks, `d² = 0`) are reported separately
//! under `cross_checks`, since those must always hold.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::complex::{ChainComplex, HomologyGroup};
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, rank};
use crate::paths::{
    boundary_matrix, build_complex, build_trace_complex, enumerate_paths, load_fixture_complex, PathModel,
    TraceShape,
};
use crate::topology::{
    chain_homotopy_check, gamma_cycle, hamiltonian_formula, parity_boundary_audit, parity_chain, ParityVariant,
};
use crate::verifier::{
    all_orders, build_config_graph, natural_order, parse_dimacs, Assignment, CnfFormula, GraphMode,
};
use crate::BuildOptions;

pub const REPORT_SCHEMA: &str = "comphom.conformance/1";

/// Files a corpus directory must contain.
pub const SAT_FIXTURE: &str = "appendix-b.cnf";
pub const UNSAT_FIXTURE: &str = "appendix-b-unsat.cnf";
pub const MATRIX_FIXTURE: &str = "appendix-b";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimStatus {
    Match,
    Mismatch,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub claim_id: String,
    pub paper_location: String,
    pub description: String,
    pub computed_value: Value,
    pub paper_value: Value,
    pub status: ClaimStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub name: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConformanceReport {
    pub schema: String,
    pub fixtures: Vec<String>,
    pub claims: Vec<ClaimRecord>,
    pub cross_checks: Vec<CrossCheck>,
}

impl ConformanceReport {
    pub fn claim(&self, id: &str) -> Option<&ClaimRecord> {
        self.claims.iter().find(|c| c.claim_id == id)
    }

    pub fn cross_checks_hold(&self) -> bool {
        self.cross_checks.iter().all(|c| c.ok)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// A registered claim: id, where it is stated, and what it says.
pub struct ClaimSpec {
    pub id: &'static str,
    pub paper_location: &'static str,
    pub description: &'static str,
}

macro_rules! registry {
    ($($id:literal, $loc:literal, $desc:literal;)*) => {
        /// Every claim the report covers, sorted by id.
        pub const REGISTRY: &[ClaimSpec] = &[
            $(ClaimSpec { id: $id, paper_location: $loc, description: $desc },)*
        ];
    };
}

registry! {
    "appendix-b-H0", "two-variable-example/homology",
        "H0 of the two-variable formula, step model over all satisfying runs";
    "appendix-b-H1", "two-variable-example/homology",
        "H1 of the two-variable formula, step model over all satisfying runs";
    "appendix-b-H2", "two-variable-example/homology",
        "H2 of the two-variable formula, step model over all satisfying runs";
    "appendix-b-fixture-H0", "two-variable-example/boundary-matrix",
        "H0 of the printed 3x9 boundary matrix with d2 = 0";
    "appendix-b-fixture-H1", "two-variable-example/boundary-matrix",
        "H1 of the printed 3x9 boundary matrix with d2 = 0";
    "appendix-b-model-count", "two-variable-example/statement",
        "number of satisfying assignments of the two-variable formula";
    "appendix-b-reachability-H0", "two-variable-example/homology",
        "H0 of the two-variable formula, reachability model";
    "appendix-b-reachability-H1", "two-variable-example/homology",
        "H1 of the two-variable formula, reachability model";
    "appendix-b-unsat-H0", "unsat-example/homology",
        "H0 of (x1)(~x1), step model over the runs of both assignments";
    "appendix-b-unsat-H1", "unsat-example/homology",
        "H1 of (x1)(~x1), step model over the runs of both assignments";
    "boundary-d2-zero-reachability", "boundary-operator/well-defined",
        "d^2 = 0 for the reachability complex of the two-variable formula";
    "boundary-d2-zero-step", "boundary-operator/well-defined",
        "d^2 = 0 for the allowed-walk step complex of the two-variable formula";
    "boundary-d2-zero-step-raw", "boundary-operator/well-defined",
        "d^2 = 0 for the literal sign rule on step walks (non-walk faces dropped)";
    "boundary-d2-zero-trace", "boundary-operator/well-defined",
        "d^2 = 0 for the subdivided trace complex over all clause orders";
    "gamma-cycle", "order-parity/gamma",
        "natural minus reverse trace edge is a cycle";
    "gamma-not-boundary", "order-parity/gamma-nontrivial",
        "natural minus reverse trace edge is not a boundary (subdivided complex)";
    "gamma-parity", "order-parity/gamma-value",
        "parity of gamma, adjacent-pairs variant";
    "gamma-parity-all-pairs", "order-parity/gamma-value",
        "parity of gamma, all-pairs variant";
    "ham3-cycle-count", "hamiltonian-example/cycle-count",
        "satisfying assignments of the K3 Hamiltonian encoding (directed cycles)";
    "ham3-undirected-count", "hamiltonian-example/rank-growth",
        "(n-1)!/2 undirected count at n = 3 against the directed model count";
    "homotopy-identity-reachability", "homotopy-theorem/identity",
        "d s + s d = id up to degree 2 on the natural clause-check run, reachability model";
    "homotopy-identity-step", "homotopy-theorem/identity",
        "d s + s d = id up to degree 2 on the natural clause-check run, step model";
    "parity-boundary-zero-adjacent", "order-parity/lemma-boundary-zero",
        "triangles with nonzero parity of the boundary, adjacent-pairs, all orders";
    "parity-boundary-zero-all-pairs", "order-parity/lemma-boundary-zero",
        "triangles with nonzero parity of the boundary, all-pairs, all orders";
}

fn group(h: &HomologyGroup) -> Value {
    serde_json::to_value(h).expect("homology groups serialize")
}

fn free(rank: usize) -> Value {
    group(&HomologyGroup::free(rank))
}

/// A computed value, or the reason it could not be computed.
type Computed = std::result::Result<Value, String>;

fn computed<T: Serialize>(r: &Result<T>) -> Computed {
    match r {
        Ok(v) => Ok(serde_json::to_value(v).expect("claim values serialize")),
        Err(e) => Err(e.to_string()),
    }
}

struct Recorder {
    claims: Vec<ClaimRecord>,
    checks: Vec<CrossCheck>,
}

impl Recorder {
    fn claim(&mut self, id: &str, computed: Computed, paper: Value) {
        let spec = REGISTRY.iter().find(|c| c.id == id).expect("claim is registered");
        let (computed_value, status) = match computed {
            Ok(v) if v == paper => (v, ClaimStatus::Match),
            Ok(v) => (v, ClaimStatus::Mismatch),
            Err(e) => (json!({ "refused": e }), ClaimStatus::NotApplicable),
        };
        self.claims.push(ClaimRecord {
            claim_id: id.to_string(),
            paper_location: spec.paper_location.to_string(),
            description: spec.description.to_string(),
            computed_value,
            paper_value: paper,
            status,
        });
    }

    fn check(&mut self, name: String, ok: bool) {
        self.checks.push(CrossCheck { name, ok });
    }

    /// rank + nullity = columns for every boundary, and each Betti number
    /// equals nullity(d_n) − rank(d_{n+1}).
    fn audit_complex(&mut self, name: &str, c: &ChainComplex) {
        let top = c.max_degree();
        let ranks: Vec<usize> = (0..=top + 1).map(|n| rank(&c.boundary(n))).collect();
        for n in 1..=top {
            let d = c.boundary(n);
            let nullity = kernel_basis(&d).len();
            self.check(format!("{name}/rank-nullity-d{n}"), ranks[n] + nullity == d.cols());
        }
        self.check(format!("{name}/d2-zero"), c.validate().is_valid());
        if let Ok(h) = c.homology(crate::Execution::Sequential) {
            for (n, g) in h.iter().enumerate() {
                let nullity = c.basis_size(n) - ranks[n];
                self.check(format!("{name}/betti-H{n}"), g.free_rank + ranks[n + 1] == nullity);
            }
        }
    }
}

fn read_cnf(corpus: &Path, name: &str) -> Result<CnfFormula> {
    let p = corpus.join(name);
    if !p.is_file() {
        return Err(Error::invalid(format!("corpus is missing fixture `{}`", p.display())));
    }
    parse_dimacs(&fs::read_to_string(&p)?).map_err(|e| match e {
        Error::Parse { line, message } => Error::invalid(format!("{}: line {line}: {message}", p.display())),
        other => other,
    })
}

/// A formula's path complex (built one degree above `max_degree`) and its
/// homology `H_0..=max_degree`.
fn path_homology(
    formula: &CnfFormula,
    mode: &GraphMode,
    model: PathModel,
    max_degree: usize,
    opts: &BuildOptions,
) -> Result<(ChainComplex, Vec<HomologyGroup>)> {
    let g = build_config_graph(formula, mode, formula.num_clauses() + 1, opts.graph_var_cap)?;
    let c = build_complex(&g, max_degree + 1, model, opts)?;
    let mut h = c.homology(opts.execution)?;
    h.truncate(max_degree + 1);
    Ok((c, h))
}

fn degree(h: &Result<(ChainComplex, Vec<HomologyGroup>)>, n: usize) -> Computed {
    match h {
        Ok((_, h)) => Ok(group(&h[n])),
        Err(e) => Err(e.to_string()),
    }
}

/// Runs every registered claim against the fixtures in `corpus`.
pub fn run_conformance(corpus: &Path, opts: &BuildOptions) -> Result<ConformanceReport> {
    if !corpus.is_dir() {
        return Err(Error::invalid(format!("corpus `{}` is not a directory", corpus.display())));
    }
    let phi = read_cnf(corpus, SAT_FIXTURE)?;
    let psi = read_cnf(corpus, UNSAT_FIXTURE)?;
    let matrix_path = corpus.join(MATRIX_FIXTURE);
    if !matrix_path.exists() {
        return Err(Error::invalid(format!("corpus is missing fixture `{}`", matrix_path.display())));
    }
    let fixture = load_fixture_complex(&matrix_path)?;
    let mut rec = Recorder {
        claims: Vec::new(),
        checks: Vec::new(),
    };
    let m = phi.num_clauses();

    let step = path_homology(&phi, &GraphMode::AllSatisfying, PathModel::Step, 2, opts);
    let reach = path_homology(&phi, &GraphMode::AllSatisfying, PathModel::Reachability, 2, opts);
    rec.claim("appendix-b-H0", degree(&step, 0), free(3));
    rec.claim("appendix-b-H1", degree(&step, 1), free(2));
    rec.claim("appendix-b-H2", degree(&step, 2), free(0));
    rec.claim("appendix-b-reachability-H0", degree(&reach, 0), free(3));
    rec.claim("appendix-b-reachability-H1", degree(&reach, 1), free(2));
    let models = phi.satisfying_assignments(opts.var_cap).map(|s| s.len());
    rec.claim("appendix-b-model-count", computed(&models), json!(3));
    for (name, id, built) in [
        ("appendix-b-step", "boundary-d2-zero-step", &step),
        ("appendix-b-reachability", "boundary-d2-zero-reachability", &reach),
    ] {
        if let Ok((c, _)) = built {
            rec.audit_complex(name, c);
        }
        let valid = built.as_ref().map(|(c, _)| c.validate().is_valid()).map_err(|e| e.to_string());
        rec.claim(id, valid.map(Value::Bool), json!(true));
    }
    rec.claim("boundary-d2-zero-step-raw", computed(&raw_step_d2_zero(&phi, opts)), json!(true));

    // the printed matrix, taken as is
    rec.audit_complex("appendix-b-fixture", &fixture);
    let fh = fixture.homology(opts.execution);
    for (n, id, paper) in [(0, "appendix-b-fixture-H0", 3), (1, "appendix-b-fixture-H1", 2)] {
        let v = match &fh {
            Ok(h) => h.get(n).map(group).ok_or_else(|| format!("fixture has no degree {n}")),
            Err(e) => Err(e.to_string()),
        };
        rec.claim(id, v, free(paper));
    }

    // the unsatisfiable formula: the verifier runs both assignments
    let unsat = path_homology(&psi, &GraphMode::AllAssignments, PathModel::Step, 2, opts);
    if let Ok((c, _)) = &unsat {
        rec.audit_complex("appendix-b-unsat-step", c);
    }
    rec.claim("appendix-b-unsat-H0", degree(&unsat, 0), free(0));
    rec.claim("appendix-b-unsat-H1", degree(&unsat, 1), free(1));

    let first = phi
        .first_satisfying(opts.var_cap)
        .and_then(|a| a.ok_or(Error::NoSatisfyingAssignment));
    gamma_claims(&mut rec, &phi, &first);

    let audits = first.as_ref().map_err(|e| e.to_string()).and_then(|a| {
        let orders = all_orders(m, opts.generator_cap).map_err(|e| e.to_string())?;
        build_trace_complex(&phi, a, &orders, TraceShape::Subdivided).map_err(|e| e.to_string())
    });
    if let Ok(tc) = &audits {
        rec.audit_complex("appendix-b-trace", &tc.complex);
    }
    let valid = audits.as_ref().map(|tc| Value::Bool(tc.complex.validate().is_valid()));
    rec.claim("boundary-d2-zero-trace", valid.map_err(Clone::clone), json!(true));
    for (id, v) in [
        ("parity-boundary-zero-adjacent", ParityVariant::AdjacentPairs),
        ("parity-boundary-zero-all-pairs", ParityVariant::AllPairs),
    ] {
        let n = audits
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|tc| computed(&parity_boundary_audit(tc, v).map(|x| x.len())));
        rec.claim(id, n, json!(0));
    }

    // the deterministic natural-order run of the first model
    let asg = first.unwrap_or_else(|_| Assignment::new(vec![true; phi.num_vars()]));
    let mode = GraphMode::Single {
        assignment: asg,
        orders: vec![natural_order(m)],
    };
    let run = build_config_graph(&phi, &mode, m + 1, opts.graph_var_cap);
    for (id, model) in [
        ("homotopy-identity-reachability", PathModel::Reachability),
        ("homotopy-identity-step", PathModel::Step),
    ] {
        let report = run
            .as_ref()
            .map_err(|e| e.to_string())
            .and_then(|g| chain_homotopy_check(g, model, 2, true, opts).map_err(|e| e.to_string()));
        if let Ok(r) = &report {
            let complete = r.degrees.len() == 3 && r.degrees.iter().all(|d| d.holds == d.counterexample.is_none());
            rec.check(format!("{id}/report-complete"), complete);
        }
        rec.claim(id, report.map(|r| Value::Bool(r.all_hold())), json!(true));
    }

    let k3 = hamiltonian_formula(3).and_then(|h| h.formula.satisfying_assignments(opts.var_cap).map(|s| s.len()));
    rec.claim("ham3-cycle-count", computed(&k3), json!(2));
    // (n-1)!/2 at n = 3
    rec.claim("ham3-undirected-count", computed(&k3), json!(1));

    rec.claims.sort_by(|a, b| a.claim_id.cmp(&b.claim_id));
    debug_assert_eq!(rec.claims.len(), REGISTRY.len());
    Ok(ConformanceReport {
        schema: REPORT_SCHEMA.to_string(),
        fixtures: vec![SAT_FIXTURE.to_string(), UNSAT_FIXTURE.to_string(), MATRIX_FIXTURE.to_string()],
        claims: rec.claims,
        cross_checks: rec.checks,
    })
}

fn gamma_claims(rec: &mut Recorder, phi: &CnfFormula, first: &Result<Assignment>) {
    let gamma = match first {
        Ok(a) => gamma_cycle(phi, a, TraceShape::Subdivided),
        Err(_) => Err(Error::NoSatisfyingAssignment),
    };
    let gamma = match gamma {
        Ok(g) => g,
        Err(e) => {
            for (id, paper) in [
                ("gamma-cycle", json!(true)),
                ("gamma-not-boundary", json!(false)),
                ("gamma-parity", json!("2")),
                ("gamma-parity-all-pairs", json!("2")),
            ] {
                rec.claim(id, Err(e.to_string()), paper);
            }
            return;
        }
    };
    let tc = &gamma.trace_complex;
    rec.claim("gamma-cycle", computed(&gamma.is_cycle()), json!(true));
    let boundary = gamma.is_boundary().map(|b| b.is_boundary);
    rec.claim("gamma-not-boundary", computed(&boundary), json!(false));
    let mut parity_two = true;
    for (id, v) in [("gamma-parity", ParityVariant::AdjacentPairs), ("gamma-parity-all-pairs", ParityVariant::AllPairs)] {
        let p = parity_chain(tc, &gamma.chain, v);
        parity_two &= p.as_ref().is_ok_and(|p| p.to_string() == "2");
        rec.claim(id, computed(&p), json!("2"));
    }
    // an empty audit and ρ(γ) = 2 together force γ ∉ im d₂
    let audit_empty = ParityVariant::ALL
        .iter()
        .all(|&v| parity_boundary_audit(tc, v).is_ok_and(|a| a.is_empty()));
    if audit_empty && parity_two {
        rec.check("gamma/empty-audit-implies-not-boundary".to_string(), boundary.is_ok_and(|b| !b));
    }
}

/// Whether the literal sign rule on raw step walks composes to zero.
fn raw_step_d2_zero(phi: &CnfFormula, opts: &BuildOptions) -> Result<bool> {
    let g = build_config_graph(phi, &GraphMode::AllSatisfying, phi.num_clauses() + 1, opts.graph_var_cap)?;
    let b = enumerate_paths(&g, 2, PathModel::Step, opts)?;
    let d1 = boundary_matrix(&b[1], &b[0], opts.execution);
    let d2 = boundary_matrix(&b[2], &b[1], opts.execution);
    Ok(d1.mul(&d2)?.is_zero())
}
