//! `comphom` command implementations.
//!
//! Every command returns an [`Outcome`] instead of printing, so the binary
//! stays a thin shell and tests can drive commands in-process.

mod output;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use comphom_core::complex::HomologyGroup;
use comphom_core::conformance::run_conformance;
use comphom_core::paths::{build_complex, build_trace_complex, load_fixture_complex, PathModel, TraceShape};
use comphom_core::topology::{
    audit_all_variants, chain_homotopy_check, gamma_cycle, hamiltonian_formula, parity_boundary_audit,
    parity_chain, HValue, ParityAudit, ParityVariant,
};
use comphom_core::verifier::{
    all_orders, build_config_graph, natural_order, parse_dimacs, reverse_order, Assignment, CnfFormula,
    ConfigGraph, GraphMode,
};
use comphom_core::{BuildOptions, Error, Execution};

pub use output::Format;

/// Exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT: i32 = 1;
    pub const CAP: i32 = 2;
    pub const UNSAT: i32 = 3;
    pub const NONDETERMINISTIC: i32 = 4;
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "comphom", version, about = "Exact homology of SAT-verifier computation paths")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Homology of a formula's path complex, or of a complex fixture.
    Homology(HomologyArgs),
    /// The natural-minus-reverse trace cycle: parity, cycle and boundary tests.
    Gamma(GammaArgs),
    /// Write the directed Hamiltonian-cycle encoding of K_n as DIMACS.
    GenHam(GenHamArgs),
    /// Evaluate d s + s d - id on a deterministic run.
    Homotopy(HomotopyArgs),
    /// Compare computed values against the registered claims.
    Conformance(ConformanceArgs),
    /// Parity of the boundary of every triangle in a trace complex.
    ParityAudit(ParityAuditArgs),
    /// Export a configuration graph as JSON.
    Graph(GraphArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Generators allowed per degree before refusing.
    #[arg(long, default_value_t = 50_000)]
    pub gen_cap: usize,
    /// Variables allowed for brute-force search.
    #[arg(long, default_value_t = 20)]
    pub var_cap: usize,
    /// Variables allowed when every assignment contributes to a graph.
    #[arg(long, default_value_t = 12)]
    pub graph_var_cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Run without the thread pool.
    #[arg(long)]
    pub sequential: bool,
    /// Write the report here instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

impl Common {
    fn options(&self) -> Result<BuildOptions, Failure> {
        if self.gen_cap == 0 || self.var_cap == 0 || self.graph_var_cap == 0 {
            return Err(Failure::input("caps must be positive"));
        }
        Ok(BuildOptions {
            generator_cap: self.gen_cap,
            var_cap: self.var_cap,
            graph_var_cap: self.graph_var_cap,
            execution: if self.sequential {
                Execution::Sequential
            } else {
                Execution::default()
            },
        })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Step,
    Reachability,
    Trace,
    Fixture,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphArg {
    AllSatisfying,
    AllAssignments,
    Single,
    Dpll,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrdersArg {
    Natural,
    NaturalReverse,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Plain,
    Subdivided,
}

impl From<ShapeArg> for TraceShape {
    fn from(s: ShapeArg) -> Self {
        match s {
            ShapeArg::Plain => TraceShape::Plain,
            ShapeArg::Subdivided => TraceShape::Subdivided,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    AdjacentPairs,
    AllPairs,
}

impl From<VariantArg> for ParityVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::AdjacentPairs => ParityVariant::AdjacentPairs,
            VariantArg::AllPairs => ParityVariant::AllPairs,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Selection {
    /// Total assignment, e.g. `TF`, `10` or `1,-2`.
    #[arg(long)]
    pub assignment: Option<String>,
    /// Clause orders for single-assignment graphs and trace complexes.
    #[arg(long, value_enum)]
    pub orders: Option<OrdersArg>,
}

#[derive(Args, Debug)]
pub struct HomologyArgs {
    /// DIMACS file, or a complex fixture with `--model fixture`.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = ModelArg::Reachability)]
    pub model: ModelArg,
    #[arg(long, default_value_t = 2)]
    pub max_degree: usize,
    /// Which runs make up the configuration graph (path models).
    #[arg(long, value_enum, default_value_t = GraphArg::AllSatisfying)]
    pub graph: GraphArg,
    #[arg(long, value_enum, default_value_t = ShapeArg::Subdivided)]
    pub shape: ShapeArg,
    #[command(flatten)]
    pub selection: Selection,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct GammaArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = VariantArg::AdjacentPairs)]
    pub parity_variant: VariantArg,
    #[arg(long)]
    pub assignment: Option<String>,
    #[arg(long, value_enum, default_value_t = ShapeArg::Subdivided)]
    pub shape: ShapeArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct GenHamArgs {
    pub n: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct HomotopyArgs {
    /// DIMACS file or configuration-graph JSON (`.json`).
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = ModelArg::Reachability)]
    pub model: ModelArg,
    #[arg(long, default_value_t = 2)]
    pub max_degree: usize,
    #[arg(long, value_enum, default_value_t = GraphArg::Single)]
    pub graph: GraphArg,
    /// Use s_{-1} = 0 instead of the augmentation in degree 0.
    #[arg(long)]
    pub no_augment: bool,
    #[command(flatten)]
    pub selection: Selection,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ConformanceArgs {
    /// Directory holding the bundled fixtures.
    pub corpus: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ParityAuditArgs {
    pub input: PathBuf,
    /// Audit one variant only; both are reported by default.
    #[arg(long, value_enum)]
    pub parity_variant: Option<VariantArg>,
    #[arg(long, value_enum, default_value_t = ShapeArg::Subdivided)]
    pub shape: ShapeArg,
    #[command(flatten)]
    pub selection: Selection,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct GraphArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = GraphArg::AllSatisfying)]
    pub graph: GraphArg,
    #[command(flatten)]
    pub selection: Selection,
    #[command(flatten)]
    pub common: Common,
}

/// A command failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: exit::INPUT,
            message: message.into(),
        }
    }

    fn in_file(path: &Path, e: Error) -> Self {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } | Error::TimeBoundExceeded { .. } => exit::CAP,
            Error::NoSatisfyingAssignment => exit::UNSAT,
            Error::Nondeterministic { .. } => exit::NONDETERMINISTIC,
            _ => exit::INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<(Value, String), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: exit::INPUT,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: exit::OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    execute(cli.command)
}

pub fn execute(command: Command) -> Outcome {
    let (common, result) = match &command {
        Command::Homology(a) => (Some(&a.common), cmd_homology(a)),
        Command::Gamma(a) => (Some(&a.common), cmd_gamma(a)),
        Command::Homotopy(a) => (Some(&a.common), cmd_homotopy(a)),
        Command::Conformance(a) => (Some(&a.common), cmd_conformance(a)),
        Command::ParityAudit(a) => (Some(&a.common), cmd_parity_audit(a)),
        Command::Graph(a) => (Some(&a.common), cmd_graph(a)),
        Command::GenHam(a) => return cmd_gen_ham(a),
    };
    let common = common.expect("report commands carry common flags");
    match result {
        Ok((json, table)) => {
            let text = match common.format {
                Format::Json => output::json_text(&json),
                Format::Table => table,
            };
            deliver(text, common.output.as_deref())
        }
        Err(f) => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn deliver(text: String, path: Option<&Path>) -> Outcome {
    match path {
        None => Outcome {
            code: exit::OK,
            stdout: text,
            stderr: String::new(),
        },
        Some(p) => match fs::write(p, text) {
            Ok(()) => Outcome::default(),
            Err(e) => Outcome {
                code: exit::INPUT,
                stdout: String::new(),
                stderr: format!("error: {}: {e}\n", p.display()),
            },
        },
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_formula(path: &Path) -> Result<CnfFormula, Failure> {
    parse_dimacs(&read_text(path)?).map_err(|e| Failure::in_file(path, e))
}

fn input_name(path: &Path) -> String {
    path.display().to_string()
}

fn parse_assignment(s: &str, formula: &CnfFormula) -> Result<Assignment, Failure> {
    let a: Assignment = s.parse().map_err(|e: Error| Failure::input(format!("--assignment: {e}")))?;
    if a.len() != formula.num_vars() {
        return Err(Failure::input(format!(
            "--assignment has {} values but the formula has {} variables",
            a.len(),
            formula.num_vars()
        )));
    }
    Ok(a)
}

/// The supplied assignment, or the first satisfying one.
fn satisfying_assignment(
    given: Option<&str>,
    formula: &CnfFormula,
    opts: &BuildOptions,
) -> Result<Assignment, Failure> {
    match given {
        Some(s) => {
            let a = parse_assignment(s, formula)?;
            if !formula.eval(&a)? {
                return Err(Failure::input(format!("assignment {a} does not satisfy the formula")));
            }
            Ok(a)
        }
        None => Ok(formula
            .first_satisfying(opts.var_cap)?
            .ok_or(Error::NoSatisfyingAssignment)?),
    }
}

fn orders_for(sel: Option<OrdersArg>, m: usize, default: OrdersArg, opts: &BuildOptions) -> Result<Vec<Vec<usize>>, Failure> {
    Ok(match sel.unwrap_or(default) {
        OrdersArg::Natural => vec![natural_order(m)],
        OrdersArg::NaturalReverse if m >= 2 => vec![natural_order(m), reverse_order(m)],
        OrdersArg::NaturalReverse => vec![natural_order(m)],
        OrdersArg::All => all_orders(m, opts.generator_cap)?,
    })
}

fn graph_mode(
    which: GraphArg,
    sel: &Selection,
    formula: &CnfFormula,
    opts: &BuildOptions,
) -> Result<GraphMode, Failure> {
    Ok(match which {
        GraphArg::AllSatisfying => GraphMode::AllSatisfying,
        GraphArg::AllAssignments => GraphMode::AllAssignments,
        GraphArg::Dpll => GraphMode::Dpll,
        GraphArg::Single => {
            let assignment = match &sel.assignment {
                Some(s) => parse_assignment(s, formula)?,
                None => formula
                    .first_satisfying(opts.var_cap)?
                    .unwrap_or_else(|| Assignment::new(vec![true; formula.num_vars()])),
            };
            let orders = orders_for(sel.orders, formula.num_clauses(), OrdersArg::Natural, opts)?;
            GraphMode::Single { assignment, orders }
        }
    })
}

fn time_bound(formula: &CnfFormula, mode: &GraphMode) -> usize {
    let m = formula.num_clauses();
    match mode {
        // one step per node of the search tree, and it is binary
        GraphMode::Dpll => (m + 1) << (formula.num_vars().min(20) + 1),
        _ => m + 1,
    }
}

fn model_name(m: ModelArg) -> &'static str {
    match m {
        ModelArg::Step => "step",
        ModelArg::Reachability => "reachability",
        ModelArg::Trace => "trace",
        ModelArg::Fixture => "fixture",
    }
}

fn path_model(m: ModelArg) -> Result<PathModel, Failure> {
    match m {
        ModelArg::Step => Ok(PathModel::Step),
        ModelArg::Reachability => Ok(PathModel::Reachability),
        other => Err(Failure::input(format!("--model {} is not a path model here", model_name(other)))),
    }
}

pub fn cmd_homology(a: &HomologyArgs) -> CmdResult {
    let opts = a.common.options()?;
    let n = a.max_degree;
    let (complex, extra) = match a.model {
        ModelArg::Fixture => {
            let c = load_fixture_complex(&a.input).map_err(|e| Failure::in_file(&a.input, e))?;
            (c, json!({}))
        }
        ModelArg::Step | ModelArg::Reachability => {
            let f = read_formula(&a.input)?;
            let mode = graph_mode(a.graph, &a.selection, &f, &opts)?;
            let g = build_config_graph(&f, &mode, time_bound(&f, &mode), opts.graph_var_cap)?;
            let c = build_complex(&g, n + 1, path_model(a.model)?, &opts)?;
            (c, json!({ "graph": output::graph_arg_name(a.graph), "configurations": g.len() }))
        }
        ModelArg::Trace => {
            let f = read_formula(&a.input)?;
            let asg = satisfying_assignment(a.selection.assignment.as_deref(), &f, &opts)?;
            let orders = orders_for(a.selection.orders, f.num_clauses(), OrdersArg::All, &opts)?;
            let tc = build_trace_complex(&f, &asg, &orders, a.shape.into())?;
            let extra = json!({
                "assignment": asg.to_string(),
                "orders": orders.len(),
                "shape": output::shape_name(a.shape),
            });
            (tc.complex, extra)
        }
    };
    let validation = complex.validate();
    if !validation.is_valid() {
        return Err(Failure::input(format!(
            "boundary maps do not compose to zero at degrees {:?}",
            validation.violations
        )));
    }
    let all = complex.homology(opts.execution)?;
    let homology: Vec<HomologyGroup> = (0..=n).map(|k| all.get(k).cloned().unwrap_or_default()).collect();
    // a fixture or trace complex has nothing above its top degree
    let h_value = if complex.max_degree() <= n {
        HValue::from_complete(&homology)
    } else {
        HValue::from_homology(&homology)
    };
    let sizes: Vec<usize> = (0..=n).map(|k| if k <= complex.max_degree() { complex.basis_size(k) } else { 0 }).collect();
    let doc = json!({
        "schema": "comphom.homology/1",
        "input": input_name(&a.input),
        "model": model_name(a.model),
        "max_degree": n,
        "details": extra,
        "basis_sizes": sizes,
        "degrees": homology.iter().enumerate().map(|(k, g)| json!({
            "degree": k,
            "betti": g.free_rank,
            "torsion": serde_json::to_value(g).expect("serializes")["torsion"].clone(),
            "group": g.to_string(),
        })).collect::<Vec<_>>(),
        "h_value": h_value,
    });
    let table = output::homology_table(&doc);
    Ok((doc, table))
}

pub fn cmd_gamma(a: &GammaArgs) -> CmdResult {
    let opts = a.common.options()?;
    let f = read_formula(&a.input)?;
    let asg = satisfying_assignment(a.assignment.as_deref(), &f, &opts)?;
    let variant: ParityVariant = a.parity_variant.into();
    let g = match gamma_cycle(&f, &asg, a.shape.into()) {
        Ok(g) => g,
        Err(Error::Degenerate(msg)) => {
            let doc = json!({
                "schema": "comphom.gamma/1",
                "input": input_name(&a.input),
                "assignment": asg.to_string(),
                "degenerate": msg,
            });
            let table = format!("degenerate: {msg}\n");
            return Ok((doc, table));
        }
        Err(e) => return Err(e.into()),
    };
    let tc = &g.trace_complex;
    let parity = parity_chain(tc, &g.chain, variant)?;
    let is_cycle = g.is_cycle()?;
    let boundary = g.is_boundary()?;
    let audits = audit_all_variants(tc)?;
    let doc = json!({
        "schema": "comphom.gamma/1",
        "input": input_name(&a.input),
        "assignment": asg.to_string(),
        "shape": output::shape_name(a.shape),
        "orders": { "natural": g.order_pair.0, "reverse": g.order_pair.1 },
        "chain": output::chain_terms(&g.chain, tc.complex.labels(1)),
        "parity_variant": variant.name(),
        "parity": parity.to_string(),
        "is_cycle": is_cycle,
        "is_boundary": boundary.is_boundary,
        "witness": boundary.witness.as_ref().map(|w| output::chain_terms(w, tc.complex.labels(2))),
        "audit": audits.iter().map(audit_summary).collect::<Vec<_>>(),
    });
    let table = output::gamma_table(&doc);
    Ok((doc, table))
}

fn audit_summary(a: &ParityAudit) -> Value {
    json!({
        "variant": a.variant.name(),
        "triangles": a.triangles,
        "violation_count": a.violations.len(),
        "violations": a.violations,
    })
}

pub fn cmd_gen_ham(a: &GenHamArgs) -> Outcome {
    match hamiltonian_formula(a.n) {
        Ok(h) => deliver(h.to_dimacs(), a.output.as_deref()),
        Err(e) => Outcome {
            code: exit::INPUT,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn load_graph(input: &Path, which: GraphArg, sel: &Selection, opts: &BuildOptions) -> Result<ConfigGraph, Failure> {
    if input.extension().is_some_and(|e| e == "json") {
        return ConfigGraph::from_json(&read_text(input)?).map_err(|e| Failure::in_file(input, e));
    }
    let f = read_formula(input)?;
    let mode = graph_mode(which, sel, &f, opts)?;
    Ok(build_config_graph(&f, &mode, time_bound(&f, &mode), opts.graph_var_cap)?)
}

pub fn cmd_homotopy(a: &HomotopyArgs) -> CmdResult {
    let opts = a.common.options()?;
    let model = path_model(a.model)?;
    let g = load_graph(&a.input, a.graph, &a.selection, &opts)?;
    let report = chain_homotopy_check(&g, model, a.max_degree, !a.no_augment, &opts)?;
    let doc = json!({
        "schema": "comphom.homotopy/1",
        "input": input_name(&a.input),
        "configurations": g.len(),
        "report": report,
        "all_hold": report.all_hold(),
    });
    let table = output::homotopy_table(&doc);
    Ok((doc, table))
}

pub fn cmd_conformance(a: &ConformanceArgs) -> CmdResult {
    let opts = a.common.options()?;
    let report = run_conformance(&a.corpus, &opts)?;
    let doc = serde_json::to_value(&report).map_err(Error::from)?;
    let table = output::conformance_table(&report);
    Ok((doc, table))
}

pub fn cmd_parity_audit(a: &ParityAuditArgs) -> CmdResult {
    let opts = a.common.options()?;
    let f = read_formula(&a.input)?;
    let asg = satisfying_assignment(a.selection.assignment.as_deref(), &f, &opts)?;
    let orders = orders_for(a.selection.orders, f.num_clauses(), OrdersArg::All, &opts)?;
    let tc = build_trace_complex(&f, &asg, &orders, a.shape.into())?;
    let audits = match a.parity_variant {
        Some(v) => {
            let v: ParityVariant = v.into();
            vec![ParityAudit {
                variant: v,
                triangles: tc.triangles.len(),
                violations: parity_boundary_audit(&tc, v)?,
            }]
        }
        None => audit_all_variants(&tc)?,
    };
    let doc = json!({
        "schema": "comphom.parity-audit/1",
        "input": input_name(&a.input),
        "assignment": asg.to_string(),
        "orders": orders.len(),
        "shape": output::shape_name(a.shape),
        "triangles": tc.triangles.len(),
        "audits": audits.iter().map(audit_summary).collect::<Vec<_>>(),
    });
    let table = output::audit_table(&doc);
    Ok((doc, table))
}

pub fn cmd_graph(a: &GraphArgs) -> CmdResult {
    let opts = a.common.options()?;
    let g = load_graph(&a.input, a.graph, &a.selection, &opts)?;
    let doc: Value = serde_json::from_str(&g.to_json()?).map_err(Error::from)?;
    let table = output::graph_table(&g);
    Ok((doc, table))
}
