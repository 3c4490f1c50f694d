//! Exact integer homology of SAT-verifier computation paths.
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`] — sparse integer matrices and Smith normal form;
//! * [`complex`] — chain complexes, homology, cycle/boundary tests;
//! * [`verifier`] — CNF formulas, verifier configurations and their graph;
//! * [`paths`] — chain complexes generated by computation paths;
//! * [`topology`] — parity, γ cycles, Hamiltonian encodings, the chain
//!   homotopy check and complexity profiles;
//! * [`conformance`] — the registry of reproducible claims and its report.
//!
//! Large independent batches (path extension, boundary columns, per-degree
//! homology) go through [`Execution`]; with the `parallel` feature disabled
//! everything runs sequentially with identical results.

pub mod complex;
pub mod conformance;
pub mod error;
pub mod exec;
pub mod json;
pub mod linalg;
pub mod paths;
pub mod topology;
pub mod verifier;

pub use error::{Error, Result};
pub use exec::Execution;

/// Refusal thresholds shared by every builder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    /// Generators allowed in any single degree.
    pub generator_cap: usize,
    /// Variables allowed for brute-force satisfiability search.
    pub var_cap: usize,
    /// Variables allowed when every assignment contributes to a graph.
    pub graph_var_cap: usize,
    pub execution: Execution,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            generator_cap: 50_000,
            var_cap: 20,
            graph_var_cap: 12,
            execution: Execution::default(),
        }
    }
}
