//! SAT-specific constructions on top of the path complexes.

mod gamma;
mod hamiltonian;
mod homotopy;
mod parity;
mod profile;

pub use gamma::{gamma_cycle, GammaCycle};
pub use hamiltonian::{hamiltonian_formula, HamiltonianFormula, HamiltonianMode, SUBCYCLE_EXCLUSION_MAX_N};
pub use homotopy::{chain_homotopy_check, Counterexample, DegreeReport, HomotopyReport, ResidualTerm};
pub use parity::{
    audit_all_variants, parity, parity_boundary_audit, parity_chain, trace_parity, ParityAudit, ParityValue,
    ParityVariant, ParityViolation,
};
pub use profile::{complexity_profile, ComplexityProfile, HValue, ProfileModel};
