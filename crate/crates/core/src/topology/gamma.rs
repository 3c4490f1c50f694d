use num_bigint::BigInt;
use num_traits::One;

use crate::complex::{BoundaryCheck, Chain};
use crate::error::{Error, Result};
use crate::paths::{build_trace_complex, TraceComplex, TraceShape};
use crate::verifier::{natural_order, reverse_order, Assignment, CnfFormula};

/// `e_natural − e_reverse` in the trace complex of one satisfying assignment.
#[derive(Clone, Debug)]
pub struct GammaCycle {
    pub chain: Chain,
    pub order_pair: (Vec<usize>, Vec<usize>),
    pub trace_complex: TraceComplex,
}

impl GammaCycle {
    pub fn is_cycle(&self) -> Result<bool> {
        self.trace_complex.complex.is_cycle(&self.chain)
    }

    pub fn is_boundary(&self) -> Result<BoundaryCheck> {
        self.trace_complex.complex.is_boundary(&self.chain)
    }
}

/// Needs `m ≥ 2`; with one clause the two orders coincide and the chain
/// would be zero.
pub fn gamma_cycle(formula: &CnfFormula, assignment: &Assignment, shape: TraceShape) -> Result<GammaCycle> {
    let m = formula.num_clauses();
    if !formula.eval(assignment)? {
        return Err(Error::NotSatisfying);
    }
    if m < 2 {
        return Err(Error::Degenerate(format!(
            "{m} clause(s): natural and reverse orders coincide, so the difference chain is zero"
        )));
    }
    let (nat, rev) = (natural_order(m), reverse_order(m));
    let tc = build_trace_complex(formula, assignment, &[nat.clone(), rev.clone()], shape)?;
    let e_nat = tc.edge_for_order(&nat).expect("natural edge present");
    let e_rev = tc.edge_for_order(&rev).expect("reverse edge present");
    let chain = Chain::from_terms(1, [(e_nat, BigInt::one()), (e_rev, -BigInt::one())]);
    Ok(GammaCycle {
        chain,
        order_pair: (nat, rev),
        trace_complex: tc,
    })
}
