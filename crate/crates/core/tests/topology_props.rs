mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use comphom_core::complex::Chain;
use comphom_core::paths::{build_trace_complex, PathModel, TraceShape};
use comphom_core::topology::{
    chain_homotopy_check, gamma_cycle, hamiltonian_formula, parity_boundary_audit, parity_chain, trace_parity,
    ParityValue, ParityVariant,
};
use comphom_core::verifier::{all_orders, build_config_graph, natural_order, reverse_order, CnfFormula, GraphMode};
use comphom_core::{BuildOptions, Error};

/// Satisfiable formulas with at least two clauses, with their first model.
fn satisfiable() -> impl Strategy<Value = (CnfFormula, comphom_core::verifier::Assignment)> {
    common::formula()
        .prop_filter("two clauses", |f| f.num_clauses() >= 2)
        .prop_filter_map("satisfiable", |f| {
            let a = f.first_satisfying(20).unwrap()?;
            Some((f, a))
        })
}

fn variant() -> impl Strategy<Value = ParityVariant> {
    prop_oneof![Just(ParityVariant::AdjacentPairs), Just(ParityVariant::AllPairs)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn gamma_is_a_cycle_with_parity_two((f, a) in satisfiable(), v in variant()) {
        for shape in [TraceShape::Plain, TraceShape::Subdivided] {
            let g = gamma_cycle(&f, &a, shape).unwrap();
            prop_assert!(g.is_cycle().unwrap());
            prop_assert_eq!(parity_chain(&g.trace_complex, &g.chain, v).unwrap(), ParityValue::integer(2));
        }
    }

    #[test]
    fn parity_is_linear(
        (f, a) in satisfiable(),
        v in variant(),
        k in -5i64..=5,
        l in -5i64..=5,
        seed in proptest::collection::vec(-3i64..=3, 256),
    ) {
        let orders = all_orders(f.num_clauses(), 1000).unwrap();
        let tc = build_trace_complex(&f, &a, &orders, TraceShape::Subdivided).unwrap();
        let n = tc.complex.basis_size(1);
        let u = Chain::from_dense(1, &seed[..n].iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
        let w = Chain::from_dense(1, &seed[256 - n..].iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
        let combo = u.scale(&BigInt::from(k)).plus(&w.scale(&BigInt::from(l))).unwrap();
        let lhs = parity_chain(&tc, &combo, v).unwrap().0;
        let rhs = parity_chain(&tc, &u, v).unwrap().0 * BigRational::from_integer(k.into())
            + parity_chain(&tc, &w, v).unwrap().0 * BigRational::from_integer(l.into());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn empty_audit_implies_gamma_is_not_a_boundary((f, a) in satisfiable(), v in variant()) {
        let g = gamma_cycle(&f, &a, TraceShape::Subdivided).unwrap();
        let audit = parity_boundary_audit(&g.trace_complex, v).unwrap();
        let parity = parity_chain(&g.trace_complex, &g.chain, v).unwrap();
        if audit.is_empty() && parity == ParityValue::integer(2) {
            prop_assert!(!g.is_boundary().unwrap().is_boundary);
        }
    }

    #[test]
    fn monotone_traces_score_plus_minus_one(m in 2usize..8, v in variant()) {
        prop_assert_eq!(trace_parity(&natural_order(m), v).unwrap(), ParityValue::integer(1));
        prop_assert_eq!(trace_parity(&reverse_order(m), v).unwrap(), ParityValue::integer(-1));
    }

    #[test]
    fn parity_is_bounded_by_one(order in Just((0..5).collect::<Vec<usize>>()).prop_shuffle(), v in variant()) {
        let p = trace_parity(&order, v).unwrap().0;
        prop_assert!(p <= BigRational::from_integer(1.into()) && p >= BigRational::from_integer((-1).into()));
    }

    #[test]
    fn homotopy_refuses_branching_graphs((f, a) in satisfiable()) {
        // both orders leave the shared initial configuration differently
        let mode = GraphMode::Single {
            assignment: a,
            orders: vec![natural_order(f.num_clauses()), reverse_order(f.num_clauses())],
        };
        let g = build_config_graph(&f, &mode, f.num_clauses() + 1, 12).unwrap();
        let err = chain_homotopy_check(&g, PathModel::Reachability, 2, true, &BuildOptions::default()).unwrap_err();
        let refused = matches!(err, Error::Nondeterministic { .. });
        prop_assert!(refused, "{}", err);
    }

    #[test]
    fn homotopy_reports_are_complete((f, a) in common::formula_and_assignment(), max in 0usize..3) {
        let mode = GraphMode::Single { assignment: a, orders: vec![natural_order(f.num_clauses())] };
        let g = build_config_graph(&f, &mode, f.num_clauses() + 1, 12).unwrap();
        for model in [PathModel::Step, PathModel::Reachability] {
            let r = chain_homotopy_check(&g, model, max, true, &BuildOptions::default()).unwrap();
            prop_assert_eq!(r.degrees.len(), max + 1);
            for d in &r.degrees {
                prop_assert_eq!(d.holds, d.counterexample.is_none());
                prop_assert!(d.failures <= d.generators);
            }
        }
    }
}

#[test]
fn hamiltonian_formulas_are_satisfiable() {
    for n in [3, 4] {
        let h = hamiltonian_formula(n).unwrap();
        assert!(h.formula.first_satisfying(20).unwrap().is_some(), "n = {n}");
    }
}
