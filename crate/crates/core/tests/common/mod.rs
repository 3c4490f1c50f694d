#![allow(dead_code)]

use proptest::prelude::*;

use comphom_core::linalg::IntMatrix;
use comphom_core::verifier::{Assignment, CnfFormula};

/// Formulas with 1..=3 variables and 0..=4 clauses, no repeated variable
/// inside a clause.
pub fn formula() -> impl Strategy<Value = CnfFormula> {
    (1usize..=3).prop_flat_map(|n| {
        let clause = proptest::sample::subsequence((1..=n as i32).collect::<Vec<_>>(), 1..=n)
            .prop_flat_map(|vars| {
                let k = vars.len();
                (Just(vars), proptest::collection::vec(any::<bool>(), k))
            })
            .prop_map(|(vars, signs)| {
                vars.into_iter()
                    .zip(signs)
                    .map(|(v, pos)| if pos { v } else { -v })
                    .collect::<Vec<i32>>()
            });
        proptest::collection::vec(clause, 0..=4).prop_map(move |cs| CnfFormula::new(n, cs).unwrap())
    })
}

pub fn formula_and_assignment() -> impl Strategy<Value = (CnfFormula, Assignment)> {
    formula().prop_flat_map(|f| {
        let n = f.num_vars();
        (Just(f), proptest::collection::vec(any::<bool>(), n).prop_map(Assignment::new))
    })
}

pub fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        proptest::collection::vec(prop_oneof![3 => Just(0i64), 7 => -9i64..=9], r * c)
            .prop_map(move |data| IntMatrix::from_i64(r, c, &data))
    })
}
