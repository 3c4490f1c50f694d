//! CNF formulas and the clause-checking SAT verifier.

mod dimacs;
mod graph;
mod trace;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use dimacs::{parse_dimacs, write_dimacs};
pub use graph::{build_config_graph, ConfigEdge, ConfigGraph, GraphMode};
pub use trace::{dpll_trace, verification_trace, ConfigKey, Phase, StepKind, VerifierConfig};

/// A CNF formula. Clause order is significant: it is the canonical
/// verification order `C_1 … C_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        for (ci, clause) in clauses.iter().enumerate() {
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                    return Err(Error::invalid(format!(
                        "clause {ci}: literal {lit} outside 1..={num_vars}"
                    )));
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn clause(&self, i: usize) -> &[i32] {
        &self.clauses[i]
    }

    fn check_assignment(&self, a: &Assignment) -> Result<()> {
        if a.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                context: "assignment length",
                expected: self.num_vars,
                found: a.len(),
            });
        }
        Ok(())
    }

    pub fn clause_satisfied(&self, clause: usize, a: &Assignment) -> bool {
        self.clauses[clause].iter().any(|&l| a.literal(l))
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool> {
        self.check_assignment(a)?;
        Ok((0..self.clauses.len()).all(|c| self.clause_satisfied(c, a)))
    }

    /// Every satisfying assignment, in the order of [`Assignment::enumerate`].
    pub fn satisfying_assignments(&self, var_cap: usize) -> Result<Vec<Assignment>> {
        Ok(Assignment::enumerate(self.num_vars, var_cap)?
            .filter(|a| (0..self.clauses.len()).all(|c| self.clause_satisfied(c, a)))
            .collect())
    }

    pub fn first_satisfying(&self, var_cap: usize) -> Result<Option<Assignment>> {
        Ok(Assignment::enumerate(self.num_vars, var_cap)?
            .find(|a| (0..self.clauses.len()).all(|c| self.clause_satisfied(c, a))))
    }
}

/// A total truth assignment; `values[i]` is the value of variable `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn value(&self, var: usize) -> bool {
        self.values[var - 1]
    }

    pub fn literal(&self, lit: i32) -> bool {
        let v = self.values[lit.unsigned_abs() as usize - 1];
        if lit > 0 {
            v
        } else {
            !v
        }
    }

    /// All assignments over `num_vars` variables in lexicographic order with
    /// `true` before `false`, variable 1 most significant: `TT, TF, FT, FF`.
    pub fn enumerate(num_vars: usize, var_cap: usize) -> Result<impl Iterator<Item = Assignment>> {
        if num_vars > var_cap || num_vars >= 63 {
            return Err(Error::CapExceeded {
                what: "brute-force variable count",
                count: num_vars,
                cap: var_cap.min(62),
            });
        }
        Ok((0u64..1 << num_vars).map(move |mask| Assignment {
            values: (0..num_vars)
                .map(|i| mask >> (num_vars - 1 - i) & 1 == 0)
                .collect(),
        }))
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &v in &self.values {
            f.write_str(if v { "T" } else { "F" })?;
        }
        Ok(())
    }
}

impl FromStr for Assignment {
    type Err = Error;

    /// Accepts `TF…` / `10…` strings, or a literal list such as `1,-2` or `1 -2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if !s.is_empty() && s.chars().all(|c| matches!(c, 'T' | 'F' | 't' | 'f' | '1' | '0')) {
            return Ok(Assignment {
                values: s.chars().map(|c| matches!(c, 'T' | 't' | '1')).collect(),
            });
        }
        let lits: Vec<i64> = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().map_err(|_| Error::invalid(format!("bad literal `{t}`"))))
            .collect::<Result<_>>()?;
        let n = lits.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0);
        let mut values: Vec<Option<bool>> = vec![None; n];
        for &l in &lits {
            if l == 0 {
                return Err(Error::invalid("literal 0 in assignment"));
            }
            let slot = &mut values[l.unsigned_abs() as usize - 1];
            if slot.is_some() {
                return Err(Error::invalid(format!("variable {} assigned twice", l.abs())));
            }
            *slot = Some(l > 0);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::invalid(format!("variable {} unassigned", i + 1))))
            .collect::<Result<_>>()?;
        Ok(Assignment { values })
    }
}

/// `[0, 1, …, m-1]`
pub fn natural_order(m: usize) -> Vec<usize> {
    (0..m).collect()
}

/// `[m-1, …, 1, 0]`
pub fn reverse_order(m: usize) -> Vec<usize> {
    (0..m).rev().collect()
}

/// Every permutation of `0..m` in lexicographic order; refuses when `m!`
/// exceeds `cap`.
pub fn all_orders(m: usize, cap: usize) -> Result<Vec<Vec<usize>>> {
    let count = (1..=m).try_fold(1usize, |acc, k| acc.checked_mul(k));
    match count {
        Some(c) if c <= cap => {}
        _ => {
            return Err(Error::CapExceeded {
                what: "clause orders",
                count: count.unwrap_or(usize::MAX),
                cap,
            })
        }
    }
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..m).collect();
    loop {
        out.push(perm.clone());
        // next lexicographic permutation
        let Some(i) = (1..perm.len()).rev().find(|&i| perm[i - 1] < perm[i]) else {
            break;
        };
        let j = (i..perm.len()).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    Ok(out)
}

pub(crate) fn check_order(order: &[usize], m: usize) -> Result<()> {
    let mut seen = vec![false; m];
    if order.len() != m {
        return Err(Error::invalid(format!(
            "order {order:?} has {} entries for {m} clauses",
            order.len()
        )));
    }
    for &c in order {
        if c >= m || std::mem::replace(&mut seen[c], true) {
            return Err(Error::invalid(format!("order {order:?} is not a permutation of 0..{m}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi() -> CnfFormula {
        CnfFormula::new(2, vec![vec![1, 2], vec![-1, 2], vec![1, -2]]).unwrap()
    }

    fn asg(s: &str) -> Assignment {
        s.parse().unwrap()
    }

    #[test]
    fn eval_examples() {
        let f = phi();
        assert!(f.eval(&asg("TT")).unwrap());
        assert!(!f.eval(&asg("FF")).unwrap());
        let empty = CnfFormula::new(1, vec![]).unwrap();
        assert!(empty.eval(&asg("F")).unwrap());
        assert!(f.eval(&asg("T")).is_err());
    }

    #[test]
    fn eval_matches_truth_table() {
        // Hand-evaluated: TF violates ¬x1 ∨ x2, FT violates x1 ∨ ¬x2.
        let expected = [("TT", true), ("TF", false), ("FT", false), ("FF", false)];
        for (a, want) in expected {
            assert_eq!(phi().eval(&asg(a)).unwrap(), want, "{a}");
        }
    }

    #[test]
    fn satisfying_sets() {
        let sats: Vec<String> = phi()
            .satisfying_assignments(20)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(sats, ["TT"]);
        let psi = CnfFormula::new(1, vec![vec![1], vec![-1]]).unwrap();
        assert!(psi.satisfying_assignments(20).unwrap().is_empty());
        let x1 = CnfFormula::new(1, vec![vec![1]]).unwrap();
        assert_eq!(x1.satisfying_assignments(20).unwrap(), vec![asg("T")]);
        let wide = CnfFormula::new(21, vec![]).unwrap();
        assert!(matches!(
            wide.satisfying_assignments(20),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn literal_range_checked() {
        assert!(CnfFormula::new(1, vec![vec![2]]).is_err());
        assert!(CnfFormula::new(1, vec![vec![0]]).is_err());
    }

    #[test]
    fn assignment_parsing() {
        assert_eq!(asg("TF"), Assignment::new(vec![true, false]));
        assert_eq!(asg("10"), Assignment::new(vec![true, false]));
        assert_eq!(asg("1,-2"), Assignment::new(vec![true, false]));
        assert_eq!(asg("-1 2"), Assignment::new(vec![false, true]));
        assert_eq!(asg("T"), Assignment::new(vec![true]));
        assert_eq!(asg("1"), Assignment::new(vec![true]));
        assert!("1,1".parse::<Assignment>().is_err());
        assert!("2".parse::<Assignment>().is_err());
    }

    #[test]
    fn orders() {
        assert_eq!(natural_order(3), vec![0, 1, 2]);
        assert_eq!(reverse_order(3), vec![2, 1, 0]);
        let all = all_orders(3, 100).unwrap();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[5], vec![2, 1, 0]);
        assert_eq!(all_orders(0, 1).unwrap(), vec![Vec::<usize>::new()]);
        assert!(all_orders(5, 100).is_err());
        assert!(check_order(&[0, 0, 1], 3).is_err());
        assert!(check_order(&[0, 1], 3).is_err());
        assert!(check_order(&[2, 0, 1], 3).is_ok());
    }
}
