use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::verifier::{write_dimacs, CnfFormula};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HamiltonianMode {
    /// Degree constraints plus clauses excluding every proper sub-cycle.
    SubcycleExclusion,
    /// Degree constraints only; models may be unions of disjoint cycles.
    DegreeOnly,
}

impl HamiltonianMode {
    pub fn name(self) -> &'static str {
        match self {
            HamiltonianMode::SubcycleExclusion => "subcycle-exclusion",
            HamiltonianMode::DegreeOnly => "degree-only",
        }
    }
}

/// Directed Hamiltonian cycles of the complete digraph on `n` vertices.
#[derive(Clone, Debug)]
pub struct HamiltonianFormula {
    pub n: usize,
    pub mode: HamiltonianMode,
    pub formula: CnfFormula,
}

/// Sub-cycle exclusion is only generated up to this many vertices.
pub const SUBCYCLE_EXCLUSION_MAX_N: usize = 4;

impl HamiltonianFormula {
    /// DIMACS variable of the arc `i → j` (0-based vertices, `i ≠ j`).
    pub fn var(&self, i: usize, j: usize) -> i32 {
        arc_var(self.n, i, j)
    }

    /// The arcs selected by a model, as a successor table.
    pub fn successor_table(&self, values: &[bool]) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for (i, row) in out.iter_mut().enumerate() {
            for j in (0..self.n).filter(|&j| j != i) {
                if values[self.var(i, j) as usize - 1] {
                    row.push(j);
                }
            }
        }
        out
    }

    pub fn header_comments(&self) -> Vec<String> {
        let mut c = vec![
            format!("directed hamiltonian cycle encoding, n = {}", self.n),
            format!("mode: {}", self.mode.name()),
        ];
        if self.mode == HamiltonianMode::DegreeOnly {
            c.push("degree-only: sub-cycles are not excluded, models may be cycle covers".to_string());
        }
        for i in 0..self.n {
            for j in (0..self.n).filter(|&j| j != i) {
                c.push(format!("var {} = x_{}_{}", self.var(i, j), i + 1, j + 1));
            }
        }
        c
    }

    pub fn to_dimacs(&self) -> String {
        write_dimacs(&self.formula, &self.header_comments())
    }
}

fn arc_var(n: usize, i: usize, j: usize) -> i32 {
    debug_assert!(i != j && i < n && j < n);
    let col = if j < i { j } else { j - 1 };
    (i * (n - 1) + col + 1) as i32
}

fn exactly_one(vars: &[i32], clauses: &mut Vec<Vec<i32>>) {
    clauses.push(vars.to_vec());
    for a in 0..vars.len() {
        for b in a + 1..vars.len() {
            clauses.push(vec![-vars[a], -vars[b]]);
        }
    }
}

/// Vertex subsets of `0..n` with `k` elements, lexicographic.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            go(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Cyclic orders of `set` starting at its smallest element.
fn directed_cycles(set: &[usize]) -> Vec<Vec<usize>> {
    let (first, rest) = set.split_first().expect("nonempty");
    let mut perm = rest.to_vec();
    let mut out = Vec::new();
    loop {
        let mut c = vec![*first];
        c.extend_from_slice(&perm);
        out.push(c);
        let Some(i) = (1..perm.len()).rev().find(|&i| perm[i - 1] < perm[i]) else {
            break;
        };
        let j = (i..perm.len()).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    out
}

/// Exactly one outgoing and one incoming arc per vertex; for
/// `n ≤ SUBCYCLE_EXCLUSION_MAX_N` also one clause `¬(all arcs of C)` per
/// directed cycle `C` of length `2 ..= n-2`, which leaves exactly the
/// Hamiltonian cycles as models.
pub fn hamiltonian_formula(n: usize) -> Result<HamiltonianFormula> {
    if n < 3 {
        return Err(Error::invalid(format!("hamiltonian encoding needs n >= 3, got {n}")));
    }
    let mut clauses = Vec::new();
    for i in 0..n {
        let out: Vec<i32> = (0..n).filter(|&j| j != i).map(|j| arc_var(n, i, j)).collect();
        exactly_one(&out, &mut clauses);
    }
    for j in 0..n {
        let inc: Vec<i32> = (0..n).filter(|&i| i != j).map(|i| arc_var(n, i, j)).collect();
        exactly_one(&inc, &mut clauses);
    }
    let mode = if n <= SUBCYCLE_EXCLUSION_MAX_N {
        for len in 2..=n.saturating_sub(2) {
            for set in subsets(n, len) {
                for cycle in directed_cycles(&set) {
                    let clause = (0..len)
                        .map(|k| -arc_var(n, cycle[k], cycle[(k + 1) % len]))
                        .collect();
                    clauses.push(clause);
                }
            }
        }
        HamiltonianMode::SubcycleExclusion
    } else {
        HamiltonianMode::DegreeOnly
    };
    let formula = CnfFormula::new(n * (n - 1), clauses)?;
    Ok(HamiltonianFormula { n, mode, formula })
}
