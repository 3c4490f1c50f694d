use std::fmt;

use serde::{Deserialize, Serialize};

use super::{check_order, Assignment, CnfFormula};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    Initial,
    Checking,
    Accepting,
    Rejecting,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Initial => "initial",
            Phase::Checking => "checking",
            Phase::Accepting => "accepting",
            Phase::Rejecting => "rejecting",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    Decision,
    UnitPropagation,
    ClauseCheck,
    Backtrack,
    None,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKind::Decision => "decision",
            StepKind::UnitPropagation => "unit-propagation",
            StepKind::ClauseCheck => "clause-check",
            StepKind::Backtrack => "backtrack",
            StepKind::None => "none",
        })
    }
}

/// One verifier machine state.
///
/// `checked` is the set of clauses verified so far (sorted). For a rejecting
/// configuration `next_clause` is the violated clause.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VerifierConfig {
    pub assignment: Vec<Option<bool>>,
    pub checked: Vec<usize>,
    pub next_clause: Option<usize>,
    pub phase: Phase,
    pub step: StepKind,
    pub time: usize,
}

/// Structural identity of a configuration. The order in which clauses were
/// checked is not part of it, so traces that check the same set of clauses
/// in different orders meet in the same configuration.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConfigKey {
    pub time: usize,
    pub phase: Phase,
    pub checked: Vec<usize>,
    pub assignment: Vec<Option<bool>>,
    pub failed: Option<usize>,
}

impl VerifierConfig {
    pub fn key(&self) -> ConfigKey {
        ConfigKey {
            time: self.time,
            phase: self.phase,
            checked: self.checked.clone(),
            assignment: self.assignment.clone(),
            failed: (self.phase == Phase::Rejecting)
                .then_some(self.next_clause)
                .flatten(),
        }
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self.phase, Phase::Accepting | Phase::Rejecting)
    }

    /// Compact human-readable label, e.g. `t2 checking TF {0,2}`.
    pub fn label(&self) -> String {
        let values: String = self
            .assignment
            .iter()
            .map(|v| match v {
                Some(true) => 'T',
                Some(false) => 'F',
                None => '_',
            })
            .collect();
        let checked: Vec<String> = self.checked.iter().map(ToString::to_string).collect();
        let mut s = format!("t{} {} {} {{{}}}", self.time, self.phase, values, checked.join(","));
        if let (Phase::Rejecting, Some(c)) = (self.phase, self.next_clause) {
            s.push_str(&format!(" !c{c}"));
        }
        s
    }
}

/// Clause-by-clause verification of a total assignment in the given order:
/// the initial configuration, one configuration per checked clause, and an
/// accepting configuration, or a rejecting one at the first violated clause.
pub fn verification_trace(
    formula: &CnfFormula,
    assignment: &Assignment,
    order: &[usize],
) -> Result<Vec<VerifierConfig>> {
    formula.check_assignment(assignment)?;
    check_order(order, formula.num_clauses())?;
    let snapshot: Vec<Option<bool>> = assignment.values().iter().map(|&v| Some(v)).collect();
    let mut checked: Vec<usize> = Vec::new();
    let mut out = vec![VerifierConfig {
        assignment: snapshot.clone(),
        checked: Vec::new(),
        next_clause: order.first().copied(),
        phase: Phase::Initial,
        step: StepKind::None,
        time: 0,
    }];
    for (k, &clause) in order.iter().enumerate() {
        if !formula.clause_satisfied(clause, assignment) {
            out.push(VerifierConfig {
                assignment: snapshot,
                checked: checked.clone(),
                next_clause: Some(clause),
                phase: Phase::Rejecting,
                step: StepKind::ClauseCheck,
                time: k + 1,
            });
            return Ok(out);
        }
        let pos = checked.binary_search(&clause).unwrap_err();
        checked.insert(pos, clause);
        out.push(VerifierConfig {
            assignment: snapshot.clone(),
            checked: checked.clone(),
            next_clause: order.get(k + 1).copied(),
            phase: Phase::Checking,
            step: StepKind::ClauseCheck,
            time: k + 1,
        });
    }
    out.push(VerifierConfig {
        assignment: snapshot,
        checked,
        next_clause: None,
        phase: Phase::Accepting,
        step: StepKind::ClauseCheck,
        time: order.len() + 1,
    });
    Ok(out)
}

enum Status {
    Conflict(usize),
    Unit(usize, i32),
    Satisfied,
    Open,
}

fn scan(formula: &CnfFormula, partial: &[Option<bool>]) -> Status {
    let mut unit = None;
    let mut all_sat = true;
    for (ci, clause) in formula.clauses().iter().enumerate() {
        let mut sat = false;
        let mut free = Vec::new();
        for &lit in clause {
            match partial[lit.unsigned_abs() as usize - 1] {
                Some(v) if v == (lit > 0) => {
                    sat = true;
                    break;
                }
                Some(_) => {}
                None => free.push(lit),
            }
        }
        if sat {
            continue;
        }
        all_sat = false;
        match free.len() {
            0 => return Status::Conflict(ci),
            1 if unit.is_none() => unit = Some((ci, free[0])),
            _ => {}
        }
    }
    match unit {
        Some((c, l)) => Status::Unit(c, l),
        None if all_sat => Status::Satisfied,
        None => Status::Open,
    }
}

/// Deterministic DPLL run (unit propagation, decisions on the lowest free
/// variable with `true` first, chronological backtracking) recorded as a
/// configuration sequence. Only this mode produces decision, propagation and
/// backtrack steps.
pub fn dpll_trace(formula: &CnfFormula) -> Vec<VerifierConfig> {
    let n = formula.num_vars();
    let mut partial: Vec<Option<bool>> = vec![None; n];
    // (variable index, is an untried decision)
    let mut trail: Vec<(usize, bool)> = Vec::new();
    let mut out = vec![VerifierConfig {
        assignment: partial.clone(),
        checked: Vec::new(),
        next_clause: None,
        phase: Phase::Initial,
        step: StepKind::None,
        time: 0,
    }];
    loop {
        let time = out.len();
        let (phase, step, clause) = match scan(formula, &partial) {
            Status::Satisfied => (Phase::Accepting, StepKind::ClauseCheck, None),
            Status::Conflict(c) => match trail.iter().rposition(|&(_, open)| open) {
                None => (Phase::Rejecting, StepKind::ClauseCheck, Some(c)),
                Some(pos) => {
                    for &(v, _) in &trail[pos + 1..] {
                        partial[v] = None;
                    }
                    trail.truncate(pos + 1);
                    let v = trail[pos].0;
                    partial[v] = partial[v].map(|b| !b);
                    trail[pos].1 = false;
                    (Phase::Checking, StepKind::Backtrack, Some(c))
                }
            },
            Status::Unit(c, lit) => {
                let v = lit.unsigned_abs() as usize - 1;
                partial[v] = Some(lit > 0);
                trail.push((v, false));
                (Phase::Checking, StepKind::UnitPropagation, Some(c))
            }
            Status::Open => {
                let v = partial.iter().position(Option::is_none).expect("open formula has a free variable");
                partial[v] = Some(true);
                trail.push((v, true));
                (Phase::Checking, StepKind::Decision, None)
            }
        };
        out.push(VerifierConfig {
            assignment: partial.clone(),
            checked: Vec::new(),
            next_clause: clause,
            phase,
            step,
            time,
        });
        if phase != Phase::Checking {
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::{natural_order, reverse_order};

    fn phi() -> CnfFormula {
        CnfFormula::new(2, vec![vec![1, 2], vec![-1, 2], vec![1, -2]]).unwrap()
    }

    fn psi() -> CnfFormula {
        CnfFormula::new(1, vec![vec![1], vec![-1]]).unwrap()
    }

    #[test]
    fn accepting_trace_shape() {
        let t = verification_trace(&phi(), &"TT".parse().unwrap(), &natural_order(3)).unwrap();
        assert_eq!(t.len(), 5);
        let phases: Vec<Phase> = t.iter().map(|c| c.phase).collect();
        assert_eq!(
            phases,
            [Phase::Initial, Phase::Checking, Phase::Checking, Phase::Checking, Phase::Accepting]
        );
        assert_eq!(t[2].checked, vec![0, 1]);
        assert_eq!(t[2].next_clause, Some(2));
        assert_eq!(t[4].next_clause, None);
        assert_eq!(t[0].step, StepKind::None);
        assert!(t.windows(2).all(|w| w[1].time == w[0].time + 1));
    }

    #[test]
    fn rejecting_trace_stops_at_violation() {
        let t = verification_trace(&psi(), &"T".parse().unwrap(), &natural_order(2)).unwrap();
        assert_eq!(t.len(), 3);
        let last = t.last().unwrap();
        assert_eq!(last.phase, Phase::Rejecting);
        assert_eq!(last.next_clause, Some(1));
    }

    #[test]
    fn empty_formula_trace() {
        let f = CnfFormula::new(1, vec![]).unwrap();
        let t = verification_trace(&f, &"F".parse().unwrap(), &[]).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].phase, Phase::Initial);
        assert_eq!(t[1].phase, Phase::Accepting);
    }

    #[test]
    fn orders_share_endpoints() {
        let a = "TT".parse().unwrap();
        let nat = verification_trace(&phi(), &a, &natural_order(3)).unwrap();
        let rev = verification_trace(&phi(), &a, &reverse_order(3)).unwrap();
        assert_eq!(nat[0].key(), rev[0].key());
        assert_eq!(nat[4].key(), rev[4].key());
        assert_ne!(nat[1].key(), rev[1].key());
        assert_eq!(nat[3].key(), rev[3].key());
    }

    #[test]
    fn bad_order_rejected() {
        assert!(verification_trace(&phi(), &"TT".parse().unwrap(), &[0, 1]).is_err());
    }

    #[test]
    fn dpll_on_unsat_and_sat() {
        let t = dpll_trace(&psi());
        assert_eq!(t.last().unwrap().phase, Phase::Rejecting);
        assert!(t.iter().any(|c| c.step == StepKind::UnitPropagation));

        // x1 ∨ x2, ¬x1: propagate x1 = F, then x2 = T.
        let f = CnfFormula::new(2, vec![vec![1, 2], vec![-1]]).unwrap();
        let t = dpll_trace(&f);
        let last = t.last().unwrap();
        assert_eq!(last.phase, Phase::Accepting);
        assert_eq!(last.assignment, vec![Some(false), Some(true)]);

        // (x1 ∨ x2)(x1 ∨ ¬x2)(¬x1 ∨ x2)(¬x1 ∨ ¬x2) needs a backtrack.
        let f = CnfFormula::new(2, vec![vec![1, 2], vec![1, -2], vec![-1, 2], vec![-1, -2]]).unwrap();
        let t = dpll_trace(&f);
        assert!(t.iter().any(|c| c.step == StepKind::Decision));
        assert!(t.iter().any(|c| c.step == StepKind::Backtrack));
        assert_eq!(t.last().unwrap().phase, Phase::Rejecting);
        assert!(t.windows(2).all(|w| w[1].time == w[0].time + 1));
    }
}
