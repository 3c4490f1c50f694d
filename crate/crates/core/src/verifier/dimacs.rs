use std::fmt::Write as _;

use super::CnfFormula;
use crate::error::{Error, Result};

/// Parses DIMACS CNF. Clauses keep file order; a clause may span lines and
/// must end with `0`. Lines starting with `c` are comments and a lone `%`
/// ends the clause section.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut current_start = 0;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line == "%" {
            break;
        }
        last_line = line_no;
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::parse(line_no, "duplicate problem line"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(Error::parse(line_no, "malformed header, expected `p cnf <vars> <clauses>`"));
            }
            let vars = parts[2]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("malformed header: bad variable count `{}`", parts[2])))?;
            let count = parts[3]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("malformed header: bad clause count `{}`", parts[3])))?;
            header = Some((vars, count, line_no));
            continue;
        }
        let Some((vars, _, _)) = header else {
            return Err(Error::parse(line_no, "clause before the `p cnf` header"));
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad literal `{tok}`")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if lit.unsigned_abs() as usize > vars {
                return Err(Error::parse(
                    line_no,
                    format!("literal {lit} out of range for {vars} variables"),
                ));
            }
            if current.is_empty() {
                current_start = line_no;
            }
            current.push(lit as i32);
        }
    }

    let Some((vars, count, header_line)) = header else {
        return Err(Error::parse(last_line.max(1), "missing `p cnf` header"));
    };
    if !current.is_empty() {
        return Err(Error::parse(current_start, "clause is missing its terminating 0"));
    }
    if clauses.len() != count {
        return Err(Error::parse(
            header_line,
            format!("header declares {count} clauses but {} were given", clauses.len()),
        ));
    }
    CnfFormula::new(vars, clauses)
}

/// Writes DIMACS CNF with the given comment lines (each prefixed `c `).
pub fn write_dimacs(formula: &CnfFormula, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "c {c}");
    }
    let _ = writeln!(out, "p cnf {} {}", formula.num_vars(), formula.num_clauses());
    for clause in formula.clauses() {
        for lit in clause {
            let _ = write!(out, "{lit} ");
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_variable_example() {
        let f = parse_dimacs("p cnf 2 3\n1 2 0\n-1 2 0\n1 -2 0\n").unwrap();
        assert_eq!(f.num_vars(), 2);
        assert_eq!(f.clauses(), &[vec![1, 2], vec![-1, 2], vec![1, -2]]);
    }

    #[test]
    fn unsat_example_and_vacuous_formula() {
        let f = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n").unwrap();
        assert_eq!(f.clauses(), &[vec![1], vec![-1]]);
        let f = parse_dimacs("p cnf 1 0\n").unwrap();
        assert_eq!(f.num_clauses(), 0);
    }

    #[test]
    fn comments_and_split_clauses() {
        let f = parse_dimacs("c hello\np cnf 3 2\n1 -2\n 3 0 2 0\n%\n0\n").unwrap();
        assert_eq!(f.clauses(), &[vec![1, -2, 3], vec![2]]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("p cnf x 1\n1 0\n", 1),
            ("p dnf 1 1\n1 0\n", 1),
            ("p cnf 1 1\n2 0\n", 2),
            ("p cnf 2 1\n1\n2\n", 2),
            ("1 0\n", 1),
            ("p cnf 1 2\n1 0\n", 1),
            ("p cnf 1 1\n1 a 0\n", 2),
        ];
        for (text, line) in cases {
            match parse_dimacs(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn writer_round_trips() {
        let f = parse_dimacs("p cnf 2 3\n1 2 0\n-1 2 0\n1 -2 0\n").unwrap();
        let text = write_dimacs(&f, &["generated".to_string()]);
        assert!(text.starts_with("c generated\np cnf 2 3\n"));
        assert_eq!(parse_dimacs(&text).unwrap(), f);
    }
}
