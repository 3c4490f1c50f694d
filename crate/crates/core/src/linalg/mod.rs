//! Exact integer linear algebra.
//!
//! [`IntMatrix`] stores only nonzero entries, keyed by `(row, col)` in a
//! `BTreeMap` so that iteration order (and everything serialized from it) is
//! deterministic. Entries are arbitrary precision; Smith normal form pivoting
//! grows coefficients quickly and fixed-width arithmetic would silently
//! corrupt torsion.

mod snf;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use snf::{kernel_basis, rank, snf, solve_integer, SmithDecomposition, SmithSolver};
pub(crate) use snf::invariant_factors;

/// Sparse matrix over the integers. No stored entry is zero and every index is
/// in bounds.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.entries.insert((i, i), BigInt::one());
        }
        m
    }

    /// Builds a matrix from row-major `i64` data. Panics if `data` does not
    /// hold exactly `rows * cols` values; intended for literals and tests.
    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data has the wrong length");
        let mut m = IntMatrix::zeros(rows, cols);
        for (k, &v) in data.iter().enumerate() {
            if v != 0 {
                m.entries.insert((k / cols, k % cols), BigInt::from(v));
            }
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triples. Repeated positions are
    /// summed; zeros are dropped.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, BigInt)>,
    {
        let mut m = IntMatrix::zeros(rows, cols);
        for (r, c, v) in triplets {
            m.check_index(r, c)?;
            let slot = m.entries.entry((r, c)).or_insert_with(BigInt::zero);
            *slot += v;
            if slot.is_zero() {
                m.entries.remove(&(r, c));
            }
        }
        Ok(m)
    }

    pub fn from_dense(rows: usize, cols: usize, data: &[Vec<BigInt>]) -> Result<Self> {
        if data.len() != rows {
            return Err(Error::DimensionMismatch {
                context: "dense rows",
                expected: rows,
                found: data.len(),
            });
        }
        let mut m = IntMatrix::zeros(rows, cols);
        for (r, row) in data.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "dense row length",
                    expected: cols,
                    found: row.len(),
                });
            }
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.entries.insert((r, c), v.clone());
                }
            }
        }
        Ok(m)
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Result<Self> {
        let mut m = IntMatrix::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch {
                    context: "column length",
                    expected: rows,
                    found: col.len(),
                });
            }
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.entries.insert((r, c), v.clone());
                }
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_index(&self, r: usize, c: usize) -> Result<()> {
        if r >= self.rows || c >= self.cols {
            return Err(Error::invalid(format!(
                "entry ({r}, {c}) outside a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.entries.get(&(r, c)).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigInt) -> Result<()> {
        self.check_index(r, c)?;
        if value.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), value);
        }
        Ok(())
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn transpose(&self) -> Self {
        IntMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), v)| ((c, r), v.clone()))
                .collect(),
        }
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.rows];
        for (&(r, cc), v) in &self.entries {
            if cc == c {
                out[r] = v.clone();
            }
        }
        out
    }

    /// All columns as dense vectors, in one pass over the entries.
    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.rows]; self.cols];
        for (&(r, c), v) in &self.entries {
            out[c][r] = v.clone();
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (&(r, c), v) in &self.entries {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut by_row: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); other.rows];
        for (&(r, c), v) in &other.entries {
            by_row[r].push((c, v));
        }
        let mut acc: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for (&(i, k), a) in &self.entries {
            for &(j, b) in &by_row[k] {
                *acc.entry((i, j)).or_insert_with(BigInt::zero) += a * b;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(IntMatrix {
            rows: self.rows,
            cols: other.cols,
            entries: acc,
        })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut out = vec![BigInt::zero(); self.rows];
        for (&(r, c), a) in &self.entries {
            if !v[c].is_zero() {
                out[r] += a * &v[c];
            }
        }
        Ok(out)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                context: "determinant of a non-square matrix",
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.to_dense();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    /// Largest absolute value among the entries (zero for the zero matrix).
    pub fn max_abs(&self) -> BigInt {
        self.entries
            .values()
            .map(|v| v.abs())
            .max()
            .unwrap_or_default()
    }

    /// Parses the plain-text matrix fixture format: a `rows cols` header
    /// followed by one zero-based `r c value` triple per line. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn parse_fixture(text: &str) -> Result<IntMatrix> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing `rows cols` header"))?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        if dims.len() != 2 {
            return Err(Error::parse(hline, "header must be `rows cols`"));
        }
        let rows = parse_count(dims[0], hline)?;
        let cols = parse_count(dims[1], hline)?;

        let mut m = IntMatrix::zeros(rows, cols);
        for (ln, line) in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::parse(ln, "expected `row col value`"));
            }
            let r = parse_count(parts[0], ln)?;
            let c = parse_count(parts[1], ln)?;
            let v: BigInt = parts[2]
                .parse()
                .map_err(|_| Error::parse(ln, format!("bad integer `{}`", parts[2])))?;
            if r >= rows || c >= cols {
                return Err(Error::parse(
                    ln,
                    format!("index ({r}, {c}) outside {rows}x{cols}"),
                ));
            }
            if m.entries.contains_key(&(r, c)) {
                return Err(Error::parse(ln, format!("duplicate entry ({r}, {c})")));
            }
            if !v.is_zero() {
                m.entries.insert((r, c), v);
            }
        }
        Ok(m)
    }

    pub fn to_fixture_string(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for (&(r, c), v) in &self.entries {
            let _ = writeln!(out, "{r} {c} {v}");
        }
        out
    }
}

fn parse_count(s: &str, line: usize) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("bad count `{s}`")))
}

/// Integer vector helpers shared by the chain-level code.
pub(crate) fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}
