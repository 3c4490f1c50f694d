use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;
use crate::error::{Error, Result};

/// `left · A · right = diagonal`, with `left` and `right` unimodular.
///
/// `invariant_factors` are the nonzero diagonal entries in order; each
/// divides the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub left: IntMatrix,
    pub diagonal: IntMatrix,
    pub right: IntMatrix,
    pub invariant_factors: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

type Dense = Vec<Vec<BigInt>>;

fn dense_identity(n: usize) -> Dense {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Working state of the elimination. The right transform is stored
/// transposed so that column operations on it become row operations.
struct Elimination {
    a: Dense,
    rows: usize,
    cols: usize,
    left: Option<Dense>,
    right_t: Option<Dense>,
}

fn add_row_multiple(m: &mut Dense, target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (t, s) = if target < source {
        let (lo, hi) = m.split_at_mut(source);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(target);
        (&mut hi[0], &lo[source])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x += q * y;
        }
    }
}

impl Elimination {
    fn new(a: &IntMatrix, track_left: bool, track_right: bool) -> Self {
        Elimination {
            a: a.to_dense(),
            rows: a.rows(),
            cols: a.cols(),
            left: track_left.then(|| dense_identity(a.rows())),
            right_t: track_right.then(|| dense_identity(a.cols())),
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = self.left.as_mut() {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(vt) = self.right_t.as_mut() {
            vt.swap(i, j);
        }
    }

    /// row[target] += q · row[source]
    fn add_row(&mut self, target: usize, source: usize, q: &BigInt) {
        add_row_multiple(&mut self.a, target, source, q);
        if let Some(u) = self.left.as_mut() {
            add_row_multiple(u, target, source, q);
        }
    }

    /// col[target] += q · col[source]
    fn add_col(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for row in &mut self.a {
            if !row[source].is_zero() {
                let delta = q * &row[source];
                row[target] += delta;
            }
        }
        if let Some(vt) = self.right_t.as_mut() {
            add_row_multiple(vt, target, source, q);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -std::mem::take(x);
        }
        if let Some(u) = self.left.as_mut() {
            for x in &mut u[i] {
                *x = -std::mem::take(x);
            }
        }
    }

    fn min_nonzero_from(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let v = &self.a[i][j];
                if v.is_zero() {
                    continue;
                }
                let abs = v.abs();
                if best.as_ref().is_none_or(|(_, _, b)| abs < *b) {
                    if abs.is_one() {
                        return Some((i, j));
                    }
                    best = Some((i, j, abs));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Smallest nonzero entry in row `t` or column `t` at or past the pivot.
    fn min_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t);
        let mut best_abs = self.a[t][t].abs();
        let mut consider = |i: usize, j: usize, v: &BigInt| {
            if !v.is_zero() && (best_abs.is_zero() || v.abs() < best_abs) {
                best = (i, j);
                best_abs = v.abs();
            }
        };
        for i in t + 1..self.rows {
            consider(i, t, &self.a[i][t]);
        }
        for j in t + 1..self.cols {
            consider(t, j, &self.a[t][j]);
        }
        best
    }

    fn run(&mut self) -> Vec<BigInt> {
        let mut factors = Vec::new();
        let mut t = 0;
        while t < self.rows.min(self.cols) {
            let Some((pi, pj)) = self.min_nonzero_from(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..self.rows {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = -self.a[i][t].div_floor(&self.a[t][t]);
                    self.add_row(i, t, &q);
                    clean &= self.a[i][t].is_zero();
                }
                for j in t + 1..self.cols {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = -self.a[t][j].div_floor(&self.a[t][t]);
                    self.add_col(j, t, &q);
                    clean &= self.a[t][j].is_zero();
                }
                if !clean {
                    let (i, j) = self.min_in_cross(t);
                    self.swap_rows(t, i);
                    self.swap_cols(t, j);
                    continue;
                }
                let pivot = self.a[t][t].clone();
                let offender = (t + 1..self.rows).find(|&i| {
                    self.a[i][t + 1..]
                        .iter()
                        .any(|v| !v.is_zero() && !v.is_multiple_of(&pivot))
                });
                match offender {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            factors.push(self.a[t][t].clone());
            t += 1;
        }
        factors
    }
}

fn to_matrix(rows: usize, cols: usize, d: &Dense) -> IntMatrix {
    IntMatrix::from_dense(rows, cols, d).expect("dense working storage has consistent shape")
}

/// Smith normal form with both unimodular transforms.
pub fn snf(a: &IntMatrix) -> SmithDecomposition {
    let mut e = Elimination::new(a, true, true);
    let invariant_factors = e.run();
    let right_t = e.right_t.take().expect("right transform tracked");
    let right = to_matrix(a.cols(), a.cols(), &right_t).transpose();
    SmithDecomposition {
        left: to_matrix(a.rows(), a.rows(), e.left.as_ref().expect("left transform tracked")),
        diagonal: to_matrix(a.rows(), a.cols(), &e.a),
        right,
        invariant_factors,
    }
}

/// Invariant factors only, without building transforms.
pub(crate) fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    Elimination::new(a, false, false).run()
}

pub fn rank(a: &IntMatrix) -> usize {
    invariant_factors(a).len()
}

/// A lattice basis of the integer kernel `{v ∈ ℤⁿ : A·v = 0}`, taken from the
/// trailing columns of the right Smith transform.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let mut e = Elimination::new(a, false, true);
    let r = e.run().len();
    let right_t = e.right_t.take().expect("right transform tracked");
    right_t.into_iter().skip(r).collect()
}

/// Reusable `A·x = b` solver over the integers built from one Smith
/// decomposition.
#[derive(Clone, Debug)]
pub struct SmithSolver {
    rows: usize,
    cols: usize,
    left: Dense,
    right_t: Dense,
    factors: Vec<BigInt>,
    matrix: IntMatrix,
}

impl SmithSolver {
    pub fn new(a: &IntMatrix) -> Self {
        let mut e = Elimination::new(a, true, true);
        let factors = e.run();
        SmithSolver {
            rows: a.rows(),
            cols: a.cols(),
            left: e.left.take().expect("left transform tracked"),
            right_t: e.right_t.take().expect("right transform tracked"),
            factors,
            matrix: a.clone(),
        }
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.factors
    }

    /// One integer solution of `A·x = b`, or `None` if none exists. Any
    /// returned solution has been checked by multiplication.
    pub fn solve(&self, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                context: "right-hand side length",
                expected: self.rows,
                found: b.len(),
            });
        }
        // D·y = U·b, x = V·y
        let c: Vec<BigInt> = self
            .left
            .iter()
            .map(|row| {
                row.iter()
                    .zip(b)
                    .filter(|(u, _)| !u.is_zero())
                    .fold(BigInt::zero(), |acc, (u, bi)| acc + u * bi)
            })
            .collect();
        let r = self.factors.len();
        if c[r..].iter().any(|v| !v.is_zero()) {
            return Ok(None);
        }
        let mut y = Vec::with_capacity(r);
        for (ci, d) in c.iter().zip(&self.factors) {
            let (q, rem) = ci.div_rem(d);
            if !rem.is_zero() {
                return Ok(None);
            }
            y.push(q);
        }
        let mut x = vec![BigInt::zero(); self.cols];
        for (yi, vrow) in y.iter().zip(&self.right_t) {
            if yi.is_zero() {
                continue;
            }
            for (xj, v) in x.iter_mut().zip(vrow) {
                if !v.is_zero() {
                    *xj += yi * v;
                }
            }
        }
        let check = self.matrix.mul_vec(&x)?;
        debug_assert_eq!(check, b);
        if check != b {
            return Err(Error::invalid("integer solve failed its own verification"));
        }
        Ok(Some(x))
    }
}

pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            context: "right-hand side length",
            expected: a.rows(),
            found: b.len(),
        });
    }
    SmithSolver::new(a).solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check(a: &IntMatrix) -> SmithDecomposition {
        let s = snf(a);
        let prod = s.left.mul(a).unwrap().mul(&s.right).unwrap();
        assert_eq!(prod, s.diagonal);
        assert!(s.left.determinant().unwrap().abs().is_one());
        assert!(s.right.determinant().unwrap().abs().is_one());
        for (r, c, _) in s.diagonal.entries() {
            assert_eq!(r, c);
        }
        for w in s.invariant_factors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn identity_and_zero() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.invariant_factors, big(&[1, 1, 1]));
        assert_eq!(s.diagonal, IntMatrix::identity(3));
        let s = check(&IntMatrix::zeros(2, 2));
        assert!(s.invariant_factors.is_empty());
        assert!(s.diagonal.is_zero());
    }

    #[test]
    fn two_by_two_example() {
        // gcd of entries is 2 and |det| = 8, so the factors are 2 and 4.
        let s = check(&IntMatrix::from_i64(2, 2, &[2, 4, 6, 8]));
        assert_eq!(s.invariant_factors, big(&[2, 4]));
    }

    #[test]
    fn divisibility_fix_needed() {
        // diag(2, 3) is already diagonal but not in Smith form.
        let s = check(&IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]));
        assert_eq!(s.invariant_factors, big(&[1, 6]));
        let s = check(&IntMatrix::from_i64(3, 3, &[4, 0, 0, 0, 6, 0, 0, 0, 10]));
        assert_eq!(s.invariant_factors, big(&[2, 2, 60]));
    }

    #[test]
    fn rectangular_and_empty_shapes() {
        check(&IntMatrix::from_i64(2, 4, &[1, 2, 3, 4, 5, 6, 7, 8]));
        check(&IntMatrix::from_i64(4, 1, &[0, -3, 6, 9]));
        let s = check(&IntMatrix::zeros(0, 3));
        assert_eq!(s.right.rows(), 3);
        assert_eq!(kernel_basis(&IntMatrix::zeros(0, 3)).len(), 3);
        assert!(kernel_basis(&IntMatrix::zeros(3, 0)).is_empty());
    }

    #[test]
    fn rank_cases() {
        assert_eq!(rank(&IntMatrix::identity(3)), 3);
        assert_eq!(rank(&IntMatrix::zeros(4, 2)), 0);
        assert_eq!(rank(&IntMatrix::from_i64(2, 2, &[1, 2, 2, 4])), 1);
    }

    #[test]
    fn kernel_of_difference_row() {
        let a = IntMatrix::from_i64(1, 2, &[1, -1]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert!(v == &big(&[1, 1]) || v == &big(&[-1, -1]));
        assert!(kernel_basis(&IntMatrix::identity(3)).is_empty());
    }

    #[test]
    fn kernel_is_a_lattice_basis() {
        // ker [2 4] over ℤ is generated by (2,-1); (-2,1) is fine too but
        // (4,-2) alone would only be a rational basis.
        let k = kernel_basis(&IntMatrix::from_i64(1, 2, &[2, 4]));
        assert_eq!(k.len(), 1);
        assert!(k[0] == big(&[2, -1]) || k[0] == big(&[-2, 1]));
    }

    #[test]
    fn solve_small_cases() {
        let a = IntMatrix::from_i64(1, 1, &[2]);
        assert_eq!(solve_integer(&a, &big(&[4])).unwrap(), Some(big(&[2])));
        assert_eq!(solve_integer(&a, &big(&[3])).unwrap(), None);
        assert!(matches!(
            solve_integer(&a, &big(&[1, 2])),
            Err(Error::DimensionMismatch { .. })
        ));
        let a = IntMatrix::from_i64(2, 1, &[1, 1]);
        assert_eq!(solve_integer(&a, &big(&[1, 0])).unwrap(), None);
    }
}
