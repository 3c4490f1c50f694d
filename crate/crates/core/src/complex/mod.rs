//! Graded integer chain complexes and their homology.

mod io;

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{self, is_zero_vec, IntMatrix, SmithSolver};

pub use io::{parse_complex_text, read_complex, to_complex_text, write_complex_dir};

/// Free chain groups `C_0 … C_max` with boundary maps `d_n : C_n → C_{n-1}`.
///
/// `d_0` is the zero map and groups above `max_degree` are zero. Dimensions
/// are checked on construction; `d_{n-1}·d_n = 0` is not, so that invalid
/// complexes can be built and reported on by [`ChainComplex::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    labels: Vec<Vec<String>>,
    // boundaries[n - 1] is d_n
    boundaries: Vec<IntMatrix>,
}

/// Degrees `n` at which `d_{n-1}·d_n` is nonzero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<usize>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `ℤ^free_rank ⊕ ℤ/t_1 ⊕ … ⊕ ℤ/t_k` with `t_1 | t_2 | … | t_k`, all `t_i > 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub free_rank: usize,
    #[serde(with = "crate::json::big_vec")]
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn free(rank: usize) -> Self {
        HomologyGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// An element of `C_degree`, stored sparsely by generator index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Chain {
    degree: usize,
    coefficients: BTreeMap<usize, BigInt>,
}

impl Chain {
    pub fn zero(degree: usize) -> Self {
        Chain {
            degree,
            coefficients: BTreeMap::new(),
        }
    }

    pub fn generator(degree: usize, index: usize) -> Self {
        Chain::from_terms(degree, [(index, BigInt::one())])
    }

    pub fn from_terms<I>(degree: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, BigInt)>,
    {
        let mut c = Chain::zero(degree);
        for (i, v) in terms {
            c.add_term(i, v);
        }
        c
    }

    pub fn from_dense(degree: usize, values: &[BigInt]) -> Self {
        Chain::from_terms(
            degree,
            values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone())),
        )
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn add_term(&mut self, index: usize, value: BigInt) {
        let slot = self.coefficients.entry(index).or_insert_with(BigInt::zero);
        *slot += value;
        if slot.is_zero() {
            self.coefficients.remove(&index);
        }
    }

    pub fn coefficient(&self, index: usize) -> BigInt {
        self.coefficients.get(&index).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.coefficients.iter().map(|(&i, v)| (i, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.coefficients.keys().next_back().copied()
    }

    pub fn to_dense(&self, len: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); len];
        for (&i, v) in &self.coefficients {
            if i < len {
                out[i] = v.clone();
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Chain {
        if k.is_zero() {
            return Chain::zero(self.degree);
        }
        Chain {
            degree: self.degree,
            coefficients: self
                .coefficients
                .iter()
                .map(|(&i, v)| (i, v * k))
                .collect(),
        }
    }

    pub fn plus(&self, other: &Chain) -> Result<Chain> {
        if self.degree != other.degree {
            return Err(Error::invalid(format!(
                "cannot add chains of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (i, v) in other.terms() {
            out.add_term(i, v.clone());
        }
        Ok(out)
    }
}

/// Outcome of a boundary-membership test. `witness` is a chain `β` one degree
/// up with `d(β)` equal to the tested chain, present exactly when
/// `is_boundary` is true.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryCheck {
    pub is_boundary: bool,
    pub witness: Option<Chain>,
}

impl ChainComplex {
    /// `labels[n]` names the generators of `C_n`; `boundaries[n-1]` is `d_n`
    /// and must be `|labels[n-1]| × |labels[n]|`.
    pub fn new(labels: Vec<Vec<String>>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::invalid("a complex needs at least degree 0"));
        }
        if boundaries.len() + 1 != labels.len() {
            return Err(Error::DimensionMismatch {
                context: "number of boundary maps",
                expected: labels.len() - 1,
                found: boundaries.len(),
            });
        }
        for (k, d) in boundaries.iter().enumerate() {
            let n = k + 1;
            if d.rows() != labels[n - 1].len() {
                return Err(Error::DimensionMismatch {
                    context: "boundary rows",
                    expected: labels[n - 1].len(),
                    found: d.rows(),
                });
            }
            if d.cols() != labels[n].len() {
                return Err(Error::DimensionMismatch {
                    context: "boundary columns",
                    expected: labels[n].len(),
                    found: d.cols(),
                });
            }
        }
        Ok(ChainComplex { labels, boundaries })
    }

    /// Like [`ChainComplex::new`] with generated labels `g<n>.<i>`.
    pub fn from_boundaries(sizes: &[usize], boundaries: Vec<IntMatrix>) -> Result<Self> {
        let labels = sizes
            .iter()
            .enumerate()
            .map(|(n, &k)| (0..k).map(|i| format!("g{n}.{i}")).collect())
            .collect();
        ChainComplex::new(labels, boundaries)
    }

    /// The complex with every group zero.
    pub fn zero() -> Self {
        ChainComplex {
            labels: vec![Vec::new()],
            boundaries: Vec::new(),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn basis_size(&self, n: usize) -> usize {
        self.labels.get(n).map_or(0, Vec::len)
    }

    pub fn basis_sizes(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn labels(&self, n: usize) -> &[String] {
        self.labels.get(n).map_or(&[], Vec::as_slice)
    }

    /// `d_n` as a `basis_size(n-1) × basis_size(n)` matrix; zero for `n = 0`
    /// and above the top degree.
    pub fn boundary(&self, n: usize) -> Cow<'_, IntMatrix> {
        if n >= 1 && n <= self.boundaries.len() {
            Cow::Borrowed(&self.boundaries[n - 1])
        } else {
            let rows = if n == 0 { 0 } else { self.basis_size(n - 1) };
            Cow::Owned(IntMatrix::zeros(rows, self.basis_size(n)))
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let violations = (2..=self.max_degree())
            .filter(|&n| {
                let prod = self.boundaries[n - 2]
                    .mul(&self.boundaries[n - 1])
                    .expect("dimensions checked on construction");
                !prod.is_zero()
            })
            .collect();
        ValidationReport { violations }
    }

    fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidComplex(report))
        }
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.max_degree() {
            return Err(Error::DegreeOutOfRange {
                degree: n,
                max_degree: self.max_degree(),
            });
        }
        Ok(())
    }

    /// `H_n = ker d_n / im d_{n+1}` over ℤ.
    pub fn homology_at(&self, n: usize) -> Result<HomologyGroup> {
        self.check_degree(n)?;
        self.require_valid()?;
        self.homology_unchecked(n)
    }

    /// Homology in every degree `0..=max_degree`, degrees evaluated
    /// independently under `exec`.
    pub fn homology(&self, exec: Execution) -> Result<Vec<HomologyGroup>> {
        self.require_valid()?;
        let degrees: Vec<usize> = (0..=self.max_degree()).collect();
        exec.try_map(&degrees, |&n| self.homology_unchecked(n))
    }

    fn homology_unchecked(&self, n: usize) -> Result<HomologyGroup> {
        let d_n = self.boundary(n);
        let d_up = self.boundary(n + 1);
        if d_n.is_zero() {
            // ker d_n is all of C_n in the standard basis.
            let factors = linalg::invariant_factors(&d_up);
            return Ok(group_from_factors(self.basis_size(n), &factors));
        }
        let kernel = linalg::kernel_basis(&d_n);
        if d_up.is_zero() {
            return Ok(HomologyGroup::free(kernel.len()));
        }
        // Rewrite d_{n+1} in kernel-lattice coordinates before reading off
        // torsion; the Smith form of d_{n+1} alone may disagree.
        let kmat = IntMatrix::from_columns(self.basis_size(n), &kernel)?;
        let solver = SmithSolver::new(&kmat);
        let mut coords = Vec::with_capacity(d_up.cols());
        for col in d_up.columns() {
            let x = solver.solve(&col)?.ok_or_else(|| {
                Error::invalid(format!("image of d_{} escapes ker d_{n}", n + 1))
            })?;
            coords.push(x);
        }
        let m = IntMatrix::from_columns(kernel.len(), &coords)?;
        let factors = linalg::invariant_factors(&m);
        Ok(group_from_factors(kernel.len(), &factors))
    }

    fn check_chain(&self, chain: &Chain) -> Result<()> {
        self.check_degree(chain.degree)?;
        if let Some(i) = chain.max_index() {
            if i >= self.basis_size(chain.degree) {
                return Err(Error::invalid(format!(
                    "chain references generator {i} but C_{} has {}",
                    chain.degree,
                    self.basis_size(chain.degree)
                )));
            }
        }
        Ok(())
    }

    /// `d_n(chain)` as a chain of degree `n - 1`; zero for degree 0.
    pub fn apply_boundary(&self, chain: &Chain) -> Result<Chain> {
        self.check_chain(chain)?;
        if chain.degree == 0 {
            return Ok(Chain::zero(0));
        }
        let d = self.boundary(chain.degree);
        let v = d.mul_vec(&chain.to_dense(d.cols()))?;
        Ok(Chain::from_dense(chain.degree - 1, &v))
    }

    pub fn is_cycle(&self, chain: &Chain) -> Result<bool> {
        Ok(self.apply_boundary(chain)?.is_zero())
    }

    /// Tests `chain ∈ im d_{n+1}` over ℤ.
    pub fn is_boundary(&self, chain: &Chain) -> Result<BoundaryCheck> {
        self.check_chain(chain)?;
        let n = chain.degree;
        if chain.is_zero() {
            return Ok(BoundaryCheck {
                is_boundary: true,
                witness: Some(Chain::zero(n + 1)),
            });
        }
        let d_up = self.boundary(n + 1);
        let b = chain.to_dense(self.basis_size(n));
        match linalg::solve_integer(&d_up, &b)? {
            Some(x) => {
                let witness = Chain::from_dense(n + 1, &x);
                debug_assert!(is_zero_vec(
                    &d_up
                        .mul_vec(&x)?
                        .iter()
                        .zip(&b)
                        .map(|(l, r)| l - r)
                        .collect::<Vec<_>>()
                ));
                Ok(BoundaryCheck {
                    is_boundary: true,
                    witness: Some(witness),
                })
            }
            None => Ok(BoundaryCheck {
                is_boundary: false,
                witness: None,
            }),
        }
    }

    /// `Σ (-1)^n · basis_size(n)`.
    pub fn euler_characteristic(&self) -> i64 {
        self.labels
            .iter()
            .enumerate()
            .map(|(n, l)| if n % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    /// Copy of the complex truncated to degrees `0..=max_degree`.
    pub fn truncated(&self, max_degree: usize) -> ChainComplex {
        let top = max_degree.min(self.max_degree());
        ChainComplex {
            labels: self.labels[..=top].to_vec(),
            boundaries: self.boundaries[..top].to_vec(),
        }
    }
}

fn group_from_factors(kernel_rank: usize, factors: &[BigInt]) -> HomologyGroup {
    HomologyGroup {
        free_rank: kernel_rank - factors.len(),
        torsion: factors.iter().filter(|f| !f.is_one()).cloned().collect(),
    }
}
