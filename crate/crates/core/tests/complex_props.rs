mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use comphom_core::complex::{Chain, ChainComplex};
use comphom_core::linalg::{snf, IntMatrix};
use comphom_core::Execution;

/// Simplicial chain complex of the face closure of `tops` on four vertices.
fn simplicial(tops: &[Vec<usize>]) -> ChainComplex {
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); 4];
    for t in tops {
        // every nonempty subset of the top simplex
        for mask in 1u32..(1 << t.len()) {
            let s: Vec<usize> = (0..t.len()).filter(|i| mask & (1 << i) != 0).map(|i| t[i]).collect();
            let d = s.len() - 1;
            if !faces[d].contains(&s) {
                faces[d].push(s);
            }
        }
    }
    for f in &mut faces {
        f.sort();
    }
    while faces.len() > 1 && faces.last().unwrap().is_empty() {
        faces.pop();
    }
    let labels: Vec<Vec<String>> = faces.iter().map(|fs| fs.iter().map(|s| format!("{s:?}")).collect()).collect();
    let boundaries = (1..faces.len())
        .map(|n| {
            let mut trip = Vec::new();
            for (c, s) in faces[n].iter().enumerate() {
                for i in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(i);
                    let r = faces[n - 1].binary_search(&f).unwrap();
                    trip.push((r, c, BigInt::from(if i % 2 == 0 { 1 } else { -1 })));
                }
            }
            IntMatrix::from_triplets(faces[n - 1].len(), faces[n].len(), trip).unwrap()
        })
        .collect();
    ChainComplex::new(labels, boundaries).unwrap()
}

fn simplicial_complex() -> impl Strategy<Value = ChainComplex> {
    let simplex = proptest::sample::subsequence(vec![0usize, 1, 2, 3], 1..=3);
    proptest::collection::vec(simplex, 1..=4).prop_map(|tops| simplicial(&tops))
}

/// `C_1 → C_0` with an arbitrary matrix, which brings in torsion.
fn two_term_complex() -> impl Strategy<Value = ChainComplex> {
    common::matrix(4, 4).prop_map(|d| ChainComplex::from_boundaries(&[d.rows(), d.cols()], vec![d]).unwrap())
}

fn any_complex() -> impl Strategy<Value = ChainComplex> {
    prop_oneof![simplicial_complex(), two_term_complex()]
}

fn rational_rank(a: &IntMatrix) -> usize {
    let mut rows: Vec<Vec<BigRational>> = a
        .to_dense()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let mut rank = 0;
    for c in 0..a.cols() {
        let Some(p) = (rank..a.rows()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        for r in 0..a.rows() {
            if r != rank && !rows[r][c].is_zero() {
                let k = &rows[r][c] / &rows[rank][c];
                for j in 0..a.cols() {
                    let t = &k * &rows[rank][j];
                    rows[r][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn chain_in(c: &ChainComplex, degree: usize) -> impl Strategy<Value = Chain> {
    let len = c.basis_size(degree);
    proptest::collection::vec(-3i64..=3, len)
        .prop_map(move |v| Chain::from_dense(degree, &v.into_iter().map(BigInt::from).collect::<Vec<_>>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn homology_matches_rank_oracle(c in any_complex()) {
        prop_assert!(c.validate().is_valid());
        let h = c.homology(Execution::Sequential).unwrap();
        for (n, g) in h.iter().enumerate() {
            let rank_n = if n == 0 { 0 } else { rational_rank(&c.boundary(n)) };
            let rank_up = if n < c.max_degree() { rational_rank(&c.boundary(n + 1)) } else { 0 };
            prop_assert_eq!(g.free_rank, c.basis_size(n) - rank_n - rank_up);
            let torsion: Vec<BigInt> = if n < c.max_degree() {
                snf(&c.boundary(n + 1)).invariant_factors.into_iter().filter(|d| *d > BigInt::from(1)).collect()
            } else {
                Vec::new()
            };
            prop_assert_eq!(&g.torsion, &torsion);
        }
    }

    #[test]
    fn euler_characteristic_of_ranks(c in any_complex()) {
        let h = c.homology(Execution::Sequential).unwrap();
        let chi: i64 = h.iter().enumerate().map(|(n, g)| if n % 2 == 0 { g.free_rank as i64 } else { -(g.free_rank as i64) }).sum();
        prop_assert_eq!(chi, c.euler_characteristic());
    }

    #[test]
    fn simplicial_complexes_are_torsion_free_and_connected_per_component(c in simplicial_complex()) {
        let h = c.homology(Execution::Sequential).unwrap();
        prop_assert!(h.iter().all(|g| g.torsion.is_empty()));
        prop_assert!(h[0].free_rank >= 1);
    }

    #[test]
    fn boundaries_are_cycles(
        (c, x) in simplicial_complex()
            .prop_filter("needs degree 1", |c| c.max_degree() >= 1)
            .prop_flat_map(|c| { let s = chain_in(&c, c.max_degree()); (Just(c), s) })
    ) {
        // d(x) is a boundary by construction
        let b = c.apply_boundary(&x).unwrap();
        let check = c.is_boundary(&b).unwrap();
        prop_assert!(check.is_boundary);
        prop_assert!(c.is_cycle(&b).unwrap());
        let w = check.witness.unwrap();
        prop_assert_eq!(c.apply_boundary(&w).unwrap(), b);
        if c.is_boundary(&x).unwrap().is_boundary {
            prop_assert!(c.is_cycle(&x).unwrap());
        }
    }

    #[test]
    fn parallel_homology_agrees(c in any_complex()) {
        prop_assert_eq!(c.homology(Execution::Sequential).unwrap(), c.homology(Execution::Parallel).unwrap());
    }
}

#[test]
fn hollow_tetrahedron_is_a_sphere() {
    let c = simplicial(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]);
    let betti: Vec<usize> = c.homology(Execution::Sequential).unwrap().iter().map(|g| g.free_rank).collect();
    assert_eq!(betti, vec![1, 0, 1]);
}
