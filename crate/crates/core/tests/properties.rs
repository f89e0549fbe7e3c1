use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use polyext::exactalg::{
    cokernel_of_rowspan, find_pivot_ordering, invariant_factors, kernel_basis, pivot_reduce, rank, snf, sparse_kernel,
    ColumnLattice, IntMatrix,
};
use polyext::labyrinth::{enumerate_pure_mazes, maze_action_basis, maze_action_on_monomial};
use polyext::multiset::{enumerate_with_support_and_card, integer_partitions, partition_representatives};
use polyext::powerfunctors::{apply_linear, cross_effect_basis, monomial_basis, Family, FunctorSpec};

fn arb_matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| fixed_matrix(r, c, bound))
}

fn fixed_matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec(-bound..=bound, rows * cols).prop_map(move |v| {
        let data: Vec<Vec<i64>> = v.chunks(cols).map(<[i64]>::to_vec).collect();
        IntMatrix::from_i64(&data)
    })
}

/// `(φ, ψ)` with `φ: Z^k -> Z^l`, `ψ: Z^p -> Z^k`, all sizes at most 3.
fn composable_pair() -> impl Strategy<Value = (IntMatrix, IntMatrix)> {
    (1..=3usize, 1..=3usize, 1..=3usize).prop_flat_map(|(k, l, p)| (fixed_matrix(l, k, 2), fixed_matrix(k, p, 2)))
}

fn arb_spec(max_degree: usize) -> impl Strategy<Value = FunctorSpec> {
    (0..3usize, 1..=max_degree).prop_map(|(f, d)| FunctorSpec::new(Family::ALL[f], d).unwrap())
}

/// Signed sum over permutations; independent of any elimination routine.
fn leibniz_det(m: &IntMatrix) -> BigInt {
    fn perms(n: usize) -> Vec<(Vec<usize>, bool)> {
        if n == 0 {
            return vec![(Vec::new(), false)];
        }
        let mut out = Vec::new();
        for (p, odd) in perms(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push((q, odd ^ ((n - 1 - pos) % 2 == 1)));
            }
        }
        out
    }
    let n = m.rows();
    perms(n)
        .into_iter()
        .map(|(p, odd)| {
            let prod: BigInt = (0..n).map(|i| m.get(i, p[i]).clone()).product();
            if odd {
                -prod
            } else {
                prod
            }
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn functoriality(spec in arb_spec(3), (phi, psi) in composable_pair()) {
        let lhs = apply_linear(spec, &(&phi * &psi));
        let rhs = &apply_linear(spec, &phi) * &apply_linear(spec, &psi);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exterior_entries_are_minors(phi in arb_matrix(3, 3, 2), n in 1..=3usize) {
        let spec = FunctorSpec::exterior(n);
        let m = apply_linear(spec, &phi);
        let rows = monomial_basis(spec, phi.rows());
        let cols = monomial_basis(spec, phi.cols());
        for (i, r) in rows.iter().enumerate() {
            for (j, c) in cols.iter().enumerate() {
                let ri: Vec<usize> = r.elements().map(|e| e as usize - 1).collect();
                let ci: Vec<usize> = c.elements().map(|e| e as usize - 1).collect();
                let entries = ri.iter().flat_map(|&a| ci.iter().map(move |&b| (a, b))).map(|(a, b)| phi.get(a, b).clone());
                let minor = IntMatrix::from_data(n, n, entries.collect()).unwrap();
                prop_assert_eq!(m.get(i, j), &leibniz_det(&minor));
            }
        }
    }

    #[test]
    fn snf_contract(a in arb_matrix(4, 4, 9)) {
        let r = snf(&a);
        prop_assert_eq!(&(&r.u * &a) * &r.v, r.s.clone());
        prop_assert!(r.u.determinant().unwrap().magnitude().is_one());
        prop_assert!(r.v.determinant().unwrap().magnitude().is_one());
        for w in r.invariant_factors.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert_eq!(invariant_factors(&a), r.invariant_factors);
    }

    #[test]
    fn snf_is_permutation_invariant(a in arb_matrix(4, 4, 9), shift in 0..4usize) {
        let (rows, cols) = a.shape();
        let ro: Vec<usize> = (0..rows).map(|i| (i + shift) % rows).rev().collect();
        let co: Vec<usize> = (0..cols).map(|j| (j + shift) % cols).collect();
        prop_assert_eq!(invariant_factors(&a.permuted(&ro, &co)), invariant_factors(&a));
    }

    #[test]
    fn kernel_is_saturated(a in arb_matrix(3, 5, 4)) {
        let k = kernel_basis(&a);
        prop_assert!((&a * &k).is_zero());
        prop_assert_eq!(k.cols() + rank(&a), a.cols());
        prop_assert!(invariant_factors(&k).iter().all(One::is_one));
    }

    #[test]
    fn sparse_kernel_is_saturated(a in arb_matrix(3, 6, 4)) {
        let k = sparse_kernel(&a);
        let triples = k.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v.clone())));
        let basis = IntMatrix::from_triples(a.cols(), k.len(), triples).unwrap();
        prop_assert!((&a * &basis).is_zero());
        prop_assert_eq!(k.len() + rank(&a), a.cols());
        prop_assert!(invariant_factors(&basis).iter().all(One::is_one));
    }

    #[test]
    fn column_lattice_keeps_invariant_factors(a in arb_matrix(4, 7, 6)) {
        let mut lattice = ColumnLattice::new(a.rows());
        for j in 0..a.cols() {
            lattice.insert(a.column(j));
        }
        prop_assert_eq!(lattice.rank(), rank(&a));
        prop_assert_eq!(lattice.invariant_factors(), invariant_factors(&a));
    }

    #[test]
    fn pivot_path_agrees_with_snf(a in arb_matrix(3, 4, 3)) {
        if let Some((r, c)) = find_pivot_ordering(&a) {
            let g = pivot_reduce(&a, &r, &c).unwrap();
            prop_assert_eq!(g.torsion_part(), cokernel_of_rowspan(&a).torsion_part());
        }
    }

    #[test]
    fn degree_vanishing(spec in arb_spec(4), k in 1..=2usize, j in 1..=3usize) {
        let n = spec.degree;
        for maze in enumerate_pure_mazes(k, j, n + 1).into_iter().filter(|m| m.cardinality() == n + 1) {
            for mono in monomial_basis(spec, k) {
                prop_assert!(maze_action_on_monomial(spec.family, &maze, &mono).unwrap().is_empty());
            }
        }
    }
}

/// Γ^n(φ) is the transpose of S^n(φ^T); exhaustive for 2 x 2 and smaller.
#[test]
fn divided_is_dual_to_symmetric() {
    for n in 1..=4 {
        for (l, k) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let total = 5usize.pow((l * k) as u32);
            for code in 0..total {
                let mut c = code;
                let data: Vec<Vec<i64>> = (0..l)
                    .map(|_| {
                        (0..k)
                            .map(|_| {
                                let v = (c % 5) as i64 - 2;
                                c /= 5;
                                v
                            })
                            .collect()
                    })
                    .collect();
                let phi = IntMatrix::from_i64(&data);
                let gamma = apply_linear(FunctorSpec::divided(n), &phi);
                let sym = apply_linear(FunctorSpec::symmetric(n), &phi.transpose());
                assert_eq!(gamma, sym.transpose(), "n={n} phi={data:?}");
            }
        }
    }
}

/// `maze_action(Γ^n, P)` is the transpose of `maze_action(S^n, reverse P)`.
#[test]
fn maze_reversal_duality() {
    for n in 1..=3 {
        for k in 1..=3 {
            for j in 1..=3 {
                let src = cross_effect_basis(FunctorSpec::divided(n), k);
                let dst = cross_effect_basis(FunctorSpec::divided(n), j);
                for maze in enumerate_pure_mazes(k, j, n) {
                    let rev = maze.reverse();
                    for x in &src {
                        let gamma = maze_action_basis(FunctorSpec::divided(n), &maze, x).unwrap();
                        for z in &dst {
                            let sym = maze_action_basis(FunctorSpec::symmetric(n), &rev, z).unwrap();
                            assert_eq!(gamma.coefficient(z), sym.coefficient(x), "maze {maze}, n={n}, {x} / {z}");
                        }
                    }
                }
            }
        }
    }
}

/// Covering mazes never leave the codomain cross-effect; the engine would
/// report a leak as an error, so every call must succeed.
#[test]
fn support_purity() {
    for spec in [FunctorSpec::symmetric(3), FunctorSpec::exterior(3), FunctorSpec::divided(3), FunctorSpec::divided(4)]
    {
        for k in 1..=3 {
            for j in 1..=3 {
                for maze in enumerate_pure_mazes(k, j, spec.degree) {
                    for mono in monomial_basis(spec, k) {
                        let out = maze_action_on_monomial(spec.family, &maze, &mono).unwrap();
                        assert!(out.keys().all(|m| m.has_support_range(j)));
                    }
                }
            }
        }
    }
}

#[test]
fn symmetric_power_of_sum_gives_multinomials() {
    // (e1 + e2 + e3)^n: coefficient of e^Z is n! / prod(deg_Z i)!.
    for n in 1..=4 {
        let phi = IntMatrix::from_i64(&[vec![1], vec![1], vec![1]]);
        let m = apply_linear(FunctorSpec::symmetric(n), &phi);
        for (i, z) in monomial_basis(FunctorSpec::symmetric(n), 3).iter().enumerate() {
            let parts: Vec<usize> = z.entries().iter().map(|&(_, d)| d as usize).collect();
            assert_eq!(m.get(i, 0), &polyext::extengine::multinomial(&parts));
        }
    }
}

#[test]
fn enumeration_counts() {
    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
    for s in 1..=4usize {
        let supp: Vec<u32> = (1..=s as u32).collect();
        for card in 0..=7 {
            let list = enumerate_with_support_and_card(&supp, card);
            let expected = if card < s { 0 } else { binom(card - 1, s - 1) };
            assert_eq!(list.len(), expected);
            assert!(list.iter().all(|m| m.support() == supp && m.cardinality() == card));
            assert!(list.windows(2).all(|w| w[0] != w[1]));
        }
    }
    let partition_counts = [1, 2, 3, 5, 7, 11, 15, 22];
    for (m, &p) in (1..=8).zip(partition_counts.iter()) {
        assert_eq!(integer_partitions(m).len(), p);
        let reps = partition_representatives(m).unwrap();
        assert_eq!(reps.len(), p);
        assert!(reps.iter().all(|r| r.cardinality() == m));
        assert_eq!(reps[0].support(), vec![1]);
    }
    assert!(partition_representatives(0).is_err());
}

#[test]
fn cokernel_spec_example() {
    let a = IntMatrix::from_i64(&[vec![-3, 1, 0], vec![1, 0, 2]]);
    let g = cokernel_of_rowspan(&a);
    assert_eq!((g.free_rank(), g.torsion().len()), (1, 0));
}
