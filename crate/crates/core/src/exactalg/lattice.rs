//! Sparse routines for wide matrices: saturated kernels without a dense
//! transform, and the lattice spanned by a stream of columns.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::div_nearest;
use super::snf::invariant_factors;
use super::IntMatrix;

/// `(index, value)` pairs with nonzero values, sorted by index.
pub type SparseColumn = Vec<(usize, BigInt)>;

type SparseVec = BTreeMap<usize, BigInt>;

fn axpy(dst: &mut SparseVec, factor: &BigInt, src: &SparseVec) {
    for (i, v) in src {
        let slot = dst.entry(*i).or_insert_with(BigInt::zero);
        *slot += factor * v;
        if slot.is_zero() {
            dst.remove(i);
        }
    }
}

/// Saturated kernel basis of `a` as sparse columns.
///
/// Column reduction row by row, tracking the unimodular transform one sparse
/// column at a time. Memory stays proportional to the nonzeros touched,
/// rather than `cols^2`.
pub fn sparse_kernel(a: &IntMatrix) -> Vec<SparseColumn> {
    let (rows, cols) = a.shape();
    let mut h: Vec<SparseVec> = vec![SparseVec::new(); cols];
    for (i, j, v) in a.triples() {
        h[j].insert(i, v.clone());
    }
    let mut u: Vec<SparseVec> = (0..cols).map(|j| SparseVec::from([(j, BigInt::one())])).collect();
    let mut active: Vec<usize> = (0..cols).collect();
    for i in 0..rows {
        loop {
            let live: Vec<usize> = active.iter().copied().filter(|&c| h[c].contains_key(&i)).collect();
            let Some(&p) = live.iter().min_by(|&&x, &&y| h[x][&i].magnitude().cmp(h[y][&i].magnitude())) else {
                break;
            };
            let pivot = h[p][&i].clone();
            let (hp, up) = (h[p].clone(), u[p].clone());
            let mut clean = true;
            for &c in live.iter().filter(|&&c| c != p) {
                let q = -div_nearest(&h[c][&i], &pivot);
                axpy(&mut h[c], &q, &hp);
                axpy(&mut u[c], &q, &up);
                clean &= !h[c].contains_key(&i);
            }
            if clean {
                active.retain(|&c| c != p);
                break;
            }
        }
    }
    active.into_iter().map(|c| std::mem::take(&mut u[c]).into_iter().collect()).collect()
}

/// Echelon basis of the sublattice of `Z^dim` spanned by inserted vectors.
/// Vector `basis[i]`, when present, has its first nonzero entry at `i` and
/// that entry is positive.
#[derive(Debug, Clone)]
pub struct ColumnLattice {
    dim: usize,
    basis: Vec<Option<Vec<BigInt>>>,
}

impl ColumnLattice {
    pub fn new(dim: usize) -> Self {
        Self { dim, basis: vec![None; dim] }
    }

    pub fn rank(&self) -> usize {
        self.basis.iter().flatten().count()
    }

    pub fn insert_sparse(&mut self, column: &[(usize, BigInt)]) {
        let mut v = vec![BigInt::zero(); self.dim];
        for (i, x) in column {
            v[*i] += x;
        }
        self.insert(v);
    }

    pub fn insert(&mut self, mut v: Vec<BigInt>) {
        assert_eq!(v.len(), self.dim, "vector length");
        for i in 0..self.dim {
            if v[i].is_zero() {
                continue;
            }
            match self.basis[i].take() {
                None => {
                    if v[i].is_negative() {
                        v.iter_mut().for_each(|x| *x = -&*x);
                    }
                    self.reduce_tail(&mut v, i);
                    self.basis[i] = Some(v);
                    return;
                }
                Some(b) => {
                    if v[i].is_multiple_of(&b[i]) {
                        let q = &v[i] / &b[i];
                        v.iter_mut().zip(&b).for_each(|(x, y)| *x -= &q * y);
                        self.basis[i] = Some(b);
                    } else {
                        // [b v] -> [s b + t v, (b_i/g) v - (v_i/g) b] is unimodular.
                        let e = b[i].extended_gcd(&v[i]);
                        let (bg, vg) = (&b[i] / &e.gcd, &v[i] / &e.gcd);
                        let mut nb: Vec<BigInt> = b.iter().zip(&v).map(|(x, y)| &e.x * x + &e.y * y).collect();
                        v = b.iter().zip(&v).map(|(x, y)| &bg * y - &vg * x).collect();
                        if nb[i].is_negative() {
                            nb.iter_mut().for_each(|x| *x = -&*x);
                        }
                        self.reduce_tail(&mut nb, i);
                        self.basis[i] = Some(nb);
                    }
                }
            }
        }
    }

    /// Reduces entries after position `i` modulo later pivots to curb growth.
    fn reduce_tail(&self, v: &mut [BigInt], i: usize) {
        for j in i + 1..self.dim {
            if let Some(b) = &self.basis[j] {
                let q = v[j].div_floor(&b[j]);
                if !q.is_zero() {
                    v.iter_mut().zip(b).for_each(|(x, y)| *x -= &q * y);
                }
            }
        }
    }

    /// `dim x rank` matrix whose columns are the basis vectors.
    pub fn basis_matrix(&self) -> IntMatrix {
        let vectors: Vec<&Vec<BigInt>> = self.basis.iter().flatten().collect();
        let triples = vectors
            .iter()
            .enumerate()
            .flat_map(|(c, v)| v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(move |(r, x)| (r, c, x.clone())));
        IntMatrix::from_triples(self.dim, vectors.len(), triples).expect("indices in range")
    }

    /// Invariant factors of any matrix whose columns span this lattice.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        invariant_factors(&self.basis_matrix())
    }
}
