//! Column Hermite normal form and integer kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::div_nearest;
use super::IntMatrix;

/// Result of [`hnf_columns`]: `h = a * u` with `u` unimodular.
#[derive(Debug, Clone)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// `(row, col)` of each pivot; pivot columns are `0..rank`.
    pub pivots: Vec<(usize, usize)>,
}

impl HermiteForm {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Column-style Hermite normal form.
///
/// Columns `0..rank` of `h` are the pivot columns, each with a positive
/// pivot strictly below the previous column's pivot row and zeros above it.
/// Entries to the left of a pivot lie in `[0, pivot)`. Columns `rank..` are
/// zero, so the matching columns of `u` span the kernel of `a`.
pub fn hnf_columns(a: &IntMatrix) -> HermiteForm {
    let (rows, cols) = a.shape();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(cols);
    let mut pivots = Vec::new();
    let mut next = 0;
    for i in 0..rows {
        if next == cols {
            break;
        }
        while let Some(p) = (next..cols)
            .filter(|&c| !h.get(i, c).is_zero())
            .min_by(|&x, &y| h.get(i, x).magnitude().cmp(h.get(i, y).magnitude()))
        {
            h.swap_cols(p, next);
            u.swap_cols(p, next);
            let pivot = h.get(i, next).clone();
            let mut clean = true;
            for c in next + 1..cols {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = -div_nearest(h.get(i, c), &pivot);
                h.add_col_multiple(c, next, &q);
                u.add_col_multiple(c, next, &q);
                if !h.get(i, c).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.get(i, next).is_zero() {
            continue;
        }
        if h.get(i, next).is_negative() {
            h.negate_col(next);
            u.negate_col(next);
        }
        let pivot = h.get(i, next).clone();
        for c in 0..next {
            let q = -h.get(i, c).div_floor(&pivot);
            h.add_col_multiple(c, next, &q);
            u.add_col_multiple(c, next, &q);
        }
        pivots.push((i, next));
        next += 1;
    }
    HermiteForm { h, u, pivots }
}

pub fn rank(a: &IntMatrix) -> usize {
    hnf_columns(a).rank()
}

/// Basis of the integer kernel `{v : a v = 0}`, one vector per column.
///
/// The basis comes from the trailing columns of a unimodular transform, so
/// it spans the full kernel lattice (it is saturated).
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let hf = hnf_columns(a);
    let cols = a.cols();
    let order: Vec<usize> = (0..cols).collect();
    hf.u.permuted(&order, &order[hf.rank()..])
}

/// Kernel basis returned as sparse columns of `(index, value)` pairs,
/// computed without a dense transform.
pub fn kernel_columns(a: &IntMatrix) -> Vec<Vec<(usize, BigInt)>> {
    super::lattice::sparse_kernel(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::snf::invariant_factors;

    #[test]
    fn identity_is_its_own_form() {
        let hf = hnf_columns(&IntMatrix::identity(3));
        assert_eq!(hf.h, IntMatrix::identity(3));
        assert_eq!(hf.u, IntMatrix::identity(3));
        assert_eq!(hf.rank(), 3);
    }

    #[test]
    fn single_row_gcd() {
        let a = IntMatrix::from_i64(&[vec![2, 4]]);
        let hf = hnf_columns(&a);
        assert_eq!(hf.h, IntMatrix::from_i64(&[vec![2, 0]]));
        assert_eq!(&a * &hf.u, hf.h);
        assert_eq!(hf.u.determinant().unwrap().abs(), BigInt::from(1));
    }

    #[test]
    fn rank_deficient() {
        assert_eq!(rank(&IntMatrix::from_i64(&[vec![1, 0], vec![0, 0]])), 1);
        assert_eq!(rank(&IntMatrix::from_i64(&[vec![2, 4], vec![1, 2]])), 1);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&IntMatrix::from_i64(&[vec![2, 4]]));
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert!(v == vec![BigInt::from(2), BigInt::from(-1)] || v == vec![BigInt::from(-2), BigInt::from(1)]);

        assert_eq!(kernel_basis(&IntMatrix::identity(2)).cols(), 0);

        let a = IntMatrix::from_i64(&[vec![1, 1, 1]]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 2);
        assert!((&a * &k).is_zero());
        // Brute force: every small integer kernel vector is an integer
        // combination of the basis, i.e. appending it does not change the
        // lattice (the 3x3 stack has the same invariant factors as k).
        for x in -3i64..=3 {
            for y in -3i64..=3 {
                let z = -x - y;
                let mut cols: Vec<Vec<i64>> =
                    (0..3).map(|i| (0..2).map(|j| i64::try_from(k.get(i, j)).unwrap()).collect()).collect();
                for (row, v) in cols.iter_mut().zip([x, y, z]) {
                    row.push(v);
                }
                let stacked = IntMatrix::from_i64(&cols);
                assert_eq!(invariant_factors(&stacked), vec![BigInt::from(1), BigInt::from(1)]);
            }
        }
    }

    #[test]
    fn zero_row_matrix_kernel_is_everything() {
        let a = IntMatrix::zeros(0, 3);
        assert_eq!(kernel_columns(&a).len(), 3);
        assert_eq!(kernel_basis(&a), IntMatrix::identity(3));
    }
}
