//! Cokernels of matrices already in pivotal form.
//!
//! With the row-span convention used throughout (`Coker A = Z^cols / rowspan A`),
//! a matrix is pivotal under a row and column ordering when, after
//! permuting, it is upper triangular (`a[k][j] == 0` for `k > j`) and every
//! diagonal entry divides its whole row. Column operations then clear each
//! row to the right of its diagonal, so the cokernel is
//! `Z^max(cols - rows, 0) + Z/a[0][0] + Z/a[1][1] + ...`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use super::{FgAbelianGroup, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotPivotal {
    #[error("orderings do not match the matrix shape")]
    BadOrdering,
    #[error("entry ({row}, {col}) lies below the diagonal and is nonzero")]
    NotTriangular { row: usize, col: usize },
    #[error("diagonal entry of row {row} does not divide entry in column {col}")]
    NotDivisible { row: usize, col: usize },
}

fn divides(d: &BigInt, x: &BigInt) -> bool {
    if d.is_zero() {
        x.is_zero()
    } else {
        x.is_multiple_of(d)
    }
}

fn is_permutation(order: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    order.len() == n && order.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

/// Reads the cokernel of `a` off its diagonal, provided `a` is pivotal under
/// the given orderings. `row_order[k]` is the original row placed at
/// position `k`; likewise for columns.
pub fn pivot_reduce(a: &IntMatrix, row_order: &[usize], col_order: &[usize]) -> Result<FgAbelianGroup, NotPivotal> {
    let (rows, cols) = a.shape();
    if !is_permutation(row_order, rows) || !is_permutation(col_order, cols) {
        return Err(NotPivotal::BadOrdering);
    }
    let at = |k: usize, j: usize| a.get(row_order[k], col_order[j]);
    for k in 0..rows {
        for j in 0..k.min(cols) {
            if !at(k, j).is_zero() {
                return Err(NotPivotal::NotTriangular { row: k, col: j });
            }
        }
        if k < cols {
            let d = at(k, k);
            if let Some(j) = (k + 1..cols).find(|&j| !divides(d, at(k, j))) {
                return Err(NotPivotal::NotDivisible { row: k, col: j });
            }
        }
    }
    let diag = (0..rows.min(cols)).map(|k| at(k, k).clone());
    Ok(FgAbelianGroup::from_cyclic_orders(cols.saturating_sub(rows), diag))
}

/// Greedily searches for orderings under which `a` is pivotal.
///
/// Each step picks a column that is nonzero in exactly one remaining row and
/// whose entry there divides that row; the smallest such entry wins, ties
/// broken by row then column. Zero rows go last. The search is exact: the
/// chosen column can serve no other row, so a failed greedy step means no
/// pivotal ordering exists.
pub fn find_pivot_ordering(a: &IntMatrix) -> Option<(Vec<usize>, Vec<usize>)> {
    let (rows, cols) = a.shape();
    let mut row_alive = vec![true; rows];
    let mut col_alive = vec![true; cols];
    // Count of live rows in which each column is nonzero.
    let mut col_count: Vec<usize> = (0..cols).map(|j| (0..rows).filter(|&i| !a.get(i, j).is_zero()).count()).collect();
    let row_zero: Vec<bool> = (0..rows).map(|i| a.row(i).iter().all(Zero::is_zero)).collect();
    let mut row_order = Vec::with_capacity(rows);
    let mut col_order = Vec::with_capacity(cols);
    let nonzero_rows = row_zero.iter().filter(|z| !**z).count();

    for _ in 0..nonzero_rows {
        let mut best: Option<(usize, usize)> = None;
        for j in (0..cols).filter(|&j| col_alive[j] && col_count[j] == 1) {
            let i = (0..rows).find(|&i| row_alive[i] && !a.get(i, j).is_zero())?;
            let d = a.get(i, j);
            if !a.row(i).iter().all(|x| divides(d, x)) {
                continue;
            }
            let better = match best {
                None => true,
                Some((bi, bj)) => {
                    let (m, bm) = (d.magnitude(), a.get(bi, bj).magnitude());
                    m < bm || (m == bm && (i, j) < (bi, bj))
                }
            };
            if better {
                best = Some((i, j));
            }
        }
        let (i, j) = best?;
        row_alive[i] = false;
        col_alive[j] = false;
        row_order.push(i);
        col_order.push(j);
        for (c, count) in col_count.iter_mut().enumerate() {
            if !a.get(i, c).is_zero() {
                *count -= 1;
            }
        }
    }
    row_order.extend((0..rows).filter(|&i| row_alive[i]));
    col_order.extend((0..cols).filter(|&j| col_alive[j]));
    Some((row_order, col_order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{cokernel_of_rowspan, torsion_part};

    fn ident(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn diagonal_reads_off() {
        let a = IntMatrix::diagonal([2, 3]);
        let g = pivot_reduce(&a, &ident(2), &ident(2)).unwrap();
        assert_eq!(g, "Z/2 + Z/3".parse().unwrap());
    }

    #[test]
    fn unit_pivot_with_zero_row() {
        let a = IntMatrix::from_i64(&[vec![1, 5], vec![0, 0]]);
        let g = pivot_reduce(&a, &ident(2), &ident(2)).unwrap();
        assert!(g.torsion().is_empty());
        assert_eq!(g, cokernel_of_rowspan(&a));
    }

    #[test]
    fn antidiagonal_is_rejected_unpermuted() {
        let a = IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]);
        assert!(pivot_reduce(&a, &ident(2), &ident(2)).is_err());
        let (r, c) = find_pivot_ordering(&a).unwrap();
        assert_eq!(pivot_reduce(&a, &r, &c).unwrap(), FgAbelianGroup::trivial());
    }

    #[test]
    fn greedy_finds_triangular_layout() {
        // A zero row, a unit row and a row divisible by 2, scrambled.
        let a = IntMatrix::from_i64(&[vec![0, 2, 0, 4], vec![0, 0, 0, 0], vec![1, 3, 0, 7]]);
        let (r, c) = find_pivot_ordering(&a).unwrap();
        let g = pivot_reduce(&a, &r, &c).unwrap();
        assert_eq!(torsion_part(&g), "Z/2".parse().unwrap());
        assert_eq!(g, cokernel_of_rowspan(&a));
    }

    #[test]
    fn gcd_row_without_gcd_entry_is_not_pivotal() {
        let a = IntMatrix::from_i64(&[vec![6, 4]]);
        assert!(find_pivot_ordering(&a).is_none());
    }

    #[test]
    fn bad_orderings() {
        let a = IntMatrix::identity(2);
        assert_eq!(pivot_reduce(&a, &[0, 0], &[0, 1]), Err(NotPivotal::BadOrdering));
        assert_eq!(pivot_reduce(&a, &[0], &[0, 1]), Err(NotPivotal::BadOrdering));
    }
}
