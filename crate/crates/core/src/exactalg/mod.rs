//! Exact integer linear algebra: Hermite and Smith normal forms, saturated
//! kernels and cokernels of integer matrices.
//!
//! Cokernels follow the row-span convention: the cokernel of an `r x c`
//! matrix `A` is `Z^c` modulo the span of the rows of `A`.

mod dump;
mod group;
mod hnf;
mod lattice;
mod matrix;
mod pivot;
mod snf;

use thiserror::Error;

pub use dump::{read_triples, write_triples};
pub use group::{factorize, FgAbelianGroup};
pub use hnf::{hnf_columns, kernel_basis, kernel_columns, rank, HermiteForm};
pub use lattice::{sparse_kernel, ColumnLattice, SparseColumn};
pub use matrix::IntMatrix;
pub use pivot::{find_pivot_ordering, pivot_reduce, NotPivotal};
pub use snf::{invariant_factors, snf, SnfResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("index ({row}, {col}) out of range for shape {shape:?}")]
    IndexOutOfRange { row: usize, col: usize, shape: (usize, usize) },
    #[error("matrix of shape {0:?} is not square")]
    NotSquare((usize, usize)),
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// `Z^cols / rowspan(a)`.
pub fn cokernel_of_rowspan(a: &IntMatrix) -> FgAbelianGroup {
    let factors = invariant_factors(a);
    FgAbelianGroup::from_invariant_factors(a.cols() - factors.len(), &factors)
}

pub fn torsion_part(g: &FgAbelianGroup) -> FgAbelianGroup {
    g.torsion_part()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel_of_rowspan(&IntMatrix::from_i64(&[vec![2]])), "Z/2".parse().unwrap());
        assert_eq!(cokernel_of_rowspan(&IntMatrix::zeros(0, 3)), FgAbelianGroup::free(3));
        let a = IntMatrix::from_i64(&[vec![-3, 1, 0], vec![1, 0, 2]]);
        assert_eq!(cokernel_of_rowspan(&a), FgAbelianGroup::free(1));
    }
}
