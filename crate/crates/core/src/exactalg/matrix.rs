use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::MatrixError;

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Square matrix with the given diagonal.
    pub fn diagonal<I: IntoIterator<Item = i64>>(diag: I) -> Self {
        let diag: Vec<i64> = diag.into_iter().collect();
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, BigInt::from(d));
        }
        m
    }

    /// Builds a `rows x cols` matrix from row vectors of small integers.
    /// All rows must have length `cols`.
    pub fn from_rows<R: AsRef<[i64]>>(rows: usize, cols: usize, data: &[R]) -> Result<Self, MatrixError> {
        if data.len() != rows || data.iter().any(|r| r.as_ref().len() != cols) {
            return Err(MatrixError::ShapeMismatch {
                expected: (rows, cols),
                found: (data.len(), data.first().map_or(0, |r| r.as_ref().len())),
            });
        }
        Ok(Self { rows, cols, data: data.iter().flat_map(|r| r.as_ref().iter().map(|&v| BigInt::from(v))).collect() })
    }

    /// Shorthand for literal matrices in tests and examples; panics on ragged input.
    pub fn from_i64(data: &[Vec<i64>]) -> Self {
        let cols = data.first().map_or(0, Vec::len);
        Self::from_rows(data.len(), cols, data).expect("ragged matrix literal")
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::ShapeMismatch { expected: (rows, cols), found: (data.len(), 1) });
        }
        Ok(Self { rows, cols, data })
    }

    /// Sparse construction path: `(row, col, value)` triples with 0-based
    /// indices. Repeated positions are summed.
    pub fn from_triples<I>(rows: usize, cols: usize, triples: I) -> Result<Self, MatrixError>
    where
        I: IntoIterator<Item = (usize, usize, BigInt)>,
    {
        let mut m = Self::zeros(rows, cols);
        for (i, j, v) in triples {
            if i >= rows || j >= cols {
                return Err(MatrixError::IndexOutOfRange { row: i, col: j, shape: (rows, cols) });
            }
            m.data[i * cols + j] += v;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|v| !v.is_zero()).count()
    }

    /// Nonzero entries as 0-based `(row, col, value)` triples in row-major order.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.data.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::ShapeMismatch { expected: (self.cols, rhs.cols), found: rhs.shape() });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Submatrix with rows and columns taken in the given orders.
    pub fn permuted(&self, row_order: &[usize], col_order: &[usize]) -> Self {
        let mut out = Self::zeros(row_order.len(), col_order.len());
        for (i, &r) in row_order.iter().enumerate() {
            for (j, &c) in col_order.iter().enumerate() {
                out.data[i * col_order.len() + j] = self.get(r, c).clone();
            }
        }
        out
    }

    /// Horizontal concatenation.
    pub fn hstack(blocks: &[IntMatrix], rows: usize) -> Result<Self, MatrixError> {
        if let Some(b) = blocks.iter().find(|b| b.rows != rows) {
            return Err(MatrixError::ShapeMismatch { expected: (rows, b.cols), found: b.shape() });
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            for i in 0..rows {
                for j in 0..b.cols {
                    out.data[i * cols + offset + j] = b.get(i, j).clone();
                }
            }
            offset += b.cols;
        }
        Ok(out)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for v in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *v = -std::mem::take(v);
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = &mut self.data[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }

    /// `row[dst] += factor * row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        debug_assert_ne!(dst, src);
        if factor.is_zero() {
            return;
        }
        let cols = self.cols;
        for j in 0..cols {
            let s = &self.data[src * cols + j];
            if s.is_zero() {
                continue;
            }
            let delta = factor * s;
            self.data[dst * cols + j] += delta;
        }
    }

    /// `col[dst] += factor * col[src]`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        debug_assert_ne!(dst, src);
        if factor.is_zero() {
            return;
        }
        let cols = self.cols;
        for i in 0..self.rows {
            let s = &self.data[i * cols + src];
            if s.is_zero() {
                continue;
            }
            let delta = factor * s;
            self.data[i * cols + dst] += delta;
        }
    }

    /// Determinant by fraction-free Bareiss elimination. Square matrices only.
    pub fn determinant(&self) -> Result<BigInt, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare(self.shape()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)).div_floor(&prev);
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        Ok(sign * m.get(n - 1, n - 1))
    }

    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|v| v.abs()).max().unwrap_or_default()
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix shapes do not compose")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Quotient of `a / b` rounded to the nearest integer, so that the
/// remainder `a - q*b` has magnitude at most `|b| / 2`.
pub(crate) fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let twice: BigInt = r.abs() << 1u32;
    if twice > b.abs() {
        if a.is_negative() == b.is_negative() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiply_and_transpose() {
        let a = IntMatrix::from_i64(&[vec![1, 2], vec![3, 4]]);
        let b = IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(&a * &b, IntMatrix::from_i64(&[vec![2, 1], vec![4, 3]]));
        assert_eq!(a.transpose(), IntMatrix::from_i64(&[vec![1, 3], vec![2, 4]]));
        assert!(a.checked_mul(&IntMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn determinants() {
        let a = IntMatrix::from_i64(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]);
        assert_eq!(a.determinant().unwrap(), BigInt::from(6));
        let b = IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(b.determinant().unwrap(), BigInt::from(-1));
        assert_eq!(IntMatrix::zeros(2, 2).determinant().unwrap(), BigInt::zero());
    }

    #[test]
    fn nearest_division() {
        let q = |a: i64, b: i64| div_nearest(&BigInt::from(a), &BigInt::from(b));
        assert_eq!(q(7, 2), BigInt::from(3));
        assert_eq!(q(-7, 2), BigInt::from(-3));
        assert_eq!(q(8, 3), BigInt::from(3));
        assert_eq!(q(-8, 3), BigInt::from(-3));
        assert_eq!(q(5, -3), BigInt::from(-2));
    }

    #[test]
    fn sparse_construction_sums_duplicates() {
        let m = IntMatrix::from_triples(2, 2, vec![(0, 1, BigInt::from(2)), (0, 1, BigInt::from(3))]).unwrap();
        assert_eq!(m, IntMatrix::from_i64(&[vec![0, 5], vec![0, 0]]));
        assert!(IntMatrix::from_triples(1, 1, vec![(1, 0, BigInt::one())]).is_err());
    }
}
