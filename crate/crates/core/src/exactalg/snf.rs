//! Smith normal form with smallest-magnitude pivoting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::div_nearest;
use super::IntMatrix;

/// `u * a * v == s` with `u`, `v` unimodular and `s` diagonal, its nonzero
/// entries first and forming a divisibility chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub invariant_factors: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

/// Elimination state. Row operations are mirrored into `u` and column
/// operations into `v` when transforms are tracked.
struct Elimination {
    s: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
}

impl Elimination {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.s.swap_rows(a, b);
        if let Some(u) = &mut self.u {
            u.swap_rows(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.s.swap_cols(a, b);
        if let Some(v) = &mut self.v {
            v.swap_cols(a, b);
        }
    }

    fn add_row_multiple(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.s.add_row_multiple(dst, src, f);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(dst, src, f);
        }
    }

    fn add_col_multiple(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.s.add_col_multiple(dst, src, f);
        if let Some(v) = &mut self.v {
            v.add_col_multiple(dst, src, f);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.s.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
    }

    /// Smallest nonzero magnitude in the trailing block starting at `(t, t)`;
    /// ties go to the lowest row, then the lowest column.
    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let (rows, cols) = self.s.shape();
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = self.s.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => x.magnitude() < self.s.get(bi, bj).magnitude(),
                };
                if better {
                    best = Some((i, j));
                    if x.magnitude().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    /// Smallest nonzero entry in row `t` or column `t` past the diagonal.
    fn smallest_in_cross(&self, t: usize) -> Option<(usize, usize)> {
        let (rows, cols) = self.s.shape();
        let row = (t + 1..cols).map(|j| (t, j));
        let col = (t + 1..rows).map(|i| (i, t));
        row.chain(col)
            .filter(|&(i, j)| !self.s.get(i, j).is_zero())
            .min_by(|&(a, b), &(c, d)| self.s.get(a, b).magnitude().cmp(self.s.get(c, d).magnitude()))
    }

    fn run(&mut self) {
        let (rows, cols) = self.s.shape();
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pi, pj)) = self.smallest_in_block(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let pivot = self.s.get(t, t).clone();
                for i in t + 1..rows {
                    if !self.s.get(i, t).is_zero() {
                        let q = -div_nearest(self.s.get(i, t), &pivot);
                        self.add_row_multiple(i, t, &q);
                    }
                }
                for j in t + 1..cols {
                    if !self.s.get(t, j).is_zero() {
                        let q = -div_nearest(self.s.get(t, j), &pivot);
                        self.add_col_multiple(j, t, &q);
                    }
                }
                if let Some((i, j)) = self.smallest_in_cross(t) {
                    // A remainder survived and is smaller than the pivot.
                    if i == t {
                        self.swap_cols(t, j);
                    } else {
                        self.swap_rows(t, i);
                    }
                    continue;
                }
                // Row and column are clear; enforce divisibility of the rest.
                let bad_row = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !self.s.get(i, j).is_multiple_of(&pivot)));
                match bad_row {
                    Some(i) => self.add_row_multiple(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.s.get(t, t).is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
    }

    fn diagonal(&self) -> Vec<BigInt> {
        let (rows, cols) = self.s.shape();
        (0..rows.min(cols)).map(|i| self.s.get(i, i).clone()).take_while(|d| !d.is_zero()).collect()
    }
}

/// Full Smith normal form with both transforms.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let mut e =
        Elimination { s: a.clone(), u: Some(IntMatrix::identity(a.rows())), v: Some(IntMatrix::identity(a.cols())) };
    e.run();
    let invariant_factors = e.diagonal();
    SnfResult { u: e.u.unwrap(), s: e.s, v: e.v.unwrap(), invariant_factors }
}

/// The nonzero invariant factors of `a`, without computing transforms.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let mut e = Elimination { s: a.clone(), u: None, v: None };
    e.run();
    e.diagonal()
}
