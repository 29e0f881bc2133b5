//! Dense integer matrices and the Smith normal form.
//!
//! Elimination is written once over [`Int`] and instantiated twice: with
//! checked `i64` arithmetic for the common case, and with [`BigInt`] when the
//! machine-word pass reports an [`Overflow`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, Zero};

/// Raised by the machine-word pass when an intermediate leaves `i64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

pub trait Int:
    Clone
    + fmt::Debug
    + PartialEq
    + Integer
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + From<i64>
    + Into<BigInt>
    + Send
    + Sync
{
}

impl<T> Int for T where
    T: Clone
        + fmt::Debug
        + PartialEq
        + Integer
        + Signed
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + From<i64>
        + Into<BigInt>
        + Send
        + Sync
{
}

#[inline]
pub(crate) fn add<T: Int>(a: &T, b: &T) -> Result<T, Overflow> {
    a.checked_add(b).ok_or(Overflow)
}

#[inline]
pub(crate) fn mul<T: Int>(a: &T, b: &T) -> Result<T, Overflow> {
    a.checked_mul(b).ok_or(Overflow)
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Arbitrary-precision integer matrix, the public face of this module.
pub type IntMatrix = Matrix<BigInt>;

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for r in 0..self.rows {
            list.entry(&&self.data[r * self.cols..(r + 1) * self.cols]);
        }
        list.finish()
    }
}

impl<T: Int> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), ncols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = T::from(v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_big(&self) -> IntMatrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().cloned().map(Into::into).collect(),
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, Overflow> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let v = add(&out[(i, j)], &mul(a, b)?)?;
                    out[(i, j)] = v;
                }
            }
        }
        Ok(out)
    }

    /// Rows `start..` as a new matrix.
    pub fn row_tail(&self, start: usize) -> Self {
        Matrix {
            rows: self.rows - start,
            cols: self.cols,
            data: self.data[start * self.cols..].to_vec(),
        }
    }

    /// Columns `start..` as a new matrix.
    pub fn column_tail(&self, start: usize) -> Self {
        let mut out = Self::zeros(self.rows, self.cols - start);
        for r in 0..self.rows {
            for c in start..self.cols {
                out[(r, c - start)] = self[(r, c)].clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `row[dst] += factor * row[src]`
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &T) -> Result<(), Overflow> {
        for c in 0..self.cols {
            let s = &self.data[src * self.cols + c];
            if s.is_zero() {
                continue;
            }
            let v = add(&self.data[dst * self.cols + c], &mul(factor, s)?)?;
            self.data[dst * self.cols + c] = v;
        }
        Ok(())
    }

    /// `col[dst] += factor * col[src]`
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &T) -> Result<(), Overflow> {
        for r in 0..self.rows {
            let s = &self.data[r * self.cols + src];
            if s.is_zero() {
                continue;
            }
            let v = add(&self.data[r * self.cols + dst], &mul(factor, s)?)?;
            self.data[r * self.cols + dst] = v;
        }
        Ok(())
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.data[r * self.cols + c].clone();
            self.data[r * self.cols + c] = v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -self.data[r * self.cols + c].clone();
            self.data[r * self.cols + c] = v;
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

/// `left · m · right = diag` with `left`, `right` unimodular and the diagonal
/// entries `d₀ | d₁ | …` nonnegative. The inverses of both transforms are
/// tracked alongside so callers can change coordinates in either direction.
#[derive(Debug, Clone)]
pub struct SmithForm<T> {
    pub left: Matrix<T>,
    pub left_inv: Matrix<T>,
    pub diag: Matrix<T>,
    pub right: Matrix<T>,
    pub right_inv: Matrix<T>,
    pub rank: usize,
}

impl<T: Int> SmithForm<T> {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<T> {
        (0..self.rank).map(|i| self.diag[(i, i)].clone()).collect()
    }
}

/// Which transforms to accumulate. Skipping one saves a quadratic factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Track {
    pub left: bool,
    pub right: bool,
}

impl Track {
    pub const BOTH: Track = Track {
        left: true,
        right: true,
    };
}

/// Smith normal form over arbitrary-precision integers.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm<BigInt> {
    snf_checked(m.clone(), Track::BOTH).expect("BigInt arithmetic cannot overflow")
}

/// Smith normal form of a small-integer matrix, falling back to `BigInt`.
pub fn smith_normal_form_i64(m: &Matrix<i64>) -> SmithForm<BigInt> {
    match snf_checked(m.clone(), Track::BOTH) {
        Ok(f) => SmithForm {
            left: f.left.to_big(),
            left_inv: f.left_inv.to_big(),
            diag: f.diag.to_big(),
            right: f.right.to_big(),
            right_inv: f.right_inv.to_big(),
            rank: f.rank,
        },
        Err(Overflow) => smith_normal_form(&m.to_big()),
    }
}

struct Transforms<T> {
    track: Track,
    left: Matrix<T>,
    left_inv: Matrix<T>,
    right: Matrix<T>,
    right_inv: Matrix<T>,
}

impl<T: Int> Transforms<T> {
    fn new(rows: usize, cols: usize, track: Track) -> Self {
        let sized = |on: bool, n: usize| {
            if on {
                Matrix::identity(n)
            } else {
                Matrix::zeros(0, 0)
            }
        };
        Transforms {
            track,
            left: sized(track.left, rows),
            left_inv: sized(track.left, rows),
            right: sized(track.right, cols),
            right_inv: sized(track.right, cols),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if self.track.left {
            self.left.swap_rows(a, b);
            self.left_inv.swap_cols(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if self.track.right {
            self.right.swap_cols(a, b);
            self.right_inv.swap_rows(a, b);
        }
    }

    /// Mirrors `row[dst] += f * row[src]` on the matrix being reduced.
    fn row_op(&mut self, dst: usize, src: usize, f: &T) -> Result<(), Overflow> {
        if self.track.left {
            self.left.add_row_multiple(dst, src, f)?;
            self.left_inv.add_col_multiple(src, dst, &-f.clone())?;
        }
        Ok(())
    }

    /// Mirrors `col[dst] += f * col[src]`.
    fn col_op(&mut self, dst: usize, src: usize, f: &T) -> Result<(), Overflow> {
        if self.track.right {
            self.right.add_col_multiple(dst, src, f)?;
            self.right_inv.add_row_multiple(src, dst, &-f.clone())?;
        }
        Ok(())
    }

    fn negate_row(&mut self, r: usize) {
        if self.track.left {
            self.left.negate_row(r);
            self.left_inv.negate_col(r);
        }
    }
}

/// Euclidean quotient with remainder of magnitude below `|d|`.
fn quotient<T: Int>(n: &T, d: &T) -> T {
    n.div_floor(d)
}

/// Gcd-pivot elimination, pivoting on the smallest nonzero magnitude.
pub(crate) fn snf_checked<T: Int>(mut a: Matrix<T>, track: Track) -> Result<SmithForm<T>, Overflow> {
    let (rows, cols) = (a.rows, a.cols);
    let mut tr = Transforms::new(rows, cols, track);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero magnitude in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                let v = &a[(r, c)];
                if v.is_zero() {
                    continue;
                }
                if best.is_none_or(|(br, bc)| v.abs() < a[(br, bc)].abs()) {
                    best = Some((r, c));
                    if v.abs().is_one() {
                        break;
                    }
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        a.swap_rows(t, pr);
        tr.swap_rows(t, pr);
        a.swap_cols(t, pc);
        tr.swap_cols(t, pc);

        loop {
            let pivot = a[(t, t)].clone();
            let mut leftover = false;
            for r in t + 1..rows {
                if a[(r, t)].is_zero() {
                    continue;
                }
                let f = -quotient(&a[(r, t)], &pivot);
                a.add_row_multiple(r, t, &f)?;
                tr.row_op(r, t, &f)?;
                leftover |= !a[(r, t)].is_zero();
            }
            for c in t + 1..cols {
                if a[(t, c)].is_zero() {
                    continue;
                }
                let f = -quotient(&a[(t, c)], &pivot);
                a.add_col_multiple(c, t, &f)?;
                tr.col_op(c, t, &f)?;
                leftover |= !a[(t, c)].is_zero();
            }
            if leftover {
                // a remainder smaller than the pivot survived; promote it
                let mut best: Option<(usize, usize)> = None;
                let candidates = (t + 1..rows)
                    .map(|r| (r, t))
                    .chain((t + 1..cols).map(|c| (t, c)));
                for (r, c) in candidates {
                    let v = &a[(r, c)];
                    if !v.is_zero() && best.is_none_or(|(br, bc)| v.abs() < a[(br, bc)].abs()) {
                        best = Some((r, c));
                    }
                }
                let (r, c) = best.expect("leftover entry exists");
                if c == t {
                    a.swap_rows(t, r);
                    tr.swap_rows(t, r);
                } else {
                    a.swap_cols(t, c);
                    tr.swap_cols(t, c);
                }
                continue;
            }
            // divisibility of the trailing block by the pivot
            let bad_row = (t + 1..rows).find(|&r| {
                (t + 1..cols).any(|c| !a[(r, c)].mod_floor(&pivot).is_zero())
            });
            match bad_row {
                Some(r) => {
                    let one = T::one();
                    a.add_row_multiple(t, r, &one)?;
                    tr.row_op(t, r, &one)?;
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            tr.negate_row(t);
        }
        t += 1;
    }
    Ok(SmithForm {
        left: tr.left,
        left_inv: tr.left_inv,
        diag: a,
        right: tr.right,
        right_inv: tr.right_inv,
        rank: t,
    })
}

/// Determinant by fraction-free Bareiss elimination (test helper for the
/// unimodularity checks).
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[(r, k)].is_zero()) else {
                return BigInt::zero();
            };
            a.swap_rows(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}
