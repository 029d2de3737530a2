use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Error, Poly, Rational, Result, ScalarK, Tag};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type QMatrix = Matrix<Rational>;
pub type KMatrix = Matrix<ScalarK>;
pub type IntMatrix = Matrix<BigInt>;

impl<T: Clone> Matrix<T> {
    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            if r.len() != ncols {
                return Err(Error::Ragged);
            }
            data.extend(r);
        }
        Ok(Matrix { rows: nrows, cols: ncols, data })
    }

    /// An `rows × cols` matrix with explicit column count (useful for
    /// matrices with zero rows).
    pub fn from_rows_with_cols(rows: Vec<Vec<T>>, cols: usize) -> Result<Self> {
        if rows.is_empty() {
            return Ok(Matrix { rows: 0, cols, data: Vec::new() });
        }
        let m = Self::from_rows(rows)?;
        if m.cols != cols {
            return Err(Error::DimensionMismatch { expected: cols, found: m.cols });
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.rows > 0 && other.rows > 0 && self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix { rows: self.rows + other.rows, cols, data })
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        Ok(Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        }))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn column_vector(v: Vec<T>) -> Self {
        let n = v.len();
        Matrix { rows: n, cols: 1, data: v }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero,
    for<'a> &'a T: Add<&'a T, Output = T> + Sub<&'a T, Output = T>,
{
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j)))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        Ok(())
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                acc = acc + self.get(i, k) * other.get(k, j);
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (k, x) in v.iter().enumerate() {
                    acc = acc + self.get(i, k) * x;
                }
                acc
            })
            .collect())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| c * x)
    }
}

impl<T: Clone + Neg<Output = T>> Neg for Matrix<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|x| -x.clone())
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One + PartialEq,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    pub fn pow(&self, n: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(result)
    }

    /// True iff the matrix is antisymmetric with zero diagonal.
    pub fn is_antisymmetric(&self) -> bool
    where
        T: Neg<Output = T>,
    {
        self.is_square()
            && (0..self.rows).all(|i| {
                self.get(i, i).is_zero()
                    && (i + 1..self.cols).all(|j| *self.get(i, j) == -self.get(j, i).clone())
            })
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Result of reducing a rational matrix to reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: QMatrix,
    pub pivots: Vec<usize>,
}

impl QMatrix {
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Rational>> =
            rows.iter().map(|r| r.iter().map(|&x| super::int(x)).collect()).collect();
        Matrix::from_rows(rows).expect("rows of equal length")
    }

    /// Gauss–Jordan elimination.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for j in c..m.cols {
                        let v = m.get(i, j) - &(&f * m.get(r, j));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right null space `{x : A x = 0}`, one vector per free
    /// column, in the standard form read off from the RREF.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let Rref { matrix, pivots } = self.rref();
        let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
        let basis: Vec<Vec<Rational>> = (0..self.cols)
            .filter(|c| !pivot_set.contains(c))
            .map(|free| {
                let mut v = vec![Rational::zero(); self.cols];
                v[free] = Rational::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -matrix.get(row, free).clone();
                }
                v
            })
            .collect();
        debug_assert_eq!(pivots.len() + basis.len(), self.cols, "rank-nullity");
        basis
    }

    /// Basis of the left null space `{y : yᵀ A = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<Rational>> {
        self.transpose().kernel()
    }

    /// Some solution of `A x = b`, or `None` when the system is inconsistent.
    pub fn solve_any(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: b.len() });
        }
        let aug = self.hstack(&Matrix::column_vector(b.to_vec()))?;
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = matrix.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Unique solution of a square nonsingular system.
    pub fn solve(&self, b: &[Rational]) -> Result<Vec<Rational>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        if self.rank() < self.rows {
            return Err(Error::Singular);
        }
        self.solve_any(b)?.ok_or(Error::Singular)
    }

    pub fn inverse(&self) -> Result<QMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let aug = self.hstack(&QMatrix::identity(n))?;
        let Rref { matrix, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        Ok(Matrix::from_fn(n, n, |i, j| matrix.get(i, n + j).clone()))
    }

    pub fn det(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det *= &pivot;
            for i in c + 1..m.rows {
                if !m.get(i, c).is_zero() {
                    let f = m.get(i, c) / &pivot;
                    for j in c..m.cols {
                        let v = m.get(i, j) - &(&f * m.get(c, j));
                        m.set(i, j, v);
                    }
                }
            }
        }
        Ok(det)
    }

    /// Embedding into the tagged scalars.
    pub fn to_k(&self) -> KMatrix {
        self.map(|q| ScalarK::rational(q.clone()))
    }

    /// Exact conversion when every entry is an integer.
    pub fn to_int(&self) -> Option<IntMatrix> {
        if self.data.iter().all(|q| q.is_integer()) {
            Some(self.map(|q| q.to_integer()))
        } else {
            None
        }
    }
}

impl KMatrix {
    /// Every irrational tag occurring in some entry.
    pub fn tags(&self) -> BTreeSet<Tag> {
        self.data.iter().flat_map(|x| x.irrational_tags().cloned()).collect()
    }

    pub fn is_rational(&self) -> bool {
        self.data.iter().all(ScalarK::is_rational)
    }

    /// The rational matrix, if no entry carries an irrational tag.
    pub fn to_rational(&self) -> Result<QMatrix> {
        if let Some(bad) = self.data.iter().find(|x| !x.is_rational()) {
            return Err(Error::NotRational(alloc::string::ToString::to_string(bad)));
        }
        Ok(self.map(ScalarK::rational_part))
    }

    /// Coefficient matrix of one tag (the unit tag gives the rational part).
    pub fn coefficient_matrix(&self, tag: &Tag) -> QMatrix {
        self.map(|x| x.coeff(tag))
    }

    /// `{x ∈ Qⁿ : A x = 0}`. Since `1` and the tags are independent over
    /// the rationals, this is the kernel of every coefficient matrix at once.
    pub fn rational_kernel(&self) -> Vec<Vec<Rational>> {
        let mut stacked = self.coefficient_matrix(&Tag::unit());
        for t in self.tags() {
            stacked = stacked.vstack(&self.coefficient_matrix(&t)).expect("same width");
        }
        stacked.kernel()
    }

    /// Rank over the field of rational functions in the tags, i.e. the
    /// generic rank when the tags are treated as independent
    /// indeterminates. Computed by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<Poly>> =
            (0..self.rows).map(|i| self.row(i).iter().map(Poly::from).collect()).collect();
        let (rows, cols) = (self.rows, self.cols);
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let pivot = m[r][c].clone();
            for i in r + 1..rows {
                if m[i][c].is_zero() {
                    continue;
                }
                let f = m[i][c].clone();
                for j in c..cols {
                    m[i][j] = &(&pivot * &m[i][j]) - &(&f * &m[r][j]);
                }
            }
            r += 1;
        }
        r
    }

    pub fn mul_rational_vec(&self, v: &[Rational]) -> Result<Vec<ScalarK>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = ScalarK::zero();
                for (k, x) in v.iter().enumerate() {
                    acc += &self.get(i, k).scale(x);
                }
                acc
            })
            .collect())
    }

    pub fn add_k(&self, other: &KMatrix) -> Result<KMatrix> {
        Matrix::add(self, other)
    }

    /// Multiplies every entry by a rational or tagged scalar; fails if an
    /// irrational entry meets an irrational factor.
    pub fn scale_k(&self, c: &ScalarK) -> Result<KMatrix> {
        let rows: Result<Vec<Vec<ScalarK>>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.try_mul(c)).collect())
            .collect();
        Matrix::from_rows_with_cols(rows?, self.cols)
    }

    pub fn is_antisymmetric_k(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self.get(i, i).is_zero()
                    && (i + 1..self.cols).all(|j| *self.get(i, j) == -self.get(j, i))
            })
    }
}

impl IntMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Matrix::from_rows(rows).expect("rows of equal length")
    }

    pub fn to_q(&self) -> QMatrix {
        self.map(|z| Rational::from_integer(z.clone()))
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
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
                let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return Ok(BigInt::zero());
                };
                for j in 0..n {
                    m.data.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        Ok(sign * m.get(n - 1, n - 1))
    }

    pub fn rank(&self) -> usize {
        self.to_q().rank()
    }
}
