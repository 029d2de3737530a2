use alloc::vec::Vec;

use super::{Error, QMatrix, Rational, Result};

/// Linear subspace of `Qⁿ`, stored as the nonzero rows of a reduced row
/// echelon basis so that equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    dim_ambient: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { dim_ambient: n, basis: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Subspace::span(n, QMatrix::identity(n).to_rows()).expect("square identity")
    }

    /// Span of the given vectors, each of length `n`.
    pub fn span(n: usize, vectors: Vec<Vec<Rational>>) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        if vectors.is_empty() {
            return Ok(Subspace::zero(n));
        }
        let rref = QMatrix::from_rows(vectors)?.rref();
        let basis = (0..rref.pivots.len()).map(|i| rref.matrix.row(i).to_vec()).collect();
        Ok(Subspace { dim_ambient: n, basis })
    }

    /// Null space of a matrix with `n` columns.
    pub fn kernel_of(m: &QMatrix) -> Self {
        Subspace::span(m.ncols(), m.kernel()).expect("kernel vectors have ambient length")
    }

    /// Column space of a matrix.
    pub fn image_of(m: &QMatrix) -> Self {
        Subspace::span(m.nrows(), m.transpose().to_rows()).expect("columns have ambient length")
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim_ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if v.len() != self.dim_ambient {
            return false;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        QMatrix::from_rows(rows).map(|m| m.rank() == self.dim()).unwrap_or(false)
    }

    /// Linear functionals cutting out the subspace, as rows.
    pub fn annihilator(&self) -> Vec<Vec<Rational>> {
        if self.basis.is_empty() {
            return QMatrix::identity(self.dim_ambient).to_rows();
        }
        QMatrix::from_rows(self.basis.clone()).expect("basis rows").kernel()
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(self.dim_ambient, rows)
    }

    /// `U ∩ V`, the common null space of both annihilators.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut rows = self.annihilator();
        rows.extend(other.annihilator());
        if rows.is_empty() {
            return Ok(Subspace::full(self.dim_ambient));
        }
        Ok(Subspace::kernel_of(&QMatrix::from_rows(rows)?))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.dim_ambient == other.dim_ambient && self.basis.iter().all(|v| other.contains(v))
    }

    /// Image under a linear map with `self.ambient_dim()` columns.
    pub fn map(&self, m: &QMatrix) -> Result<Subspace> {
        if m.ncols() != self.dim_ambient {
            return Err(Error::DimensionMismatch { expected: self.dim_ambient, found: m.ncols() });
        }
        let images: Result<Vec<Vec<Rational>>> = self.basis.iter().map(|v| m.mul_vec(v)).collect();
        Subspace::span(m.nrows(), images?)
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.dim_ambient != other.dim_ambient {
            return Err(Error::DimensionMismatch { expected: self.dim_ambient, found: other.dim_ambient });
        }
        Ok(())
    }
}
