use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use super::{Error, QMatrix, Rational, Result};

/// Constant-coefficient differential form on an `m`-torus,
/// `Σ_I c_I dx^I` over strictly increasing multi-indices `I`.
///
/// Indices are 0-based internally: `dx^1` of the usual notation is index 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConstForm {
    m: usize,
    degree: usize,
    // Invariant: keys strictly increasing, of length `degree`, entries < m;
    // no zero coefficients stored.
    coeffs: BTreeMap<Vec<usize>, Rational>,
}

/// Sorts `idx` in place and returns the parity of the sorting permutation,
/// or `None` if an index repeats.
fn sort_with_sign(idx: &mut [usize]) -> Option<bool> {
    let mut odd = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(odd)
    }
}

impl ConstForm {
    pub fn zero(m: usize, degree: usize) -> Result<Self> {
        if degree > m {
            return Err(Error::DegreeOverflow(degree, m));
        }
        Ok(ConstForm { m, degree, coeffs: BTreeMap::new() })
    }

    /// `c · dx^{i₁} ∧ … ∧ dx^{i_k}` for arbitrary (not necessarily sorted)
    /// 0-based indices; repeated indices give the zero form.
    pub fn monomial(m: usize, indices: &[usize], c: Rational) -> Result<Self> {
        let mut out = ConstForm::zero(m, indices.len())?;
        if let Some(&bad) = indices.iter().find(|&&i| i >= m) {
            return Err(Error::DimensionMismatch { expected: m, found: bad + 1 });
        }
        out.add_term(indices.to_vec(), c);
        Ok(out)
    }

    /// The 1-form `dx^i` (0-based).
    pub fn dx(m: usize, i: usize) -> Result<Self> {
        ConstForm::monomial(m, &[i], Rational::from_integer(1.into()))
    }

    /// The 1-form `Σ vᵢ dx^i`.
    pub fn one_form(v: &[Rational]) -> Self {
        let mut out = ConstForm { m: v.len(), degree: 1, coeffs: BTreeMap::new() };
        for (i, c) in v.iter().enumerate() {
            out.add_term(vec![i], c.clone());
        }
        out
    }

    /// The 2-form `Σ_{i<j} M_ij dx^i∧dx^j` of an antisymmetric matrix.
    pub fn from_antisymmetric(mat: &QMatrix) -> Result<Self> {
        if !mat.is_antisymmetric() {
            return Err(Error::DimensionMismatch { expected: mat.nrows(), found: mat.ncols() });
        }
        let m = mat.nrows();
        let mut out = ConstForm::zero(m, 2)?;
        for i in 0..m {
            for j in i + 1..m {
                out.add_term(vec![i, j], mat.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// Antisymmetric matrix of a 2-form (inverse of [`from_antisymmetric`]).
    ///
    /// [`from_antisymmetric`]: ConstForm::from_antisymmetric
    pub fn to_antisymmetric(&self) -> Result<QMatrix> {
        if self.degree != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: self.degree });
        }
        let mut mat = QMatrix::zeros(self.m, self.m);
        for (idx, c) in &self.coeffs {
            mat.set(idx[0], idx[1], c.clone());
            mat.set(idx[1], idx[0], -c.clone());
        }
        Ok(mat)
    }

    fn add_term(&mut self, mut idx: Vec<usize>, c: Rational) {
        use alloc::collections::btree_map::Entry;
        let Some(odd) = sort_with_sign(&mut idx) else { return };
        let c = if odd { -c } else { c };
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(idx) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `dx^I` for any ordering of `I` (sign-adjusted).
    pub fn coeff(&self, indices: &[usize]) -> Rational {
        let mut idx = indices.to_vec();
        match sort_with_sign(&mut idx) {
            None => Rational::zero(),
            Some(odd) => {
                let c = self.coeffs.get(&idx).cloned().unwrap_or_else(Rational::zero);
                if odd {
                    -c
                } else {
                    c
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.coeffs.iter()
    }

    pub fn add(&self, other: &ConstForm) -> Result<ConstForm> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            out.add_term(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, q: &Rational) -> ConstForm {
        let mut out = ConstForm { m: self.m, degree: self.degree, coeffs: BTreeMap::new() };
        for (idx, c) in &self.coeffs {
            out.add_term(idx.clone(), c * q);
        }
        out
    }

    /// Exterior product with signs from the parity of index sorting.
    pub fn wedge(&self, other: &ConstForm) -> Result<ConstForm> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch { expected: self.m, found: other.m });
        }
        let mut out = ConstForm::zero(self.m, self.degree + other.degree)?;
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                let mut idx = a.clone();
                idx.extend_from_slice(b);
                out.add_term(idx, ca * cb);
            }
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &ConstForm) -> Result<()> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch { expected: self.m, found: other.m });
        }
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch { expected: self.degree, found: other.degree });
        }
        Ok(())
    }
}

impl fmt::Display for ConstForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (n, (idx, c)) in self.coeffs.iter().enumerate() {
            if n > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            write!(f, "{}", c.abs())?;
            if idx.is_empty() {
                continue;
            }
            f.write_str(" ")?;
            for (k, i) in idx.iter().enumerate() {
                if k > 0 {
                    f.write_str("^")?;
                }
                write!(f, "dx{}", i + 1)?;
            }
        }
        Ok(())
    }
}
