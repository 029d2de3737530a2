//! Exact linear algebra over the rationals and over finitely generated
//! rational vector spaces spanned by declared irrational tags.

mod form;
mod matrix;
mod poly;
mod scalar;
#[cfg(feature = "serde")]
mod serde_impl;
mod snf;
mod subspace;

pub use form::ConstForm;
pub use matrix::{IntMatrix, KMatrix, Matrix, QMatrix};
pub use poly::{Monomial, Poly};
pub use scalar::{rationally_independent, ScalarK, Tag};
pub use snf::{smith_normal_form, Snf};
pub use subspace::Subspace;
#[cfg(feature = "serde")]
pub use serde_impl::{serde_rat, EntryRepr, RationalRepr};

use alloc::string::String;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ragged matrix rows")]
    Ragged,
    #[error("matrix is singular")]
    Singular,
    #[error("degree {0} exceeds ambient dimension {1}")]
    DegreeOverflow(usize, usize),
    #[error("entry is not rational: {0}")]
    NotRational(String),
    #[error("product of two irrational scalars is not representable: ({0}) * ({1})")]
    TagProduct(String, String),
    #[error("cannot parse {0:?}")]
    Parse(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// `n/d` as a rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    a.lcm(b).abs()
}

/// Lossy conversion for the numeric layer.
pub fn rational_to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        // Very large numerators or denominators: scale down digit counts.
        let n = q.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Exact rational value of a finite `f64`.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Parses `"3"`, `"-3/4"` or a decimal such as `"0.618"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || Error::Parse(String::from(s));
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let whole = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit()) || !whole.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let digits: String = [whole, frac].concat();
        let digits = if digits.is_empty() { String::from("0") } else { digits };
        let n: BigInt = digits.parse().map_err(|_| err())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let q = Rational::new(n, d);
        return Ok(if negative { -q } else { q });
    }
    let n: BigInt = s.parse().map_err(|_| err())?;
    Ok(Rational::from_integer(n))
}
