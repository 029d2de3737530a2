use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_traits::{One, Signed, Zero};

use super::{parse_rational, Error, Matrix, Rational, Result};

/// Name of a basis element of a [`ScalarK`].
///
/// The tag `"1"` is the rational unit. Every other tag stands for an
/// irrational number, and distinct tags together with `1` are taken to be
/// linearly independent over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tag(String);

impl Tag {
    pub const UNIT: &'static str = "1";

    pub fn new(name: impl Into<String>) -> Self {
        Tag(name.into())
    }

    pub fn unit() -> Self {
        Tag(String::from(Self::UNIT))
    }

    pub fn is_unit(&self) -> bool {
        self.0 == Self::UNIT
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub(crate) fn valid_name(s: &str) -> bool {
        if s == Self::UNIT {
            return true;
        }
        let mut chars = s.chars();
        matches!(chars.next(), Some(c) if c.is_alphabetic())
            && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An element of the rational vector space spanned by `1` and a set of
/// declared irrational tags: `q_1 + Σ q_t · t`.
///
/// Rationality and linear (in)dependence over the rationals are decided
/// exactly from the coefficients. Products are defined only when at least
/// one factor is rational.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ScalarK {
    // Invariant: no zero coefficients are stored.
    coeffs: BTreeMap<Tag, Rational>,
}

impl ScalarK {
    pub fn zero() -> Self {
        ScalarK::default()
    }

    pub fn one() -> Self {
        ScalarK::rational(Rational::one())
    }

    pub fn rational(q: Rational) -> Self {
        ScalarK::from_terms([(Tag::unit(), q)])
    }

    pub fn int(n: i64) -> Self {
        ScalarK::rational(super::int(n))
    }

    /// `q · tag`
    pub fn tagged(tag: &str, q: Rational) -> Self {
        ScalarK::from_terms([(Tag::new(tag), q)])
    }

    /// The bare irrational `tag`.
    pub fn tag(tag: &str) -> Self {
        ScalarK::tagged(tag, Rational::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Tag, Rational)>) -> Self {
        let mut out = ScalarK::zero();
        for (t, q) in terms {
            out.add_term(t, q);
        }
        out
    }

    fn add_term(&mut self, tag: Tag, q: Rational) {
        use alloc::collections::btree_map::Entry;
        if q.is_zero() {
            return;
        }
        match self.coeffs.entry(tag) {
            Entry::Vacant(v) => {
                v.insert(q);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, tag: &Tag) -> Rational {
        self.coeffs.get(tag).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn rational_part(&self) -> Rational {
        self.coeff(&Tag::unit())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.keys().all(Tag::is_unit)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.rational_part())
    }

    /// Irrational tags with a nonzero coefficient.
    pub fn irrational_tags(&self) -> impl Iterator<Item = &Tag> {
        self.coeffs.keys().filter(|t| !t.is_unit())
    }

    /// All `(tag, coefficient)` pairs with nonzero coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (&Tag, &Rational)> {
        self.coeffs.iter()
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return ScalarK::zero();
        }
        ScalarK {
            coeffs: self.coeffs.iter().map(|(t, c)| (t.clone(), c * q)).collect(),
        }
    }

    /// Product, defined when one of the factors is rational.
    pub fn try_mul(&self, other: &ScalarK) -> Result<ScalarK> {
        if let Some(q) = self.as_rational() {
            Ok(other.scale(&q))
        } else if let Some(q) = other.as_rational() {
            Ok(self.scale(&q))
        } else {
            Err(Error::TagProduct(self.to_string(), other.to_string()))
        }
    }

    /// Divides by a nonzero rational.
    pub fn div_rational(&self, q: &Rational) -> Self {
        self.scale(&q.recip())
    }

    /// Numeric value once every irrational tag is bound to a float.
    pub fn eval_f64(&self, bindings: &BTreeMap<Tag, f64>) -> Option<f64> {
        let mut acc = 0.0;
        for (t, q) in &self.coeffs {
            let base = if t.is_unit() { 1.0 } else { *bindings.get(t)? };
            acc += super::rational_to_f64(q) * base;
        }
        Some(acc)
    }
}

impl From<Rational> for ScalarK {
    fn from(q: Rational) -> Self {
        ScalarK::rational(q)
    }
}

impl From<i64> for ScalarK {
    fn from(n: i64) -> Self {
        ScalarK::int(n)
    }
}

impl Zero for ScalarK {
    fn zero() -> Self {
        ScalarK::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<'a> Add<&'a ScalarK> for &'a ScalarK {
    type Output = ScalarK;
    fn add(self, rhs: &ScalarK) -> ScalarK {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for ScalarK {
    type Output = ScalarK;
    fn add(mut self, rhs: ScalarK) -> ScalarK {
        self += &rhs;
        self
    }
}

impl AddAssign<&ScalarK> for ScalarK {
    fn add_assign(&mut self, rhs: &ScalarK) {
        for (t, q) in &rhs.coeffs {
            self.add_term(t.clone(), q.clone());
        }
    }
}

impl SubAssign<&ScalarK> for ScalarK {
    fn sub_assign(&mut self, rhs: &ScalarK) {
        for (t, q) in &rhs.coeffs {
            self.add_term(t.clone(), -q);
        }
    }
}

impl<'a> Sub<&'a ScalarK> for &'a ScalarK {
    type Output = ScalarK;
    fn sub(self, rhs: &ScalarK) -> ScalarK {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for ScalarK {
    type Output = ScalarK;
    fn sub(mut self, rhs: ScalarK) -> ScalarK {
        self -= &rhs;
        self
    }
}

impl Neg for ScalarK {
    type Output = ScalarK;
    fn neg(self) -> ScalarK {
        ScalarK {
            coeffs: self.coeffs.into_iter().map(|(t, q)| (t, -q)).collect(),
        }
    }
}

impl Neg for &ScalarK {
    type Output = ScalarK;
    fn neg(self) -> ScalarK {
        -self.clone()
    }
}

impl Mul<&Rational> for &ScalarK {
    type Output = ScalarK;
    fn mul(self, rhs: &Rational) -> ScalarK {
        self.scale(rhs)
    }
}

impl fmt::Display for ScalarK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (t, q)) in self.coeffs.iter().enumerate() {
            let neg = q.is_negative();
            let mag = q.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if t.is_unit() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", t)?;
            } else {
                write!(f, "{}*{}", mag, t)?;
            }
        }
        Ok(())
    }
}

impl FromStr for ScalarK {
    type Err = Error;

    /// Accepts sums of terms such as `"1/2 - alpha/7 + 3*beta"`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse(String::from(s)));
        }
        let mut terms: Vec<String> = Vec::new();
        let mut current = String::new();
        let mut prev: Option<char> = None;
        for c in compact.chars() {
            let splits = (c == '+' || c == '-')
                && !current.is_empty()
                && !matches!(prev, Some('*') | Some('/') | Some('e') | Some('E'));
            if splits {
                terms.push(core::mem::take(&mut current));
            }
            current.push(c);
            prev = Some(c);
        }
        terms.push(current);
        let mut out = ScalarK::zero();
        for term in terms {
            let (tag, q) = parse_term(&term).ok_or_else(|| Error::Parse(String::from(s)))?;
            out.add_term(tag, q);
        }
        Ok(out)
    }
}

fn parse_term(term: &str) -> Option<(Tag, Rational)> {
    let body = term.strip_prefix('+').unwrap_or(term);
    let tag_start = body.char_indices().find(|(_, c)| c.is_alphabetic()).map(|(i, _)| i);
    let Some(start) = tag_start else {
        return parse_rational(body).ok().map(|q| (Tag::unit(), q));
    };
    let coef_part = body[..start].trim_end_matches('*');
    let coef = match coef_part {
        "" | "+" => Rational::one(),
        "-" => -Rational::one(),
        other => parse_rational(other).ok()?,
    };
    let rest = &body[start..];
    let (name, denom) = match rest.split_once('/') {
        Some((n, d)) => (n, Some(parse_rational(d).ok()?)),
        None => (rest, None),
    };
    if !Tag::valid_name(name) || name == Tag::UNIT {
        return None;
    }
    let q = match denom {
        Some(d) if d.is_zero() => return None,
        Some(d) => coef / d,
        None => coef,
    };
    Some((Tag::new(name), q))
}

/// True iff the given scalars are linearly independent over the rationals.
///
/// Decided by the rank of the matrix of tag coefficients, one row per
/// scalar. A list containing zero is dependent; the empty list is
/// independent.
pub fn rationally_independent(xs: &[ScalarK]) -> bool {
    if xs.iter().any(ScalarK::is_zero) {
        return false;
    }
    let tags: BTreeSet<&Tag> = xs.iter().flat_map(|x| x.coeffs.keys()).collect();
    if xs.len() > tags.len() {
        return false;
    }
    let rows: Vec<Vec<Rational>> = xs
        .iter()
        .map(|x| tags.iter().map(|t| x.coeff(t)).collect())
        .collect();
    match Matrix::from_rows(rows) {
        Ok(m) => m.rank() == xs.len(),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlin::rat;

    #[test]
    fn parse_and_display() {
        let x: ScalarK = "1/2 - alpha/7 + 3*beta".parse().unwrap();
        assert_eq!(x.rational_part(), rat(1, 2));
        assert_eq!(x.coeff(&Tag::new("alpha")), rat(-1, 7));
        assert_eq!(x.coeff(&Tag::new("beta")), rat(3, 1));
        let back: ScalarK = x.to_string().parse().unwrap();
        assert_eq!(back, x);
        assert_eq!("0.25".parse::<ScalarK>().unwrap(), ScalarK::rational(rat(1, 4)));
        assert_eq!("-alpha".parse::<ScalarK>().unwrap(), -ScalarK::tag("alpha"));
        assert!("alpha*beta".parse::<ScalarK>().is_err());
        assert!("".parse::<ScalarK>().is_err());
    }

    #[test]
    fn cancellation_drops_terms() {
        let a = ScalarK::tag("alpha");
        let z = &a - &a;
        assert!(z.is_zero());
        assert!(z.is_rational());
        assert_eq!(z, ScalarK::zero());
    }

    #[test]
    fn products_need_a_rational_factor() {
        let a = ScalarK::tag("alpha");
        let half = ScalarK::rational(rat(1, 2));
        assert_eq!(a.try_mul(&half).unwrap(), ScalarK::tagged("alpha", rat(1, 2)));
        assert!(a.try_mul(&a).is_err());
    }

    #[test]
    fn independence_examples() {
        let one = ScalarK::one();
        let alpha = ScalarK::tag("alpha");
        assert!(rationally_independent(&[one.clone(), alpha.clone()]));
        assert!(!rationally_independent(&[
            ScalarK::rational(rat(1, 2)),
            ScalarK::rational(rat(3, 4))
        ]));
        assert!(!rationally_independent(&[alpha.clone(), alpha.scale(&rat(2, 1))]));
        assert!(!rationally_independent(&[one, ScalarK::zero()]));
        assert!(rationally_independent(&[]));
    }

    #[test]
    fn eval_with_bindings() {
        let x: ScalarK = "1 + 2*alpha".parse().unwrap();
        let mut b = BTreeMap::new();
        assert_eq!(x.eval_f64(&b), None);
        b.insert(Tag::new("alpha"), 0.5);
        assert_eq!(x.eval_f64(&b), Some(2.0));
    }
}
