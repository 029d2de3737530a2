use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{Rational, ScalarK, Tag};

/// Product of tags with positive exponents, sorted by tag.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Tag, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(tag: Tag) -> Self {
        Monomial(alloc::vec![(tag, 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut acc: BTreeMap<Tag, u32> = self.0.iter().cloned().collect();
        for (t, e) in &other.0 {
            *acc.entry(t.clone()).or_insert(0) += e;
        }
        Monomial(acc.into_iter().collect())
    }
}

/// Polynomial with rational coefficients in commuting tag variables.
///
/// Used where tagged quantities must be multiplied symbolically, e.g. to
/// expand a 2-form against a vector field or to run fraction-free
/// elimination over the field of rational functions in the tags.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn constant(q: Rational) -> Self {
        let mut p = Poly::default();
        p.add_term(Monomial::one(), q);
        p
    }

    pub fn var(tag: &str) -> Self {
        let mut p = Poly::default();
        p.add_term(Monomial::var(Tag::new(tag)), Rational::one());
        p
    }

    fn add_term(&mut self, m: Monomial, q: Rational) {
        use alloc::collections::btree_map::Entry;
        if q.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Back to a [`ScalarK`] when the polynomial has degree at most one.
    pub fn as_scalar(&self) -> Option<ScalarK> {
        let mut out = ScalarK::zero();
        for (m, q) in &self.terms {
            match m.0.as_slice() {
                [] => out += &ScalarK::rational(q.clone()),
                [(t, 1)] => out += &ScalarK::tagged(t.as_str(), q.clone()),
                _ => return None,
            }
        }
        Some(out)
    }

    pub fn scale(&self, q: &Rational) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * q);
        }
        out
    }
}

impl From<&ScalarK> for Poly {
    fn from(x: &ScalarK) -> Self {
        let mut p = Poly::default();
        for (t, q) in x.terms() {
            let m = if t.is_unit() { Monomial::one() } else { Monomial::var(t.clone()) };
            p.add_term(m, q.clone());
        }
        p
    }
}

impl From<Rational> for Poly {
    fn from(q: Rational) -> Self {
        Poly::constant(q)
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(Rational::one())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, q) in &rhs.terms {
            out.add_term(m.clone(), q.clone());
        }
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, q) in &rhs.terms {
            out.add_term(m.clone(), -q);
        }
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::default();
        for (ma, qa) in &self.terms {
            for (mb, qb) in &rhs.terms {
                out.add_term(ma.mul(mb), qa * qb);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.into_iter().map(|(m, q)| (m, -q)).collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, q)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(if q.is_negative() { " - " } else { " + " })?;
            } else if q.is_negative() {
                f.write_str("-")?;
            }
            let mag = q.abs();
            let show_coeff = m.0.is_empty() || !mag.is_one();
            if show_coeff {
                write!(f, "{}", mag)?;
            }
            for (j, (t, e)) in m.0.iter().enumerate() {
                if j > 0 || show_coeff {
                    f.write_str("*")?;
                }
                if *e == 1 {
                    write!(f, "{}", t)?;
                } else {
                    write!(f, "{}^{}", t, e)?;
                }
            }
        }
        Ok(())
    }
}
