//! Serialization of exact values as strings so that nothing is rounded:
//! rationals as `"3/2"`, tagged scalars as `{"1": "3/2", "alpha": "-1/2"}`,
//! matrices as arrays of rows.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use serde::de::{self, Deserializer, MapAccess, SeqAccess, Visitor};
use serde::ser::{SerializeMap, SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use super::{parse_rational, ConstForm, Matrix, Rational, ScalarK, Subspace, Tag};

/// `#[serde(with = "serde_rat")]` for a `Rational` field.
pub mod serde_rat {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }

    /// For `Vec<Rational>` fields.
    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for q in v {
                seq.serialize_element(&q.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let raw: Vec<RationalRepr> = Vec::deserialize(d)?;
            Ok(raw.into_iter().map(|r| r.0).collect())
        }
    }

    /// For `Option<Rational>` fields.
    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(q) => s.serialize_some(&q.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            let raw: Option<RationalRepr> = Option::deserialize(d)?;
            Ok(raw.map(|r| r.0))
        }
    }
}

/// Newtype giving `Rational` a string-based serde representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalRepr(pub Rational);

impl Serialize for RationalRepr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalRepr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(RationalVisitor).map(RationalRepr)
    }
}

struct RationalVisitor;

impl<'de> Visitor<'de> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a rational number as a string (\"3/4\", \"0.25\") or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
        parse_rational(v).map_err(|_| E::custom(format!("invalid rational {v:?}")))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
        Ok(Rational::from_integer(BigInt::from(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
        Ok(Rational::from_integer(BigInt::from(v)))
    }

    /// Floats are read through their shortest decimal representation, so
    /// `0.1` becomes exactly `1/10`.
    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rational, E> {
        if !v.is_finite() {
            return Err(E::custom("non-finite number"));
        }
        let text = format!("{v}");
        parse_rational(&text).map_err(|_| E::custom(format!("invalid rational {text:?}")))
    }
}

impl Serialize for Tag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Tag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if !Tag::valid_name(&s) {
            return Err(de::Error::custom(format!("invalid tag name {s:?}")));
        }
        Ok(Tag::new(s))
    }
}

impl Serialize for ScalarK {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        for (t, q) in self.terms() {
            map.serialize_entry(t.as_str(), &q.to_string())?;
        }
        map.end()
    }
}

struct ScalarVisitor;

impl<'de> Visitor<'de> for ScalarVisitor {
    type Value = ScalarK;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a map from tags to rational strings, an expression such as \"1/2 - alpha/7\", or a number")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<ScalarK, A::Error> {
        let mut terms: BTreeMap<Tag, Rational> = BTreeMap::new();
        while let Some((t, q)) = access.next_entry::<Tag, RationalRepr>()? {
            if terms.insert(t.clone(), q.0).is_some() {
                return Err(de::Error::custom(format!("duplicate tag {t}")));
            }
        }
        Ok(ScalarK::from_terms(terms))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<ScalarK, E> {
        v.parse().map_err(|_| E::custom(format!("invalid scalar {v:?}")))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<ScalarK, E> {
        RationalVisitor.visit_i64(v).map(ScalarK::rational)
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<ScalarK, E> {
        RationalVisitor.visit_u64(v).map(ScalarK::rational)
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<ScalarK, E> {
        RationalVisitor.visit_f64(v).map(ScalarK::rational)
    }
}

impl<'de> Deserialize<'de> for ScalarK {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(ScalarVisitor)
    }
}

/// Entry types that matrices know how to (de)serialize.
pub trait EntryRepr: Sized + Clone {
    fn ser<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error>;
    fn de<'de, D: Deserializer<'de>>(d: D) -> Result<Self, D::Error>;
}

impl EntryRepr for Rational {
    fn ser<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
    fn de<'de, D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(RationalVisitor)
    }
}

impl EntryRepr for ScalarK {
    fn ser<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.serialize(s)
    }
    fn de<'de, D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        ScalarK::deserialize(d)
    }
}

impl EntryRepr for BigInt {
    fn ser<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(self) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.to_string()),
        }
    }
    fn de<'de, D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let q = d.deserialize_any(RationalVisitor)?;
        if !q.is_integer() {
            return Err(de::Error::custom(format!("expected an integer, found {q}")));
        }
        Ok(q.to_integer())
    }
}

struct Entry<'a, T>(&'a T);

impl<T: EntryRepr> Serialize for Entry<'_, T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.ser(s)
    }
}

struct OwnedEntry<T>(T);

impl<'de, T: EntryRepr> Deserialize<'de> for OwnedEntry<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        T::de(d).map(OwnedEntry)
    }
}

struct Row<'a, T>(&'a [T]);

impl<T: EntryRepr> Serialize for Row<'_, T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for x in self.0 {
            seq.serialize_element(&Entry(x))?;
        }
        seq.end()
    }
}

impl<T: EntryRepr> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.nrows()))?;
        for i in 0..self.nrows() {
            seq.serialize_element(&Row(self.row(i)))?;
        }
        seq.end()
    }
}

impl<'de, T: EntryRepr> Deserialize<'de> for Matrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V<T>(core::marker::PhantomData<T>);
        impl<'de, T: EntryRepr> Visitor<'de> for V<T> {
            type Value = Matrix<T>;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an array of equal-length rows")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Matrix<T>, A::Error> {
                let mut rows: Vec<Vec<T>> = Vec::new();
                while let Some(row) = seq.next_element::<Vec<OwnedEntry<T>>>()? {
                    rows.push(row.into_iter().map(|e| e.0).collect());
                }
                Matrix::from_rows(rows).map_err(|e| de::Error::custom(e.to_string()))
            }
        }
        d.deserialize_seq(V(core::marker::PhantomData))
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    ambient_dim: usize,
    basis: Vec<Vec<RationalRepr>>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SubspaceRepr {
            ambient_dim: self.ambient_dim(),
            basis: self.basis().iter().map(|v| v.iter().cloned().map(RationalRepr).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = SubspaceRepr::deserialize(d)?;
        let vectors = r.basis.into_iter().map(|v| v.into_iter().map(|q| q.0).collect()).collect();
        Subspace::span(r.ambient_dim, vectors).map_err(|e| de::Error::custom(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct FormTerm {
    /// 1-based indices, as in `dx^1∧dx^2`.
    indices: Vec<usize>,
    coeff: RationalRepr,
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    m: usize,
    degree: usize,
    terms: Vec<FormTerm>,
}

impl Serialize for ConstForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FormRepr {
            m: self.ambient_dim(),
            degree: self.degree(),
            terms: self
                .terms()
                .map(|(idx, c)| FormTerm { indices: idx.iter().map(|i| i + 1).collect(), coeff: RationalRepr(c.clone()) })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConstForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = FormRepr::deserialize(d)?;
        let mut out = ConstForm::zero(r.m, r.degree).map_err(|e| de::Error::custom(e.to_string()))?;
        for t in r.terms {
            if t.indices.len() != r.degree || t.indices.contains(&0) {
                return Err(de::Error::custom("form term indices must be 1-based and match the degree"));
            }
            let idx: Vec<usize> = t.indices.iter().map(|i| i - 1).collect();
            let term = ConstForm::monomial(r.m, &idx, t.coeff.0).map_err(|e| de::Error::custom(e.to_string()))?;
            out = out.add(&term).map_err(|e| de::Error::custom(e.to_string()))?;
        }
        Ok(out)
    }
}
