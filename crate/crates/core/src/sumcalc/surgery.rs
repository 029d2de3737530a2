//! Operations on a single record: rescaling, blow-up/down, product
//! stabilization, and the area obstruction to cutting.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::types::{rational_sign_positive, AperiodicFlag, ExceptionalClass, Summand};
use super::{Result, SumError};
use crate::qlin::{rat, IntMatrix, Rational, ScalarK};

/// Area given to exceptional spheres when none is specified.
pub fn default_exceptional_area() -> Rational {
    rat(1, 100)
}

/// Multiplies the symplectic form by `λ > 0`; only areas change.
pub fn rescale(s: &Summand, lambda: &ScalarK) -> Result<Summand> {
    match rational_sign_positive(lambda) {
        Some(false) => return Err(SumError::NonPositiveScale),
        Some(true) => {}
        // Irrational factors are accepted: their sign is a property of the
        // chosen real value and cannot be decided from the tags.
        None if lambda.is_zero() => return Err(SumError::NonPositiveScale),
        None => {}
    }
    let mut out = s.clone();
    for t in &mut out.tori {
        t.area = t.area.try_mul(lambda)?;
    }
    for e in &mut out.exceptional {
        e.area = e.area.try_mul(lambda)?;
    }
    Ok(out)
}

/// Blow-up with the default exceptional area.
pub fn blow_up(s: &Summand, on_torus: Option<&str>) -> Result<Summand> {
    blow_up_with_area(s, on_torus, &ScalarK::rational(default_exceptional_area()))
}

/// Symplectic blow-up at a point, optionally a point of a marked torus
/// (whose proper transform then has self-intersection one lower and loses
/// the exceptional area). The ball is taken disjoint from the aperiodic
/// hypersurface when the certificate records the torus as disjoint from it
/// (or when no torus is involved); otherwise the flag becomes unknown.
pub fn blow_up_with_area(s: &Summand, on_torus: Option<&str>, area: &ScalarK) -> Result<Summand> {
    if s.dim != 4 || s.signature.is_none() {
        return Err(SumError::NotFourDimensional(s.name.clone()));
    }
    if rational_sign_positive(area) == Some(false) {
        return Err(SumError::Invalid("exceptional area must be positive".to_string()));
    }
    let mut out = s.clone();
    out.euler_char += 1;
    out.signature = s.signature.map(|x| x - 1);
    let mut class = ExceptionalClass {
        meets: on_torus.map(str::to_string),
        area: area.clone(),
        previous_complement_simply_connected: None,
        previous_flag: None,
    };
    if let Some(label) = on_torus {
        let ambient_sc = s.simply_connected;
        let t = out
            .torus_mut(label)
            .ok_or_else(|| SumError::UnknownTorus { summand: s.name.clone(), label: label.to_string() })?;
        let new_area = t.area.clone() - area.clone();
        if rational_sign_positive(&new_area) == Some(false) {
            return Err(SumError::NonPositiveArea(label.to_string()));
        }
        t.self_int -= 1;
        t.area = new_area;
        class.previous_complement_simply_connected = Some(t.complement_simply_connected);
        // The exceptional sphere meets the torus once, so a meridian bounds
        // a disk in the complement; with π₁(M) = 1 the complement becomes
        // simply connected.
        if ambient_sc {
            t.complement_simply_connected = true;
        }
        if let AperiodicFlag::Yes(c) = &s.aperiodic_flag {
            if !c.disjoint_from.iter().any(|l| l == label) {
                class.previous_flag = Some(Box::new(s.aperiodic_flag.clone()));
                out.aperiodic_flag = AperiodicFlag::Unknown;
            }
        }
    }
    out.name = format!("{}#CP2bar", s.name);
    out.exceptional.push(class);
    Ok(out)
}

/// Blows down the most recent exceptional class meeting `on_torus` (or
/// meeting no torus when `None`), restoring what the blow-up changed.
pub fn blow_down(s: &Summand, on_torus: Option<&str>) -> Result<Summand> {
    let idx = s
        .exceptional
        .iter()
        .rposition(|e| e.meets.as_deref() == on_torus)
        .ok_or(SumError::NoExceptionalClass)?;
    let mut out = s.clone();
    let class = out.exceptional.remove(idx);
    out.euler_char -= 1;
    out.signature = s.signature.map(|x| x + 1);
    if let Some(label) = on_torus {
        let t = out
            .torus_mut(label)
            .ok_or_else(|| SumError::UnknownTorus { summand: s.name.clone(), label: label.to_string() })?;
        t.self_int += 1;
        t.area = t.area.clone() + class.area.clone();
        if let Some(prev) = class.previous_complement_simply_connected {
            t.complement_simply_connected = prev;
        }
    }
    if let Some(flag) = class.previous_flag {
        out.aperiodic_flag = *flag;
    }
    out.name = match s.name.strip_suffix("#CP2bar") {
        Some(base) => base.to_string(),
        None => format!("{} (blown down)", s.name),
    };
    Ok(out)
}

/// A closed symplectic manifold `P` to take a product with.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProductFactor {
    pub name: String,
    pub euler_char: i64,
    pub dim: u32,
}

/// `X × P`: an aperiodic hypersurface `Y ⊂ X` gives `Y × P ⊂ X × P`, which
/// still violates the nearby existence property.
pub fn product_stabilize(s: &Summand, factor: &ProductFactor) -> Result<Summand> {
    if !factor.dim.is_multiple_of(2) {
        return Err(SumError::Invalid("product factor must have even dimension".to_string()));
    }
    let aperiodic_flag = match &s.aperiodic_flag {
        AperiodicFlag::Yes(c) => {
            let mut c = c.clone();
            c.caveats.push(format!("product with {}", factor.name));
            c.disjoint_from.clear();
            AperiodicFlag::Yes(c)
        }
        AperiodicFlag::Unknown => AperiodicFlag::Unknown,
    };
    let mut annotations = s.annotations.clone();
    annotations.push(format!("signature, tori and first homology not tracked after product with {}", factor.name));
    Ok(Summand {
        name: format!("{} x {}", s.name, factor.name),
        euler_char: s.euler_char * factor.euler_char,
        signature: None,
        h1: None,
        simply_connected: false,
        dim: s.dim + factor.dim,
        tori: Vec::new(),
        aperiodic_flag,
        exceptional: Vec::new(),
        annotations,
    })
}

/// Evaluation of a class `ω′ = a·e₊ + b·e₋` against the tori `T±` and the
/// class `F = [T₊] − [T₋]`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CutObstructionReport {
    pub area_plus: ScalarK,
    pub area_minus: ScalarK,
    pub omega_squared: ScalarK,
    pub omega_on_f: ScalarK,
    pub area_plus_positive: bool,
    pub area_minus_positive: bool,
    pub omega_on_f_positive: bool,
    /// The tori have different areas, so the pair cannot be the two sides
    /// of a symplectic cut.
    pub cut_impossible: bool,
}

fn positive(x: &ScalarK, what: &str) -> Result<bool> {
    rational_sign_positive(x).ok_or_else(|| SumError::NotRational(what.to_string()))
}

/// With `Q` the intersection matrix of `([T₊], [T₋])` and `ω′` represented
/// by `x = (a, b)`, the areas are `Q x`, `ω′² = xᵀ Q x`, and
/// `ω′(F) = area(T₊) − area(T₋)`.
pub fn cut_obstruction_check(q: &IntMatrix, omega: (&ScalarK, &ScalarK)) -> Result<CutObstructionReport> {
    if q.nrows() != 2 || q.ncols() != 2 {
        return Err(SumError::Invalid("intersection matrix must be 2x2".to_string()));
    }
    if q.get(0, 1) != q.get(1, 0) {
        return Err(SumError::Invalid("intersection matrix must be symmetric".to_string()));
    }
    let x = [omega.0.clone(), omega.1.clone()];
    let qi = |i: usize, j: usize| Rational::from_integer(q.get(i, j).clone());
    let area = |i: usize| x[0].scale(&qi(i, 0)) + x[1].scale(&qi(i, 1));
    let area_plus = area(0);
    let area_minus = area(1);
    let omega_squared = x[0].try_mul(&area_plus)? + x[1].try_mul(&area_minus)?;
    if !positive(&omega_squared, "omega'^2")? {
        return Err(SumError::NotSymplecticClass(format!("omega'^2 = {omega_squared} is not positive")));
    }
    let omega_on_f = area_plus.clone() - area_minus.clone();
    let area_plus_positive = positive(&area_plus, "area(T+)")?;
    let area_minus_positive = positive(&area_minus, "area(T-)")?;
    let omega_on_f_positive = positive(&omega_on_f, "omega'(F)")?;
    Ok(CutObstructionReport {
        cut_impossible: area_plus != area_minus,
        area_plus,
        area_minus,
        omega_squared,
        omega_on_f,
        area_plus_positive,
        area_minus_positive,
        omega_on_f_positive,
    })
}
