//! Coverage of the geography plane `(χ, c)`, `c = 3σ + 2e`,
//! `χ = (e + σ)/4`, by manifolds admitting aperiodic symplectic forms.
//!
//! The ranges come from sums whose neck satisfies the criterion:
//!
//! * A, B, C — `M₁ ⊞ M₂` with `M₁` simply connected and `π₁(T₂) → π₁(M₂)`
//!   of rank at most one;
//! * D, E — `S ⊞ Z₁` with `χ(S) = 45`, `c(S) = 364`;
//! * F — `S ⊞ P_{1+2k,4+2k}`;
//! * G — `(B ⊞ S) ⊞ P_{1+2k,4+2k}`.
//!
//! The building blocks are records carrying only the invariants and torus
//! data the constructions need.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{CatalogError, Result};
use crate::qlin::{IntMatrix, ScalarK};
use crate::sumcalc::{symplectic_sum, H1Data, H1Map, MarkedTorus, SumResult, SumSpec, Summand, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeographyPoint {
    pub chi: i64,
    pub c: i64,
}

impl GeographyPoint {
    pub fn new(chi: i64, c: i64) -> Self {
        GeographyPoint { chi, c }
    }

    /// Euler characteristic `e = 12χ − c`.
    pub fn euler_char(&self) -> i64 {
        12 * self.chi - self.c
    }

    /// Signature `σ = c − 8χ`.
    pub fn signature(&self) -> i64 {
        self.c - 8 * self.chi
    }

    /// The point with the given Euler characteristic and signature, if
    /// `e + σ` is divisible by 4.
    pub fn from_invariants(e: i64, sigma: i64) -> Option<Self> {
        ((e + sigma) % 4 == 0).then(|| GeographyPoint { chi: (e + sigma) / 4, c: 3 * sigma + 2 * e })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum RangeLabel {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl RangeLabel {
    pub const ALL: [RangeLabel; 7] =
        [RangeLabel::A, RangeLabel::B, RangeLabel::C, RangeLabel::D, RangeLabel::E, RangeLabel::F, RangeLabel::G];

    pub fn description(&self) -> &'static str {
        match self {
            RangeLabel::A => "c is even and 0 ≤ c ≤ 8χ−10",
            RangeLabel::B => "c is odd and 1 ≤ c ≤ 8χ−17",
            RangeLabel::C => "c is odd and 7 ≤ c ≤ 8χ−11",
            RangeLabel::D => "c even and 364 ≤ c ≤ 8χ+2",
            RangeLabel::E => "c odd and 383 ≤ c ≤ 8χ−3",
            RangeLabel::F => "385 ≤ c = 8χ+1",
            RangeLabel::G => "c odd and 391 ≤ c = 8χ−1",
        }
    }

    pub fn contains(&self, p: GeographyPoint) -> bool {
        let (chi, c) = (p.chi, p.c);
        let even = c.rem_euclid(2) == 0;
        match self {
            RangeLabel::A => even && 0 <= c && c <= 8 * chi - 10,
            RangeLabel::B => !even && 1 <= c && c <= 8 * chi - 17,
            RangeLabel::C => !even && 7 <= c && c <= 8 * chi - 11,
            RangeLabel::D => even && 364 <= c && c <= 8 * chi + 2,
            RangeLabel::E => !even && 383 <= c && c <= 8 * chi - 3,
            RangeLabel::F => 385 <= c && c == 8 * chi + 1,
            RangeLabel::G => !even && 391 <= c && c == 8 * chi - 1,
        }
    }
}

impl core::fmt::Display for RangeLabel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "status", content = "range"))]
pub enum GeographyStatus {
    Covered(RangeLabel),
    NotCovered,
    OutOfRegion,
}

impl core::fmt::Display for GeographyStatus {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GeographyStatus::Covered(l) => write!(f, "Covered({l})"),
            GeographyStatus::NotCovered => f.write_str("NotCovered"),
            GeographyStatus::OutOfRegion => f.write_str("OutOfRegion"),
        }
    }
}

/// Region `0 ≤ c ≤ 8χ + 2`; inside it, the first range containing the
/// point, else `NotCovered`.
pub fn geography_covered(p: GeographyPoint) -> GeographyStatus {
    if p.c < 0 || p.c > 8 * p.chi + 2 {
        return GeographyStatus::OutOfRegion;
    }
    RangeLabel::ALL
        .iter()
        .find(|l| l.contains(p))
        .map_or(GeographyStatus::NotCovered, |l| GeographyStatus::Covered(*l))
}

/// Every point of the strip `0 ≤ c ≤ 8χ + 2` for `χ_min ≤ χ ≤ χ_max`.
pub fn geography_enumerate(chi_min: i64, chi_max: i64) -> Result<Vec<(GeographyPoint, GeographyStatus)>> {
    if chi_max < chi_min {
        return Err(CatalogError::Invalid(format!("empty range: chi_max {chi_max} < chi_min {chi_min}")));
    }
    let mut out = Vec::new();
    for chi in chi_min..=chi_max {
        for c in 0..=(8 * chi + 2) {
            let p = GeographyPoint::new(chi, c);
            out.push((p, geography_covered(p)));
        }
    }
    Ok(out)
}

/// A sum chain realizing a covered point.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeographyWitness {
    pub point: GeographyPoint,
    pub label: RangeLabel,
    pub range: String,
    pub sums: Vec<SumResult>,
    pub manifold: Summand,
    pub verdict: Verdict,
}

fn unit_torus(label: &str, map: H1Map) -> MarkedTorus {
    MarkedTorus::new(label, 0, ScalarK::one(), map)
}

fn sc_block(name: String, p: GeographyPoint, tori: &[&str]) -> Summand {
    let mut s = Summand::simply_connected(name, p.euler_char(), p.signature());
    for t in tori {
        s.tori.push(unit_torus(t, H1Map::Zero).with_simply_connected_complement());
    }
    s
}

/// `π₁ = Z` block with a torus whose `π₁`-image is the generator and
/// normally generates.
fn z_block(name: String, p: GeographyPoint, torus: &str) -> Summand {
    let mut t = unit_torus(torus, H1Map::Matrix(IntMatrix::from_i64(&[&[1, 0]])));
    t.pi1_normally_generates = true;
    Summand::four_manifold(name, p.euler_char(), p.signature(), Some(H1Data::free(1))).with_torus(t)
}

fn sum(l: Summand, lt: &str, r: Summand, rt: &str) -> Result<SumResult> {
    Ok(symplectic_sum(&SumSpec {
        left: l,
        left_torus: lt.to_string(),
        right: r,
        right_torus: rt.to_string(),
        case_i_attested: false,
        phi_class: String::new(),
    })?)
}

/// `S`: `χ = 45`, `c = 364`, torus `T` with simply connected complement.
fn block_s() -> Summand {
    sc_block("S".to_string(), GeographyPoint::new(45, 364), &["T"])
}

/// `P_{1+2k,4+2k}`: `χ = 3 + k`, `c = 21 + 8k`, `π₁ = Z`.
fn block_p(k: i64) -> Summand {
    z_block(format!("P_{{{},{}}}", 1 + 2 * k, 4 + 2 * k), GeographyPoint::new(3 + k, 21 + 8 * k), "T_P")
}

/// Builds the sum chain of the range containing `p` and checks that it
/// lands on `p` with an aperiodic verdict and a simply connected result.
pub fn geography_witness(p: GeographyPoint) -> Result<GeographyWitness> {
    let label = match geography_covered(p) {
        GeographyStatus::Covered(l) => l,
        s => return Err(CatalogError::Invalid(format!("({}, {}) is {s}", p.chi, p.c))),
    };
    let sums = match label {
        RangeLabel::A | RangeLabel::B | RangeLabel::C => {
            // M₂: χ = 1, c = 0, π₁ = Z carried by T₂ (rank one).
            let m2 = z_block("M2".to_string(), GeographyPoint::new(1, 0), "T2");
            let m1 = sc_block("M1".to_string(), GeographyPoint::new(p.chi - 1, p.c), &["T1"]);
            vec![sum(m1, "T1", m2, "T2")?]
        }
        RangeLabel::D | RangeLabel::E => {
            let z1 = sc_block("Z1".to_string(), GeographyPoint::new(p.chi - 45, p.c - 364), &["T2"]);
            vec![sum(block_s(), "T", z1, "T2")?]
        }
        RangeLabel::F => vec![sum(block_s(), "T", block_p(p.chi - 48), "T_P")?],
        RangeLabel::G => {
            let b = sc_block("B".to_string(), GeographyPoint::new(1, 6), &["T1", "T2"]);
            let u = sum(b, "T2", block_s(), "T")?;
            let mut um = u.manifold.clone();
            um.name = "U".to_string();
            let last = sum(um, "T1", block_p(p.chi - 49), "T_P")?;
            vec![u, last]
        }
    };
    let last = sums.last().expect("nonempty chain");
    let manifold = last.manifold.clone();
    let verdict = last.verdict.clone();
    let reached = manifold.signature.and_then(|s| GeographyPoint::from_invariants(manifold.euler_char, s));
    if reached != Some(p) || !verdict.is_aperiodic() || !manifold.simply_connected {
        return Err(CatalogError::Invalid(format!("witness chain for ({}, {}) failed its checks", p.chi, p.c)));
    }
    Ok(GeographyWitness { point: p, label, range: label.description().to_string(), sums, manifold, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_points() {
        assert_eq!(geography_covered(GeographyPoint::new(5, 30)), GeographyStatus::Covered(RangeLabel::A));
        assert_eq!(geography_covered(GeographyPoint::new(46, 364)), GeographyStatus::Covered(RangeLabel::D));
        assert_eq!(geography_covered(GeographyPoint::new(1, 20)), GeographyStatus::OutOfRegion);
        assert_eq!(geography_covered(GeographyPoint::new(1, -1)), GeographyStatus::OutOfRegion);
        assert_eq!(geography_covered(GeographyPoint::new(48, 385)), GeographyStatus::Covered(RangeLabel::F));
        assert_eq!(geography_covered(GeographyPoint::new(49, 391)), GeographyStatus::Covered(RangeLabel::G));
        assert_eq!(geography_covered(GeographyPoint::new(2, 3)), GeographyStatus::NotCovered);
        assert_eq!(GeographyStatus::Covered(RangeLabel::A).to_string(), "Covered(A)");
    }

    #[test]
    fn witnesses_reach_their_points() {
        for (chi, c) in [(5, 30), (2, 0), (3, 7), (3, 1), (46, 364), (50, 383), (48, 385), (49, 391), (60, 479)] {
            let p = GeographyPoint::new(chi, c);
            let w = geography_witness(p).unwrap_or_else(|e| panic!("({chi}, {c}): {e}"));
            assert_eq!(w.point, p);
        }
        assert!(geography_witness(GeographyPoint::new(1, 20)).is_err());
    }

    #[test]
    fn enumeration() {
        assert!(geography_enumerate(3, 2).is_err());
        let pts = geography_enumerate(1, 60).unwrap();
        let missing = |chi: i64| {
            pts.iter()
                .filter(|(p, s)| p.chi == chi && *s == GeographyStatus::NotCovered)
                .map(|(p, _)| p.c)
                .collect::<Vec<_>>()
        };
        assert_eq!(missing(1), (0..=10).collect::<Vec<_>>());
        for chi in 50..=60 {
            assert!(missing(chi).iter().all(|c| c % 2 != 0 && *c >= 8 * chi - 16));
        }
        // Even c ≤ 390 at χ = 50 is always covered.
        assert!(missing(50).iter().all(|c| c % 2 != 0));
    }
}
