use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::collardyn::{Branch, Guarantee};
use crate::qlin::{smith_normal_form, IntMatrix, QMatrix, Rational, ScalarK, Subspace};

/// `H₁(M; Z)` as a quotient `Z^generators / (column span of relations)`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct H1Data {
    pub generators: usize,
    /// `generators × r` integer matrix; its columns are the relations.
    pub relations: IntMatrix,
}

impl H1Data {
    pub fn free(n: usize) -> Self {
        H1Data { generators: n, relations: IntMatrix::zeros(n, 0) }
    }

    pub fn trivial() -> Self {
        H1Data::free(0)
    }

    /// The first Betti number, `generators − rank(relations)`.
    pub fn b1(&self) -> usize {
        self.generators - self.relation_rank()
    }

    fn relation_rank(&self) -> usize {
        if self.relations.ncols() == 0 {
            0
        } else {
            self.relations.rank()
        }
    }

    /// Invariant factors `> 1` of the torsion subgroup.
    pub fn torsion(&self) -> Vec<BigInt> {
        if self.relations.ncols() == 0 {
            return Vec::new();
        }
        smith_normal_form(&self.relations).torsion()
    }

    pub fn is_trivial(&self) -> bool {
        self.b1() == 0 && self.torsion().is_empty()
    }

    /// Quotient by additional relations (columns of `extra`).
    pub fn quotient(&self, extra: &IntMatrix) -> H1Data {
        let relations = if self.relations.ncols() == 0 {
            extra.clone()
        } else if extra.ncols() == 0 {
            self.relations.clone()
        } else {
            self.relations.hstack(extra).expect("same number of generators")
        };
        H1Data { generators: self.generators, relations }
    }

    /// Rows cutting out the relation span in `Q^generators`; a class `v`
    /// is zero in `H₁(M; Q)` iff `A·v = 0`.
    pub(crate) fn rational_annihilator(&self) -> QMatrix {
        let n = self.generators;
        if self.relations.ncols() == 0 {
            return QMatrix::identity(n);
        }
        let rows = self.relations.to_q().left_kernel();
        QMatrix::from_rows_with_cols(rows, n).expect("annihilator rows")
    }
}

/// The map `H₁(T²) → H₁(M)` induced by the inclusion of a marked torus.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", content = "matrix", rename_all = "snake_case"))]
pub enum H1Map {
    Zero,
    /// `generators × 2` integer matrix in the ambient presentation.
    Matrix(IntMatrix),
    Unknown,
}

/// A symplectic torus in a four-manifold record.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MarkedTorus {
    pub label: String,
    pub self_int: i64,
    pub area: ScalarK,
    pub h1_map: H1Map,
    /// Symplectic tori are always homologically nontrivial; kept explicit
    /// so hand-built records can be checked.
    #[cfg_attr(feature = "serde", serde(default = "default_true"))]
    pub homologically_nontrivial: bool,
    /// `π₁(M ∖ T) = 1`.
    #[cfg_attr(feature = "serde", serde(default))]
    pub complement_simply_connected: bool,
    /// The image of `π₁(T)` normally generates `π₁(M)`.
    #[cfg_attr(feature = "serde", serde(default))]
    pub pi1_normally_generates: bool,
}

impl MarkedTorus {
    pub fn new(label: impl Into<String>, self_int: i64, area: ScalarK, h1_map: H1Map) -> Self {
        MarkedTorus {
            label: label.into(),
            self_int,
            area,
            h1_map,
            homologically_nontrivial: true,
            complement_simply_connected: false,
            pi1_normally_generates: false,
        }
    }

    pub fn with_simply_connected_complement(mut self) -> Self {
        self.complement_simply_connected = true;
        self
    }

    /// Rank of the image of `H₁(T; Q) → H₁(M; Q)`, when known.
    pub fn pi1_image_rank(&self, h1: Option<&H1Data>) -> Option<usize> {
        match (&self.h1_map, h1) {
            (H1Map::Zero, _) => Some(0),
            (H1Map::Matrix(m), Some(h)) => {
                let a = h.rational_annihilator();
                Some(a.mul(&m.to_q()).ok()?.rank())
            }
            _ => None,
        }
    }
}

/// Evidence that a record carries an aperiodic symplectic form.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AperiodicCertificate {
    pub reason: String,
    pub branch: Option<Branch>,
    pub phi: Option<Vec<ScalarK>>,
    pub guarantee: Option<Guarantee>,
    /// Labels of marked tori known to be disjoint from the hypersurface
    /// whose collar carries the aperiodic perturbation.
    #[cfg_attr(feature = "serde", serde(default))]
    pub disjoint_from: Vec<String>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub caveats: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "status", content = "certificate", rename_all = "snake_case"))]
pub enum AperiodicFlag {
    Yes(AperiodicCertificate),
    #[default]
    Unknown,
}

#[cfg(feature = "serde")]
fn default_true() -> bool {
    true
}

#[cfg(feature = "serde")]
fn default_dim() -> u32 {
    4
}

impl AperiodicFlag {
    pub fn is_yes(&self) -> bool {
        matches!(self, AperiodicFlag::Yes(_))
    }

    pub fn certificate(&self) -> Option<&AperiodicCertificate> {
        match self {
            AperiodicFlag::Yes(c) => Some(c),
            AperiodicFlag::Unknown => None,
        }
    }
}

/// An exceptional sphere created by a blow-up, kept so that the matching
/// blow-down restores the record exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExceptionalClass {
    /// Label of the marked torus the exceptional sphere meets once, if any.
    pub meets: Option<String>,
    /// Symplectic area of the sphere (subtracted from the met torus).
    pub area: ScalarK,
    /// `complement_simply_connected` of the met torus before the blow-up.
    #[cfg_attr(feature = "serde", serde(default))]
    pub previous_complement_simply_connected: Option<bool>,
    /// Aperiodicity flag before the blow-up, when the blow-up changed it.
    #[cfg_attr(feature = "serde", serde(default))]
    pub previous_flag: Option<alloc::boxed::Box<AperiodicFlag>>,
}

/// Invariant-level record of a closed symplectic manifold (a four-manifold
/// unless product-stabilized).
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Summand {
    pub name: String,
    pub euler_char: i64,
    /// `None` once signature is no longer tracked (above dimension 4).
    pub signature: Option<i64>,
    /// First homology, when determined by the rules in this crate.
    pub h1: Option<H1Data>,
    pub simply_connected: bool,
    #[cfg_attr(feature = "serde", serde(default = "default_dim"))]
    pub dim: u32,
    #[cfg_attr(feature = "serde", serde(default))]
    pub tori: Vec<MarkedTorus>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub aperiodic_flag: AperiodicFlag,
    #[cfg_attr(feature = "serde", serde(default))]
    pub exceptional: Vec<ExceptionalClass>,
    /// Unchecked remarks (e.g. minimality claims from the literature).
    #[cfg_attr(feature = "serde", serde(default))]
    pub annotations: Vec<String>,
}

impl Summand {
    /// A four-manifold with the given Euler characteristic and signature.
    pub fn four_manifold(name: impl Into<String>, euler_char: i64, signature: i64, h1: Option<H1Data>) -> Self {
        Summand {
            name: name.into(),
            euler_char,
            signature: Some(signature),
            h1,
            simply_connected: false,
            dim: 4,
            tori: Vec::new(),
            aperiodic_flag: AperiodicFlag::Unknown,
            exceptional: Vec::new(),
            annotations: Vec::new(),
        }
    }

    /// A simply connected four-manifold.
    pub fn simply_connected(name: impl Into<String>, euler_char: i64, signature: i64) -> Self {
        let mut s = Summand::four_manifold(name, euler_char, signature, Some(H1Data::trivial()));
        s.simply_connected = true;
        s
    }

    pub fn with_torus(mut self, t: MarkedTorus) -> Self {
        self.tori.push(t);
        self
    }

    pub fn torus(&self, label: &str) -> Option<&MarkedTorus> {
        self.tori.iter().find(|t| t.label == label)
    }

    pub fn torus_mut(&mut self, label: &str) -> Option<&mut MarkedTorus> {
        self.tori.iter_mut().find(|t| t.label == label)
    }

    pub fn b1(&self) -> Option<usize> {
        self.h1.as_ref().map(H1Data::b1)
    }

    /// `b⁺ = (b₂ + σ)/2` with `b₂ = e − 2 + 2b₁`, for four-manifolds with
    /// known `b₁` and signature.
    pub fn b_plus(&self) -> Option<i64> {
        let sigma = self.signature?;
        if self.dim != 4 {
            return None;
        }
        let b1 = self.b1()? as i64;
        let twice = self.euler_char - 2 + 2 * b1 + sigma;
        (twice >= 0 && twice % 2 == 0).then_some(twice / 2)
    }

    /// `c = 3σ + 2e`.
    pub fn c(&self) -> Option<i64> {
        Some(3 * self.signature? + 2 * self.euler_char)
    }

    /// `χ_h = (e + σ)/4`, as a rational (integrality is not enforced).
    pub fn chi_h(&self) -> Option<Rational> {
        Some(Rational::new(BigInt::from(self.euler_char + self.signature?), BigInt::from(4)))
    }

    /// Renames a marked torus, keeping blow-up bookkeeping consistent.
    pub fn rename_torus(&mut self, old: &str, new: &str) -> bool {
        let Some(t) = self.torus_mut(old) else { return false };
        t.label = new.to_string();
        for e in &mut self.exceptional {
            if e.meets.as_deref() == Some(old) {
                e.meets = Some(new.to_string());
            }
        }
        if let AperiodicFlag::Yes(c) = &mut self.aperiodic_flag {
            for l in &mut c.disjoint_from {
                if l == old {
                    *l = new.to_string();
                }
            }
        }
        true
    }
}

/// Data (B) of a symplectic sum: two summands, a torus in each, and the
/// isotopy class of the gluing (opaque).
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SumSpec {
    pub left: Summand,
    pub left_torus: String,
    pub right: Summand,
    pub right_torus: String,
    /// Supplied by constructors: the condition under which the lemma applies
    /// to two tori in a single manifold. Never computed.
    #[cfg_attr(feature = "serde", serde(default))]
    pub case_i_attested: bool,
    #[cfg_attr(feature = "serde", serde(default))]
    pub phi_class: String,
}

/// Outcome of the cohomological criterion for the neck hypersurface.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "verdict", rename_all = "snake_case"))]
pub enum Verdict {
    Aperiodic { branch: Branch, phi: Vec<ScalarK>, guarantee: Guarantee },
    Unknown { reason: String },
}

impl Verdict {
    pub fn is_aperiodic(&self) -> bool {
        matches!(self, Verdict::Aperiodic { .. })
    }

    pub fn branch(&self) -> Option<Branch> {
        match self {
            Verdict::Aperiodic { branch, .. } => Some(*branch),
            Verdict::Unknown { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SumResult {
    pub manifold: Summand,
    pub neck_euler_k: i64,
    pub image_subspace: Subspace,
    pub verdict: Verdict,
    /// The originating specification; `None` for hand-built results.
    pub provenance: Option<alloc::boxed::Box<SumSpec>>,
    /// Human-readable derivation steps.
    pub trace: Vec<String>,
}

/// `Some(true/false)` for rational scalars, `None` when the sign depends
/// on undetermined irrational tags.
pub(crate) fn rational_sign_positive(x: &ScalarK) -> Option<bool> {
    x.as_rational().map(|q| q.is_positive())
}
