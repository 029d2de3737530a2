//! Invariant-level bookkeeping for symplectic four-manifolds and their
//! symplectic sums along tori: Euler characteristic, signature, first
//! homology, marked tori, the cohomological image that decides whether the
//! neck hypersurface satisfies the perturbation criterion, and the
//! resulting aperiodicity verdicts.
//!
//! Manifolds are records, never triangulations. First homology is only
//! propagated through a sum when one side's neck-torus complement is
//! simply connected (van Kampen then gives `π₁(X) = π₁(X_other)/⟨⟨T_other⟩⟩`);
//! everything else is reported as unknown.

mod sum;
mod surgery;
mod types;
mod validate;

#[cfg(test)]
mod oracle_tests;

pub use sum::{aperiodicity_verdict, cut, image_p_shriek, sum_away_from_neck, symplectic_sum, torus_kernel};
pub use surgery::{
    blow_down, blow_up, blow_up_with_area, cut_obstruction_check, default_exceptional_area, product_stabilize,
    rescale, CutObstructionReport, ProductFactor,
};
pub use types::{
    AperiodicCertificate, AperiodicFlag, ExceptionalClass, H1Data, H1Map, MarkedTorus, SumResult, SumSpec, Summand,
    Verdict,
};
pub use validate::{spec_violations, violations};

use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SumError {
    #[error("summand {summand:?} has no marked torus {label:?}")]
    UnknownTorus { summand: String, label: String },
    #[error("opposite self-intersection required (got {left} and {right})")]
    SelfIntersectionMismatch { left: i64, right: i64 },
    #[error("tori must have equal area (got {left} and {right}); rescale one summand first")]
    AreaMismatch { left: String, right: String },
    #[error("summand {0:?} is not a four-manifold with known signature")]
    NotFourDimensional(String),
    #[error("neither tori homologically nontrivial on distinct summands nor case (i) attested")]
    HypothesisNotMet,
    #[error("H_1 map of torus {0:?} is unknown")]
    UnknownH1Map(String),
    #[error("result was not produced by a symplectic sum (no provenance)")]
    MissingProvenance,
    #[error("recorded provenance does not reproduce the result")]
    ProvenanceMismatch,
    #[error("rescaling factor must be positive")]
    NonPositiveScale,
    #[error("area of torus {0:?} would not be positive")]
    NonPositiveArea(String),
    #[error("no exceptional class to blow down")]
    NoExceptionalClass,
    #[error("aperiodicity certificate does not record the hypersurface as disjoint from torus {0:?}")]
    MissingDisjointness(String),
    #[error("{0}: value must be rational")]
    NotRational(String),
    #[error("not a symplectic class in this model: {0}")]
    NotSymplecticClass(String),
    #[error("invalid record: {0}")]
    Invalid(String),
    #[error(transparent)]
    Linear(#[from] crate::qlin::Error),
}

pub type Result<T, E = SumError> = core::result::Result<T, E>;
