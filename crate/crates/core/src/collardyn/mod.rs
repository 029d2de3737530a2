//! The perturbed collar family around a circle-bundle hypersurface: exact
//! characteristic directions, orbit classification, the Hamiltonian
//! identity, a numerical flow simulator, periodic points of affine torus
//! maps and the invariant-form Gysin model.

pub mod affine;
pub mod family;
pub mod gysin;
pub mod hamiltonian;
pub mod orbit;
pub mod sim;

pub use affine::{affine_periodic_points, is_sp_sl, mapping_torus_invariant, AffineTorusMap, PeriodicPointAnswer};
pub use family::{curvature_for, j2, standard_j, CollarFamily};
pub use gysin::{image_p_shriek_invariant, GysinDegree};
pub use hamiltonian::{hamiltonian_field, hamiltonian_residual, BumpSpec, CollarPoint};
pub use orbit::{
    aperiodic_params, aperiodic_params_on, classify_orbit, Branch, Guarantee, NonClosedWitness, OrbitVerdict,
    ParamReport, ParamSample,
};
pub use sim::{
    simulate, simulate_flow, simulate_hamiltonian, Closure, DetectionReport, NilPoint, SimOptions, SliceFlow,
    Trajectory, TrajectorySample,
};

use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CollarError {
    #[error("invalid collar data: {0}")]
    Invalid(String),
    #[error("N(u,s) is singular at u = {u}, s = {s}")]
    Singular { u: String, s: String },
    #[error("N(u,s) has irrational entries at u = {u}, s = {s}; only rational N can be inverted exactly")]
    NotExactlySolvable { u: String, s: String },
    #[error("criterion not met: {0}")]
    CriterionNotMet(String),
    #[error("point lies outside the collar (|s| must be < eps)")]
    OutsideCollar,
    #[error("step must be smaller than the horizon")]
    StepTooLarge,
    #[error("no numeric value bound for tag {0:?}")]
    UnboundTag(String),
    #[error(transparent)]
    Linear(#[from] crate::qlin::Error),
}

pub type Result<T, E = CollarError> = core::result::Result<T, E>;
