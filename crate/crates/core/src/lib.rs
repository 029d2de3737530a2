//! Exact algebra and dynamics for aperiodic symplectic forms obtained from
//! symplectic sums along tori.
//!
//! The crate is `no_std` (it needs `alloc`). Module map:
//!
//! - [`qlin`]: rationals, tagged irrational scalars, exact matrices,
//!   subspaces, Smith normal form and constant-coefficient forms.
//! - [`collardyn`]: the perturbed collar family around a circle-bundle
//!   hypersurface, its characteristic direction, orbit classification,
//!   a flow simulator and periodic points of affine torus maps.
//! - [`sumcalc`]: invariant-level four-manifolds with marked tori, the
//!   symplectic sum and cut, and the cohomological aperiodicity verdict.
//! - [`catalog`]: the example families and the geography predicate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod catalog;
pub mod collardyn;
pub mod qlin;
pub mod sumcalc;

pub use qlin::{Rational, ScalarK, Tag};
