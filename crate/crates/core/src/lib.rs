//! Holomorphic invariants of model domains with deleted sets.
//!
//! The crate computes Carathéodory pseudodistances on the unit ball and the
//! unit polydisk of `C^n`, the set functional
//! `d(z) = min_{w in S} tanh c(z, w)` that expresses (generalized) squeezing
//! functions and Fridman invariants of `Omega \ S`, a catalog of the domains
//! whose invariants are known in closed form or up to two-sided bounds, a
//! sub-mean-value tester for plurisubharmonicity, and generators/verifiers
//! for configurations whose squeezing function is not plurisubharmonic.
//!
//! Everything here is `no_std` + `alloc` and deterministic for a given seed.

#![no_std]
// `!(x > 0.0)` rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod caratheodory;
pub mod catalog;
pub mod constructions;
pub mod cvector;
mod error;
pub mod psh;
pub mod sampling;
pub mod set_distance;

pub use caratheodory::{tanh_c, tanh_c_ball, tanh_c_polydisk, DistanceValue};
pub use catalog::{DomainSpec, Interval, Invariant, SpecKind};
pub use constructions::{Config, ConfigKind, VerificationReport};
pub use cvector::{contains, hermitian_inner, minkowski, CVector, ModelDomain, ModelKind};
pub use error::{Error, Result};
pub use psh::{Field, PshReport, Violation};
pub use set_distance::{BoundarySet, Hyperplane, Method, MinimizerResult, SetKind};

pub use num_complex::Complex64;
