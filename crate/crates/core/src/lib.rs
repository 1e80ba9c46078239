//! Toric-code quantum memories on periodic lattices.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`] builds torus lattices of several families, their duals and
//!   exact degree data.
//! * [`code`] holds error chains, syndromes and homology classes.
//! * [`dynamics`] runs continuous-time thermal spin-flip dynamics and an exact
//!   master-equation integrator for tiny systems.
//! * [`decoder`] pairs defects by minimum-weight perfect matching.
//! * [`experiments`] drives threshold, lifetime and Josephson-junction scans
//!   and the closed-form laws they are compared against.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod code;
pub mod decoder;
pub mod dynamics;
pub mod lattice;
pub mod rng;

pub use error::{Error, Result};
pub use lattice::{Family, PeriodicLattice, Sector};
