//! Mean-field physics and quadrature-squeezing dynamics of the two-photon
//! Dicke model.
//!
//! A single cavity mode couples to N two-level systems through a two-photon
//! interaction. In the thermodynamic limit the mean-field treatment reduces
//! everything to closed-form scalar expressions; this crate evaluates them
//! and cross-checks each against an independent numerical oracle:
//!
//! - [`model`]: parameter validation, the phase diagram boundary, and the
//!   mean-field ground state (order parameter, effective coupling,
//!   Bogoliubov angle, excitation frequency, ground-state energy).
//! - [`dynamics`]: the time-dependent squeezing coefficients, the
//!   angle-resolved squeezing parameter, and its minimum over angles.
//! - [`oracle`]: formula-free verification paths — brute-force energy
//!   minimization over the order parameter, and symplectic evolution of the
//!   Gaussian covariance matrix.
//! - [`analysis`]: phase-diagram grids, sweeps over the coupling distance
//!   to the unbounded boundary and over `N epsilon`, scaling fits through
//!   the origin, and period measurement.
//!
//! Grid and sweep evaluations run data-parallel on rayon when the
//! `parallel` feature (default) is enabled and fall back to sequential
//! iteration otherwise; results are identical either way.

// Negated comparisons like `!(t >= 0.0)` are NaN guards: the suggested
// direct comparison would wave NaN inputs through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod oracle;
mod par;

pub use error::{Error, Result};

#[cfg(feature = "parallel")]
pub use par::set_thread_cap;
