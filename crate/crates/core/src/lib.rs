//! Spectral analysis and adiabatic dynamics for the interpolation
//! `H(μ) = (1−μ)·H_s − μ·|t⟩⟨t|`, where the final Hamiltonian is a
//! one-dimensional projector on the target state.
//!
//! Problems are described in the eigenbasis of `H_s` by an [`Instance`]:
//! the sorted spectrum `ξ` and the overlap magnitudes `|⟨ℓ|t⟩|`. Everything
//! else follows from those two vectors:
//!
//! * [`spectral`] solves the secular equation of the diagonal-plus-rank-one
//!   matrix exactly and carries an independent dense Jacobi oracle.
//! * [`analytic`] evaluates the two-level effective model around the
//!   crossover point: mixing angle, gap profile, minimum gap, overlaps and
//!   runtime estimates.
//! * [`dynamics`] integrates the Schrödinger equation for full, partial and
//!   locally adapted schedules.
//! * [`harness`] holds the experiment configuration, the reports behind the
//!   `projgap` CLI, and the scaling fits.

// NaN must fail range checks, so `!(x > 0.0)` is intentional throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod dynamics;
mod error;
pub mod harness;
pub mod instance;
pub mod spectral;

pub use error::{Error, Result};
pub use instance::Instance;
