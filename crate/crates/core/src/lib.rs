//! Statistics of single-qubit teleportation fidelity.
//!
//! A teleportation run takes a Haar-random pure input `t` on the Bloch sphere and
//! produces an output Bloch vector; the overlap `F = (1 + t·t_out)/2` is a random
//! variable. This crate computes its exact probability density for
//!
//! - measure-and-prepare (classical) protocols, whose densities are piecewise linear,
//! - standard teleportation over Bell-diagonal resources (complete elliptic integrals),
//! - standard teleportation over a Bell pair hit by local amplitude damping,
//!
//! and checks every closed form against two independent oracles: Haar Monte Carlo
//! sampling and a one-dimensional level-set integrator.
//!
//! On top of the densities sits the prior-importance certification functional
//! `γ_W = ∫ W(F) [f(F) − 2F] dF`, which reduces to the average-fidelity test for
//! `W = Beta(2, 1)` and becomes stricter as the prior leans towards `F = 1`.
//!
//! Sweeps and Monte Carlo runs are data parallel (rayon, behind the default
//! `parallel` feature) and bit-identical to the sequential path for a given seed.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certification;
pub mod distributions;
mod error;
pub mod exec;
pub mod mathkit;
pub mod protocols;
pub mod states;

pub use error::{Error, Result};
pub use mathkit::{Mat3, Vec3};
