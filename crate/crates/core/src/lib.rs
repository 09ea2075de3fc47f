//! Estimation of noisy quantum channels with finite resources.
//!
//! This crate simulates and analyses simple protocols that estimate the
//! parameters of a quantum channel from a finite number `N` of probe systems.
//! It provides:
//!
//! - qubit states as Bloch vectors and density matrices, state fidelity and
//!   deterministic quadrature over the Bloch sphere ([`qstate`]);
//! - parametrised channel families (depolarizing, phase damping, amplitude
//!   damping, Pauli, a general 12-parameter affine channel, and generalized
//!   Pauli channels on D-level systems), their action on states, and a
//!   Choi-matrix complete-positivity check ([`channels`]);
//! - the estimation protocols themselves: outcome distributions, seeded
//!   outcome sampling, and frequency-based estimators ([`protocols`]);
//! - two quality measures — the statistical error and the fidelity error —
//!   with closed-form, exact-enumeration and Monte-Carlo evaluation paths
//!   that cross-validate each other ([`analysis`]);
//! - a self-check suite wiring the identities together ([`validation`]).
//!
//! All value types are immutable after construction and safe to share across
//! threads. Every stochastic routine is reproducible from an explicit seed.

pub mod analysis;
pub mod channels;
mod error;
pub mod protocols;
pub mod qstate;
pub mod validation;

pub use error::{Error, Result};

/// Tolerance defaults used across the crate.
///
/// `state` guards physical-state invariants (norms, traces, Hermiticity);
/// `algebraic` guards exact algebraic identities evaluated in floating point.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub state: f64,
    pub algebraic: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            state: 1e-9,
            algebraic: 1e-12,
        }
    }
}
