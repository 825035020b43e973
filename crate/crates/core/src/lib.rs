//! Few-mode systems of identical bosons and fermions.
//!
//! States live either in the occupation-number (Fock) representation
//! ([`fock`]) or as dense (anti)symmetric tensors ([`firstq`]). Observables
//! are sums of normally ordered ladder monomials ([`algebra`]). On top of
//! these the crate provides the two-point factorization probe
//! ([`correlations`]), decision procedures for five competing notions of
//! identical-particle separability ([`classify`]), and a small scenario
//! language with a reproduction corpus ([`harness`]).

pub mod algebra;
pub mod classify;
pub mod correlations;
mod error;
pub mod firstq;
pub mod fock;
pub mod harness;
pub mod linalg;

pub use error::{Error, ParseError, Result};

pub use num_complex::Complex64;

/// Amplitudes below this magnitude are pruned from sparse containers.
pub const EPS_DROP: f64 = 1e-12;

/// Tolerance for equality, rank and commutation decisions.
pub const EPS_TOL: f64 = 1e-9;

/// Entropy threshold for the reduced single-particle density matrix.
pub const EPS_ENTROPY: f64 = 1e-7;

/// Largest supported number of modes (single-particle dimension).
pub const MAX_MODES: usize = 10;

/// Largest supported particle number.
pub const MAX_PARTICLES: usize = 6;
