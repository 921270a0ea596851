//! Purification of small qubit registers by repeated projective measurement.
//!
//! One factor of a register evolving under a Hamiltonian `H` is measured
//! every interval `τ`, and only the runs in which every outcome lands in the
//! same single-qubit state `|φ⟩` are kept. The surviving subsystem is then
//! driven by the projected evolution operator
//!
//! ```text
//! V_φ(τ) = ⟨φ| e^{-iHτ} |φ⟩
//! ```
//!
//! which is a non-normal contraction, not a unitary. Everything in this
//! crate follows from the biorthogonal spectrum of `V`: the conditioned
//! state converges to the leading right eigenvector `|u₀)`, the success
//! probability of keeping a run decays like `|λ₀|^{2N}`, and the approach is
//! geometric in the gap ratio `|λ₁/λ₀|`. Purification is free of the usual
//! rate-vs-quality trade-off exactly when parameters put `|λ₀|` on the unit
//! circle while every subleading magnitude stays strictly inside.
//!
//! Module map:
//! - [`linalg`]: dense complex matrices, Hermitian eigensolver and matrix
//!   exponential, biorthogonal eigendecomposition of non-normal operators
//!   (dims ≤ 8).
//! - [`quantum`]: register layouts, Pauli placement, projection onto the
//!   measured factor, density matrices, fidelity and concurrence.
//! - [`models`]: the three concrete protocols (direct two-qubit exchange,
//!   mediated Bell-pair pumping, successive interaction with a shuttled
//!   probe) with their closed-form coefficients.
//! - [`engine`]: the measurement-conditioned iteration, spectral
//!   asymptotics, and the numeric-vs-spectral crosscheck.
//! - [`optimizer`]: grid sweeps over model parameters, local refinement,
//!   and root finding on the optimal-operation condition.
//!
//! The crate is `no_std`-compatible (requires `alloc`); disable the default
//! `std` feature for embedded targets. All numeric thresholds are collected
//! in [`tolerances::Tolerances`].

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod engine;
pub mod error;
pub mod linalg;
pub mod models;
pub mod optimizer;
pub mod quantum;
pub mod tolerances;

pub use error::Error;
pub use tolerances::Tolerances;
