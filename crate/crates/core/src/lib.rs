//! Casimir-like fluctuation forces induced by a quantum damped oscillator
//! and by lumped-element RLC circuits.
//!
//! Everything below the [`circuits`] layer works in reduced units with
//! ħ = k_B = 1: frequencies, damping rates and temperatures share one
//! frequency unit, and a force is an energy per unit of the sweep parameter
//! λ. λ is whatever the oscillator parameters depend on: a gap `d` gives a
//! force, an angle θ gives a torque.
//!
//! Modules:
//!
//! - [`specfun`]: complex log Γ, ψ and ψ⁽¹⁾ on the right half-plane.
//! - [`oscillator`]: parameters, λ-profiles and eigenfrequency solvers.
//! - [`forces`]: closed-form forces and free energies.
//! - [`matsubara`]: truncated Matsubara sums/products and finite
//!   differences, used as independent oracles for the closed forms.
//! - [`circuits`]: RLC mappings, capacitor geometries, reference Casimir
//!   forces and relative weights.
//! - [`validation`]: the validation batteries exposed by the CLI.

pub mod circuits;
pub mod forces;
pub mod matsubara;
pub mod oscillator;
pub mod specfun;
pub mod summation;
pub mod validation;

mod result;

pub use result::{Components, ForceResult, Provenance, Regime, Warning};

pub use oscillator::{
    DampingModel, Eigenfrequencies, Law, OscillatorParams, ParametricModel, Profile,
    ProfileModel, RootMethod, Sensitivity,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("argument outside the right half-plane: re(z) = {re}, im(z) = {im}")]
    Domain { re: f64, im: f64 },
    #[error("divergent Matsubara sum: {0}")]
    DivergentSum(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
