//! Quantum radiation from space-time dependent refractive index perturbations.
//!
//! A localized perturbation `δn(t,r)` of the refractive index of a dielectric
//! (for example one written by a strong laser pulse through the Kerr effect,
//! `n = n0 + n2·I`) converts vacuum fluctuations of the medium's ground state
//! into real photon pairs. To lowest order the pair amplitude is set by the
//! 4D Fourier transform of the perturbation,
//!
//! ```text
//! |A(k,k')|² = (ω_k ω_k' / n0⁶) · |δñ(ω_k + ω_k', k + k')|²,   ω_k = |k|/n0,
//! ```
//!
//! and every observable in this crate is an integral of that quantity over
//! the pair continuum. The crate provides:
//!
//! * [`profiles`] — the perturbation families (static anisotropic, uniformly
//!   moving, accelerated) and the Kerr intensity conversion,
//! * [`spectrum`] — closed-form and FFT-based 4D transforms `δñ(ω,k)` with
//!   Parseval/Hermitian integrity checks,
//! * [`radiation`] — pair-creation observables (total probability, photon
//!   energies, angular and pair-correlation spectra, Cherenkov-type emission
//!   rates for super-luminal pulses, a point-like-pulse energy estimate) via
//!   deterministic quadrature and a seeded Monte-Carlo oracle,
//! * [`scaling`] — parameter sweeps, log-log exponent fits and the predicted
//!   power-law exponent table for every asymptotic regime,
//! * [`analogue`] — medium Lorentz boosts, horizon finding with surface
//!   gravity and Hawking-temperature estimators, and Unruh-effect estimators
//!   for accelerated pulses.
//!
//! Natural units `ħ = c₀ = 1` are used throughout; one reference frequency
//! sets the scale and the medium light speed is `c = 1/n0`. SI conversions
//! appear only in the analogue module's Kelvin outputs.

// `!(x >= y)`-style guards are used on purpose: they reject NaN inputs
// along with out-of-range ones.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analogue;
pub mod constants;
pub mod error;
pub mod integrate;
pub mod profiles;
pub mod radiation;
pub mod scaling;
pub mod spectrum;
pub(crate) mod vec3;

pub use error::Error;
pub use profiles::{
    Envelope, MaterialParams, ProfileWarning, PulseProfile, PulseShape, Trajectory,
};
pub use spectrum::{FactorizedMovingSpectrum, GridSpec, SpectralAmplitude};
