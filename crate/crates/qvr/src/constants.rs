//! Physical constants used for SI conversions (CODATA 2018 / exact SI).
//!
//! The core works in natural units `ħ = c₀ = 1`; these constants appear only
//! where outputs are converted to Kelvin, and their values are echoed into
//! those outputs so every report is self-describing.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Boltzmann constant, J/K (exact in the 2019 SI).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Vacuum speed of light, m/s (exact).
pub const LIGHT_SPEED_VACUUM: f64 = 299_792_458.0;

/// Kerr coefficient of fused silica, W⁻¹·cm² (reference value used in docs
/// and tests).
pub const FUSED_SILICA_N2: f64 = 3.0e-16;
