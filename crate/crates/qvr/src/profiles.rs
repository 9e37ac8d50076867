//! Refractive-index perturbation families and the Kerr intensity conversion.
//!
//! All profiles describe a dimensionless perturbation `δn(t, r)` of a
//! background index `n0`, written as an amplitude `δn̄` times a normalized
//! envelope (`max |f| = 1`):
//!
//! * static anisotropic: `δn̄ · f(Ω₁ t, Ω₂ x/c, Ω₃ y/c, Ω₃ z/c)` — one
//!   temporal rate, one rate along the x axis, one transverse rate;
//! * uniformly moving: `δn̄ · f(Ω [r − v t]/c)` — a rigid shape traveling at
//!   constant velocity, with no switch-on or switch-off;
//! * accelerated: `δn̄ · f(Ω [r − r_P(t)]/c)` — a rigid shape following a
//!   trajectory `r_P(t)`.
//!
//! Natural units `ħ = c₀ = 1`; `c = 1/n0` is the medium light speed, so the
//! spatial scale of a pulse with rate `Ω` is `c/Ω`. Velocities are in units
//! of the vacuum light speed.

use crate::error::ProfileError;
use crate::vec3;
use serde::{Deserialize, Serialize};

/// Amplitude above which perturbation theory is considered shaky (warning).
pub const AMPLITUDE_WARN: f64 = 0.1;
/// Amplitude at or above which profiles are rejected outright.
pub const AMPLITUDE_REJECT: f64 = 0.5;
/// Rate ratios between `comparable` and `separated` draw a warning: the
/// profile sits between asymptotic regimes and no scaling law applies cleanly.
pub const RATIO_COMPARABLE: f64 = 1.5;
pub const RATIO_SEPARATED: f64 = 30.0;
/// Margin demanded of the Unruh picture: `Ω >= UNRUH_VALIDITY_MARGIN · |r̈_P|`.
pub const UNRUH_VALIDITY_MARGIN: f64 = 10.0;

/// Background medium parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    /// Background refractive index, `n0 >= 1`.
    pub n0: f64,
    /// Kerr coefficient in W⁻¹·cm², if known (fused silica: 3e-16).
    pub kerr_n2: Option<f64>,
}

impl MaterialParams {
    pub fn new(n0: f64, kerr_n2: Option<f64>) -> Result<Self, ProfileError> {
        if !(n0 >= 1.0) {
            return Err(ProfileError::BackgroundIndex(n0));
        }
        if let Some(n2) = kerr_n2 {
            if !(n2 >= 0.0) {
                return Err(ProfileError::NegativeInput {
                    what: "kerr_n2",
                    value: n2,
                });
            }
        }
        Ok(Self { n0, kerr_n2 })
    }

    /// Medium light speed `c = 1/n0` in units of the vacuum speed.
    pub fn medium_light_speed(&self) -> f64 {
        1.0 / self.n0
    }
}

/// Kerr conversion `δn = n2 · I` (index change due to radiation of
/// intensity `I`). Inputs in W⁻¹·cm² and W·cm⁻²; both must be nonnegative.
/// Emits a `log` warning when the result reaches the perturbative limit.
pub fn kerr_delta_n(n2: f64, intensity: f64) -> Result<f64, ProfileError> {
    if !(n2 >= 0.0) {
        return Err(ProfileError::NegativeInput {
            what: "n2",
            value: n2,
        });
    }
    if !(intensity >= 0.0) {
        return Err(ProfileError::NegativeInput {
            what: "intensity",
            value: intensity,
        });
    }
    let dn = n2 * intensity;
    if dn >= AMPLITUDE_WARN {
        log::warn!("Kerr conversion gives delta_n = {dn:.3e} >= {AMPLITUDE_WARN}; perturbation theory is unreliable");
    }
    Ok(dn)
}

/// Named envelope function, applied per scaled axis and multiplied together.
/// Every envelope is smooth, bounded by 1 with `max |g| = 1` at the origin,
/// and absolutely integrable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Envelope {
    /// `g(u) = exp(-u²)`. Mandatory; the only envelope with closed-form
    /// transforms, so every numeric path can be checked against it.
    Gaussian,
    /// `g(u) = exp(-u⁴)`. Optional extension; transforms are numeric only.
    SuperGaussian,
}

impl Envelope {
    /// Per-axis envelope value.
    pub fn value_1d(&self, u: f64) -> f64 {
        match self {
            Envelope::Gaussian => (-u * u).exp(),
            Envelope::SuperGaussian => (-u.powi(4)).exp(),
        }
    }

    /// Product envelope over scaled coordinates.
    pub fn value(&self, u: &[f64]) -> f64 {
        u.iter().map(|&ui| self.value_1d(ui)).product()
    }

    /// `∫ g(u) du` over the real line.
    pub fn integral_1d(&self) -> f64 {
        match self {
            Envelope::Gaussian => core::f64::consts::PI.sqrt(),
            Envelope::SuperGaussian => 1.812_804_954_110_954, // 2 Γ(5/4)
        }
    }

    /// `∫ g(u)² du` over the real line.
    pub fn l2_1d(&self) -> f64 {
        match self {
            Envelope::Gaussian => (core::f64::consts::PI / 2.0).sqrt(),
            Envelope::SuperGaussian => 1.524_381_187_466_076, // 2 Γ(5/4) / 2^(1/4)
        }
    }

    /// Scaled frequency beyond which `|g̃(w)|` falls below 1e-7 of its peak
    /// (so the squared spectrum is below ~1e-14). Used for integration
    /// cutoffs.
    pub fn spectral_cut(&self) -> f64 {
        match self {
            Envelope::Gaussian => 8.1,
            Envelope::SuperGaussian => 23.0,
        }
    }

    /// Scaled frequency beyond which `|g̃(w)|` falls below 1e-12 of its
    /// peak: the coverage a stored spectral grid must reach.
    pub fn spectral_cut_deep(&self) -> f64 {
        match self {
            Envelope::Gaussian => 10.6,
            Envelope::SuperGaussian => 34.5,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Envelope::Gaussian => "gaussian",
            Envelope::SuperGaussian => "super_gaussian",
        }
    }
}

/// Pulse-center trajectory for accelerated profiles, natural units (`c₀ = 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trajectory {
    UniformVelocity {
        velocity: [f64; 3],
    },
    UniformAcceleration {
        acceleration: [f64; 3],
        initial_velocity: [f64; 3],
        initial_position: [f64; 3],
    },
    /// Sampled trajectory `(t, r)`, strictly increasing in `t`; positions are
    /// linearly interpolated and clamped outside the sampled range.
    Tabulated {
        samples: Vec<(f64, [f64; 3])>,
    },
}

impl Trajectory {
    pub fn validate(&self) -> Result<(), ProfileError> {
        match self {
            Trajectory::UniformVelocity { velocity } => {
                if !vec3::norm(*velocity).is_finite() {
                    return Err(ProfileError::NonFiniteVelocity(vec3::norm(*velocity)));
                }
            }
            Trajectory::UniformAcceleration {
                acceleration,
                initial_velocity,
                ..
            } => {
                if !vec3::norm(*acceleration).is_finite()
                    || !vec3::norm(*initial_velocity).is_finite()
                {
                    return Err(ProfileError::NonFiniteVelocity(f64::NAN));
                }
            }
            Trajectory::Tabulated { samples } => {
                if samples.len() < 2 {
                    return Err(ProfileError::BadTrajectorySamples);
                }
                for w in samples.windows(2) {
                    if !(w[1].0 > w[0].0) {
                        return Err(ProfileError::BadTrajectorySamples);
                    }
                }
                if samples
                    .iter()
                    .any(|(t, r)| !t.is_finite() || !vec3::norm(*r).is_finite())
                {
                    return Err(ProfileError::BadTrajectorySamples);
                }
            }
        }
        Ok(())
    }

    /// Pulse center at time `t`.
    pub fn position(&self, t: f64) -> [f64; 3] {
        match self {
            Trajectory::UniformVelocity { velocity } => vec3::scale(*velocity, t),
            Trajectory::UniformAcceleration {
                acceleration,
                initial_velocity,
                initial_position,
            } => {
                let mut r = *initial_position;
                r = vec3::add(r, vec3::scale(*initial_velocity, t));
                vec3::add(r, vec3::scale(*acceleration, 0.5 * t * t))
            }
            Trajectory::Tabulated { samples } => {
                let first = &samples[0];
                let last = &samples[samples.len() - 1];
                if t <= first.0 {
                    return first.1;
                }
                if t >= last.0 {
                    return last.1;
                }
                let idx = samples.partition_point(|(ts, _)| *ts <= t);
                let (t0, r0) = samples[idx - 1];
                let (t1, r1) = samples[idx];
                let s = (t - t0) / (t1 - t0);
                vec3::add(vec3::scale(r0, 1.0 - s), vec3::scale(r1, s))
            }
        }
    }

    /// Magnitude of the (approximately constant) acceleration, if defined.
    /// For tabulated trajectories this is a central-difference estimate at
    /// the midpoint sample, flagged approximate by the caller.
    pub fn acceleration_magnitude(&self) -> Option<f64> {
        match self {
            Trajectory::UniformVelocity { .. } => Some(0.0),
            Trajectory::UniformAcceleration { acceleration, .. } => Some(vec3::norm(*acceleration)),
            Trajectory::Tabulated { samples } => {
                if samples.len() < 3 {
                    return None;
                }
                let m = samples.len() / 2;
                let (t0, r0) = samples[m - 1];
                let (t1, r1) = samples[m];
                let (t2, r2) = samples[m + 1];
                let h1 = t1 - t0;
                let h2 = t2 - t1;
                // nonuniform central second difference
                let acc: Vec<f64> = (0..3)
                    .map(|i| {
                        2.0 * (h1 * r2[i] - (h1 + h2) * r1[i] + h2 * r0[i]) / (h1 * h2 * (h1 + h2))
                    })
                    .collect();
                Some(vec3::norm([acc[0], acc[1], acc[2]]))
            }
        }
    }
}

/// Variant-specific scales of a pulse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseShape {
    /// Localized flash: appears, evolves, disappears. Rates in units of the
    /// reference frequency; `axial_rate` acts along x, `transverse_rate`
    /// along y and z.
    StaticAnisotropic {
        temporal_rate: f64,
        axial_rate: f64,
        transverse_rate: f64,
    },
    /// Rigid shape moving at constant velocity (units of the vacuum light
    /// speed); isotropic comoving extent `c/rate`.
    UniformlyMoving { rate: f64, velocity: [f64; 3] },
    /// Rigid shape following `trajectory`.
    Accelerated { rate: f64, trajectory: Trajectory },
}

/// A validated refractive-index perturbation.
///
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseProfile {
    /// Background index (sets the medium light speed `c = 1/n0`).
    pub n0: f64,
    /// Perturbation amplitude `δn̄`, `0 < δn̄ < 0.5`.
    pub amplitude: f64,
    pub envelope: Envelope,
    pub shape: PulseShape,
}

/// Non-fatal advisory produced by [`PulseProfile::validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ProfileWarning {
    /// `δn̄ > 0.1`: first-order perturbation theory is marginal.
    Perturbativity { amplitude: f64 },
    /// Rate ratios fall between the comparable and separated regimes, so no
    /// asymptotic scaling law applies.
    NoAsymptoticRegime { ratio: f64 },
    /// Accelerated pulse with `Ω` not large against `|r̈_P|`: the pulse width
    /// smears the trajectory and the Unruh picture degrades.
    UnruhValidity { rate: f64, acceleration: f64 },
}

impl PulseProfile {
    pub fn new(
        n0: f64,
        amplitude: f64,
        envelope: Envelope,
        shape: PulseShape,
    ) -> Result<Self, ProfileError> {
        if !(n0 >= 1.0) {
            return Err(ProfileError::BackgroundIndex(n0));
        }
        if !(amplitude > 0.0 && amplitude < AMPLITUDE_REJECT) {
            return Err(ProfileError::Amplitude(amplitude));
        }
        match &shape {
            PulseShape::StaticAnisotropic {
                temporal_rate,
                axial_rate,
                transverse_rate,
            } => {
                for (what, v) in [
                    ("temporal_rate", *temporal_rate),
                    ("axial_rate", *axial_rate),
                    ("transverse_rate", *transverse_rate),
                ] {
                    if !(v > 0.0 && v.is_finite()) {
                        return Err(ProfileError::NonPositiveRate { what, value: v });
                    }
                }
            }
            PulseShape::UniformlyMoving { rate, velocity } => {
                if !(*rate > 0.0 && rate.is_finite()) {
                    return Err(ProfileError::NonPositiveRate {
                        what: "rate",
                        value: *rate,
                    });
                }
                if !vec3::norm(*velocity).is_finite() {
                    return Err(ProfileError::NonFiniteVelocity(vec3::norm(*velocity)));
                }
            }
            PulseShape::Accelerated { rate, trajectory } => {
                if !(*rate > 0.0 && rate.is_finite()) {
                    return Err(ProfileError::NonPositiveRate {
                        what: "rate",
                        value: *rate,
                    });
                }
                trajectory.validate()?;
            }
        }
        Ok(Self {
            n0,
            amplitude,
            envelope,
            shape,
        })
    }

    /// One-parameter pulse: equal temporal and spatial rates.
    pub fn one_parameter(n0: f64, amplitude: f64, rate: f64) -> Result<Self, ProfileError> {
        Self::new(
            n0,
            amplitude,
            Envelope::Gaussian,
            PulseShape::StaticAnisotropic {
                temporal_rate: rate,
                axial_rate: rate,
                transverse_rate: rate,
            },
        )
    }

    /// Medium light speed `c = 1/n0`.
    pub fn medium_light_speed(&self) -> f64 {
        1.0 / self.n0
    }

    /// Evaluate `δn(t, r)`.
    pub fn evaluate(&self, t: f64, r: [f64; 3]) -> f64 {
        let c = self.medium_light_speed();
        let f = match &self.shape {
            PulseShape::StaticAnisotropic {
                temporal_rate,
                axial_rate,
                transverse_rate,
            } => self.envelope.value(&[
                temporal_rate * t,
                axial_rate * r[0] / c,
                transverse_rate * r[1] / c,
                transverse_rate * r[2] / c,
            ]),
            PulseShape::UniformlyMoving { rate, velocity } => {
                let u = vec3::scale(vec3::sub(r, vec3::scale(*velocity, t)), rate / c);
                self.envelope.value(&u)
            }
            PulseShape::Accelerated { rate, trajectory } => {
                let u = vec3::scale(vec3::sub(r, trajectory.position(t)), rate / c);
                self.envelope.value(&u)
            }
        };
        self.amplitude * f
    }

    /// Check the profile against the perturbative and regime guidance and
    /// return the list of advisories (empty for a fully compliant profile).
    pub fn validate(&self) -> Vec<ProfileWarning> {
        let mut warnings = Vec::new();
        if self.amplitude > AMPLITUDE_WARN {
            warnings.push(ProfileWarning::Perturbativity {
                amplitude: self.amplitude,
            });
        }
        if let PulseShape::StaticAnisotropic {
            temporal_rate,
            axial_rate,
            transverse_rate,
        } = &self.shape
        {
            let rates = [*temporal_rate, *axial_rate, *transverse_rate];
            for i in 0..3 {
                for j in (i + 1)..3 {
                    let ratio = (rates[i] / rates[j]).max(rates[j] / rates[i]);
                    if ratio > RATIO_COMPARABLE && ratio < RATIO_SEPARATED {
                        warnings.push(ProfileWarning::NoAsymptoticRegime { ratio });
                    }
                }
            }
        }
        if let PulseShape::Accelerated { rate, trajectory } = &self.shape {
            if let Some(a) = trajectory.acceleration_magnitude() {
                if a > 0.0 && *rate <= UNRUH_VALIDITY_MARGIN * a {
                    warnings.push(ProfileWarning::UnruhValidity {
                        rate: *rate,
                        acceleration: a,
                    });
                }
            }
        }
        warnings
    }
}
