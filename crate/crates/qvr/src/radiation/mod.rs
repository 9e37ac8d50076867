//! Photon-pair observables of a perturbation spectrum.
//!
//! The pair amplitude is
//!
//! ```text
//! |A(k,k')|² = (ω_k ω_k' / n0⁶) |δñ(ω_k + ω_k', k + k')|²,   ω = |k|/n0,
//! ```
//!
//! and observables integrate it over the pair continuum with the measure
//! `d³k d³k'/(2π)⁶` (one `(2π)⁻³` per photon). Two independent routes exist
//! for every scalar observable:
//!
//! * a deterministic tensor quadrature in reduced variables — the spectrum
//!   only sees `σ = |k| + |k'|` and `K = k + k'`, so the relative-momentum
//!   angle and the `|k| − |k'|` split integrate out in closed form
//!   ([`reduced`]);
//! * an importance-sampled Monte-Carlo estimator with counter-based seeding
//!   ([`mc`]), which doubles as the oracle for the quadrature and supplies
//!   the angular histograms (directions are integrated out of the reduced
//!   scheme, so single-photon angle distributions are sampled).
//!
//! Uniformly moving pulses carry the exact constraint `ω = v·k`; the rate
//! integrals resolve the constraint analytically and are identically zero
//! below the medium light speed.

pub mod mc;
pub mod reduced;

use serde::{Deserialize, Serialize};

use crate::error::IntegrationError;
use crate::integrate::{Estimate, IntegratorMeta, IntegratorSpec, MonteCarloSpec, QuadratureSpec};
use crate::profiles::{Envelope, PulseProfile, PulseShape};
use crate::spectrum::{FactorizedMovingSpectrum, SpectralAmplitude};
use crate::vec3;

/// Total pair probability above which first-order perturbation theory is no
/// longer trustworthy (reports carry a warning flag).
pub const PROBABILITY_WARN: f64 = 0.1;

/// `∫ (d⁴/dx⁴ e^{-x²})² dx = 105 √(π/2)`.
const GAUSSIAN_FOURTH_DERIV_L2: f64 = 131.597_984_418_127_5;

/// A photon-pair momentum point with medium dispersion `ω = |k|/n0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairMode {
    pub k: [f64; 3],
    pub k_prime: [f64; 3],
    pub n0: f64,
}

impl PairMode {
    pub fn new(k: [f64; 3], k_prime: [f64; 3], n0: f64) -> Result<Self, IntegrationError> {
        if vec3::norm(k) <= 0.0 || vec3::norm(k_prime) <= 0.0 {
            return Err(IntegrationError::InvalidSpec(
                "pair mode wavenumbers must be non-zero".into(),
            ));
        }
        if !(n0 >= 1.0) {
            return Err(IntegrationError::InvalidSpec(format!(
                "n0 must be >= 1, got {n0}"
            )));
        }
        Ok(Self { k, k_prime, n0 })
    }

    pub fn omega(&self) -> f64 {
        vec3::norm(self.k) / self.n0
    }

    pub fn omega_prime(&self) -> f64 {
        vec3::norm(self.k_prime) / self.n0
    }
}

/// Squared two-photon amplitude at one pair mode.
///
/// Grid spectra are evaluated by multilinear interpolation and points beyond
/// the stored extent are a hard error, never an extrapolation.
pub fn pair_amplitude_sq(
    s: &SpectralAmplitude,
    mode: &PairMode,
    n0: f64,
) -> Result<f64, IntegrationError> {
    let omega = mode.omega();
    let omega_prime = mode.omega_prime();
    let ksum = vec3::add(mode.k, mode.k_prime);
    let spectral = s.eval_abs_sq(omega + omega_prime, ksum)?;
    Ok(omega * omega_prime / n0.powi(6) * spectral)
}

/// A scalar observable with an attached error bar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueWithError {
    pub value: f64,
    pub error: f64,
}

/// Binned distribution. CSV columns: `bin_low, bin_high, weight, weight_error`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` ascending edges.
    pub edges: Vec<f64>,
    pub weights: Vec<f64>,
    pub errors: Vec<f64>,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Self {
        let edges = (0..=bins)
            .map(|i| lo + (hi - lo) * i as f64 / bins as f64)
            .collect();
        Self {
            edges,
            weights: vec![0.0; bins],
            errors: vec![0.0; bins],
        }
    }

    pub fn bins(&self) -> usize {
        self.weights.len()
    }

    pub fn bin_index(&self, x: f64) -> Option<usize> {
        let lo = self.edges[0];
        let hi = *self.edges.last().unwrap();
        if !(x >= lo) || !(x <= hi) {
            return None;
        }
        let bins = self.bins();
        let idx = ((x - lo) / (hi - lo) * bins as f64) as usize;
        Some(idx.min(bins - 1))
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Rescale weights (and errors) by a constant.
    pub fn scaled(mut self, factor: f64) -> Self {
        for w in &mut self.weights {
            *w *= factor;
        }
        for e in &mut self.errors {
            *e *= factor;
        }
        self
    }

    /// Interpolated weighted quantile of the binned distribution.
    pub fn quantile(&self, q: f64) -> f64 {
        let total = self.total();
        if total <= 0.0 {
            return f64::NAN;
        }
        let target = q * total;
        let mut acc = 0.0;
        for (i, &w) in self.weights.iter().enumerate() {
            if acc + w >= target {
                let frac = if w > 0.0 { (target - acc) / w } else { 0.0 };
                return self.edges[i] + frac * (self.edges[i + 1] - self.edges[i]);
            }
            acc += w;
        }
        *self.edges.last().unwrap()
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }
}

/// Integrated pair-creation observables of a static perturbation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmissionReport {
    /// Total pair probability `P = ∫ |A|² d³k d³k'/(2π)⁶`.
    pub total_probability: ValueWithError,
    /// Single-photon mean energy `P⁻¹ ∫ |A|² ω_k` (identical under ω_k').
    pub mean_photon_energy: ValueWithError,
    /// Radiated energy `∫ (ω_k + ω_k') |A|²` over the pair measure.
    pub total_energy: ValueWithError,
    /// True when `P > 0.1` and the first-order result should not be trusted.
    pub perturbative_warning: bool,
    /// Single-photon polar-cosine distribution about the reference axis,
    /// normalized to P. Monte Carlo only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angular_cos_theta: Option<Histogram>,
    /// Single-photon azimuth distribution about the reference axis,
    /// normalized to P. Monte Carlo only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angular_phi: Option<Histogram>,
    /// Distribution of `χ = |k+k'|/(|k|+|k'|)`, normalized to 1.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair_correlation: Option<Histogram>,
    pub integrator: IntegratorMeta,
}

/// Emission rate of a traveling perturbation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    /// Pair probability per unit time. Identically zero below the medium
    /// light speed.
    pub rate: ValueWithError,
    pub regime: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// 90th-percentile single-photon polar angle (super-luminal only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_max: Option<f64>,
    /// Rate-weighted polar-angle spectrum.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angle_spectrum: Option<Histogram>,
    pub integrator: IntegratorMeta,
}

/// Scalar observables the Monte-Carlo oracle can target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleTarget {
    TotalProbability,
    MeanPhotonEnergy,
    TotalEnergy,
}

/// Histogram bin counts used when assembling an [`EmissionReport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBins {
    pub angular: usize,
    pub correlation: usize,
}

impl Default for HistogramBins {
    fn default() -> Self {
        Self {
            angular: 16,
            correlation: 50,
        }
    }
}

/// Total pair-creation probability with an error estimate.
pub fn total_probability(
    s: &SpectralAmplitude,
    n0: f64,
    spec: &IntegratorSpec,
) -> Result<Estimate, IntegrationError> {
    match spec {
        IntegratorSpec::Quadrature(q) => {
            let out = reduced::static_pair_quadrature(s, n0, q, None)?;
            Ok(out.total_probability)
        }
        IntegratorSpec::MonteCarlo(m) => {
            let out = mc::static_pair_mc(s, n0, m, None, None)?;
            Ok(out.total_probability)
        }
    }
}

/// Mean single-photon energy `E = P⁻¹ ∫ |A|² ω_k`.
pub fn mean_photon_energy(
    s: &SpectralAmplitude,
    n0: f64,
    spec: &IntegratorSpec,
) -> Result<Estimate, IntegrationError> {
    match spec {
        IntegratorSpec::Quadrature(q) => {
            let out = reduced::static_pair_quadrature(s, n0, q, None)?;
            out.mean_photon_energy
                .ok_or(IntegrationError::UndefinedMean)
        }
        IntegratorSpec::MonteCarlo(m) => {
            let out = mc::static_pair_mc(s, n0, m, None, None)?;
            out.mean_photon_energy
                .ok_or(IntegrationError::UndefinedMean)
        }
    }
}

/// Total radiated energy `∫ (ω_k + ω_k') |A|²` over the pair measure.
pub fn total_energy(
    s: &SpectralAmplitude,
    n0: f64,
    spec: &IntegratorSpec,
) -> Result<Estimate, IntegrationError> {
    match spec {
        IntegratorSpec::Quadrature(q) => {
            let out = reduced::static_pair_quadrature(s, n0, q, None)?;
            Ok(out.total_energy)
        }
        IntegratorSpec::MonteCarlo(m) => {
            let out = mc::static_pair_mc(s, n0, m, None, None)?;
            Ok(out.total_energy)
        }
    }
}

/// Single-photon direction distribution about `axis` (defaults to x), as
/// (cos θ, φ) marginal histograms normalized to P.
///
/// The reduced quadrature integrates lab orientations out, so this
/// observable requires the Monte-Carlo integrator.
pub fn angular_spectrum(
    s: &SpectralAmplitude,
    n0: f64,
    spec: &IntegratorSpec,
    bins: usize,
    axis: Option<[f64; 3]>,
) -> Result<(Histogram, Histogram), IntegrationError> {
    match spec {
        IntegratorSpec::Quadrature(_) => Err(IntegrationError::HistogramNeedsMonteCarlo),
        IntegratorSpec::MonteCarlo(m) => {
            let out = mc::static_pair_mc(
                s,
                n0,
                m,
                Some(mc::AngularRequest {
                    bins,
                    axis: axis.unwrap_or([1.0, 0.0, 0.0]),
                }),
                None,
            )?;
            Ok((out.angular_cos_theta.unwrap(), out.angular_phi.unwrap()))
        }
    }
}

/// Distribution of the pair-collinearity variable `χ = |k+k'|/(|k|+|k'|)`,
/// normalized to 1. χ → 0 means back-to-back photon momenta.
pub fn pair_correlation(
    s: &SpectralAmplitude,
    n0: f64,
    spec: &IntegratorSpec,
    bins: usize,
) -> Result<Histogram, IntegrationError> {
    match spec {
        IntegratorSpec::Quadrature(q) => {
            let out = reduced::static_pair_quadrature(s, n0, q, Some(bins))?;
            Ok(out.pair_correlation.unwrap())
        }
        IntegratorSpec::MonteCarlo(m) => {
            let out = mc::static_pair_mc(s, n0, m, None, Some(bins))?;
            Ok(out.pair_correlation.unwrap())
        }
    }
}

/// Full emission report: scalars plus requested histograms in one pass.
pub fn emission_report(
    s: &SpectralAmplitude,
    n0: f64,
    spec: &IntegratorSpec,
    bins: HistogramBins,
) -> Result<EmissionReport, IntegrationError> {
    let result = match spec {
        IntegratorSpec::Quadrature(q) => {
            reduced::static_pair_quadrature(s, n0, q, Some(bins.correlation))?
        }
        IntegratorSpec::MonteCarlo(m) => mc::static_pair_mc(
            s,
            n0,
            m,
            Some(mc::AngularRequest {
                bins: bins.angular,
                axis: [1.0, 0.0, 0.0],
            }),
            Some(bins.correlation),
        )?,
    };
    let p = result.total_probability.clone();
    let e = result
        .mean_photon_energy
        .clone()
        .ok_or(IntegrationError::UndefinedMean)?;
    let etot = result.total_energy.clone();
    Ok(EmissionReport {
        total_probability: ValueWithError {
            value: p.value,
            error: p.error,
        },
        mean_photon_energy: ValueWithError {
            value: e.value,
            error: e.error,
        },
        total_energy: ValueWithError {
            value: etot.value,
            error: etot.error,
        },
        perturbative_warning: p.value > PROBABILITY_WARN,
        angular_cos_theta: result.angular_cos_theta,
        angular_phi: result.angular_phi,
        pair_correlation: result.pair_correlation,
        integrator: p.meta,
    })
}

/// Radiated-energy estimate of a point-like pulse from the fourth time
/// derivative of the spatially integrated perturbation,
/// `∫ dt [d⁴/dt⁴ ∫ d³r δn(t,r)]²`, proportionality constant 1.
///
/// For the Gaussian family the integral is closed form,
/// `M₀² Ω₁⁷ · 105√(π/2)` with `M₀ = δn̄ (√π c)³/(Ω₂ Ω₃²)`. A uniformly
/// moving pulse at rest is time-independent and yields exactly zero.
pub fn monopole_energy_estimate(p: &PulseProfile) -> Result<f64, IntegrationError> {
    match (&p.shape, p.envelope) {
        (
            PulseShape::StaticAnisotropic {
                temporal_rate,
                axial_rate,
                transverse_rate,
            },
            Envelope::Gaussian,
        ) => {
            if temporal_rate / axial_rate > 0.2 {
                log::warn!(
                    "monopole estimate outside the point-like regime: temporal/axial rate ratio = {:.3}",
                    temporal_rate / axial_rate
                );
            }
            let c = p.medium_light_speed();
            let m0 = p.amplitude * (core::f64::consts::PI.sqrt() * c).powi(3)
                / (axial_rate * transverse_rate.powi(2));
            Ok(m0 * m0 * temporal_rate.powi(7) * GAUSSIAN_FOURTH_DERIV_L2)
        }
        (PulseShape::StaticAnisotropic { .. }, _) => Err(IntegrationError::UnsupportedEnvelope(
            "monopole estimate has a closed form for the Gaussian envelope only",
        )),
        (PulseShape::UniformlyMoving { velocity, .. }, _) if vec3::norm(*velocity) == 0.0 => {
            // time-independent perturbation: fourth derivative vanishes
            Ok(0.0)
        }
        _ => Err(IntegrationError::WrongVariant("static_anisotropic")),
    }
}

/// Emission rate of a uniformly moving pulse.
///
/// The constraint `ω_k + ω_k' = v·(k+k')` is resolved analytically: the
/// partner magnitude `|k'| = [v·k − |k|c] / [c − v·k̂']` (with its Jacobian)
/// consumes the temporal delta. For `v <= c` the constraint is
/// unsatisfiable — `|k|c + |k'|c = v·(k+k') <= v(|k|+|k'|) < c(|k|+|k'|)` —
/// so the rate is exactly zero, not merely small.
pub fn emission_rate(
    fs: &FactorizedMovingSpectrum,
    n0: f64,
    spec: &IntegratorSpec,
) -> Result<RateReport, IntegrationError> {
    let c = 1.0 / n0;
    let v = fs.speed();
    if v <= c {
        let meta = IntegratorMeta {
            method: "kinematic".into(),
            evaluations: 0,
            error_estimate: 0.0,
            seed: None,
        };
        return Ok(RateReport {
            rate: ValueWithError {
                value: 0.0,
                error: 0.0,
            },
            regime: "sub_luminal".into(),
            reason: Some("kinematically forbidden".into()),
            theta_max: None,
            angle_spectrum: None,
            integrator: meta,
        });
    }
    match spec {
        IntegratorSpec::Quadrature(q) => reduced::rate_quadrature(fs, n0, q),
        IntegratorSpec::MonteCarlo(m) => mc::rate_mc(fs, n0, m),
    }
}

/// Independent Monte-Carlo estimate of a scalar observable, importance
/// sampled with the spectrum's Gaussian widths as proposal and a
/// counter-based stream keyed by `(seed, sample index)`: the same seed gives
/// a bit-identical estimate at any worker count.
pub fn mc_oracle(
    s: &SpectralAmplitude,
    n0: f64,
    seed: u64,
    n_samples: u64,
    target: OracleTarget,
) -> Result<Estimate, IntegrationError> {
    let spec = MonteCarloSpec::new(n_samples, seed);
    let out = mc::static_pair_mc(s, n0, &spec, None, None)?;
    match target {
        OracleTarget::TotalProbability => Ok(out.total_probability),
        OracleTarget::MeanPhotonEnergy => out
            .mean_photon_energy
            .ok_or(IntegrationError::ZeroEffectiveSampleSize),
        OracleTarget::TotalEnergy => Ok(out.total_energy),
    }
}

/// Monte-Carlo oracle for the emission rate of a moving pulse.
pub fn mc_oracle_rate(
    fs: &FactorizedMovingSpectrum,
    n0: f64,
    seed: u64,
    n_samples: u64,
) -> Result<RateReport, IntegrationError> {
    emission_rate(
        fs,
        n0,
        &IntegratorSpec::MonteCarlo(MonteCarloSpec::new(n_samples, seed)),
    )
}

/// Default quadrature spec helper used across tests and the CLI.
pub fn default_quadrature() -> QuadratureSpec {
    QuadratureSpec::default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::PulseProfile;
    use crate::spectrum::analytic_spectrum;
    use approx::assert_relative_eq;

    #[test]
    fn pair_amplitude_matches_closed_form_oracle() {
        // isotropic Gaussian, Omega = 1, n0 = 1: the transform oracle gives
        // |A|² = amplitude² (π² e^{-(ω+ω')²/4})² ω ω' at K = 0
        let p = PulseProfile::one_parameter(1.0, 0.1, 1.0).unwrap();
        let s = analytic_spectrum(&p).unwrap();
        let mode = PairMode::new([0.0, 0.0, 1.0], [0.0, 0.0, -1.0], 1.0).unwrap();
        let got = pair_amplitude_sq(&s, &mode, 1.0).unwrap() / 0.1f64.powi(2);
        let expected = core::f64::consts::PI.powi(4) * (-2.0f64).exp();
        assert_relative_eq!(got, expected, max_relative = 1e-12);
        assert_relative_eq!(expected, 13.182_886_924_9, max_relative = 1e-10);
    }

    #[test]
    fn pair_amplitude_symmetric_and_quadratic() {
        let p = PulseProfile::one_parameter(1.2, 0.05, 1.3).unwrap();
        let s = analytic_spectrum(&p).unwrap();
        let k = [0.4, -0.2, 0.9];
        let kp = [-0.1, 0.8, -0.5];
        let a = pair_amplitude_sq(&s, &PairMode::new(k, kp, 1.2).unwrap(), 1.2).unwrap();
        let b = pair_amplitude_sq(&s, &PairMode::new(kp, k, 1.2).unwrap(), 1.2).unwrap();
        assert_eq!(a, b);

        let p2 = PulseProfile::one_parameter(1.2, 0.1, 1.3).unwrap();
        let s2 = analytic_spectrum(&p2).unwrap();
        let a2 = pair_amplitude_sq(&s2, &PairMode::new(k, kp, 1.2).unwrap(), 1.2).unwrap();
        assert_relative_eq!(a2 / a, 4.0, max_relative = 1e-12);
    }

    #[test]
    fn pair_mode_rejects_null_wavenumbers() {
        assert!(PairMode::new([0.0; 3], [1.0, 0.0, 0.0], 1.0).is_err());
    }

    #[test]
    fn monopole_estimate_scalings() {
        let profile = |o1: f64, o2: f64| {
            PulseProfile::new(
                1.0,
                0.01,
                Envelope::Gaussian,
                PulseShape::StaticAnisotropic {
                    temporal_rate: o1,
                    axial_rate: o2,
                    transverse_rate: o2,
                },
            )
            .unwrap()
        };
        let base = monopole_energy_estimate(&profile(0.02, 1.0)).unwrap();
        // exponent 7 in the temporal rate: doubling gives exactly 2^7
        let doubled = monopole_energy_estimate(&profile(0.04, 1.0)).unwrap();
        assert_relative_eq!(doubled / base, 128.0, max_relative = 1e-12);
        // exponent -6 in the spatial rate
        let spatial = monopole_energy_estimate(&profile(0.02, 2.0)).unwrap();
        assert_relative_eq!(spatial / base, 2.0f64.powi(-6), max_relative = 1e-12);
    }

    #[test]
    fn monopole_time_independent_is_zero() {
        let resting = PulseProfile::new(
            1.0,
            0.01,
            Envelope::Gaussian,
            PulseShape::UniformlyMoving {
                rate: 1.0,
                velocity: [0.0; 3],
            },
        )
        .unwrap();
        assert_eq!(monopole_energy_estimate(&resting).unwrap(), 0.0);
    }

    #[test]
    fn monopole_rejects_unsupported() {
        let sg = PulseProfile::new(
            1.0,
            0.01,
            Envelope::SuperGaussian,
            PulseShape::StaticAnisotropic {
                temporal_rate: 0.05,
                axial_rate: 1.0,
                transverse_rate: 1.0,
            },
        )
        .unwrap();
        assert!(matches!(
            monopole_energy_estimate(&sg),
            Err(IntegrationError::UnsupportedEnvelope(_))
        ));
    }

    #[test]
    fn histogram_quantiles() {
        let mut h = Histogram::new(0.0, 1.0, 10);
        h.weights = vec![0.0, 0.0, 5.0, 5.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        assert_relative_eq!(h.median(), 0.3, max_relative = 1e-12);
        assert_relative_eq!(h.quantile(0.25), 0.25, max_relative = 1e-12);
    }
}
