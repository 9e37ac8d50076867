//! Parameter sweeps and power-law exponent verification.
//!
//! Each asymptotic regime of the pulse predicts pure power laws for the
//! observables; [`expected_exponent`] is the single authoritative encoding
//! of those predictions. [`run_sweep`] evaluates an observable over a
//! geometric parameter grid with the radiation module and [`fit_exponent`]
//! performs ordinary least squares on the log-log table.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analogue;
use crate::error::ScalingError;
use crate::integrate::IntegratorSpec;
use crate::profiles::{PulseProfile, PulseShape, Trajectory, RATIO_SEPARATED};
use crate::radiation;
use crate::spectrum::{analytic_spectrum, moving_spectrum};
use crate::vec3;

/// Asymptotic regimes with predicted scaling laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Equal temporal and spatial rates.
    OneParameter,
    /// Temporal rate far below the (isotropic) spatial rate.
    PointLike,
    /// Temporal rate far above the (isotropic) spatial rate.
    Cosmological,
    /// Long thin pulse: axial << temporal << transverse rate.
    Needle,
    /// Uniformly moving pulse above the medium light speed.
    MovingSuperLuminal,
    /// Trans-luminal pulse with horizons (closed-form estimator).
    Horizon,
    /// Accelerated pulse (closed-form estimator).
    Unruh,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::OneParameter => "one_parameter",
            Regime::PointLike => "point_like",
            Regime::Cosmological => "cosmological",
            Regime::Needle => "needle",
            Regime::MovingSuperLuminal => "moving_super_luminal",
            Regime::Horizon => "horizon",
            Regime::Unruh => "unruh",
        }
    }
}

/// Sweepable parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// Temporal rate Ω₁.
    Omega1,
    /// Axial spatial rate Ω₂ (moves the transverse rate with it in the
    /// spatially isotropic regimes).
    Omega2,
    /// Transverse spatial rate Ω₃.
    Omega3,
    /// Single rate Ω of moving/accelerated pulses.
    Omega,
    /// Velocity excess v − c of a moving pulse.
    VMinusC,
    /// Perturbation amplitude δn̄.
    DeltaNBar,
    /// Acceleration magnitude of an accelerated pulse.
    Acceleration,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::Omega1 => "omega1",
            SweepParameter::Omega2 => "omega2",
            SweepParameter::Omega3 => "omega3",
            SweepParameter::Omega => "omega",
            SweepParameter::VMinusC => "v_minus_c",
            SweepParameter::DeltaNBar => "delta_n_bar",
            SweepParameter::Acceleration => "acceleration",
        }
    }
}

/// Observables a sweep can target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepObservable {
    TotalProbability,
    MeanPhotonEnergy,
    TotalEnergy,
    /// Emission rate P/T (moving pulses) or the closed-form estimators
    /// (horizon and Unruh regimes).
    Rate,
    MonopoleEnergy,
    /// 90th-percentile emission angle of a super-luminal pulse.
    ThetaMax,
}

impl SweepObservable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepObservable::TotalProbability => "total_probability",
            SweepObservable::MeanPhotonEnergy => "mean_photon_energy",
            SweepObservable::TotalEnergy => "total_energy",
            SweepObservable::Rate => "rate",
            SweepObservable::MonopoleEnergy => "monopole_energy",
            SweepObservable::ThetaMax => "theta_max",
        }
    }
}

/// A validated sweep request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub template: PulseProfile,
    pub regime: Regime,
    pub parameter: SweepParameter,
    /// Strictly increasing positive values; at least 4 points spanning at
    /// least a decade (the velocity excess may span less).
    pub values: Vec<f64>,
}

impl SweepSpec {
    pub fn new(
        template: PulseProfile,
        regime: Regime,
        parameter: SweepParameter,
        values: Vec<f64>,
    ) -> Result<Self, ScalingError> {
        if values.is_empty() {
            return Err(ScalingError::InvalidGrid("empty value grid".into()));
        }
        if values.len() < 4 {
            return Err(ScalingError::InvalidGrid(format!(
                "need >= 4 sweep points, got {}",
                values.len()
            )));
        }
        for w in values.windows(2) {
            if !(w[1] > w[0]) {
                return Err(ScalingError::InvalidGrid(
                    "values must be strictly increasing".into(),
                ));
            }
        }
        if !(values[0] > 0.0) {
            return Err(ScalingError::InvalidGrid(
                "values must be strictly positive".into(),
            ));
        }
        if parameter != SweepParameter::VMinusC {
            let span = values[values.len() - 1] / values[0];
            if span < 10.0 {
                return Err(ScalingError::InvalidGrid(format!(
                    "sweep must span at least a decade, got ratio {span:.3}"
                )));
            }
        }
        let spec = Self {
            template,
            regime,
            parameter,
            values,
        };
        for &v in &spec.values {
            let profile = spec.profile_at(v)?;
            spec.check_regime(&profile, v)?;
        }
        Ok(spec)
    }

    /// Instantiate the template at a swept value.
    pub fn profile_at(&self, value: f64) -> Result<PulseProfile, ScalingError> {
        let mut p = self.template.clone();
        let bad = |msg: &str| ScalingError::RegimeConstraint(msg.to_string());
        match (self.parameter, &mut p.shape) {
            (SweepParameter::Omega1, PulseShape::StaticAnisotropic { temporal_rate, .. }) => {
                *temporal_rate = value;
            }
            (
                SweepParameter::Omega2,
                PulseShape::StaticAnisotropic {
                    axial_rate,
                    transverse_rate,
                    ..
                },
            ) => {
                *axial_rate = value;
                // the point-like and cosmological regimes are spatially
                // isotropic two-parameter pulses
                if matches!(self.regime, Regime::PointLike | Regime::Cosmological) {
                    *transverse_rate = value;
                }
            }
            (
                SweepParameter::Omega3,
                PulseShape::StaticAnisotropic {
                    transverse_rate, ..
                },
            ) => {
                *transverse_rate = value;
            }
            (
                SweepParameter::Omega,
                PulseShape::StaticAnisotropic {
                    temporal_rate,
                    axial_rate,
                    transverse_rate,
                },
            ) => {
                *temporal_rate = value;
                *axial_rate = value;
                *transverse_rate = value;
            }
            (SweepParameter::Omega, PulseShape::UniformlyMoving { rate, .. }) => {
                *rate = value;
            }
            (SweepParameter::Omega, PulseShape::Accelerated { rate, .. }) => {
                *rate = value;
            }
            (SweepParameter::VMinusC, PulseShape::UniformlyMoving { velocity, .. }) => {
                let c = 1.0 / p.n0;
                let dir = if vec3::norm(*velocity) > 0.0 {
                    vec3::scale(*velocity, 1.0 / vec3::norm(*velocity))
                } else {
                    [1.0, 0.0, 0.0]
                };
                *velocity = vec3::scale(dir, c + value);
            }
            (SweepParameter::DeltaNBar, _) => {
                p.amplitude = value;
            }
            (SweepParameter::Acceleration, PulseShape::Accelerated { trajectory, .. }) => {
                match trajectory {
                    Trajectory::UniformAcceleration { acceleration, .. } => {
                        let norm = vec3::norm(*acceleration);
                        let dir = if norm > 0.0 {
                            vec3::scale(*acceleration, 1.0 / norm)
                        } else {
                            [1.0, 0.0, 0.0]
                        };
                        *acceleration = vec3::scale(dir, value);
                    }
                    _ => {
                        return Err(bad(
                            "acceleration sweeps need a uniform-acceleration trajectory",
                        ))
                    }
                }
            }
            _ => {
                return Err(bad(&format!(
                    "parameter {} does not apply to this profile variant",
                    self.parameter.name()
                )))
            }
        }
        PulseProfile::new(p.n0, p.amplitude, p.envelope, p.shape)
            .map_err(|e| ScalingError::InvalidGrid(e.to_string()))
    }

    /// Enforce the asymptotic-regime separation at one sweep point.
    fn check_regime(&self, p: &PulseProfile, value: f64) -> Result<(), ScalingError> {
        let sep = RATIO_SEPARATED;
        let bad = |msg: String| Err(ScalingError::RegimeConstraint(msg));
        match (self.regime, &p.shape) {
            (
                Regime::OneParameter,
                PulseShape::StaticAnisotropic {
                    temporal_rate,
                    axial_rate,
                    transverse_rate,
                },
            ) => {
                if axial_rate != temporal_rate || transverse_rate != temporal_rate {
                    return bad("one-parameter regime needs equal rates".into());
                }
            }
            (
                Regime::PointLike,
                PulseShape::StaticAnisotropic {
                    temporal_rate,
                    axial_rate,
                    transverse_rate,
                },
            ) => {
                if axial_rate != transverse_rate {
                    return bad("point-like regime is spatially isotropic".into());
                }
                if axial_rate / temporal_rate < sep {
                    return bad(format!(
                        "point-like regime needs axial/temporal >= {sep}, got {} at value {value}",
                        axial_rate / temporal_rate
                    ));
                }
            }
            (
                Regime::Cosmological,
                PulseShape::StaticAnisotropic {
                    temporal_rate,
                    axial_rate,
                    transverse_rate,
                },
            ) => {
                if axial_rate != transverse_rate {
                    return bad("cosmological regime is spatially isotropic".into());
                }
                if temporal_rate / axial_rate < sep {
                    return bad(format!(
                        "cosmological regime needs temporal/axial >= {sep}, got {} at value {value}",
                        temporal_rate / axial_rate
                    ));
                }
            }
            (
                Regime::Needle,
                PulseShape::StaticAnisotropic {
                    temporal_rate,
                    axial_rate,
                    transverse_rate,
                },
            ) => {
                if temporal_rate / axial_rate < sep || transverse_rate / temporal_rate < sep {
                    return bad(format!(
                        "needle regime needs axial << temporal << transverse (ratios >= {sep}) at value {value}"
                    ));
                }
            }
            (Regime::MovingSuperLuminal, PulseShape::UniformlyMoving { velocity, .. }) => {
                let c = 1.0 / p.n0;
                if vec3::norm(*velocity) <= c {
                    return bad(format!(
                        "super-luminal regime needs |v| > c = {c}, got {} at value {value}",
                        vec3::norm(*velocity)
                    ));
                }
            }
            (Regime::Horizon, PulseShape::UniformlyMoving { velocity, .. }) => {
                let c_out = 1.0 / p.n0;
                let c_in = 1.0 / (p.n0 + p.amplitude);
                let v = vec3::norm(*velocity);
                if !(v > c_in && v < c_out) {
                    return bad("horizon regime needs c_inside < v < c_outside".into());
                }
            }
            (Regime::Unruh, PulseShape::Accelerated { .. }) => {}
            _ => {
                return bad(format!(
                    "regime {} does not match the template variant",
                    self.regime.name()
                ))
            }
        }
        Ok(())
    }
}

/// One evaluated sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub parameter: f64,
    pub value: f64,
    pub error: f64,
}

/// Evaluated sweep with per-point integrator errors, ordered by parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub regime: Regime,
    pub parameter: SweepParameter,
    pub observable: SweepObservable,
    pub points: Vec<SweepPoint>,
}

/// Evaluate `observable` at every grid point of the sweep. Points are
/// independent and evaluated concurrently; the table is ordered by parameter
/// value regardless of scheduling.
pub fn run_sweep(
    spec: &SweepSpec,
    observable: SweepObservable,
    integrator: &IntegratorSpec,
) -> Result<SweepTable, ScalingError> {
    let points: Result<Vec<SweepPoint>, ScalingError> = spec
        .values
        .par_iter()
        .map(|&value| evaluate_point(spec, observable, integrator, value))
        .collect();
    Ok(SweepTable {
        regime: spec.regime,
        parameter: spec.parameter,
        observable,
        points: points?,
    })
}

fn evaluate_point(
    spec: &SweepSpec,
    observable: SweepObservable,
    integrator: &IntegratorSpec,
    value: f64,
) -> Result<SweepPoint, ScalingError> {
    let profile = spec.profile_at(value)?;
    let fail = |source| ScalingError::PointFailed {
        parameter: value,
        source,
    };
    let (v, e) = match (observable, &profile.shape) {
        (SweepObservable::MonopoleEnergy, _) => (
            radiation::monopole_energy_estimate(&profile).map_err(fail)?,
            0.0,
        ),
        (SweepObservable::Rate, PulseShape::UniformlyMoving { .. }) => {
            let fs = moving_spectrum(&profile)
                .map_err(|e| fail(crate::error::IntegrationError::Spectrum(e)))?;
            let report = radiation::emission_rate(&fs, profile.n0, integrator).map_err(fail)?;
            (report.rate.value, report.rate.error)
        }
        (SweepObservable::ThetaMax, PulseShape::UniformlyMoving { .. }) => {
            let fs = moving_spectrum(&profile)
                .map_err(|e| fail(crate::error::IntegrationError::Spectrum(e)))?;
            let report = radiation::emission_rate(&fs, profile.n0, integrator).map_err(fail)?;
            (
                report.theta_max.ok_or_else(|| {
                    fail(crate::error::IntegrationError::InvalidSpec(
                        "theta_max undefined in the sub-luminal regime".into(),
                    ))
                })?,
                0.0,
            )
        }
        (SweepObservable::Rate, PulseShape::Accelerated { .. }) => {
            let report = analogue::unruh_rate_estimate(&profile)
                .map_err(|e| ScalingError::RegimeConstraint(e.to_string()))?;
            (report.rate_estimate, 0.0)
        }
        (obs, PulseShape::StaticAnisotropic { .. }) => {
            let s = analytic_spectrum(&profile)
                .map_err(|e| fail(crate::error::IntegrationError::Spectrum(e)))?;
            let est = match obs {
                SweepObservable::TotalProbability => {
                    radiation::total_probability(&s, profile.n0, integrator).map_err(fail)?
                }
                SweepObservable::MeanPhotonEnergy => {
                    radiation::mean_photon_energy(&s, profile.n0, integrator).map_err(fail)?
                }
                SweepObservable::TotalEnergy => {
                    radiation::total_energy(&s, profile.n0, integrator).map_err(fail)?
                }
                _ => {
                    return Err(ScalingError::RegimeConstraint(format!(
                        "observable {} does not apply to a static pulse",
                        obs.name()
                    )))
                }
            };
            (est.value, est.error)
        }
        (obs, _) => {
            return Err(ScalingError::RegimeConstraint(format!(
                "observable {} does not apply to this profile variant",
                obs.name()
            )))
        }
    };
    Ok(SweepPoint {
        parameter: value,
        value: v,
        error: e,
    })
}

/// Fitted power-law exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub exponent: f64,
    pub std_error: f64,
    pub r_squared: f64,
    /// Per-point log-residuals `(parameter, ln y − fit)`.
    pub residuals: Vec<(f64, f64)>,
}

/// Ordinary least squares of `ln(value)` on `ln(parameter)`.
pub fn fit_exponent(points: &[SweepPoint]) -> Result<ScalingFit, ScalingError> {
    if points.len() < 4 {
        return Err(ScalingError::TooFewPoints {
            needed: 4,
            got: points.len(),
        });
    }
    for p in points {
        if !(p.value > 0.0) || !(p.parameter > 0.0) {
            return Err(ScalingError::NonPositiveValue {
                parameter: p.parameter,
                value: p.value,
            });
        }
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.parameter.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.value.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let mut ss_res = 0.0;
    let mut residuals = Vec::with_capacity(points.len());
    for (p, (&x, &y)) in points.iter().zip(xs.iter().zip(ys.iter())) {
        let r = y - (intercept + slope * x);
        ss_res += r * r;
        residuals.push((p.parameter, r));
    }
    let ss_tot: f64 = ys.iter().map(|y| (y - ybar).powi(2)).sum();
    let dof = n - 2.0;
    let std_error = (ss_res / dof / sxx).sqrt();
    // flat data fits itself perfectly; guard the 0/0
    let r_squared = if ss_tot > 1e-300 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    Ok(ScalingFit {
        exponent: slope,
        std_error,
        r_squared,
        residuals,
    })
}

/// The predicted power-law exponent table. This is the single authoritative
/// encoding of every scaling claim the artifact verifies; unknown triples
/// are an error, never a silent default.
pub fn expected_exponent(
    regime: Regime,
    observable: SweepObservable,
    parameter: SweepParameter,
) -> Result<f64, ScalingError> {
    use Regime as R;
    use SweepObservable as O;
    use SweepParameter as P;
    let e = match (regime, observable, parameter) {
        // one-parameter pulse: P independent of the rate, E linear in it
        (R::OneParameter, O::TotalProbability, P::Omega) => 0.0,
        (R::OneParameter, O::MeanPhotonEnergy, P::Omega) => 1.0,
        (R::OneParameter, O::TotalEnergy, P::Omega) => 1.0,
        // point-like pulse
        (R::PointLike, O::TotalProbability, P::Omega1) => 6.0,
        (R::PointLike, O::TotalProbability, P::Omega2) => -6.0,
        (R::PointLike, O::TotalEnergy, P::Omega1) => 7.0,
        (R::PointLike, O::TotalEnergy, P::Omega2) => -6.0,
        (R::PointLike, O::MonopoleEnergy, P::Omega1) => 7.0,
        (R::PointLike, O::MonopoleEnergy, P::Omega2) => -6.0,
        (R::PointLike, O::MeanPhotonEnergy, P::Omega1) => 1.0,
        // cosmological (volume-enhanced) regime
        (R::Cosmological, O::TotalProbability, P::Omega1) => 3.0,
        (R::Cosmological, O::TotalProbability, P::Omega2) => -3.0,
        (R::Cosmological, O::MeanPhotonEnergy, P::Omega1) => 1.0,
        // needle pulse
        (R::Needle, O::TotalProbability, P::Omega1) => 5.0,
        (R::Needle, O::TotalProbability, P::Omega2) => -1.0,
        (R::Needle, O::TotalProbability, P::Omega3) => -4.0,
        (R::Needle, O::MeanPhotonEnergy, P::Omega1) => 1.0,
        // super-luminal moving pulse
        (R::MovingSuperLuminal, O::Rate, P::Omega) => 1.0,
        (R::MovingSuperLuminal, O::Rate, P::DeltaNBar) => 2.0,
        (R::MovingSuperLuminal, O::ThetaMax, P::VMinusC) => 0.5,
        // thermal horizon estimate
        (R::Horizon, O::Rate, P::Omega) => 1.0,
        (R::Horizon, O::Rate, P::DeltaNBar) => 3.0,
        // Unruh estimate
        (R::Unruh, O::Rate, P::Omega) => -2.0,
        (R::Unruh, O::Rate, P::Acceleration) => 3.0,
        (R::Unruh, O::Rate, P::DeltaNBar) => 2.0,
        // perturbative amplitude law holds in every first-order regime
        (
            R::OneParameter | R::PointLike | R::Cosmological | R::Needle,
            O::TotalProbability,
            P::DeltaNBar,
        ) => 2.0,
        (
            R::OneParameter | R::PointLike | R::Cosmological | R::Needle,
            O::TotalEnergy,
            P::DeltaNBar,
        ) => 2.0,
        (
            R::OneParameter | R::PointLike | R::Cosmological | R::Needle,
            O::MeanPhotonEnergy,
            P::DeltaNBar,
        ) => 0.0,
        (R::PointLike, O::MonopoleEnergy, P::DeltaNBar) => 2.0,
        _ => {
            return Err(ScalingError::UnknownTriple {
                regime: regime.name().into(),
                observable: observable.name().into(),
                parameter: parameter.name().into(),
            })
        }
    };
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn synthetic(points: Vec<(f64, f64)>) -> Vec<SweepPoint> {
        points
            .into_iter()
            .map(|(x, y)| SweepPoint {
                parameter: x,
                value: y,
                error: 0.0,
            })
            .collect()
    }

    #[test]
    fn exact_power_law_fit() {
        let pts = synthetic(
            [1.0, 2.0, 4.0, 8.0, 16.0]
                .iter()
                .map(|&x: &f64| (x, 7.0 * x.powi(3)))
                .collect(),
        );
        let fit = fit_exponent(&pts).unwrap();
        assert_relative_eq!(fit.exponent, 3.0, epsilon = 1e-12);
        assert!(fit.std_error < 1e-12);
        assert!(fit.r_squared > 1.0 - 1e-12);
    }

    #[test]
    fn constant_data_fits_zero() {
        let pts = synthetic(vec![(1.0, 5.0), (2.0, 5.0), (4.0, 5.0), (8.0, 5.0)]);
        let fit = fit_exponent(&pts).unwrap();
        assert_relative_eq!(fit.exponent, 0.0, epsilon = 1e-14);
        assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn noisy_power_law_recovers_exponent() {
        // 1% multiplicative noise from the deterministic sample stream
        let mut pts = Vec::new();
        for (i, &x) in [1.0f64, 2.0, 4.0, 8.0, 16.0, 32.0].iter().enumerate() {
            let mut rng = crate::integrate::SampleRng::new(1234, i as u64);
            let (g, _) = rng.normal_pair();
            pts.push(SweepPoint {
                parameter: x,
                value: x.powi(3) * (1.0 + 0.01 * g),
                error: 0.0,
            });
        }
        let fit = fit_exponent(&pts).unwrap();
        assert!(
            (fit.exponent - 3.0).abs() < 0.1,
            "exponent {}",
            fit.exponent
        );
    }

    #[test]
    fn fit_is_invariant_under_axis_rescaling() {
        let pts = synthetic(vec![(1.0, 2.0), (2.0, 16.1), (4.0, 127.0), (8.0, 1020.0)]);
        let fit1 = fit_exponent(&pts).unwrap();
        let scaled: Vec<SweepPoint> = pts
            .iter()
            .map(|p| SweepPoint {
                parameter: 17.0 * p.parameter,
                ..p.clone()
            })
            .collect();
        let fit2 = fit_exponent(&scaled).unwrap();
        assert_relative_eq!(fit1.exponent, fit2.exponent, epsilon = 1e-10);
    }

    #[test]
    fn fit_rejects_bad_tables() {
        let pts = synthetic(vec![(1.0, 1.0), (2.0, -1.0), (4.0, 1.0), (8.0, 1.0)]);
        assert!(matches!(
            fit_exponent(&pts),
            Err(ScalingError::NonPositiveValue { .. })
        ));
        let few = synthetic(vec![(1.0, 1.0), (2.0, 2.0)]);
        assert!(matches!(
            fit_exponent(&few),
            Err(ScalingError::TooFewPoints { .. })
        ));
    }

    #[test]
    fn exponent_table_entries() {
        assert_eq!(
            expected_exponent(
                Regime::OneParameter,
                SweepObservable::TotalProbability,
                SweepParameter::Omega
            )
            .unwrap(),
            0.0
        );
        assert_eq!(
            expected_exponent(
                Regime::Cosmological,
                SweepObservable::TotalProbability,
                SweepParameter::Omega2
            )
            .unwrap(),
            -3.0
        );
        assert_eq!(
            expected_exponent(
                Regime::Needle,
                SweepObservable::TotalProbability,
                SweepParameter::Omega3
            )
            .unwrap(),
            -4.0
        );
        assert!(matches!(
            expected_exponent(
                Regime::OneParameter,
                SweepObservable::Rate,
                SweepParameter::Omega3
            ),
            Err(ScalingError::UnknownTriple { .. })
        ));
    }

    #[test]
    fn sweep_spec_validation() {
        let template = PulseProfile::one_parameter(1.0, 0.01, 1.0).unwrap();
        assert!(SweepSpec::new(
            template.clone(),
            Regime::OneParameter,
            SweepParameter::Omega,
            vec![]
        )
        .is_err());
        assert!(SweepSpec::new(
            template.clone(),
            Regime::OneParameter,
            SweepParameter::Omega,
            vec![1.0, 2.0, 4.0, 3.0]
        )
        .is_err());
        // decade span enforced
        assert!(SweepSpec::new(
            template.clone(),
            Regime::OneParameter,
            SweepParameter::Omega,
            vec![1.0, 1.5, 2.0, 3.0]
        )
        .is_err());
        let ok = SweepSpec::new(
            template,
            Regime::OneParameter,
            SweepParameter::Omega,
            vec![0.5, 1.0, 2.0, 5.0],
        )
        .unwrap();
        assert_eq!(ok.values.len(), 4);
    }

    #[test]
    fn amplitude_sweep_is_exactly_quadratic() {
        let template = PulseProfile::one_parameter(1.0, 0.001, 1.0).unwrap();
        let spec = SweepSpec::new(
            template,
            Regime::OneParameter,
            SweepParameter::DeltaNBar,
            vec![0.001, 0.002, 0.004, 0.01, 0.02],
        )
        .unwrap();
        let table = run_sweep(
            &spec,
            SweepObservable::TotalProbability,
            &IntegratorSpec::default_quadrature(),
        )
        .unwrap();
        let fit = fit_exponent(&table.points).unwrap();
        assert_relative_eq!(fit.exponent, 2.0, epsilon = 1e-9);
    }
}
