//! Analogue-gravity layer: medium Lorentz boosts, horizon finding, and
//! closed-form Hawking / Unruh estimators.
//!
//! Electrodynamics in a homogeneous dielectric is invariant under Lorentz
//! transformations with the medium light speed `c = 1/n0` as the invariant
//! speed. A pulse moving below `c` is therefore equivalent to a static one
//! (no radiation to first order); a pulse faster than the light speed inside
//! itself but slower than outside,
//!
//! ```text
//! 1/(n0 + δn̄)  <  v  <  1/n0,
//! ```
//!
//! drags an analogue black-hole horizon at its front (light cannot escape)
//! and a white-hole horizon at its back. The horizon temperature follows the
//! index gradient, `T = κ/2π` with `κ = |d(v − c(x))/dx| = c²(x*)|dn/dx|`,
//! and the thermal emission estimate is `A·T³` (3D) or `Ω δn̄` (1D guides).
//! These estimators carry prefactor 1 and an order-of-magnitude tag: the
//! horizon effect is non-perturbative (the rate scales as `δn̄³`, below any
//! first-order term), so they are intentionally never cross-checked against
//! the perturbative integrals.
//!
//! An accelerated pulse scatters photons out of the thermal bath it sees in
//! its own frame (temperature `a/2π`), valid while the pulse is narrow
//! against its trajectory, `Ω >> |r̈_P|`.

use serde::{Deserialize, Serialize};

use crate::constants::{BOLTZMANN, HBAR, LIGHT_SPEED_VACUUM};
use crate::error::AnalogueError;
use crate::profiles::{PulseProfile, PulseShape, Trajectory, UNRUH_VALIDITY_MARGIN};
use crate::vec3;

/// Classification tolerance at the regime boundaries: within this relative
/// margin of a characteristic speed, the boundary regime (the side whose
/// non-strict inequality is satisfied) wins.
pub const REGIME_BOUNDARY_TOL: f64 = 1e-12;

/// Sub/trans/super-luminal classification of a moving pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    SubLuminal,
    TransLuminal,
    SuperLuminal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeClassification {
    pub regime: Regime,
    /// Medium light speed outside the pulse, `1/n0`.
    pub c_outside: f64,
    /// Medium light speed at the pulse peak, `1/(n0 + δn̄)`.
    pub c_inside: f64,
    pub v: f64,
}

/// Classify a pulse speed against the two characteristic speeds.
pub fn classify_regime(n0: f64, delta_n_bar: f64, v: f64) -> RegimeClassification {
    let c_outside = 1.0 / n0;
    let c_inside = 1.0 / (n0 + delta_n_bar);
    let regime = if v >= c_outside * (1.0 - REGIME_BOUNDARY_TOL) {
        Regime::SuperLuminal
    } else if v <= c_inside * (1.0 + REGIME_BOUNDARY_TOL) {
        Regime::SubLuminal
    } else {
        Regime::TransLuminal
    };
    RegimeClassification {
        regime,
        c_outside,
        c_inside,
        v,
    }
}

/// Lorentz boost with the medium light speed as invariant speed, stored as a
/// coordinate map on (t, x, y, z) together with its exact inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct MediumBoost {
    pub c: f64,
    forward: [[f64; 4]; 4],
    inverse: [[f64; 4]; 4],
}

fn boost_matrix(u: [f64; 3], c: f64) -> [[f64; 4]; 4] {
    let u_sq = vec3::norm_sq(u);
    let gamma = 1.0 / (1.0 - u_sq / (c * c)).sqrt();
    let mut m = [[0.0; 4]; 4];
    m[0][0] = gamma;
    for i in 0..3 {
        m[0][i + 1] = -gamma * u[i] / (c * c);
        m[i + 1][0] = -gamma * u[i];
        for j in 0..3 {
            m[i + 1][j + 1] = if i == j { 1.0 } else { 0.0 }
                + if u_sq > 0.0 {
                    (gamma - 1.0) * u[i] * u[j] / u_sq
                } else {
                    0.0
                };
        }
    }
    m
}

fn mat_mul(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for (l, bl) in b.iter().enumerate() {
                out[i][j] += a[i][l] * bl[j];
            }
        }
    }
    out
}

fn mat_apply(m: &[[f64; 4]; 4], t: f64, r: [f64; 3]) -> (f64, [f64; 3]) {
    let x = [t, r[0], r[1], r[2]];
    let mut y = [0.0; 4];
    for i in 0..4 {
        for (j, xj) in x.iter().enumerate() {
            y[i] += m[i][j] * xj;
        }
    }
    (y[0], [y[1], y[2], y[3]])
}

impl MediumBoost {
    pub fn new(u: [f64; 3], c: f64) -> Result<Self, AnalogueError> {
        let speed = vec3::norm(u);
        if !(speed < c) {
            return Err(AnalogueError::NoValidBoost { speed, c });
        }
        Ok(Self {
            c,
            forward: boost_matrix(u, c),
            inverse: boost_matrix(vec3::scale(u, -1.0), c),
        })
    }

    fn then(&self, next: &MediumBoost) -> MediumBoost {
        MediumBoost {
            c: self.c,
            forward: mat_mul(&next.forward, &self.forward),
            inverse: mat_mul(&self.inverse, &next.inverse),
        }
    }

    /// Map lab coordinates into the boosted frame.
    pub fn to_frame(&self, t: f64, r: [f64; 3]) -> (f64, [f64; 3]) {
        mat_apply(&self.forward, t, r)
    }

    /// Map boosted-frame coordinates back to the lab.
    pub fn to_lab(&self, t: f64, r: [f64; 3]) -> (f64, [f64; 3]) {
        mat_apply(&self.inverse, t, r)
    }
}

/// A profile observed from a medium-boosted frame. The scalar `δn` field is
/// carried along the coordinate map, so evaluation is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct BoostedProfile {
    pub base: PulseProfile,
    pub boost: MediumBoost,
}

impl BoostedProfile {
    /// `δn` at boosted-frame coordinates.
    pub fn evaluate(&self, t: f64, r: [f64; 3]) -> f64 {
        let (t_lab, r_lab) = self.boost.to_lab(t, r);
        self.base.evaluate(t_lab, r_lab)
    }

    /// Scalar amplitude is boost-invariant.
    pub fn amplitude(&self) -> f64 {
        self.base.amplitude
    }

    /// Compose with a further boost of the current frame.
    pub fn boost(&self, u: [f64; 3]) -> Result<BoostedProfile, AnalogueError> {
        let next = MediumBoost::new(u, self.boost.c)?;
        Ok(BoostedProfile {
            base: self.base.clone(),
            boost: self.boost.then(&next),
        })
    }

    /// Velocity of the pulse center in this frame (for a uniformly moving
    /// base profile).
    pub fn effective_velocity(&self) -> Option<[f64; 3]> {
        let PulseShape::UniformlyMoving { velocity, .. } = &self.base.shape else {
            return None;
        };
        let (t0, r0) = self.boost.to_frame(0.0, [0.0; 3]);
        let (t1, r1) = self.boost.to_frame(1.0, *velocity);
        let dt = t1 - t0;
        Some(vec3::scale(vec3::sub(r1, r0), 1.0 / dt))
    }
}

/// Boost a uniformly moving profile by `u` (medium Lorentz transformation).
/// Boosting a sub-luminal pulse by its own velocity yields a profile that is
/// exactly stationary in the new frame.
pub fn boost_profile(p: &PulseProfile, u: [f64; 3]) -> Result<BoostedProfile, AnalogueError> {
    if !matches!(p.shape, PulseShape::UniformlyMoving { .. }) {
        return Err(AnalogueError::WrongVariant("uniformly_moving"));
    }
    let boost = MediumBoost::new(u, p.medium_light_speed())?;
    Ok(BoostedProfile {
        base: p.clone(),
        boost,
    })
}

/// Horizon flavor: light cannot escape across the front end of the pulse
/// (black) or enter across the back end (white).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HorizonKind {
    BlackHole,
    WhiteHole,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Horizon {
    /// Comoving coordinate along the motion axis where `v = c(x)`.
    pub position: f64,
    pub kind: HorizonKind,
}

/// Comoving 1D section of a moving pulse along its motion axis.
fn section(p: &PulseProfile) -> Result<(f64, f64, [f64; 3]), AnalogueError> {
    match &p.shape {
        PulseShape::UniformlyMoving { rate, velocity } => {
            let speed = vec3::norm(*velocity);
            if speed == 0.0 {
                return Err(AnalogueError::NoHorizon("pulse at rest".into()));
            }
            Ok((*rate, speed, vec3::scale(*velocity, 1.0 / speed)))
        }
        _ => Err(AnalogueError::WrongVariant("uniformly_moving")),
    }
}

fn section_delta_n(p: &PulseProfile, axis: [f64; 3], x: f64) -> f64 {
    p.evaluate(0.0, vec3::scale(axis, x))
}

/// Local light speed on the comoving section.
fn local_speed(p: &PulseProfile, axis: [f64; 3], x: f64) -> f64 {
    1.0 / (p.n0 + section_delta_n(p, axis, x))
}

/// Horizon search grid: 4096 points across ±6 pulse widths, then bracketed
/// Brent refinement; tangential roots surface as degenerate later.
const HORIZON_GRID: usize = 4096;
const HORIZON_HALF_WIDTHS: f64 = 6.0;

/// All horizon crossings `v = c(x)` of a trans-luminal moving pulse, typed
/// by which way the light cone tips: `dc/dx > 0` at the front of a hump
/// (black hole), `< 0` at its back (white hole).
pub fn find_horizons(p: &PulseProfile) -> Result<Vec<Horizon>, AnalogueError> {
    let (rate, v, axis) = section(p)?;
    let class = classify_regime(p.n0, p.amplitude, v);
    if class.regime != Regime::TransLuminal {
        return Err(AnalogueError::NoHorizon(format!(
            "regime is {:?}: no crossing of v = c(x) exists",
            class.regime
        )));
    }
    let c = p.medium_light_speed();
    let half = HORIZON_HALF_WIDTHS * c / rate;
    let f = |x: f64| local_speed(p, axis, x) - v;
    let mut horizons = Vec::new();
    let mut x_prev = -half;
    let mut f_prev = f(x_prev);
    for i in 1..=HORIZON_GRID {
        let x = -half + 2.0 * half * i as f64 / HORIZON_GRID as f64;
        let fx = f(x);
        if f_prev == 0.0 || f_prev * fx < 0.0 {
            let root = brent(&f, x_prev, x, 1e-12 * v);
            let kind = if f(root + 1e-9 * half) > f(root - 1e-9 * half) {
                HorizonKind::BlackHole
            } else {
                HorizonKind::WhiteHole
            };
            horizons.push(Horizon {
                position: root,
                kind,
            });
        }
        x_prev = x;
        f_prev = fx;
    }
    if horizons.is_empty() {
        return Err(AnalogueError::NoHorizon(
            "no sign change of v - c(x) on the search grid".into(),
        ));
    }
    Ok(horizons)
}

/// Bracketed Brent root refinement of `f` on [a, b]. Runs to bracket
/// convergence, which beats the required |f(root)| <= f_tol by a wide
/// margin (checked in debug builds).
fn brent<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, f_tol: f64) -> f64 {
    let mut fa = f(a);
    let mut fb = f(b);
    debug_assert!(fa * fb <= 0.0, "root must be bracketed");
    if fa.abs() < fb.abs() {
        core::mem::swap(&mut a, &mut b);
        core::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut mflag = true;
    for _ in 0..200 {
        if fb == 0.0 || (b - a).abs() < 1e-15 * b.abs().max(1e-30) {
            break;
        }
        let mut s = if fa != fc && fb != fc {
            // inverse quadratic interpolation
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let cond = !((s > lo.min(b) && s < lo.max(b)) || (s > b.min(lo) && s < b.max(lo)))
            || (mflag && (s - b).abs() >= (b - c).abs() / 2.0)
            || (!mflag && (s - b).abs() >= (c - d).abs() / 2.0);
        if cond {
            s = 0.5 * (a + b);
            mflag = true;
        } else {
            mflag = false;
        }
        let fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if fa * fs < 0.0 {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            core::mem::swap(&mut a, &mut b);
            core::mem::swap(&mut fa, &mut fb);
        }
    }
    debug_assert!(
        fb.abs() <= f_tol,
        "root refinement fell short: |f| = {fb:e}"
    );
    b
}

/// Surface gravity from the local index gradient:
/// `κ = |d/dx (v − c(x))| = c²(x*) |dn/dx|`.
pub fn kappa_from_gradient(c_at_horizon: f64, dn_dx: f64) -> f64 {
    c_at_horizon * c_at_horizon * dn_dx.abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceGravity {
    pub kappa: f64,
    /// Co-moving horizon temperature, convention `T = κ/2π`.
    pub t_hawking: f64,
}

/// Surface gravity and horizon temperature at a horizon position from
/// [`find_horizons`], evaluated through the analytic envelope derivative.
pub fn surface_gravity(p: &PulseProfile, x_star: f64) -> Result<SurfaceGravity, AnalogueError> {
    let (rate, _, axis) = section(p)?;
    let c = p.medium_light_speed();
    // d(δn)/dx along the axis via the per-axis envelope chain rule
    let scale = rate / c;
    let u = vec3::scale(axis, scale * x_star);
    let mut dn_dx = 0.0;
    for i in 0..3 {
        let mut term = p.amplitude * envelope_derivative(p, u[i]) * scale * axis[i];
        for (j, &uj) in u.iter().enumerate() {
            if j != i {
                term *= p.envelope.value_1d(uj);
            }
        }
        dn_dx += term;
    }
    let c_local = local_speed(p, axis, x_star);
    let kappa = kappa_from_gradient(c_local, dn_dx);
    if kappa < 1e-14 {
        return Err(AnalogueError::DegenerateHorizon(x_star));
    }
    Ok(SurfaceGravity {
        kappa,
        t_hawking: kappa / (2.0 * core::f64::consts::PI),
    })
}

fn envelope_derivative(p: &PulseProfile, u: f64) -> f64 {
    match p.envelope {
        crate::profiles::Envelope::Gaussian => -2.0 * u * (-u * u).exp(),
        crate::profiles::Envelope::SuperGaussian => -4.0 * u.powi(3) * (-u.powi(4)).exp(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonEntry {
    pub position: f64,
    pub kind: HorizonKind,
    pub kappa: f64,
    pub t_hawking: f64,
}

/// Horizon analysis of a trans-luminal pulse with the thermal rate estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonReport {
    pub classification: RegimeClassification,
    pub horizons: Vec<HorizonEntry>,
    /// Effective transverse area `(c/Ω)²` of the isotropic moving pulse;
    /// absent in 1D mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub effective_area: Option<f64>,
    pub one_dimensional: bool,
    pub pulse_rate: f64,
    pub amplitude: f64,
    /// Thermal emission estimate; prefactor 1, order of magnitude only.
    pub rate_estimate: f64,
    /// Always "order_of_magnitude": these estimators live beyond first-order
    /// perturbation theory and carry no controlled prefactor.
    pub fidelity: String,
}

/// Assemble the full horizon report of a trans-luminal moving pulse.
pub fn horizon_report(
    p: &PulseProfile,
    one_dimensional: bool,
) -> Result<HorizonReport, AnalogueError> {
    let (rate, v, _) = section(p)?;
    let classification = classify_regime(p.n0, p.amplitude, v);
    let positions = find_horizons(p)?;
    let mut horizons = Vec::with_capacity(positions.len());
    for h in &positions {
        let sg = surface_gravity(p, h.position)?;
        horizons.push(HorizonEntry {
            position: h.position,
            kind: h.kind,
            kappa: sg.kappa,
            t_hawking: sg.t_hawking,
        });
    }
    let c = p.medium_light_speed();
    let effective_area = (!one_dimensional).then(|| (c / rate).powi(2));
    let mut report = HorizonReport {
        classification,
        horizons,
        effective_area,
        one_dimensional,
        pulse_rate: rate,
        amplitude: p.amplitude,
        rate_estimate: 0.0,
        fidelity: "order_of_magnitude".into(),
    };
    report.rate_estimate = hawking_rate_estimate(&report)?;
    Ok(report)
}

/// Thermal emission-rate estimate from a horizon report: `A·T³` with the
/// black-hole horizon temperature in 3D; `Ω δn̄` in one dimension (the 1D
/// rate is linear in the amplitude, underscoring that the effect sits beyond
/// first-order perturbation theory). Prefactor 1, order of magnitude only.
pub fn hawking_rate_estimate(report: &HorizonReport) -> Result<f64, AnalogueError> {
    if report.one_dimensional {
        return Ok(report.pulse_rate * report.amplitude);
    }
    let area = report.effective_area.ok_or(AnalogueError::MissingArea)?;
    let t_bh = report
        .horizons
        .iter()
        .find(|h| h.kind == HorizonKind::BlackHole)
        .map(|h| h.t_hawking)
        .unwrap_or(0.0);
    Ok(area * t_bh.powi(3))
}

/// Unruh temperature in natural units, `T = a/2π`.
pub fn unruh_temperature_natural(acceleration: f64) -> Result<f64, AnalogueError> {
    if acceleration < 0.0 {
        return Err(AnalogueError::NegativeAcceleration(acceleration));
    }
    Ok(acceleration / (2.0 * core::f64::consts::PI))
}

/// Unruh temperature in Kelvin for an SI acceleration (m/s²):
/// `T = ħ a / (2π k_B c)`, with the vacuum light speed replaced by the
/// medium speed `c₀/n0` when a medium index is given.
pub fn unruh_temperature_kelvin(
    acceleration_si: f64,
    medium_n0: Option<f64>,
) -> Result<f64, AnalogueError> {
    if acceleration_si < 0.0 {
        return Err(AnalogueError::NegativeAcceleration(acceleration_si));
    }
    let c = LIGHT_SPEED_VACUUM / medium_n0.unwrap_or(1.0);
    Ok(HBAR * acceleration_si / (2.0 * core::f64::consts::PI * BOLTZMANN * c))
}

/// Unruh-effect analysis of an accelerated pulse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnruhReport {
    /// |r̈_P| in natural units.
    pub acceleration: f64,
    /// `a/2π` in natural units.
    pub t_unruh: f64,
    /// Kelvin value when a reference frequency (Hz) anchors the natural
    /// units; uses the medium light speed per the scattering picture.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_unruh_kelvin: Option<f64>,
    /// Effective scattering cross-section stand-in `δn̄²(c/Ω)²`.
    pub sigma_estimate: f64,
    /// `σ_est · T³`; reproduces the `δn̄²/Ω² · a³` law up to c-factors.
    pub rate_estimate: f64,
    /// False when `Ω < 10·a`: the pulse width smears the trajectory and the
    /// Unruh picture degrades.
    pub validity: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validity_note: Option<String>,
    /// True for tabulated trajectories (instantaneous midpoint estimate).
    pub approximate: bool,
    pub fidelity: String,
    /// CODATA constants used for the Kelvin conversion, echoed for
    /// reproducibility.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constants: Option<(f64, f64, f64)>,
}

/// Order-of-magnitude Unruh emission estimate for an accelerated profile.
///
/// Uniform-velocity trajectories are rejected; tabulated trajectories yield
/// an instantaneous estimate flagged approximate. `reference_frequency_hz`
/// optionally anchors natural units so the temperature can be quoted in
/// Kelvin.
pub fn unruh_rate_estimate(p: &PulseProfile) -> Result<UnruhReport, AnalogueError> {
    unruh_rate_estimate_with_reference(p, None)
}

pub fn unruh_rate_estimate_with_reference(
    p: &PulseProfile,
    reference_frequency_hz: Option<f64>,
) -> Result<UnruhReport, AnalogueError> {
    let (rate, trajectory) = match &p.shape {
        PulseShape::Accelerated { rate, trajectory } => (*rate, trajectory),
        _ => return Err(AnalogueError::WrongVariant("accelerated")),
    };
    let approximate = matches!(trajectory, Trajectory::Tabulated { .. });
    if matches!(trajectory, Trajectory::UniformVelocity { .. }) {
        return Err(AnalogueError::UnsupportedTrajectory(
            "uniform velocity has no Unruh signature; use the moving-pulse rate",
        ));
    }
    let acceleration =
        trajectory
            .acceleration_magnitude()
            .ok_or(AnalogueError::UnsupportedTrajectory(
                "too few samples to estimate acceleration",
            ))?;
    let t_unruh = unruh_temperature_natural(acceleration)?;
    let c = p.medium_light_speed();
    let sigma_estimate = p.amplitude.powi(2) * (c / rate).powi(2);
    let rate_estimate = sigma_estimate * t_unruh.powi(3);
    let validity = rate >= UNRUH_VALIDITY_MARGIN * acceleration;
    let validity_note = (!validity).then(|| {
        format!(
            "pulse width ~ c/Ω is wide against the trajectory: Ω = {rate} < {UNRUH_VALIDITY_MARGIN} × |r̈_P| = {}; \
             the internal width smears out the trajectory and the Unruh picture does not apply (quantum radiation persists)",
            UNRUH_VALIDITY_MARGIN * acceleration
        )
    });
    let t_unruh_kelvin = reference_frequency_hz.map(|f_ref| {
        // a [natural] → a_SI = a · Ω_ref · c₀, then T = ħ a_SI/(2π k_B c_medium)
        let a_si = acceleration * f_ref * LIGHT_SPEED_VACUUM;
        HBAR * a_si / (2.0 * core::f64::consts::PI * BOLTZMANN * (LIGHT_SPEED_VACUUM / p.n0))
    });
    Ok(UnruhReport {
        acceleration,
        t_unruh,
        t_unruh_kelvin,
        sigma_estimate,
        rate_estimate,
        validity,
        validity_note,
        approximate,
        fidelity: "order_of_magnitude".into(),
        constants: t_unruh_kelvin.map(|_| (HBAR, BOLTZMANN, LIGHT_SPEED_VACUUM)),
    })
}
