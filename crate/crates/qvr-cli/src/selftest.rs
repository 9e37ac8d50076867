//! Invariant self-test suite behind the `validate` command.
//!
//! Runs the cross-route integrity checks on a fixed reference profile
//! (deterministic, desk-scale runtime) and reports one line per check. The
//! configured profile block itself is validated separately for warnings.

use serde::Serialize;

use qvr::analogue;
use qvr::integrate::IntegratorSpec;
use qvr::profiles::{Envelope, PulseProfile, PulseShape};
use qvr::radiation::{self, OracleTarget, PairMode};
use qvr::spectrum::{self, analytic_spectrum, numeric_spectrum, GridSpec, SpectralAmplitude};

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    /// Measured figure of merit (deviation, ratio error, ...).
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

fn check(name: &'static str, value: f64, threshold: f64, detail: String) -> CheckResult {
    CheckResult {
        name,
        pass: value <= threshold,
        value,
        threshold,
        detail,
    }
}

/// Run the whole suite. Returns one result per invariant.
pub fn run_self_checks(seed: u64) -> Vec<CheckResult> {
    let mut results = Vec::new();
    let reference = PulseProfile::one_parameter(1.0, 0.01, 1.0).unwrap();
    let analytic = analytic_spectrum(&reference).unwrap();
    let quad = IntegratorSpec::default_quadrature();

    // FFT vs closed form on the spectral support
    let grid_spec = GridSpec {
        points: [44; 4],
        extent_scale: 6.0,
    };
    let numeric = numeric_spectrum(&reference, &grid_spec).unwrap();
    if let (SpectralAmplitude::Grid(grid), SpectralAmplitude::ClosedForm(cf)) =
        (&numeric, &analytic)
    {
        let peak = cf.peak();
        let mut worst = 0.0f64;
        for iw in 0..grid.axes[0].n {
            for ix in 0..grid.axes[1].n {
                for iy in 0..grid.axes[2].n {
                    for iz in 0..grid.axes[3].n {
                        let w = grid.axes[0].value(iw);
                        let k = [
                            grid.axes[1].value(ix),
                            grid.axes[2].value(iy),
                            grid.axes[3].value(iz),
                        ];
                        let exact = cf.eval(w, k);
                        if exact.abs() >= 1e-6 * peak {
                            let got = grid.at([iw, ix, iy, iz]);
                            let exact = qvr::spectrum::Complex64::new(exact, 0.0);
                            worst = worst.max((got - exact).norm() / exact.norm());
                        }
                    }
                }
            }
        }
        results.push(check(
            "fft_vs_closed_form",
            worst,
            1e-6,
            "max relative error on the |δñ| >= 1e-6·peak region".into(),
        ));
        results.push(check(
            "hermitian_symmetry",
            grid.hermitian_asymmetry(),
            1e-12,
            "max |δñ(-ω,-k) - conj δñ(ω,k)| / peak".into(),
        ));
    }

    // Parseval on both routes
    let p_closed = spectrum::parseval_check(&reference, &analytic).unwrap();
    results.push(check(
        "parseval_closed_form",
        p_closed,
        1e-10,
        "relative discrepancy".into(),
    ));
    let p_grid = spectrum::parseval_check(&reference, &numeric).unwrap();
    results.push(check(
        "parseval_grid",
        p_grid,
        1e-6,
        "relative discrepancy".into(),
    ));

    // pair amplitude symmetry
    let mode_a = PairMode::new([0.3, -0.2, 0.9], [-0.6, 0.1, 0.4], 1.0).unwrap();
    let mode_b = PairMode::new([-0.6, 0.1, 0.4], [0.3, -0.2, 0.9], 1.0).unwrap();
    let amp_a = radiation::pair_amplitude_sq(&analytic, &mode_a, 1.0).unwrap();
    let amp_b = radiation::pair_amplitude_sq(&analytic, &mode_b, 1.0).unwrap();
    results.push(check(
        "pair_amplitude_symmetry",
        (amp_a - amp_b).abs(),
        0.0,
        "|A(k,k')|² - |A(k',k)|², exact".into(),
    ));

    // quadrature vs Monte-Carlo oracle
    let p_quad = radiation::total_probability(&analytic, 1.0, &quad).unwrap();
    let p_mc = radiation::mc_oracle(
        &analytic,
        1.0,
        seed,
        400_000,
        OracleTarget::TotalProbability,
    )
    .unwrap();
    let deviation = (p_mc.value - p_quad.value).abs();
    let allowed = (3.0 * p_mc.error).min(0.02 * p_quad.value);
    results.push(check(
        "oracle_agreement_probability",
        deviation,
        allowed,
        format!(
            "|P_mc - P_quad|, limit = min(3σ, 2%); σ = {:.3e}",
            p_mc.error
        ),
    ));
    let e_quad = radiation::mean_photon_energy(&analytic, 1.0, &quad).unwrap();
    let e_mc = radiation::mc_oracle(
        &analytic,
        1.0,
        seed + 1,
        400_000,
        OracleTarget::MeanPhotonEnergy,
    )
    .unwrap();
    let e_dev = (e_mc.value - e_quad.value).abs();
    results.push(check(
        "oracle_agreement_energy",
        e_dev,
        (3.0 * e_mc.error).min(0.02 * e_quad.value),
        format!("|E_mc - E_quad|; σ = {:.3e}", e_mc.error),
    ));

    // exact quadratic amplitude law
    let double = PulseProfile::one_parameter(1.0, 0.02, 1.0).unwrap();
    let s2 = analytic_spectrum(&double).unwrap();
    let p2 = radiation::total_probability(&s2, 1.0, &quad).unwrap();
    results.push(check(
        "amplitude_quadratic_law",
        (p2.value / p_quad.value - 4.0).abs(),
        1e-12,
        "P(2δn̄)/P(δn̄) - 4".into(),
    ));

    // time translation leaves |δñ| untouched
    let shifted = spectrum::numeric_spectrum_sampled(
        |t, r| reference.evaluate(t - 0.37, r),
        [40; 4],
        [7.0, 6.0, 6.0, 6.0],
        [1.0; 4],
        [8.1; 4],
    )
    .unwrap();
    let base = spectrum::numeric_spectrum_sampled(
        |t, r| reference.evaluate(t, r),
        [40; 4],
        [7.0, 6.0, 6.0, 6.0],
        [1.0; 4],
        [8.1; 4],
    )
    .unwrap();
    if let (SpectralAmplitude::Grid(a), SpectralAmplitude::Grid(b)) = (&base, &shifted) {
        let peak = a.data.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        let worst = a
            .data
            .iter()
            .zip(&b.data)
            .map(|(za, zb)| (za.norm() - zb.norm()).abs() / peak)
            .fold(0.0f64, f64::max);
        results.push(check(
            "time_shift_modulus_invariance",
            worst,
            1e-8,
            "max | |δñ_shifted| - |δñ| | / peak".into(),
        ));
    }

    // medium boost group structure
    let mover = PulseProfile::new(
        1.5,
        0.05,
        Envelope::Gaussian,
        PulseShape::UniformlyMoving {
            rate: 1.0,
            velocity: [0.3, 0.0, 0.0],
        },
    )
    .unwrap();
    let round_trip = analogue::boost_profile(&mover, [0.25, 0.1, 0.0])
        .unwrap()
        .boost([-0.25, -0.1, 0.0])
        .unwrap();
    let mut worst = 0.0f64;
    for &(t, r) in &[
        (0.7, [0.4, 0.1, -0.3]),
        (-2.0, [1.0, 0.0, 0.5]),
        (0.0, [0.0; 3]),
    ] {
        worst = worst.max((round_trip.evaluate(t, r) - mover.evaluate(t, r)).abs());
    }
    results.push(check(
        "boost_inverse_identity",
        worst,
        1e-12,
        "pointwise |δn| deviation after boost ∘ boost⁻¹".into(),
    ));

    // deterministic seeding
    let again = radiation::mc_oracle(
        &analytic,
        1.0,
        seed,
        400_000,
        OracleTarget::TotalProbability,
    )
    .unwrap();
    results.push(check(
        "mc_seed_determinism",
        (again.value - p_mc.value).abs(),
        0.0,
        "same-seed Monte-Carlo estimates must be bit-identical".into(),
    ));

    results
}
