//! Command execution: dispatch a validated [`RunConfig`] to the library and
//! write the result files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use qvr::analogue;
use qvr::profiles::{ProfileWarning, PulseShape};
use qvr::radiation::{self, HistogramBins};
use qvr::scaling::{self, SweepSpec};
use qvr::spectrum::{
    analytic_spectrum, moving_spectrum, numeric_spectrum, parseval_check, SpectralAmplitude,
};

use crate::config::{canonical_toml, config_hash, Command, RunConfig, SpectrumConfig};
use crate::outputs::{
    write_histogram_csv, write_json, write_report, write_sweep_csv, write_text, Report, RunError,
    Verdict, TOOL_VERSION,
};
use crate::selftest;

/// Files produced by a run.
#[derive(Debug, Default)]
pub struct Artifacts {
    pub files: Vec<PathBuf>,
    /// False only for `validate` runs with failing checks.
    pub success: bool,
}

fn make_report<T: Serialize>(
    config: &RunConfig,
    hash: &str,
    warnings: Vec<ProfileWarning>,
    result: T,
) -> Report<T> {
    Report {
        schema: crate::config::SCHEMA_VERSION,
        tool: "qvr",
        version: TOOL_VERSION,
        config_hash: hash.to_string(),
        command: config.command.name().to_string(),
        profile_warnings: warnings,
        result,
    }
}

/// Execute a validated config, writing artifacts into `out_dir`.
pub fn execute(config: &RunConfig, out_dir: &Path) -> Result<Artifacts, RunError> {
    fs::create_dir_all(out_dir).map_err(|e| RunError::io(e, out_dir))?;
    let run = || execute_inner(config, out_dir);
    if config.integrator.workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.integrator.workers as usize)
            .build()
            .map_err(|e| RunError::new("threads", e.to_string()))?;
        pool.install(run)
    } else {
        run()
    }
}

fn execute_inner(config: &RunConfig, out_dir: &Path) -> Result<Artifacts, RunError> {
    let hash = config_hash(config);
    let profile = config
        .profile
        .to_profile()
        .map_err(|e| RunError::new("config", e.to_string()))?;
    let warnings = profile.validate();
    let spec = config
        .integrator
        .to_spec()
        .map_err(|e| RunError::new("config", e.to_string()))?;
    let csv = config.output.formats.iter().any(|f| f == "csv");
    let binary = config.output.formats.iter().any(|f| f == "binary");

    let mut artifacts = Artifacts {
        files: Vec::new(),
        success: true,
    };
    artifacts.files.push(write_text(
        out_dir,
        "config_canonical.toml",
        &canonical_toml(config),
    )?);

    match config.command {
        Command::Radiate => {
            let bins = config.radiate.clone().unwrap_or_default();
            let s = spectrum_for(config, &profile)?;
            let report = radiation::emission_report(
                &s,
                profile.n0,
                &spec,
                HistogramBins {
                    angular: bins.angular_bins,
                    correlation: bins.correlation_bins,
                },
            )
            .map_err(qvr::Error::from)?;
            if csv {
                if let Some(h) = &report.angular_cos_theta {
                    artifacts.files.push(write_histogram_csv(
                        out_dir,
                        "angular_cos_theta.csv",
                        h,
                        &hash,
                    )?);
                }
                if let Some(h) = &report.angular_phi {
                    artifacts.files.push(write_histogram_csv(
                        out_dir,
                        "angular_phi.csv",
                        h,
                        &hash,
                    )?);
                }
                if let Some(h) = &report.pair_correlation {
                    artifacts.files.push(write_histogram_csv(
                        out_dir,
                        "pair_correlation.csv",
                        h,
                        &hash,
                    )?);
                }
            }
            artifacts.files.push(write_report(
                out_dir,
                &make_report(config, &hash, warnings, report),
            )?);
        }
        Command::Rate => {
            let fs = moving_spectrum(&profile).map_err(qvr::Error::from)?;
            let report =
                radiation::emission_rate(&fs, profile.n0, &spec).map_err(qvr::Error::from)?;
            if csv {
                if let Some(h) = &report.angle_spectrum {
                    artifacts.files.push(write_histogram_csv(
                        out_dir,
                        "angle_spectrum.csv",
                        h,
                        &hash,
                    )?);
                }
            }
            artifacts.files.push(write_report(
                out_dir,
                &make_report(config, &hash, warnings, report),
            )?);
        }
        Command::Spectrum => {
            let grid_config = config.spectrum.clone().unwrap_or_default();
            let s = numeric_spectrum(&profile, &grid_config.to_grid_spec())
                .map_err(qvr::Error::from)?;
            let SpectralAmplitude::Grid(grid) = &s else {
                unreachable!()
            };
            let parseval = parseval_check(&profile, &s).map_err(qvr::Error::from)?;
            let hermitian = grid.hermitian_asymmetry();
            // closed-form cross-check where one exists
            let closed_form_max_rel = analytic_spectrum(&profile).ok().map(|cf| {
                let SpectralAmplitude::ClosedForm(g) = &cf else {
                    unreachable!()
                };
                let peak = g.peak();
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
                                let exact = g.eval(w, k);
                                if exact.abs() >= 1e-6 * peak {
                                    let got = grid.at([iw, ix, iy, iz]);
                                    let exact = qvr::spectrum::Complex64::new(exact, 0.0);
                                    worst = worst.max((got - exact).norm() / exact.norm());
                                }
                            }
                        }
                    }
                }
                worst
            });
            if binary {
                let path = out_dir.join("spectrum.bin");
                let file = fs::File::create(&path).map_err(|e| RunError::io(e, &path))?;
                grid.write_binary(std::io::BufWriter::new(file))
                    .map_err(qvr::Error::from)?;
                artifacts.files.push(path);
            }
            if csv && grid.total_points() <= 65_536 {
                let path = out_dir.join("spectrum.csv");
                let file = fs::File::create(&path).map_err(|e| RunError::io(e, &path))?;
                grid.write_csv(std::io::BufWriter::new(file))
                    .map_err(qvr::Error::from)?;
                artifacts.files.push(path);
            }
            #[derive(Serialize)]
            struct SpectrumSummary {
                convention: String,
                axes: Vec<qvr::spectrum::GridAxis>,
                total_points: usize,
                parseval_discrepancy: f64,
                hermitian_asymmetry: f64,
                #[serde(skip_serializing_if = "Option::is_none")]
                closed_form_max_rel_error: Option<f64>,
                peak_value: f64,
            }
            let summary = SpectrumSummary {
                convention: grid.convention.clone(),
                axes: grid.axes.to_vec(),
                total_points: grid.total_points(),
                parseval_discrepancy: parseval,
                hermitian_asymmetry: hermitian,
                closed_form_max_rel_error: closed_form_max_rel,
                peak_value: grid.eval(0.0, [0.0; 3]).map_err(qvr::Error::from)?.norm(),
            };
            artifacts.files.push(write_report(
                out_dir,
                &make_report(config, &hash, warnings, summary),
            )?);
        }
        Command::Sweep => {
            let sweep_config = config.sweep.as_ref().expect("validated");
            let regime = sweep_config.regime;
            let sweep = SweepSpec::new(
                profile.clone(),
                regime,
                sweep_config.parameter,
                sweep_config.values.clone(),
            )
            .map_err(qvr::Error::from)?;
            let table = scaling::run_sweep(&sweep, sweep_config.observable, &spec)
                .map_err(qvr::Error::from)?;
            let fit = scaling::fit_exponent(&table.points).map_err(qvr::Error::from)?;
            let expected =
                scaling::expected_exponent(regime, sweep_config.observable, sweep_config.parameter)
                    .map_err(qvr::Error::from)?;
            let verdict = Verdict::new(&table, &fit, expected, sweep_config.tolerance, &hash);
            if csv {
                artifacts
                    .files
                    .push(write_sweep_csv(out_dir, &table, &hash)?);
            }
            artifacts
                .files
                .push(write_json(out_dir, "verdict.json", &verdict)?);
            #[derive(Serialize)]
            struct SweepSummary {
                table: scaling::SweepTable,
                fit: scaling::ScalingFit,
                expected: f64,
                pass: bool,
            }
            let pass = verdict.pass;
            let summary = SweepSummary {
                table,
                fit,
                expected,
                pass,
            };
            artifacts.files.push(write_report(
                out_dir,
                &make_report(config, &hash, warnings, summary),
            )?);
        }
        Command::Horizon => {
            let horizon_config = config.horizon.clone().unwrap_or_default();
            let report = analogue::horizon_report(&profile, horizon_config.one_dimensional)
                .map_err(qvr::Error::from)?;
            artifacts.files.push(write_report(
                out_dir,
                &make_report(config, &hash, warnings, report),
            )?);
        }
        Command::Unruh => {
            let unruh_config = config.unruh.clone().unwrap_or_default();
            let report = analogue::unruh_rate_estimate_with_reference(
                &profile,
                unruh_config.reference_frequency_hz,
            )
            .map_err(qvr::Error::from)?;
            artifacts.files.push(write_report(
                out_dir,
                &make_report(config, &hash, warnings, report),
            )?);
        }
        Command::Validate => {
            let seed = config.integrator.seed.unwrap_or(1);
            let checks = selftest::run_self_checks(seed);
            let all_pass = checks.iter().all(|c| c.pass);
            #[derive(Serialize)]
            struct ValidateSummary {
                all_pass: bool,
                checks: Vec<selftest::CheckResult>,
            }
            let summary = ValidateSummary { all_pass, checks };
            artifacts.files.push(write_report(
                out_dir,
                &make_report(config, &hash, warnings, summary),
            )?);
            artifacts.success = all_pass;
        }
    }
    Ok(artifacts)
}

/// The spectrum a static-profile command should use: closed form when it
/// exists, otherwise the FFT grid (sized by the optional [spectrum] block).
fn spectrum_for(
    config: &RunConfig,
    profile: &qvr::PulseProfile,
) -> Result<SpectralAmplitude, RunError> {
    match analytic_spectrum(profile) {
        Ok(s) => Ok(s),
        Err(qvr::error::SpectrumError::NotClosedForm(_)) => {
            let grid: SpectrumConfig = config.spectrum.clone().unwrap_or_default();
            Ok(numeric_spectrum(profile, &grid.to_grid_spec()).map_err(qvr::Error::from)?)
        }
        Err(e) => Err(qvr::Error::from(e).into()),
    }
}

/// Guard against using rate commands with non-moving profiles early, with a
/// config-level error message.
pub fn precheck_command(config: &RunConfig) -> Result<(), RunError> {
    let profile = config
        .profile
        .to_profile()
        .map_err(|e| RunError::new("config", e.to_string()))?;
    match (config.command, &profile.shape) {
        (Command::Rate | Command::Horizon, PulseShape::UniformlyMoving { velocity, .. }) => {
            let speed = velocity.iter().map(|v| v * v).sum::<f64>().sqrt();
            if speed == 0.0 {
                return Err(RunError::new(
                    "config",
                    "rate/horizon commands need a moving pulse",
                ));
            }
            Ok(())
        }
        (Command::Rate | Command::Horizon, _) => Err(RunError::new(
            "config",
            "rate/horizon commands need the uniformly_moving variant",
        )),
        (Command::Unruh, PulseShape::Accelerated { .. }) => Ok(()),
        (Command::Unruh, _) => Err(RunError::new(
            "config",
            "unruh command needs the accelerated variant",
        )),
        _ => Ok(()),
    }
}
