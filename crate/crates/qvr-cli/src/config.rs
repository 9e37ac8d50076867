//! Run configuration: a strict, versioned TOML schema.
//!
//! Unknown keys are hard errors (silent typos in physics parameters are the
//! failure mode this guards against), defaults are materialized at parse
//! time, and the canonical serialized form round-trips to an identical
//! `RunConfig`. The configuration hash excludes the worker count so that
//! numerically identical runs produce byte-identical reports at any
//! parallelism.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use qvr::integrate::{IntegratorSpec, MonteCarloSpec, QuadratureSpec};
use qvr::profiles::{Envelope, PulseProfile, PulseShape, Trajectory};
use qvr::scaling::{Regime, SweepObservable, SweepParameter};
use qvr::spectrum::GridSpec;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    /// TOML syntax or type error with 1-based line/column when available.
    Syntax {
        message: String,
        line: Option<usize>,
        column: Option<usize>,
    },
    /// Schema violation with the offending key path.
    Schema { path: String, message: String },
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Syntax {
                message,
                line,
                column,
            } => match (line, column) {
                (Some(l), Some(c)) => {
                    write!(f, "config syntax error at line {l}, column {c}: {message}")
                }
                _ => write!(f, "config syntax error: {message}"),
            },
            ConfigError::Schema { path, message } => {
                write!(f, "config schema violation at `{path}`: {message}")
            }
        }
    }
}

impl std::error::Error for ConfigError {}

fn schema_err(path: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Spectrum,
    Radiate,
    Rate,
    Sweep,
    Horizon,
    Unruh,
    Validate,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Radiate => "radiate",
            Command::Rate => "rate",
            Command::Sweep => "sweep",
            Command::Horizon => "horizon",
            Command::Unruh => "unruh",
            Command::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileVariant {
    StaticAnisotropic,
    UniformlyMoving,
    Accelerated,
}

/// Profile block. Flat keys with variant-specific requirements checked
/// after parsing so violations can name the exact key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub variant: ProfileVariant,
    #[serde(default = "default_envelope")]
    pub envelope: Envelope,
    /// Perturbation amplitude δn̄.
    pub delta_n: f64,
    /// Background refractive index.
    pub n0: f64,
    /// Temporal rate Ω₁ (static variant). `omega` is shorthand for all
    /// three equal rates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega1: Option<f64>,
    /// Axial spatial rate Ω₂ (static variant).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega2: Option<f64>,
    /// Transverse spatial rate Ω₃ (static variant).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega3: Option<f64>,
    /// Single rate Ω (all variants; sets all static rates when given).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    /// Pulse velocity in vacuum-light-speed units (moving variant).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub velocity: Option<[f64; 3]>,
    /// Constant acceleration r̈_P (accelerated variant).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acceleration: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_velocity: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_position: Option<[f64; 3]>,
}

fn default_envelope() -> Envelope {
    Envelope::Gaussian
}

impl ProfileConfig {
    pub fn to_profile(&self) -> Result<PulseProfile, ConfigError> {
        let shape = match self.variant {
            ProfileVariant::StaticAnisotropic => {
                let (o1, o2, o3) =
                    match (self.omega, self.omega1, self.omega2, self.omega3) {
                        (Some(o), None, None, None) => (o, o, o),
                        (None, Some(a), Some(b), Some(c)) => (a, b, c),
                        (Some(_), _, _, _) => return Err(schema_err(
                            "profile.omega",
                            "give either `omega` or all of `omega1`/`omega2`/`omega3`, not both",
                        )),
                        _ => {
                            return Err(schema_err(
                                "profile.omega1",
                                "static profiles need `omega` or all of `omega1`/`omega2`/`omega3`",
                            ))
                        }
                    };
                for (key, val) in [
                    ("velocity", self.velocity.is_some()),
                    ("acceleration", self.acceleration.is_some()),
                ] {
                    if val {
                        return Err(schema_err(
                            &format!("profile.{key}"),
                            "does not apply to the static variant",
                        ));
                    }
                }
                PulseShape::StaticAnisotropic {
                    temporal_rate: o1,
                    axial_rate: o2,
                    transverse_rate: o3,
                }
            }
            ProfileVariant::UniformlyMoving => {
                let rate = self.omega.ok_or_else(|| {
                    schema_err(
                        "profile.omega",
                        "moving profiles need the single rate `omega`",
                    )
                })?;
                let velocity = self.velocity.ok_or_else(|| {
                    schema_err("profile.velocity", "moving profiles need `velocity`")
                })?;
                if self.omega1.is_some() || self.omega2.is_some() || self.omega3.is_some() {
                    return Err(schema_err(
                        "profile.omega1",
                        "per-axis rates do not apply to the moving variant",
                    ));
                }
                PulseShape::UniformlyMoving { rate, velocity }
            }
            ProfileVariant::Accelerated => {
                let rate = self.omega.ok_or_else(|| {
                    schema_err(
                        "profile.omega",
                        "accelerated profiles need the single rate `omega`",
                    )
                })?;
                let acceleration = self.acceleration.ok_or_else(|| {
                    schema_err(
                        "profile.acceleration",
                        "accelerated profiles need `acceleration`",
                    )
                })?;
                PulseShape::Accelerated {
                    rate,
                    trajectory: Trajectory::UniformAcceleration {
                        acceleration,
                        initial_velocity: self.initial_velocity.unwrap_or([0.0; 3]),
                        initial_position: self.initial_position.unwrap_or([0.0; 3]),
                    },
                }
            }
        };
        PulseProfile::new(self.n0, self.delta_n, self.envelope, shape)
            .map_err(|e| schema_err("profile", e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Quadrature,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    #[serde(default = "default_method")]
    pub method: Method,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Evaluation budget: refinement ceiling for quadrature, sample count
    /// for Monte Carlo.
    #[serde(default = "default_max_evaluations")]
    pub max_evaluations: u64,
    #[serde(default = "default_base_points")]
    pub base_points: usize,
    /// Mandatory whenever the method is Monte Carlo.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Worker threads; 0 = runtime default. Recorded, but never affects
    /// numbers (deterministic reduction contract).
    #[serde(default)]
    pub workers: u64,
}

fn default_method() -> Method {
    Method::Quadrature
}
fn default_tolerance() -> f64 {
    1e-6
}
fn default_max_evaluations() -> u64 {
    4_000_000
}
fn default_base_points() -> usize {
    32
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: default_method(),
            tolerance: default_tolerance(),
            max_evaluations: default_max_evaluations(),
            base_points: default_base_points(),
            seed: None,
            workers: 0,
        }
    }
}

impl IntegratorConfig {
    pub fn to_spec(&self) -> Result<IntegratorSpec, ConfigError> {
        if !(self.tolerance > 0.0) {
            return Err(schema_err(
                "integrator.tolerance",
                "must be strictly positive",
            ));
        }
        match self.method {
            Method::Quadrature => Ok(IntegratorSpec::Quadrature(QuadratureSpec {
                base_points: self.base_points,
                tolerance: self.tolerance,
                max_evaluations: self.max_evaluations,
            })),
            Method::MonteCarlo => {
                let seed = self.seed.ok_or_else(|| {
                    schema_err(
                        "integrator.seed",
                        "a seed is required when method = \"monte_carlo\"",
                    )
                })?;
                Ok(IntegratorSpec::MonteCarlo(MonteCarloSpec::new(
                    self.max_evaluations,
                    seed,
                )))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directory: Option<String>,
    #[serde(default = "default_formats")]
    pub formats: Vec<String>,
}

fn default_formats() -> Vec<String> {
    vec!["json".into(), "csv".into(), "binary".into()]
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: None,
            formats: default_formats(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadiateConfig {
    #[serde(default = "default_angular_bins")]
    pub angular_bins: usize,
    #[serde(default = "default_correlation_bins")]
    pub correlation_bins: usize,
}

fn default_angular_bins() -> usize {
    16
}
fn default_correlation_bins() -> usize {
    50
}

impl Default for RadiateConfig {
    fn default() -> Self {
        Self {
            angular_bins: default_angular_bins(),
            correlation_bins: default_correlation_bins(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub regime: Regime,
    pub parameter: SweepParameter,
    pub observable: SweepObservable,
    pub values: Vec<f64>,
    /// Pass/fail margin on |fitted − expected| for the verdict file.
    #[serde(default = "default_sweep_tolerance")]
    pub tolerance: f64,
}

fn default_sweep_tolerance() -> f64 {
    0.1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    #[serde(default = "default_grid_points")]
    pub points: [usize; 4],
    #[serde(default = "default_extent")]
    pub extent: f64,
}

fn default_grid_points() -> [usize; 4] {
    [48; 4]
}
fn default_extent() -> f64 {
    6.0
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            points: default_grid_points(),
            extent: default_extent(),
        }
    }
}

impl SpectrumConfig {
    pub fn to_grid_spec(&self) -> GridSpec {
        GridSpec {
            points: self.points,
            extent_scale: self.extent,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HorizonConfig {
    /// Report the 1D (fibre-like) estimate instead of the 3D thermal one.
    #[serde(default)]
    pub one_dimensional: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnruhConfig {
    /// Anchors natural units to SI so temperatures can be quoted in Kelvin.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_frequency_hz: Option<f64>,
}

/// A fully validated run request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    pub command: Command,
    pub profile: ProfileConfig,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radiate: Option<RadiateConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<HorizonConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unruh: Option<UnruhConfig>,
}

/// Parse and validate a configuration text.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let config: RunConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e
            .span()
            .map(|span| offset_to_line_col(text, span.start))
            .map_or((None, None), |(l, c)| (Some(l), Some(c)));
        ConfigError::Syntax {
            message: e.message().to_string(),
            line,
            column,
        }
    })?;
    validate_config(&config)?;
    Ok(config)
}

fn offset_to_line_col(text: &str, offset: usize) -> (usize, usize) {
    let clamped = offset.min(text.len());
    let before = &text[..clamped];
    let line = before.bytes().filter(|&b| b == b'\n').count() + 1;
    let column = before
        .rfind('\n')
        .map(|p| clamped - p)
        .unwrap_or(clamped + 1);
    (line, column)
}

fn validate_config(config: &RunConfig) -> Result<(), ConfigError> {
    if config.schema != SCHEMA_VERSION {
        return Err(schema_err(
            "schema",
            format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                config.schema
            ),
        ));
    }
    // command sections must match the command: a stray section is a typo'd run
    let sections: [(&str, bool, bool); 5] = [
        (
            "radiate",
            config.radiate.is_some(),
            config.command == Command::Radiate,
        ),
        (
            "sweep",
            config.sweep.is_some(),
            config.command == Command::Sweep,
        ),
        (
            "spectrum",
            config.spectrum.is_some(),
            matches!(
                config.command,
                Command::Spectrum | Command::Radiate | Command::Validate
            ),
        ),
        (
            "horizon",
            config.horizon.is_some(),
            config.command == Command::Horizon,
        ),
        (
            "unruh",
            config.unruh.is_some(),
            config.command == Command::Unruh,
        ),
    ];
    for (name, present, allowed) in sections {
        if present && !allowed {
            return Err(schema_err(
                name,
                format!(
                    "section does not apply to command \"{}\"",
                    config.command.name()
                ),
            ));
        }
    }
    if config.command == Command::Sweep && config.sweep.is_none() {
        return Err(schema_err(
            "sweep",
            "command \"sweep\" needs a [sweep] section",
        ));
    }
    config.profile.to_profile()?;
    config.integrator.to_spec()?;
    if let Some(sweep) = &config.sweep {
        if !(sweep.tolerance > 0.0) {
            return Err(schema_err("sweep.tolerance", "must be strictly positive"));
        }
    }
    Ok(())
}

/// Canonical serialized form: defaults materialized, field order fixed.
pub fn canonical_toml(config: &RunConfig) -> String {
    toml::to_string(config).expect("config serialization cannot fail")
}

/// SHA-256 of the canonical form with the worker count zeroed, so reports
/// are byte-identical across worker counts.
pub fn config_hash(config: &RunConfig) -> String {
    let mut numeric = config.clone();
    numeric.integrator.workers = 0;
    let bytes = canonical_toml(&numeric);
    let digest = Sha256::digest(bytes.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL_RADIATE: &str = r#"
schema = 1
command = "radiate"

[profile]
variant = "static_anisotropic"
delta_n = 0.01
n0 = 1.0
omega = 1.0
"#;

    #[test]
    fn minimal_radiate_fills_defaults() {
        let config = parse_config(MINIMAL_RADIATE).unwrap();
        assert_eq!(config.command, Command::Radiate);
        assert_eq!(config.integrator.method, Method::Quadrature);
        assert_eq!(config.integrator.tolerance, 1e-6);
        assert_eq!(config.profile.envelope, Envelope::Gaussian);
        let profile = config.profile.to_profile().unwrap();
        assert!(matches!(
            profile.shape,
            PulseShape::StaticAnisotropic { .. }
        ));
    }

    #[test]
    fn unknown_key_is_an_error() {
        let text = MINIMAL_RADIATE.replace("omega = 1.0", "omega = 1.0\nomega4 = 2.0");
        let err = parse_config(&text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("omega4"), "{msg}");
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_config("schema = [broken").unwrap_err();
        match err {
            ConfigError::Syntax { line, .. } => assert_eq!(line, Some(1)),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn monte_carlo_requires_seed() {
        let text = format!("{MINIMAL_RADIATE}\n[integrator]\nmethod = \"monte_carlo\"\n");
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("integrator.seed"), "{err}");
    }

    #[test]
    fn mismatched_section_is_rejected() {
        let text = format!("{MINIMAL_RADIATE}\n[sweep]\nregime = \"one_parameter\"\nparameter = \"omega\"\nobservable = \"total_probability\"\nvalues = [1.0, 2.0, 4.0, 10.0]\n");
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("sweep"), "{err}");
    }

    #[test]
    fn canonical_roundtrip_is_identity() {
        let config = parse_config(MINIMAL_RADIATE).unwrap();
        let canonical = canonical_toml(&config);
        let reparsed = parse_config(&canonical).unwrap();
        assert_eq!(config, reparsed);
        // and canonicalization is idempotent
        assert_eq!(canonical, canonical_toml(&reparsed));
    }

    #[test]
    fn hash_ignores_workers_only() {
        let a = parse_config(MINIMAL_RADIATE).unwrap();
        let mut b = a.clone();
        b.integrator.workers = 7;
        assert_eq!(config_hash(&a), config_hash(&b));
        let mut c = a.clone();
        c.profile.delta_n = 0.02;
        assert_ne!(config_hash(&a), config_hash(&c));
    }

    #[test]
    fn variant_key_requirements() {
        let bad = MINIMAL_RADIATE.replace("omega = 1.0", "omega = 1.0\nvelocity = [0.5, 0.0, 0.0]");
        assert!(parse_config(&bad).is_err());
        let moving = MINIMAL_RADIATE.replace(
            "variant = \"static_anisotropic\"",
            "variant = \"uniformly_moving\"",
        );
        // moving without velocity
        assert!(parse_config(&moving)
            .unwrap_err()
            .to_string()
            .contains("velocity"));
    }
}
