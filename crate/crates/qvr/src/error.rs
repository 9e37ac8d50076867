//! Error types for every module, plus the crate-wide umbrella [`Error`].

use thiserror::Error;

/// Profile construction and validation failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProfileError {
    #[error("negative input: {what} = {value}")]
    NegativeInput { what: &'static str, value: f64 },
    #[error("background index must satisfy n0 >= 1, got {0}")]
    BackgroundIndex(f64),
    #[error("perturbation amplitude must satisfy 0 < amplitude < 0.5, got {0}")]
    Amplitude(f64),
    #[error("rate must be strictly positive, got {what} = {value}")]
    NonPositiveRate { what: &'static str, value: f64 },
    #[error("velocity must be finite, got |v| = {0}")]
    NonFiniteVelocity(f64),
    #[error("tabulated trajectory needs >= 2 samples with strictly increasing times")]
    BadTrajectorySamples,
}

/// Spectral transform failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("no closed-form transform for this envelope/variant: {0}")]
    NotClosedForm(&'static str),
    #[error("grid extent must cover |u| <= 6 in scaled coordinates, got {0}")]
    InsufficientExtent(f64),
    #[error("axis {axis}: {points} points cannot resolve the spectral support (need >= {needed})")]
    Resolution {
        axis: usize,
        points: usize,
        needed: usize,
    },
    #[error("evaluation point ({omega}, {kx}, {ky}, {kz}) outside grid extent")]
    OutsideExtent {
        omega: f64,
        kx: f64,
        ky: f64,
        kz: f64,
    },
    #[error("wrong profile variant: expected {0}")]
    WrongVariant(&'static str),
    #[error("grid too large for CSV export: {points} points (limit {limit})")]
    TooLargeForCsv { points: usize, limit: usize },
    #[error("malformed spectrum file: {0}")]
    MalformedFile(String),
    #[error("i/o: {0}")]
    Io(String),
}

/// Integration and observable failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegrationError {
    #[error("integrator did not converge: error estimate {estimate:e} > tolerance {tolerance:e} after {evaluations} evaluations")]
    Accuracy {
        estimate: f64,
        tolerance: f64,
        evaluations: u64,
    },
    #[error("mean is undefined: total probability is zero")]
    UndefinedMean,
    #[error("zero effective sample size (all importance weights vanished)")]
    ZeroEffectiveSampleSize,
    #[error("angular histograms require the Monte Carlo integrator")]
    HistogramNeedsMonteCarlo,
    #[error("invalid integrator specification: {0}")]
    InvalidSpec(String),
    #[error("unsupported envelope for this estimate: {0}")]
    UnsupportedEnvelope(&'static str),
    #[error("wrong profile variant: expected {0}")]
    WrongVariant(&'static str),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

/// Scaling sweep and fit failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScalingError {
    #[error("sweep grid invalid: {0}")]
    InvalidGrid(String),
    #[error("regime constraint violated: {0}")]
    RegimeConstraint(String),
    #[error("power-law fit needs >= {needed} strictly positive points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("non-positive value in fit table at parameter {parameter}: {value}")]
    NonPositiveValue { parameter: f64, value: f64 },
    #[error("no predicted exponent for (regime={regime}, observable={observable}, parameter={parameter})")]
    UnknownTriple {
        regime: String,
        observable: String,
        parameter: String,
    },
    #[error("sweep point {parameter} failed: {source}")]
    PointFailed {
        parameter: f64,
        source: IntegrationError,
    },
}

/// Analogue-gravity layer failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalogueError {
    #[error("no medium Lorentz boost with |u| = {speed} >= c = {c}")]
    NoValidBoost { speed: f64, c: f64 },
    #[error("no horizon: {0}")]
    NoHorizon(String),
    #[error("degenerate horizon at x = {0}: |dc/dx| below 1e-14")]
    DegenerateHorizon(f64),
    #[error("estimate needs a horizon area in 3D mode")]
    MissingArea,
    #[error("unsupported trajectory: {0}")]
    UnsupportedTrajectory(&'static str),
    #[error("negative acceleration magnitude: {0}")]
    NegativeAcceleration(f64),
    #[error("wrong profile variant: expected {0}")]
    WrongVariant(&'static str),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// Crate-wide error umbrella.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
    #[error(transparent)]
    Scaling(#[from] ScalingError),
    #[error(transparent)]
    Analogue(#[from] AnalogueError),
}

impl Error {
    /// Short machine-readable kind tag, used by the CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Profile(_) => "profile",
            Error::Spectrum(_) => "spectrum",
            Error::Integration(_) => "integration",
            Error::Scaling(_) => "scaling",
            Error::Analogue(_) => "analogue",
        }
    }
}
