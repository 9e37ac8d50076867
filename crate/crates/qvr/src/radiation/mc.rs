//! Importance-sampled Monte-Carlo pair integrators.
//!
//! Independent verification path for the reduced quadrature: samples live in
//! the full `(k, k')` space (no symmetry reductions), and only the proposal
//! densities know about the spectrum's Gaussian widths. Estimates are exact
//! in expectation for any proposal, so proposal tuning affects variance
//! only.
//!
//! Determinism contract: sample `i` of a run draws from a ChaCha8 stream
//! keyed by `(seed, i)`; samples are accumulated in fixed blocks and blocks
//! are combined with a fixed-shape pairwise tree, so the estimate is
//! bit-identical at any worker count.

use rayon::prelude::*;

use crate::error::IntegrationError;
use crate::integrate::{
    mc_mean_stderr, pairwise_sum, Estimate, IntegratorMeta, MonteCarloSpec, SampleRng, MC_BLOCK,
};
use crate::radiation::reduced::PairIntegralResult;
use crate::radiation::{Histogram, RateReport, ValueWithError};
use crate::spectrum::{FactorizedMovingSpectrum, SpectralAmplitude};
use crate::vec3;

/// Cap on the proposal width of the pair-sum coordinate: the kinematic
/// constraint `|k+k'| <= |k|+|k'|` suppresses the spectrum's spatial support
/// beyond the temporal width, so proposals never need to be wider than this
/// multiple of it.
const KSUM_WIDTH_CAP: f64 = 1.4;
/// Gamma(3, θ) scale of the relative-momentum proposal in units of the
/// temporal spectral width.
const REL_MOMENTUM_SCALE: f64 = 0.6;

/// Angular histogram request: bin count and polar reference axis.
#[derive(Debug, Clone, Copy)]
pub struct AngularRequest {
    pub bins: usize,
    pub axis: [f64; 3],
}

#[derive(Clone)]
struct BlockAcc {
    // w, w², a = wω_k, a², aw, e = w(ω_k+ω_k'), e²
    scalars: [f64; 7],
    cos_bins: Vec<f64>,
    cos_bins_sq: Vec<f64>,
    phi_bins: Vec<f64>,
    phi_bins_sq: Vec<f64>,
    chi_bins: Vec<f64>,
    chi_bins_sq: Vec<f64>,
}

impl BlockAcc {
    fn new(cos_bins: usize, phi_bins: usize, chi_bins: usize) -> Self {
        Self {
            scalars: [0.0; 7],
            cos_bins: vec![0.0; cos_bins],
            cos_bins_sq: vec![0.0; cos_bins],
            phi_bins: vec![0.0; phi_bins],
            phi_bins_sq: vec![0.0; phi_bins],
            chi_bins: vec![0.0; chi_bins],
            chi_bins_sq: vec![0.0; chi_bins],
        }
    }
}

struct StaticProposal {
    ksum_sigma: [f64; 3],
    rel_theta: f64,
}

impl StaticProposal {
    fn from_support(s: &SpectralAmplitude, n0: f64) -> Self {
        let sup = s.support();
        let c = 1.0 / n0;
        let kin = KSUM_WIDTH_CAP * sup.omega_width / c;
        Self {
            ksum_sigma: [
                sup.k_width[0].min(kin),
                sup.k_width[1].min(kin),
                sup.k_width[2].min(kin),
            ],
            rel_theta: REL_MOMENTUM_SCALE * sup.omega_width / c,
        }
    }

    /// ln of the Gaussian density of the pair-sum vector.
    fn ksum_log_density(&self, ksum: [f64; 3]) -> f64 {
        let mut ln = 0.0;
        for (x, s) in ksum.iter().zip(self.ksum_sigma.iter()) {
            ln += -0.5 * (x / s).powi(2) - (s * (2.0 * core::f64::consts::PI).sqrt()).ln();
        }
        ln
    }

    /// 3D density of the relative-momentum vector (Gamma(3) magnitude,
    /// isotropic direction): the κ² factors cancel against the measure.
    fn rel_density(&self, q_mag: f64) -> f64 {
        (-q_mag / self.rel_theta).exp() / (8.0 * core::f64::consts::PI * self.rel_theta.powi(3))
    }
}

/// One importance-sampled pair draw.
struct PairDraw {
    weight: f64,
    omega: f64,
    omega_prime: f64,
    k: [f64; 3],
    k_prime: [f64; 3],
    chi: f64,
}

fn draw_pair(
    s: &SpectralAmplitude,
    n0: f64,
    proposal: &StaticProposal,
    seed: u64,
    index: u64,
) -> PairDraw {
    let mut rng = SampleRng::new(seed, index);
    let (n1, n2) = rng.normal_pair();
    let (n3, _) = rng.normal_pair();
    let ksum = [
        proposal.ksum_sigma[0] * n1,
        proposal.ksum_sigma[1] * n2,
        proposal.ksum_sigma[2] * n3,
    ];
    let q_mag = rng.gamma3(proposal.rel_theta);
    let q = vec3::scale(rng.unit_vector(), q_mag);
    let half = vec3::scale(ksum, 0.5);
    let k = vec3::add(half, q);
    let k_prime = vec3::sub(half, q);
    let c = 1.0 / n0;
    let omega = vec3::norm(k) * c;
    let omega_prime = vec3::norm(k_prime) * c;
    if omega == 0.0 || omega_prime == 0.0 {
        return PairDraw {
            weight: 0.0,
            omega,
            omega_prime,
            k,
            k_prime,
            chi: 0.0,
        };
    }
    let spectral = s.eval_abs_sq_or_zero(omega + omega_prime, ksum);
    let integrand =
        omega * omega_prime / n0.powi(6) * spectral / (2.0 * core::f64::consts::PI).powi(6);
    let density = proposal.ksum_log_density(ksum).exp() * proposal.rel_density(q_mag);
    let weight = integrand / density;
    let chi = vec3::norm(ksum) / (vec3::norm(k) + vec3::norm(k_prime));
    PairDraw {
        weight,
        omega,
        omega_prime,
        k,
        k_prime,
        chi,
    }
}

/// P, E, total energy and requested histograms of a static spectrum by
/// seeded importance sampling.
pub fn static_pair_mc(
    s: &SpectralAmplitude,
    n0: f64,
    spec: &MonteCarloSpec,
    angular: Option<AngularRequest>,
    chi_bins: Option<usize>,
) -> Result<PairIntegralResult, IntegrationError> {
    if spec.n_samples == 0 {
        return Err(IntegrationError::InvalidSpec(
            "n_samples must be positive".into(),
        ));
    }
    let proposal = StaticProposal::from_support(s, n0);
    let n = spec.n_samples;
    let n_blocks = n.div_ceil(MC_BLOCK);
    let cos_bins = angular.map(|a| a.bins).unwrap_or(0);
    let phi_bins = cos_bins;
    let nchi = chi_bins.unwrap_or(0);

    let (axis, e1, e2) = angular
        .map(|a| {
            let u = vec3::scale(a.axis, 1.0 / vec3::norm(a.axis));
            let e1 = vec3::orthonormal_to(u);
            let e2 = vec3::cross(u, e1);
            (u, e1, e2)
        })
        .unwrap_or(([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]));

    let blocks: Vec<BlockAcc> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * MC_BLOCK;
            let hi = ((b + 1) * MC_BLOCK).min(n);
            let mut acc = BlockAcc::new(cos_bins, phi_bins, nchi);
            let cos_hist = Histogram::new(-1.0, 1.0, cos_bins.max(1));
            let phi_hist = Histogram::new(0.0, 2.0 * core::f64::consts::PI, phi_bins.max(1));
            let chi_hist = Histogram::new(0.0, 1.0, nchi.max(1));
            for i in lo..hi {
                let d = draw_pair(s, n0, &proposal, spec.seed, i);
                let w = d.weight;
                let a = w * d.omega;
                let e = w * (d.omega + d.omega_prime);
                acc.scalars[0] += w;
                acc.scalars[1] += w * w;
                acc.scalars[2] += a;
                acc.scalars[3] += a * a;
                acc.scalars[4] += a * w;
                acc.scalars[5] += e;
                acc.scalars[6] += e * e;
                if w == 0.0 {
                    continue;
                }
                if cos_bins > 0 {
                    for kvec in [d.k, d.k_prime] {
                        let norm = vec3::norm(kvec);
                        let unit = vec3::scale(kvec, 1.0 / norm);
                        let ct = vec3::dot(unit, axis).clamp(-1.0, 1.0);
                        let mut phi = vec3::dot(unit, e2).atan2(vec3::dot(unit, e1));
                        if phi < 0.0 {
                            phi += 2.0 * core::f64::consts::PI;
                        }
                        if let Some(bin) = cos_hist.bin_index(ct) {
                            acc.cos_bins[bin] += 0.5 * w;
                            acc.cos_bins_sq[bin] += (0.5 * w) * (0.5 * w);
                        }
                        if let Some(bin) = phi_hist.bin_index(phi) {
                            acc.phi_bins[bin] += 0.5 * w;
                            acc.phi_bins_sq[bin] += (0.5 * w) * (0.5 * w);
                        }
                    }
                }
                if nchi > 0 {
                    if let Some(bin) = chi_hist.bin_index(d.chi) {
                        acc.chi_bins[bin] += w;
                        acc.chi_bins_sq[bin] += w * w;
                    }
                }
            }
            acc
        })
        .collect();

    // deterministic pairwise combine over the ordered block list
    let field = |f: &dyn Fn(&BlockAcc) -> f64| {
        let vals: Vec<f64> = blocks.iter().map(f).collect();
        pairwise_sum(&vals)
    };
    let sum_w = field(&|b| b.scalars[0]);
    let sum_w2 = field(&|b| b.scalars[1]);
    let sum_a = field(&|b| b.scalars[2]);
    let sum_a2 = field(&|b| b.scalars[3]);
    let sum_aw = field(&|b| b.scalars[4]);
    let sum_e = field(&|b| b.scalars[5]);
    let sum_e2 = field(&|b| b.scalars[6]);

    let (p, p_se) = mc_mean_stderr(sum_w, sum_w2, n);
    let (etot, etot_se) = mc_mean_stderr(sum_e, sum_e2, n);
    let meta = |err: f64| IntegratorMeta {
        method: "monte_carlo_importance".into(),
        evaluations: n,
        error_estimate: err,
        seed: Some(spec.seed),
    };

    let mean = if sum_w > 0.0 {
        let ratio = sum_a / sum_w;
        // standard error of the ratio estimator via the linearized residual
        let resid = (sum_a2 - 2.0 * ratio * sum_aw + ratio * ratio * sum_w2).max(0.0);
        let nf = n as f64;
        let se = (resid / (nf - 1.0)).sqrt() / (sum_w / nf.sqrt());
        Some(Estimate {
            value: ratio,
            error: se,
            meta: meta(se),
        })
    } else {
        None
    };

    let collect_hist = |lo: f64,
                        hi: f64,
                        bins: usize,
                        get: &dyn Fn(&BlockAcc) -> &[f64],
                        get_sq: &dyn Fn(&BlockAcc) -> &[f64]| {
        let mut h = Histogram::new(lo, hi, bins);
        for bin in 0..bins {
            let sums: Vec<f64> = blocks.iter().map(|b| get(b)[bin]).collect();
            let sums_sq: Vec<f64> = blocks.iter().map(|b| get_sq(b)[bin]).collect();
            let (v, se) = mc_mean_stderr(pairwise_sum(&sums), pairwise_sum(&sums_sq), n);
            h.weights[bin] = v;
            h.errors[bin] = se;
        }
        h
    };

    let (angular_cos_theta, angular_phi) = if cos_bins > 0 {
        (
            Some(collect_hist(-1.0, 1.0, cos_bins, &|b| &b.cos_bins, &|b| {
                &b.cos_bins_sq
            })),
            Some(collect_hist(
                0.0,
                2.0 * core::f64::consts::PI,
                phi_bins,
                &|b| &b.phi_bins,
                &|b| &b.phi_bins_sq,
            )),
        )
    } else {
        (None, None)
    };
    let pair_correlation = if nchi > 0 {
        let h = collect_hist(0.0, 1.0, nchi, &|b| &b.chi_bins, &|b| &b.chi_bins_sq);
        // normalized to unit mass
        Some(if p > 0.0 { h.scaled(1.0 / p) } else { h })
    } else {
        None
    };

    Ok(PairIntegralResult {
        total_probability: Estimate {
            value: p,
            error: p_se,
            meta: meta(p_se),
        },
        mean_photon_energy: mean,
        total_energy: Estimate {
            value: etot,
            error: etot_se,
            meta: meta(etot_se),
        },
        angular_cos_theta,
        angular_phi,
        pair_correlation,
    })
}

const FINE_ANGLE_BINS: usize = 512;
const ANGLE_SPECTRUM_BINS: usize = 36;

/// Super-luminal emission rate by seeded importance sampling. The caller
/// guarantees `v > c`. Samples the reduced 4D integrand — one photon inside
/// the Cherenkov cone, partner magnitude solved from the constraint — in
/// the `(κ, μ, κ', φ)` variables, where the constraint Jacobian is smooth
/// (`dμ'/|c − vμ'| = dκ'/(vκ')`).
pub fn rate_mc(
    fs: &FactorizedMovingSpectrum,
    n0: f64,
    spec: &MonteCarloSpec,
) -> Result<RateReport, IntegrationError> {
    if spec.n_samples == 0 {
        return Err(IntegrationError::InvalidSpec(
            "n_samples must be positive".into(),
        ));
    }
    let c = 1.0 / n0;
    let v = fs.speed();
    let omega = fs.rate;
    let beta = c * c / (2.0 * omega * omega);
    let peak = fs.spatial_abs([0.0; 3]);
    let theta_kappa = omega / c;
    let mu_lo = c / v;
    let mu_range = 1.0 - mu_lo;
    let pref = 2.0 / (2.0 * core::f64::consts::PI).powi(4);

    let n = spec.n_samples;
    let n_blocks = n.div_ceil(MC_BLOCK);

    struct RateBlock {
        w: f64,
        w2: f64,
        fine: Vec<f64>,
        out: Vec<f64>,
    }

    let blocks: Vec<RateBlock> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * MC_BLOCK;
            let hi = ((b + 1) * MC_BLOCK).min(n);
            let fine_hist = Histogram::new(0.0, core::f64::consts::PI, FINE_ANGLE_BINS);
            let out_hist = Histogram::new(0.0, core::f64::consts::PI, ANGLE_SPECTRUM_BINS);
            let mut acc = RateBlock {
                w: 0.0,
                w2: 0.0,
                fine: vec![0.0; FINE_ANGLE_BINS],
                out: vec![0.0; ANGLE_SPECTRUM_BINS],
            };
            for i in lo..hi {
                let mut rng = SampleRng::new(spec.seed, i);
                let kappa = rng.gamma3(theta_kappa);
                let mu = mu_lo + mu_range * rng.uniform();
                let a = kappa * (v * mu - c);
                let kappa_p_lo = a / (c + v);
                let kappa_p = kappa_p_lo + rng.gamma3(theta_kappa);
                let phi = 2.0 * core::f64::consts::PI * rng.uniform();
                if a > 0.0 && kappa_p > kappa_p_lo {
                    let mu_p = (c - a / kappa_p) / v;
                    let s_mu = (1.0 - mu * mu).max(0.0).sqrt();
                    let s_mu_p = (1.0 - mu_p * mu_p).max(0.0).sqrt();
                    let ksum_sq = kappa * kappa
                        + kappa_p * kappa_p
                        + 2.0 * kappa * kappa_p * (mu * mu_p + s_mu * s_mu_p * phi.cos());
                    // |g̃(K)|² = peak² e^{-β K²}
                    let g_sq = peak * peak * (-beta * ksum_sq).exp();
                    let integrand =
                        kappa.powi(3) * kappa_p * kappa_p * (c * c / (v * n0.powi(6))) * g_sq;
                    let p_kappa =
                        kappa * kappa * (-kappa / theta_kappa).exp() / (2.0 * theta_kappa.powi(3));
                    let shifted = kappa_p - kappa_p_lo;
                    let p_kappa_p = shifted * shifted * (-shifted / theta_kappa).exp()
                        / (2.0 * theta_kappa.powi(3));
                    let density = p_kappa
                        * (1.0 / mu_range)
                        * p_kappa_p
                        * (1.0 / (2.0 * core::f64::consts::PI));
                    let w = pref * integrand / density;
                    acc.w += w;
                    acc.w2 += w * w;
                    for (theta, half) in [
                        (mu.clamp(-1.0, 1.0).acos(), 0.5 * w),
                        (mu_p.clamp(-1.0, 1.0).acos(), 0.5 * w),
                    ] {
                        if let Some(bin) = fine_hist.bin_index(theta) {
                            acc.fine[bin] += half;
                        }
                        if let Some(bin) = out_hist.bin_index(theta) {
                            acc.out[bin] += half;
                        }
                    }
                }
            }
            acc
        })
        .collect();

    let sum_w = pairwise_sum(&blocks.iter().map(|b| b.w).collect::<Vec<_>>());
    let sum_w2 = pairwise_sum(&blocks.iter().map(|b| b.w2).collect::<Vec<_>>());
    let (rate, se) = mc_mean_stderr(sum_w, sum_w2, n);

    let mut fine = Histogram::new(0.0, core::f64::consts::PI, FINE_ANGLE_BINS);
    for bin in 0..FINE_ANGLE_BINS {
        let vals: Vec<f64> = blocks.iter().map(|b| b.fine[bin]).collect();
        fine.weights[bin] = pairwise_sum(&vals) / n as f64;
    }
    let mut out = Histogram::new(0.0, core::f64::consts::PI, ANGLE_SPECTRUM_BINS);
    for bin in 0..ANGLE_SPECTRUM_BINS {
        let vals: Vec<f64> = blocks.iter().map(|b| b.out[bin]).collect();
        out.weights[bin] = pairwise_sum(&vals) / n as f64;
    }

    let meta = IntegratorMeta {
        method: "monte_carlo_importance".into(),
        evaluations: n,
        error_estimate: se,
        seed: Some(spec.seed),
    };
    Ok(RateReport {
        rate: ValueWithError {
            value: rate,
            error: se,
        },
        regime: "super_luminal".into(),
        reason: None,
        theta_max: Some(fine.quantile(0.9)),
        angle_spectrum: Some(out),
        integrator: meta,
    })
}
