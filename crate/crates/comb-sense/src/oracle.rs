//! Stochastic validation oracle for the analytic envelope formulas.
//!
//! The analytic results rest on one modeling step: the accumulated comb
//! phase φ = λ(τ1 δn1 + τ2 δn2) is a zero-mean Gaussian whose second
//! moments are set by the occupation variance and the two-time kernel. This
//! module re-derives the observables by brute force — draw correlated
//! occupation fluctuations, accumulate phases, estimate moments — sharing
//! no formulas with the analytic path beyond that model statement.
//!
//! Draws are *counter-based*: sample `i` uses an RNG stream derived from
//! (seed, i), so results are bit-identical for any thread count or
//! evaluation order, and adding samples never reshuffles earlier ones.
//!
//! Standard errors come from leave-one-out jackknife in an O(N) closed
//! form, propagated through the exponential for the coherence estimate, so
//! every comparison with an analytic value carries an honest z-score.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::coherence::{CombConfig, DimensionlessCoupling};
use crate::error::{Error, Result};
use crate::kernels::{CorrelationTimeModel, KernelModel};
use crate::physics::{thermal_occupation, AbsorberParams};

/// Monte Carlo run parameters.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    /// Number of samples; at least 1000 for the jackknife to be meaningful.
    pub n_samples: usize,
    pub seed: u64,
    /// The coherence estimator only certifies the weak-dephasing formula;
    /// runs with an analytic Γ_φ2 at or above this guard are refused.
    #[serde(default = "default_regime_guard")]
    pub regime_guard: f64,
}

fn default_regime_guard() -> f64 {
    0.02
}

impl OracleConfig {
    pub fn new(n_samples: usize, seed: u64) -> Result<Self> {
        let cfg = Self { n_samples, seed, regime_guard: default_regime_guard() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples < 1000 {
            return Err(Error::domain(format!(
                "the oracle needs at least 1000 samples, got {}",
                self.n_samples
            )));
        }
        if !self.regime_guard.is_finite() || self.regime_guard <= 0.0 {
            return Err(Error::domain(format!(
                "regime guard must be positive and finite, got {}",
                self.regime_guard
            )));
        }
        Ok(())
    }
}

/// A Monte Carlo estimate with its jackknife standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
}

impl OracleEstimate {
    /// Standardized deviation of `reference` from the estimate.
    pub fn z_score(&self, reference: f64) -> f64 {
        (self.mean - reference) / self.std_error
    }

    /// Whether `reference` lies within `n_sigma` standard errors.
    pub fn within(&self, reference: f64, n_sigma: f64) -> bool {
        self.z_score(reference).abs() <= n_sigma
    }
}

/// One draw of correlated occupation fluctuations (δn1, δn2) with
/// Var(δn) = `variance` and Cov(δn1, δn2) = `kernel_value`.
pub fn sample_pair<R: rand::Rng + ?Sized>(
    variance: f64,
    kernel_value: f64,
    rng: &mut R,
) -> Result<(f64, f64)> {
    if !variance.is_finite() || variance < 0.0 {
        return Err(Error::domain(format!(
            "occupation variance must be non-negative and finite, got {variance}"
        )));
    }
    if !kernel_value.is_finite() || kernel_value.abs() > variance * (1.0 + 1e-12) {
        return Err(Error::domain(format!(
            "kernel value {kernel_value} exceeds the variance bound {variance}"
        )));
    }
    if variance == 0.0 {
        return Ok((0.0, 0.0));
    }
    let rho = (kernel_value / variance).clamp(-1.0, 1.0);
    let sd = variance.sqrt();
    let z1: f64 = StandardNormal.sample(rng);
    let z2: f64 = StandardNormal.sample(rng);
    Ok((sd * z1, sd * (rho * z1 + (1.0 - rho * rho).sqrt() * z2)))
}

/// Accumulated two-tooth phases, one per counter-based stream.
fn phase_samples(
    cfg: &CombConfig,
    variance: f64,
    kernel_value: f64,
    oracle: &OracleConfig,
) -> Result<Vec<f64>> {
    oracle.validate()?;
    // Validate moments once up front; per-sample calls can then only fail
    // on logic errors.
    {
        let mut probe = ChaCha8Rng::seed_from_u64(oracle.seed);
        sample_pair(variance, kernel_value, &mut probe)?;
    }
    let (lambda, tau1, tau2) = (cfg.lambda, cfg.tau1, cfg.tau2);
    Ok((0..oracle.n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(oracle.seed);
            rng.set_stream(i as u64);
            let (dn1, dn2) =
                sample_pair(variance, kernel_value, &mut rng).expect("moments pre-validated");
            lambda * (tau1 * dn1 + tau2 * dn2)
        })
        .collect())
}

/// Sample variance and the O(N) leave-one-out machinery shared by both
/// estimators: returns (s², S = Σd², mean-free deviations d).
fn variance_parts(samples: &[f64]) -> (f64, f64, Vec<f64>) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let d: Vec<f64> = samples.iter().map(|x| x - mean).collect();
    let s: f64 = d.iter().map(|d| d * d).sum();
    (s / (n - 1.0), s, d)
}

/// Leave-one-out sample variances v_(i) = (S − N d_i²/(N−1)) / (N−2).
fn leave_one_out_variances(s: f64, d: &[f64]) -> Vec<f64> {
    let n = d.len() as f64;
    d.iter().map(|di| (s - n * di * di / (n - 1.0)) / (n - 2.0)).collect()
}

/// Jackknife standard error of a statistic from its leave-one-out values.
fn jackknife_std_error(loo: &[f64]) -> f64 {
    let n = loo.len() as f64;
    let mean = loo.iter().sum::<f64>() / n;
    let ss: f64 = loo.iter().map(|v| (v - mean) * (v - mean)).sum();
    ((n - 1.0) / n * ss).sqrt()
}

/// Monte Carlo estimate of the two-tooth phase variance σ²_φ2.
///
/// The estimator is the unbiased sample variance; it certifies the moment
/// algebra σ²_φ2 = λ²[(τ1²+τ2²)Var + 2τ1τ2 K] at any dephasing strength.
pub fn mc_phase_variance(
    cfg: &CombConfig,
    variance: f64,
    kernel_value: f64,
    oracle: &OracleConfig,
) -> Result<OracleEstimate> {
    let phases = phase_samples(cfg, variance, kernel_value, oracle)?;
    let (s_sq, s, d) = variance_parts(&phases);
    let loo = leave_one_out_variances(s, &d);
    Ok(OracleEstimate {
        mean: s_sq,
        std_error: jackknife_std_error(&loo),
        n_samples: phases.len(),
    })
}

/// Monte Carlo estimate of the weak-regime two-tooth coherence
/// C2 = exp(−|α|² σ̂²_φ2), with the jackknife propagated through the
/// exponential.
///
/// Refuses with [`Error::OutOfRegime`] when the analytic exponent reaches
/// the configured guard: beyond it the weak formula itself — the thing
/// being certified — no longer represents the model.
pub fn mc_coherence_two(
    cfg: &CombConfig,
    variance: f64,
    kernel_value: f64,
    oracle: &OracleConfig,
) -> Result<OracleEstimate> {
    let gamma_phi = cfg.alpha_sq
        * cfg.lambda
        * cfg.lambda
        * ((cfg.tau1 * cfg.tau1 + cfg.tau2 * cfg.tau2) * variance
            + 2.0 * cfg.tau1 * cfg.tau2 * kernel_value);
    if gamma_phi >= oracle.regime_guard {
        return Err(Error::OutOfRegime { gamma_phi, guard: oracle.regime_guard });
    }
    let phases = phase_samples(cfg, variance, kernel_value, oracle)?;
    let (s_sq, s, d) = variance_parts(&phases);
    let loo = leave_one_out_variances(s, &d);
    let loo_c: Vec<f64> = loo.iter().map(|v| (-cfg.alpha_sq * v).exp()).collect();
    Ok(OracleEstimate {
        mean: (-cfg.alpha_sq * s_sq).exp(),
        std_error: jackknife_std_error(&loo_c),
        n_samples: phases.len(),
    })
}

/// One point of the standard validation matrix.
#[derive(Debug, Clone)]
pub struct ValidationPoint {
    pub label: String,
    pub kernel: KernelModel,
    /// Temperature (K).
    pub temperature: f64,
    /// Tooth delay (τ0).
    pub delta: f64,
}

/// The standard 20-point validation matrix: every kernel family crossed
/// with cold-to-warm temperatures and sub- to super-memory delays, all
/// inside the weak-dephasing guard at g = 0.05.
pub fn standard_validation_points() -> Vec<ValidationPoint> {
    let mut points = Vec::new();
    let ct = CorrelationTimeModel::default();
    for &t in &[0.010, 0.013, 0.016, 0.019] {
        let tau_c = ct.evaluate(t).expect("valid temperature");
        for (tag, delta) in [("half", 0.5 * tau_c), ("double", 2.0 * tau_c)] {
            points.push(ValidationPoint {
                label: format!("crossover-{}mK-{tag}-tau_c", (t * 1e3).round()),
                kernel: KernelModel::lorentzian_crossover(ct),
                temperature: t,
                delta,
            });
        }
    }
    for &t in &[0.010f64, 0.016, 0.019] {
        for &delta in &[5e-4, 2e-3] {
            points.push(ValidationPoint {
                label: format!("white-{}mK-delta-{delta}", (t * 1e3).round()),
                kernel: KernelModel::gaussian_white(1e-3).expect("valid width"),
                temperature: t,
                delta,
            });
        }
    }
    for &t in &[0.010f64, 0.016, 0.019] {
        for &delta in &[0.1, 10.0] {
            points.push(ValidationPoint {
                label: format!("one-over-f-{}mK-delta-{delta}", (t * 1e3).round()),
                kernel: KernelModel::one_over_f(0.1, 0.6).expect("valid knee"),
                temperature: t,
                delta,
            });
        }
    }
    points
}

/// Outcome of checking one analytic coherence value against the oracle.
#[derive(Debug, Clone)]
pub struct ValidationOutcome {
    pub label: String,
    pub analytic: f64,
    pub estimate: OracleEstimate,
    pub z: f64,
    pub pass: bool,
}

/// Runs the oracle at one validation point and scores the weak-regime
/// analytic coherence against it (pass: |z| ≤ 3).
pub fn validate_point(
    point: &ValidationPoint,
    coupling: DimensionlessCoupling,
    absorber: &AbsorberParams,
    oracle: &OracleConfig,
) -> Result<ValidationOutcome> {
    let cfg = CombConfig::from_coupling(coupling, point.delta)?;
    let n_bar = thermal_occupation(absorber, point.temperature)?;
    let variance = crate::physics::occupation_variance(n_bar, absorber.variance_mode)?;
    let kernel_value = point.kernel.evaluate(point.delta, point.temperature, variance)?;
    let analytic =
        crate::coherence::coherence_two(&cfg, absorber, &point.kernel, point.temperature, crate::coherence::Regime::Weak)?;
    let estimate = mc_coherence_two(&cfg, variance, kernel_value, oracle)?;
    let z = estimate.z_score(analytic);
    Ok(ValidationOutcome { label: point.label.clone(), analytic, estimate, z, pass: z.abs() <= 3.0 })
}
