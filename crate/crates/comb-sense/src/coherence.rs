//! Clock-coherence envelopes of the one- and two-tooth comb protocols.
//!
//! Each comb tooth imprints a phase λ τ_j n_a on the clock superposition;
//! thermal occupation noise makes that phase Gaussian with zero-mean
//! fluctuations (the deterministic mean phase is not modeled). For
//! Gaussian phase noise of variance σ² the coherent-state overlap gives
//!
//! ```text
//! C = exp[−2|α|² (1 − e^(−σ²/2))]          (exact closed form)
//! C = exp(−|α|² σ²)                         (weak-dephasing limit)
//! ```
//!
//! The weak form is the canonical convention: the dephasing exponent is
//! Γ_φ = |α|² σ², and every downstream formula is written against it.
//!
//! Phase variances for the two protocols:
//!
//! ```text
//! σ²_φ1 = (λ τ_j)² Var(n_a)
//! σ²_φ2 = λ² [ (τ1² + τ2²) Var(n_a) + 2 τ1 τ2 K(Δ) ]
//! ```
//!
//! so the two-tooth envelope factorizes as C2 = C1⁽¹⁾ C1⁽²⁾ ·
//! exp(−2|α|² λ² τ1 τ2 K): positive kernel correlations add dephasing, and
//! C2 → C1⁽¹⁾C1⁽²⁾ when the memory has died out. A finite probe coherence
//! time multiplies the two-tooth visibility by C_p(Δ)² = e^(−2 Γ_φ^p Δ).

use crate::error::{Error, Result};
use crate::kernels::KernelModel;
use crate::physics::{variance_with_derivative, AbsorberParams};

/// Envelope model selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Closed-form Gaussian average of the coherent-state overlap.
    Exact,
    /// Leading order in the phase variance, C = e^(−|α|²σ²).
    #[default]
    Weak,
}

/// Which comb tooth a single-tooth quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tooth {
    First,
    Second,
}

/// Equal-teeth coupling strength g = (λ τ)².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessCoupling {
    pub g: f64,
}

impl DimensionlessCoupling {
    pub fn new(g: f64) -> Result<Self> {
        if !g.is_finite() || g < 0.0 {
            return Err(Error::domain(format!(
                "dimensionless coupling g must be non-negative and finite, got {g}"
            )));
        }
        Ok(Self { g })
    }
}

/// Comb-protocol geometry and strengths. Delays and durations are in units
/// of τ0; λ is in 1/τ0 so all phases are dimensionless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombConfig {
    /// Dispersive coupling rate λ (1/τ0), ≥ 0.
    pub lambda: f64,
    /// First tooth duration (τ0), > 0.
    pub tau1: f64,
    /// Second tooth duration (τ0), > 0.
    pub tau2: f64,
    /// Mean photon number |α|² of the clock coherent state, > 0.
    pub alpha_sq: f64,
    /// Tooth separation Δ = t2 − t1 (τ0), ≥ 0.
    pub delta: f64,
}

impl CombConfig {
    /// Validates geometry; teeth must not overlap: τ1 + τ2 ≤ Δ when Δ > 0.
    pub fn new(lambda: f64, tau1: f64, tau2: f64, alpha_sq: f64, delta: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::domain(format!("coupling lambda must be >= 0 and finite, got {lambda}")));
        }
        for (name, v) in [("tau1", tau1), ("tau2", tau2), ("alpha_sq", alpha_sq)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !delta.is_finite() || delta < 0.0 {
            return Err(Error::domain(format!("delay must be non-negative and finite, got {delta}")));
        }
        if delta > 0.0 && tau1 + tau2 > delta {
            return Err(Error::domain(format!(
                "teeth overlap: tau1 + tau2 = {} exceeds delay {delta}",
                tau1 + tau2
            )));
        }
        Ok(Self { lambda, tau1, tau2, alpha_sq, delta })
    }

    /// Equal-teeth config realizing a given g = (λτ)² at delay Δ with |α|² = 1.
    ///
    /// Every envelope and Fisher-information quantity depends on the teeth
    /// only through g, so the materialized τ scale is arbitrary; it is chosen
    /// small enough that the non-overlap invariant holds for any Δ > 0.
    pub fn from_coupling(coupling: DimensionlessCoupling, delta: f64) -> Result<Self> {
        if !delta.is_finite() || delta < 0.0 {
            return Err(Error::domain(format!("delay must be non-negative and finite, got {delta}")));
        }
        let tau = if delta > 0.0 { (delta / 2.0).min(1e-6) } else { 1e-6 };
        Self::new(coupling.g.sqrt() / tau, tau, tau, 1.0, delta)
    }

    /// Same comb with a different clock photon number.
    pub fn with_photons(mut self, alpha_sq: f64) -> Result<Self> {
        if !alpha_sq.is_finite() || alpha_sq <= 0.0 {
            return Err(Error::domain(format!(
                "alpha_sq must be positive and finite, got {alpha_sq}"
            )));
        }
        self.alpha_sq = alpha_sq;
        Ok(self)
    }

    pub fn tooth_duration(&self, tooth: Tooth) -> f64 {
        match tooth {
            Tooth::First => self.tau1,
            Tooth::Second => self.tau2,
        }
    }
}

/// Markovian dephasing of the clock itself, rate Γ_φ^p in 1/τ0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeDephasing {
    pub gamma_p: f64,
}

impl ProbeDephasing {
    pub fn new(gamma_p: f64) -> Result<Self> {
        if !gamma_p.is_finite() || gamma_p < 0.0 {
            return Err(Error::domain(format!(
                "probe dephasing rate must be non-negative and finite, got {gamma_p}"
            )));
        }
        Ok(Self { gamma_p })
    }
}

/// Phase variance σ² and the canonical dephasing exponent Γ_φ = |α|²σ².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingExponent {
    pub sigma_sq: f64,
    pub gamma_phi: f64,
}

fn check_variance(variance: f64) -> Result<()> {
    if !variance.is_finite() || variance < 0.0 {
        return Err(Error::domain(format!(
            "occupation variance must be non-negative and finite, got {variance}"
        )));
    }
    Ok(())
}

/// Single-tooth phase variance σ²_φ1 = (λ τ_j)² Var(n_a).
pub fn phase_variance_one(cfg: &CombConfig, tooth: Tooth, variance: f64) -> Result<f64> {
    check_variance(variance)?;
    let lt = cfg.lambda * cfg.tooth_duration(tooth);
    Ok(lt * lt * variance)
}

/// Two-tooth phase variance σ²_φ2 = λ²[(τ1² + τ2²)Var + 2 τ1 τ2 K].
/// Requires |K| ≤ Var (Cauchy-Schwarz for the two-time covariance).
pub fn phase_variance_two(cfg: &CombConfig, variance: f64, kernel_value: f64) -> Result<f64> {
    check_variance(variance)?;
    if !kernel_value.is_finite() || kernel_value.abs() > variance * (1.0 + 1e-12) {
        return Err(Error::domain(format!(
            "kernel value {kernel_value} exceeds the variance bound {variance}"
        )));
    }
    let l2 = cfg.lambda * cfg.lambda;
    Ok(l2 * ((cfg.tau1 * cfg.tau1 + cfg.tau2 * cfg.tau2) * variance
        + 2.0 * cfg.tau1 * cfg.tau2 * kernel_value))
}

/// Coherence envelope for Gaussian phase noise of variance `sigma_sq`.
pub fn gaussian_envelope(sigma_sq: f64, alpha_sq: f64, regime: Regime) -> Result<f64> {
    if !sigma_sq.is_finite() || sigma_sq < 0.0 {
        return Err(Error::domain(format!(
            "phase variance must be non-negative and finite, got {sigma_sq}"
        )));
    }
    if !alpha_sq.is_finite() || alpha_sq <= 0.0 {
        return Err(Error::domain(format!(
            "mean photon number must be positive and finite, got {alpha_sq}"
        )));
    }
    Ok(match regime {
        Regime::Weak => (-alpha_sq * sigma_sq).exp(),
        Regime::Exact => (2.0 * alpha_sq * (-sigma_sq / 2.0).exp_m1()).exp(),
    })
}

/// σ²_φ1 and its temperature derivative under the absorber's variance mode.
pub fn sigma_sq_one_dt(
    cfg: &CombConfig,
    tooth: Tooth,
    absorber: &AbsorberParams,
    temperature: f64,
) -> Result<(f64, f64)> {
    let (var, dvar) = variance_with_derivative(absorber, temperature)?;
    let lt = cfg.lambda * cfg.tooth_duration(tooth);
    Ok((lt * lt * var, lt * lt * dvar))
}

/// σ²_φ2 and its temperature derivative; the kernel contributes through both
/// the variance prefactor and ∂_T K̃:
/// dσ²/dT = λ²[(τ1² + τ2²) Var' + 2 τ1 τ2 (K̃ Var' + Var ∂_T K̃)].
pub fn sigma_sq_two_dt(
    cfg: &CombConfig,
    absorber: &AbsorberParams,
    kernel: &KernelModel,
    temperature: f64,
) -> Result<(f64, f64)> {
    let (var, dvar) = variance_with_derivative(absorber, temperature)?;
    let k_tilde = kernel.normalized(cfg.delta, temperature)?;
    let dk_tilde = kernel.normalized_dt(cfg.delta, temperature)?;
    let l2 = cfg.lambda * cfg.lambda;
    let b = cfg.tau1 * cfg.tau1 + cfg.tau2 * cfg.tau2;
    let c = 2.0 * cfg.tau1 * cfg.tau2;
    let sigma = l2 * (b * var + c * k_tilde * var);
    let dsigma = l2 * (b * dvar + c * (k_tilde * dvar + var * dk_tilde));
    Ok((sigma, dsigma))
}

/// Dephasing exponent of one tooth at temperature T.
pub fn dephasing_exponent_one(
    cfg: &CombConfig,
    tooth: Tooth,
    absorber: &AbsorberParams,
    temperature: f64,
) -> Result<DephasingExponent> {
    let (s, _) = sigma_sq_one_dt(cfg, tooth, absorber, temperature)?;
    Ok(DephasingExponent { sigma_sq: s, gamma_phi: cfg.alpha_sq * s })
}

/// Dephasing exponent of the two-tooth protocol at temperature T.
pub fn dephasing_exponent_two(
    cfg: &CombConfig,
    absorber: &AbsorberParams,
    kernel: &KernelModel,
    temperature: f64,
) -> Result<DephasingExponent> {
    let (s, _) = sigma_sq_two_dt(cfg, absorber, kernel, temperature)?;
    Ok(DephasingExponent { sigma_sq: s, gamma_phi: cfg.alpha_sq * s })
}

/// Γ_φ2 and dΓ_φ2/dT, the analytic chain through n̄_a and K̃.
pub fn dephasing_exponent_two_dt(
    cfg: &CombConfig,
    absorber: &AbsorberParams,
    kernel: &KernelModel,
    temperature: f64,
) -> Result<(f64, f64)> {
    let (s, ds) = sigma_sq_two_dt(cfg, absorber, kernel, temperature)?;
    Ok((cfg.alpha_sq * s, cfg.alpha_sq * ds))
}

fn envelope_with_dt(sigma_sq: f64, dsigma_sq: f64, alpha_sq: f64, regime: Regime) -> (f64, f64) {
    match regime {
        Regime::Weak => {
            let c = (-alpha_sq * sigma_sq).exp();
            (c, -alpha_sq * c * dsigma_sq)
        }
        Regime::Exact => {
            let c = (2.0 * alpha_sq * (-sigma_sq / 2.0).exp_m1()).exp();
            (c, -alpha_sq * c * (-sigma_sq / 2.0).exp() * dsigma_sq)
        }
    }
}

/// Single-tooth coherence C1 = envelope((λτ_j)² Var).
pub fn coherence_one(
    cfg: &CombConfig,
    tooth: Tooth,
    absorber: &AbsorberParams,
    temperature: f64,
    regime: Regime,
) -> Result<f64> {
    coherence_one_dt(cfg, tooth, absorber, temperature, regime).map(|(c, _)| c)
}

/// C1 and its analytic temperature derivative.
pub fn coherence_one_dt(
    cfg: &CombConfig,
    tooth: Tooth,
    absorber: &AbsorberParams,
    temperature: f64,
    regime: Regime,
) -> Result<(f64, f64)> {
    let (s, ds) = sigma_sq_one_dt(cfg, tooth, absorber, temperature)?;
    Ok(envelope_with_dt(s, ds, cfg.alpha_sq, regime))
}

/// Two-tooth coherence C2 = envelope(σ²_φ2).
pub fn coherence_two(
    cfg: &CombConfig,
    absorber: &AbsorberParams,
    kernel: &KernelModel,
    temperature: f64,
    regime: Regime,
) -> Result<f64> {
    coherence_two_dt(cfg, absorber, kernel, temperature, regime).map(|(c, _)| c)
}

/// C2 and its analytic temperature derivative.
pub fn coherence_two_dt(
    cfg: &CombConfig,
    absorber: &AbsorberParams,
    kernel: &KernelModel,
    temperature: f64,
    regime: Regime,
) -> Result<(f64, f64)> {
    let (s, ds) = sigma_sq_two_dt(cfg, absorber, kernel, temperature)?;
    Ok(envelope_with_dt(s, ds, cfg.alpha_sq, regime))
}

/// Probe coherence C_p(Δ) = e^(−Γ_φ^p Δ).
pub fn probe_envelope(probe: &ProbeDephasing, delta: f64) -> Result<f64> {
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::domain(format!("delay must be non-negative and finite, got {delta}")));
    }
    Ok((-probe.gamma_p * delta).exp())
}

/// Full two-tooth visibility C_p(Δ)² · C2: the probe dephases during the
/// whole delay on both interferometer arms.
pub fn coherence_two_full(
    cfg: &CombConfig,
    absorber: &AbsorberParams,
    kernel: &KernelModel,
    probe: &ProbeDephasing,
    temperature: f64,
    regime: Regime,
) -> Result<f64> {
    coherence_two_full_dt(cfg, absorber, kernel, probe, temperature, regime).map(|(c, _)| c)
}

/// C_p²C2 and its temperature derivative (the probe factor carries none).
pub fn coherence_two_full_dt(
    cfg: &CombConfig,
    absorber: &AbsorberParams,
    kernel: &KernelModel,
    probe: &ProbeDephasing,
    temperature: f64,
    regime: Regime,
) -> Result<(f64, f64)> {
    let cp = probe_envelope(probe, cfg.delta)?;
    let (c2, dc2) = coherence_two_dt(cfg, absorber, kernel, temperature, regime)?;
    Ok((cp * cp * c2, cp * cp * dc2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::CorrelationTimeModel;
    use crate::physics::{thermal_occupation, VarianceMode};
    use crate::testutil::assert_close;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn absorber() -> AbsorberParams {
        AbsorberParams::default()
    }

    fn crossover() -> KernelModel {
        KernelModel::lorentzian_crossover(CorrelationTimeModel::default())
    }

    #[test]
    fn envelope_reference_values() {
        // σ² = 0.1, |α|² = 1: the exact form exceeds the weak form by less
        // than σ⁴/2.
        let exact = gaussian_envelope(0.1, 1.0, Regime::Exact).unwrap();
        let weak = gaussian_envelope(0.1, 1.0, Regime::Weak).unwrap();
        assert_close(exact, 0.907_065_014_156_675, 0.0, 1e-12);
        assert_close(weak, 0.9048374180359595, 0.0, 1e-12);
        assert!(exact > weak);
        assert!(exact - weak < 0.1f64.powi(2) / 2.0);
    }

    #[test]
    fn single_tooth_reference_value() {
        // g = 0.05 at 20 mK: C1 = e^(−g n̄).
        let cfg = CombConfig::from_coupling(DimensionlessCoupling::new(0.05).unwrap(), 1.0).unwrap();
        let c1 = coherence_one(&cfg, Tooth::First, &absorber(), 0.020, Regime::Weak).unwrap();
        let n = thermal_occupation(&absorber(), 0.020).unwrap();
        assert_close(c1, (-0.05 * n).exp(), 0.0, 1e-12);
        assert_close(c1, 0.99502, 5e-6, 0.0);
    }

    #[test]
    fn two_tooth_factorizes_in_weak_regime() {
        let cfg = CombConfig::new(0.11, 0.4, 0.6, 1.3, 2.0).unwrap();
        let a = absorber();
        let kernel = crossover();
        let t = 0.025;
        let c2 = coherence_two(&cfg, &a, &kernel, t, Regime::Weak).unwrap();
        let c11 = coherence_one(&cfg, Tooth::First, &a, t, Regime::Weak).unwrap();
        let c12 = coherence_one(&cfg, Tooth::Second, &a, t, Regime::Weak).unwrap();
        let n = thermal_occupation(&a, t).unwrap();
        let k = kernel.evaluate(cfg.delta, t, n).unwrap();
        let cross = (-2.0 * cfg.alpha_sq * cfg.lambda * cfg.lambda * cfg.tau1 * cfg.tau2 * k).exp();
        assert_close(c2, c11 * c12 * cross, 0.0, 1e-14);
        // Positive correlations add dephasing.
        assert!(c2 < c11 * c12);
    }

    #[test]
    fn markovian_reduction_at_dead_memory() {
        // K̃ < 1e−12 leaves the product form intact to 1e−10.
        let cfg = CombConfig::from_coupling(DimensionlessCoupling::new(0.05).unwrap(), 90.0).unwrap();
        let a = absorber();
        let kernel = crossover();
        let t = 0.030; // τ_c ≈ 0.235, so K̃(90) is utterly dead
        assert!(kernel.normalized(cfg.delta, t).unwrap() < 1e-12);
        let c2 = coherence_two(&cfg, &a, &kernel, t, Regime::Weak).unwrap();
        let c11 = coherence_one(&cfg, Tooth::First, &a, t, Regime::Weak).unwrap();
        let c12 = coherence_one(&cfg, Tooth::Second, &a, t, Regime::Weak).unwrap();
        assert!((c2 / (c11 * c12) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn coupling_scale_invariance() {
        // Two materializations of the same g must give identical envelopes.
        let g = DimensionlessCoupling::new(0.05).unwrap();
        let delta = 0.5;
        let auto = CombConfig::from_coupling(g, delta).unwrap();
        let manual = CombConfig::new(0.05f64.sqrt() / 0.2, 0.2, 0.2, 1.0, delta).unwrap();
        let a = absorber();
        let kernel = crossover();
        for regime in [Regime::Weak, Regime::Exact] {
            let c_auto = coherence_two(&auto, &a, &kernel, 0.030, regime).unwrap();
            let c_manual = coherence_two(&manual, &a, &kernel, 0.030, regime).unwrap();
            assert_close(c_auto, c_manual, 0.0, 1e-13);
        }
    }

    #[test]
    fn probe_envelope_and_full_visibility() {
        let probe = ProbeDephasing::new(0.05).unwrap();
        assert_eq!(probe_envelope(&probe, 0.0).unwrap(), 1.0);
        assert_close(probe_envelope(&probe, 10.0).unwrap(), (-0.5f64).exp(), 0.0, 1e-15);

        let cfg = CombConfig::from_coupling(DimensionlessCoupling::new(0.05).unwrap(), 10.0).unwrap();
        let a = absorber();
        let kernel = crossover();
        let full =
            coherence_two_full(&cfg, &a, &kernel, &probe, 0.020, Regime::Weak).unwrap();
        let bare = coherence_two(&cfg, &a, &kernel, 0.020, Regime::Weak).unwrap();
        let cp = probe_envelope(&probe, 10.0).unwrap();
        assert_close(full, cp * cp * bare, 0.0, 1e-15);
        // Γ_p = 0 is a no-op.
        let idle = ProbeDephasing::new(0.0).unwrap();
        let same = coherence_two_full(&cfg, &a, &kernel, &idle, 0.020, Regime::Weak).unwrap();
        assert_eq!(same, bare);
    }

    #[test]
    fn analytic_derivatives_match_finite_differences() {
        let a = absorber();
        let kernel = crossover();
        let ct = CorrelationTimeModel::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let t = rng.random_range(0.010..0.050);
            let u = 10f64.powf(rng.random_range(-2.0..0.699));
            let delta = u * ct.evaluate(t).unwrap();
            let cfg =
                CombConfig::from_coupling(DimensionlessCoupling::new(0.05).unwrap(), delta).unwrap();
            let h = (1e-6f64).max(1e-6 * t);
            for regime in [Regime::Weak, Regime::Exact] {
                let (_, dc1) = coherence_one_dt(&cfg, Tooth::First, &a, t, regime).unwrap();
                let fd1 = (coherence_one(&cfg, Tooth::First, &a, t + h, regime).unwrap()
                    - coherence_one(&cfg, Tooth::First, &a, t - h, regime).unwrap())
                    / (2.0 * h);
                assert_close(dc1, fd1, 0.0, 1e-6);

                let (_, dc2) = coherence_two_dt(&cfg, &a, &kernel, t, regime).unwrap();
                let fd2 = (coherence_two(&cfg, &a, &kernel, t + h, regime).unwrap()
                    - coherence_two(&cfg, &a, &kernel, t - h, regime).unwrap())
                    / (2.0 * h);
                assert_close(dc2, fd2, 0.0, 1e-6);
            }
            let (_, dg) = dephasing_exponent_two_dt(&cfg, &a, &kernel, t).unwrap();
            let gp = dephasing_exponent_two(&cfg, &a, &kernel, t + h).unwrap().gamma_phi;
            let gm = dephasing_exponent_two(&cfg, &a, &kernel, t - h).unwrap().gamma_phi;
            assert_close(dg, (gp - gm) / (2.0 * h), 0.0, 1e-6);
        }
    }

    #[test]
    fn exact_variance_mode_changes_exponent() {
        let mut a = absorber();
        let cfg = CombConfig::from_coupling(DimensionlessCoupling::new(0.05).unwrap(), 1.0).unwrap();
        let t = 0.030;
        let weak_g = dephasing_exponent_one(&cfg, Tooth::First, &a, t).unwrap().gamma_phi;
        a.variance_mode = VarianceMode::Exact;
        let exact_g = dephasing_exponent_one(&cfg, Tooth::First, &a, t).unwrap().gamma_phi;
        let n = thermal_occupation(&a, t).unwrap();
        assert_close(exact_g / weak_g, 1.0 + n, 0.0, 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

        #[test]
        fn envelope_ordering_and_range(sigma_sq in 0.0f64..10.0, alpha_sq in 0.05f64..4.0) {
            let weak = gaussian_envelope(sigma_sq, alpha_sq, Regime::Weak).unwrap();
            let exact = gaussian_envelope(sigma_sq, alpha_sq, Regime::Exact).unwrap();
            prop_assert!(weak > 0.0 && weak <= 1.0);
            prop_assert!(exact > 0.0 && exact <= 1.0);
            prop_assert!(exact >= weak);
            if sigma_sq == 0.0 {
                prop_assert_eq!(weak, 1.0);
                prop_assert_eq!(exact, 1.0);
            } else {
                prop_assert!(exact < 1.0);
            }
        }

        #[test]
        fn two_tooth_never_exceeds_product(
            lambda in 0.01f64..0.5,
            tau1 in 0.05f64..0.5,
            tau2 in 0.05f64..0.5,
            var in 0.01f64..2.0,
            corr in 0.0f64..1.0,
        ) {
            let cfg = CombConfig::new(lambda, tau1, tau2, 1.0, 2.0).unwrap();
            let k = corr * var;
            let s2 = phase_variance_two(&cfg, var, k).unwrap();
            let s11 = phase_variance_one(&cfg, Tooth::First, var).unwrap();
            let s12 = phase_variance_one(&cfg, Tooth::Second, var).unwrap();
            let c2 = gaussian_envelope(s2, 1.0, Regime::Weak).unwrap();
            let product = gaussian_envelope(s11, 1.0, Regime::Weak).unwrap()
                * gaussian_envelope(s12, 1.0, Regime::Weak).unwrap();
            prop_assert!(c2 <= product * (1.0 + 1e-12));
            if k == 0.0 {
                prop_assert!((c2 - product).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn rejects_invalid_configurations() {
        // Overlapping teeth.
        assert!(CombConfig::new(0.5, 3.0, 3.0, 1.0, 1e-3).is_err());
        // Coincident teeth at Δ = 0 are allowed (perfectly correlated limit).
        assert!(CombConfig::new(0.5, 3.0, 3.0, 1.0, 0.0).is_ok());
        assert!(CombConfig::new(-0.1, 1.0, 1.0, 1.0, 3.0).is_err());
        assert!(CombConfig::new(0.5, 0.0, 1.0, 1.0, 3.0).is_err());
        assert!(CombConfig::new(0.5, 1.0, 1.0, 0.0, 3.0).is_err());
        assert!(DimensionlessCoupling::new(-0.05).is_err());
        assert!(ProbeDephasing::new(-1.0).is_err());
        // Kernel value above the variance bound.
        let cfg = CombConfig::new(0.5, 1.0, 1.0, 1.0, 3.0).unwrap();
        assert!(phase_variance_two(&cfg, 0.5, 0.6).is_err());
        assert!(phase_variance_two(&cfg, 0.5, -0.6).is_err());
        assert!(gaussian_envelope(-0.1, 1.0, Regime::Weak).is_err());
    }
}
