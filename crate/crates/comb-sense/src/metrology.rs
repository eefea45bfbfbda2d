//! Temperature estimation: quantum Fisher information of the comb readouts
//! and the two-tooth memory-efficiency ratio.
//!
//! A dephasing channel C(T) measured through a coherent clock carries
//! temperature information
//!
//! ```text
//! F(T) = (∂_T C)² / (1 − C²)          (radial Fisher information)
//! ```
//!
//! which in the weak-dephasing limit C = e^(−Γ), Γ ≪ 1 reduces to the
//! canonical first-order form
//!
//! ```text
//! F(T) = (∂_T Γ)² / (2 Γ).
//! ```
//!
//! [`Regime::Weak`] uses the first-order form on Γ_φ = |α|²σ²;
//! [`Regime::Exact`] applies the radial expression to the exact envelope.
//!
//! The memory efficiency A = F2 / (F1⁽¹⁾ + F1⁽²⁾) compares one two-tooth
//! interrogation against the two single-tooth interrogations it replaces.
//! For equal teeth in the weak regime it decomposes exactly into
//!
//! ```text
//! A = (1 + K̃) (1 + S_K̃ / S_n̄)²,
//! S_n̄ = ∂_T n̄ / n̄,    S_K̃ = ∂_T K̃ / (1 + K̃),
//! ```
//!
//! a variance gain times a responsivity factor: memory helps (A > 1) when
//! the kernel's own temperature response reinforces the occupation's, and
//! hurts (A < 1) when ∂_T K̃ < 0 cancels it.

use crate::coherence::{
    coherence_one_dt, coherence_two_dt, dephasing_exponent_two_dt, probe_envelope, sigma_sq_one_dt,
    CombConfig, ProbeDephasing, Regime, Tooth,
};
use crate::error::{Error, Result};
use crate::kernels::KernelModel;
use crate::physics::{occupation_derivative, thermal_occupation, AbsorberParams, DerivativeMode};

/// Radial Fisher information (∂_T C)²/(1 − C²) of a coherence readout.
///
/// Fails with [`Error::SingularCoherence`] outside 0 < C < 1, where the
/// expression is undefined or the channel carries no phase information.
pub fn qfi_from_coherence(coherence: f64, dcoherence_dt: f64) -> Result<f64> {
    if !(coherence > 0.0 && coherence < 1.0) {
        return Err(Error::SingularCoherence { value: coherence });
    }
    if !dcoherence_dt.is_finite() {
        return Err(Error::domain(format!(
            "coherence derivative must be finite, got {dcoherence_dt}"
        )));
    }
    Ok(dcoherence_dt * dcoherence_dt / (1.0 - coherence * coherence))
}

/// First-order Fisher information (∂_T Γ)²/(2Γ) of a weak dephasing exponent.
/// Γ = 0 (an uncoupled tooth) carries no information and returns 0.
fn qfi_weak_exponent(gamma: f64, dgamma_dt: f64) -> Result<f64> {
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::domain(format!(
            "dephasing exponent must be non-negative and finite, got {gamma}"
        )));
    }
    if gamma == 0.0 {
        return Ok(0.0);
    }
    Ok(dgamma_dt * dgamma_dt / (2.0 * gamma))
}

/// QFI of one single-tooth interrogation.
pub fn qfi_one(
    cfg: &CombConfig,
    tooth: Tooth,
    absorber: &AbsorberParams,
    temperature: f64,
    regime: Regime,
) -> Result<f64> {
    match regime {
        Regime::Weak => {
            let (s, ds) = sigma_sq_one_dt(cfg, tooth, absorber, temperature)?;
            qfi_weak_exponent(cfg.alpha_sq * s, cfg.alpha_sq * ds)
        }
        Regime::Exact => {
            let (c, dc) = coherence_one_dt(cfg, tooth, absorber, temperature, regime)?;
            if c == 1.0 && dc == 0.0 {
                return Ok(0.0);
            }
            qfi_from_coherence(c, dc)
        }
    }
}

/// QFI of the two-tooth interrogation (no probe decoherence).
pub fn qfi_two(
    cfg: &CombConfig,
    absorber: &AbsorberParams,
    kernel: &KernelModel,
    temperature: f64,
    regime: Regime,
) -> Result<f64> {
    match regime {
        Regime::Weak => {
            let (g, dg) = dephasing_exponent_two_dt(cfg, absorber, kernel, temperature)?;
            qfi_weak_exponent(g, dg)
        }
        Regime::Exact => {
            let (c, dc) = coherence_two_dt(cfg, absorber, kernel, temperature, regime)?;
            if c == 1.0 && dc == 0.0 {
                return Ok(0.0);
            }
            qfi_from_coherence(c, dc)
        }
    }
}

/// QFI of the two-tooth interrogation with probe dephasing at rate Γ_φ^p.
///
/// The probe factor C_p(Δ)² carries no temperature information but degrades
/// the visibility, so it only ever reduces the extractable information:
/// in the weak regime F = (∂_T Γ_φ2)² / (2 (Γ_φ2 + 2 Γ_φ^p Δ)).
pub fn qfi_two_full(
    cfg: &CombConfig,
    absorber: &AbsorberParams,
    kernel: &KernelModel,
    probe: &ProbeDephasing,
    temperature: f64,
    regime: Regime,
) -> Result<f64> {
    match regime {
        Regime::Weak => {
            let (g, dg) = dephasing_exponent_two_dt(cfg, absorber, kernel, temperature)?;
            let total = g + 2.0 * probe.gamma_p * cfg.delta;
            if total == 0.0 {
                return Ok(0.0);
            }
            if g == 0.0 {
                return Ok(0.0);
            }
            Ok(dg * dg / (2.0 * total))
        }
        Regime::Exact => {
            let cp = probe_envelope(probe, cfg.delta)?;
            let (c2, dc2) = coherence_two_dt(cfg, absorber, kernel, temperature, regime)?;
            let (c, dc) = (cp * cp * c2, cp * cp * dc2);
            if c == 1.0 && dc == 0.0 {
                return Ok(0.0);
            }
            qfi_from_coherence(c, dc)
        }
    }
}

/// Memory efficiency A = F2 / (F1⁽¹⁾ + F1⁽²⁾).
pub fn memory_efficiency(
    cfg: &CombConfig,
    absorber: &AbsorberParams,
    kernel: &KernelModel,
    temperature: f64,
    regime: Regime,
) -> Result<f64> {
    let f2 = qfi_two(cfg, absorber, kernel, temperature, regime)?;
    let f11 = qfi_one(cfg, Tooth::First, absorber, temperature, regime)?;
    let f12 = qfi_one(cfg, Tooth::Second, absorber, temperature, regime)?;
    let denom = f11 + f12;
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::domain(format!(
            "single-tooth information vanishes at T = {temperature}; the efficiency ratio is undefined"
        )));
    }
    Ok(f2 / denom)
}

/// The equal-teeth weak-regime decomposition of the memory efficiency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecomposedEfficiency {
    /// 1 + K̃: the phase-variance gain from correlated teeth.
    pub variance_gain: f64,
    /// Relative occupation responsivity S_n̄ = ∂_T n̄ / n̄.
    pub s_nbar: f64,
    /// Relative kernel responsivity S_K̃ = ∂_T K̃ / (1 + K̃).
    pub s_kernel: f64,
    /// (1 + S_K̃/S_n̄)²: interference of the two temperature responses.
    pub responsivity_factor: f64,
    /// The product (1 + K̃)(1 + S_K̃/S_n̄)².
    pub advantage: f64,
}

/// Evaluates A ≈ (1 + K̃)(1 + S_K̃/S_n̄)² from raw occupation and kernel data.
///
/// Exact for equal teeth in the weak regime with Var(n_a) ≈ n̄; elsewhere it
/// is the leading-order diagnostic of *why* the efficiency deviates from 1.
pub fn decomposed_efficiency(
    n_bar: f64,
    dn_bar_dt: f64,
    k_tilde: f64,
    dk_tilde_dt: f64,
) -> Result<DecomposedEfficiency> {
    if n_bar <= 0.0 || !n_bar.is_finite() {
        return Err(Error::domain(format!(
            "mean occupation must be positive and finite, got {n_bar}"
        )));
    }
    if dn_bar_dt == 0.0 {
        return Err(Error::domain(
            "occupation responsivity vanishes; the decomposition is undefined".to_string(),
        ));
    }
    let variance_gain = 1.0 + k_tilde;
    let s_nbar = dn_bar_dt / n_bar;
    let s_kernel = dk_tilde_dt / variance_gain;
    let ratio = 1.0 + s_kernel / s_nbar;
    let responsivity_factor = ratio * ratio;
    Ok(DecomposedEfficiency {
        variance_gain,
        s_nbar,
        s_kernel,
        responsivity_factor,
        advantage: variance_gain * responsivity_factor,
    })
}

/// Everything the efficiency maps report at one (T, Δ) point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiBreakdown {
    pub n_bar: f64,
    pub dn_bar_dt: f64,
    pub k_tilde: f64,
    pub dk_tilde_dt: f64,
    pub f1_tooth1: f64,
    pub f1_tooth2: f64,
    pub f2: f64,
    /// F2 / (F1⁽¹⁾ + F1⁽²⁾) from the Fisher informations above.
    pub advantage: f64,
    /// The equal-teeth weak-regime decomposition at the same point.
    pub approx: DecomposedEfficiency,
}

/// Full per-point report: Fisher informations, the efficiency ratio, and its
/// decomposition.
pub fn qfi_breakdown(
    cfg: &CombConfig,
    absorber: &AbsorberParams,
    kernel: &KernelModel,
    temperature: f64,
    regime: Regime,
) -> Result<QfiBreakdown> {
    let n_bar = thermal_occupation(absorber, temperature)?;
    let dn_bar_dt = occupation_derivative(absorber, temperature, DerivativeMode::Exact)?;
    let k_tilde = kernel.normalized(cfg.delta, temperature)?;
    let dk_tilde_dt = kernel.normalized_dt(cfg.delta, temperature)?;
    let f1_tooth1 = qfi_one(cfg, Tooth::First, absorber, temperature, regime)?;
    let f1_tooth2 = qfi_one(cfg, Tooth::Second, absorber, temperature, regime)?;
    let f2 = qfi_two(cfg, absorber, kernel, temperature, regime)?;
    let denom = f1_tooth1 + f1_tooth2;
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::domain(format!(
            "single-tooth information vanishes at T = {temperature}; the efficiency ratio is undefined"
        )));
    }
    Ok(QfiBreakdown {
        n_bar,
        dn_bar_dt,
        k_tilde,
        dk_tilde_dt,
        f1_tooth1,
        f1_tooth2,
        f2,
        advantage: f2 / denom,
        approx: decomposed_efficiency(n_bar, dn_bar_dt, k_tilde, dk_tilde_dt)?,
    })
}
