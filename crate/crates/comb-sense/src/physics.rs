//! Thermal statistics of the bosonic absorber mode.
//!
//! The absorber is a harmonic mode at frequency `omega_a` in contact with a
//! bath at temperature `T`. Its mean occupation follows the Bose-Einstein
//! law
//!
//! ```text
//! n̄_a(T) = 1 / (exp(ħ ω_a / k_B T) − 1)
//! ```
//!
//! and all temperature sensitivity downstream enters through n̄_a and its
//! derivative. Photon-number fluctuations are thermal: the exact variance is
//! n̄_a(1 + n̄_a); the low-occupation working convention truncates it to n̄_a.
//! Which convention applies is carried on [`AbsorberParams`] so that every
//! caller agrees on it.

use crate::error::{Error, Result};

/// Reduced Planck constant (J s), CODATA 2018.
pub const HBAR: f64 = 1.054571817e-34;

/// Boltzmann constant (J/K), exact SI value.
pub const KB: f64 = 1.380649e-23;

/// Reference comb period used for unit bookkeeping (seconds). Delays, tooth
/// durations, and correlation times are expressed in units of this period;
/// it never enters a formula.
pub const TAU0_SECONDS: f64 = 1e-6;

/// Default absorber frequency, omega_a/2pi = 1 GHz.
pub const DEFAULT_FREQUENCY_GHZ: f64 = 1.0;

/// Which photon-number variance enters dephasing formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceMode {
    /// Var(n_a) = n̄_a; truncation valid for n̄_a ≲ 1, used throughout the
    /// map and figure pipelines.
    #[default]
    Approximate,
    /// Var(n_a) = n̄_a (1 + n̄_a), the full thermal variance.
    Exact,
}

/// Derivative flavor for d n̄_a / dT.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMode {
    /// Direct differentiation of the Bose-Einstein law.
    Exact,
    /// Low-temperature truncation ħ ω_a n̄_a / (k_B T²); ratio to the exact
    /// form is 1/(1 + n̄_a).
    LowT,
}

/// The absorber mode: its frequency and the variance convention in force.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsorberParams {
    /// Angular frequency omega_a (rad/s), > 0.
    pub omega_a: f64,
    pub variance_mode: VarianceMode,
}

impl AbsorberParams {
    pub fn new(omega_a: f64, variance_mode: VarianceMode) -> Result<Self> {
        if !omega_a.is_finite() || omega_a <= 0.0 {
            return Err(Error::domain(format!(
                "absorber frequency must be positive and finite, got {omega_a}"
            )));
        }
        Ok(Self { omega_a, variance_mode })
    }

    /// Absorber at `f` GHz (omega_a = 2pi f) with the given variance mode.
    pub fn with_frequency_ghz(f_ghz: f64, variance_mode: VarianceMode) -> Result<Self> {
        Self::new(2.0 * std::f64::consts::PI * f_ghz * 1e9, variance_mode)
    }

    /// Quantum-to-thermal crossover scale ħ omega_a / k_B in kelvin.
    pub fn crossover_temperature(&self) -> f64 {
        HBAR * self.omega_a / KB
    }
}

impl Default for AbsorberParams {
    fn default() -> Self {
        Self::with_frequency_ghz(DEFAULT_FREQUENCY_GHZ, VarianceMode::default())
            .expect("default frequency is valid")
    }
}

fn check_temperature(temperature: f64) -> Result<()> {
    if !temperature.is_finite() || temperature <= 0.0 {
        return Err(Error::domain(format!(
            "temperature must be positive and finite kelvin, got {temperature}"
        )));
    }
    Ok(())
}

/// Mean thermal occupation n̄_a(T) of the absorber mode.
///
/// Computed through `exp_m1` so the T → 0 limit underflows cleanly to zero
/// and the high-temperature limit keeps full precision.
pub fn thermal_occupation(absorber: &AbsorberParams, temperature: f64) -> Result<f64> {
    check_temperature(temperature)?;
    let x = absorber.crossover_temperature() / temperature;
    Ok(1.0 / x.exp_m1())
}

/// Temperature derivative d n̄_a / dT (1/K).
///
/// Exact form: (ħ ω_a / k_B T²) · e^x / (e^x − 1)² with x = ħ ω_a / k_B T,
/// evaluated as (x/T) · n̄ (1 + n̄). The low-T form drops one occupation
/// factor: ħ ω_a n̄_a / (k_B T²).
pub fn occupation_derivative(
    absorber: &AbsorberParams,
    temperature: f64,
    mode: DerivativeMode,
) -> Result<f64> {
    let n = thermal_occupation(absorber, temperature)?;
    let x = absorber.crossover_temperature() / temperature;
    Ok(match mode {
        DerivativeMode::Exact => (x / temperature) * n * (1.0 + n),
        DerivativeMode::LowT => (x / temperature) * n,
    })
}

/// Photon-number variance for a thermal state of mean occupation `n_bar`.
pub fn occupation_variance(n_bar: f64, mode: VarianceMode) -> Result<f64> {
    if !n_bar.is_finite() || n_bar < 0.0 {
        return Err(Error::domain(format!(
            "mean occupation must be non-negative and finite, got {n_bar}"
        )));
    }
    Ok(match mode {
        VarianceMode::Approximate => n_bar,
        VarianceMode::Exact => n_bar * (1.0 + n_bar),
    })
}

/// Variance and its temperature derivative under the absorber's convention.
/// Chain rule: d/dT [n̄(1+n̄)] = (1 + 2n̄) dn̄/dT in exact mode.
pub fn variance_with_derivative(absorber: &AbsorberParams, temperature: f64) -> Result<(f64, f64)> {
    let n = thermal_occupation(absorber, temperature)?;
    let dn = occupation_derivative(absorber, temperature, DerivativeMode::Exact)?;
    Ok(match absorber.variance_mode {
        VarianceMode::Approximate => (n, dn),
        VarianceMode::Exact => (n * (1.0 + n), (1.0 + 2.0 * n) * dn),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::assert_close;

    fn ghz() -> AbsorberParams {
        AbsorberParams::default()
    }

    #[test]
    fn crossover_scale_at_one_gigahertz() {
        // ħ·2π·1e9/k_B: the 1 GHz mode freezes out below ~48 mK.
        assert_close(ghz().crossover_temperature(), 0.04799243070425632, 1e-12, 0.0);
    }

    #[test]
    fn occupation_reference_values() {
        assert_close(thermal_occupation(&ghz(), 0.020).unwrap(), 0.0998103076567751, 1e-12, 0.0);
        assert_close(thermal_occupation(&ghz(), 0.030).unwrap(), 0.2530503394478342, 1e-12, 0.0);
        // Spot value quoted to 3 significant figures in discussions of the
        // 20 mK operating point.
        assert!((thermal_occupation(&ghz(), 0.020).unwrap() - 0.0998).abs() < 5e-5);
    }

    #[test]
    fn occupation_monotone_and_limits() {
        let a = ghz();
        let mut prev = 0.0;
        for i in 1..=200 {
            let t = 1e-3 * i as f64;
            let n = thermal_occupation(&a, t).unwrap();
            assert!(n > prev, "occupation must increase with T");
            prev = n;
        }
        // Deep freeze-out underflows to zero rather than overflowing.
        assert_eq!(thermal_occupation(&a, 1e-5).unwrap(), 0.0);
        // Rayleigh-Jeans regime: n̄ ≈ kT/ħω − 1/2 within 1% once kT ≥ 10 ħω.
        let t = 10.0 * a.crossover_temperature();
        let n = thermal_occupation(&a, t).unwrap();
        let rj = t / a.crossover_temperature() - 0.5;
        assert!((n - rj).abs() / n < 0.01, "n = {n}, RJ = {rj}");
    }

    #[test]
    fn derivative_matches_central_difference() {
        let a = ghz();
        let h = 1e-7;
        for t in [0.010, 0.020, 0.035, 0.050] {
            let exact = occupation_derivative(&a, t, DerivativeMode::Exact).unwrap();
            let fd = (thermal_occupation(&a, t + h).unwrap()
                - thermal_occupation(&a, t - h).unwrap())
                / (2.0 * h);
            assert_close(exact, fd, 0.0, 1e-8);
            assert!(exact > 0.0);
        }
        assert_close(
            occupation_derivative(&a, 0.020, DerivativeMode::Exact).unwrap(),
            13.170611371059731,
            0.0,
            1e-10,
        );
    }

    #[test]
    fn low_t_derivative_ratio() {
        let a = ghz();
        // Ratio low_t/exact = 1/(1+n̄): within 1% wherever n̄ < 0.01.
        let t = 0.010;
        let n = thermal_occupation(&a, t).unwrap();
        assert!(n < 0.01);
        let lo = occupation_derivative(&a, t, DerivativeMode::LowT).unwrap();
        let ex = occupation_derivative(&a, t, DerivativeMode::Exact).unwrap();
        assert_close(lo / ex, 1.0 / (1.0 + n), 1e-12, 0.0);
        assert!((1.0 - lo / ex).abs() < 0.01);
    }

    #[test]
    fn variance_conventions() {
        let n = 0.25;
        let approx = occupation_variance(n, VarianceMode::Approximate).unwrap();
        let exact = occupation_variance(n, VarianceMode::Exact).unwrap();
        assert_eq!(approx, n);
        assert_close(exact / approx, 1.0 + n, 1e-15, 0.0);
        assert!(occupation_variance(-0.1, VarianceMode::Exact).is_err());
    }

    #[test]
    fn variance_derivative_chain_rule() {
        let mut a = ghz();
        a.variance_mode = VarianceMode::Exact;
        let t = 0.025;
        let (_, dv) = variance_with_derivative(&a, t).unwrap();
        let h = 1e-7;
        let vp = thermal_occupation(&a, t + h).unwrap();
        let vm = thermal_occupation(&a, t - h).unwrap();
        let fd = ((vp * (1.0 + vp)) - (vm * (1.0 + vm))) / (2.0 * h);
        assert_close(dv, fd, 0.0, 1e-8);
    }

    #[test]
    fn rejects_unphysical_inputs() {
        assert!(thermal_occupation(&ghz(), 0.0).is_err());
        assert!(thermal_occupation(&ghz(), -1.0).is_err());
        assert!(thermal_occupation(&ghz(), f64::NAN).is_err());
        assert!(AbsorberParams::new(0.0, VarianceMode::Approximate).is_err());
        assert!(AbsorberParams::new(-1e9, VarianceMode::Approximate).is_err());
    }
}
