//! Normalized memory kernels of the absorber occupation noise.
//!
//! The two-time covariance of the occupation fluctuations factorizes as
//!
//! ```text
//! K(Δ; T) = Var(n_a) · K̃(Δ, T),    K̃(0, T) = 1,
//! ```
//!
//! and this module owns the normalized part K̃. Four model families cover
//! the regimes of interest:
//!
//! * `LorentzianCrossover` — exponential decay e^(−Δ/τ_c(T)) whose
//!   correlation time crosses over from τ_max to τ_min around T_c with
//!   sharpness γ: τ_c(T) = (τ_max + τ_min r)/(1 + r), r = (T/T_c)^γ.
//! * `LorentzianFixed` — exponential decay with temperature-independent τ_c.
//! * `GaussianWhite` — e^(−(Δ/σ_w)²), a quasi-white kernel of width σ_w.
//! * `OneOverF` — 1/(1 + (Δ/τ_f)^α), algebraic tails typical of 1/f-like
//!   environments.
//!
//! plus `Tabulated` for measured kernels (log-delay linear interpolation,
//! clamped extrapolation). Temperature derivatives are analytic where the
//! model depends on T and identically zero otherwise; a central
//! finite-difference fallback is provided for cross-checks and for models
//! added without an analytic form.

use crate::error::{Error, Result};
use std::io::BufRead;

/// Temperature-dependent correlation time with a sharp crossover:
/// τ_c(T) = (τ_max + τ_min r)/(1 + r) with r = (T/T_c)^γ. Decreases
/// monotonically from τ_max (T ≪ T_c) to τ_min (T ≫ T_c).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationTimeModel {
    /// Long correlation time deep below the crossover (units of τ0).
    pub tau_max: f64,
    /// Short correlation time far above the crossover (units of τ0).
    pub tau_min: f64,
    /// Crossover temperature (K).
    pub t_c: f64,
    /// Crossover sharpness exponent.
    pub gamma: f64,
}

impl CorrelationTimeModel {
    pub fn new(tau_max: f64, tau_min: f64, t_c: f64, gamma: f64) -> Result<Self> {
        for (name, v) in [("tau_max", tau_max), ("tau_min", tau_min), ("t_c", t_c), ("gamma", gamma)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::domain(format!(
                    "correlation-time parameter {name} must be positive and finite, got {v}"
                )));
            }
        }
        if tau_min > tau_max {
            return Err(Error::domain(format!(
                "correlation-time crossover needs tau_min <= tau_max, got {tau_min} > {tau_max}"
            )));
        }
        Ok(Self { tau_max, tau_min, t_c, gamma })
    }

    /// τ_c(T) (units of τ0).
    pub fn evaluate(&self, temperature: f64) -> Result<f64> {
        check_temperature(temperature)?;
        let r = (temperature / self.t_c).powf(self.gamma);
        if r.is_infinite() {
            return Ok(self.tau_min);
        }
        Ok((self.tau_max + self.tau_min * r) / (1.0 + r))
    }

    /// dτ_c/dT = (τ_min − τ_max)/(1 + r)² · γ r / T, ≤ 0 everywhere.
    pub fn derivative(&self, temperature: f64) -> Result<f64> {
        check_temperature(temperature)?;
        let r = (temperature / self.t_c).powf(self.gamma);
        if r.is_infinite() {
            return Ok(0.0);
        }
        let dr = self.gamma * r / temperature;
        Ok((self.tau_min - self.tau_max) / ((1.0 + r) * (1.0 + r)) * dr)
    }
}

impl Default for CorrelationTimeModel {
    /// Reference crossover: τ_max = 6 τ0, τ_min = 0.01 τ0, T_c = 20 mK,
    /// γ = 8. The memory time collapses by a factor 600 just above T_c.
    fn default() -> Self {
        Self { tau_max: 6.0, tau_min: 0.01, t_c: 0.020, gamma: 8.0 }
    }
}

/// Default width of the quasi-white kernel (units of τ0).
pub const DEFAULT_WHITE_SIGMA: f64 = 1e-3;
/// Default knee and exponent of the 1/f-like kernel.
pub const DEFAULT_ONE_OVER_F_TAU: f64 = 0.1;
pub const DEFAULT_ONE_OVER_F_ALPHA: f64 = 0.6;

/// Measured kernel samples; interpolated linearly in log-delay.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedKernel {
    delays: Vec<f64>,
    values: Vec<f64>,
}

impl TabulatedKernel {
    /// `delays` strictly increasing and positive; `values` in [0, 1] with
    /// values[0] = 1 so the normalization invariant K̃(0) = 1 extends to the
    /// clamped region below the first sample.
    pub fn new(delays: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if delays.len() < 2 || delays.len() != values.len() {
            return Err(Error::domain(format!(
                "tabulated kernel needs >= 2 matching samples, got {} delays / {} values",
                delays.len(),
                values.len()
            )));
        }
        let mut prev = 0.0;
        for (i, &d) in delays.iter().enumerate() {
            if !d.is_finite() || d <= prev {
                return Err(Error::domain(format!(
                    "tabulated delays must be positive and strictly increasing; sample {i} is {d}"
                )));
            }
            prev = d;
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::domain(format!(
                    "tabulated kernel values must lie in [0, 1]; sample {i} is {v}"
                )));
            }
        }
        if (values[0] - 1.0).abs() > 1e-9 {
            return Err(Error::domain(format!(
                "tabulated kernel must be normalized: first value is {}, expected 1",
                values[0]
            )));
        }
        Ok(Self { delays, values })
    }

    /// Interpolated value and a flag marking a query clamped below the first
    /// sample (where the kernel is pinned to its normalization value 1).
    pub fn evaluate(&self, delta: f64) -> (f64, bool) {
        let first = self.delays[0];
        let last = *self.delays.last().expect("validated non-empty");
        if delta < first {
            return (1.0, delta > 0.0);
        }
        if delta >= last {
            return (*self.values.last().expect("validated non-empty"), false);
        }
        let hi = self.delays.partition_point(|&d| d <= delta);
        let lo = hi - 1;
        let (d0, d1) = (self.delays[lo], self.delays[hi]);
        let t = (delta.ln() - d0.ln()) / (d1.ln() - d0.ln());
        (self.values[lo] + t * (self.values[hi] - self.values[lo]), false)
    }

    /// Loads `delay,value` rows from CSV. Lines starting with `#` and a
    /// literal header row are skipped; parse failures cite the 1-based line.
    pub fn from_csv(path: &std::path::Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut delays = Vec::new();
        let mut values = Vec::new();
        for (idx, line) in std::io::BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|source| Error::Io {
                path: path.display().to_string(),
                source,
            })?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if idx == 0 && trimmed.chars().next().is_some_and(|c| c.is_alphabetic()) {
                continue; // header row
            }
            let mut fields = trimmed.split(',');
            let parse = |s: Option<&str>, what: &str| -> Result<f64> {
                s.ok_or_else(|| Error::Parse {
                    line: idx + 1,
                    message: format!("missing {what} column"),
                })?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse {
                    line: idx + 1,
                    message: format!("bad {what}: {e}"),
                })
            };
            delays.push(parse(fields.next(), "delay")?);
            values.push(parse(fields.next(), "value")?);
            if fields.next().is_some() {
                return Err(Error::Parse { line: idx + 1, message: "expected 2 columns".into() });
            }
        }
        Self::new(delays, values)
    }
}

/// A normalized memory-kernel model K̃(Δ, T).
#[derive(Debug, Clone, PartialEq)]
pub enum KernelModel {
    LorentzianCrossover(CorrelationTimeModel),
    LorentzianFixed { tau_c: f64 },
    GaussianWhite { sigma_w: f64 },
    OneOverF { tau_f: f64, alpha: f64 },
    Tabulated(TabulatedKernel),
}

fn check_temperature(temperature: f64) -> Result<()> {
    if !temperature.is_finite() || temperature <= 0.0 {
        return Err(Error::domain(format!(
            "temperature must be positive and finite kelvin, got {temperature}"
        )));
    }
    Ok(())
}

fn check_delta(delta: f64) -> Result<()> {
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::domain(format!(
            "tooth delay must be non-negative and finite, got {delta}"
        )));
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<f64> {
    if !v.is_finite() || v <= 0.0 {
        return Err(Error::domain(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(v)
}

impl KernelModel {
    pub fn lorentzian_crossover(model: CorrelationTimeModel) -> Self {
        KernelModel::LorentzianCrossover(model)
    }

    pub fn lorentzian_fixed(tau_c: f64) -> Result<Self> {
        Ok(KernelModel::LorentzianFixed { tau_c: check_positive("tau_c", tau_c)? })
    }

    pub fn gaussian_white(sigma_w: f64) -> Result<Self> {
        Ok(KernelModel::GaussianWhite { sigma_w: check_positive("sigma_w", sigma_w)? })
    }

    pub fn one_over_f(tau_f: f64, alpha: f64) -> Result<Self> {
        Ok(KernelModel::OneOverF {
            tau_f: check_positive("tau_f", tau_f)?,
            alpha: check_positive("alpha", alpha)?,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelModel::LorentzianCrossover(_) => "lorentzian_crossover",
            KernelModel::LorentzianFixed { .. } => "lorentzian_fixed",
            KernelModel::GaussianWhite { .. } => "gaussian_white",
            KernelModel::OneOverF { .. } => "one_over_f",
            KernelModel::Tabulated(_) => "tabulated",
        }
    }

    /// K̃(Δ, T) ∈ [0, 1], together with the clamp flag for tabulated queries
    /// below the first sample.
    pub fn normalized_flagged(&self, delta: f64, temperature: f64) -> Result<(f64, bool)> {
        check_delta(delta)?;
        check_temperature(temperature)?;
        Ok(match self {
            KernelModel::LorentzianCrossover(ct) => {
                let tau = ct.evaluate(temperature)?;
                ((-delta / tau).exp(), false)
            }
            KernelModel::LorentzianFixed { tau_c } => ((-delta / tau_c).exp(), false),
            KernelModel::GaussianWhite { sigma_w } => {
                let u = delta / sigma_w;
                ((-u * u).exp(), false)
            }
            KernelModel::OneOverF { tau_f, alpha } => {
                if delta == 0.0 {
                    (1.0, false)
                } else {
                    (1.0 / (1.0 + (delta / tau_f).powf(*alpha)), false)
                }
            }
            KernelModel::Tabulated(tab) => {
                if delta == 0.0 {
                    (1.0, false)
                } else {
                    tab.evaluate(delta)
                }
            }
        })
    }

    /// K̃(Δ, T).
    pub fn normalized(&self, delta: f64, temperature: f64) -> Result<f64> {
        self.normalized_flagged(delta, temperature).map(|(v, _)| v)
    }

    /// Full kernel K(Δ; T) = Var(n_a) · K̃(Δ, T).
    pub fn evaluate(&self, delta: f64, temperature: f64, variance: f64) -> Result<f64> {
        if !variance.is_finite() || variance < 0.0 {
            return Err(Error::domain(format!(
                "occupation variance must be non-negative and finite, got {variance}"
            )));
        }
        Ok(variance * self.normalized(delta, temperature)?)
    }

    /// Analytic ∂_T K̃(Δ, T). For the crossover Lorentzian,
    /// ∂_T K̃ = K̃ · (Δ/τ_c²) · dτ_c/dT; every other model is
    /// temperature-independent and returns exactly zero.
    pub fn normalized_dt(&self, delta: f64, temperature: f64) -> Result<f64> {
        check_delta(delta)?;
        check_temperature(temperature)?;
        match self {
            KernelModel::LorentzianCrossover(ct) => {
                let tau = ct.evaluate(temperature)?;
                let k = (-delta / tau).exp();
                if k == 0.0 {
                    return Ok(0.0);
                }
                Ok(k * (delta / (tau * tau)) * ct.derivative(temperature)?)
            }
            _ => Ok(0.0),
        }
    }

    /// Central finite-difference fallback for ∂_T K̃ with step
    /// h = max(1e−6 K, 1e−6 T); serves as the independent cross-check of
    /// [`Self::normalized_dt`].
    pub fn normalized_dt_fd(&self, delta: f64, temperature: f64) -> Result<f64> {
        check_delta(delta)?;
        check_temperature(temperature)?;
        let h = (1e-6f64).max(1e-6 * temperature);
        let hi = self.normalized(delta, temperature + h)?;
        let lo = self.normalized(delta, temperature - h)?;
        Ok((hi - lo) / (2.0 * h))
    }

    /// Closed-form noise spectrum S_nn(ω) = 2 ∫₀^∞ K(Δ) cos(ωΔ) dΔ where one
    /// exists: 2 Var τ_c/(1 + ω²τ_c²) for the Lorentzian families and
    /// Var σ_w √π e^(−ω²σ_w²/4) for the quasi-white kernel.
    pub fn analytic_spectrum(&self, omega: f64, temperature: f64, variance: f64) -> Result<f64> {
        if !omega.is_finite() {
            return Err(Error::domain(format!("spectral frequency must be finite, got {omega}")));
        }
        if !variance.is_finite() || variance < 0.0 {
            return Err(Error::domain(format!(
                "occupation variance must be non-negative and finite, got {variance}"
            )));
        }
        check_temperature(temperature)?;
        match self {
            KernelModel::LorentzianCrossover(ct) => {
                let tau = ct.evaluate(temperature)?;
                Ok(2.0 * variance * tau / (1.0 + omega * omega * tau * tau))
            }
            KernelModel::LorentzianFixed { tau_c } => {
                Ok(2.0 * variance * tau_c / (1.0 + omega * omega * tau_c * tau_c))
            }
            KernelModel::GaussianWhite { sigma_w } => {
                let w = omega * sigma_w;
                Ok(variance * sigma_w * std::f64::consts::PI.sqrt() * (-w * w / 4.0).exp())
            }
            other => Err(Error::UnsupportedModel {
                operation: "analytic_spectrum",
                model: other.name().to_string(),
            }),
        }
    }
}
