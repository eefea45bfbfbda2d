//! Noise spectroscopy: from a measured two-tooth visibility sweep back to
//! the occupation correlation kernel and its spectrum.
//!
//! The weak-regime visibility
//!
//! ```text
//! C(Δ) = C_p(Δ)² · exp(−|α|² λ² [(τ1² + τ2²) Var + 2 τ1 τ2 K(Δ)])
//! ```
//!
//! is invertible point-by-point for the covariance K(Δ):
//!
//! ```text
//! K̂(Δ) = (−ln C / |α|² − λ²(τ1² + τ2²) Var) / (2 λ² τ1 τ2).
//! ```
//!
//! The Δ-independent baseline λ²(τ1²+τ2²)Var is taken either from the sweep
//! metadata or estimated from the longest-delay visibility, where the kernel
//! has presumably died out. Probe decoherence is removed either by dividing
//! out a measured probe reference before inversion or by subtracting its
//! linear-in-Δ contribution afterwards; for an exponential probe the two
//! routes agree identically.
//!
//! The one-sided Wiener–Khinchin transform
//!
//! ```text
//! S_nn(ω) = 2 ∫₀^∞ K(Δ) cos(ωΔ) dΔ
//! ```
//!
//! is evaluated by trapezoidal quadrature over the measured delay window
//! only: frequencies below ~1/Δ_max and above ~1/Δ_min are outside the
//! reconstruction's support and are reported as advisory cutoffs rather
//! than extrapolated.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::log_grid;
use crate::kernels::KernelModel;

/// Physical parameters a visibility sweep was taken with. Everything needed
/// to invert the weak-regime envelope formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepMeta {
    /// Dispersive coupling rate λ (1/τ0).
    pub lambda: f64,
    /// Tooth durations (τ0).
    pub tau1: f64,
    pub tau2: f64,
    /// Clock mean photon number |α|².
    pub alpha_sq: f64,
    /// Occupation variance Var(n_a) during the sweep.
    pub variance: f64,
    /// Probe dephasing rate Γ_φ^p (1/τ0), if the probe decoheres.
    #[serde(default)]
    pub probe_gamma: Option<f64>,
    /// Whether the stored visibilities have already been divided by the
    /// probe envelope C_p(Δ)².
    #[serde(default)]
    pub probe_corrected: bool,
}

impl SweepMeta {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("lambda", self.lambda),
            ("tau1", self.tau1),
            ("tau2", self.tau2),
            ("alpha_sq", self.alpha_sq),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::domain(format!(
                    "sweep metadata field {name} must be positive and finite, got {v}"
                )));
            }
        }
        if !self.variance.is_finite() || self.variance < 0.0 {
            return Err(Error::domain(format!(
                "sweep metadata variance must be non-negative and finite, got {}",
                self.variance
            )));
        }
        if let Some(gp) = self.probe_gamma {
            if !gp.is_finite() || gp < 0.0 {
                return Err(Error::domain(format!(
                    "sweep metadata probe_gamma must be non-negative and finite, got {gp}"
                )));
            }
        }
        Ok(())
    }

    /// Coefficient of K(Δ) in the dephasing exponent: 2 |α|² λ² τ1 τ2.
    fn cross_coefficient(&self) -> f64 {
        2.0 * self.alpha_sq * self.lambda * self.lambda * self.tau1 * self.tau2
    }

    /// The Δ-independent exponent baseline |α|² λ² (τ1² + τ2²) Var.
    fn baseline_exponent(&self) -> f64 {
        self.alpha_sq * self.lambda * self.lambda * (self.tau1 * self.tau1 + self.tau2 * self.tau2)
            * self.variance
    }
}

/// A two-tooth visibility sweep over tooth delays.
#[derive(Debug, Clone, PartialEq)]
pub struct DelaySweep {
    pub meta: SweepMeta,
    pub delays: Vec<f64>,
    pub visibility: Vec<f64>,
}

impl DelaySweep {
    /// Validates: matched lengths ≥ 2, strictly increasing positive delays,
    /// visibilities in (0, 1] (a 1e−9 grace above 1 absorbs calibration
    /// round-off).
    pub fn new(meta: SweepMeta, delays: Vec<f64>, visibility: Vec<f64>) -> Result<Self> {
        meta.validate()?;
        if delays.len() != visibility.len() {
            return Err(Error::domain(format!(
                "sweep has {} delays but {} visibilities",
                delays.len(),
                visibility.len()
            )));
        }
        if delays.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "a sweep needs at least 2 samples, got {}",
                delays.len()
            )));
        }
        if delays.iter().any(|d| !d.is_finite() || *d <= 0.0) {
            return Err(Error::domain("sweep delays must be positive and finite".to_string()));
        }
        if delays.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("sweep delays must be strictly increasing".to_string()));
        }
        for (i, &v) in visibility.iter().enumerate() {
            if !v.is_finite() || v <= 0.0 || v > 1.0 + 1e-9 {
                return Err(Error::domain(format!(
                    "visibility {v} at sample {i} is outside (0, 1]"
                )));
            }
        }
        Ok(Self { meta, delays, visibility })
    }
}

/// Generates the weak-regime visibility sweep a kernel model would produce.
///
/// Works directly from [`SweepMeta`], so sweep parameters (e.g. long tooth
/// durations on a coarse delay grid) need not form a realizable comb
/// geometry; physical sweeps come from [`crate::coherence::coherence_two`].
/// Includes the probe envelope when `probe_gamma` is set and
/// `probe_corrected` is false.
pub fn synthesize_sweep(
    meta: SweepMeta,
    delays: &[f64],
    kernel: &KernelModel,
    temperature: f64,
) -> Result<DelaySweep> {
    meta.validate()?;
    let mut visibility = Vec::with_capacity(delays.len());
    for &d in delays {
        let k_tilde = kernel.normalized(d, temperature)?;
        let exponent =
            meta.baseline_exponent() + meta.cross_coefficient() * meta.variance * k_tilde;
        let probe = match (meta.probe_gamma, meta.probe_corrected) {
            (Some(gp), false) => (-2.0 * gp * d).exp(),
            _ => 1.0,
        };
        visibility.push(probe * (-exponent).exp());
    }
    DelaySweep::new(meta, delays.to_vec(), visibility)
}

/// How the inversion fixes the Δ-independent exponent baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineMode {
    /// Trust the variance recorded in the sweep metadata.
    #[default]
    MetaVariance,
    /// Estimate the baseline from the longest-delay visibility, assuming
    /// the kernel has fully decayed there. Pins K̂(Δ_max) = 0, so any
    /// residual correlation at Δ_max biases every sample by −K(Δ_max).
    LongDelayAsymptote,
}

/// Point-by-point kernel estimate recovered from a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelEstimate {
    pub delays: Vec<f64>,
    /// Dimensionful covariance estimate K̂(Δ).
    pub k_hat: Vec<f64>,
    /// Baseline variance the inversion used (metadata or long-delay
    /// estimate).
    pub variance: f64,
    /// Whether the probe's linear exponent was subtracted after inversion.
    pub debias_applied: bool,
    /// Whether the sweep was probe-corrected before inversion.
    pub calibration_applied: bool,
}

impl KernelEstimate {
    /// K̂(Δ)/Var, comparable to [`KernelModel::normalized`].
    pub fn normalized(&self) -> Result<Vec<f64>> {
        if self.variance <= 0.0 || self.variance.is_nan() {
            return Err(Error::domain(format!(
                "cannot normalize a kernel estimate with variance {}",
                self.variance
            )));
        }
        Ok(self.k_hat.iter().map(|k| k / self.variance).collect())
    }
}

/// Inverts a visibility sweep to the covariance kernel.
///
/// With [`BaselineMode::LongDelayAsymptote`] the sweep must already be free
/// of probe decoherence (probe-corrected or probe-less): the probe exponent
/// grows with Δ and would corrupt the long-delay baseline.
pub fn invert_visibility(sweep: &DelaySweep, baseline: BaselineMode) -> Result<KernelEstimate> {
    let meta = &sweep.meta;
    let cross = meta.cross_coefficient();
    let tau_sq = meta.tau1 * meta.tau1 + meta.tau2 * meta.tau2;
    let (baseline_exponent, variance) = match baseline {
        BaselineMode::MetaVariance => (meta.baseline_exponent(), meta.variance),
        BaselineMode::LongDelayAsymptote => {
            if meta.probe_gamma.is_some() && !meta.probe_corrected {
                return Err(Error::domain(
                    "long-delay baseline estimation requires probe-corrected visibilities; \
                     calibrate the sweep first"
                        .to_string(),
                ));
            }
            let b = -sweep.visibility.last().unwrap().ln() / meta.alpha_sq;
            (meta.alpha_sq * b, b / (meta.lambda * meta.lambda * tau_sq))
        }
    };
    let k_hat = sweep
        .visibility
        .iter()
        .map(|&c| (-c.ln() - baseline_exponent) / cross)
        .collect::<Vec<_>>();
    Ok(KernelEstimate {
        delays: sweep.delays.clone(),
        k_hat,
        variance,
        debias_applied: false,
        calibration_applied: meta.probe_corrected,
    })
}

/// A measured (or modeled) probe-only visibility reference C_p(Δ).
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReference {
    delays: Vec<f64>,
    log_visibility: Vec<f64>,
}

impl ProbeReference {
    /// From measured probe visibilities on their own delay grid.
    pub fn new(delays: Vec<f64>, visibility: Vec<f64>) -> Result<Self> {
        if delays.len() != visibility.len() || delays.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "a probe reference needs at least 2 matched samples, got {} delays and {} values",
                delays.len(),
                visibility.len()
            )));
        }
        if delays.iter().any(|d| !d.is_finite() || *d <= 0.0)
            || delays.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::domain(
                "probe reference delays must be positive, finite, strictly increasing".to_string(),
            ));
        }
        if visibility.iter().any(|v| !v.is_finite() || *v <= 0.0 || *v > 1.0 + 1e-9) {
            return Err(Error::domain(
                "probe reference visibilities must lie in (0, 1]".to_string(),
            ));
        }
        let log_visibility = visibility.iter().map(|v| v.ln()).collect();
        Ok(Self { delays, log_visibility })
    }

    /// An ideal exponential probe e^(−Γ_φ^p Δ) sampled on `delays`.
    pub fn from_rate(gamma_p: f64, delays: &[f64]) -> Result<Self> {
        if !gamma_p.is_finite() || gamma_p < 0.0 {
            return Err(Error::domain(format!(
                "probe dephasing rate must be non-negative and finite, got {gamma_p}"
            )));
        }
        let vis = delays.iter().map(|&d| (-gamma_p * d).exp()).collect();
        Self::new(delays.to_vec(), vis)
    }

    /// C_p at an arbitrary delay: ln C_p is interpolated linearly in Δ
    /// (exact for an exponential probe), with boundary segments extended
    /// for delays outside the measured range.
    pub fn envelope_at(&self, delta: f64) -> Result<f64> {
        if !delta.is_finite() || delta < 0.0 {
            return Err(Error::domain(format!(
                "delay must be non-negative and finite, got {delta}"
            )));
        }
        let d = &self.delays;
        let l = &self.log_visibility;
        let n = d.len();
        let seg = if delta <= d[0] {
            0
        } else if delta >= d[n - 1] {
            n - 2
        } else {
            d.partition_point(|x| *x < delta) - 1
        };
        let w = (delta - d[seg]) / (d[seg + 1] - d[seg]);
        Ok(((1.0 - w) * l[seg] + w * l[seg + 1]).exp().min(1.0))
    }
}

/// Default reliability floor for the squared probe envelope.
pub const DEFAULT_CALIBRATION_FLOOR: f64 = 1e-3;

/// Divides out the probe envelope: C → C / C_p(Δ)².
///
/// Fails with [`Error::UnreliableCalibration`] where C_p² has decayed below
/// `floor` — dividing by a nearly-vanished reference amplifies noise beyond
/// usefulness. The result is marked `probe_corrected`.
pub fn calibrate_probe(
    sweep: &DelaySweep,
    reference: &ProbeReference,
    floor: f64,
) -> Result<DelaySweep> {
    if floor <= 0.0 || !floor.is_finite() {
        return Err(Error::domain(format!(
            "calibration floor must be positive and finite, got {floor}"
        )));
    }
    let mut visibility = Vec::with_capacity(sweep.delays.len());
    for (&d, &c) in sweep.delays.iter().zip(&sweep.visibility) {
        let cp = reference.envelope_at(d)?;
        let cp_sq = cp * cp;
        if cp_sq < floor {
            return Err(Error::UnreliableCalibration { delta: d, value: cp_sq, floor });
        }
        // Consistent data keeps C ≤ C_p²; round-off above 1 is clipped.
        visibility.push((c / cp_sq).min(1.0));
    }
    let mut meta = sweep.meta;
    meta.probe_corrected = true;
    DelaySweep::new(meta, sweep.delays.clone(), visibility)
}

/// Removes the probe's contribution from an already-inverted estimate by
/// subtracting its linear exponent: Γ_φ^p Δ / (|α|² λ² τ1 τ2) in K̂ units.
///
/// The algebraic twin of [`calibrate_probe`] for an exponential probe.
pub fn debias_linear(estimate: &KernelEstimate, meta: &SweepMeta) -> Result<KernelEstimate> {
    let Some(gamma_p) = meta.probe_gamma else {
        return Err(Error::domain(
            "sweep metadata carries no probe_gamma to debias against".to_string(),
        ));
    };
    if meta.probe_corrected {
        return Err(Error::domain(
            "sweep is already probe-corrected; debiasing would double-count the probe".to_string(),
        ));
    }
    if estimate.debias_applied {
        return Err(Error::domain("estimate is already debiased".to_string()));
    }
    let slope = gamma_p
        / (meta.alpha_sq * meta.lambda * meta.lambda * meta.tau1 * meta.tau2);
    let k_hat = estimate
        .delays
        .iter()
        .zip(&estimate.k_hat)
        .map(|(&d, &k)| k - slope * d)
        .collect();
    Ok(KernelEstimate {
        delays: estimate.delays.clone(),
        k_hat,
        variance: estimate.variance,
        debias_applied: true,
        calibration_applied: estimate.calibration_applied,
    })
}

/// A reconstructed (one-sided, symmetrized) noise spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEstimate {
    /// Angular frequencies (rad/τ0).
    pub omegas: Vec<f64>,
    /// S_nn(ω); negative values from noisy kernels are retained, not
    /// clipped — `negative_count` reports how many.
    pub s_nn: Vec<f64>,
    pub normalized: bool,
    /// Advisory: frequencies below ~1/Δ_max are unresolved by the sweep.
    pub ir_cutoff: f64,
    /// Advisory: frequencies above ~1/Δ_min are unresolved by the sweep.
    pub uv_cutoff: f64,
    pub negative_count: usize,
}

/// The canonical reconstruction delay grid: 10⁻³–10⁴ τ0 at 240 points per
/// decade.
pub fn standard_delay_grid() -> Vec<f64> {
    log_grid(1e-3, 1e4, 1681).expect("static grid")
}

/// The canonical spectrum grid: 120 logarithmic angular frequencies across
/// 2π·[10⁻⁴, 10²] rad/τ0.
pub fn standard_omega_grid() -> Vec<f64> {
    use std::f64::consts::TAU;
    log_grid(TAU * 1e-4, TAU * 1e2, 120).expect("static grid")
}

/// Trapezoidal Wiener–Khinchin transform S(ω) = 2 ∫ K̂(Δ) cos(ωΔ) dΔ over
/// the measured delay window. Intervals touching a NaN sample are skipped.
pub fn cosine_transform(
    delays: &[f64],
    k_hat: &[f64],
    omegas: &[f64],
) -> Result<SpectrumEstimate> {
    if delays.len() != k_hat.len() {
        return Err(Error::domain(format!(
            "kernel estimate has {} delays but {} values",
            delays.len(),
            k_hat.len()
        )));
    }
    if delays.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "the transform needs at least 2 kernel samples, got {}",
            delays.len()
        )));
    }
    if delays.iter().any(|d| !d.is_finite() || *d <= 0.0)
        || delays.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::domain(
            "kernel delays must be positive, finite, strictly increasing".to_string(),
        ));
    }
    if omegas.is_empty() {
        return Err(Error::InsufficientData("no frequencies requested".to_string()));
    }
    if omegas.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::domain(
            "transform frequencies must be non-negative and finite".to_string(),
        ));
    }
    let mut s_nn = Vec::with_capacity(omegas.len());
    for &omega in omegas {
        let mut acc = 0.0;
        for i in 0..delays.len() - 1 {
            let (k0, k1) = (k_hat[i], k_hat[i + 1]);
            if !k0.is_finite() || !k1.is_finite() {
                continue;
            }
            let f0 = k0 * (omega * delays[i]).cos();
            let f1 = k1 * (omega * delays[i + 1]).cos();
            acc += 0.5 * (f0 + f1) * (delays[i + 1] - delays[i]);
        }
        s_nn.push(2.0 * acc);
    }
    let negative_count = s_nn.iter().filter(|s| **s < 0.0).count();
    Ok(SpectrumEstimate {
        omegas: omegas.to_vec(),
        s_nn,
        normalized: false,
        ir_cutoff: 1.0 / delays[delays.len() - 1],
        uv_cutoff: 1.0 / delays[0],
        negative_count,
    })
}

/// Rescales the spectrum to unit peak. Idempotent; fails with
/// [`Error::DegenerateSpectrum`] when no positive peak exists.
pub fn normalize_spectrum(estimate: &mut SpectrumEstimate) -> Result<()> {
    let max = estimate.s_nn.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max <= 0.0 || !max.is_finite() {
        return Err(Error::DegenerateSpectrum { max });
    }
    for s in &mut estimate.s_nn {
        *s /= max;
    }
    estimate.normalized = true;
    Ok(())
}

/// Writes a sweep as a two-column CSV plus a JSON metadata sidecar
/// (`foo.csv` → `foo.meta.json`).
pub fn write_sweep_csv(path: &Path, sweep: &DelaySweep) -> Result<()> {
    let mut body = String::from("# two-tooth visibility sweep\n# columns: delay (tau0), visibility\ndelta,visibility\n");
    for (d, v) in sweep.delays.iter().zip(&sweep.visibility) {
        body.push_str(&format!("{d:.16e},{v:.16e}\n"));
    }
    crate::io::write_atomic(path, body.as_bytes())?;
    let meta = serde_json::to_string_pretty(&sweep.meta).map_err(|e| {
        Error::domain(format!("could not serialize sweep metadata: {e}"))
    })?;
    crate::io::write_atomic(&sidecar_path(path), meta.as_bytes())?;
    Ok(())
}

/// Reads a sweep written by [`write_sweep_csv`]. Malformed rows carry their
/// 1-based line number.
pub fn read_sweep_csv(path: &Path) -> Result<DelaySweep> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), source: e })?;
    let sidecar = sidecar_path(path);
    let meta_text = std::fs::read_to_string(&sidecar)
        .map_err(|e| Error::Io { path: sidecar.display().to_string(), source: e })?;
    let meta: SweepMeta = serde_json::from_str(&meta_text).map_err(|e| Error::Parse {
        line: e.line(),
        message: format!("sweep metadata {}: {e}", sidecar.display()),
    })?;
    let (delays, visibility) = parse_delay_visibility(&text, path)?;
    DelaySweep::new(meta, delays, visibility)
}

/// Reads a probe-only reference sweep: the same two-column CSV layout as a
/// visibility sweep, but with no metadata sidecar.
pub fn read_probe_csv(path: &Path) -> Result<ProbeReference> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), source: e })?;
    let (delays, visibility) = parse_delay_visibility(&text, path)?;
    ProbeReference::new(delays, visibility)
}

fn parse_delay_visibility(text: &str, path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut delays = Vec::new();
    let mut visibility = Vec::new();
    let mut header_seen = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !header_seen {
            if trimmed != "delta,visibility" {
                return Err(Error::Parse {
                    line,
                    message: format!("expected header 'delta,visibility', got '{trimmed}'"),
                });
            }
            header_seen = true;
            continue;
        }
        let mut fields = trimmed.split(',');
        let (Some(df), Some(vf), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 comma-separated fields, got '{trimmed}'"),
            });
        };
        let d: f64 = df.trim().parse().map_err(|e| Error::Parse {
            line,
            message: format!("bad delay '{df}': {e}"),
        })?;
        let v: f64 = vf.trim().parse().map_err(|e| Error::Parse {
            line,
            message: format!("bad visibility '{vf}': {e}"),
        })?;
        delays.push(d);
        visibility.push(v);
    }
    if !header_seen {
        return Err(Error::InsufficientData(format!(
            "{} contains no header row",
            path.display()
        )));
    }
    Ok((delays, visibility))
}

/// The metadata sidecar that travels with a sweep CSV.
pub fn sidecar_path(path: &Path) -> std::path::PathBuf {
    path.with_extension("meta.json")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::{coherence_two, CombConfig, Regime};
    use crate::kernels::CorrelationTimeModel;
    use crate::physics::{occupation_variance, thermal_occupation, AbsorberParams, VarianceMode};
    use crate::testutil::assert_close;

    fn survey_meta() -> SweepMeta {
        SweepMeta {
            lambda: 0.5,
            tau1: 3.0,
            tau2: 3.0,
            alpha_sq: 1.0,
            variance: 1.0,
            probe_gamma: None,
            probe_corrected: false,
        }
    }

    #[test]
    fn inversion_round_trips_synthesized_sweeps() {
        let delays = standard_delay_grid();
        for kernel in [
            KernelModel::lorentzian_fixed(10.0).unwrap(),
            KernelModel::gaussian_white(1e-3).unwrap(),
            KernelModel::one_over_f(0.1, 0.6).unwrap(),
        ] {
            let sweep = synthesize_sweep(survey_meta(), &delays, &kernel, 0.020).unwrap();
            let est = invert_visibility(&sweep, BaselineMode::MetaVariance).unwrap();
            let k_tilde = est.normalized().unwrap();
            for (i, &d) in delays.iter().enumerate() {
                let truth = kernel.normalized(d, 0.020).unwrap();
                assert_close(k_tilde[i], truth, 1e-12, 1e-9);
            }
        }
    }

    #[test]
    fn inversion_round_trips_physical_coherence() {
        // The same inversion applied to the full coherence model on a
        // realizable comb geometry.
        let cfg = CombConfig::new(0.4, 0.2, 0.2, 1.0, 1.0).unwrap();
        let absorber = AbsorberParams::default();
        let kernel = KernelModel::lorentzian_crossover(CorrelationTimeModel::default());
        let t = 0.020;
        let n_bar = thermal_occupation(&absorber, t).unwrap();
        let var = occupation_variance(n_bar, VarianceMode::Approximate).unwrap();
        let delays: Vec<f64> = log_grid(0.4, 50.0, 40).unwrap();
        let mut visibility = Vec::new();
        for &d in &delays {
            let c = CombConfig::new(cfg.lambda, cfg.tau1, cfg.tau2, cfg.alpha_sq, d).unwrap();
            visibility.push(coherence_two(&c, &absorber, &kernel, t, Regime::Weak).unwrap());
        }
        let meta = SweepMeta {
            lambda: cfg.lambda,
            tau1: cfg.tau1,
            tau2: cfg.tau2,
            alpha_sq: cfg.alpha_sq,
            variance: var,
            probe_gamma: None,
            probe_corrected: false,
        };
        let sweep = DelaySweep::new(meta, delays.clone(), visibility).unwrap();
        let est = invert_visibility(&sweep, BaselineMode::MetaVariance).unwrap();
        let k_tilde = est.normalized().unwrap();
        for (i, &d) in delays.iter().enumerate() {
            assert_close(k_tilde[i], kernel.normalized(d, t).unwrap(), 1e-12, 1e-9);
        }
    }

    #[test]
    fn long_delay_baseline_matches_metadata_baseline() {
        let delays = standard_delay_grid();
        let kernel = KernelModel::lorentzian_fixed(10.0).unwrap();
        let sweep = synthesize_sweep(survey_meta(), &delays, &kernel, 0.020).unwrap();
        let est = invert_visibility(&sweep, BaselineMode::LongDelayAsymptote).unwrap();
        // K̃(10⁴) = e^(−1000) is identically zero in f64, so the estimated
        // baseline is exact.
        assert_close(est.variance, 1.0, 0.0, 1e-12);
        let k_tilde = est.normalized().unwrap();
        for (i, &d) in delays.iter().enumerate() {
            assert_close(k_tilde[i], kernel.normalized(d, 0.020).unwrap(), 1e-12, 1e-9);
        }
    }

    #[test]
    fn calibration_and_debias_agree_for_exponential_probe() {
        let delays = log_grid(1e-2, 2e2, 200).unwrap();
        let kernel = KernelModel::lorentzian_fixed(10.0).unwrap();
        let mut meta = survey_meta();
        meta.probe_gamma = Some(5e-3);
        let sweep = synthesize_sweep(meta, &delays, &kernel, 0.020).unwrap();

        // Route (a): divide out a probe reference measured on a coarser
        // grid, then invert.
        let ref_grid = log_grid(5e-3, 5e2, 9).unwrap();
        let reference = ProbeReference::from_rate(5e-3, &ref_grid).unwrap();
        let calibrated = calibrate_probe(&sweep, &reference, DEFAULT_CALIBRATION_FLOOR).unwrap();
        assert!(calibrated.meta.probe_corrected);
        let est_a = invert_visibility(&calibrated, BaselineMode::MetaVariance).unwrap();
        assert!(est_a.calibration_applied);

        // Route (b): invert raw, subtract the linear probe exponent.
        let raw = invert_visibility(&sweep, BaselineMode::MetaVariance).unwrap();
        let est_b = debias_linear(&raw, &meta).unwrap();
        assert!(est_b.debias_applied);

        for (i, &d) in delays.iter().enumerate() {
            assert_close(est_a.k_hat[i], est_b.k_hat[i], 1e-9, 1e-9);
            let truth = kernel.normalized(d, 0.020).unwrap();
            assert_close(est_a.k_hat[i], truth, 1e-9, 1e-9);
        }
    }

    #[test]
    fn calibration_guards_against_dead_reference() {
        let delays = log_grid(1.0, 1e3, 50).unwrap();
        let kernel = KernelModel::lorentzian_fixed(10.0).unwrap();
        let mut meta = survey_meta();
        meta.lambda = 0.05; // keep the kernel part of the visibility alive
        meta.probe_gamma = Some(0.02); // C_p²(10³) = e^(−40) ≪ floor
        let sweep = synthesize_sweep(meta, &delays, &kernel, 0.020).unwrap();
        let reference = ProbeReference::from_rate(0.02, &delays).unwrap();
        let err = calibrate_probe(&sweep, &reference, DEFAULT_CALIBRATION_FLOOR).unwrap_err();
        assert!(matches!(err, Error::UnreliableCalibration { .. }));
        // Long-delay baseline estimation refuses uncorrected probe data.
        assert!(invert_visibility(&sweep, BaselineMode::LongDelayAsymptote).is_err());
    }

    #[test]
    fn transform_recovers_lorentzian_spectrum() {
        let delays = standard_delay_grid();
        let tau_c = 10.0;
        let kernel = KernelModel::lorentzian_fixed(tau_c).unwrap();
        let sweep = synthesize_sweep(survey_meta(), &delays, &kernel, 0.020).unwrap();
        let est = invert_visibility(&sweep, BaselineMode::MetaVariance).unwrap();
        let omegas = standard_omega_grid();
        let spec = cosine_transform(&est.delays, &est.k_hat, &omegas).unwrap();
        let mut checked = 0;
        for (i, &w) in omegas.iter().enumerate() {
            if w < 0.1 / tau_c || w > 10.0 / tau_c {
                continue;
            }
            let analytic = kernel.analytic_spectrum(w, 0.020, 1.0).unwrap();
            assert_close(spec.s_nn[i], analytic, 0.0, 5e-2);
            checked += 1;
        }
        assert!(checked > 20, "band check covered only {checked} frequencies");
    }

    #[test]
    fn transform_is_grid_converged() {
        // Doubling the quadrature density moves the in-band spectrum by
        // well under the 5% accuracy budget.
        let tau_c = 10.0;
        let kernel = KernelModel::lorentzian_fixed(tau_c).unwrap();
        let omegas: Vec<f64> = log_grid(0.1 / tau_c, 10.0 / tau_c, 25).unwrap();
        let mut results = Vec::new();
        for n in [1681usize, 3361] {
            let delays = log_grid(1e-3, 1e4, n).unwrap();
            let k: Vec<f64> =
                delays.iter().map(|&d| kernel.normalized(d, 0.020).unwrap()).collect();
            results.push(cosine_transform(&delays, &k, &omegas).unwrap().s_nn);
        }
        for (a, b) in results[0].iter().zip(&results[1]) {
            assert_close(*a, *b, 0.0, 5e-3);
        }
    }

    #[test]
    fn transform_skips_nan_intervals_and_counts_negatives() {
        let delays = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        let k_with_nan = vec![1.0, f64::NAN, 0.5, 0.2, 0.1];
        let spec = cosine_transform(&delays, &k_with_nan, &[0.0]).unwrap();
        // Intervals [1,2] and [2,3] are dropped: ∫ = 0.35 + 0.15 over the
        // surviving two, S = 2∫.
        assert_close(spec.s_nn[0], 2.0 * (0.35 + 0.15), 0.0, 1e-12);

        let k_osc = vec![1.0, -1.0, 1.0, -1.0, 1.0];
        let spec2 = cosine_transform(&delays, &k_osc, &[0.0, 0.5]).unwrap();
        assert_eq!(spec2.s_nn[0], 0.0);
        assert!(spec2.negative_count <= 2);
        let spec3 = cosine_transform(&delays, &[-1.0; 5], &[0.0]).unwrap();
        assert_eq!(spec3.negative_count, 1);
        assert!(spec3.s_nn[0] < 0.0);
    }

    #[test]
    fn normalization_is_idempotent_and_guards_degenerate_input() {
        let delays = log_grid(1e-2, 1e2, 50).unwrap();
        let kernel = KernelModel::lorentzian_fixed(1.0).unwrap();
        let k: Vec<f64> = delays.iter().map(|&d| kernel.normalized(d, 0.020).unwrap()).collect();
        let mut spec = cosine_transform(&delays, &k, &standard_omega_grid()).unwrap();
        normalize_spectrum(&mut spec).unwrap();
        assert!(spec.normalized);
        let peak = spec.s_nn.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert_close(peak, 1.0, 0.0, 1e-12);
        let copy = spec.s_nn.clone();
        normalize_spectrum(&mut spec).unwrap();
        for (a, b) in spec.s_nn.iter().zip(&copy) {
            assert_eq!(a.to_bits(), b.to_bits());
        }

        let mut degenerate = cosine_transform(&delays, &vec![-1.0; 50], &[0.0]).unwrap();
        assert!(matches!(
            normalize_spectrum(&mut degenerate),
            Err(Error::DegenerateSpectrum { .. })
        ));
    }

    #[test]
    fn csv_round_trip_and_line_numbered_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.csv");
        let delays = log_grid(1e-2, 1e2, 30).unwrap();
        let kernel = KernelModel::lorentzian_fixed(10.0).unwrap();
        let mut meta = survey_meta();
        meta.probe_gamma = Some(1e-3);
        let sweep = synthesize_sweep(meta, &delays, &kernel, 0.020).unwrap();
        write_sweep_csv(&path, &sweep).unwrap();
        let back = read_sweep_csv(&path).unwrap();
        assert_eq!(back.meta, sweep.meta);
        assert_eq!(back.delays.len(), sweep.delays.len());
        for i in 0..sweep.delays.len() {
            assert_eq!(back.delays[i].to_bits(), sweep.delays[i].to_bits());
            assert_eq!(back.visibility[i].to_bits(), sweep.visibility[i].to_bits());
        }

        // Corrupt one data row; the error names its line.
        let mut text = std::fs::read_to_string(&path).unwrap();
        text = text.replace(&format!("{:.16e}", sweep.delays[2]), "oops");
        std::fs::write(&path, text).unwrap();
        let err = read_sweep_csv(&path).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 6), // 2 comments + header + 2 rows
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn sweep_validation_rejects_malformed_data() {
        let meta = survey_meta();
        assert!(DelaySweep::new(meta, vec![1.0, 2.0], vec![0.5]).is_err());
        assert!(DelaySweep::new(meta, vec![2.0, 1.0], vec![0.5, 0.5]).is_err());
        assert!(DelaySweep::new(meta, vec![1.0, 2.0], vec![0.5, 1.5]).is_err());
        assert!(DelaySweep::new(meta, vec![1.0, 2.0], vec![0.0, 0.5]).is_err());
        assert!(DelaySweep::new(meta, vec![1.0], vec![0.5]).is_err());
        let mut bad = meta;
        bad.lambda = -1.0;
        assert!(DelaySweep::new(bad, vec![1.0, 2.0], vec![0.5, 0.5]).is_err());
    }
}
