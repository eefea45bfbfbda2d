//! Run configuration: a single JSON document that pins every knob of a
//! command-line run.
//!
//! Every field has a default, so `{}` is a complete configuration and a
//! missing file means "all defaults". Unknown keys are rejected — a typo'd
//! option must fail loudly rather than silently fall back. Temperatures in
//! files are in millikelvin; delays and rates in units of τ0.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::coherence::Regime;
use crate::error::{Error, Result};
use crate::grid::{linear_grid, log_grid};
use crate::kernels::{CorrelationTimeModel, KernelModel, TabulatedKernel};
use crate::oracle::OracleConfig;
use crate::physics::{AbsorberParams, VarianceMode};
use crate::spectroscopy::BaselineMode;

/// Axis specification; `scale` decides linear or logarithmic spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub scale: GridScale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridScale {
    Linear,
    Log,
}

impl GridSpec {
    pub fn build(&self) -> Result<Vec<f64>> {
        match self.scale {
            GridScale::Linear => linear_grid(self.start, self.stop, self.points),
            GridScale::Log => log_grid(self.start, self.stop, self.points),
        }
    }
}

fn default_tau_max() -> f64 {
    6.0
}
fn default_tau_min() -> f64 {
    0.01
}
fn default_t_c_mk() -> f64 {
    20.0
}
fn default_gamma() -> f64 {
    8.0
}
fn default_sigma_w() -> f64 {
    1e-3
}
fn default_tau_f() -> f64 {
    0.1
}
fn default_alpha() -> f64 {
    0.6
}

/// Kernel model selection, tagged by `model`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelSpec {
    /// Lorentzian memory whose correlation time crosses over with
    /// temperature.
    LorentzianCrossover {
        #[serde(default = "default_tau_max")]
        tau_max: f64,
        #[serde(default = "default_tau_min")]
        tau_min: f64,
        #[serde(default = "default_t_c_mk")]
        t_c_mk: f64,
        #[serde(default = "default_gamma")]
        gamma: f64,
    },
    /// Lorentzian memory with a fixed correlation time.
    LorentzianFixed { tau_c: f64 },
    /// Near-white noise with a short Gaussian correlation window.
    GaussianWhite {
        #[serde(default = "default_sigma_w")]
        sigma_w: f64,
    },
    /// Algebraic 1/f-like memory.
    OneOverF {
        #[serde(default = "default_tau_f")]
        tau_f: f64,
        #[serde(default = "default_alpha")]
        alpha: f64,
    },
    /// Measured kernel samples from a CSV file (path relative to the
    /// configuration file).
    Tabulated { path: PathBuf },
}

impl Default for KernelSpec {
    fn default() -> Self {
        Self::LorentzianCrossover {
            tau_max: default_tau_max(),
            tau_min: default_tau_min(),
            t_c_mk: default_t_c_mk(),
            gamma: default_gamma(),
        }
    }
}

impl KernelSpec {
    /// Materializes the kernel; `base_dir` anchors relative tabulated paths.
    pub fn build(&self, base_dir: &Path) -> Result<KernelModel> {
        match self {
            Self::LorentzianCrossover { tau_max, tau_min, t_c_mk, gamma } => {
                Ok(KernelModel::lorentzian_crossover(CorrelationTimeModel::new(
                    *tau_max,
                    *tau_min,
                    t_c_mk * 1e-3,
                    *gamma,
                )?))
            }
            Self::LorentzianFixed { tau_c } => KernelModel::lorentzian_fixed(*tau_c),
            Self::GaussianWhite { sigma_w } => KernelModel::gaussian_white(*sigma_w),
            Self::OneOverF { tau_f, alpha } => KernelModel::one_over_f(*tau_f, *alpha),
            Self::Tabulated { path } => {
                let resolved =
                    if path.is_relative() { base_dir.join(path) } else { path.clone() };
                Ok(KernelModel::Tabulated(TabulatedKernel::from_csv(&resolved)?))
            }
        }
    }
}

/// Reconstruction pipeline options.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReconstructionSpec {
    pub baseline: BaselineMode,
    /// Rescale the reconstructed spectrum to unit peak.
    pub normalize: bool,
    /// Reliability floor for probe calibration (squared probe envelope).
    pub calibration_floor: f64,
    /// Delay grid used when synthesizing sweeps (τ0).
    pub sweep_delays: GridSpec,
    /// Output frequency grid (cycles/τ0).
    pub frequencies: GridSpec,
}

impl Default for ReconstructionSpec {
    fn default() -> Self {
        Self {
            baseline: BaselineMode::MetaVariance,
            normalize: true,
            calibration_floor: crate::spectroscopy::DEFAULT_CALIBRATION_FLOOR,
            sweep_delays: GridSpec { start: 1e-3, stop: 1e4, points: 1681, scale: GridScale::Log },
            frequencies: GridSpec { start: 1e-4, stop: 1e2, points: 120, scale: GridScale::Log },
        }
    }
}

/// The complete run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Absorber mode frequency ω_a/2π in GHz.
    pub frequency_ghz: f64,
    pub variance_mode: VarianceMode,
    /// Envelope/QFI regime.
    pub regime: Regime,
    /// Comb coupling strength g = (λτ)².
    pub coupling_g: f64,
    /// Clock mean photon number |α|².
    pub alpha_sq: f64,
    /// Probe dephasing rate Γ_φ^p (1/τ0); null disables the probe factor.
    pub probe_gamma: Option<f64>,
    /// Temperature axis (mK).
    pub temperatures_mk: GridSpec,
    /// Tooth-delay axis (τ0).
    pub delays: GridSpec,
    /// Temperatures (mK) for 1-D efficiency cuts.
    pub cut_temperatures_mk: Vec<f64>,
    pub kernel: KernelSpec,
    pub oracle: OracleConfig,
    pub reconstruction: ReconstructionSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            frequency_ghz: 1.0,
            variance_mode: VarianceMode::Approximate,
            regime: Regime::Weak,
            coupling_g: 0.05,
            alpha_sq: 1.0,
            probe_gamma: None,
            temperatures_mk: GridSpec {
                start: 10.0,
                stop: 50.0,
                points: 60,
                scale: GridScale::Linear,
            },
            delays: GridSpec { start: 1e-2, stop: 1e2, points: 120, scale: GridScale::Log },
            cut_temperatures_mk: vec![15.0, 30.0, 45.0],
            kernel: KernelSpec::default(),
            oracle: OracleConfig { n_samples: 100_000, seed: 42, regime_guard: 0.02 },
            reconstruction: ReconstructionSpec::default(),
        }
    }
}

impl RunConfig {
    /// Parses a configuration file; `Ok(None)` path means all-defaults.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io { path: path.display().to_string(), source: e })?;
        let cfg: RunConfig = serde_json::from_str(&text).map_err(|e| Error::Config(format!(
            "{}: {e}",
            path.display()
        )))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.frequency_ghz.is_finite() || self.frequency_ghz <= 0.0 {
            return Err(Error::Config(format!(
                "frequency_ghz must be positive and finite, got {}",
                self.frequency_ghz
            )));
        }
        if !self.coupling_g.is_finite() || self.coupling_g < 0.0 {
            return Err(Error::Config(format!(
                "coupling_g must be non-negative and finite, got {}",
                self.coupling_g
            )));
        }
        if !self.alpha_sq.is_finite() || self.alpha_sq <= 0.0 {
            return Err(Error::Config(format!(
                "alpha_sq must be positive and finite, got {}",
                self.alpha_sq
            )));
        }
        if let Some(gp) = self.probe_gamma {
            if !gp.is_finite() || gp < 0.0 {
                return Err(Error::Config(format!(
                    "probe_gamma must be non-negative and finite, got {gp}"
                )));
            }
        }
        if self.cut_temperatures_mk.iter().any(|t| !t.is_finite() || *t <= 0.0) {
            return Err(Error::Config(
                "cut_temperatures_mk must all be positive and finite".to_string(),
            ));
        }
        self.oracle.validate()?;
        if !self.reconstruction.calibration_floor.is_finite()
            || self.reconstruction.calibration_floor <= 0.0
        {
            return Err(Error::Config(format!(
                "reconstruction.calibration_floor must be positive and finite, got {}",
                self.reconstruction.calibration_floor
            )));
        }
        Ok(())
    }

    pub fn absorber(&self) -> Result<AbsorberParams> {
        AbsorberParams::with_frequency_ghz(self.frequency_ghz, self.variance_mode)
    }

    /// Temperature axis in kelvin.
    pub fn temperatures(&self) -> Result<Vec<f64>> {
        Ok(self.temperatures_mk.build()?.into_iter().map(|t| t * 1e-3).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_the_default_config() {
        let cfg: RunConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(cfg, RunConfig::default());
        cfg.validate().unwrap();
        assert_eq!(cfg.oracle.seed, 42);
        assert_eq!(cfg.temperatures_mk.points, 60);
        assert_eq!(cfg.delays.points, 120);
    }

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let err = serde_json::from_str::<RunConfig>("{\"coupling\": 0.05}").unwrap_err();
        assert!(err.to_string().contains("coupling"), "{err}");
        let err2 =
            serde_json::from_str::<RunConfig>("{\"oracle\": {\"n_samples\": 5000, \"sed\": 1}}")
                .unwrap_err();
        assert!(err2.to_string().contains("sed"), "{err2}");
    }

    #[test]
    fn kernel_variants_parse_with_defaults() {
        let spec: KernelSpec =
            serde_json::from_str("{\"model\": \"lorentzian_crossover\"}").unwrap();
        assert_eq!(spec, KernelSpec::default());
        let spec: KernelSpec =
            serde_json::from_str("{\"model\": \"lorentzian_fixed\", \"tau_c\": 10.0}").unwrap();
        let model = spec.build(Path::new(".")).unwrap();
        assert_eq!(model.name(), "lorentzian_fixed");
        let spec: KernelSpec = serde_json::from_str("{\"model\": \"gaussian_white\"}").unwrap();
        assert!(matches!(spec, KernelSpec::GaussianWhite { sigma_w } if sigma_w == 1e-3));
        let spec: KernelSpec = serde_json::from_str("{\"model\": \"one_over_f\"}").unwrap();
        assert!(matches!(spec, KernelSpec::OneOverF { tau_f, alpha } if tau_f == 0.1 && alpha == 0.6));
        assert!(serde_json::from_str::<KernelSpec>("{\"model\": \"pink\"}").is_err());
    }

    #[test]
    fn crossover_units_are_millikelvin_in_files() {
        let spec: KernelSpec = serde_json::from_str(
            "{\"model\": \"lorentzian_crossover\", \"t_c_mk\": 20.0}",
        )
        .unwrap();
        let model = spec.build(Path::new(".")).unwrap();
        // τ_c at the crossover temperature: (τ_max + τ_min)/2 by symmetry.
        let KernelModel::LorentzianCrossover(ct) = &model else { panic!("wrong variant") };
        crate::testutil::assert_close(ct.evaluate(0.020).unwrap(), 3.005, 0.0, 1e-12);
    }

    #[test]
    fn tabulated_paths_resolve_relative_to_config_dir() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join("kernel.csv"),
            "delta,k_tilde\n0.1,1.0\n1.0,0.5\n10.0,0.1\n",
        )
        .unwrap();
        let spec = KernelSpec::Tabulated { path: PathBuf::from("kernel.csv") };
        let model = spec.build(dir.path()).unwrap();
        assert_eq!(model.name(), "tabulated");
        assert!(spec.build(Path::new("/nonexistent")).is_err());
    }

    #[test]
    fn validation_rejects_unphysical_values() {
        let cfg = RunConfig { frequency_ghz: -1.0, ..RunConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = RunConfig { coupling_g: f64::NAN, ..RunConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = RunConfig { probe_gamma: Some(-0.1), ..RunConfig::default() };
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::default();
        cfg.oracle.n_samples = 10;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = RunConfig::default();
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
    }
}
