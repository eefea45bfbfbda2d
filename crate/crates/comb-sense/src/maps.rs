//! Memory-efficiency maps over the (temperature, delay) plane.
//!
//! A map evaluates the full per-point breakdown — kernel value, variance
//! gain, kernel responsivity, two-tooth Fisher information, and the
//! efficiency ratio A — on a rectangular grid. Rows (fixed temperature) are
//! computed in parallel; every point is independent and evaluated with the
//! same floating-point sequence, so results are bit-identical for any
//! thread count.
//!
//! Points where the quantities degenerate (an uncoupled comb, underflowed
//! coherence) are recorded as NaN rather than aborting the sweep.

use rayon::prelude::*;

use crate::coherence::{CombConfig, DimensionlessCoupling, Regime};
use crate::error::{Error, Result};
use crate::grid::{linear_grid, log_grid};
use crate::kernels::KernelModel;
use crate::metrology::qfi_breakdown;
use crate::physics::AbsorberParams;

/// Grid axes: temperatures in kelvin, tooth delays in units of τ0.
#[derive(Debug, Clone, PartialEq)]
pub struct MapAxes {
    pub temperatures: Vec<f64>,
    pub delays: Vec<f64>,
}

impl MapAxes {
    pub fn new(temperatures: Vec<f64>, delays: Vec<f64>) -> Result<Self> {
        for (name, axis) in [("temperature", &temperatures), ("delay", &delays)] {
            if axis.is_empty() {
                return Err(Error::domain(format!("{name} axis is empty")));
            }
            if axis.iter().any(|v| !v.is_finite() || *v <= 0.0) {
                return Err(Error::domain(format!(
                    "{name} axis must be positive and finite everywhere"
                )));
            }
            if axis.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::domain(format!("{name} axis must be strictly increasing")));
            }
        }
        Ok(Self { temperatures, delays })
    }

    /// The canonical survey window: 60 linear temperatures across
    /// 10–50 mK by 120 logarithmic delays across 10⁻²–10² τ0.
    pub fn standard() -> Self {
        Self {
            temperatures: linear_grid(0.010, 0.050, 60).expect("static grid"),
            delays: log_grid(1e-2, 1e2, 120).expect("static grid"),
        }
    }
}

/// Per-point report carried by [`EfficiencyMap`]; NaN marks a degenerate
/// point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapPoint {
    pub n_bar: f64,
    pub k_tilde: f64,
    pub dk_tilde_dt: f64,
    /// 1 + K̃.
    pub variance_gain: f64,
    /// S_K̃ = ∂_T K̃ / (1 + K̃).
    pub kernel_responsivity: f64,
    pub f2: f64,
    pub advantage: f64,
}

impl MapPoint {
    fn degenerate() -> Self {
        Self {
            n_bar: f64::NAN,
            k_tilde: f64::NAN,
            dk_tilde_dt: f64::NAN,
            variance_gain: f64::NAN,
            kernel_responsivity: f64::NAN,
            f2: f64::NAN,
            advantage: f64::NAN,
        }
    }
}

/// Memory-efficiency survey on a (T, Δ) grid; `points[i][j]` belongs to
/// `axes.temperatures[i]`, `axes.delays[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyMap {
    pub axes: MapAxes,
    pub points: Vec<Vec<MapPoint>>,
}

fn evaluate_point(
    coupling: DimensionlessCoupling,
    alpha_sq: f64,
    absorber: &AbsorberParams,
    kernel: &KernelModel,
    temperature: f64,
    delta: f64,
    regime: Regime,
) -> MapPoint {
    let Ok(cfg) =
        CombConfig::from_coupling(coupling, delta).and_then(|c| c.with_photons(alpha_sq))
    else {
        return MapPoint::degenerate();
    };
    match qfi_breakdown(&cfg, absorber, kernel, temperature, regime) {
        Ok(b) => MapPoint {
            n_bar: b.n_bar,
            k_tilde: b.k_tilde,
            dk_tilde_dt: b.dk_tilde_dt,
            variance_gain: b.approx.variance_gain,
            kernel_responsivity: b.approx.s_kernel,
            f2: b.f2,
            advantage: b.advantage,
        },
        Err(_) => MapPoint::degenerate(),
    }
}

/// Evaluates the survey at coupling g with clock photon number `alpha_sq`
/// over the given axes.
pub fn efficiency_map(
    coupling: DimensionlessCoupling,
    alpha_sq: f64,
    absorber: &AbsorberParams,
    kernel: &KernelModel,
    axes: MapAxes,
    regime: Regime,
) -> EfficiencyMap {
    let points: Vec<Vec<MapPoint>> = axes
        .temperatures
        .par_iter()
        .map(|&t| {
            axes.delays
                .iter()
                .map(|&d| evaluate_point(coupling, alpha_sq, absorber, kernel, t, d, regime))
                .collect()
        })
        .collect();
    EfficiencyMap { axes, points }
}

/// Efficiency along a delay axis at fixed temperature.
pub fn advantage_cut(
    coupling: DimensionlessCoupling,
    alpha_sq: f64,
    absorber: &AbsorberParams,
    kernel: &KernelModel,
    temperature: f64,
    delays: &[f64],
    regime: Regime,
) -> Vec<f64> {
    delays
        .iter()
        .map(|&d| {
            evaluate_point(coupling, alpha_sq, absorber, kernel, temperature, d, regime).advantage
        })
        .collect()
}

/// Location of the per-temperature efficiency minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdvantageMinimum {
    pub temperature: f64,
    pub delta: f64,
    pub advantage: f64,
}

/// The delay minimizing A for each temperature row (NaN points skipped;
/// rows that are entirely NaN are omitted).
pub fn minimum_locus(map: &EfficiencyMap) -> Vec<AdvantageMinimum> {
    map.points
        .iter()
        .zip(&map.axes.temperatures)
        .filter_map(|(row, &t)| {
            row.iter()
                .zip(&map.axes.delays)
                .filter(|(p, _)| p.advantage.is_finite())
                .min_by(|(a, _), (b, _)| a.advantage.total_cmp(&b.advantage))
                .map(|(p, &d)| AdvantageMinimum { temperature: t, delta: d, advantage: p.advantage })
        })
        .collect()
}
