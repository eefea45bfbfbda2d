//! Command implementations behind the thin CLI.
//!
//! Every command reads its knobs from one [`RunConfig`], writes CSV
//! artifacts into an output directory, and finishes with a `manifest.json`
//! recording the tool version, a hash of the effective configuration, the
//! seed, and a content hash of every artifact — enough to certify that two
//! runs produced byte-identical results. CSV cell values are printed with
//! 17 significant digits so files round-trip through `f64` exactly;
//! timestamps live only in the manifest, never in data files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coherence::{CombConfig, DimensionlessCoupling, Regime};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::io::write_atomic;
use crate::kernels::KernelModel;
use crate::maps::{advantage_cut, efficiency_map, minimum_locus, MapAxes};
use crate::oracle::{standard_validation_points, validate_point, ValidationOutcome};
use crate::physics::{occupation_derivative, thermal_occupation, variance_with_derivative, DerivativeMode};
use crate::spectroscopy::{
    calibrate_probe, cosine_transform, debias_linear, invert_visibility, normalize_spectrum,
    read_probe_csv, read_sweep_csv, synthesize_sweep, write_sweep_csv, KernelEstimate,
    SweepMeta,
};

/// Everything a command needs: the resolved configuration plus the
/// directories that anchor its inputs and outputs.
#[derive(Debug, Clone)]
pub struct RunContext {
    pub config: RunConfig,
    pub out_dir: PathBuf,
    /// Directory of the configuration file; anchors relative kernel paths.
    pub config_dir: PathBuf,
}

impl RunContext {
    pub fn new(config: RunConfig, out_dir: PathBuf, config_dir: PathBuf) -> Result<Self> {
        config.validate()?;
        Ok(Self { config, out_dir, config_dir })
    }

    pub fn kernel(&self) -> Result<KernelModel> {
        self.config.kernel.build(&self.config_dir)
    }

    pub fn coupling(&self) -> Result<DimensionlessCoupling> {
        DimensionlessCoupling::new(self.config.coupling_g)
    }
}

/// 17-significant-digit scientific notation; round-trips f64 exactly.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.16e}")
    }
}

fn write_csv(path: &Path, comments: &[String], header: &str, rows: &[Vec<f64>]) -> Result<()> {
    let mut body = String::new();
    for c in comments {
        let _ = writeln!(body, "# {c}");
    }
    let _ = writeln!(body, "{header}");
    for row in rows {
        let mut first = true;
        for v in row {
            if !first {
                body.push(',');
            }
            body.push_str(&fmt_float(*v));
            first = false;
        }
        body.push('\n');
    }
    write_atomic(path, body.as_bytes())
}

/// Seconds since the Unix epoch.
pub fn unix_timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// One artifact recorded in the manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    /// Path relative to the output directory.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

/// The provenance record written next to every command's outputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// SHA-256 of the effective configuration's canonical JSON.
    pub config_sha256: String,
    pub seed: u64,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub outputs: Vec<OutputRecord>,
}

/// Hashes the written artifacts and lands `manifest.json` in the output
/// directory.
pub fn write_manifest(
    ctx: &RunContext,
    command: &str,
    started_unix: u64,
    files: &[PathBuf],
) -> Result<PathBuf> {
    let config_json = serde_json::to_string(&ctx.config)
        .map_err(|e| Error::State(format!("could not serialize the configuration: {e}")))?;
    let mut outputs = Vec::with_capacity(files.len());
    for f in files {
        let bytes = std::fs::read(f)
            .map_err(|e| Error::Io { path: f.display().to_string(), source: e })?;
        let rel = f.strip_prefix(&ctx.out_dir).unwrap_or(f);
        outputs.push(OutputRecord {
            path: rel.display().to_string(),
            sha256: sha256_hex(&bytes),
            bytes: bytes.len() as u64,
        });
    }
    let manifest = RunManifest {
        tool: "comb-sense".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: command.to_string(),
        config_sha256: sha256_hex(config_json.as_bytes()),
        seed: ctx.config.oracle.seed,
        started_unix,
        finished_unix: unix_timestamp(),
        outputs,
    };
    let path = ctx.out_dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::State(format!("could not serialize the manifest: {e}")))?;
    write_atomic(&path, text.as_bytes())?;
    Ok(path)
}

/// Thermal occupation, responsivity, and variance over the temperature
/// grid → `nbar.csv`.
pub fn cmd_nbar(ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let absorber = ctx.config.absorber()?;
    let mk = ctx.config.temperatures_mk.build()?;
    let mut rows = Vec::with_capacity(mk.len());
    for &t_mk in &mk {
        let t = t_mk * 1e-3;
        let n = thermal_occupation(&absorber, t)?;
        let dn = occupation_derivative(&absorber, t, DerivativeMode::Exact)?;
        let (var, dvar) = variance_with_derivative(&absorber, t)?;
        rows.push(vec![t_mk, n, dn, var, dvar]);
    }
    let path = ctx.out_dir.join("nbar.csv");
    write_csv(
        &path,
        &[
            "thermal occupation of the absorber mode".to_string(),
            format!("mode frequency: {} GHz", ctx.config.frequency_ghz),
            format!("variance convention: {:?}", ctx.config.variance_mode),
        ],
        "temperature_mk,n_bar,dn_bar_dt,variance,dvariance_dt",
        &rows,
    )?;
    Ok(vec![path])
}

fn correlation_time_at(kernel: &KernelModel, temperature: f64) -> f64 {
    match kernel {
        KernelModel::LorentzianCrossover(ct) => {
            ct.evaluate(temperature).unwrap_or(f64::NAN)
        }
        KernelModel::LorentzianFixed { tau_c } => *tau_c,
        _ => f64::NAN,
    }
}

/// Fisher-information and memory-efficiency map over (T, Δ) →
/// `qfi_map.csv` + `advantage_minima.csv`.
pub fn cmd_qfi_map(ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let absorber = ctx.config.absorber()?;
    let kernel = ctx.kernel()?;
    let mk = ctx.config.temperatures_mk.build()?;
    let kelvin: Vec<f64> = mk.iter().map(|t| t * 1e-3).collect();
    let delays = ctx.config.delays.build()?;
    let axes = MapAxes::new(kelvin, delays)?;
    let map = efficiency_map(
        ctx.coupling()?,
        ctx.config.alpha_sq,
        &absorber,
        &kernel,
        axes,
        ctx.config.regime,
    );

    let mut rows = Vec::with_capacity(mk.len() * map.axes.delays.len());
    for (i, &t_mk) in mk.iter().enumerate() {
        for (j, &d) in map.axes.delays.iter().enumerate() {
            let p = &map.points[i][j];
            rows.push(vec![
                t_mk,
                d,
                p.n_bar,
                p.k_tilde,
                p.dk_tilde_dt,
                p.variance_gain,
                p.kernel_responsivity,
                p.f2,
                p.advantage,
            ]);
        }
    }
    let map_path = ctx.out_dir.join("qfi_map.csv");
    write_csv(
        &map_path,
        &[
            "memory-efficiency survey over (temperature, tooth delay)".to_string(),
            format!("kernel: {}", kernel.name()),
            format!("coupling g = {}, regime = {:?}", ctx.config.coupling_g, ctx.config.regime),
            "advantage = F2 / (F1 + F1)".to_string(),
        ],
        "temperature_mk,delta,n_bar,k_tilde,dk_tilde_dt,variance_gain,kernel_responsivity,f2,advantage",
        &rows,
    )?;

    let locus = minimum_locus(&map);
    let locus_rows: Vec<Vec<f64>> = locus
        .iter()
        .map(|m| {
            vec![
                m.temperature * 1e3,
                m.delta,
                m.advantage,
                correlation_time_at(&kernel, m.temperature),
            ]
        })
        .collect();
    let locus_path = ctx.out_dir.join("advantage_minima.csv");
    write_csv(
        &locus_path,
        &[
            "per-temperature efficiency minimum and the memory time it tracks".to_string(),
        ],
        "temperature_mk,delta_min,advantage_min,tau_c",
        &locus_rows,
    )?;
    Ok(vec![map_path, locus_path])
}

/// Efficiency cuts A(Δ) at the configured temperatures →
/// `advantage_cut.csv`.
pub fn cmd_advantage_cut(ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let absorber = ctx.config.absorber()?;
    let kernel = ctx.kernel()?;
    let delays = ctx.config.delays.build()?;
    let coupling = ctx.coupling()?;
    let mut rows = Vec::new();
    for &t_mk in &ctx.config.cut_temperatures_mk {
        let cut = advantage_cut(
            coupling,
            ctx.config.alpha_sq,
            &absorber,
            &kernel,
            t_mk * 1e-3,
            &delays,
            ctx.config.regime,
        );
        for (j, &d) in delays.iter().enumerate() {
            rows.push(vec![t_mk, d, cut[j]]);
        }
    }
    let path = ctx.out_dir.join("advantage_cut.csv");
    write_csv(
        &path,
        &[
            "memory-efficiency cuts at fixed temperatures".to_string(),
            format!("kernel: {}", kernel.name()),
        ],
        "temperature_mk,delta,advantage",
        &rows,
    )?;
    Ok(vec![path])
}

/// Monte Carlo validation of the analytic envelopes →
/// `oracle_validation.csv` plus a stdout table. Returns the artifact list
/// and the number of failed points.
pub fn cmd_oracle(ctx: &RunContext) -> Result<(Vec<PathBuf>, usize)> {
    let absorber = ctx.config.absorber()?;
    let coupling = ctx.coupling()?;
    let points = standard_validation_points();
    let mut outcomes: Vec<ValidationOutcome> = Vec::with_capacity(points.len());
    for p in &points {
        outcomes.push(validate_point(p, coupling, &absorber, &ctx.config.oracle)?);
    }

    let mut body = String::new();
    let _ = writeln!(body, "# stochastic-oracle validation of analytic coherence values");
    let _ = writeln!(
        body,
        "# {} samples per point, seed {}, pass = |z| <= 3",
        ctx.config.oracle.n_samples, ctx.config.oracle.seed
    );
    let _ = writeln!(body, "label,analytic,mc_mean,mc_std_error,z,pass");
    let mut failed = 0usize;
    for o in &outcomes {
        let _ = writeln!(
            body,
            "{},{},{},{},{},{}",
            o.label,
            fmt_float(o.analytic),
            fmt_float(o.estimate.mean),
            fmt_float(o.estimate.std_error),
            fmt_float(o.z),
            o.pass
        );
        println!(
            "{} {:42} z = {:+6.2}",
            if o.pass { "ok  " } else { "FAIL" },
            o.label,
            o.z
        );
        if !o.pass {
            failed += 1;
        }
    }
    println!("{} of {} validation points passed", outcomes.len() - failed, outcomes.len());
    let path = ctx.out_dir.join("oracle_validation.csv");
    write_atomic(&path, body.as_bytes())?;
    Ok((vec![path], failed))
}

/// Recovers the correlation kernel and noise spectrum from a visibility
/// sweep → `kernel_estimate.csv` + `spectrum.csv`.
pub fn cmd_reconstruct(
    ctx: &RunContext,
    input: &Path,
    probe_reference: Option<&Path>,
) -> Result<Vec<PathBuf>> {
    let sweep = read_sweep_csv(input)?;
    let rec = &ctx.config.reconstruction;
    let needs_probe_removal = sweep.meta.probe_gamma.is_some() && !sweep.meta.probe_corrected;
    let (estimate, probe_note): (KernelEstimate, String) = if needs_probe_removal {
        match probe_reference {
            Some(pr) => {
                let reference = read_probe_csv(pr)?;
                let calibrated = calibrate_probe(&sweep, &reference, rec.calibration_floor)?;
                (
                    invert_visibility(&calibrated, rec.baseline)?,
                    format!("probe removed by calibration against {}", pr.display()),
                )
            }
            None => {
                let raw = invert_visibility(&sweep, rec.baseline)?;
                (
                    debias_linear(&raw, &sweep.meta)?,
                    "probe removed by linear debias from metadata rate".to_string(),
                )
            }
        }
    } else {
        (invert_visibility(&sweep, rec.baseline)?, "no probe correction needed".to_string())
    };

    let k_tilde: Vec<f64> = estimate
        .normalized()
        .unwrap_or_else(|_| vec![f64::NAN; estimate.k_hat.len()]);
    let kernel_rows: Vec<Vec<f64>> = estimate
        .delays
        .iter()
        .zip(estimate.k_hat.iter().zip(&k_tilde))
        .map(|(&d, (&k, &kt))| vec![d, k, kt])
        .collect();
    let kernel_path = ctx.out_dir.join("kernel_estimate.csv");
    write_csv(
        &kernel_path,
        &[
            format!("correlation kernel recovered from {}", input.display()),
            format!("baseline: {:?}, variance = {}", rec.baseline, fmt_float(estimate.variance)),
            probe_note.clone(),
        ],
        "delta,k_hat,k_tilde",
        &kernel_rows,
    )?;

    let omegas: Vec<f64> = rec
        .frequencies
        .build()?
        .into_iter()
        .map(|f| f * std::f64::consts::TAU)
        .collect();
    let mut spectrum = cosine_transform(&estimate.delays, &estimate.k_hat, &omegas)?;
    if rec.normalize {
        normalize_spectrum(&mut spectrum)?;
    }
    let spectrum_rows: Vec<Vec<f64>> = spectrum
        .omegas
        .iter()
        .zip(&spectrum.s_nn)
        .map(|(&w, &s)| vec![w / std::f64::consts::TAU, s])
        .collect();
    let spectrum_path = ctx.out_dir.join("spectrum.csv");
    write_csv(
        &spectrum_path,
        &[
            "noise spectrum from the trapezoidal cosine transform of k_hat".to_string(),
            format!(
                "resolved band (cycles/tau0): {} to {}; values outside are unsupported",
                fmt_float(spectrum.ir_cutoff / std::f64::consts::TAU),
                fmt_float(spectrum.uv_cutoff / std::f64::consts::TAU)
            ),
            format!("normalized: {}; negative values: {}", spectrum.normalized, spectrum.negative_count),
        ],
        "frequency_cycles,s_nn",
        &spectrum_rows,
    )?;
    Ok(vec![kernel_path, spectrum_path])
}

/// The canonical efficiency-survey dataset → `fig2/`.
pub fn cmd_reproduce_fig2(ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let sub = RunContext {
        config: ctx.config.clone(),
        out_dir: ctx.out_dir.join("fig2"),
        config_dir: ctx.config_dir.clone(),
    };
    let mut files = cmd_qfi_map(&sub)?;
    files.extend(cmd_advantage_cut(&sub)?);
    Ok(files)
}

/// The canonical spectroscopy dataset — three kernel families pushed
/// through the full sweep → inversion → spectrum pipeline → `fig3/`.
pub fn cmd_reproduce_fig3(ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let out = ctx.out_dir.join("fig3");
    let rec = &ctx.config.reconstruction;
    let meta = SweepMeta {
        lambda: 0.5,
        tau1: 3.0,
        tau2: 3.0,
        alpha_sq: 1.0,
        variance: 1.0,
        probe_gamma: None,
        probe_corrected: false,
    };
    let kernels = [
        ("white", KernelModel::gaussian_white(1e-3)?),
        ("lorentzian", KernelModel::lorentzian_fixed(10.0)?),
        ("one_over_f", KernelModel::one_over_f(0.1, 0.6)?),
    ];
    let temperature = 0.020; // all three kernels are temperature-independent
    let delays = rec.sweep_delays.build()?;
    let cross = 2.0 * meta.alpha_sq * meta.lambda * meta.lambda * meta.tau1 * meta.tau2;

    // Panel a: visibility relative to the memoryless floor, e^(−cross·K̃Var).
    let mut vis_rows: Vec<Vec<f64>> = delays.iter().map(|&d| vec![d]).collect();
    // Panel b: reconstructed spectra, unit-normalized.
    let omegas: Vec<f64> = rec
        .frequencies
        .build()?
        .into_iter()
        .map(|f| f * std::f64::consts::TAU)
        .collect();
    let mut spec_rows: Vec<Vec<f64>> =
        omegas.iter().map(|&w| vec![w / std::f64::consts::TAU]).collect();
    let mut sweep_files = Vec::new();

    for (name, kernel) in &kernels {
        let sweep = synthesize_sweep(meta, &delays, kernel, temperature)?;
        for (row, &c) in vis_rows.iter_mut().zip(&sweep.visibility) {
            // Divide out the Δ-independent floor to isolate the memory term.
            let floor = (-meta.alpha_sq
                * meta.lambda
                * meta.lambda
                * (meta.tau1 * meta.tau1 + meta.tau2 * meta.tau2)
                * meta.variance)
                .exp();
            row.push(c / floor);
        }
        let sweep_path = out.join(format!("sweep_{name}.csv"));
        write_sweep_csv(&sweep_path, &sweep)?;
        sweep_files.push(sweep_path);

        let estimate = invert_visibility(&sweep, rec.baseline)?;
        let mut spectrum = cosine_transform(&estimate.delays, &estimate.k_hat, &omegas)?;
        normalize_spectrum(&mut spectrum)?;
        for (row, &s) in spec_rows.iter_mut().zip(&spectrum.s_nn) {
            row.push(s);
        }
    }

    let vis_path = out.join("visibility.csv");
    write_csv(
        &vis_path,
        &[
            "two-tooth visibility relative to the memoryless floor".to_string(),
            format!("lambda = {}, tau1 = tau2 = {}, Var = {}", meta.lambda, meta.tau1, meta.variance),
            format!("column value = exp(-{cross} * k_tilde(delta))"),
        ],
        "delta,white,lorentzian,one_over_f",
        &vis_rows,
    )?;
    let spec_path = out.join("spectrum.csv");
    write_csv(
        &spec_path,
        &[
            "unit-normalized spectra reconstructed through the full pipeline".to_string(),
            "pipeline: synthesize sweep -> invert visibility -> cosine transform".to_string(),
        ],
        "frequency_cycles,white,lorentzian,one_over_f",
        &spec_rows,
    )?;
    let mut files = vec![vis_path, spec_path];
    files.extend(sweep_files);
    // Sweep sidecars are artifacts too.
    let sidecars: Vec<PathBuf> = files
        .iter()
        .filter(|p| p.file_name().map(|n| n.to_string_lossy().starts_with("sweep_")).unwrap_or(false))
        .map(|p| p.with_extension("meta.json"))
        .collect();
    files.extend(sidecars);
    Ok(files)
}

/// Writes a ready-to-reconstruct demonstration sweep (crossover kernel with
/// a probe) — used by tests and as a quick-start input for `reconstruct`.
pub fn write_demo_sweep(ctx: &RunContext, path: &Path) -> Result<()> {
    let kernel = ctx.kernel()?;
    let absorber = ctx.config.absorber()?;
    let temperature = 0.020;
    let n_bar = thermal_occupation(&absorber, temperature)?;
    let variance = crate::physics::occupation_variance(n_bar, absorber.variance_mode)?;
    let comb = CombConfig::from_coupling(ctx.coupling()?, 1.0)?;
    let meta = SweepMeta {
        lambda: comb.lambda,
        tau1: comb.tau1,
        tau2: comb.tau2,
        alpha_sq: ctx.config.alpha_sq,
        variance,
        probe_gamma: ctx.config.probe_gamma,
        probe_corrected: false,
    };
    let delays = ctx.config.reconstruction.sweep_delays.build()?;
    let sweep = synthesize_sweep(meta, &delays, &kernel, temperature)?;
    write_sweep_csv(path, &sweep)
}

/// Regime override parsed from the command line.
pub fn parse_regime(name: &str) -> Result<Regime> {
    match name {
        "weak" => Ok(Regime::Weak),
        "exact" => Ok(Regime::Exact),
        other => Err(Error::Config(format!(
            "unknown regime '{other}' (expected 'weak' or 'exact')"
        ))),
    }
}
