#![forbid(unsafe_code)]

//! Two-tooth comb thermometry of a dispersively coupled bosonic absorber.
//!
//! A long-lived probe mode interrogates a thermal absorber mode through a
//! cross-Kerr coupling in two short windows ("teeth") separated by a delay
//! Δ. Occupation fluctuations of the absorber dephase the probe; because
//! those fluctuations are correlated in time, the second tooth revisits
//! noise the first tooth already saw, and the visibility carries the
//! two-time memory kernel K(Δ; T) on top of the mean occupation n̄(T).
//! This crate computes everything that follows from that premise:
//!
//! - [`physics`] — Bose–Einstein occupation of the absorber, its
//!   temperature responsivity, and the photon-number variance.
//! - [`kernels`] — memory-kernel families: a Lorentzian with a
//!   temperature-crossover correlation time, fixed Lorentzian, quasi-white,
//!   1/f-like, and tabulated kernels.
//! - [`coherence`] — single-tooth and two-tooth visibility envelopes with
//!   analytic temperature derivatives, plus probe self-dephasing.
//! - [`metrology`] — quantum Fisher information of the envelopes, the
//!   memory efficiency A = F2/(F1+F1), and its factorized decomposition.
//! - [`maps`] — parallel (T, Δ) surveys of the efficiency landscape,
//!   bit-identical for any thread count.
//! - [`spectroscopy`] — visibility-sweep synthesis and inversion, probe
//!   calibration/debiasing, and noise-spectrum reconstruction by cosine
//!   transform.
//! - [`oracle`] — a counter-based stochastic sampler that certifies the
//!   analytic envelopes with jackknife error bars.
//! - [`config`], [`run`], [`grid`], [`io`], [`error`] — the JSON run
//!   configuration, CSV/manifest emission behind the CLI, and shared
//!   plumbing.
//!
//! # Start with the examples
//!
//! Each major capability has a runnable walkthrough:
//!
//! ```text
//! cargo run --example thermal_occupation      # n̄(T), responsivity, variance
//! cargo run --example kernel_zoo              # the kernel families and tau_c(T)
//! cargo run --example coherence_envelopes     # C1, C2, and the memory bump
//! cargo run --example memory_efficiency_map   # the A(T, Δ) landscape in ASCII
//! cargo run --example probe_dephasing         # information lost to probe decay
//! cargo run --example spectrum_reconstruction # sweep -> kernel -> spectrum
//! cargo run --example oracle_validation       # Monte Carlo vs analytic, with z-scores
//! ```
//!
//! The same functionality is scriptable through the `comb-sense` binary
//! (`nbar`, `qfi-map`, `advantage-cut`, `reconstruct`, `oracle`,
//! `reproduce`), which adds CSV artifacts and a provenance manifest; see
//! the README for the file formats.
//!
//! # Conventions
//!
//! Times are in units of a reference tooth duration τ0, rates in 1/τ0,
//! temperatures in kelvin (CLI and config use millikelvin where noted),
//! and angular frequencies in rad/τ0 (spectrum files report cycles/τ0).
//! Envelope formulas default to the weak-dephasing regime; the exact
//! Gaussian average is available everywhere via [`coherence::Regime`].

pub mod coherence;
pub mod config;
pub mod error;
pub mod grid;
pub mod io;
pub mod kernels;
pub mod maps;
pub mod metrology;
pub mod oracle;
pub mod physics;
pub mod run;
pub mod spectroscopy;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
