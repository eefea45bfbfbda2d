//! Probe decoherence as an information tax: the clock's own dephasing
//! C_p(Δ)² multiplies the visibility but carries no temperature
//! dependence, so every bit of it is pure loss. This example quantifies
//! how fast the two-tooth information advantage erodes with Γ_φ^p.
//!
//! Run with: cargo run --example probe_dephasing

use comb_sense::coherence::{
    coherence_two_full, CombConfig, DimensionlessCoupling, ProbeDephasing, Regime,
};
use comb_sense::kernels::{CorrelationTimeModel, KernelModel};
use comb_sense::metrology::{qfi_two, qfi_two_full};
use comb_sense::physics::{AbsorberParams, VarianceMode};

fn main() -> comb_sense::Result<()> {
    let absorber = AbsorberParams::with_frequency_ghz(1.0, VarianceMode::Approximate)?;
    let kernel = KernelModel::lorentzian_crossover(CorrelationTimeModel::default());
    let coupling = DimensionlessCoupling::new(0.05)?;
    let temperature = 0.030;
    let delta = 1.0;
    let cfg = CombConfig::from_coupling(coupling, delta)?;

    let f2_ideal = qfi_two(&cfg, &absorber, &kernel, temperature, Regime::Weak)?;
    println!("T = 30 mK, delta = 1, ideal two-tooth QFI F2 = {f2_ideal:.6e}\n");

    println!(
        "{:>12} {:>14} {:>14} {:>12}",
        "gamma_p", "visibility", "F2 with probe", "kept"
    );
    for gamma_p in [0.0f64, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1] {
        let probe = ProbeDephasing::new(gamma_p)?;
        let c = coherence_two_full(&cfg, &absorber, &kernel, &probe, temperature, Regime::Weak)?;
        let f = qfi_two_full(&cfg, &absorber, &kernel, &probe, temperature, Regime::Weak)?;
        println!("{gamma_p:>12.1e} {c:>14.8} {f:>14.6e} {:>10.1}%", 100.0 * f / f2_ideal);
    }

    println!("\nthe kept fraction is Γ_φ2/(Γ_φ2 + 2Γ_p Δ): once probe decay");
    println!("matches the thermometric exponent, half the information is gone.");
    println!("longer delays buy kernel memory but pay 2Γ_pΔ for it — the");
    println!("optimum tooth separation shrinks as the probe degrades.");
    Ok(())
}
