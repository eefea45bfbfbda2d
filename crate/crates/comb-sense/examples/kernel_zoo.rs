//! The correlation-kernel families and how their normalized memory
//! K̃(Δ) = ⟨δn(0) δn(Δ)⟩ / Var(n) decays with tooth separation.
//!
//! Run with: cargo run --example kernel_zoo

use comb_sense::kernels::{CorrelationTimeModel, KernelModel};

fn main() -> comb_sense::Result<()> {
    let crossover = CorrelationTimeModel::default();
    let kernels = [
        KernelModel::lorentzian_crossover(crossover),
        KernelModel::lorentzian_fixed(3.0)?,
        KernelModel::gaussian_white(1e-3)?,
        KernelModel::one_over_f(0.1, 0.6)?,
    ];

    // The crossover model interpolates the correlation time between a slow
    // low-temperature plateau and a fast high-temperature floor.
    println!("correlation time of the crossover model, tau_c(T):");
    for t_mk in [10.0f64, 15.0, 20.0, 30.0, 45.0] {
        let tau_c = crossover.evaluate(t_mk * 1e-3)?;
        println!("  T = {t_mk:>4.0} mK  tau_c = {tau_c:>9.4} tau0");
    }

    let temperature = 0.020;
    println!("\nnormalized kernel K(Δ)/Var at T = 20 mK:");
    print!("{:>10}", "delta");
    for k in &kernels {
        print!(" {:>20}", k.name());
    }
    println!();
    for delta in [0.0f64, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0] {
        print!("{delta:>10.2}");
        for k in &kernels {
            print!(" {:>20.6e}", k.normalized(delta, temperature)?);
        }
        println!();
    }

    println!("\nonly the crossover kernel responds to temperature; its");
    println!("temperature derivative is what the two-tooth comb senses:");
    for t_mk in [15.0f64, 30.0, 45.0] {
        let t = t_mk * 1e-3;
        let d = kernels[0].normalized_dt(1.0, t)?;
        println!("  dK̃/dT at (Δ=1, {t_mk:>2.0} mK) = {d:>12.4e} per K");
    }
    Ok(())
}
