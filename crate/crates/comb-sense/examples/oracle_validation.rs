//! Certifying the analytic envelopes against a stochastic oracle: draw
//! correlated occupation fluctuations, accumulate the two-tooth phase,
//! and check the closed-form coherence against the Monte Carlo estimate
//! with a jackknife error bar.
//!
//! Run with: cargo run --example oracle_validation

use comb_sense::coherence::DimensionlessCoupling;
use comb_sense::oracle::{standard_validation_points, validate_point, OracleConfig};
use comb_sense::physics::{AbsorberParams, VarianceMode};

fn main() -> comb_sense::Result<()> {
    let absorber = AbsorberParams::with_frequency_ghz(1.0, VarianceMode::Approximate)?;
    let coupling = DimensionlessCoupling::new(0.05)?;
    // 20k samples keeps this example fast; the CLI default is 100k.
    let oracle = OracleConfig::new(20_000, 42)?;

    println!("validation matrix: 20 points x 20k samples, pass = |z| <= 3\n");
    println!(
        "{:<34} {:>12} {:>12} {:>10} {:>7} {:>5}",
        "point", "analytic", "MC mean", "MC se", "z", "pass"
    );
    let mut failures = 0;
    for point in &standard_validation_points() {
        let v = validate_point(point, coupling, &absorber, &oracle)?;
        println!(
            "{:<34} {:>12.8} {:>12.8} {:>10.2e} {:>+7.2} {:>5}",
            v.label, v.analytic, v.estimate.mean, v.estimate.std_error, v.z, v.pass
        );
        if !v.pass {
            failures += 1;
        }
    }
    if failures == 0 {
        println!("\nall points inside 3 sigma.");
    } else {
        println!("\n{failures} point(s) outside 3 sigma — investigate before trusting maps.");
    }

    println!("\nthe sampler is counter-based (one RNG stream per sample), so");
    println!("estimates are byte-identical for any thread count, and the");
    println!("jackknife error bar is what the z-scores above are built on.");
    Ok(())
}
