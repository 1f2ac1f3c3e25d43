//! Pressure of scaled geometric potentials by cylinder enumeration, and
//! the limit-set dimension as the root of P(t*phi) = 0.
//!
//! ```bash
//! cargo run -p stairdim --example pressure_table
//! ```

use stairdim::thermo::{pressure, solve_delta};
use stairdim::{IfsSpec, Interval, MapSpec, PotentialSpec, Settings};

fn main() -> stairdim::Result<()> {
    let settings = Settings::default();
    let spec = IfsSpec::new(
        vec![MapSpec::affine(0.1, 0.0)?, MapSpec::affine(0.5, 0.5)?],
        Interval::new(0.0, 1.0),
    )?;

    for t in [0.0, 0.5, 1.0] {
        let est = pressure(&spec, &PotentialSpec::ScaledGeometric(t), 10, &settings)?;
        println!("P({t} * phi):");
        for (n, p) in &est.per_level {
            println!("  n = {n:>2}   P_n = {p:+.15}");
        }
        println!(
            "  converged to {:+.15} (indicator {:.1e})",
            est.value, est.error_indicator
        );
    }

    let delta = solve_delta(&spec, settings.pressure_depth, &settings)?;
    println!("limit-set dimension delta = {delta:.12}");
    // Affine two-map closed form: r0^delta + r1^delta = 1.
    let check = 0.1f64.powf(delta) + 0.5f64.powf(delta);
    println!("closed-form check: 0.1^delta + 0.5^delta = {check:.15}");
    Ok(())
}
