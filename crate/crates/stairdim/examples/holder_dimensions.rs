//! Dimension of the set where the Gibbs distribution function is not
//! Hölder differentiable, for the configurations where closed forms or
//! known orderings exist.
//!
//! ```bash
//! cargo run -p stairdim --example holder_dimensions
//! ```

use stairdim::hoelder::lambda_dimension;
use stairdim::oracle;
use stairdim::thermo::solve_delta;
use stairdim::{IfsSpec, Interval, MapSpec, PotentialSpec, Settings};

fn affine_pair(r0: f64, r1: f64) -> stairdim::Result<IfsSpec> {
    IfsSpec::new(
        vec![MapSpec::affine(r0, 0.0)?, MapSpec::affine(r1, 1.0 - r1)?],
        Interval::new(0.0, 1.0),
    )
}

fn main() -> stairdim::Result<()> {
    let settings = Settings::default();
    let depth = settings.pressure_depth;

    // Ahlfors regular case: s = delta^2 / alpha.
    let spec = affine_pair(0.25, 0.4)?;
    let delta = solve_delta(&spec, depth, &settings)?;
    let psi = PotentialSpec::ScaledGeometric(delta);
    println!("ratios (0.25, 0.4), psi = delta*phi, delta = {delta:.9}");
    for alpha in [delta + 0.1, 1.0, 1.5] {
        let report = lambda_dimension(&spec, &psi, alpha, depth, &settings)?;
        let closed = oracle::falconer_dimension(delta, alpha)?;
        println!(
            "  alpha = {alpha:.4}: s = {:.9} (closed form {closed:.9}), dim_nu = {:.9}",
            report.s, report.dim_nu
        );
    }

    // Self-similar measures with probabilities proportional to the rates:
    // the ordering of dim_nu against s flips between these two systems.
    for rates in [(0.1, 0.5), (0.01, 0.8)] {
        let spec = affine_pair(rates.0, rates.1)?;
        let report = lambda_dimension(&spec, &PotentialSpec::DarstShift, 1.0, depth, &settings)?;
        println!(
            "ratios {rates:?}, psi = phi - P(phi): delta = {:.9}",
            report.delta
        );
        println!(
            "  s = {:.9}  (s_0 = {:.9}, s_1 = {:.9}, min ratio {:.6})",
            report.s, report.s_per_letter.0, report.s_per_letter.1, report.min_ratio
        );
        println!(
            "  dim_nu = {:.9}  ({})",
            report.dim_nu, report.ordering_note
        );
    }
    Ok(())
}
