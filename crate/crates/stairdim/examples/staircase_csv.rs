//! The Cantor function as a Gibbs distribution function: staircase
//! sample CSV on stdout, plus a few pointwise values with their honest
//! truncation bounds on stderr.
//!
//! ```bash
//! cargo run -p stairdim --example staircase_csv > staircase.csv
//! ```

use stairdim::thermo::solve_delta;
use stairdim::{GibbsModel, IfsSpec, Interval, MapSpec, PotentialSpec, Settings};

fn main() -> stairdim::Result<()> {
    let settings = Settings::default();
    let spec = IfsSpec::new(
        vec![
            MapSpec::affine(1.0 / 3.0, 0.0)?,
            MapSpec::affine(1.0 / 3.0, 2.0 / 3.0)?,
        ],
        Interval::new(0.0, 1.0),
    )?;
    // The measure of maximal dimension: psi = delta * phi.
    let delta = solve_delta(&spec, settings.pressure_depth, &settings)?;
    let psi = PotentialSpec::ScaledGeometric(delta);
    let model = GibbsModel::new(&spec, &psi, &settings)?;

    for x in [0.25, 1.0 / 3.0, 0.5, 0.7] {
        let bounds = model.distribution(x, 12)?;
        eprintln!(
            "F({x}) in [{:.12}, {:.12}] (width {:.2e})",
            bounds.lower,
            bounds.upper,
            bounds.width()
        );
    }

    print!("{}", model.staircase(8)?.to_csv());
    Ok(())
}
