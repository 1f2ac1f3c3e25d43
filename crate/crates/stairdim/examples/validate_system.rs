//! Check the standing hypotheses of a few contraction systems.
//!
//! ```bash
//! cargo run -p stairdim --example validate_system
//! ```

use stairdim::ifs::validate_ifs;
use stairdim::{IfsSpec, Interval, MapSpec, Settings};

fn report(name: &str, spec: &IfsSpec, settings: &Settings) {
    let violations = validate_ifs(spec, settings);
    if violations.is_empty() {
        println!("{name}: ok");
    } else {
        println!("{name}:");
        for v in violations {
            println!("  {} - {}", v.condition, v.detail);
        }
    }
}

fn main() -> stairdim::Result<()> {
    let settings = Settings::default();

    let thirds = IfsSpec::new(
        vec![
            MapSpec::affine(1.0 / 3.0, 0.0)?,
            MapSpec::affine(1.0 / 3.0, 2.0 / 3.0)?,
        ],
        Interval::new(0.0, 1.0),
    )?;
    report("middle thirds", &thirds, &settings);

    let overlapping = IfsSpec::new(
        vec![MapSpec::affine(0.6, 0.0)?, MapSpec::affine(0.5, 0.5)?],
        Interval::new(0.0, 1.0),
    )?;
    report("overlapping pair", &overlapping, &settings);

    let mislabeled = IfsSpec::new(
        vec![MapSpec::affine(0.3, 0.7)?, MapSpec::affine(0.3, 0.0)?],
        Interval::new(0.0, 1.0),
    )?;
    report("mislabeled pair", &mislabeled, &settings);

    let nonlinear = IfsSpec::new(
        vec![
            MapSpec::nonlinear(0.30, 0.02, 0.03)?,
            MapSpec::nonlinear(0.35, 0.60, -0.04)?,
        ],
        Interval::new(0.0, 1.0),
    )?;
    report("nonlinear pair", &nonlinear, &settings);

    Ok(())
}
