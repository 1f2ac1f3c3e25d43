//! The exchange function beta_alpha for the self-similar pair with
//! contraction rates 0.1 and 0.5 at alpha = 1, as plot-ready CSV.
//!
//! The curve is strictly increasing and concave, vanishes at the
//! limit-set dimension delta, and passes through (alpha, 1). Pipe the
//! output into any plotting tool:
//!
//! ```bash
//! cargo run -p stairdim --example beta_curve > beta.csv
//! ```

use stairdim::thermo::{beta, solve_delta};
use stairdim::{IfsSpec, Interval, MapSpec, PotentialSpec, Settings};

fn main() -> stairdim::Result<()> {
    let settings = Settings::default();
    let spec = IfsSpec::new(
        vec![MapSpec::affine(0.1, 0.0)?, MapSpec::affine(0.5, 0.5)?],
        Interval::new(0.0, 1.0),
    )?;
    let psi = PotentialSpec::DarstShift;
    let alpha = 1.0;
    let depth = settings.pressure_depth;

    let delta = solve_delta(&spec, depth, &settings)?;
    eprintln!("delta = {delta:.12}; anchors at (delta, 0) and ({alpha}, 1)");

    let mut ts: Vec<f64> = (0..=60).map(|i| 1.2 * i as f64 / 60.0).collect();
    ts.push(delta);
    ts.push(alpha);
    ts.sort_by(f64::total_cmp);
    ts.dedup();

    println!("t,beta,residual");
    for t in ts {
        let point = beta(&spec, &psi, alpha, t, depth, &settings)?;
        println!("{},{},{}", point.t, point.beta, point.residual);
    }
    Ok(())
}
