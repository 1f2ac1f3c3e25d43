//! Block structure of coded points and the finite-depth oscillation
//! heuristic: a periodic point accumulates unbounded scores, while a
//! point built from ever longer runs of the letter 0 keeps them bounded.
//!
//! ```bash
//! cargo run -p stairdim --example block_diagnostics
//! ```

use stairdim::hoelder::{
    detect_blocks, empirical_quotient, oscillating_point_prefix, oscillation_score_series,
};
use stairdim::thermo::solve_delta;
use stairdim::{CodedPoint, IfsSpec, Interval, MapSpec, PotentialSpec, Settings, Tail, Word};

fn main() -> stairdim::Result<()> {
    let settings = Settings::default();
    let spec = IfsSpec::new(
        vec![
            MapSpec::affine(1.0 / 3.0, 0.0)?,
            MapSpec::affine(1.0 / 3.0, 2.0 / 3.0)?,
        ],
        Interval::new(0.0, 1.0),
    )?;
    let delta = solve_delta(&spec, settings.pressure_depth, &settings)?;
    let psi = PotentialSpec::ScaledGeometric(delta);
    let alpha = 1.0;

    let word = Word::new(vec![0, 1, 1, 1, 0, 0, 1, 0]);
    println!("blocks of ({word}):");
    let scan = detect_blocks(&spec, &psi, alpha, &word, &settings)?;
    for e in &scan.events {
        println!(
            "  {}-block, level {}, length {}, score {:+.4}",
            e.symbol, e.level, e.length, e.score
        );
    }
    for r in &scan.open_runs {
        println!(
            "  open run of {} at position {} (length {})",
            r.symbol, r.start, r.length
        );
    }

    let depth = 220;
    let periodic = CodedPoint::periodic(Word::new(vec![0, 1]))?;
    let quiet = oscillation_score_series(&spec, &psi, alpha, &periodic, depth, &settings)?;
    println!(
        "periodic 01 point: {} blocks, oscillation candidate: {}",
        quiet.events.len(),
        quiet.candidate
    );

    let prefix = oscillating_point_prefix(&spec, &psi, alpha, depth, &settings)?;
    let engineered = CodedPoint::new(prefix, Tail::Periodic(Word::new(vec![1, 0])))?;
    let noisy = oscillation_score_series(&spec, &psi, alpha, &engineered, depth, &settings)?;
    println!(
        "engineered block point: {} blocks, oscillation candidate: {}",
        noisy.events.len(),
        noisy.candidate
    );
    println!("  long-run scores stay bounded:");
    for e in noisy.events.iter().filter(|e| e.length > 1) {
        println!(
            "    level {:>3}, length {:>2}: score {:+.4}",
            e.level, e.length, e.score
        );
    }

    // Hölder quotients against right cylinder endpoints: bounded at the
    // critical exponent, divergent above it.
    println!("quotients |F(0) - F(3^-n)| / (3^-n)^a at level 14:");
    for n in [2, 4, 6] {
        let eta = 3f64.powi(-n);
        let at_delta = empirical_quotient(&spec, &psi, delta, 0.0, eta, 14, &settings)?;
        let at_one = empirical_quotient(&spec, &psi, 1.0, 0.0, eta, 14, &settings)?;
        println!(
            "  n = {n}: a = delta -> {:.6} +/- {:.1e};  a = 1 -> {:.3}",
            at_delta.midpoint, at_delta.half_width, at_one.midpoint
        );
    }
    Ok(())
}
