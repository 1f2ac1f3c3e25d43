//! Numeric settings with reproducible defaults.
//!
//! Every solver and enumeration in the crate reads its tolerances, depths and
//! budgets from a [`Settings`] value, so a run is fully determined by the
//! configuration that produced it.

use serde::{Deserialize, Serialize};

/// Tunable numeric parameters. `Settings::default()` is what the CLI uses
/// when the configuration file does not override a field.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct Settings {
    /// Enumeration depth used by pressure sums and the implicit solvers.
    /// 16 resolves a two-letter alphabet into 65 536 cylinders.
    pub pressure_depth: usize,
    /// Hard cap on the number of cylinders a single enumeration may visit.
    pub cylinder_budget: u64,
    /// Absolute tolerance in the unknown for every bisection root.
    pub root_tol: f64,
    /// Iteration cap for bisections.
    pub max_root_iter: usize,
    /// Convergence tolerance for fixed-point iteration of a single map.
    pub fixed_point_tol: f64,
    /// Iteration cap for fixed-point iteration.
    pub max_fixed_point_iter: usize,
    /// Sample points per map for grid validation of the standing hypotheses.
    pub validation_grid: usize,
    /// Central-difference step for the tangent slope of the beta function.
    pub fd_step: f64,
    /// Apply one Richardson extrapolation step (h and h/2) to the slope.
    pub richardson: bool,
    /// Tolerance on |P(psi)| in the admissibility check.
    pub admissibility_tol: f64,
    /// Strict-positivity margin required of chi_alpha = psi - alpha*phi.
    pub chi_margin: f64,
    /// Tolerance used when decoding symbolic points to reals internally.
    pub decode_tol: f64,
    /// Initial half-width of the beta bracket; expanded geometrically.
    pub beta_bracket: f64,
    /// Give up expanding the beta bracket once it is this wide.
    pub beta_bracket_limit: f64,
    /// Score ceiling for the finite-depth oscillation heuristic (ln 10).
    pub oscillation_ceiling: f64,
    /// Minimum number of below-ceiling blocks before the heuristic fires.
    pub oscillation_min_count: usize,
    /// The deepest below-ceiling block must sit past this fraction of the
    /// deepest observed block's level.
    pub oscillation_tail_fraction: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            pressure_depth: 16,
            cylinder_budget: 1 << 24,
            root_tol: 1e-10,
            max_root_iter: 200,
            fixed_point_tol: 1e-14,
            max_fixed_point_iter: 10_000,
            validation_grid: 1024,
            fd_step: 1e-4,
            richardson: false,
            admissibility_tol: 1e-8,
            chi_margin: 1e-9,
            decode_tol: 1e-12,
            beta_bracket: 2.0,
            beta_bracket_limit: (1u64 << 20) as f64,
            oscillation_ceiling: 10f64.ln(),
            oscillation_min_count: 3,
            oscillation_tail_fraction: 0.5,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_sane() {
        let s = Settings::default();
        assert!(s.root_tol > 0.0 && s.root_tol < 1e-6);
        assert!(s.fixed_point_tol < s.root_tol);
        assert!(s.cylinder_budget >= 1 << 20);
        assert!(s.oscillation_tail_fraction > 0.0 && s.oscillation_tail_fraction < 1.0);
    }
}
