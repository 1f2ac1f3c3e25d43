//! Pressure, Birkhoff sums, and the implicit solvers built on them.
//!
//! The pressure of a potential `g` is the exponential growth rate of the
//! cylinder sums `Σ_w exp(sup S_n g)`. Every built-in potential reduces to
//! the normal form `a*phi + b` over the geometric potential
//! `phi = log |f'|`, for which `S_n` along a word is the log-derivative of
//! the composed map at the tail point (chain rule); that identity is the
//! implementation route for all Birkhoff sums.
//!
//! On top of pressure sit three monotone one-dimensional root problems,
//! all solved by bracketed bisection:
//!
//! - the limit-set dimension `delta`, the zero of `t -> P(t*phi)`;
//! - the exchange function `beta_alpha(t)`, the zero in `beta` of
//!   `P((t - alpha*beta)*phi + beta*psi)`;
//! - a tangent construction at `(alpha, 1)` whose x-intercept is the
//!   dimension of the Gibbs measure of `psi`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ifs::{IfsSpec, MapSpec, Word};
use crate::settings::Settings;
use crate::sums::{level_sums, DerivLogCache};

/// A Hölder potential on coded points, evaluated from a point's first
/// symbol and the coordinate of its shifted image.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    /// The geometric potential `phi = log |f'|`.
    Geometric,
    /// `t * phi`.
    ScaledGeometric(f64),
    /// `phi - P(phi)`, the normalization used for self-similar weights.
    DarstShift,
    /// `coeff_phi * phi + coeff_base * base`.
    LinearCombination {
        coeff_phi: f64,
        coeff_base: f64,
        base: Box<PotentialSpec>,
    },
}

impl PotentialSpec {
    /// Normal form `phi_coeff * phi + offset`. Resolving `DarstShift`
    /// computes `P(phi)` by enumeration at the given depth.
    pub(crate) fn resolve(
        &self,
        spec: &IfsSpec,
        depth: usize,
        settings: &Settings,
    ) -> Result<Resolved> {
        match self {
            PotentialSpec::Geometric => Ok(Resolved {
                phi_coeff: 1.0,
                offset: 0.0,
            }),
            PotentialSpec::ScaledGeometric(t) => Ok(Resolved {
                phi_coeff: *t,
                offset: 0.0,
            }),
            PotentialSpec::DarstShift => {
                let p_phi = pressure(spec, &PotentialSpec::Geometric, depth, settings)?;
                Ok(Resolved {
                    phi_coeff: 1.0,
                    offset: -p_phi.value,
                })
            }
            PotentialSpec::LinearCombination {
                coeff_phi,
                coeff_base,
                base,
            } => {
                let b = base.resolve(spec, depth, settings)?;
                Ok(Resolved {
                    phi_coeff: coeff_phi + coeff_base * b.phi_coeff,
                    offset: coeff_base * b.offset,
                })
            }
        }
    }
}

/// Resolved potential in the normal form `phi_coeff * phi + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Resolved {
    pub phi_coeff: f64,
    pub offset: f64,
}

impl Resolved {
    /// Value at a point whose first symbol applies `map` to a point at
    /// coordinate `y`.
    pub fn eval(&self, map: &MapSpec, y: f64) -> f64 {
        self.phi_coeff * map.deriv(y).abs().ln() + self.offset
    }

    /// Normal form of `psi - alpha*phi`.
    pub fn chi(&self, alpha: f64) -> Resolved {
        Resolved {
            phi_coeff: self.phi_coeff - alpha,
            offset: self.offset,
        }
    }
}

/// Converged pressure value together with the per-level history.
#[derive(Debug, Clone, Serialize)]
pub struct PressureEstimate {
    /// The deepest-level estimate `P_depth`.
    pub value: f64,
    /// `(n, P_n)` for every computed level.
    pub per_level: Vec<(usize, f64)>,
    /// `|P_depth - P_{depth-1}|`; infinite when only one level exists.
    pub error_indicator: f64,
    pub depth: usize,
}

/// A solved point `(t, beta_alpha(t))` with the pressure residual left at
/// the root.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BetaPoint {
    pub t: f64,
    pub beta: f64,
    pub alpha: f64,
    pub residual: f64,
}

/// Limit-set and measure dimensions with the anchor identities of the
/// exchange function.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DimensionReport {
    pub delta: f64,
    pub dim_nu: f64,
    pub alpha: f64,
    /// `beta_alpha(delta)`, which must vanish.
    pub beta_anchor_zero: f64,
    /// `beta_alpha(alpha)`, which must equal one.
    pub beta_anchor_one: f64,
}

/// Outcome of the admissibility check for a pair `(psi, alpha)`:
/// `psi < 0`, `P(psi) = 0`, and `chi_alpha = psi - alpha*phi > 0`.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub pass: bool,
    pub pressure_psi: f64,
    pub max_psi: f64,
    pub min_chi: f64,
    /// Human-readable description of each violated condition.
    pub failures: Vec<String>,
}

fn check_budget(spec: &IfsSpec, depth: usize, settings: &Settings) -> Result<()> {
    match (spec.alphabet_size() as u64).checked_pow(depth as u32) {
        Some(count) if count <= settings.cylinder_budget => Ok(()),
        _ => Err(Error::resource(format!(
            "depth {depth} needs {}^{depth} cylinders, over the budget of {}",
            spec.alphabet_size(),
            settings.cylinder_budget
        ))),
    }
}

/// Birkhoff sum `S_n g` along `word` with tail point `x`: the sum of `g`
/// over the successive shifts of the point coded by the word followed by
/// the code of `x`.
pub fn birkhoff_sum(
    spec: &IfsSpec,
    potential: &PotentialSpec,
    word: &Word,
    x: f64,
    settings: &Settings,
) -> Result<f64> {
    if word.is_empty() {
        return Err(Error::input("birkhoff_sum needs a word of length >= 1"));
    }
    word.check_alphabet(spec.alphabet_size())?;
    if !spec.domain().contains(x) {
        return Err(Error::input(format!(
            "tail point {x} outside domain [{}, {}]",
            spec.domain().lo,
            spec.domain().hi
        )));
    }
    let g = potential.resolve(spec, settings.pressure_depth, settings)?;
    let mut point = x;
    let mut acc = 0.0;
    for &a in word.symbols().iter().rev() {
        let map = &spec.maps()[a];
        acc += g.eval(map, point);
        point = map.eval(point);
    }
    Ok(acc)
}

/// Pressure estimate by full cylinder enumeration to the given depth.
///
/// The sup of `S_n g` over each cylinder is estimated as the maximum of
/// the sums at the cylinder anchor and both interval endpoints, which is
/// exact whenever the potential is constant on cylinders (every affine
/// scaled-geometric case); for non-affine systems the residual shows up
/// in the per-level error indicator.
pub fn pressure(
    spec: &IfsSpec,
    potential: &PotentialSpec,
    depth: usize,
    settings: &Settings,
) -> Result<PressureEstimate> {
    if depth == 0 {
        return Err(Error::input("pressure depth must be >= 1"));
    }
    check_budget(spec, depth, settings)?;
    let g = potential.resolve(spec, depth, settings)?;
    let maps = spec.maps();
    let sums = level_sums(spec, &|a: usize, y: f64| g.eval(&maps[a], y), depth);
    let per_level: Vec<(usize, f64)> = sums
        .iter()
        .enumerate()
        .map(|(i, lse)| (i + 1, lse.value() / (i + 1) as f64))
        .collect();
    let value = per_level.last().unwrap().1;
    let error_indicator = if depth >= 2 {
        (value - per_level[depth - 2].1).abs()
    } else {
        f64::INFINITY
    };
    Ok(PressureEstimate {
        value,
        per_level,
        error_indicator,
        depth,
    })
}

/// Bracketed bisection; `f_lo` and `f_hi` must straddle zero.
fn bisect<F: Fn(f64) -> f64>(
    f: &F,
    mut lo: f64,
    mut hi: f64,
    f_lo: f64,
    tol: f64,
    max_iter: usize,
) -> (f64, f64) {
    let mut sign_lo = f_lo.is_sign_negative();
    let mut mid = 0.5 * (lo + hi);
    let mut f_mid = f(mid);
    for _ in 0..max_iter {
        if 0.5 * (hi - lo) <= tol {
            break;
        }
        if f_mid.is_sign_negative() == sign_lo {
            lo = mid;
            sign_lo = f_mid.is_sign_negative();
        } else {
            hi = mid;
        }
        mid = 0.5 * (lo + hi);
        f_mid = f(mid);
    }
    (mid, f_mid)
}

/// Shared state for the implicit solvers: one enumeration of the system's
/// cylinder log-derivatives, reusable across pressure evaluations at any
/// potential coefficients.
pub(crate) struct Solver<'a> {
    spec: &'a IfsSpec,
    settings: &'a Settings,
    depth: usize,
    cache: Option<DerivLogCache>,
}

/// Caching the per-word leaf data is bounded; larger enumerations fall
/// back to streaming every evaluation.
const CACHE_MAX_LEAVES: u64 = 1 << 22;

impl<'a> Solver<'a> {
    pub fn new(spec: &'a IfsSpec, depth: usize, settings: &'a Settings) -> Result<Solver<'a>> {
        if depth == 0 {
            return Err(Error::input("solver depth must be >= 1"));
        }
        check_budget(spec, depth, settings)?;
        let leaves = (spec.alphabet_size() as u64)
            .checked_pow(depth as u32)
            .unwrap_or(u64::MAX);
        let cache = if leaves <= CACHE_MAX_LEAVES {
            Some(DerivLogCache::build(spec, depth))
        } else {
            None
        };
        Ok(Solver {
            spec,
            settings,
            depth,
            cache,
        })
    }

    /// Final-level pressure of the potential `coeff*phi + offset`.
    pub fn pressure_of(&self, coeff: f64, offset: f64) -> f64 {
        match &self.cache {
            Some(cache) => cache.pressure(coeff, offset),
            None => {
                let maps = self.spec.maps();
                let g = move |a: usize, y: f64| coeff * maps[a].deriv(y).abs().ln() + offset;
                let sums = level_sums(self.spec, &g, self.depth);
                sums.last().unwrap().value() / self.depth as f64
            }
        }
    }

    /// Root of `P(t*phi) = 0`. The map `t -> P(t*phi)` is strictly
    /// decreasing because `phi < 0`, so the bracket `[0, 1.5]` is checked
    /// once and bisected.
    pub fn delta(&self) -> Result<f64> {
        let f = |t: f64| self.pressure_of(t, 0.0);
        let (lo, hi) = (0.0, 1.5);
        let (f_lo, f_hi) = (f(lo), f(hi));
        if f_lo <= 0.0 || f_hi >= 0.0 {
            return Err(Error::numerical(format!(
                "no bracket for delta: P({lo}*phi) = {f_lo}, P({hi}*phi) = {f_hi}"
            )));
        }
        let (root, _) = bisect(
            &f,
            lo,
            hi,
            f_lo,
            self.settings.root_tol,
            self.settings.max_root_iter,
        );
        Ok(root)
    }

    /// Solve `P((t - alpha*beta)*phi + beta*psi) = 0` for `beta`. With
    /// `chi_alpha = psi - alpha*phi > 0` the pressure is strictly
    /// increasing in `beta`, and the bracket grows geometrically from the
    /// configured seed until the sign changes.
    pub fn beta(&self, psi: Resolved, alpha: f64, t: f64) -> Result<BetaPoint> {
        let f = |beta: f64| {
            self.pressure_of(t - alpha * beta + psi.phi_coeff * beta, psi.offset * beta)
        };
        let mut lo = -self.settings.beta_bracket;
        let mut hi = self.settings.beta_bracket;
        let mut f_lo = f(lo);
        let mut f_hi = f(hi);
        while f_lo.is_sign_negative() == f_hi.is_sign_negative() {
            let width = hi - lo;
            if width > self.settings.beta_bracket_limit {
                return Err(Error::numerical(format!(
                    "no sign change for beta in [{lo}, {hi}] (t = {t}, alpha = {alpha}); \
                     is the potential admissible?"
                )));
            }
            lo -= width;
            hi += width;
            f_lo = f(lo);
            f_hi = f(hi);
        }
        let (beta, residual) = bisect(
            &f,
            lo,
            hi,
            f_lo,
            self.settings.root_tol,
            self.settings.max_root_iter,
        );
        Ok(BetaPoint {
            t,
            beta,
            alpha,
            residual: residual.abs(),
        })
    }

    /// Slope of `t -> beta_alpha(t)` at `t`, by central difference with
    /// optional Richardson refinement.
    pub fn beta_slope(&self, psi: Resolved, alpha: f64, t: f64) -> Result<f64> {
        let h = self.settings.fd_step;
        let central = |h: f64| -> Result<f64> {
            let up = self.beta(psi, alpha, t + h)?.beta;
            let down = self.beta(psi, alpha, t - h)?.beta;
            Ok((up - down) / (2.0 * h))
        };
        if self.settings.richardson {
            let coarse = central(h)?;
            let fine = central(0.5 * h)?;
            Ok((4.0 * fine - coarse) / 3.0)
        } else {
            central(h)
        }
    }
}

/// Pointwise extrema of a resolved potential over all depth-level
/// cylinders, evaluated at the anchor and both endpoint tails.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Extrema {
    pub min: f64,
    pub min_at: f64,
    pub max: f64,
    pub max_at: f64,
}

pub(crate) fn scan_extrema(spec: &IfsSpec, g: Resolved, depth: usize) -> Extrema {
    let mut ext = Extrema {
        min: f64::INFINITY,
        min_at: f64::NAN,
        max: f64::NEG_INFINITY,
        max_at: f64::NAN,
    };
    let domain = spec.domain();
    let mut stack = vec![(domain.lo, domain.hi, 1usize)];
    while let Some((v_lo, v_hi, level)) = stack.pop() {
        for a in 0..spec.alphabet_size() {
            let map = &spec.maps()[a];
            for v in [v_lo, v_hi] {
                let value = g.eval(map, v);
                if value > ext.max {
                    ext.max = value;
                    ext.max_at = map.eval(v);
                }
                if value < ext.min {
                    ext.min = value;
                    ext.min_at = map.eval(v);
                }
            }
            if level < depth {
                stack.push((map.eval(v_lo), map.eval(v_hi), level + 1));
            }
        }
    }
    ext
}

/// Check that `psi` is admissible for the exponent `alpha`: negative
/// everywhere on a depth-level cylinder grid, zero pressure within
/// tolerance, and `chi_alpha = psi - alpha*phi` strictly positive.
/// Violations are reported as data, not as errors.
pub fn admissibility_check(
    spec: &IfsSpec,
    psi: &PotentialSpec,
    alpha: f64,
    depth: usize,
    settings: &Settings,
) -> Result<AdmissibilityReport> {
    if depth == 0 {
        return Err(Error::input("admissibility depth must be >= 1"));
    }
    check_budget(spec, depth, settings)?;
    let resolved = psi.resolve(spec, depth, settings)?;
    let psi_ext = scan_extrema(spec, resolved, depth);
    let chi_ext = scan_extrema(spec, resolved.chi(alpha), depth);
    let (max_psi, max_psi_at) = (psi_ext.max, psi_ext.max_at);
    let (min_chi, min_chi_at) = (chi_ext.min, chi_ext.min_at);

    let pressure_psi = pressure(spec, psi, depth, settings)?.value;
    let mut failures = Vec::new();
    if max_psi >= 0.0 {
        failures.push(format!("psi >= 0: value {max_psi} near x = {max_psi_at}"));
    }
    if pressure_psi.abs() > settings.admissibility_tol {
        failures.push(format!(
            "P(psi) = {pressure_psi} exceeds tolerance {}",
            settings.admissibility_tol
        ));
    }
    if min_chi <= settings.chi_margin {
        failures.push(format!(
            "chi_alpha not strictly positive: value {min_chi} near x = {min_chi_at}"
        ));
    }
    Ok(AdmissibilityReport {
        pass: failures.is_empty(),
        pressure_psi,
        max_psi,
        min_chi,
        failures,
    })
}

/// Hausdorff dimension of the limit set: the unique root of `P(t*phi) = 0`.
pub fn solve_delta(spec: &IfsSpec, depth: usize, settings: &Settings) -> Result<f64> {
    Solver::new(spec, depth, settings)?.delta()
}

/// One point of the exchange function `beta_alpha` at abscissa `t`.
pub fn beta(
    spec: &IfsSpec,
    psi: &PotentialSpec,
    alpha: f64,
    t: f64,
    depth: usize,
    settings: &Settings,
) -> Result<BetaPoint> {
    let solver = Solver::new(spec, depth, settings)?;
    let resolved = psi.resolve(spec, depth, settings)?;
    solver.beta(resolved, alpha, t)
}

/// Dimension of the Gibbs measure of `psi` from the tangent of
/// `beta_alpha` at `(alpha, 1)`: the x-intercept `alpha - 1/beta'(alpha)`.
pub fn dim_nu_tangent(
    spec: &IfsSpec,
    psi: &PotentialSpec,
    alpha: f64,
    depth: usize,
    settings: &Settings,
) -> Result<f64> {
    let solver = Solver::new(spec, depth, settings)?;
    let resolved = psi.resolve(spec, depth, settings)?;
    dim_nu_with(&solver, resolved, alpha)
}

pub(crate) fn dim_nu_with(solver: &Solver<'_>, psi: Resolved, alpha: f64) -> Result<f64> {
    let slope = solver.beta_slope(psi, alpha, alpha)?;
    if slope.abs() < 1e-12 {
        return Err(Error::numerical(format!(
            "degenerate tangent: beta'({alpha}) = {slope}"
        )));
    }
    Ok(alpha - 1.0 / slope)
}

/// Dimension summary: `delta`, the measure dimension, and both anchor
/// values of `beta_alpha`.
pub fn dimension_report(
    spec: &IfsSpec,
    psi: &PotentialSpec,
    alpha: f64,
    depth: usize,
    settings: &Settings,
) -> Result<DimensionReport> {
    let solver = Solver::new(spec, depth, settings)?;
    let resolved = psi.resolve(spec, depth, settings)?;
    let delta = solver.delta()?;
    let dim_nu = dim_nu_with(&solver, resolved, alpha)?;
    let anchor_zero = solver.beta(resolved, alpha, delta)?.beta;
    let anchor_one = solver.beta(resolved, alpha, alpha)?.beta;
    Ok(DimensionReport {
        delta,
        dim_nu,
        alpha,
        beta_anchor_zero: anchor_zero,
        beta_anchor_one: anchor_one,
    })
}
