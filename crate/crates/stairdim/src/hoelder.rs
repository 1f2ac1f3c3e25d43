//! Dimension of the non-Hölder-differentiability set and block
//! diagnostics.
//!
//! For an admissible pair `(psi, alpha)` the set of points where the
//! `alpha`-Hölder derivative of the Gibbs distribution function neither
//! exists nor is infinite has Hausdorff dimension `s`, the unique root of
//!
//! ```text
//! beta_alpha(s) + s * min{ phi(i...)/psi(i...) : i in {0, 1} } = 0
//! ```
//!
//! where `i...` is the constant code at the extreme letter `i`. The root
//! is computed twice — once from the min of the fixed-point ratios and
//! once per letter, taking the max — and the two routes are cross-checked.
//!
//! Oscillation of the Hölder quotient at a point is driven by its
//! `i`-blocks: maximal runs of an extreme letter flanked by other letters.
//! A run of length `k` at level `n` contributes a quotient comparable to
//! `exp(S_n chi_alpha + k*psi(i...))`; bounded scores along infinitely many
//! levels characterize non-differentiability. At finite depth only a
//! heuristic proxy of that asymptotic condition is possible, and the
//! diagnostics here are explicitly labeled as such.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gibbs::GibbsModel;
use crate::ifs::{decode, fixed_point, CodedPoint, IfsSpec, Word};
use crate::settings::Settings;
use crate::thermo::{admissibility_check, dim_nu_with, PotentialSpec, Resolved, Solver};

/// Values of the potentials at the fixed point of an extreme letter.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FixedPointData {
    pub symbol: usize,
    pub fp: f64,
    /// `phi(i...) = log f_i'(fp)`.
    pub phi_val: f64,
    /// `psi(i...)`.
    pub psi_val: f64,
    /// `phi(i...) / psi(i...)`.
    pub ratio: f64,
    /// `chi_alpha(i...) = psi(i...) - alpha * phi(i...)`.
    pub chi_val: f64,
}

/// Dimension of the non-differentiability set with its cross-checks.
#[derive(Debug, Clone, Serialize)]
pub struct LambdaReport {
    /// `dim_H` of the non-Hölder-differentiability set.
    pub s: f64,
    /// Per-letter roots `(s_0, s_1)`; `s` is their maximum.
    pub s_per_letter: (f64, f64),
    pub min_ratio: f64,
    pub delta: f64,
    pub dim_nu: f64,
    /// Observed ordering of `dim_nu` against `s`; no general ordering holds.
    pub ordering_note: String,
}

/// One maximal run of an extreme letter with both flanks in view.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BlockEvent {
    /// The extreme letter `i`.
    pub symbol: usize,
    /// Level `n`: the position (1-based) of the left flank.
    pub level: usize,
    /// Run length `k`.
    pub length: usize,
    /// `S_n chi_alpha` at the point.
    pub birkhoff_chi: f64,
    /// `S_n chi_alpha + k * psi(i...)`.
    pub score: f64,
}

/// A run of an extreme letter cut off by the word boundary, so not a
/// complete block.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OpenRun {
    pub symbol: usize,
    /// Position (1-based) of the first letter of the run.
    pub start: usize,
    pub length: usize,
}

/// Complete blocks of a word plus the runs left open at its ends.
#[derive(Debug, Clone, Serialize)]
pub struct BlockScan {
    pub events: Vec<BlockEvent>,
    pub open_runs: Vec<OpenRun>,
}

/// Finite-depth oscillation diagnostics for one point.
///
/// `candidate` is a heuristic flag, not a membership decision: the true
/// property is asymptotic and cannot be decided from a finite prefix. The
/// flag fires when at least `oscillation_min_count` blocks score at or
/// below the ceiling and the deepest of them sits in the tail of the
/// observed block sequence.
#[derive(Debug, Clone, Serialize)]
pub struct OscillationReport {
    pub events: Vec<BlockEvent>,
    pub candidate: bool,
    pub ceiling: f64,
    pub depth: usize,
}

/// Interval-valued Hölder quotient `|F(x) - F(eta)| / |x - eta|^alpha`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EmpiricalQuotient {
    pub midpoint: f64,
    pub half_width: f64,
}

/// Potential data at the fixed point of `f_symbol`, `symbol` in `{0, 1}`.
pub fn fixed_point_data(
    spec: &IfsSpec,
    psi: &PotentialSpec,
    alpha: f64,
    symbol: usize,
    settings: &Settings,
) -> Result<FixedPointData> {
    let resolved = psi.resolve(spec, settings.pressure_depth, settings)?;
    fixed_point_data_with(spec, resolved, alpha, symbol, settings)
}

fn fixed_point_data_with(
    spec: &IfsSpec,
    psi: Resolved,
    alpha: f64,
    symbol: usize,
    settings: &Settings,
) -> Result<FixedPointData> {
    if symbol > 1 {
        return Err(Error::input(format!(
            "fixed-point data is defined for the extreme letters 0 and 1, got {symbol}"
        )));
    }
    let fp = fixed_point(spec, symbol, settings)?;
    let map = spec.map(symbol)?;
    let phi_val = map.deriv(fp).abs().ln();
    let psi_val = psi.eval(map, fp);
    Ok(FixedPointData {
        symbol,
        fp,
        phi_val,
        psi_val,
        ratio: phi_val / psi_val,
        chi_val: psi_val - alpha * phi_val,
    })
}

/// Root of `f(s) = beta_alpha(s) + s * slope` by bisection on `[0, hi]`.
/// The function is strictly increasing: `beta_alpha` is increasing and
/// `slope > 0`.
fn solve_linear_crossing(
    solver: &Solver<'_>,
    psi: Resolved,
    alpha: f64,
    slope: f64,
    hi: f64,
    settings: &Settings,
) -> Result<f64> {
    let eval = |s: f64| -> Result<f64> { Ok(solver.beta(psi, alpha, s)?.beta + s * slope) };
    let mut lo = 0.0;
    let mut hi = hi;
    let f_lo = eval(lo)?;
    let f_hi = eval(hi)?;
    if f_lo >= 0.0 || f_hi <= 0.0 {
        return Err(Error::numerical(format!(
            "no bracket for the dimension root: f(0) = {f_lo}, f({hi}) = {f_hi}"
        )));
    }
    for _ in 0..settings.max_root_iter {
        if 0.5 * (hi - lo) <= settings.root_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if eval(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Hausdorff dimension of the non-`alpha`-Hölder-differentiability set.
///
/// Admissibility is enforced strictly (`chi_alpha > 0` everywhere), so the
/// boundary case `alpha = delta` with `psi = delta*phi` is rejected as
/// invalid input. The dimension is computed both from the minimum ratio
/// and per letter; disagreement beyond 1e-6 is a numerical failure.
pub fn lambda_dimension(
    spec: &IfsSpec,
    psi: &PotentialSpec,
    alpha: f64,
    depth: usize,
    settings: &Settings,
) -> Result<LambdaReport> {
    let admissible = admissibility_check(spec, psi, alpha, depth, settings)?;
    if !admissible.pass {
        return Err(Error::input(format!(
            "psi is not admissible for alpha = {alpha}: {}",
            admissible.failures.join("; ")
        )));
    }
    let solver = Solver::new(spec, depth, settings)?;
    let resolved = psi.resolve(spec, depth, settings)?;
    let delta = solver.delta()?;
    let data0 = fixed_point_data_with(spec, resolved, alpha, 0, settings)?;
    let data1 = fixed_point_data_with(spec, resolved, alpha, 1, settings)?;
    let min_ratio = data0.ratio.min(data1.ratio);

    let s_min = solve_linear_crossing(&solver, resolved, alpha, min_ratio, delta, settings)?;
    let s0 = solve_linear_crossing(&solver, resolved, alpha, data0.ratio, delta, settings)?;
    let s1 = solve_linear_crossing(&solver, resolved, alpha, data1.ratio, delta, settings)?;
    let s = s0.max(s1);
    if (s - s_min).abs() > 1e-6 {
        return Err(Error::numerical(format!(
            "dimension routes disagree: min-ratio root {s_min} vs max(s_0, s_1) = {s}"
        )));
    }

    let dim_nu = dim_nu_with(&solver, resolved, alpha)?;
    let ordering_note = if dim_nu > s + 1e-8 {
        "dim_nu > s"
    } else if dim_nu < s - 1e-8 {
        "dim_nu < s"
    } else {
        "dim_nu ~ s"
    };
    Ok(LambdaReport {
        s,
        s_per_letter: (s0, s1),
        min_ratio,
        delta,
        dim_nu,
        ordering_note: ordering_note.to_string(),
    })
}

/// Self-similar cross-check: for an affine system with the shifted
/// geometric potential and `alpha = 1`, the exchange function satisfies
/// `beta_1(s) = P(s*phi)/P(phi)`. Returns the maximum deviation between
/// the implicit solver and that identity over a 20-point grid in
/// `[0, delta]` plus the anchor `s = 1`.
pub fn darst_consistency(spec: &IfsSpec, depth: usize, settings: &Settings) -> Result<f64> {
    if !spec.is_affine() {
        return Err(Error::input(
            "the self-similar identity holds for affine systems only",
        ));
    }
    let solver = Solver::new(spec, depth, settings)?;
    let psi = PotentialSpec::DarstShift.resolve(spec, depth, settings)?;
    let p_phi = solver.pressure_of(1.0, 0.0);
    if p_phi.abs() < 1e-12 {
        return Err(Error::input(
            "ratios sum to 1: P(phi) = 0 degenerates the identity",
        ));
    }
    let delta = solver.delta()?;
    let mut max_dev: f64 = 0.0;
    let mut grid: Vec<f64> = (0..20).map(|i| delta * i as f64 / 19.0).collect();
    grid.push(1.0);
    for s in grid {
        let implicit = solver.beta(psi, 1.0, s)?.beta;
        let closed = solver.pressure_of(s, 0.0) / p_phi;
        max_dev = max_dev.max((implicit - closed).abs());
    }
    Ok(max_dev)
}

/// Maximal runs of each extreme letter in `word[lo..]`, split into
/// complete blocks (both flanks present) and open runs.
fn scan_runs(symbols: &[usize]) -> (Vec<(usize, usize, usize)>, Vec<OpenRun>) {
    let mut complete = Vec::new();
    let mut open = Vec::new();
    let n = symbols.len();
    let mut pos = 0;
    while pos < n {
        let sym = symbols[pos];
        let mut end = pos + 1;
        while end < n && symbols[end] == sym {
            end += 1;
        }
        if sym <= 1 {
            let has_left = pos > 0;
            let has_right = end < n;
            if has_left && has_right {
                // Level is the 1-based position of the left flank.
                complete.push((sym, pos, end - pos));
            } else {
                open.push(OpenRun {
                    symbol: sym,
                    start: pos + 1,
                    length: end - pos,
                });
            }
        }
        pos = end;
    }
    (complete, open)
}

/// Cumulative Birkhoff sums of the geometric potential along the first
/// `len` symbols of `point`: `out[n] = S_n phi`.
fn phi_prefix_sums(
    spec: &IfsSpec,
    point: &CodedPoint,
    len: usize,
    settings: &Settings,
) -> Result<Vec<f64>> {
    let tail = decode(spec, &point.shifted(len), settings.decode_tol)?;
    let mut coords = vec![0.0; len + 1];
    coords[len] = tail;
    for j in (0..len).rev() {
        coords[j] = spec.maps()[point.symbol_at(j)].eval(coords[j + 1]);
    }
    let mut sums = vec![0.0; len + 1];
    for j in 0..len {
        let map = &spec.maps()[point.symbol_at(j)];
        sums[j + 1] = sums[j] + map.deriv(coords[j + 1]).abs().ln();
    }
    Ok(sums)
}

fn events_from_runs(
    runs: &[(usize, usize, usize)],
    phi_sums: &[f64],
    chi: Resolved,
    psi_at_fp: [f64; 2],
) -> Vec<BlockEvent> {
    runs.iter()
        .map(|&(sym, start, len)| {
            let level = start; // 1-based position of the left flank
            let s_chi = chi.phi_coeff * phi_sums[level] + level as f64 * chi.offset;
            BlockEvent {
                symbol: sym,
                level,
                length: len,
                birkhoff_chi: s_chi,
                score: s_chi + len as f64 * psi_at_fp[sym],
            }
        })
        .collect()
}

/// Blocks of a finite word. Birkhoff sums are evaluated at the point coded
/// by the word completed periodically; bounded distortion keeps the
/// dependence on the completion within an O(1) shift of the scores.
pub fn detect_blocks(
    spec: &IfsSpec,
    psi: &PotentialSpec,
    alpha: f64,
    word: &Word,
    settings: &Settings,
) -> Result<BlockScan> {
    if word.len() < 3 {
        return Err(Error::input("block detection needs a word of length >= 3"));
    }
    word.check_alphabet(spec.alphabet_size())?;
    let resolved = psi.resolve(spec, settings.pressure_depth, settings)?;
    let point = CodedPoint::periodic(word.clone())?;
    let phi_sums = phi_prefix_sums(spec, &point, word.len(), settings)?;
    let (runs, open_runs) = scan_runs(word.symbols());
    let psi_at_fp = [
        fixed_point_data_with(spec, resolved, alpha, 0, settings)?.psi_val,
        fixed_point_data_with(spec, resolved, alpha, 1, settings)?.psi_val,
    ];
    let events = events_from_runs(&runs, &phi_sums, resolved.chi(alpha), psi_at_fp);
    Ok(BlockScan { events, open_runs })
}

/// Block events of the depth-`depth` prefix of a point, with the
/// finite-depth oscillation flag.
///
/// The point must lie outside the endpoint set: codes that are eventually
/// constant 0 or 1 are rejected; the non-differentiability set excludes
/// them by construction.
pub fn oscillation_score_series(
    spec: &IfsSpec,
    psi: &PotentialSpec,
    alpha: f64,
    point: &CodedPoint,
    depth: usize,
    settings: &Settings,
) -> Result<OscillationReport> {
    if point.is_endpoint() {
        return Err(Error::input(
            "point lies in the endpoint set (eventually constant 0 or 1)",
        ));
    }
    point.check_alphabet(spec.alphabet_size())?;
    if depth < 3 {
        return Err(Error::input("oscillation scan needs depth >= 3"));
    }
    let resolved = psi.resolve(spec, settings.pressure_depth, settings)?;
    let phi_sums = phi_prefix_sums(spec, point, depth, settings)?;
    let expansion = point.expand(depth);
    let (runs, _) = scan_runs(expansion.symbols());
    let psi_at_fp = [
        fixed_point_data_with(spec, resolved, alpha, 0, settings)?.psi_val,
        fixed_point_data_with(spec, resolved, alpha, 1, settings)?.psi_val,
    ];
    let events = events_from_runs(&runs, &phi_sums, resolved.chi(alpha), psi_at_fp);

    let ceiling = settings.oscillation_ceiling;
    let below: Vec<usize> = events
        .iter()
        .filter(|e| e.score <= ceiling)
        .map(|e| e.level)
        .collect();
    let last_level = events.last().map(|e| e.level).unwrap_or(0);
    let candidate = below.len() >= settings.oscillation_min_count
        && last_level > 0
        && *below.last().unwrap_or(&0) as f64
            >= settings.oscillation_tail_fraction * last_level as f64;
    Ok(OscillationReport {
        events,
        candidate,
        ceiling,
        depth,
    })
}

/// Build a prefix whose block scores stay bounded: alternating filler
/// followed by runs of the letter 0 whose lengths cancel the accumulated
/// `S_n chi_alpha`, the pattern that produces points where the Hölder
/// quotient oscillates. The returned word has length `depth`.
pub fn oscillating_point_prefix(
    spec: &IfsSpec,
    psi: &PotentialSpec,
    alpha: f64,
    depth: usize,
    settings: &Settings,
) -> Result<Word> {
    if depth < 8 {
        return Err(Error::input("prefix construction needs depth >= 8"));
    }
    let resolved = psi.resolve(spec, settings.pressure_depth, settings)?;
    let chi = resolved.chi(alpha);
    let psi_zero = fixed_point_data_with(spec, resolved, alpha, 0, settings)?.psi_val;
    if psi_zero >= 0.0 {
        return Err(Error::input(format!(
            "psi(0...) = {psi_zero} must be negative to size the runs"
        )));
    }
    // Birkhoff sums along the partial word, closed with the fixed point of
    // the letter 1 (the continuation always starts with a 1).
    let tail_coord = fixed_point(spec, 1, settings)?;
    let chi_sum_at = |symbols: &[usize], n: usize| -> f64 {
        let mut coords = vec![0.0; symbols.len() + 1];
        coords[symbols.len()] = tail_coord;
        for j in (0..symbols.len()).rev() {
            coords[j] = spec.maps()[symbols[j]].eval(coords[j + 1]);
        }
        let mut sum = 0.0;
        for j in 0..n {
            let map = &spec.maps()[symbols[j]];
            sum += chi.phi_coeff * map.deriv(coords[j + 1]).abs().ln() + chi.offset;
        }
        sum
    };

    let mut word = vec![1, 0, 1];
    loop {
        let n = word.len();
        let s_chi = chi_sum_at(&word, n);
        let k = (s_chi / -psi_zero).ceil().max(1.0) as usize;
        if n + k + 1 > depth {
            break;
        }
        word.extend(std::iter::repeat_n(0, k));
        word.push(1);
    }
    // Pad with an open run which produces no further events.
    word.resize(depth, 0);
    Ok(Word::new(word))
}

/// Interval-valued Hölder quotient between two points, from the
/// distribution bounds at the given level.
pub fn empirical_quotient(
    spec: &IfsSpec,
    psi: &PotentialSpec,
    alpha: f64,
    x: f64,
    eta: f64,
    level: usize,
    settings: &Settings,
) -> Result<EmpiricalQuotient> {
    if x == eta {
        return Err(Error::input("quotient needs two distinct points"));
    }
    if !spec.domain().contains(x) || !spec.domain().contains(eta) {
        return Err(Error::input(format!(
            "points {x} and {eta} must lie in the domain"
        )));
    }
    let model = GibbsModel::new(spec, psi, settings)?;
    let fx = model.distribution(x, level)?;
    let fe = model.distribution(eta, level)?;
    let diff_lo = (fx.lower - fe.upper).max(fe.lower - fx.upper).max(0.0);
    let diff_hi = (fx.upper - fe.lower).max(fe.upper - fx.lower);
    let denom = (x - eta).abs().powf(alpha);
    let (q_lo, q_hi) = (diff_lo / denom, diff_hi / denom);
    Ok(EmpiricalQuotient {
        midpoint: 0.5 * (q_lo + q_hi),
        half_width: 0.5 * (q_hi - q_lo),
    })
}
