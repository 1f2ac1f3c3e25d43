//! Gibbs cylinder weights and the distribution function of the measure.
//!
//! A potential `psi` with `P(psi) = 0` and `psi < 0` carries a Gibbs
//! measure whose cylinder masses are comparable to `exp(S_n psi)`. Two
//! weight models are implemented:
//!
//! - `ExactBernoulli`, for affine systems where `psi` is constant on the
//!   first-generation cylinders: masses are exact products of per-letter
//!   probabilities;
//! - `LevelNormalized`, the general fallback: weights proportional to
//!   `exp(S_n psi)` at the cylinder anchors, normalized per level, with the
//!   comparability constant reported alongside.
//!
//! The distribution function `F(x)` (an ordinary devil's staircase) is
//! returned as an interval: the gap between the bounds is the mass of the
//! deepest cylinder still containing `x`, which is the honest truncation
//! error at finite depth.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ifs::{cylinder, IfsSpec, Interval, Word};
use crate::settings::Settings;
use crate::thermo::{pressure, scan_extrema, PotentialSpec, Resolved};

/// How a weight table was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WeightMode {
    ExactBernoulli,
    LevelNormalized,
}

/// Weight table for one level, keyed by depth-`level` words in geometric
/// left-to-right order.
#[derive(Debug, Clone, Serialize)]
pub struct GibbsWeights {
    pub mode: WeightMode,
    pub level: usize,
    entries: Vec<WeightEntry>,
    /// Two-sided comparability constant against `exp(S_n psi(anchor))`.
    pub comparability: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightEntry {
    pub word: Word,
    pub interval: Interval,
    pub weight: f64,
}

impl GibbsWeights {
    pub fn entries(&self) -> &[WeightEntry] {
        &self.entries
    }

    pub fn weight_of(&self, word: &Word) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| &e.word == word)
            .map(|e| e.weight)
    }

    /// Compensated sum of all weights in the table.
    pub fn total(&self) -> f64 {
        kahan_sum(self.entries.iter().map(|e| e.weight))
    }
}

/// Distribution-function value as an honest interval.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DistributionBounds {
    pub lower: f64,
    pub upper: f64,
}

impl DistributionBounds {
    fn exact(v: f64) -> DistributionBounds {
        DistributionBounds { lower: v, upper: v }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Piecewise description of the staircase: for every depth-`level`
/// cylinder, the pair (left endpoint, mass to the left) and
/// (right endpoint, mass through the cylinder). Exact on every gap of
/// generation at most `level`.
#[derive(Debug, Clone, Serialize)]
pub struct StaircaseSample {
    pub points: Vec<(f64, f64)>,
    pub level: usize,
    pub count: usize,
}

impl StaircaseSample {
    /// CSV rows `x,F_lower,F_upper`. The emitted abscissae are gap edges
    /// where the truncated value is exact, so the two bound columns agree.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,F_lower,F_upper\n");
        for &(x, f) in &self.points {
            out.push_str(&format!("{x},{f},{f}\n"));
        }
        out
    }
}

/// A system/potential pair ready for measure queries, with per-level
/// weight tables built on demand and cached behind a lock. Readers share
/// the published tables.
pub struct GibbsModel<'a> {
    spec: &'a IfsSpec,
    settings: &'a Settings,
    psi: Resolved,
    mode: WeightMode,
    /// Per-letter probabilities in geometric order (Bernoulli mode).
    probs: Vec<f64>,
    order: Vec<usize>,
    tables: Mutex<HashMap<usize, Arc<GibbsWeights>>>,
}

impl<'a> GibbsModel<'a> {
    /// Validates admissibility of `psi` for measure use (`psi < 0` on a
    /// cylinder grid and `P(psi) = 0` within tolerance) and fixes the
    /// weight mode.
    pub fn new(
        spec: &'a IfsSpec,
        psi: &PotentialSpec,
        settings: &'a Settings,
    ) -> Result<GibbsModel<'a>> {
        let depth = settings.pressure_depth;
        let resolved = psi.resolve(spec, depth, settings)?;
        let p_psi = pressure(spec, psi, depth, settings)?.value;
        if p_psi.abs() > settings.admissibility_tol {
            return Err(Error::input(format!(
                "psi is not normalized: P(psi) = {p_psi} exceeds {}",
                settings.admissibility_tol
            )));
        }
        let ext = scan_extrema(spec, resolved, depth.min(12));
        if ext.max >= 0.0 {
            return Err(Error::input(format!(
                "psi must be negative; found psi = {} near x = {}",
                ext.max, ext.max_at
            )));
        }
        let order = spec.geometric_order();
        let mode = if spec.is_affine() {
            WeightMode::ExactBernoulli
        } else {
            WeightMode::LevelNormalized
        };
        let probs = if mode == WeightMode::ExactBernoulli {
            // psi is constant on each first-generation cylinder; normalize
            // the per-letter masses so level sums telescope to one.
            let raw: Vec<f64> = order
                .iter()
                .map(|&a| resolved.eval(&spec.maps()[a], spec.domain().lo).exp())
                .collect();
            let total: f64 = raw.iter().sum();
            raw.iter().map(|w| w / total).collect()
        } else {
            Vec::new()
        };
        Ok(GibbsModel {
            spec,
            settings,
            psi: resolved,
            mode,
            probs,
            order,
            tables: Mutex::new(HashMap::new()),
        })
    }

    pub fn mode(&self) -> WeightMode {
        self.mode
    }

    /// Mass of the cylinder of `word`.
    pub fn cylinder_weight(&self, word: &Word) -> Result<f64> {
        word.check_alphabet(self.spec.alphabet_size())?;
        match self.mode {
            WeightMode::ExactBernoulli => Ok(word
                .symbols()
                .iter()
                .map(|&a| self.prob_of_symbol(a))
                .product()),
            WeightMode::LevelNormalized => {
                let table = self.weights(word.len())?;
                table
                    .weight_of(word)
                    .ok_or_else(|| Error::input(format!("word {word} not found in level table")))
            }
        }
    }

    fn prob_of_symbol(&self, a: usize) -> f64 {
        let rank = self.order.iter().position(|&b| b == a).unwrap();
        self.probs[rank]
    }

    /// The level-`n` weight table, built on first use.
    pub fn weights(&self, level: usize) -> Result<Arc<GibbsWeights>> {
        if level == 0 {
            return Err(Error::input("weight tables start at level 1"));
        }
        if let Some(table) = self.tables.lock().unwrap().get(&level) {
            return Ok(table.clone());
        }
        let table = Arc::new(self.build_table(level)?);
        Ok(self
            .tables
            .lock()
            .unwrap()
            .entry(level)
            .or_insert(table)
            .clone())
    }

    fn build_table(&self, level: usize) -> Result<GibbsWeights> {
        let count = (self.spec.alphabet_size() as u64).checked_pow(level as u32);
        match count {
            Some(c) if c <= self.settings.cylinder_budget => {}
            _ => {
                return Err(Error::resource(format!(
                    "level {level} needs {}^{level} cylinders, over the budget of {}",
                    self.spec.alphabet_size(),
                    self.settings.cylinder_budget
                )))
            }
        }
        // Geometric-lexicographic enumeration; anchor Birkhoff sums by a
        // backward pass per word.
        let mut entries = Vec::with_capacity(count.unwrap() as usize);
        let mut word = vec![0usize; level];
        let mut ranks = vec![0usize; level];
        loop {
            for (i, &r) in ranks.iter().enumerate() {
                word[i] = self.order[r];
            }
            let w = Word::new(word.clone());
            let info = cylinder(self.spec, &w)?;
            let mut log_w = 0.0;
            let mut point = self.spec.domain().lo;
            for &a in word.iter().rev() {
                let map = &self.spec.maps()[a];
                log_w += self.psi.eval(map, point);
                point = map.eval(point);
            }
            entries.push((w, info.interval, log_w));
            // Next word in geometric-lexicographic order.
            let mut i = level;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                ranks[i] += 1;
                if ranks[i] < self.order.len() {
                    break;
                }
                ranks[i] = 0;
            }
            if i == 0 && ranks[0] == 0 {
                break;
            }
        }

        let weights: Vec<f64> = match self.mode {
            WeightMode::ExactBernoulli => entries
                .iter()
                .map(|(w, _, _)| {
                    w.symbols()
                        .iter()
                        .map(|&a| self.prob_of_symbol(a))
                        .product()
                })
                .collect(),
            WeightMode::LevelNormalized => {
                let max = entries
                    .iter()
                    .map(|e| e.2)
                    .fold(f64::NEG_INFINITY, f64::max);
                let scaled: Vec<f64> = entries.iter().map(|e| (e.2 - max).exp()).collect();
                let total = kahan_sum(scaled.iter().copied());
                scaled.iter().map(|s| s / total).collect()
            }
        };
        let mut comparability = 1.0f64;
        for ((_, _, log_w), &w) in entries.iter().zip(&weights) {
            let ratio = w / log_w.exp();
            comparability = comparability.max(ratio.max(1.0 / ratio));
        }
        Ok(GibbsWeights {
            mode: self.mode,
            level,
            entries: entries
                .into_iter()
                .zip(weights)
                .map(|((word, interval, _), weight)| WeightEntry {
                    word,
                    interval,
                    weight,
                })
                .collect(),
            comparability,
        })
    }

    /// Bounds on `F(x) = nu((-inf, x])` from the cylinder tree truncated
    /// at `level`. The bounds coincide when `x` sits in a gap of
    /// generation at most `level`; outside the domain the value is exact.
    pub fn distribution(&self, x: f64, level: usize) -> Result<DistributionBounds> {
        if level == 0 {
            return Err(Error::input("distribution level must be >= 1"));
        }
        let domain = self.spec.domain();
        if x <= domain.lo {
            return Ok(DistributionBounds::exact(0.0));
        }
        if x >= domain.hi {
            return Ok(DistributionBounds::exact(1.0));
        }
        match self.mode {
            WeightMode::ExactBernoulli => {
                let mut cum = 0.0;
                let mut mass = 1.0;
                let mut y = x;
                for _ in 0..level {
                    let mut hit = None;
                    for (rank, &a) in self.order.iter().enumerate() {
                        let img = self.spec.image(a)?;
                        if y < img.lo {
                            break;
                        }
                        if img.contains(y) {
                            hit = Some((rank, a));
                            break;
                        }
                        cum += mass * self.probs[rank];
                    }
                    match hit {
                        Some((rank, a)) => {
                            mass *= self.probs[rank];
                            y = self.spec.maps()[a].invert(y, domain);
                        }
                        None => return Ok(DistributionBounds::exact(cum)),
                    }
                }
                Ok(DistributionBounds {
                    lower: cum,
                    upper: cum + mass,
                })
            }
            WeightMode::LevelNormalized => {
                let table = self.weights(level)?;
                let mut cum = 0.0;
                for entry in table.entries() {
                    if x < entry.interval.lo {
                        return Ok(DistributionBounds::exact(cum));
                    }
                    if x <= entry.interval.hi {
                        return Ok(DistributionBounds {
                            lower: cum,
                            upper: cum + entry.weight,
                        });
                    }
                    cum += entry.weight;
                }
                Ok(DistributionBounds::exact(cum))
            }
        }
    }

    /// Staircase sample at the given level: two points per cylinder in
    /// left-to-right order.
    pub fn staircase(&self, level: usize) -> Result<StaircaseSample> {
        let table = self.weights(level)?;
        let mut points = Vec::with_capacity(2 * table.entries().len());
        let mut cum = 0.0;
        for entry in table.entries() {
            points.push((entry.interval.lo, cum));
            cum += entry.weight;
            points.push((entry.interval.hi, cum));
        }
        Ok(StaircaseSample {
            count: points.len(),
            points,
            level,
        })
    }
}

/// Mass of the cylinder of `word` under the Gibbs measure of `psi`.
pub fn cylinder_weight(
    spec: &IfsSpec,
    psi: &PotentialSpec,
    word: &Word,
    settings: &Settings,
) -> Result<f64> {
    GibbsModel::new(spec, psi, settings)?.cylinder_weight(word)
}

/// Bounds on the distribution function at `x`, truncated at `level`.
pub fn distribution_value(
    spec: &IfsSpec,
    psi: &PotentialSpec,
    x: f64,
    level: usize,
    settings: &Settings,
) -> Result<DistributionBounds> {
    GibbsModel::new(spec, psi, settings)?.distribution(x, level)
}

/// Plot-ready staircase sample at the given level.
pub fn staircase_sample(
    spec: &IfsSpec,
    psi: &PotentialSpec,
    level: usize,
    settings: &Settings,
) -> Result<StaircaseSample> {
    GibbsModel::new(spec, psi, settings)?.staircase(level)
}

fn kahan_sum<I: Iterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::test_systems::{affine_pair, middle_thirds, nonlinear_pair};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn settings() -> Settings {
        Settings::default()
    }

    fn uniform_psi() -> PotentialSpec {
        PotentialSpec::ScaledGeometric(2f64.ln() / 3f64.ln())
    }

    #[test]
    fn symmetric_system_splits_mass_equally() {
        let spec = middle_thirds();
        let s = settings();
        let w = cylinder_weight(&spec, &uniform_psi(), &Word::new(vec![0]), &s).unwrap();
        assert!((w - 0.5).abs() < 1e-12);
    }

    #[test]
    fn darst_weights_are_ratio_proportions() {
        let spec = affine_pair(0.1, 0.5);
        let s = settings();
        let w0 =
            cylinder_weight(&spec, &PotentialSpec::DarstShift, &Word::new(vec![0]), &s).unwrap();
        assert!((w0 - 1.0 / 6.0).abs() < 1e-12, "w0 = {w0}");
        let w01 = cylinder_weight(
            &spec,
            &PotentialSpec::DarstShift,
            &Word::new(vec![0, 1]),
            &s,
        )
        .unwrap();
        assert!((w01 - (1.0 / 6.0) * (5.0 / 6.0)).abs() < 1e-12);
    }

    #[test]
    fn non_admissible_psi_is_input_error() {
        let spec = middle_thirds();
        let s = settings();
        // P(0.2*phi) > 0: not normalized.
        let err = cylinder_weight(
            &spec,
            &PotentialSpec::ScaledGeometric(0.2),
            &Word::new(vec![0]),
            &s,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn distribution_at_quarter_straddles_third() {
        let spec = middle_thirds();
        let s = settings();
        for level in [4, 8, 12] {
            let b = distribution_value(&spec, &uniform_psi(), 0.25, level, &s).unwrap();
            assert!(
                b.lower < 1.0 / 3.0 && 1.0 / 3.0 < b.upper,
                "level {level}: {b:?}"
            );
            assert!(b.width() <= 2f64.powi(-(level as i32)) + 1e-15);
        }
    }

    #[test]
    fn distribution_is_exact_on_gaps_and_boundary() {
        let spec = middle_thirds();
        let s = settings();
        let model = GibbsModel::new(&spec, &uniform_psi(), &s).unwrap();
        let mid = model.distribution(0.5, 9).unwrap();
        assert_eq!(mid.lower, 0.5);
        assert_eq!(mid.upper, 0.5);
        let hi = model.distribution(1.0, 9).unwrap();
        assert_eq!(hi.lower, 1.0);
        assert_eq!(hi.upper, 1.0);
        let lo = model.distribution(0.0, 9).unwrap();
        assert_eq!(lo.upper, 0.0);
        let outside = model.distribution(1.7, 3).unwrap();
        assert_eq!(outside.lower, 1.0);
    }

    #[test]
    fn gap_endpoints_share_their_value() {
        let spec = middle_thirds();
        let s = settings();
        let model = GibbsModel::new(&spec, &uniform_psi(), &s).unwrap();
        // Generation-2 gap (1/9, 2/9).
        let left = model.distribution(1.0 / 9.0, 2).unwrap();
        let right = model.distribution(2.0 / 9.0, 2).unwrap();
        assert_eq!(left.upper, right.lower);
        let inside = model.distribution(0.15, 2).unwrap();
        assert_eq!(inside.lower, inside.upper);
        assert_eq!(inside.lower, left.upper);
    }

    #[test]
    fn bounds_nest_across_levels() {
        let spec = affine_pair(0.1, 0.5);
        let s = settings();
        let model = GibbsModel::new(&spec, &PotentialSpec::DarstShift, &s).unwrap();
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..50 {
            let x: f64 = rng.random_range(0.0..1.0);
            let mut prev = model.distribution(x, 1).unwrap();
            for level in 2..=10 {
                let next = model.distribution(x, level).unwrap();
                assert!(next.lower >= prev.lower - 1e-14);
                assert!(next.upper <= prev.upper + 1e-14);
                prev = next;
            }
        }
    }

    #[test]
    fn distribution_monotone_in_x() {
        let s = settings();
        for spec in [affine_pair(0.1, 0.5), nonlinear_pair()] {
            let psi = if spec.is_affine() {
                PotentialSpec::DarstShift
            } else {
                // The normalization depth must match the model's check.
                let d = crate::thermo::solve_delta(&spec, s.pressure_depth, &s).unwrap();
                PotentialSpec::ScaledGeometric(d)
            };
            let model = GibbsModel::new(&spec, &psi, &s).unwrap();
            let mut rng = StdRng::seed_from_u64(9);
            let mut xs: Vec<f64> = (0..200).map(|_| rng.random_range(0.0..1.0)).collect();
            xs.sort_by(f64::total_cmp);
            for level in [4, 9] {
                let bounds: Vec<_> = xs
                    .iter()
                    .map(|&x| model.distribution(x, level).unwrap())
                    .collect();
                for w in bounds.windows(2) {
                    assert!(w[1].lower >= w[0].lower - 1e-14);
                    assert!(w[1].upper >= w[0].upper - 1e-14);
                }
            }
        }
    }

    #[test]
    fn level_sums_are_one() {
        let s = settings();
        for (spec, psi) in [
            (middle_thirds(), uniform_psi()),
            (affine_pair(0.1, 0.5), PotentialSpec::DarstShift),
        ] {
            let model = GibbsModel::new(&spec, &psi, &s).unwrap();
            for level in 1..=14 {
                let total = model.weights(level).unwrap().total();
                assert!((total - 1.0).abs() <= 1e-12, "level {level}: {total}");
            }
        }
    }

    #[test]
    fn bernoulli_refinement_is_consistent() {
        let spec = affine_pair(0.1, 0.5);
        let s = settings();
        let model = GibbsModel::new(&spec, &PotentialSpec::DarstShift, &s).unwrap();
        let parent = model.cylinder_weight(&Word::new(vec![0, 1])).unwrap();
        let kids: f64 = (0..2)
            .map(|a| model.cylinder_weight(&Word::new(vec![0, 1, a])).unwrap())
            .sum();
        assert!((parent - kids).abs() < 1e-15);
    }

    #[test]
    fn level_normalized_weight_lookup() {
        let spec = nonlinear_pair();
        let s = settings();
        let d = crate::thermo::solve_delta(&spec, s.pressure_depth, &s).unwrap();
        let model = GibbsModel::new(&spec, &PotentialSpec::ScaledGeometric(d), &s).unwrap();
        assert_eq!(model.mode(), WeightMode::LevelNormalized);
        let w = model.cylinder_weight(&Word::new(vec![0, 1, 0])).unwrap();
        assert!(w > 0.0 && w < 1.0);
        // Sibling weights at the level account for all the mass.
        let total: f64 = (0..2)
            .flat_map(|a| (0..2).map(move |b| (a, b)))
            .flat_map(|(a, b)| (0..2).map(move |c| (a, b, c)))
            .map(|(a, b, c)| model.cylinder_weight(&Word::new(vec![a, b, c])).unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn level_normalized_agrees_with_products_on_affine() {
        // Force the general mode onto an affine system and compare.
        let spec = affine_pair(0.1, 0.5);
        let s = settings();
        let model = GibbsModel::new(&spec, &PotentialSpec::DarstShift, &s).unwrap();
        let mut forced = GibbsModel::new(&spec, &PotentialSpec::DarstShift, &s).unwrap();
        forced.mode = WeightMode::LevelNormalized;
        for level in 1..=8 {
            let exact = model.weights(level).unwrap();
            let general = forced.weights(level).unwrap();
            for (e, g) in exact.entries().iter().zip(general.entries()) {
                assert!((e.weight - g.weight).abs() < 1e-12);
            }
            assert!(general.comparability < 1.5);
        }
    }

    #[test]
    fn staircase_level_one_matches_hand_values() {
        let spec = middle_thirds();
        let s = settings();
        let sample = staircase_sample(&spec, &uniform_psi(), 1, &s).unwrap();
        let expect = [(0.0, 0.0), (1.0 / 3.0, 0.5), (2.0 / 3.0, 0.5), (1.0, 1.0)];
        assert_eq!(sample.points.len(), 4);
        for ((x, f), (ex, ef)) in sample.points.iter().zip(expect) {
            assert!((x - ex).abs() < 1e-15 && (f - ef).abs() < 1e-15);
        }
    }

    #[test]
    fn staircase_darst_first_jump() {
        let spec = affine_pair(0.1, 0.5);
        let s = settings();
        let sample = staircase_sample(&spec, &PotentialSpec::DarstShift, 1, &s).unwrap();
        let heights: Vec<f64> = sample.points.iter().map(|p| p.1).collect();
        assert!((heights[0] - 0.0).abs() < 1e-12);
        assert!((heights[1] - 1.0 / 6.0).abs() < 1e-12);
        assert!((heights[2] - 1.0 / 6.0).abs() < 1e-12);
        assert!((heights[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn staircase_point_count_and_monotonicity() {
        let spec = nonlinear_pair();
        let s = settings();
        let d = crate::thermo::solve_delta(&spec, s.pressure_depth, &s).unwrap();
        let sample = staircase_sample(&spec, &PotentialSpec::ScaledGeometric(d), 6, &s).unwrap();
        assert_eq!(sample.count, 2 * 2usize.pow(6));
        for w in sample.points.windows(2) {
            assert!(w[1].1 >= w[0].1);
            assert!(w[1].0 >= w[0].0);
        }
        assert!(sample.points.first().unwrap().1 >= 0.0);
        assert!(sample.points.last().unwrap().1 <= 1.0 + 1e-12);
    }

    #[test]
    fn staircase_csv_shape() {
        let spec = middle_thirds();
        let s = settings();
        let csv = staircase_sample(&spec, &uniform_psi(), 1, &s)
            .unwrap()
            .to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "x,F_lower,F_upper");
        assert_eq!(lines.count(), 4);
    }

    #[test]
    fn over_budget_table_is_resource_error() {
        let spec = middle_thirds();
        let mut s = settings();
        s.cylinder_budget = 1 << 10;
        let err = staircase_sample(&spec, &uniform_psi(), 11, &s).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
    }
}
