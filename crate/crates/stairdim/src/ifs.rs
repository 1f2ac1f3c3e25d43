//! Contraction systems on a real interval and their symbolic coding.
//!
//! An [`IfsSpec`] is a finite family of orientation-preserving contractions of
//! a closed interval `X` with pairwise disjoint images. Under these standing
//! hypotheses every point of the limit set is coded by a unique infinite word
//! over the alphabet `0..alphabet_size`, and finite words correspond to nested
//! cylinder intervals `f_w(X)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::settings::Settings;

/// Closed real interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Interval {
        Interval { lo, hi }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// One generator of the system.
///
/// The non-affine family is `f(x) = c*x + d + e*x*(1-x)` on `[0, 1]`, a
/// quadratic perturbation of an affine contraction with derivative
/// `c + e*(1 - 2x)`, so evaluation, derivative and inverse are closed-form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapSpec {
    Affine { ratio: f64, offset: f64 },
    Nonlinear { c: f64, d: f64, e: f64 },
}

impl MapSpec {
    pub fn affine(ratio: f64, offset: f64) -> Result<MapSpec> {
        if !(ratio > 0.0 && ratio < 1.0) || !ratio.is_finite() || !offset.is_finite() {
            return Err(Error::input(format!(
                "affine map requires ratio in (0,1) and finite offset, got ratio={ratio}, offset={offset}"
            )));
        }
        Ok(MapSpec::Affine { ratio, offset })
    }

    pub fn nonlinear(c: f64, d: f64, e: f64) -> Result<MapSpec> {
        if ![c, d, e].iter().all(|v| v.is_finite()) {
            return Err(Error::input("nonlinear map parameters must be finite"));
        }
        Ok(MapSpec::Nonlinear { c, d, e })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            MapSpec::Affine { ratio, offset } => ratio * x + offset,
            MapSpec::Nonlinear { c, d, e } => c * x + d + e * x * (1.0 - x),
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        match *self {
            MapSpec::Affine { ratio, .. } => ratio,
            MapSpec::Nonlinear { c, e, .. } => c + e * (1.0 - 2.0 * x),
        }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, MapSpec::Affine { .. })
    }

    /// Supremum of |f'| over the domain. The derivative is constant or
    /// linear in x, so the extremes sit at the endpoints.
    pub(crate) fn deriv_sup(&self, domain: Interval) -> f64 {
        match *self {
            MapSpec::Affine { ratio, .. } => ratio,
            MapSpec::Nonlinear { .. } => {
                self.deriv(domain.lo).abs().max(self.deriv(domain.hi).abs())
            }
        }
    }

    /// Inverse of the map at `y`, assuming `y` lies in the image of
    /// `domain`. Clamped to the domain: rounding may overshoot the
    /// endpoints by an ulp.
    pub(crate) fn invert(&self, y: f64, domain: Interval) -> f64 {
        match *self {
            MapSpec::Affine { ratio, offset } => ((y - offset) / ratio).clamp(domain.lo, domain.hi),
            MapSpec::Nonlinear { .. } => {
                // Monotone on the domain: bisect f(t) = y.
                let (mut lo, mut hi) = (domain.lo, domain.hi);
                for _ in 0..128 {
                    let mid = 0.5 * (lo + hi);
                    if self.eval(mid) < y {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        }
    }
}

/// A validated family of contractions with its domain interval.
#[derive(Debug, Clone, PartialEq)]
pub struct IfsSpec {
    maps: Vec<MapSpec>,
    domain: Interval,
}

impl IfsSpec {
    /// Structural construction. Full hypothesis checking is a separate,
    /// grid-based step: see [`validate_ifs`].
    pub fn new(maps: Vec<MapSpec>, domain: Interval) -> Result<IfsSpec> {
        if maps.len() < 2 {
            return Err(Error::input(format!(
                "alphabet must have at least 2 letters, got {}",
                maps.len()
            )));
        }
        if !domain.lo.is_finite() || !domain.hi.is_finite() || domain.lo >= domain.hi {
            return Err(Error::input(format!(
                "domain must be a nondegenerate finite interval, got [{}, {}]",
                domain.lo, domain.hi
            )));
        }
        Ok(IfsSpec { maps, domain })
    }

    pub fn alphabet_size(&self) -> usize {
        self.maps.len()
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn maps(&self) -> &[MapSpec] {
        &self.maps
    }

    pub fn map(&self, symbol: usize) -> Result<&MapSpec> {
        self.maps.get(symbol).ok_or_else(|| {
            Error::input(format!(
                "symbol {symbol} out of range for alphabet of size {}",
                self.maps.len()
            ))
        })
    }

    pub fn is_affine(&self) -> bool {
        self.maps.iter().all(MapSpec::is_affine)
    }

    /// Image interval `f_a(X)` of the whole domain under one map.
    pub fn image(&self, symbol: usize) -> Result<Interval> {
        let m = self.map(symbol)?;
        Ok(Interval::new(
            m.eval(self.domain.lo),
            m.eval(self.domain.hi),
        ))
    }

    /// Symbols sorted left to right by the position of their image interval.
    pub(crate) fn geometric_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.maps.len()).collect();
        order.sort_by(|&a, &b| {
            let la = self.maps[a].eval(self.domain.lo);
            let lb = self.maps[b].eval(self.domain.lo);
            la.total_cmp(&lb)
        });
        order
    }

    /// Uniform contraction bound: max over maps of sup |f'|.
    pub(crate) fn contraction_bound(&self) -> f64 {
        self.maps
            .iter()
            .map(|m| m.deriv_sup(self.domain))
            .fold(0.0, f64::max)
    }
}

/// Finite word over the alphabet. The empty word denotes the whole space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(symbols: Vec<usize>) -> Word {
        Word(symbols)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn check_alphabet(&self, alphabet_size: usize) -> Result<()> {
        match self.0.iter().find(|&&s| s >= alphabet_size) {
            Some(&s) => Err(Error::input(format!(
                "word symbol {s} out of range for alphabet of size {alphabet_size}"
            ))),
            None => Ok(()),
        }
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "()");
        }
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl From<&[usize]> for Word {
    fn from(symbols: &[usize]) -> Word {
        Word(symbols.to_vec())
    }
}

/// A finite word together with its geometric cylinder interval `f_w(X)`.
#[derive(Debug, Clone, Serialize)]
pub struct CylinderInfo {
    pub word: Word,
    pub interval: Interval,
    /// Image of the domain's left endpoint under the composed map.
    pub anchor: f64,
}

/// Infinite tail completing a symbolic prefix.
#[derive(Debug, Clone, PartialEq)]
pub enum Tail {
    Constant(usize),
    Periodic(Word),
}

/// A point of the limit set described by a prefix and an eventually
/// periodic tail.
#[derive(Debug, Clone, PartialEq)]
pub struct CodedPoint {
    pub prefix: Word,
    pub tail: Tail,
}

impl CodedPoint {
    pub fn new(prefix: Word, tail: Tail) -> Result<CodedPoint> {
        if let Tail::Periodic(w) = &tail {
            if w.is_empty() {
                return Err(Error::input("periodic tail must be nonempty"));
            }
        }
        Ok(CodedPoint { prefix, tail })
    }

    pub fn constant(symbol: usize) -> CodedPoint {
        CodedPoint {
            prefix: Word::empty(),
            tail: Tail::Constant(symbol),
        }
    }

    pub fn periodic(period: Word) -> Result<CodedPoint> {
        CodedPoint::new(Word::empty(), Tail::Periodic(period))
    }

    /// Symbol at 0-based position `i` of the full infinite code.
    pub fn symbol_at(&self, i: usize) -> usize {
        let plen = self.prefix.len();
        if i < plen {
            return self.prefix.symbols()[i];
        }
        match &self.tail {
            Tail::Constant(s) => *s,
            Tail::Periodic(w) => w.symbols()[(i - plen) % w.len()],
        }
    }

    /// First `n` symbols of the code as a word.
    pub fn expand(&self, n: usize) -> Word {
        Word::new((0..n).map(|i| self.symbol_at(i)).collect())
    }

    /// The code with the first `n` symbols removed.
    pub fn shifted(&self, n: usize) -> CodedPoint {
        let plen = self.prefix.len();
        if n <= plen {
            return CodedPoint {
                prefix: Word::new(self.prefix.symbols()[n..].to_vec()),
                tail: self.tail.clone(),
            };
        }
        let tail = match &self.tail {
            Tail::Constant(s) => Tail::Constant(*s),
            Tail::Periodic(w) => {
                let k = (n - plen) % w.len();
                let mut rotated = w.symbols()[k..].to_vec();
                rotated.extend_from_slice(&w.symbols()[..k]);
                Tail::Periodic(Word::new(rotated))
            }
        };
        CodedPoint {
            prefix: Word::empty(),
            tail,
        }
    }

    /// True when the code lies in the endpoint set: eventually constant 0
    /// or eventually constant 1.
    pub fn is_endpoint(&self) -> bool {
        match &self.tail {
            Tail::Constant(s) => *s <= 1,
            Tail::Periodic(w) => {
                let first = w.symbols()[0];
                first <= 1 && w.symbols().iter().all(|&s| s == first)
            }
        }
    }

    pub fn check_alphabet(&self, alphabet_size: usize) -> Result<()> {
        self.prefix.check_alphabet(alphabet_size)?;
        match &self.tail {
            Tail::Constant(s) if *s >= alphabet_size => Err(Error::input(format!(
                "tail symbol {s} out of range for alphabet of size {alphabet_size}"
            ))),
            Tail::Periodic(w) => w.check_alphabet(alphabet_size),
            _ => Ok(()),
        }
    }
}

/// One violated standing hypothesis, with the witnessing data.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub condition: String,
    pub detail: String,
}

impl Violation {
    fn new(condition: &str, detail: String) -> Violation {
        Violation {
            condition: condition.to_string(),
            detail,
        }
    }
}

/// Grid-based check of the standing hypotheses: uniform contraction,
/// orientation-preserving diffeomorphism, containment of images in the
/// domain, pairwise disjoint images, and the labeling convention that
/// letter 0 names the leftmost image and letter 1 the rightmost.
///
/// Violations are data, not failures: an empty report means the spec
/// passed at the configured grid resolution.
pub fn validate_ifs(spec: &IfsSpec, settings: &Settings) -> Vec<Violation> {
    let mut violations = Vec::new();
    let domain = spec.domain();
    let grid = settings.validation_grid.max(2);

    for (a, map) in spec.maps().iter().enumerate() {
        let mut sup = f64::NEG_INFINITY;
        let mut sup_at = domain.lo;
        let mut min_deriv = f64::INFINITY;
        let mut min_at = domain.lo;
        for k in 0..grid {
            let x = domain.lo + domain.len() * (k as f64) / ((grid - 1) as f64);
            let d = map.deriv(x);
            if d.abs() > sup {
                sup = d.abs();
                sup_at = x;
            }
            if d < min_deriv {
                min_deriv = d;
                min_at = x;
            }
        }
        if sup >= 1.0 {
            violations.push(Violation::new(
                "contraction",
                format!("map {a}: |f'({sup_at})| = {sup} >= 1"),
            ));
        }
        if min_deriv <= 0.0 {
            violations.push(Violation::new(
                "monotonicity",
                format!("map {a}: f'({min_at}) = {min_deriv} <= 0"),
            ));
        }
        let img = Interval::new(map.eval(domain.lo), map.eval(domain.hi));
        if img.lo < domain.lo || img.hi > domain.hi {
            violations.push(Violation::new(
                "containment",
                format!(
                    "map {a}: image [{}, {}] escapes domain [{}, {}]",
                    img.lo, img.hi, domain.lo, domain.hi
                ),
            ));
        }
        if let MapSpec::Nonlinear { .. } = map {
            if domain.lo != 0.0 || domain.hi != 1.0 {
                violations.push(Violation::new(
                    "nonlinear-domain",
                    format!("map {a}: the nonlinear family is defined on [0, 1] only"),
                ));
            }
        }
    }

    // Pairwise disjointness, checked on images sorted left to right.
    let order = spec.geometric_order();
    for pair in order.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let ia = spec.image(a).expect("symbol in range");
        let ib = spec.image(b).expect("symbol in range");
        if ia.hi >= ib.lo {
            violations.push(Violation::new(
                "strong separation",
                format!(
                    "maps {a} and {b}: images [{}, {}] and [{}, {}] intersect",
                    ia.lo, ia.hi, ib.lo, ib.hi
                ),
            ));
        }
    }
    if order[0] != 0 {
        violations.push(Violation::new(
            "labeling",
            format!(
                "letter 0 must name the leftmost image; leftmost is {}",
                order[0]
            ),
        ));
    }
    if *order.last().unwrap() != 1 {
        violations.push(Violation::new(
            "labeling",
            format!(
                "letter 1 must name the rightmost image; rightmost is {}",
                order.last().unwrap()
            ),
        ));
    }
    violations
}

/// Geometry of the cylinder `[w] = f_w(X)`, with the composition applied
/// right to left.
pub fn cylinder(spec: &IfsSpec, word: &Word) -> Result<CylinderInfo> {
    word.check_alphabet(spec.alphabet_size())?;
    let domain = spec.domain();
    let (mut lo, mut hi) = (domain.lo, domain.hi);
    for &a in word.symbols().iter().rev() {
        let m = &spec.maps()[a];
        lo = m.eval(lo);
        hi = m.eval(hi);
    }
    Ok(CylinderInfo {
        word: word.clone(),
        interval: Interval::new(lo, hi),
        anchor: lo,
    })
}

/// All depth-`n` cylinders in geometric left-to-right order.
pub fn level_cylinders(spec: &IfsSpec, n: usize, settings: &Settings) -> Result<Vec<CylinderInfo>> {
    let count = (spec.alphabet_size() as u64).checked_pow(n as u32);
    match count {
        Some(c) if c <= settings.cylinder_budget => {}
        _ => {
            return Err(Error::resource(format!(
                "level {n} needs {}^{n} cylinders, over the budget of {}",
                spec.alphabet_size(),
                settings.cylinder_budget
            )))
        }
    }
    let order = spec.geometric_order();
    let mut out = Vec::with_capacity(count.unwrap() as usize);
    let mut stack = vec![Vec::new()];
    // Iterative depth-first walk in geometric symbol order.
    while let Some(prefix) = stack.pop() {
        if prefix.len() == n {
            out.push(cylinder(spec, &Word::new(prefix))?);
            continue;
        }
        for &a in order.iter().rev() {
            let mut next = prefix.clone();
            next.push(a);
            stack.push(next);
        }
    }
    Ok(out)
}

/// Result of coding a real to finite depth. A `Gap` means no cylinder of
/// the next generation contains the point; the prefix is the deepest word
/// whose cylinder still does.
#[derive(Debug, Clone, PartialEq)]
pub enum EncodeResult {
    Word(Word),
    Gap { prefix: Word },
}

/// Code a real point to the given depth. A point on a cylinder boundary
/// codes into the left cylinder: candidate images are scanned left to
/// right and the first closed interval containing the point wins.
pub fn encode(spec: &IfsSpec, x: f64, depth: usize) -> Result<EncodeResult> {
    if depth == 0 {
        return Err(Error::input("encode depth must be >= 1"));
    }
    if !spec.domain().contains(x) {
        return Err(Error::input(format!(
            "point {x} outside domain [{}, {}]",
            spec.domain().lo,
            spec.domain().hi
        )));
    }
    let order = spec.geometric_order();
    let mut symbols = Vec::with_capacity(depth);
    let mut y = x;
    for _ in 0..depth {
        let mut hit = None;
        for &a in &order {
            if spec.image(a)?.contains(y) {
                hit = Some(a);
                break;
            }
        }
        match hit {
            Some(a) => {
                symbols.push(a);
                y = spec.maps()[a].invert(y, spec.domain());
            }
            None => {
                return Ok(EncodeResult::Gap {
                    prefix: Word::new(symbols),
                })
            }
        }
    }
    Ok(EncodeResult::Word(Word::new(symbols)))
}

/// Real coordinate of a coded point, by shrinking nested cylinders until
/// their diameter drops under `tolerance`.
pub fn decode(spec: &IfsSpec, point: &CodedPoint, tolerance: f64) -> Result<f64> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::input(format!(
            "decode tolerance must be positive, got {tolerance}"
        )));
    }
    point.check_alphabet(spec.alphabet_size())?;
    let c = spec.contraction_bound();
    if c.is_nan() || c >= 1.0 {
        return Err(Error::numerical(format!(
            "system is not a uniform contraction (sup |f'| = {c})"
        )));
    }
    let diam = spec.domain().len();
    let mut n = if tolerance >= diam {
        1
    } else {
        ((tolerance / diam).ln() / c.ln()).ceil() as usize + 1
    };
    n = n.max(1);
    let (mut lo, mut hi) = (spec.domain().lo, spec.domain().hi);
    for k in (0..n).rev() {
        let m = &spec.maps()[point.symbol_at(k)];
        lo = m.eval(lo);
        hi = m.eval(hi);
    }
    Ok(0.5 * (lo + hi))
}

/// The unique fixed point of a single generator. Affine maps use the
/// closed form; the nonlinear family iterates the contraction from the
/// domain midpoint.
pub fn fixed_point(spec: &IfsSpec, symbol: usize, settings: &Settings) -> Result<f64> {
    let map = spec.map(symbol)?;
    match *map {
        MapSpec::Affine { ratio, offset } => Ok(offset / (1.0 - ratio)),
        MapSpec::Nonlinear { .. } => {
            let mut x = spec.domain().midpoint();
            for _ in 0..settings.max_fixed_point_iter {
                let next = map.eval(x);
                if (next - x).abs() < settings.fixed_point_tol {
                    return Ok(next);
                }
                x = next;
            }
            Err(Error::numerical(format!(
                "fixed-point iteration for map {symbol} did not reach {} in {} steps",
                settings.fixed_point_tol, settings.max_fixed_point_iter
            )))
        }
    }
}


#[cfg(test)]
mod tests {
    use super::test_systems::*;
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn settings() -> Settings {
        Settings::default()
    }

    #[test]
    fn middle_thirds_validates() {
        let report = validate_ifs(&middle_thirds(), &settings());
        assert!(report.is_empty(), "{report:?}");
    }

    #[test]
    fn overlapping_pair_fails_separation() {
        let spec = IfsSpec::new(
            vec![
                MapSpec::affine(0.6, 0.0).unwrap(),
                MapSpec::affine(0.5, 0.5).unwrap(),
            ],
            Interval::new(0.0, 1.0),
        )
        .unwrap();
        let report = validate_ifs(&spec, &settings());
        assert!(report.iter().any(|v| v.condition == "strong separation"));
    }

    #[test]
    fn fig1_system_validates() {
        let report = validate_ifs(&affine_pair(0.1, 0.5), &settings());
        assert!(report.is_empty(), "{report:?}");
    }

    #[test]
    fn nonlinear_pair_validates() {
        let report = validate_ifs(&nonlinear_pair(), &settings());
        assert!(report.is_empty(), "{report:?}");
    }

    #[test]
    fn mislabeled_system_reports_labeling() {
        // Leftmost image carries letter 1.
        let spec = IfsSpec::new(
            vec![
                MapSpec::affine(0.3, 0.7).unwrap(),
                MapSpec::affine(0.3, 0.0).unwrap(),
            ],
            Interval::new(0.0, 1.0),
        )
        .unwrap();
        let report = validate_ifs(&spec, &settings());
        assert!(report.iter().any(|v| v.condition == "labeling"));
    }

    #[test]
    fn expanding_map_reports_contraction() {
        let spec = IfsSpec::new(
            vec![
                MapSpec::nonlinear(0.9, 0.0, 0.2).unwrap(),
                MapSpec::affine(0.05, 0.95).unwrap(),
            ],
            Interval::new(0.0, 1.0),
        )
        .unwrap();
        let report = validate_ifs(&spec, &settings());
        assert!(
            report.iter().any(|v| v.condition == "contraction"),
            "{report:?}"
        );
    }

    #[test]
    fn cylinder_first_generation() {
        let spec = middle_thirds();
        let c = cylinder(&spec, &Word::new(vec![0])).unwrap();
        assert!((c.interval.lo - 0.0).abs() < 1e-15);
        assert!((c.interval.hi - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(c.anchor, c.interval.lo);
    }

    #[test]
    fn cylinder_composes_right_to_left() {
        let spec = middle_thirds();
        // f_0(f_1([0,1])) = f_0([2/3, 1]) = [2/9, 3/9]
        let c = cylinder(&spec, &Word::new(vec![0, 1])).unwrap();
        assert!((c.interval.lo - 2.0 / 9.0).abs() < 1e-15);
        assert!((c.interval.hi - 3.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn cylinder_matches_hand_composition() {
        // System from the first figure; word (1,0) checked against a
        // two-step composition done by hand.
        let spec = affine_pair(0.1, 0.5);
        let c = cylinder(&spec, &Word::new(vec![1, 0])).unwrap();
        let f0 = |x: f64| 0.1 * x;
        let f1 = |x: f64| 0.5 * x + 0.5;
        assert!((c.interval.lo - f1(f0(0.0))).abs() < 1e-15);
        assert!((c.interval.hi - f1(f0(1.0))).abs() < 1e-15);
    }

    #[test]
    fn cylinder_rejects_out_of_range_symbol() {
        let err = cylinder(&middle_thirds(), &Word::new(vec![0, 2])).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn encode_interior_point() {
        let spec = middle_thirds();
        match encode(&spec, 0.7, 2).unwrap() {
            EncodeResult::Word(w) => assert_eq!(w.symbols(), &[1, 0]),
            other => panic!("expected word, got {other:?}"),
        }
    }

    #[test]
    fn encode_gap_point() {
        let spec = middle_thirds();
        match encode(&spec, 0.5, 1).unwrap() {
            EncodeResult::Gap { prefix } => assert!(prefix.is_empty()),
            other => panic!("expected gap, got {other:?}"),
        }
    }

    #[test]
    fn encode_left_endpoint_is_all_zeros() {
        for spec in [middle_thirds(), affine_pair(0.1, 0.5)] {
            match encode(&spec, 0.0, 6).unwrap() {
                EncodeResult::Word(w) => assert_eq!(w.symbols(), &[0; 6]),
                other => panic!("expected word, got {other:?}"),
            }
        }
    }

    #[test]
    fn encode_boundary_takes_left_cylinder() {
        // 1/3 is the right endpoint of [0]; the left-cylinder convention
        // codes it as 0 followed by all 1s.
        let spec = middle_thirds();
        match encode(&spec, 1.0 / 3.0, 4).unwrap() {
            EncodeResult::Word(w) => assert_eq!(w.symbols(), &[0, 1, 1, 1]),
            other => panic!("expected word, got {other:?}"),
        }
    }

    #[test]
    fn encode_outside_domain_is_input_error() {
        let err = encode(&middle_thirds(), 1.5, 3).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
        let err = encode(&middle_thirds(), 0.5, 0).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn decode_fixed_points() {
        let spec = middle_thirds();
        let s = settings();
        let zero = decode(&spec, &CodedPoint::constant(0), 1e-12).unwrap();
        let one = decode(&spec, &CodedPoint::constant(1), 1e-12).unwrap();
        assert!(zero.abs() < 1e-12);
        assert!((one - 1.0).abs() < 1e-12);
        let _ = s;
    }

    #[test]
    fn decode_period_two_point() {
        // Ternary 0.020202... = 1/4.
        let spec = middle_thirds();
        let p = CodedPoint::periodic(Word::new(vec![0, 1])).unwrap();
        let x = decode(&spec, &p, 1e-13).unwrap();
        assert!((x - 0.25).abs() < 1e-12, "got {x}");
    }

    #[test]
    fn decode_rejects_bad_tolerance() {
        let err = decode(&middle_thirds(), &CodedPoint::constant(0), 0.0).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn fixed_point_closed_forms() {
        let spec = middle_thirds();
        let s = settings();
        assert!((fixed_point(&spec, 1, &s).unwrap() - 1.0).abs() < 1e-15);
        let fig = affine_pair(0.1, 0.5);
        assert_eq!(fixed_point(&fig, 0, &s).unwrap(), 0.0);
    }

    #[test]
    fn fixed_point_nonlinear_matches_iteration_oracle() {
        let spec = IfsSpec::new(
            vec![
                MapSpec::nonlinear(0.3, 0.05, 0.05).unwrap(),
                MapSpec::affine(0.2, 0.8).unwrap(),
            ],
            Interval::new(0.0, 1.0),
        )
        .unwrap();
        let s = settings();
        let fp = fixed_point(&spec, 0, &s).unwrap();
        // Oracle: 200 blunt iterations from an arbitrary starting point.
        let mut x = 0.9;
        for _ in 0..200 {
            x = spec.maps()[0].eval(x);
        }
        assert!((fp - x).abs() < 1e-12, "fp={fp}, oracle={x}");
        // And it really is fixed.
        assert!((spec.maps()[0].eval(fp) - fp).abs() < 1e-13);
    }

    #[test]
    fn fixed_point_symbol_out_of_range() {
        let err = fixed_point(&middle_thirds(), 5, &settings()).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn nesting_of_random_extensions() {
        let mut rng = StdRng::seed_from_u64(7);
        for spec in [middle_thirds(), affine_pair(0.1, 0.5), nonlinear_pair()] {
            for _ in 0..50 {
                let len = rng.random_range(0..12);
                let mut symbols: Vec<usize> = (0..len).map(|_| rng.random_range(0..2)).collect();
                let outer = cylinder(&spec, &Word::new(symbols.clone())).unwrap();
                symbols.push(rng.random_range(0..2));
                let inner = cylinder(&spec, &Word::new(symbols)).unwrap();
                assert!(inner.interval.lo >= outer.interval.lo - 1e-12);
                assert!(inner.interval.hi <= outer.interval.hi + 1e-12);
            }
        }
    }

    #[test]
    fn roundtrip_encode_decode() {
        let mut rng = StdRng::seed_from_u64(11);
        for spec in [middle_thirds(), affine_pair(0.1, 0.5), nonlinear_pair()] {
            for _ in 0..40 {
                let len = rng.random_range(1..10);
                let prefix: Vec<usize> = (0..len).map(|_| rng.random_range(0..2)).collect();
                let p = CodedPoint::new(
                    Word::new(prefix.clone()),
                    Tail::Periodic(Word::new(vec![
                        rng.random_range(0..2),
                        rng.random_range(0..2),
                    ])),
                )
                .unwrap();
                if p.is_endpoint() {
                    continue;
                }
                let x = decode(&spec, &p, 1e-13).unwrap();
                match encode(&spec, x, len).unwrap() {
                    EncodeResult::Word(w) => assert_eq!(w.symbols(), &prefix[..]),
                    other => panic!("expected word, got {other:?}"),
                }
            }
        }
    }

    #[test]
    fn levels_partition_in_order() {
        let s = settings();
        for spec in [middle_thirds(), affine_pair(0.1, 0.5), nonlinear_pair()] {
            for n in 1..=6 {
                let cyls = level_cylinders(&spec, n, &s).unwrap();
                assert_eq!(cyls.len(), 2usize.pow(n as u32));
                for pair in cyls.windows(2) {
                    assert!(
                        pair[0].interval.hi < pair[1].interval.lo,
                        "level {n}: cylinders out of order or overlapping"
                    );
                }
            }
        }
    }

    #[test]
    fn bounded_distortion_on_random_words() {
        let mut rng = StdRng::seed_from_u64(23);
        for (spec, k_bound) in [
            (middle_thirds(), 1.0 + 1e-12),
            (affine_pair(0.1, 0.5), 1.0 + 1e-12),
            (nonlinear_pair(), 2.0),
        ] {
            let domain = spec.domain();
            for _ in 0..60 {
                let len = rng.random_range(1..=12);
                let word: Vec<usize> = (0..len).map(|_| rng.random_range(0..2)).collect();
                // |f_w'| at both endpoints via the chain rule.
                let deriv_at = |mut y: f64| -> f64 {
                    let mut log_d = 0.0;
                    for &a in word.iter().rev() {
                        log_d += spec.maps()[a].deriv(y).abs().ln();
                        y = spec.maps()[a].eval(y);
                    }
                    log_d.exp()
                };
                let ratio = deriv_at(domain.lo) / deriv_at(domain.hi);
                assert!(
                    ratio <= k_bound && ratio >= 1.0 / k_bound,
                    "distortion {ratio} outside [{}, {}]",
                    1.0 / k_bound,
                    k_bound
                );
            }
        }
    }

    #[test]
    fn coded_point_helpers() {
        let p = CodedPoint::new(
            Word::new(vec![0, 1, 1]),
            Tail::Periodic(Word::new(vec![1, 0])),
        )
        .unwrap();
        assert_eq!(p.symbol_at(0), 0);
        assert_eq!(p.symbol_at(2), 1);
        assert_eq!(p.symbol_at(3), 1);
        assert_eq!(p.symbol_at(4), 0);
        assert_eq!(p.expand(6).symbols(), &[0, 1, 1, 1, 0, 1]);
        let shifted = p.shifted(4);
        assert_eq!(shifted.expand(3).symbols(), &[0, 1, 0]);
        assert!(!p.is_endpoint());
        assert!(CodedPoint::constant(0).is_endpoint());
        assert!(CodedPoint::periodic(Word::new(vec![1, 1]))
            .unwrap()
            .is_endpoint());
        assert!(!CodedPoint::constant(2).is_endpoint());
    }
}
