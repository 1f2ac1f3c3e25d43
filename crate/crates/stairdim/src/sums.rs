//! Cylinder enumeration and log-sum-exp reduction.
//!
//! Pressure sums range over every word of a level, so the walker extends
//! words on the left: for the word `a.w` the composed image and Birkhoff sum
//! at a tail point follow from the values for `w` in O(1). One depth-first
//! pass therefore touches every word of every level up to the requested
//! depth exactly once.
//!
//! Partial sums are kept as (running max, scaled sum) pairs, which merge
//! associatively; the parallel path splits the tree at a fixed shallow level
//! and merges subtree results in word order, so the outcome does not depend
//! on scheduling or thread count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::thread;

use crate::ifs::IfsSpec;

/// Streaming log-sum-exp: tracks `max` and `sum = Σ exp(x_i - max)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogSumExp {
    max: f64,
    sum: f64,
}

impl LogSumExp {
    pub fn new() -> LogSumExp {
        LogSumExp {
            max: f64::NEG_INFINITY,
            sum: 0.0,
        }
    }

    pub fn add(&mut self, x: f64) {
        self.add_weighted(x, 1.0);
    }

    /// Add `weight` copies of the term `exp(x)`.
    pub fn add_weighted(&mut self, x: f64, weight: f64) {
        if x <= self.max {
            self.sum += weight * (x - self.max).exp();
        } else {
            self.sum = self.sum * (self.max - x).exp() + weight;
            self.max = x;
        }
    }

    pub fn merge(&mut self, other: &LogSumExp) {
        if other.sum == 0.0 {
            return;
        }
        if other.max <= self.max {
            self.sum += other.sum * (other.max - self.max).exp();
        } else {
            self.sum = self.sum * (self.max - other.max).exp() + other.sum;
            self.max = other.max;
        }
    }

    /// `ln Σ exp(x_i)`; negative infinity when empty.
    pub fn value(&self) -> f64 {
        self.max + self.sum.ln()
    }
}

/// Per-word state for two tail points (the domain endpoints): the image of
/// the tail under the composed map and the Birkhoff sum accumulated so far.
#[derive(Debug, Clone, Copy)]
struct NodeState {
    v_lo: f64,
    s_lo: f64,
    v_hi: f64,
    s_hi: f64,
}

impl NodeState {
    fn root(spec: &IfsSpec) -> NodeState {
        NodeState {
            v_lo: spec.domain().lo,
            s_lo: 0.0,
            v_hi: spec.domain().hi,
            s_hi: 0.0,
        }
    }

    /// State for the word `a.w` given the state for `w`.
    fn extend<G: Fn(usize, f64) -> f64>(&self, spec: &IfsSpec, g: &G, a: usize) -> NodeState {
        let map = &spec.maps()[a];
        NodeState {
            v_lo: map.eval(self.v_lo),
            s_lo: self.s_lo + g(a, self.v_lo),
            v_hi: map.eval(self.v_hi),
            s_hi: self.s_hi + g(a, self.v_hi),
        }
    }

    /// Sup estimate for the cylinder: the Birkhoff sum at the anchor point
    /// coincides with the sum at the left tail, so three evaluation points
    /// reduce to two distinct values.
    fn sup(&self) -> f64 {
        self.s_lo.max(self.s_hi)
    }
}

fn dfs_accumulate<G: Fn(usize, f64) -> f64>(
    spec: &IfsSpec,
    g: &G,
    state: NodeState,
    level: usize,
    depth: usize,
    acc: &mut [LogSumExp],
) {
    for a in 0..spec.alphabet_size() {
        let child = state.extend(spec, g, a);
        acc[level].add(child.sup());
        if level + 1 < depth {
            dfs_accumulate(spec, g, child, level + 1, depth, acc);
        }
    }
}

/// Once the tree holds at least this many leaves the walk is partitioned.
const PARALLEL_LEAVES: u64 = 1 << 14;

/// Per-level log-sum-exp of the cylinder sup estimates of `S_n g`, for
/// `n = 1..=depth` (index 0 is level 1).
pub(crate) fn level_sums<G: Fn(usize, f64) -> f64 + Sync>(
    spec: &IfsSpec,
    g: &G,
    depth: usize,
) -> Vec<LogSumExp> {
    assert!(depth >= 1);
    let mut acc = vec![LogSumExp::new(); depth];
    let leaves = (spec.alphabet_size() as u64)
        .checked_pow(depth as u32)
        .unwrap_or(u64::MAX);
    let workers = thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);

    let split = if spec.alphabet_size() <= 8 { 2 } else { 1 };
    if leaves < PARALLEL_LEAVES || workers < 2 || depth <= split {
        dfs_accumulate(spec, g, NodeState::root(spec), 0, depth, &mut acc);
        return acc;
    }

    // Fixed partition: enumerate the shallow levels serially, then hand one
    // subtree per depth-`split` word to the pool. Partial results merge in
    // word order, so the outcome is independent of scheduling.
    let mut frontier = vec![NodeState::root(spec)];
    for level_acc in acc.iter_mut().take(split) {
        let mut next_frontier = Vec::with_capacity(frontier.len() * spec.alphabet_size());
        for state in &frontier {
            for a in 0..spec.alphabet_size() {
                let child = state.extend(spec, g, a);
                level_acc.add(child.sup());
                next_frontier.push(child);
            }
        }
        frontier = next_frontier;
    }
    let roots = frontier;

    let next = AtomicUsize::new(0);
    let mut partials: Vec<Option<Vec<LogSumExp>>> = vec![None; roots.len()];
    let slots: Vec<_> = partials.iter_mut().map(std::sync::Mutex::new).collect();
    thread::scope(|scope| {
        for _ in 0..workers.min(roots.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= roots.len() {
                    break;
                }
                let mut local = vec![LogSumExp::new(); depth - split];
                dfs_accumulate(spec, g, roots[i], 0, depth - split, &mut local);
                **slots[i].lock().unwrap() = Some(local);
            });
        }
    });
    drop(slots);
    for partial in partials.into_iter() {
        let partial = partial.expect("every subtree was processed");
        for (level, lse) in partial.iter().enumerate() {
            acc[split + level].merge(lse);
        }
    }
    acc
}

/// Leaf data for repeated pressure evaluations: the log-derivative of the
/// composed map at both domain endpoints, for every depth-`depth` word,
/// grouped by exact value.
///
/// For a potential `a*phi + b` the per-cylinder sup estimate is
/// `max(a*l_lo, a*l_hi) + n*b`, so one pass over the groups evaluates the
/// pressure at any coefficient pair. Affine systems collapse to a handful
/// of groups, which is what makes the nested implicit solvers cheap.
#[derive(Debug)]
pub(crate) struct DerivLogCache {
    depth: usize,
    groups: Vec<(f64, f64, f64)>,
}

impl DerivLogCache {
    pub fn build(spec: &IfsSpec, depth: usize) -> DerivLogCache {
        assert!(depth >= 1);
        let phi = |a: usize, y: f64| spec.maps()[a].deriv(y).abs().ln();
        let mut leaves: Vec<(f64, f64)> = Vec::new();
        collect_leaves(spec, &phi, NodeState::root(spec), 1, depth, &mut leaves);
        leaves.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        let mut groups: Vec<(f64, f64, f64)> = Vec::new();
        for (lo, hi) in leaves {
            match groups.last_mut() {
                Some(g) if g.0 == lo && g.1 == hi => g.2 += 1.0,
                _ => groups.push((lo, hi, 1.0)),
            }
        }
        DerivLogCache { depth, groups }
    }

    /// Pressure estimate at the cached depth for the potential
    /// `coeff*phi + offset`.
    pub fn pressure(&self, coeff: f64, offset: f64) -> f64 {
        let mut lse = LogSumExp::new();
        for &(lo, hi, mult) in &self.groups {
            lse.add_weighted((coeff * lo).max(coeff * hi), mult);
        }
        lse.value() / self.depth as f64 + offset
    }
}

fn collect_leaves<G: Fn(usize, f64) -> f64>(
    spec: &IfsSpec,
    g: &G,
    state: NodeState,
    level: usize,
    depth: usize,
    out: &mut Vec<(f64, f64)>,
) {
    for a in 0..spec.alphabet_size() {
        let child = state.extend(spec, g, a);
        if level == depth {
            out.push((child.s_lo, child.s_hi));
        } else {
            collect_leaves(spec, g, child, level + 1, depth, out);
        }
    }
}
