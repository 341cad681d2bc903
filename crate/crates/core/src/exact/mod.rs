//! Exact enumeration of `h`-Lipschitz functions.
//!
//! The search assigns vertices in breadth-first order from each component
//! root. A vertex may only take values in the intersection of the windows
//! `[f(u) - h, f(u) + h]` over its already-assigned neighbours; an empty
//! window prunes the branch. The final vertex contributes the length of its
//! window directly.

mod ehrhart;

use std::collections::VecDeque;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

pub use ehrhart::{ehrhart_fit, EhrhartPoly};

/// Default node-expansion budget for the exact search.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Exact number of Lipschitz functions, `|Lip(G; h)|`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LipCount(pub BigUint);

impl LipCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Display for LipCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for LipCount {
    fn from(v: u64) -> Self {
        LipCount(BigUint::from(v))
    }
}

impl From<u128> for LipCount {
    fn from(v: u128) -> Self {
        LipCount(BigUint::from(v))
    }
}

impl From<BigUint> for LipCount {
    fn from(v: BigUint) -> Self {
        LipCount(v)
    }
}

/// Counts serialise as decimal strings so no precision is lost in JSON.
impl Serialize for LipCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOptions {
    /// Maximum number of search-tree node expansions.
    pub budget: u64,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub count: LipCount,
    pub node_expansions: u64,
}

/// Values prescribed on a vertex subset `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PinSpec {
    pins: Vec<(usize, i64)>,
}

impl PinSpec {
    /// `vertices[i]` is pinned to `values[i]`.
    pub fn new(vertices: &[usize], values: &[i64]) -> Result<Self> {
        if vertices.is_empty() {
            return invalid("pin set must be non-empty");
        }
        if vertices.len() != values.len() {
            return invalid("pin vertices and values differ in length");
        }
        let mut pins: Vec<(usize, i64)> = vertices.iter().copied().zip(values.iter().copied()).collect();
        pins.sort_unstable_by_key(|p| p.0);
        if pins.windows(2).any(|w| w[0].0 == w[1].0) {
            return invalid("vertex pinned twice");
        }
        Ok(PinSpec { pins })
    }

    pub fn pins(&self) -> &[(usize, i64)] {
        &self.pins
    }

    /// The same vertex set with every value negated.
    pub fn negated(&self) -> Self {
        PinSpec {
            pins: self.pins.iter().map(|&(v, w)| (v, -w)).collect(),
        }
    }

    fn value_of(&self, v: usize) -> Option<i64> {
        self.pins
            .binary_search_by_key(&v, |p| p.0)
            .ok()
            .map(|i| self.pins[i].1)
    }
}

/// `(2h + 1)^(n-1)`, valid for every tree, and `(h + 1)^n - h^n` for `K_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    Tree,
    Complete,
}

pub fn count_closed_form(kind: ClosedForm, n: usize, h: u32) -> Result<LipCount> {
    if n == 0 {
        return invalid("closed forms need n >= 1");
    }
    let h = BigUint::from(h);
    let exp = u32::try_from(n).map_err(|_| Error::InvalidArgument("n too large".into()))?;
    let value = match kind {
        ClosedForm::Tree => (&h * 2u32 + 1u32).pow(exp - 1),
        ClosedForm::Complete => (&h + 1u32).pow(exp) - h.pow(exp),
    };
    Ok(LipCount(value))
}

/// `|Lip(G; h)|` with every component rooted at `g.roots()`.
pub fn count_bruteforce(g: &Graph, h: u32, opts: CountOptions) -> Result<CountReport> {
    Plan::build(g, None)?.run(h, opts)
}

/// Number of Lipschitz functions agreeing with `pin` on its vertex set.
/// Infeasible pins yield zero.
pub fn count_pinned(g: &Graph, h: u32, pin: &PinSpec, opts: CountOptions) -> Result<CountReport> {
    if let Some(&(v, _)) = pin.pins.iter().find(|p| p.0 >= g.n()) {
        return invalid(format!("pinned vertex {v} out of range"));
    }
    let mut has_root = false;
    for &r in g.roots() {
        if let Some(w) = pin.value_of(r) {
            has_root = true;
            if w != 0 {
                return invalid(format!("root {r} must be pinned to 0, got {w}"));
            }
        }
    }
    if !has_root {
        return invalid("pin set must contain a component root");
    }
    Plan::build(g, Some(pin))?.run(h, opts)
}

/// Pinned counts over every feasible pin vector on `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PinnedProfile {
    /// `|V_0|`: all of `t` pinned to zero.
    pub zero: LipCount,
    /// `max_w |V_w|` over all integer pin vectors.
    pub max: LipCount,
    pub argmax: Vec<i64>,
    pub feasible_vectors: usize,
}

impl PinnedProfile {
    pub fn ratio(&self) -> f64 {
        big_ratio(&self.zero.0, &self.max.0)
    }
}

/// Enumerates every pin vector on `t` (first entry must be a root, fixed at
/// 0; the others range over `|w_i| <= h * dist(root, v_i)`) and records the
/// all-zero count alongside the maximum.
pub fn pinned_profile(g: &Graph, h: u32, t: &[usize], opts: CountOptions) -> Result<PinnedProfile> {
    let Some((&root, rest)) = t.split_first() else {
        return invalid("pin set must be non-empty");
    };
    if !g.roots().contains(&root) {
        return invalid("first pinned vertex must be a component root");
    }
    let dist = bfs_distances(g, root);
    let radius: Vec<i64> = rest
        .iter()
        .map(|&v| match dist.get(v).copied().flatten() {
            Some(d) => Ok(i64::from(h) * d as i64),
            None => invalid(format!("vertex {v} is not reachable from root {root}")),
        })
        .collect::<Result<_>>()?;

    let mut w: Vec<i64> = radius.iter().map(|r| -r).collect();
    let zero = count_pinned(g, h, &PinSpec::new(t, &pin_values(&vec![0; rest.len()]))?, opts)?.count;
    let mut best = (zero.clone(), vec![0; t.len()]);
    let mut feasible = 0usize;
    loop {
        let vals = pin_values(&w);
        let c = count_pinned(g, h, &PinSpec::new(t, &vals)?, opts)?.count;
        if !c.is_zero() {
            feasible += 1;
        }
        if c > best.0 {
            best = (c, vals);
        }
        // odometer increment
        let mut i = 0;
        while i < w.len() {
            if w[i] < radius[i] {
                w[i] += 1;
                break;
            }
            w[i] = -radius[i];
            i += 1;
        }
        if i == w.len() {
            break;
        }
    }
    Ok(PinnedProfile {
        zero,
        max: best.0,
        argmax: best.1,
        feasible_vectors: feasible,
    })
}

fn pin_values(rest: &[i64]) -> Vec<i64> {
    std::iter::once(0).chain(rest.iter().copied()).collect()
}

pub(crate) fn bfs_distances(g: &Graph, source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("queued vertices have a distance");
        for &w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

pub(crate) fn big_ratio(num: &BigUint, den: &BigUint) -> f64 {
    (ln_big(num) - ln_big(den)).exp()
}

/// Natural log of a big unsigned integer (`-inf` for zero).
pub(crate) fn ln_big(x: &BigUint) -> f64 {
    use num_traits::ToPrimitive;
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().expect("fits in f64").ln()
    } else {
        let shift = bits - 64;
        let top = (x >> shift).to_f64().expect("64-bit prefix fits");
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// One position of the search order.
#[derive(Debug, Clone)]
struct Step {
    /// Positions (in the order) of neighbours assigned earlier.
    earlier: Vec<usize>,
    /// Fixed value: 0 for roots, the pin value for pinned vertices.
    fixed: Option<i64>,
}

#[derive(Debug, Clone)]
struct Plan {
    steps: Vec<Step>,
}

impl Plan {
    fn build(g: &Graph, pin: Option<&PinSpec>) -> Result<Self> {
        let mut pos = vec![usize::MAX; g.n()];
        let mut order = Vec::with_capacity(g.n());
        for &root in g.roots() {
            pos[root] = order.len();
            order.push(root);
            let mut head = order.len() - 1;
            while head < order.len() {
                let u = order[head];
                head += 1;
                for &w in g.neighbors(u) {
                    if pos[w] == usize::MAX {
                        pos[w] = order.len();
                        order.push(w);
                    }
                }
            }
        }
        debug_assert_eq!(order.len(), g.n());
        let is_root = |v: usize| g.roots().contains(&v);
        let steps = order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let mut earlier: Vec<usize> = g.neighbors(v).iter().map(|&w| pos[w]).filter(|&p| p < i).collect();
                earlier.sort_unstable();
                let fixed = if is_root(v) {
                    Some(0)
                } else {
                    pin.and_then(|p| p.value_of(v))
                };
                Step { earlier, fixed }
            })
            .collect();
        Ok(Plan { steps })
    }

    fn run(&self, h: u32, opts: CountOptions) -> Result<CountReport> {
        let h = i64::from(h);
        let shared = AtomicU64::new(0);
        let exceeded = || Error::ResourceLimit {
            what: "exact Lipschitz enumeration".into(),
            budget: opts.budget,
        };

        let mut vals = vec![0i64; self.steps.len()];
        let total: u128 = if self.steps.len() <= 2 {
            let mut budget = Budget::new(&shared, opts.budget);
            let c = self.dfs(0, h, &mut vals, &mut budget).ok_or_else(exceeded)?;
            budget.flush();
            c
        } else {
            // Fix position 0 (a root, value 0), then fan out over the
            // window of position 1. Integer sums make the reduction order
            // irrelevant.
            let mut budget = Budget::new(&shared, opts.budget);
            budget.tick();
            budget.flush();
            let (lo, hi) = self.window(1, h, &vals);
            let partial: Option<Vec<u128>> = (lo..=hi)
                .into_par_iter()
                .map(|x| {
                    let mut vals = vals.clone();
                    vals[1] = x;
                    let mut budget = Budget::new(&shared, opts.budget);
                    if !budget.tick() {
                        return None;
                    }
                    let r = self.dfs(2, h, &mut vals, &mut budget);
                    budget.flush();
                    r
                })
                .collect();
            partial.ok_or_else(exceeded)?.into_iter().sum()
        };
        let expansions = shared.load(Ordering::Relaxed);
        if expansions > opts.budget {
            return Err(exceeded());
        }
        Ok(CountReport {
            count: LipCount::from(total),
            node_expansions: expansions,
        })
    }

    /// Admissible values for position `i`, given earlier assignments. Empty
    /// when `lo > hi`.
    fn window(&self, i: usize, h: i64, vals: &[i64]) -> (i64, i64) {
        let step = &self.steps[i];
        let (mut lo, mut hi) = (i64::MIN, i64::MAX);
        for &p in &step.earlier {
            lo = lo.max(vals[p] - h);
            hi = hi.min(vals[p] + h);
        }
        match step.fixed {
            Some(w) if (lo..=hi).contains(&w) => (w, w),
            Some(_) => (1, 0),
            None => {
                debug_assert!(!step.earlier.is_empty(), "free vertex without assigned neighbour");
                (lo, hi)
            }
        }
    }

    fn dfs(&self, i: usize, h: i64, vals: &mut [i64], budget: &mut Budget<'_>) -> Option<u128> {
        if i == self.steps.len() {
            return Some(1);
        }
        if !budget.tick() {
            return None;
        }
        let (lo, hi) = self.window(i, h, vals);
        if lo > hi {
            return Some(0);
        }
        if i + 1 == self.steps.len() {
            return Some((hi - lo + 1) as u128);
        }
        let mut total = 0u128;
        for x in lo..=hi {
            vals[i] = x;
            total += self.dfs(i + 1, h, vals, budget)?;
        }
        Some(total)
    }
}

struct Budget<'a> {
    shared: &'a AtomicU64,
    local: u64,
    limit: u64,
}

impl<'a> Budget<'a> {
    const BATCH: u64 = 4096;

    fn new(shared: &'a AtomicU64, limit: u64) -> Self {
        Budget {
            shared,
            local: 0,
            limit,
        }
    }

    /// Records one expansion; `false` once the shared total passes the limit.
    fn tick(&mut self) -> bool {
        self.local += 1;
        if self.local >= Self::BATCH {
            return self.flush();
        }
        true
    }

    fn flush(&mut self) -> bool {
        let total = self.shared.fetch_add(self.local, Ordering::Relaxed) + self.local;
        self.local = 0;
        total <= self.limit
    }
}

/// `(h + 1)^(n-k) <= |Lip(G; h)| <= (2h + 1)^(n-k)`.
pub fn universal_bounds(g: &Graph, h: u32) -> (BigUint, BigUint) {
    let e = g.free_dimension() as u32;
    let h = BigUint::from(h);
    ((&h + 1u32).pow(e), (&h * 2u32 + 1u32).pow(e))
}

/// Convenience: the count as a `BigUint` with default options.
pub fn count(g: &Graph, h: u32) -> Result<BigUint> {
    count_bruteforce(g, h, CountOptions::default()).map(|r| r.count.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_family, make_grid, FamilyKind};

    fn c(g: &Graph, h: u32) -> u64 {
        use num_traits::ToPrimitive;
        count(g, h).unwrap().to_u64().unwrap()
    }

    #[test]
    fn small_known_counts() {
        assert_eq!(c(&make_family(FamilyKind::Path, 2).unwrap(), 1), 3);
        assert_eq!(c(&make_family(FamilyKind::Complete, 3).unwrap(), 2), 19);
        assert_eq!(c(&make_grid(2, 2).unwrap(), 1), 19);
        for g in [make_grid(2, 3).unwrap(), make_family(FamilyKind::Complete, 5).unwrap()] {
            assert_eq!(c(&g, 0), 1);
        }
    }

    #[test]
    fn four_cycle_by_hand() {
        // f(v1) = 0; f(v2), f(v4) in {-1,0,1}; f(v3) within 1 of both.
        let mut expected = 0;
        for a in -1i64..=1 {
            for b in -1i64..=1 {
                expected += (-5i64..=5).filter(|x| (x - a).abs() <= 1 && (x - b).abs() <= 1).count();
            }
        }
        assert_eq!(expected, 19);
        assert_eq!(c(&make_family(FamilyKind::Cycle, 4).unwrap(), 1), expected as u64);
    }

    #[test]
    fn closed_forms() {
        let v = |k, n, h| count_closed_form(k, n, h).unwrap().to_string();
        assert_eq!(v(ClosedForm::Tree, 4, 3), "343");
        assert_eq!(v(ClosedForm::Complete, 2, 5), "11");
        assert_eq!(v(ClosedForm::Tree, 2, 5), "11");
        assert_eq!(v(ClosedForm::Complete, 4, 1), "15");
        assert_eq!(v(ClosedForm::Tree, 1, 9), "1");
    }

    #[test]
    fn edgeless_and_disconnected() {
        assert_eq!(c(&Graph::empty(4), 3), 1);
        // Two disjoint edges: each contributes 2h + 1.
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(c(&g, 2), 25);
    }

    #[test]
    fn pinned_path_examples() {
        let p = make_family(FamilyKind::Path, 3).unwrap();
        let run = |w: [i64; 2]| {
            count_pinned(&p, 2, &PinSpec::new(&[0, 2], &w).unwrap(), CountOptions::default())
                .unwrap()
                .count
                .to_string()
        };
        assert_eq!(run([0, 0]), "5");
        assert_eq!(run([0, 1]), "4");
        assert_eq!(run([0, 5]), "0");
    }

    #[test]
    fn pinned_rejects_bad_specs() {
        let p = make_family(FamilyKind::Path, 3).unwrap();
        let opts = CountOptions::default();
        assert!(PinSpec::new(&[], &[]).is_err());
        assert!(count_pinned(&p, 1, &PinSpec::new(&[0], &[1]).unwrap(), opts).is_err());
        assert!(count_pinned(&p, 1, &PinSpec::new(&[1], &[0]).unwrap(), opts).is_err());
        assert!(count_pinned(&p, 1, &PinSpec::new(&[0, 7], &[0, 0]).unwrap(), opts).is_err());
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let g = make_family(FamilyKind::Path, 10).unwrap();
        let r = count_bruteforce(&g, 5, CountOptions { budget: 1000 });
        assert!(matches!(r, Err(Error::ResourceLimit { .. })));
        // and a budget that suffices gives the exact answer
        let ok = count_bruteforce(&make_family(FamilyKind::Path, 4).unwrap(), 1, CountOptions { budget: 1000 }).unwrap();
        assert_eq!(ok.count.to_string(), "27");
        assert!(ok.node_expansions <= 1000);
    }

    #[test]
    fn profile_on_path_endpoints() {
        let p = make_family(FamilyKind::Path, 3).unwrap();
        let prof = pinned_profile(&p, 2, &[0, 2], CountOptions::default()).unwrap();
        assert_eq!(prof.zero.to_string(), "5");
        assert_eq!(prof.max, prof.zero);
        assert_eq!(prof.feasible_vectors, 9);
    }
}
