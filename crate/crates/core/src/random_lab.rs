//! Bounds and experiments for sparse Erdős–Rényi graphs `G(n, d/n)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::exact::{count, ehrhart_fit, LipCount};
use crate::graph::{Graph, RngSeed};

/// `2 ln d / d`, the set-size fraction used by the upper-bound argument.
pub fn alpha_flat(d: f64) -> f64 {
    2.0 * d.ln() / d
}

/// `(1/d) sqrt(1 - 4/d)`.
pub fn stretch(d: f64) -> f64 {
    (1.0 - 4.0 / d).sqrt() / d
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub d: f64,
    /// `None` unless `d > 4`.
    pub lower_exact: Option<f64>,
    pub lower_asymptotic: f64,
    /// `None` unless `d >= 9`.
    pub upper_exact: Option<f64>,
    pub upper_asymptotic: f64,
    pub stretch: Option<f64>,
    pub alpha_flat: f64,
    pub lower_valid: bool,
    pub upper_valid: bool,
    /// The exact upper bound beats the universal bound 2.
    pub upper_informative: bool,
}

/// Lower and upper bounds on `c(G(n, d/n))` at finite `d`.
pub fn bound_report(d: f64) -> BoundReport {
    let lower_valid = d > 4.0;
    let upper_valid = d >= 9.0;
    let tail = (-d / 4.0).exp();
    let alpha = alpha_flat(d);
    let c = lower_valid.then(|| stretch(d));
    let lower_exact = c.map(|c| (1.0 + c) * (1.0 - c).powf(5.0 * tail) * (1.0 - 1.0 / (d - 1.0)).sqrt());
    let upper_exact = upper_valid.then(|| 2f64.powf(tail) * (d * alpha * alpha / (1.0 - tail)).exp());
    BoundReport {
        d,
        lower_exact,
        lower_asymptotic: 1.0 + 1.0 / (2.0 * d),
        upper_exact,
        upper_asymptotic: 1.0 + 4.0 * d.ln().powi(2) / d,
        stretch: c,
        alpha_flat: alpha,
        lower_valid,
        upper_valid,
        upper_informative: upper_exact.is_some_and(|u| u < 2.0),
    }
}

/// Parameters of the local-lemma sampling recipe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LllConfig {
    pub h: u32,
    pub d: f64,
}

impl LllConfig {
    pub fn new(h: u32, d: f64) -> Result<Self> {
        if !(d > 4.0) || !d.is_finite() {
            return invalid(format!("d must exceed 4, got {d}"));
        }
        Ok(LllConfig { h, d })
    }

    pub fn stretch(&self) -> f64 {
        stretch(self.d)
    }

    /// Vertices with degree below this draw from the low range.
    pub fn degree_threshold(&self) -> usize {
        (2.0 * self.d).ceil() as usize
    }

    /// `{0, ..., floor((1 + c) h)}`.
    pub fn low_range(&self) -> (i64, i64) {
        (0, ((1.0 + self.stretch()) * self.h as f64).floor() as i64)
    }

    /// `{ceil(c h), ..., h}`.
    pub fn high_range(&self) -> (i64, i64) {
        ((self.stretch() * self.h as f64).ceil() as i64, self.h as i64)
    }

    /// Exact probability that two independent low-range values differ by
    /// more than `h`.
    pub fn low_pair_failure(&self) -> f64 {
        let l = self.low_range().1;
        let h = self.h as i64;
        if l <= h {
            return 0.0;
        }
        ((l - h) * (l - h + 1)) as f64 / ((l + 1) * (l + 1)) as f64
    }

    /// `c^2 / (1 + c)^2`, the large-`h` limit of [`Self::low_pair_failure`].
    pub fn continuum_pair_failure(&self) -> f64 {
        let c = self.stretch();
        c * c / ((1.0 + c) * (1.0 + c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloResult {
    pub trials: u64,
    pub successes: u64,
    pub estimate: f64,
    /// Wilson score interval at 95%.
    pub interval: (f64, f64),
    pub seed: u64,
}

impl MonteCarloResult {
    pub fn new(trials: u64, successes: u64, seed: RngSeed) -> Self {
        let (estimate, interval) = wilson(successes, trials);
        MonteCarloResult {
            trials,
            successes,
            estimate,
            interval,
            seed: seed.0,
        }
    }
}

/// Point estimate and 95% Wilson interval.
pub fn wilson(successes: u64, trials: u64) -> (f64, (f64, f64)) {
    if trials == 0 {
        return (f64::NAN, (0.0, 1.0));
    }
    const Z: f64 = 1.959963984540054;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    (p, ((center - half).max(0.0), (center + half).min(1.0)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LllReport {
    pub config: LllConfig,
    /// Fraction of samples that are `h`-Lipschitz on every edge.
    pub success: MonteCarloResult,
    /// Edges whose endpoints both draw from the low range.
    pub low_low_edges: usize,
    pub edge_samples: u64,
    pub edge_failures: u64,
    pub edge_failure_rate: f64,
    pub predicted_edge_failure: f64,
    pub continuum_edge_failure: f64,
    /// Failures on edges touching a high-degree vertex. Always zero.
    pub high_edge_failures: u64,
}

/// Samples the recipe `trials` times. Trial `i` uses stream `i` of `seed`,
/// and vertices draw their values in index order, so graphs on the same
/// vertex set with the same low/high split see identical samples.
pub fn lll_sampler(g: &Graph, cfg: LllConfig, trials: u64, seed: RngSeed) -> Result<LllReport> {
    lll_sampler_streams(g, cfg, 0, trials, seed)
}

/// As [`lll_sampler`] over streams `first..first + trials`. Splitting a run
/// into consecutive stream ranges and adding the tallies reproduces the
/// single run exactly.
pub fn lll_sampler_streams(g: &Graph, cfg: LllConfig, first: u64, trials: u64, seed: RngSeed) -> Result<LllReport> {
    if trials == 0 {
        return invalid("trials must be at least 1");
    }
    let threshold = cfg.degree_threshold();
    let high: Vec<bool> = (0..g.n()).map(|v| g.degree(v) >= threshold).collect();
    let (lo, hi) = (cfg.low_range(), cfg.high_range());
    let h = cfg.h as i64;
    let low_low_edges = g.edges().iter().filter(|&&(u, v)| !high[u] && !high[v]).count();

    let tallies: Vec<(u64, u64, u64)> = (first..first + trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = seed.stream(t);
            let f: Vec<i64> = high
                .iter()
                .map(|&hv| {
                    let (a, b) = if hv { hi } else { lo };
                    rng.gen_range(a..=b)
                })
                .collect();
            let (mut low_fail, mut high_fail) = (0u64, 0u64);
            for &(u, v) in g.edges() {
                if (f[u] - f[v]).abs() > h {
                    if high[u] || high[v] {
                        high_fail += 1;
                    } else {
                        low_fail += 1;
                    }
                }
            }
            ((low_fail + high_fail == 0) as u64, low_fail, high_fail)
        })
        .collect();
    let successes = tallies.iter().map(|t| t.0).sum();
    let edge_failures = tallies.iter().map(|t| t.1).sum();
    let high_edge_failures = tallies.iter().map(|t| t.2).sum();
    let edge_samples = trials * low_low_edges as u64;
    Ok(LllReport {
        config: cfg,
        success: MonteCarloResult::new(trials, successes, seed),
        low_low_edges,
        edge_samples,
        edge_failures,
        edge_failure_rate: if edge_samples == 0 {
            0.0
        } else {
            edge_failures as f64 / edge_samples as f64
        },
        predicted_edge_failure: cfg.low_pair_failure(),
        continuum_edge_failure: cfg.continuum_pair_failure(),
        high_edge_failures,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Complete enumeration; requires `n <= 20`.
    Exhaustive,
    /// Greedy growth from every start vertex; failure is inconclusive.
    Heuristic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum PairSearch {
    Found { a: Vec<usize>, b: Vec<usize> },
    /// Exhaustive search proved that no pair exists.
    NoneExists,
    /// Heuristic search found nothing; a pair may still exist.
    Inconclusive,
}

impl PairSearch {
    pub fn found(&self) -> bool {
        matches!(self, PairSearch::Found { .. })
    }
}

pub const EXHAUSTIVE_MAX_N: usize = 20;

/// Looks for disjoint sets `A`, `B` of size `s` with no edge between them.
pub fn independent_pair_search(g: &Graph, s: usize, mode: SearchMode) -> Result<PairSearch> {
    let n = g.n();
    if s == 0 {
        return Ok(PairSearch::Found { a: vec![], b: vec![] });
    }
    match mode {
        SearchMode::Exhaustive => {
            if n > EXHAUSTIVE_MAX_N {
                return invalid(format!("exhaustive search needs n <= {EXHAUSTIVE_MAX_N}, got {n}"));
            }
            Ok(exhaustive_pair(g, s))
        }
        SearchMode::Heuristic => Ok(heuristic_pair(g, s)),
    }
}

fn closed_masks(g: &Graph) -> Vec<u32> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(1u32 << v, |m, &u| m | (1 << u)))
        .collect()
}

fn bits(mut m: u32) -> Vec<usize> {
    let mut out = Vec::new();
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

fn exhaustive_pair(g: &Graph, s: usize) -> PairSearch {
    let n = g.n();
    if 2 * s > n {
        return PairSearch::NoneExists;
    }
    let closed = closed_masks(g);
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    // Gosper's hack over s-subsets in increasing order.
    let mut a: u32 = (1u32 << s) - 1;
    while a <= all {
        let covered = bits(a).iter().fold(0u32, |m, &v| m | closed[v]);
        let free = all & !covered;
        if free.count_ones() as usize >= s {
            let b = bits(free).into_iter().take(s).collect();
            return PairSearch::Found { a: bits(a), b };
        }
        let c = a & a.wrapping_neg();
        let r = a + c;
        if r > all || r == 0 {
            break;
        }
        a = (((r ^ a) >> 2) / c) | r;
    }
    PairSearch::NoneExists
}

fn heuristic_pair(g: &Graph, s: usize) -> PairSearch {
    let n = g.n();
    if 2 * s > n {
        return PairSearch::NoneExists;
    }
    for start in 0..n {
        let mut in_a = vec![false; n];
        let mut covered = vec![false; n];
        let mut covered_count = 0;
        let add = |v: usize, in_a: &mut Vec<bool>, covered: &mut Vec<bool>, cc: &mut usize| {
            in_a[v] = true;
            for &u in g.neighbors(v).iter().chain(std::iter::once(&v)) {
                if !covered[u] {
                    covered[u] = true;
                    *cc += 1;
                }
            }
        };
        add(start, &mut in_a, &mut covered, &mut covered_count);
        let mut size = 1;
        while size < s {
            // Add the vertex that uncovers the fewest new vertices.
            let best = (0..n)
                .filter(|&v| !in_a[v])
                .min_by_key(|&v| {
                    let extra = g.neighbors(v).iter().filter(|&&u| !covered[u]).count();
                    (extra + usize::from(!covered[v]), v)
                });
            match best {
                Some(v) => add(v, &mut in_a, &mut covered, &mut covered_count),
                None => break,
            }
            size += 1;
        }
        if size == s && n - covered_count >= s {
            let a = (0..n).filter(|&v| in_a[v]).collect();
            let b = (0..n).filter(|&v| !covered[v]).take(s).collect();
            return PairSearch::Found { a, b };
        }
    }
    PairSearch::Inconclusive
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |q: f64| if q <= 0.0 { 0.0 } else { -q * q.log2() };
    term(p) + term(1.0 - p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Margin {
    /// `d a^2 - 2 a ln 2 - H(2a) ln 2` with `a = 2 ln d / d`.
    pub margin: f64,
    /// `(4 ln d / d) ln(e d / (2 ln d))`.
    pub chain: f64,
}

/// Margin of the counting inequality behind the upper bound.
pub fn lemma321_margin(d: f64) -> Result<Margin> {
    if !(d >= 9.0) || !d.is_finite() {
        return invalid(format!("margin needs d >= 9, got {d}"));
    }
    let a = alpha_flat(d);
    let ln2 = std::f64::consts::LN_2;
    let margin = d * a * a - 2.0 * a * ln2 - binary_entropy(2.0 * a) * ln2;
    let chain = 4.0 * d.ln() / d * (std::f64::consts::E * d / (2.0 * d.ln())).ln();
    Ok(Margin { margin, chain })
}

/// Predicted giant-component fraction `1 - x/d`, where `x < 1` solves
/// `x = d e^(x - d)`.
pub fn giant_fraction_prediction(d: f64) -> Result<f64> {
    if !(d > 1.0) || !d.is_finite() {
        return invalid(format!("no giant component for d = {d}"));
    }
    let mut x = d * (-d).exp();
    for _ in 0..10_000 {
        let next = 0.5 * (x + d * (x - d).exp());
        if (next - x).abs() <= 1e-15 * next.max(1e-300) {
            x = next;
            break;
        }
        x = next;
    }
    Ok(1.0 - x / d)
}

/// Chernoff-type tail `Pr(X >= d + x) <= exp(-x^2 / (2(x + d)))`.
pub fn poisson_tail_bound(d: f64, x: f64) -> Result<f64> {
    if !(d > 0.0) || !(x >= 0.0) {
        return invalid("tail bound needs d > 0 and x >= 0");
    }
    Ok((-x * x / (2.0 * (x + d))).exp())
}

/// Fraction of vertices with degree at least `threshold`.
pub fn degree_tail_fraction(g: &Graph, threshold: usize) -> f64 {
    if g.n() == 0 {
        return 0.0;
    }
    (0..g.n()).filter(|&v| g.degree(v) >= threshold).count() as f64 / g.n() as f64
}

/// Exact probability that `|X1 + X2 + X3| <= 2h` for independent uniforms
/// on `{-h, ..., h}`.
pub fn triple_sum_success(h: u32) -> BigRational {
    let h = h as i128;
    let mut good: i128 = 0;
    for t in -2 * h..=2 * h {
        let pair = 2 * h + 1 - t.abs();
        let lo = (-2 * h - t).max(-h);
        let hi = (2 * h - t).min(h);
        if lo <= hi {
            good += pair * (hi - lo + 1);
        }
    }
    let total = (2 * h + 1).pow(3);
    BigRational::new(BigInt::from(good), BigInt::from(total))
}

/// `2 - 2^-18 eps^5`.
pub fn epsilon_upper_bound(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return invalid(format!("epsilon must lie in (0, 1], got {eps}"));
    }
    Ok(2.0 - 2f64.powi(-18) * eps.powi(5))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "method")]
pub enum CEstimate {
    /// Root of the interpolated leading coefficient.
    Ehrhart { c: f64 },
    /// `(1/h) |Lip(G; h)|^(1/(n-k))` for each requested `h`.
    Sequence { values: Vec<(u32, f64)> },
}

impl CEstimate {
    /// The Ehrhart value, or the last term of the sequence.
    pub fn best(&self) -> f64 {
        match self {
            CEstimate::Ehrhart { c } => *c,
            CEstimate::Sequence { values } => values.last().map_or(f64::NAN, |v| v.1),
        }
    }
}

/// Estimates `c(G)` from exact counts at the given bounds.
pub fn c_empirical(g: &Graph, h_list: &[u32]) -> Result<CEstimate> {
    let dim = g.free_dimension();
    if dim == 0 {
        return invalid("growth constant undefined for an edgeless graph");
    }
    let mut sorted = h_list.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != h_list.len() || h_list.is_empty() {
        return invalid("bounds must be distinct and nonempty");
    }
    let counts = h_list
        .iter()
        .map(|&h| Ok((h, LipCount(count(g, h)?))))
        .collect::<Result<Vec<_>>>()?;
    if counts.len() == dim + 1 {
        let poly = ehrhart_fit(g, &counts)?;
        return Ok(CEstimate::Ehrhart {
            c: poly.c_estimate().expect("positive degree"),
        });
    }
    if sorted[0] == 0 {
        return invalid("h = 0 has no normalised value");
    }
    let values = counts
        .iter()
        .map(|(h, c)| (*h, (crate::exact::ln_big(c.value()) / dim as f64).exp() / *h as f64))
        .collect();
    Ok(CEstimate::Sequence { values })
}
