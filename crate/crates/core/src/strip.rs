//! Transfer operators for grid strips.
//!
//! A column of an `m`-row strip is described up to a common shift by the
//! vector of within-column differences `d_i = f(row i+1) - f(row i)`, each in
//! `[-h, h]`. Moving to the next column, the shift `delta` of the top vertex
//! must satisfy `|delta + D_i| <= h` for every row `i`, where `D_i` is the
//! difference of the prefix sums of the two columns. The number of
//! admissible shifts is the free-strip weight
//! `W(U, V) = max(0, 2h + 1 - (max_i D_i - min_i D_i))`.
//!
//! Pinned strips place an all-zero row above the strip. States then record
//! absolute values `y_1..y_m`, and two columns are compatible when
//! `|z_i - y_i| <= h` in every row.
//!
//! The band operator (one row over zeros) and the tent operator (two free
//! rows) are the one-dimensional special cases and get `O(dim)` kernels.

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exact::{big_ratio, LipCount, DEFAULT_BUDGET};
use crate::power::{power_iteration, LinearOperator, PowerOptions, SpectralEstimate, DEFAULT_MAX_ITER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "m")]
pub enum OperatorKind {
    /// `m_ij = 1` iff `|i - j| <= h`, dimension `2h + 1`.
    Band,
    /// `m_ij = 2h + 1 - |i - j|`, dimension `2h + 1`.
    Tent,
    /// `m` free rows, dimension `(2h + 1)^(m-1)`.
    FreeStrip(usize),
    /// `m` rows below a row pinned to zero, dimension `(2h + 1)^m`.
    PinnedStrip(usize),
}

impl OperatorKind {
    /// Number of grid rows one application of the operator advances.
    pub fn rows(self) -> usize {
        match self {
            OperatorKind::Band => 1,
            OperatorKind::Tent => 2,
            OperatorKind::FreeStrip(m) | OperatorKind::PinnedStrip(m) => m,
        }
    }

    fn digits(self) -> usize {
        match self {
            OperatorKind::Band => 1,
            OperatorKind::Tent => 1,
            OperatorKind::FreeStrip(m) => m - 1,
            OperatorKind::PinnedStrip(m) => m,
        }
    }

    pub fn label(self) -> String {
        match self {
            OperatorKind::Band => "band".into(),
            OperatorKind::Tent => "tent".into(),
            OperatorKind::FreeStrip(m) => format!("free-strip({m})"),
            OperatorKind::PinnedStrip(m) => format!("pinned-strip({m})"),
        }
    }
}

/// Column state: within-column differences, each in `[-h, h]`. For pinned
/// strips the first entry is the difference to the zero row above.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StripState {
    pub diffs: Vec<i64>,
}

impl StripState {
    pub fn new(diffs: Vec<i64>) -> Self {
        StripState { diffs }
    }

    /// Mixed-radix index of `d + h`, least significant digit first.
    pub fn encode(&self, h: u32) -> Result<usize> {
        let h = i64::from(h);
        let base = (2 * h + 1) as usize;
        let mut idx = 0usize;
        for &d in self.diffs.iter().rev() {
            if d.abs() > h {
                return invalid(format!("difference {d} outside [-{h}, {h}]"));
            }
            idx = idx * base + (d + h) as usize;
        }
        Ok(idx)
    }

    pub fn decode(mut idx: usize, digits: usize, h: u32) -> Self {
        let h = i64::from(h);
        let base = (2 * h + 1) as usize;
        let diffs = (0..digits)
            .map(|_| {
                let d = (idx % base) as i64 - h;
                idx /= base;
                d
            })
            .collect();
        StripState { diffs }
    }

    pub fn negated(&self) -> Self {
        StripState {
            diffs: self.diffs.iter().map(|d| -d).collect(),
        }
    }

    fn prefix(&self, leading_zero: bool) -> Vec<i64> {
        let mut acc = 0;
        let mut out = Vec::with_capacity(self.diffs.len() + 1);
        if leading_zero {
            out.push(0);
        }
        for d in &self.diffs {
            acc += d;
            out.push(acc);
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct TransferOperator {
    kind: OperatorKind,
    h: u32,
    dim: usize,
    /// Row positions per state (prefix sums), `stride` entries each.
    positions: Vec<i64>,
    stride: usize,
}

impl TransferOperator {
    pub fn new(kind: OperatorKind, h: u32) -> Result<Self> {
        Self::with_budget(kind, h, DEFAULT_BUDGET)
    }

    /// Fails with a resource-limit error when the state space exceeds `budget`.
    pub fn with_budget(kind: OperatorKind, h: u32, budget: u64) -> Result<Self> {
        match kind {
            OperatorKind::FreeStrip(0) | OperatorKind::PinnedStrip(0) => {
                return invalid("strip needs at least one row");
            }
            _ => {}
        }
        let base = 2 * u64::from(h) + 1;
        let digits = kind.digits() as u32;
        let dim = base
            .checked_pow(digits)
            .filter(|&d| d <= budget)
            .ok_or_else(|| Error::ResourceLimit {
                what: format!("{} state space at h = {h}", kind.label()),
                budget,
            })? as usize;
        let (stride, leading_zero) = match kind {
            OperatorKind::Band | OperatorKind::PinnedStrip(_) => (kind.digits(), false),
            OperatorKind::Tent | OperatorKind::FreeStrip(_) => (kind.digits() + 1, true),
        };
        let mut positions = Vec::with_capacity(dim * stride);
        for idx in 0..dim {
            positions.extend(StripState::decode(idx, kind.digits(), h).prefix(leading_zero));
        }
        Ok(TransferOperator {
            kind,
            h,
            dim,
            positions,
            stride,
        })
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn state(&self, idx: usize) -> StripState {
        StripState::decode(idx, self.kind.digits(), self.h)
    }

    fn pos(&self, idx: usize) -> &[i64] {
        &self.positions[idx * self.stride..(idx + 1) * self.stride]
    }

    /// Matrix entry between state indices `u` and `v`.
    pub fn weight(&self, u: usize, v: usize) -> u64 {
        let h = i64::from(self.h);
        let (pu, pv) = (self.pos(u), self.pos(v));
        match self.kind {
            OperatorKind::Band | OperatorKind::PinnedStrip(_) => {
                u64::from(pu.iter().zip(pv).all(|(a, b)| (a - b).abs() <= h))
            }
            OperatorKind::Tent | OperatorKind::FreeStrip(_) => {
                let (mut lo, mut hi) = (i64::MAX, i64::MIN);
                for (a, b) in pu.iter().zip(pv) {
                    let d = b - a;
                    lo = lo.min(d);
                    hi = hi.max(d);
                }
                (2 * h + 1 - (hi - lo)).max(0) as u64
            }
        }
    }

    /// Weight between two explicit states.
    pub fn state_weight(&self, u: &StripState, v: &StripState) -> Result<u64> {
        Ok(self.weight(u.encode(self.h)?, v.encode(self.h)?))
    }

    /// `y = M x` without forming `M`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim {
            return invalid(format!("vector has length {}, operator dimension is {}", x.len(), self.dim));
        }
        let mut y = vec![0.0; self.dim];
        self.apply_into(x, &mut y);
        Ok(y)
    }

    fn apply_pairwise(&self, x: &[f64], y: &mut [f64]) {
        y.par_iter_mut().enumerate().for_each(|(v, out)| {
            let mut s = 0.0;
            for (u, xu) in x.iter().enumerate() {
                let w = self.weight(u, v);
                if w != 0 {
                    s += w as f64 * xu;
                }
            }
            *out = s;
        });
    }

    fn apply_band(&self, x: &[f64], y: &mut [f64]) {
        let h = self.h as usize;
        let prefix = prefix_sums(x);
        let n = x.len();
        for (j, out) in y.iter_mut().enumerate() {
            let lo = j.saturating_sub(h);
            let hi = (j + h + 1).min(n);
            *out = prefix[hi] - prefix[lo];
        }
    }

    /// `y_j = sum_i (2h + 1 - |i - j|) x_i`, via prefix sums of `x` and `i x`.
    fn apply_tent(&self, x: &[f64], y: &mut [f64]) {
        let n = x.len();
        let c = n as f64;
        let px = prefix_sums(x);
        let ix: Vec<f64> = x.iter().enumerate().map(|(i, v)| i as f64 * v).collect();
        let pix = prefix_sums(&ix);
        for (j, out) in y.iter_mut().enumerate() {
            let jf = j as f64;
            let left = jf * px[j + 1] - pix[j + 1];
            let right = (pix[n] - pix[j + 1]) - jf * (px[n] - px[j + 1]);
            *out = c * px[n] - left - right;
        }
    }

    /// Box sums over the `(y_1, y_2)` grid for two rows under a zero row.
    fn apply_pinned2(&self, x: &[f64], y: &mut [f64]) {
        let h = self.h as usize;
        let rows = 2 * h + 1;
        let cols = 4 * h + 1;
        let cell = |idx: usize| {
            let p = self.pos(idx);
            ((p[0] + h as i64) as usize, (p[1] + 2 * h as i64) as usize)
        };
        // (rows + 1) x (cols + 1) inclusive prefix table.
        let mut table = vec![0.0; (rows + 1) * (cols + 1)];
        let at = |r: usize, c: usize| r * (cols + 1) + c;
        for (idx, v) in x.iter().enumerate() {
            let (r, c) = cell(idx);
            table[at(r + 1, c + 1)] = *v;
        }
        for r in 1..=rows {
            let mut run = 0.0;
            for c in 1..=cols {
                run += table[at(r, c)];
                table[at(r, c)] = table[at(r - 1, c)] + run;
            }
        }
        for (idx, out) in y.iter_mut().enumerate() {
            let (r, c) = cell(idx);
            let (r0, r1) = (r.saturating_sub(h), (r + h + 1).min(rows));
            let (c0, c1) = (c.saturating_sub(h), (c + h + 1).min(cols));
            *out = table[at(r1, c1)] - table[at(r0, c1)] - table[at(r1, c0)] + table[at(r0, c0)];
        }
    }

    /// `y = M x` over exact integers.
    pub fn apply_exact(&self, x: &[BigUint]) -> Result<Vec<BigUint>> {
        if x.len() != self.dim {
            return invalid(format!("vector has length {}, operator dimension is {}", x.len(), self.dim));
        }
        Ok((0..self.dim)
            .into_par_iter()
            .map(|v| {
                let mut s = BigUint::zero();
                for (u, xu) in x.iter().enumerate() {
                    let w = self.weight(u, v);
                    if w != 0 && !xu.is_zero() {
                        s += xu * w;
                    }
                }
                s
            })
            .collect())
    }

    /// Normalisation of the top eigenvalue: `lambda^(1/rows) / h`.
    pub fn normalize(&self, lambda: f64) -> f64 {
        lambda.powf(1.0 / self.kind.rows() as f64) / f64::from(self.h)
    }
}

impl LinearOperator for TransferOperator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        match self.kind {
            OperatorKind::Band | OperatorKind::PinnedStrip(1) => self.apply_band(x, y),
            OperatorKind::Tent | OperatorKind::FreeStrip(2) => self.apply_tent(x, y),
            OperatorKind::PinnedStrip(2) => self.apply_pinned2(x, y),
            _ => self.apply_pairwise(x, y),
        }
    }
}

fn prefix_sums(x: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.len() + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for v in x {
        acc += v;
        out.push(acc);
    }
    out
}

/// Exact `|Lip(L_{m,n}; h)|` rooted at a corner, as `1^T W^(n-1) 1` over
/// free-strip states. The shorter side is used as the column height.
pub fn strip_count_exact(m: usize, n: usize, h: u32) -> Result<LipCount> {
    strip_count_exact_with_budget(m, n, h, DEFAULT_BUDGET)
}

/// As [`strip_count_exact`], failing when `dim^2 * (columns - 1)` exceeds `budget`.
pub fn strip_count_exact_with_budget(m: usize, n: usize, h: u32, budget: u64) -> Result<LipCount> {
    if m == 0 || n == 0 {
        return invalid("grid dimensions must be positive");
    }
    let (rows, cols) = (m.min(n), m.max(n));
    let base = BigUint::from(2 * h + 1);
    if rows == 1 {
        return Ok(LipCount(base.pow((cols - 1) as u32)));
    }
    let op = TransferOperator::with_budget(OperatorKind::FreeStrip(rows), h, budget)?;
    let dim = op.dimension() as u64;
    let work = dim
        .checked_mul(dim)
        .and_then(|w| w.checked_mul(cols as u64 - 1));
    if work.map_or(true, |w| w > budget) {
        return Err(Error::ResourceLimit {
            what: format!("strip transfer for L_{{{rows},{cols}}} at h = {h}"),
            budget,
        });
    }
    let mut v = vec![BigUint::from(1u32); op.dimension()];
    for _ in 1..cols {
        v = op.apply_exact(&v)?;
    }
    Ok(LipCount(v.into_iter().sum()))
}

/// Top eigenvalue by power iteration from the all-ones vector.
pub fn top_eigenvalue(op: &TransferOperator, tol: f64) -> Result<SpectralEstimate> {
    top_eigenvalue_with(op, PowerOptions { tol, max_iter: DEFAULT_MAX_ITER })
}

pub fn top_eigenvalue_with(op: &TransferOperator, opts: PowerOptions) -> Result<SpectralEstimate> {
    if op.h == 0 {
        return invalid("normalisation needs h >= 1");
    }
    let r = power_iteration(op, opts)?;
    Ok(SpectralEstimate {
        lambda: r.lambda,
        normalized: op.normalize(r.lambda),
        residual: r.residual,
        iterations: r.iterations,
    })
}

/// Fit of `value(h) = limit + slope / h + curvature / h^2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extrapolation {
    pub limit: f64,
    pub slope: f64,
    pub curvature: f64,
    /// Slopes from each consecutive three-point window. A wide spread means
    /// the `1/h` model does not describe the data and the raw sequence
    /// should be read instead.
    pub window_slopes: Vec<f64>,
    pub points: Vec<(f64, f64)>,
}

impl Extrapolation {
    /// Window slopes agree to within 10% of the global slope.
    pub fn stable(&self) -> bool {
        self.window_slopes
            .iter()
            .all(|a| (a - self.slope).abs() <= 0.1 * self.slope.abs().max(1e-12))
    }
}

/// Richardson-type extrapolation to `h -> infinity`: least squares on
/// `limit + a/h + b/h^2` (exact interpolation for three points).
pub fn extrapolate_limit(points: &[(f64, f64)]) -> Result<Extrapolation> {
    if points.len() < 3 {
        return invalid("extrapolation needs at least three points");
    }
    if points.windows(2).any(|w| !(w[1].0 > w[0].0)) || points[0].0 <= 0.0 {
        return invalid("h values must be positive and strictly increasing");
    }
    let [limit, slope, curvature] = fit_inverse_quadratic(points);
    let window_slopes = points.windows(3).map(|w| fit_inverse_quadratic(w)[1]).collect();
    Ok(Extrapolation {
        limit,
        slope,
        curvature,
        window_slopes,
        points: points.to_vec(),
    })
}

fn fit_inverse_quadratic(points: &[(f64, f64)]) -> [f64; 3] {
    // normal equations in t = 1/h
    let mut a = [[0.0f64; 4]; 3];
    for &(h, v) in points {
        let basis = [1.0, 1.0 / h, 1.0 / (h * h)];
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] += basis[i] * basis[j];
            }
            a[i][3] += basis[i] * v;
        }
    }
    solve3(a)
}

/// Gaussian elimination with partial pivoting on an augmented 3x4 system.
fn solve3(mut a: [[f64; 4]; 3]) -> [f64; 3] {
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty range");
        a.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let s: f64 = (i + 1..3).map(|k| a[i][k] * x[k]).sum();
        x[i] = (a[i][3] - s) / a[i][i];
    }
    x
}

/// Certified lower bound `1^T W 1 / 1^T 1` on the top eigenvalue of the
/// free-strip operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayleighBound {
    pub rows: usize,
    pub h: u32,
    /// `1^T W 1` as a decimal string.
    pub numerator: String,
    /// `(2h + 1)^(m-1)` as a decimal string.
    pub denominator: String,
    pub value: f64,
}

impl RayleighBound {
    /// `value^(1/m) / h`, comparable with normalised eigenvalues.
    pub fn normalized(&self) -> f64 {
        self.value.powf(1.0 / self.rows as f64) / f64::from(self.h)
    }
}

pub fn rayleigh_lower_bound(m: usize, h: u32) -> Result<RayleighBound> {
    if m < 2 {
        return invalid("free strip needs at least two rows for a transfer step");
    }
    let op = TransferOperator::new(OperatorKind::FreeStrip(m), h)?;
    let dim = op.dimension() as u64;
    if dim.checked_mul(dim).map_or(true, |w| w > DEFAULT_BUDGET) {
        return Err(Error::ResourceLimit {
            what: format!("Rayleigh quotient for free-strip({m}) at h = {h}"),
            budget: DEFAULT_BUDGET,
        });
    }
    let num: BigUint = (0..op.dimension())
        .into_par_iter()
        .map(|v| (0..op.dimension()).map(|u| BigUint::from(op.weight(u, v))).sum::<BigUint>())
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    let den = BigUint::from(dim);
    Ok(RayleighBound {
        rows: m,
        h,
        value: big_ratio(&num, &den),
        numerator: num.to_string(),
        denominator: den.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::power::DenseMatrix;

    fn st(d: &[i64]) -> StripState {
        StripState::new(d.to_vec())
    }

    #[test]
    fn free_strip_weight_examples() {
        let f2 = TransferOperator::new(OperatorKind::FreeStrip(2), 2).unwrap();
        assert_eq!(f2.state_weight(&st(&[1]), &st(&[-1])).unwrap(), 3);

        let f3 = TransferOperator::new(OperatorKind::FreeStrip(3), 1).unwrap();
        assert_eq!(f3.state_weight(&st(&[0, 0]), &st(&[0, 0])).unwrap(), 3);
        // direct enumeration of shifts for U = (-1,-1), V = (1,1)
        let pu = [0i64, -1, -2];
        let pv = [0i64, 1, 2];
        let direct = (-1i64..=1)
            .filter(|delta| pu.iter().zip(&pv).all(|(a, b)| (delta + b - a).abs() <= 1))
            .count();
        assert_eq!(direct, 0);
        assert_eq!(f3.state_weight(&st(&[-1, -1]), &st(&[1, 1])).unwrap(), 0);
    }

    #[test]
    fn band_row_sums() {
        let band = TransferOperator::new(OperatorKind::Band, 1).unwrap();
        assert_eq!(band.apply(&[1.0, 1.0, 1.0]).unwrap(), vec![2.0, 3.0, 2.0]);
        assert!(matches!(band.apply(&[1.0; 4]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn state_encoding() {
        let s = st(&[-2, 1, 0]);
        let idx = s.encode(2).unwrap();
        assert_eq!(idx, 0 + 3 * 5 + 2 * 25);
        assert_eq!(StripState::decode(idx, 3, 2), s);
        assert!(st(&[3]).encode(2).is_err());
    }

    #[test]
    fn entry_identities() {
        for h in 0..=3u32 {
            let tent = TransferOperator::new(OperatorKind::Tent, h).unwrap();
            let f2 = TransferOperator::new(OperatorKind::FreeStrip(2), h).unwrap();
            let band = TransferOperator::new(OperatorKind::Band, h).unwrap();
            let p1 = TransferOperator::new(OperatorKind::PinnedStrip(1), h).unwrap();
            let hh = i64::from(h);
            for u in 0..tent.dimension() {
                for v in 0..tent.dimension() {
                    let gap = (u as i64 - v as i64).abs();
                    assert_eq!(tent.weight(u, v), (2 * hh + 1 - gap) as u64);
                    assert_eq!(f2.weight(u, v), tent.weight(u, v));
                    assert_eq!(band.weight(u, v), u64::from(gap <= hh));
                    assert_eq!(p1.weight(u, v), band.weight(u, v));
                }
            }
        }
    }

    #[test]
    fn weight_symmetries() {
        for m in 2..=3 {
            for h in 0..=2u32 {
                let op = TransferOperator::new(OperatorKind::FreeStrip(m), h).unwrap();
                for u in 0..op.dimension() {
                    for v in 0..op.dimension() {
                        let w = op.weight(u, v);
                        assert_eq!(w, op.weight(v, u));
                        let nu = op.state(u).negated().encode(h).unwrap();
                        let nv = op.state(v).negated().encode(h).unwrap();
                        assert_eq!(w, op.weight(nu, nv));
                    }
                }
            }
        }
    }

    fn dense_of(op: &TransferOperator) -> DenseMatrix {
        DenseMatrix::from_fn(op.dimension(), |i, j| op.weight(i, j) as f64)
    }

    #[test]
    fn fast_kernels_match_dense() {
        let kinds = [
            OperatorKind::Band,
            OperatorKind::Tent,
            OperatorKind::FreeStrip(2),
            OperatorKind::PinnedStrip(1),
            OperatorKind::PinnedStrip(2),
        ];
        for kind in kinds {
            for h in 1..=4u32 {
                let op = TransferOperator::new(kind, h).unwrap();
                let x: Vec<f64> = (0..op.dimension()).map(|i| 1.0 + ((i * 7919) % 13) as f64 / 7.0).collect();
                let fast = op.apply(&x).unwrap();
                let mut slow = vec![0.0; x.len()];
                dense_of(&op).apply_into(&x, &mut slow);
                for (a, b) in fast.iter().zip(&slow) {
                    assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0), "{kind:?} h={h}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn exact_strip_counts() {
        assert_eq!(strip_count_exact(2, 2, 1).unwrap().to_string(), "19");
        for n in 1..=5 {
            for h in 0..=3u32 {
                let expected = BigUint::from(2 * h + 1).pow(n as u32 - 1);
                assert_eq!(strip_count_exact(1, n, h).unwrap().0, expected);
                assert_eq!(strip_count_exact(n, 1, h).unwrap().0, expected);
            }
        }
        assert_eq!(strip_count_exact(3, 2, 2).unwrap(), strip_count_exact(2, 3, 2).unwrap());
        assert!(strip_count_exact(0, 2, 1).is_err());
    }

    #[test]
    fn strip_budget() {
        let r = strip_count_exact_with_budget(3, 10, 5, 1000);
        assert!(matches!(r, Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn small_spectra() {
        let band = TransferOperator::new(OperatorKind::Band, 1).unwrap();
        let e = top_eigenvalue(&band, 1e-13).unwrap();
        assert!((e.lambda - (1.0 + 2f64.sqrt())).abs() < 1e-9);
        assert!(e.residual <= 1e-13);
        let tent = TransferOperator::new(OperatorKind::Tent, 1).unwrap();
        let e = top_eigenvalue(&tent, 1e-13).unwrap();
        assert!((e.lambda - (7.0 + 33f64.sqrt()) / 2.0).abs() < 1e-9);
        assert!(top_eigenvalue(&TransferOperator::new(OperatorKind::Band, 0).unwrap(), 1e-9).is_err());
    }

    #[test]
    fn large_h_normalisations() {
        let band = TransferOperator::new(OperatorKind::Band, 400).unwrap();
        let e = top_eigenvalue(&band, 1e-12).unwrap();
        assert!((e.normalized - 1.554).abs() < 0.01, "{}", e.normalized);
        let f2 = TransferOperator::new(OperatorKind::FreeStrip(2), 200).unwrap();
        let e = top_eigenvalue(&f2, 1e-12).unwrap();
        assert!((e.normalized - 1.6437).abs() < 0.01, "{}", e.normalized);
    }

    #[test]
    fn extrapolation_recovers_model() {
        let pts: Vec<(f64, f64)> = [10.0, 20.0, 40.0, 80.0]
            .iter()
            .map(|&h| (h, 1.5 + 0.7 / h - 0.3 / (h * h)))
            .collect();
        let e = extrapolate_limit(&pts).unwrap();
        assert!((e.limit - 1.5).abs() < 1e-12);
        assert!((e.slope - 0.7).abs() < 1e-9);
        assert!(e.stable());
        assert!(extrapolate_limit(&pts[..2]).is_err());
        assert!(extrapolate_limit(&[(2.0, 1.0), (1.0, 1.0), (3.0, 1.0)]).is_err());
    }

    #[test]
    fn rayleigh_small_case() {
        let r = rayleigh_lower_bound(2, 1).unwrap();
        assert_eq!((r.numerator.as_str(), r.denominator.as_str()), ("19", "3"));
        assert!((r.value - 19.0 / 3.0).abs() < 1e-12);
        for (m, h) in [(2, 1), (2, 3), (3, 1), (3, 2)] {
            let r = rayleigh_lower_bound(m, h).unwrap();
            let op = TransferOperator::new(OperatorKind::FreeStrip(m), h).unwrap();
            let lambda = top_eigenvalue(&op, 1e-12).unwrap().lambda;
            assert!(r.value <= lambda * (1.0 + 1e-12), "m={m} h={h}");
        }
    }
}
