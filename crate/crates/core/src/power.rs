//! Power iteration for matrix-free nonnegative operators.

use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// A linear map applied without materialising its matrix.
///
/// Implementations must write every entry of `y` and compute each entry with
/// a fixed summation order so results do not depend on thread count.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply_into(&self, x: &[f64], y: &mut [f64]);
}

pub const DEFAULT_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    /// Relative change of successive Rayleigh quotients at which to stop.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions {
            tol: 1e-12,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerResult {
    pub lambda: f64,
    /// Approximate Perron vector, scaled to sup-norm 1.
    pub vector: Vec<f64>,
    /// Relative change of the Rayleigh quotient in the final step.
    pub residual: f64,
    pub iterations: usize,
}

/// Top eigenvalue estimate for a transfer or integral operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralEstimate {
    pub lambda: f64,
    /// `lambda` after the operator's normalisation rule.
    pub normalized: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Power iteration from the all-ones vector using Rayleigh quotients.
pub fn power_iteration<A: LinearOperator + ?Sized>(op: &A, opts: PowerOptions) -> Result<PowerResult> {
    if !(opts.tol > 0.0) {
        return invalid("tolerance must be positive");
    }
    let n = op.dim();
    if n == 0 {
        return invalid("operator has dimension zero");
    }
    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    let mut prev = f64::NAN;
    let mut residual = f64::INFINITY;
    for it in 1..=opts.max_iter {
        op.apply_into(&x, &mut y);
        let rq = dot(&x, &y) / dot(&x, &x);
        let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !(scale > 0.0 && rq.is_finite()) {
            return invalid("operator annihilated the iterate");
        }
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / scale;
        }
        if prev.is_finite() {
            residual = (rq - prev).abs() / rq.abs();
            if residual <= opts.tol {
                return Ok(PowerResult {
                    lambda: rq,
                    vector: x,
                    residual,
                    iterations: it,
                });
            }
        }
        prev = rq;
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iter,
        residual,
    })
}

/// Sequential dot product (fixed order).
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dense symmetric matrix, mostly for tests and small reference problems.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let data = (0..n * n).map(|k| f(k / n, k % n)).collect();
        DenseMatrix { n, data }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

impl LinearOperator for DenseMatrix {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = dot(&self.data[i * self.n..(i + 1) * self.n], x);
        }
    }
}
