//! Limiting integral operators and the constants they define.
//!
//! As `h -> infinity` the transfer matrices of [`crate::strip`], rescaled by
//! `1/h`, become integral operators on `[-1, 1]` or `[-1, 1]^2`. Their top
//! eigenvalues are computed here with a midpoint Nyström discretisation.
//! Indicator kernels give weight one half to node pairs that sit exactly on
//! the boundary of the support.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::power::{power_iteration, LinearOperator, PowerOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kernel1D {
    /// `K(x, t) = 1` iff `|x - t| <= 1`.
    BandIndicator,
    /// `K(x, t) = 2 - |x - t|`.
    Tent,
}

/// Uniform midpoint rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<f64>,
    step: f64,
}

impl Mesh {
    pub fn midpoint(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("mesh needs at least one cell");
        }
        let step = 2.0 / n as f64;
        let nodes = (0..n).map(|i| -1.0 + step * (i as f64 + 0.5)).collect();
        Ok(Mesh { nodes, step })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Quadrature weight of every node.
    pub fn weight(&self) -> f64 {
        self.step
    }

    /// Weight of the indicator `|offset * step| <= 1` for an integer node
    /// offset: 1 inside, 1/2 on the boundary, 0 outside.
    fn indicator(&self, offset: i64) -> f64 {
        let n = self.len() as i64;
        match (2 * offset.abs()).cmp(&n) {
            std::cmp::Ordering::Less => 1.0,
            std::cmp::Ordering::Equal => 0.5,
            std::cmp::Ordering::Greater => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigenpair {
    pub lambda: f64,
    /// Values at the mesh nodes, scaled to sup-norm 1.
    pub eigenfunction: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

impl Eigenpair {
    /// `max_i |b(x_i) - b(-x_i)|` on a symmetric mesh.
    pub fn symmetry_defect(&self) -> f64 {
        let b = &self.eigenfunction;
        b.iter().zip(b.iter().rev()).map(|(a, c)| (a - c).abs()).fold(0.0, f64::max)
    }
}

struct Nystrom1D<'a> {
    kernel: Kernel1D,
    mesh: &'a Mesh,
}

impl LinearOperator for Nystrom1D<'_> {
    fn dim(&self) -> usize {
        self.mesh.len()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let w = self.mesh.weight();
        y.par_iter_mut().enumerate().for_each(|(i, out)| {
            let mut s = 0.0;
            for (j, xj) in x.iter().enumerate() {
                let k = match self.kernel {
                    Kernel1D::BandIndicator => self.mesh.indicator(i as i64 - j as i64),
                    Kernel1D::Tent => 2.0 - (self.mesh.nodes[i] - self.mesh.nodes[j]).abs(),
                };
                s += k * xj;
            }
            *out = w * s;
        });
    }
}

/// Top eigenpair of the discretised one-dimensional operator.
pub fn nystrom_top(kernel: Kernel1D, mesh: &Mesh) -> Result<Eigenpair> {
    if mesh.len() < 8 {
        return invalid("Nyström mesh needs at least 8 nodes");
    }
    let op = Nystrom1D { kernel, mesh };
    let r = power_iteration(&op, PowerOptions::default())?;
    Ok(Eigenpair {
        lambda: r.lambda,
        eigenfunction: r.vector,
        residual: r.residual,
        iterations: r.iterations,
    })
}

/// Bisection on a sign-changing bracket.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo * fhi < 0.0) {
        return invalid(format!("bracket [{lo}, {hi}] does not change sign ({flo}, {fhi})"));
    }
    let lo_negative = flo < 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

const ROOT_TOL: f64 = 1e-13;

/// Largest solution of `tan(1/x) = x`, about 1.16234.
pub fn solve_alpha() -> f64 {
    bisect(|x| (1.0 / x).tan() - x, 1.0, 1.5, ROOT_TOL).expect("bracket [1, 1.5] changes sign")
}

/// Smallest positive root of `cos x + 2 sin x = 2`, which is `arctan(3/4)`.
///
/// `x = pi/2` is also a root, so the bracket stops at `pi/4`, where the
/// function is already positive.
pub fn solve_beta_root() -> f64 {
    bisect(
        |x| x.cos() + 2.0 * x.sin() - 2.0,
        1e-6,
        std::f64::consts::FRAC_PI_4,
        ROOT_TOL,
    )
    .expect("bracket (1e-6, pi/4] changes sign")
}

/// `1 / arctan(3/4)`, about 1.554.
pub fn solve_beta() -> f64 {
    1.0 / solve_beta_root()
}

/// Result of a two-dimensional eigenproblem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solved2D {
    /// The constant: `lambda^(1/2)` for zeta, `lambda^(1/3)` for psi.
    pub value: f64,
    pub lambda: f64,
    /// Cells per axis.
    pub mesh: usize,
    pub iterations: usize,
    pub residual: f64,
    /// Row-major over `(x, y)` nodes, sup-norm 1.
    #[serde(skip)]
    pub eigenfunction: Vec<f64>,
}

/// `zeta^2 b(x, y) = integral of b(s, t)` over `|s|, |t| <= 1`,
/// `|x - s| <= 1`, `|x + y - s - t| <= 1`.
struct ZetaOperator {
    mesh: Mesh,
}

impl ZetaOperator {
    /// Weighted sum of `row[j]` over `j` with `|target - j|` inside the
    /// support, using prefix sums of the row.
    fn band_sum(&self, prefix: &[f64], row: &[f64], target: i64) -> f64 {
        let n = self.mesh.len() as i64;
        let half = n / 2;
        let even = n % 2 == 0;
        let reach = if even { half - 1 } else { half };
        let lo = (target - reach).max(0);
        let hi = (target + reach).min(n - 1);
        let mut s = if lo <= hi {
            prefix[hi as usize + 1] - prefix[lo as usize]
        } else {
            0.0
        };
        if even {
            for j in [target - half, target + half] {
                if (0..n).contains(&j) {
                    s += 0.5 * row[j as usize];
                }
            }
        }
        s
    }
}

impl LinearOperator for ZetaOperator {
    fn dim(&self) -> usize {
        self.mesh.len() * self.mesh.len()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let n = self.mesh.len();
        let area = self.mesh.weight() * self.mesh.weight();
        let prefixes: Vec<Vec<f64>> = x
            .chunks(n)
            .map(|row| {
                let mut p = Vec::with_capacity(n + 1);
                let mut acc = 0.0;
                p.push(0.0);
                for v in row {
                    acc += v;
                    p.push(acc);
                }
                p
            })
            .collect();
        y.par_iter_mut().enumerate().for_each(|(idx, out)| {
            let (a, b) = ((idx / n) as i64, (idx % n) as i64);
            let mut s = 0.0;
            for i in 0..n {
                let wx = self.mesh.indicator(a - i as i64);
                if wx == 0.0 {
                    continue;
                }
                let row = &x[i * n..(i + 1) * n];
                s += wx * self.band_sum(&prefixes[i], row, a + b - i as i64);
            }
            *out = area * s;
        });
    }
}

/// `psi^3 b(x, y) = integral over k in [-1, 1] of the zeta-type integral
/// with `x` shifted by `k`. The `k` integral is done in closed form: the
/// admissible shifts form an interval of length `2 - spread(0, A, B)` with
/// `A = x - s` and `B = x + y - s - t`.
struct PsiOperator {
    mesh: Mesh,
}

impl LinearOperator for PsiOperator {
    fn dim(&self) -> usize {
        self.mesh.len() * self.mesh.len()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let n = self.mesh.len();
        let step = self.mesh.weight();
        let area = step * step;
        y.par_iter_mut().enumerate().for_each(|(idx, out)| {
            let (a, b) = ((idx / n) as i64, (idx % n) as i64);
            let mut s = 0.0;
            for i in 0..n {
                let da = a - i as i64;
                for j in 0..n {
                    let db = a + b - i as i64 - j as i64;
                    let spread = (da.max(db).max(0) - da.min(db).min(0)) as f64 * step;
                    let w = 2.0 - spread;
                    if w > 0.0 {
                        s += w * x[i * n + j];
                    }
                }
            }
            *out = area * s;
        });
    }
}

fn solve_2d<A: LinearOperator>(op: &A, mesh: usize, root: f64) -> Result<Solved2D> {
    let r = power_iteration(op, PowerOptions::default())?;
    Ok(Solved2D {
        value: r.lambda.powf(1.0 / root),
        lambda: r.lambda,
        mesh,
        iterations: r.iterations,
        residual: r.residual,
        eigenfunction: r.vector,
    })
}

/// Default cost budget for two-dimensional sweeps (operations per sweep).
pub const DEFAULT_SWEEP_BUDGET: u64 = 1 << 32;

/// Upper-bound constant from two rows pinned under a zero row.
pub fn solve_zeta(n: usize) -> Result<Solved2D> {
    if n < 16 {
        return invalid("zeta mesh needs at least 16 cells per axis");
    }
    let cost = (n as u64).pow(3);
    if cost > DEFAULT_SWEEP_BUDGET {
        return Err(Error::ResourceLimit {
            what: format!("zeta sweep at N = {n}"),
            budget: DEFAULT_SWEEP_BUDGET,
        });
    }
    solve_2d(&ZetaOperator { mesh: Mesh::midpoint(n)? }, n, 2.0)
}

/// Growth constant of the free three-row strip.
pub fn solve_psi(n: usize) -> Result<Solved2D> {
    solve_psi_with_budget(n, DEFAULT_SWEEP_BUDGET)
}

/// As [`solve_psi`], failing when `N^4` operations per sweep exceed `budget`.
pub fn solve_psi_with_budget(n: usize, budget: u64) -> Result<Solved2D> {
    if n < 16 {
        return invalid("psi mesh needs at least 16 cells per axis");
    }
    let cost = (n as u64).checked_pow(4);
    if cost.map_or(true, |c| c > budget) {
        return Err(Error::ResourceLimit {
            what: format!("psi sweep at N = {n}"),
            budget,
        });
    }
    solve_2d(&PsiOperator { mesh: Mesh::midpoint(n)? }, n, 3.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundPair {
    pub lower: f64,
    pub upper: f64,
    pub lower_source: &'static str,
    pub upper_source: &'static str,
}

/// Bounds on the growth constant of large square grids.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridBoundReport {
    /// `(alpha^2, beta)`.
    pub base: BoundPair,
    /// `(psi^(3/2) / sqrt 2, zeta)`.
    pub improved: BoundPair,
    pub alpha: f64,
    pub beta: f64,
    pub zeta: f64,
    pub psi: f64,
}

/// Lower bound implied by the three-row strip constant.
pub fn psi_lower_bound(psi: f64) -> f64 {
    psi.powf(1.5) / std::f64::consts::SQRT_2
}

pub fn grid_bound_report(zeta_mesh: usize, psi_mesh: usize) -> Result<GridBoundReport> {
    let alpha = solve_alpha();
    let beta = solve_beta();
    let zeta = solve_zeta(zeta_mesh)?.value;
    let psi = solve_psi(psi_mesh)?.value;
    Ok(GridBoundReport {
        base: BoundPair {
            lower: alpha * alpha,
            upper: beta,
            lower_source: "alpha^2, Rayleigh quotient of the two-row strip",
            upper_source: "1/arctan(3/4), band operator under a zero row",
        },
        improved: BoundPair {
            lower: psi_lower_bound(psi),
            upper: zeta,
            lower_source: "psi^(3/2)/sqrt(2), three-row strip",
            upper_source: "zeta, two rows pinned under a zero row",
        },
        alpha,
        beta,
        zeta,
        psi,
    })
}
