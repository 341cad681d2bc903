use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{ln_big, LipCount};
use crate::error::{invalid, Result};
use crate::graph::Graph;

/// Counting polynomial `h -> |Lip(G; h)|` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct EhrhartPoly {
    /// Ascending powers of `h`.
    coefficients: Vec<BigRational>,
    /// `n - k`.
    degree: usize,
}

impl EhrhartPoly {
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient of `h^(n-k)`.
    pub fn leading(&self) -> &BigRational {
        &self.coefficients[self.degree]
    }

    pub fn evaluate(&self, h: i64) -> BigRational {
        let x = BigRational::from_integer(BigInt::from(h));
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &x + c)
    }

    /// `L^(1/(n-k))` as a double; `None` when `n = k`.
    pub fn c_estimate(&self) -> Option<f64> {
        if self.degree == 0 {
            return None;
        }
        let l = self.leading();
        let (num, den) = (l.numer().magnitude(), l.denom().magnitude());
        Some(((ln_big(num) - ln_big(den)) / self.degree as f64).exp())
    }

    /// Exact check of `1 <= L <= 2^(n-k)`.
    pub fn within_growth_bounds(&self) -> bool {
        let l = self.leading();
        let upper = BigRational::from_integer(BigInt::from(BigUint::one() << self.degree));
        *l >= BigRational::one() && *l <= upper
    }
}

/// Interpolates the unique polynomial of degree `n - k` through the given
/// exact counts. Exactly `n - k + 1` distinct nodes are required.
pub fn ehrhart_fit(g: &Graph, counts: &[(u32, LipCount)]) -> Result<EhrhartPoly> {
    let degree = g.free_dimension();
    if counts.len() != degree + 1 {
        return invalid(format!(
            "need exactly {} nodes for degree {degree}, got {}",
            degree + 1,
            counts.len()
        ));
    }
    let mut nodes: Vec<u32> = counts.iter().map(|c| c.0).collect();
    nodes.sort_unstable();
    if nodes.windows(2).any(|w| w[0] == w[1]) {
        return invalid("duplicate interpolation node");
    }

    // Lagrange form, expanded basis polynomial by basis polynomial.
    let mut coefficients = vec![BigRational::zero(); degree + 1];
    for (i, (xi, yi)) in counts.iter().enumerate() {
        let xi = BigInt::from(*xi);
        let mut basis = vec![BigRational::one()];
        let mut denom = BigInt::one();
        for (j, (xj, _)) in counts.iter().enumerate() {
            if i == j {
                continue;
            }
            let xj = BigInt::from(*xj);
            basis = mul_linear(&basis, &xj);
            denom *= &xi - &xj;
        }
        let scale = BigRational::new(BigInt::from(yi.0.clone()), denom);
        for (c, b) in coefficients.iter_mut().zip(&basis) {
            *c += b * &scale;
        }
    }
    debug_assert!(coefficients.last().is_some_and(|c| !c.is_negative()));
    Ok(EhrhartPoly {
        coefficients,
        degree,
    })
}

/// `p(h) * (h - root)`.
fn mul_linear(p: &[BigRational], root: &BigInt) -> Vec<BigRational> {
    let root = BigRational::from_integer(root.clone());
    let mut out = vec![BigRational::zero(); p.len() + 1];
    for (k, c) in p.iter().enumerate() {
        out[k + 1] += c;
        out[k] -= c * &root;
    }
    out
}
