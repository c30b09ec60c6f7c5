//! Lanczos iteration for a single extreme eigenvalue of a symmetric operator.
//!
//! Full reorthogonalization against the whole Krylov basis (plus an optional
//! deflation space), so the basis stays orthonormal to working precision and
//! no spurious copies appear. Ritz values of the tridiagonal projection are
//! found by Sturm-sequence bisection, and the residual `|β_m s_m|` of the
//! extreme Ritz pair by inverse iteration on the tridiagonal.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Something that can apply a real symmetric matrix to a vector.
pub trait SymmetricOperator {
    fn order(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl SymmetricOperator for crate::graph::SymmetricMatrix {
    fn order(&self) -> usize {
        crate::graph::SymmetricMatrix::order(self)
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let m = self.as_dmatrix();
        for (i, out) in y.iter_mut().enumerate() {
            *out = m.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
}

/// The Laplacian of a graph as a sparse operator.
pub struct LaplacianOperator<'a>(pub &'a crate::graph::Graph);

impl SymmetricOperator for LaplacianOperator<'_> {
    fn order(&self) -> usize {
        self.0.n_vertices()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.0.laplacian_apply(x, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extreme {
    Smallest,
    Largest,
}

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Maximum Krylov dimension.
    pub max_steps: usize,
    /// Converged once the Ritz residual is below `tol * ‖T‖`.
    pub tol: f64,
    /// Seed of the start vector.
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            max_steps: 2000,
            tol: 1e-11,
            seed: 0x5eed_1a9c,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

/// Orthogonalize `v` against every (orthonormal) vector in `basis`, twice.
fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(v, b);
            axpy(-c, b, v);
        }
    }
}

/// Number of eigenvalues of the tridiagonal `(alpha, beta)` strictly below `x`.
fn sturm_count(alpha: &[f64], beta: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for j in 0..alpha.len() {
        let b2 = if j == 0 { 0.0 } else { beta[j - 1] * beta[j - 1] };
        d = alpha[j] - x - if j == 0 { 0.0 } else { b2 / d };
        if d == 0.0 {
            d = -f64::EPSILON * (alpha[j].abs() + x.abs() + 1.0);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// `which`-extreme eigenvalue of the tridiagonal by bisection.
fn tridiagonal_extreme(alpha: &[f64], beta: &[f64], which: Extreme) -> f64 {
    let m = alpha.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for j in 0..m {
        let r = if j > 0 { beta[j - 1].abs() } else { 0.0 }
            + if j + 1 < m { beta[j].abs() } else { 0.0 };
        lo = lo.min(alpha[j] - r);
        hi = hi.max(alpha[j] + r);
    }
    let target = match which {
        Extreme::Smallest => 1,
        Extreme::Largest => m,
    };
    // smallest x with count(x) >= target lies just above the target eigenvalue
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(alpha, beta, mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Last component of the unit eigenvector of the tridiagonal at `theta`.
fn ritz_last_component(alpha: &[f64], beta: &[f64], theta: f64) -> f64 {
    let m = alpha.len();
    if m == 1 {
        return 1.0;
    }
    let scale = alpha.iter().map(|a| a.abs()).fold(0.0, f64::max)
        + beta.iter().map(|b| b.abs()).fold(0.0, f64::max);
    let shift = theta + 1e-10 * scale.max(1e-300);
    let mut s = vec![1.0; m];
    for _ in 0..3 {
        s = solve_shifted_tridiagonal(alpha, beta, shift, &s);
        normalize(&mut s);
    }
    s[m - 1]
}

/// Solves `(T - shift I) x = rhs` with partial pivoting.
fn solve_shifted_tridiagonal(alpha: &[f64], beta: &[f64], shift: f64, rhs: &[f64]) -> Vec<f64> {
    let m = alpha.len();
    // Banded LU with one extra super-diagonal for row swaps.
    let mut d: Vec<f64> = alpha.iter().map(|a| a - shift).collect();
    let mut up1: Vec<f64> = beta.to_vec();
    up1.push(0.0);
    let mut up2 = vec![0.0; m];
    let mut low: Vec<f64> = beta.to_vec();
    let mut b = rhs.to_vec();
    let tiny = 1e-300;
    for j in 0..m - 1 {
        if low[j].abs() > d[j].abs() {
            // swap rows j and j+1
            std::mem::swap(&mut d[j], &mut low[j]);
            let (u1, dn) = (up1[j], d[j + 1]);
            up1[j] = dn;
            d[j + 1] = u1;
            let (u2, un) = (up2[j], up1[j + 1]);
            up2[j] = un;
            up1[j + 1] = u2;
            b.swap(j, j + 1);
        }
        if d[j].abs() < tiny {
            d[j] = tiny;
        }
        let f = low[j] / d[j];
        d[j + 1] -= f * up1[j];
        up1[j + 1] -= f * up2[j];
        b[j + 1] -= f * b[j];
    }
    if d[m - 1].abs() < tiny {
        d[m - 1] = tiny;
    }
    let mut x = vec![0.0; m];
    for j in (0..m).rev() {
        let mut acc = b[j];
        if j + 1 < m {
            acc -= up1[j] * x[j + 1];
        }
        if j + 2 < m {
            acc -= up2[j] * x[j + 2];
        }
        x[j] = acc / d[j];
    }
    x
}

/// Extreme eigenvalue of `op` restricted to the orthogonal complement of
/// `deflate` (orthonormal vectors).
pub fn extreme_eigenvalue<O: SymmetricOperator + ?Sized>(
    op: &O,
    which: Extreme,
    deflate: &[Vec<f64>],
    opts: &LanczosOptions,
) -> Result<f64> {
    let n = op.order();
    let dim = n.saturating_sub(deflate.len());
    if dim == 0 {
        return Err(Error::invalid("operator has no room left after deflation"));
    }
    let max_steps = opts.max_steps.min(dim);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    orthogonalize(&mut v, deflate);
    if normalize(&mut v) == 0.0 {
        return Err(Error::invalid("degenerate Lanczos start vector"));
    }

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_steps);
    let mut alpha = Vec::with_capacity(max_steps);
    let mut beta: Vec<f64> = Vec::with_capacity(max_steps);
    let mut w = vec![0.0; n];
    let mut last_residual = f64::INFINITY;

    for step in 0..max_steps {
        op.apply(&v, &mut w);
        let a = dot(&w, &v);
        alpha.push(a);
        basis.push(std::mem::take(&mut v));
        orthogonalize(&mut w, deflate);
        orthogonalize(&mut w, &basis);
        let b = dot(&w, &w).sqrt();

        let scale = alpha.iter().map(|x| x.abs()).fold(0.0, f64::max)
            + beta.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let breakdown = b <= 1e-13 * scale.max(f64::MIN_POSITIVE);
        let at_end = step + 1 == max_steps;
        if breakdown || at_end || step % 8 == 7 {
            let theta = tridiagonal_extreme(&alpha, &beta, which);
            if breakdown || step + 1 == dim {
                // invariant subspace: Ritz values are exact eigenvalues
                return Ok(theta);
            }
            let residual = (b * ritz_last_component(&alpha, &beta, theta)).abs();
            last_residual = residual;
            if residual <= opts.tol * scale {
                return Ok(theta);
            }
        }
        v = w.iter().map(|x| x / b).collect();
        // Near breakdown, 1/b amplifies rounding noise, including components
        // along the deflated vectors; clean again and stop if little is left.
        orthogonalize(&mut v, deflate);
        orthogonalize(&mut v, &basis);
        if normalize(&mut v) < 0.5 {
            return Ok(tridiagonal_extreme(&alpha, &beta, which));
        }
        beta.push(b);
    }
    Err(Error::NoConvergence {
        budget: max_steps,
        residual: last_residual,
    })
}
