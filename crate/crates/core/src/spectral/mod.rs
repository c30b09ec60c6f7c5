//! Laplacian spectra and the figures of merit derived from them.
//!
//! Only the two extreme nontrivial Laplacian eigenvalues are ever needed:
//! `λ₂` (algebraic connectivity) and `λ_N`. Everything else — the eigenratio
//! `γ = λ₂/λ_N`, the consensus contraction factor `γ₂ = (1-γ)/(1+γ)`, the
//! optimal equal weight `α* = 2/(λ₂+λ_N)` and, for regular graphs, the
//! Ramanujan certificate — follows from them.
//!
//! Small graphs (`N <= DENSE_LIMIT`) use a dense symmetric eigensolve. Larger
//! ones run Lanczos on the sparse Laplacian, with the constant vector deflated
//! for `λ₂`.

pub mod lanczos;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, SymmetricMatrix};
use lanczos::{extreme_eigenvalue, Extreme, LanczosOptions, LaplacianOperator, SymmetricOperator};

/// Largest order solved densely under [`EigenStrategy::Auto`].
pub const DENSE_LIMIT: usize = 1024;

/// Additive slack on the `λ_G ≤ 2√(k-1)` comparison.
pub const RAMANUJAN_SLACK: f64 = 1e-9;

/// Eigenvalues within this distance of `±k` count as trivial.
pub const TRIVIAL_EIGENVALUE_BAND: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum EigenStrategy {
    /// Dense up to [`DENSE_LIMIT`], Lanczos above.
    #[default]
    Auto,
    Dense,
    Iterative,
}

impl EigenStrategy {
    fn use_dense(self, n: usize) -> bool {
        match self {
            EigenStrategy::Auto => n <= DENSE_LIMIT,
            EigenStrategy::Dense => true,
            EigenStrategy::Iterative => false,
        }
    }
}

fn constant_unit_vector(n: usize) -> Vec<f64> {
    vec![1.0 / (n as f64).sqrt(); n]
}

fn iterative_extremes<O: SymmetricOperator + ?Sized>(op: &O) -> Result<(f64, f64)> {
    let n = op.order();
    if n == 1 {
        return Ok((0.0, 0.0));
    }
    let opts = LanczosOptions::default();
    let lambda_n = extreme_eigenvalue(op, Extreme::Largest, &[], &opts)?;
    let lambda_2 = extreme_eigenvalue(
        op,
        Extreme::Smallest,
        &[constant_unit_vector(n)],
        &opts,
    )?;
    Ok((lambda_2.max(0.0), lambda_n))
}

fn dense_extremes(l: &SymmetricMatrix) -> (f64, f64) {
    let ev = l.eigenvalues();
    let n = ev.len();
    if n == 1 {
        return (0.0, 0.0);
    }
    (ev[1].max(0.0), ev[n - 1])
}

/// `(λ₂, λ_N)` of a Laplacian matrix.
pub fn extreme_laplacian_eigenvalues(l: &SymmetricMatrix) -> Result<(f64, f64)> {
    extreme_laplacian_eigenvalues_with(l, EigenStrategy::Auto)
}

pub fn extreme_laplacian_eigenvalues_with(
    l: &SymmetricMatrix,
    strategy: EigenStrategy,
) -> Result<(f64, f64)> {
    if strategy.use_dense(l.order()) {
        Ok(dense_extremes(l))
    } else {
        iterative_extremes(l)
    }
}

/// `(λ₂, λ_N)` of a graph's Laplacian; the iterative path never forms `L`.
pub fn graph_laplacian_extremes(g: &Graph, strategy: EigenStrategy) -> Result<(f64, f64)> {
    if strategy.use_dense(g.n_vertices()) {
        Ok(dense_extremes(&g.laplacian()))
    } else {
        iterative_extremes(&LaplacianOperator(g))
    }
}

/// Outcome of the `λ_G(A) ≤ 2√(k-1)` test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RamanujanCertificate {
    pub degree: usize,
    pub lambda_g: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    pub n_vertices: usize,
    pub lambda2: f64,
    pub lambda_n: f64,
    pub gamma: f64,
    pub gamma2: f64,
    pub alpha_star: f64,
    /// Largest nontrivial adjacency eigenvalue magnitude, regular graphs only.
    pub adjacency_second: Option<f64>,
    pub is_ramanujan: Option<bool>,
}

/// `γ₂ = (1-γ)/(1+γ)`.
pub fn gamma2_from_gamma(gamma: f64) -> f64 {
    (1.0 - gamma) / (1.0 + gamma)
}

pub fn spectral_summary(g: &Graph) -> Result<SpectralSummary> {
    spectral_summary_with(g, EigenStrategy::Auto)
}

/// Spectral figures of merit of a connected graph.
///
/// Disconnected graphs are rejected: `λ₂ = 0` makes `γ` zero and `γ₂` one,
/// and every downstream formula assumes `λ₂ > 0`.
pub fn spectral_summary_with(g: &Graph, strategy: EigenStrategy) -> Result<SpectralSummary> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let (lambda2, lambda_n) = graph_laplacian_extremes(g, strategy)?;
    let mut summary = summary_from_extremes(g.n_vertices(), lambda2, lambda_n);
    if let Some(k) = g.regular_degree() {
        let cert = certificate_from_extremes(g, k, lambda2, lambda_n, strategy)?;
        summary.adjacency_second = Some(cert.lambda_g);
        summary.is_ramanujan = Some(cert.holds);
    }
    Ok(summary)
}

/// Builds the summary from known `(λ₂, λ_N)` of a connected graph.
pub fn summary_from_extremes(n_vertices: usize, lambda2: f64, lambda_n: f64) -> SpectralSummary {
    let (gamma, alpha_star) = if lambda_n > 0.0 {
        (lambda2 / lambda_n, 2.0 / (lambda2 + lambda_n))
    } else {
        // a single vertex: already in consensus
        (1.0, 0.0)
    };
    SpectralSummary {
        n_vertices,
        lambda2,
        lambda_n,
        gamma,
        gamma2: gamma2_from_gamma(gamma),
        alpha_star,
        adjacency_second: None,
        is_ramanujan: None,
    }
}

/// Ramanujan test for a connected `k`-regular graph.
pub fn ramanujan_certificate(g: &Graph) -> Result<RamanujanCertificate> {
    let profile = g.degree_profile();
    if !profile.is_regular {
        return Err(Error::NotRegular {
            min: profile.min_degree,
            max: profile.max_degree,
        });
    }
    ramanujan_certificate_for_degree(g, profile.min_degree)
}

/// Ramanujan test against a nominal degree `k`, for graphs that are
/// `k`-regular once their dropped loops are put back (LPS-II).
///
/// Loops cancel in `L = D - A`, so the loop-restored adjacency matrix is
/// `kI - L` and its spectrum is `k - λ(L)`.
pub fn ramanujan_certificate_for_degree(g: &Graph, k: usize) -> Result<RamanujanCertificate> {
    if k < 2 {
        return Err(Error::invalid(format!("degree must be at least 2, got {k}")));
    }
    if let Some(v) = (0..g.n_vertices()).find(|&v| g.degree(v) > k) {
        return Err(Error::invalid(format!(
            "vertex {v} has degree {} above the nominal degree {k}",
            g.degree(v)
        )));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let (l2, ln) = graph_laplacian_extremes(g, EigenStrategy::Auto)?;
    certificate_from_extremes(g, k, l2, ln, EigenStrategy::Auto)
}

fn certificate_from_extremes(
    g: &Graph,
    k: usize,
    lambda2: f64,
    lambda_n: f64,
    strategy: EigenStrategy,
) -> Result<RamanujanCertificate> {
    let kf = k as f64;
    let lambda_g = if g.is_bipartite() {
        // -k is trivial; the next eigenvalue from the bottom is needed.
        let adj: Vec<f64> = if strategy.use_dense(g.n_vertices()) {
            g.laplacian().eigenvalues().iter().map(|l| kf - l).collect()
        } else {
            return Err(Error::invalid(
                "Ramanujan certification of large bipartite graphs is not supported",
            ));
        };
        nontrivial_magnitude(&adj, kf, true)
    } else {
        // adjacency spectrum is k - λ(L): top nontrivial k - λ₂, bottom k - λ_N
        (kf - lambda2).abs().max((kf - lambda_n).abs())
    };
    let bound = 2.0 * (kf - 1.0).sqrt();
    Ok(RamanujanCertificate {
        degree: k,
        lambda_g,
        bound,
        holds: lambda_g <= bound + RAMANUJAN_SLACK,
    })
}

/// Largest `|λ|` after removing one eigenvalue near `k` and, when `bipartite`,
/// one near `-k`.
fn nontrivial_magnitude(eigs: &[f64], k: f64, bipartite: bool) -> f64 {
    let mut rest: Vec<f64> = eigs.to_vec();
    let mut drop_near = |target: f64| {
        if let Some(pos) = rest
            .iter()
            .position(|&x| (x - target).abs() <= TRIVIAL_EIGENVALUE_BAND)
        {
            rest.remove(pos);
        }
    };
    drop_near(k);
    if bipartite {
        drop_near(-k);
    }
    rest.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Largest nontrivial `|λ(A)|` from the full dense adjacency spectrum of a
/// regular graph. Intended as a cross-check of [`ramanujan_certificate`].
pub fn adjacency_second_dense(g: &Graph) -> Result<f64> {
    let k = g.regular_degree().ok_or_else(|| {
        let p = g.degree_profile();
        Error::NotRegular {
            min: p.min_degree,
            max: p.max_degree,
        }
    })?;
    let eigs = g.adjacency_matrix().eigenvalues();
    Ok(nontrivial_magnitude(&eigs, k as f64, g.is_bipartite()))
}

fn check_degree(k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::invalid(format!("degree must be at least 2, got {k}")));
    }
    Ok(k as f64)
}

/// Lower bound on `γ` for non-bipartite `k`-regular Ramanujan graphs:
/// `(k - 2√(k-1)) / (k + 2√(k-1))`.
pub fn ramanujan_gamma_lower_bound(k: usize) -> Result<f64> {
    let k = check_degree(k)?;
    let r = 2.0 * (k - 1.0).sqrt();
    Ok((k - r) / (k + r))
}

/// Asymptotic upper bounds on `γ` for large `k`-regular graph families:
/// `λ_N` near `k + 2√(k-1)` (case 1) or only known `≥ k` (case 2).
pub fn asymptotic_gamma_upper_bounds(k: usize) -> Result<(f64, f64)> {
    let k = check_degree(k)?;
    let r = 2.0 * (k - 1.0).sqrt();
    Ok(((k - r) / (k + r), (k - r) / k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn extremes_of_small_graphs() {
        for strategy in [EigenStrategy::Dense, EigenStrategy::Iterative] {
            let (l2, ln) =
                extreme_laplacian_eigenvalues_with(&Graph::complete(3).unwrap().laplacian(), strategy)
                    .unwrap();
            assert!(close(l2, 3.0, 1e-10) && close(ln, 3.0, 1e-10));
            let (l2, ln) =
                extreme_laplacian_eigenvalues_with(&Graph::cycle(4).unwrap().laplacian(), strategy)
                    .unwrap();
            assert!(close(l2, 2.0, 1e-10) && close(ln, 4.0, 1e-10), "{l2} {ln}");
            let g = Graph::simple(4, [(0, 1), (2, 3)]).unwrap();
            let (l2, _) = extreme_laplacian_eigenvalues_with(&g.laplacian(), strategy).unwrap();
            assert!(l2.abs() < 1e-9);
        }
    }

    #[test]
    fn summary_of_complete_and_cycle() {
        let s = spectral_summary(&Graph::complete(7).unwrap()).unwrap();
        assert!(close(s.gamma, 1.0, 1e-12));
        assert!(s.gamma2.abs() < 1e-12);
        assert!(close(s.alpha_star, 1.0 / 7.0, 1e-12));

        let s = spectral_summary(&Graph::cycle(4).unwrap()).unwrap();
        assert!(close(s.gamma, 0.5, 1e-12));
        assert!(close(s.gamma2, 1.0 / 3.0, 1e-12));
        assert!(close(s.alpha_star, 1.0 / 3.0, 1e-12));
        assert_eq!(s.is_ramanujan, Some(true));
    }

    #[test]
    fn disconnected_summary_rejected() {
        let g = Graph::simple(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(spectral_summary(&g), Err(Error::Disconnected)));
    }

    #[test]
    fn k4_certificate() {
        let c = ramanujan_certificate(&Graph::complete(4).unwrap()).unwrap();
        assert!(close(c.lambda_g, 1.0, 1e-12));
        assert!(close(c.bound, 2.0 * 2f64.sqrt(), 1e-15));
        assert!(c.holds);
    }

    #[test]
    fn cycle_certificate() {
        let c = ramanujan_certificate(&Graph::cycle(101).unwrap()).unwrap();
        // odd cycle: the bottom eigenvalue -2cos(π/N) dominates 2cos(2π/N)
        let want = 2.0 * (std::f64::consts::PI / 101.0).cos();
        assert!(close(c.lambda_g, want, 1e-10), "{} vs {want}", c.lambda_g);
        assert!(c.holds);
        // bipartite even cycle: −2 is excluded, next is -2cos(2π/N)
        let c = ramanujan_certificate(&Graph::cycle(10).unwrap()).unwrap();
        assert!(close(c.lambda_g, 2.0 * (std::f64::consts::PI / 5.0).cos(), 1e-10));
    }

    #[test]
    fn certificate_rejects_irregular() {
        assert!(matches!(
            ramanujan_certificate(&Graph::path(3).unwrap()),
            Err(Error::NotRegular { min: 1, max: 2 })
        ));
    }

    #[test]
    fn gamma_bounds() {
        assert!(close(ramanujan_gamma_lower_bound(6).unwrap(), 0.145898033750315, 1e-13));
        assert!(close(ramanujan_gamma_lower_bound(18).unwrap(), 0.371626542795033, 1e-13));
        assert_eq!(ramanujan_gamma_lower_bound(2).unwrap(), 0.0);
        assert!(ramanujan_gamma_lower_bound(1).is_err());
        let (c1, c2) = asymptotic_gamma_upper_bounds(18).unwrap();
        assert!(close(c1, 0.371626542795033, 1e-13));
        assert!(close(c2, 0.541877152709149, 1e-13));
        assert_eq!(asymptotic_gamma_upper_bounds(2).unwrap(), (0.0, 0.0));
        for k in 3..200 {
            let (c1, c2) = asymptotic_gamma_upper_bounds(k).unwrap();
            assert!(c1 < c2);
            assert_eq!(c1, ramanujan_gamma_lower_bound(k).unwrap());
        }
    }
}
