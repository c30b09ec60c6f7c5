//! Exact state means and variances of the consensus detector, and the
//! spectral upper bound on the variances.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{DetectionModel, Hypothesis};
use crate::consensus::{apply_weights, optimal_alpha};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::{spectral_summary, DENSE_LIMIT};

/// How [`VarianceSequence`] evaluates `diag(Σᵢ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentMethod {
    /// Eigen for noiseless links up to the dense size limit, power otherwise.
    #[default]
    Auto,
    /// `Σ_m w_m^{2i} U_nm²` from one eigendecomposition of `L`; noiseless only.
    Eigen,
    /// Carry `Wⁱ` forward column by column with sparse products.
    Power,
}

enum Engine {
    Eigen {
        /// `U_nm²`, row-major `n × n`.
        u2: Vec<f64>,
        /// `w_m^{2i}`
        powers: Vec<f64>,
        w2: Vec<f64>,
    },
    Power {
        /// `Wⁱ`, column-major; symmetric, so column `n` is also row `n`.
        p: Vec<f64>,
        scratch: Vec<f64>,
        noise_acc: Vec<f64>,
        phi2: Vec<f64>,
    },
}

/// Iterator over `diag(Σ₀), diag(Σ₁), …` for `Σᵢ₊₁ = WΣᵢW + R`,
/// `Σ₀ = (4μ²/σ²)I`, `R = diag(φ²)`.
pub struct VarianceSequence<'a> {
    g: &'a Graph,
    alpha: f64,
    s: f64,
    engine: Engine,
    started: bool,
}

impl<'a> VarianceSequence<'a> {
    /// Uses `α = α*`.
    pub fn new(g: &'a Graph, model: &DetectionModel, method: MomentMethod) -> Result<Self> {
        model.check_graph(g)?;
        let alpha = optimal_alpha(g)?;
        Self::with_alpha(g, model, alpha, method)
    }

    pub fn with_alpha(
        g: &'a Graph,
        model: &DetectionModel,
        alpha: f64,
        method: MomentMethod,
    ) -> Result<Self> {
        model.check_graph(g)?;
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::invalid(format!("alpha must be finite and >= 0, got {alpha}")));
        }
        let n = g.n_vertices();
        let method = match method {
            MomentMethod::Auto if model.is_noiseless() && n <= DENSE_LIMIT => MomentMethod::Eigen,
            MomentMethod::Auto => MomentMethod::Power,
            m => m,
        };
        let engine = match method {
            MomentMethod::Eigen => {
                if !model.is_noiseless() {
                    return Err(Error::invalid(
                        "the eigen moment method handles noiseless links only",
                    ));
                }
                let (values, vectors) = g.laplacian().eigen_decomposition();
                let mut u2 = vec![0.0; n * n];
                for r in 0..n {
                    for m in 0..n {
                        u2[r * n + m] = vectors[(r, m)] * vectors[(r, m)];
                    }
                }
                let w2 = values
                    .iter()
                    .map(|l| {
                        let w = 1.0 - alpha * l;
                        w * w
                    })
                    .collect();
                Engine::Eigen {
                    u2,
                    powers: vec![1.0; n],
                    w2,
                }
            }
            _ => {
                let mut p = vec![0.0; n * n];
                for c in 0..n {
                    p[c * n + c] = 1.0;
                }
                Engine::Power {
                    p,
                    scratch: vec![0.0; n * n],
                    noise_acc: vec![0.0; n],
                    phi2: model.phi.iter().map(|f| f * f).collect(),
                }
            }
        };
        Ok(Self {
            g,
            alpha,
            s: model.llr_variance(),
            engine,
            started: false,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn advance(&mut self) {
        let n = self.g.n_vertices();
        match &mut self.engine {
            Engine::Eigen { powers, w2, .. } => {
                for (p, w) in powers.iter_mut().zip(w2.iter()) {
                    *p *= w;
                }
            }
            Engine::Power {
                p,
                scratch,
                noise_acc,
                phi2,
            } => {
                // Σᵢ₊₁ picks up Wⁱ R Wⁱ before Wⁱ moves on.
                for (c, acc) in noise_acc.iter_mut().enumerate() {
                    let col = &p[c * n..(c + 1) * n];
                    *acc += col.iter().zip(phi2.iter()).map(|(x, f)| x * x * f).sum::<f64>();
                }
                let (g, alpha) = (self.g, self.alpha);
                scratch
                    .par_chunks_mut(n)
                    .zip(p.par_chunks(n))
                    .for_each(|(out, col)| apply_weights(g, alpha, col, out));
                std::mem::swap(p, scratch);
            }
        }
    }

    fn current(&self) -> Vec<f64> {
        let n = self.g.n_vertices();
        match &self.engine {
            Engine::Eigen { u2, powers, .. } => (0..n)
                .map(|r| {
                    let row = &u2[r * n..(r + 1) * n];
                    self.s * row.iter().zip(powers).map(|(u, p)| u * p).sum::<f64>()
                })
                .collect(),
            Engine::Power { p, noise_acc, .. } => (0..n)
                .map(|c| {
                    let col = &p[c * n..(c + 1) * n];
                    self.s * col.iter().map(|x| x * x).sum::<f64>() + noise_acc[c]
                })
                .collect(),
        }
    }
}

impl Iterator for VarianceSequence<'_> {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        if self.started {
            self.advance();
        }
        self.started = true;
        Some(self.current())
    }
}

/// `diag(Σᵢ)` for `i = 0..=max_iter`.
pub fn state_variances(g: &Graph, model: &DetectionModel, max_iter: usize) -> Result<Vec<Vec<f64>>> {
    Ok(VarianceSequence::new(g, model, MomentMethod::Auto)?
        .take(max_iter + 1)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateMoments {
    pub means: Vec<f64>,
    pub variances: Vec<f64>,
}

/// Mean and variance of every sensor state after `i` iterations at `α*`.
pub fn analytic_state_moments(
    g: &Graph,
    model: &DetectionModel,
    i: usize,
    hypothesis: Hypothesis,
) -> Result<StateMoments> {
    let mut seq = VarianceSequence::new(g, model, MomentMethod::Auto)?;
    let alpha = seq.alpha();
    let variances = seq.nth(i).expect("sequence is unbounded");
    let mut means = vec![model.state_mean(hypothesis); g.n_vertices()];
    let mut next = vec![0.0; means.len()];
    for _ in 0..i {
        apply_weights(g, alpha, &means, &mut next);
        std::mem::swap(&mut means, &mut next);
    }
    Ok(StateMoments { means, variances })
}

/// `s[1/N + γ₂²ⁱ(1-1/N)] + φ²max[i/N + (1-γ₂²ⁱ)/(1-γ₂²)·(1-1/N)]`, `s = 4μ²/σ²`.
pub fn variance_bound(n: usize, s: f64, phi_max: f64, gamma2: f64, i: usize) -> f64 {
    let n = n as f64;
    let g2i = gamma2.powi(2 * i as i32);
    let mut bound = s * (1.0 / n + g2i * (1.0 - 1.0 / n));
    if phi_max > 0.0 {
        let geometric = if gamma2 < 1.0 {
            (1.0 - g2i) / (1.0 - gamma2 * gamma2)
        } else {
            i as f64
        };
        bound += phi_max * phi_max * (i as f64 / n + geometric * (1.0 - 1.0 / n));
    }
    bound
}

/// [`variance_bound`] with `γ₂` taken from the spectrum of `g`.
pub fn variance_upper_bound(g: &Graph, model: &DetectionModel, i: usize) -> Result<f64> {
    model.check_graph(g)?;
    let summary = spectral_summary(g)?;
    Ok(variance_bound(
        g.n_vertices(),
        model.llr_variance(),
        model.phi_max(),
        summary.gamma2,
        i,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consensus::weight_matrix;
    use crate::generators::{gen_er, gen_lps2, gen_rrl};
    use nalgebra::DMatrix;

    /// `Σᵢ₊₁ = WΣᵢW + R` with dense matrices.
    fn recursion_oracle(g: &Graph, model: &DetectionModel, iters: usize) -> Vec<Vec<f64>> {
        let n = g.n_vertices();
        let w = weight_matrix(g, optimal_alpha(g).unwrap()).into_dmatrix();
        let r = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            model.phi.iter().map(|f| f * f),
        ));
        let mut sigma = DMatrix::identity(n, n) * model.llr_variance();
        let mut out = Vec::new();
        for _ in 0..=iters {
            out.push(sigma.diagonal().iter().copied().collect());
            sigma = &w * &sigma * &w + &r;
        }
        out
    }

    fn assert_close(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) {
        for (i, (x, y)) in a.iter().zip(b).enumerate() {
            for (u, v) in x.iter().zip(y) {
                assert!((u - v).abs() <= tol * v.abs().max(1.0), "i={i}: {u} vs {v}");
            }
        }
    }

    #[test]
    fn power_and_eigen_match_the_recursion() {
        let g = gen_rrl(20, 4).unwrap();
        let m = DetectionModel::noiseless(0.8, 1.5, 20).unwrap();
        let oracle = recursion_oracle(&g, &m, 40);
        for method in [MomentMethod::Eigen, MomentMethod::Power] {
            let got: Vec<_> = VarianceSequence::new(&g, &m, method).unwrap().take(41).collect();
            assert_close(&got, &oracle, 1e-10);
        }
    }

    #[test]
    fn noisy_power_matches_the_recursion() {
        let g = gen_er(30, 4, 3).unwrap();
        if !g.is_connected() {
            return;
        }
        let phi: Vec<f64> = (0..30).map(|j| 0.05 * (j % 7) as f64).collect();
        let m = DetectionModel::new(1.0, 2.0, phi).unwrap();
        let oracle = recursion_oracle(&g, &m, 30);
        let got: Vec<_> = VarianceSequence::new(&g, &m, MomentMethod::Auto).unwrap().take(31).collect();
        assert_close(&got, &oracle, 1e-10);
        assert!(VarianceSequence::new(&g, &m, MomentMethod::Eigen).is_err());
    }

    #[test]
    fn initial_and_limiting_variances() {
        let g = Graph::complete(10).unwrap();
        let m = DetectionModel::noiseless(1.0, 2.0, 10).unwrap();
        let s = m.llr_variance();
        let v0 = analytic_state_moments(&g, &m, 0, Hypothesis::H1).unwrap().variances;
        assert!(v0.iter().all(|&v| (v - s).abs() < 1e-14));
        let v1 = analytic_state_moments(&g, &m, 1, Hypothesis::H1).unwrap().variances;
        assert!(v1.iter().all(|&v| (v - s / 10.0).abs() < 1e-12));
        let v200 = analytic_state_moments(&g, &m, 200, Hypothesis::H0).unwrap().variances;
        assert!(v200.iter().all(|&v| (v - s / 10.0).abs() < 1e-12));
    }

    #[test]
    fn means_are_preserved() {
        let g = gen_lps2(5, 41).unwrap();
        let m = DetectionModel::uniform_noise(1.3, 0.7, 42, 0.2).unwrap();
        for h in [Hypothesis::H0, Hypothesis::H1] {
            for i in [0, 1, 5, 30] {
                let mom = analytic_state_moments(&g, &m, i, h).unwrap();
                let want = m.state_mean(h);
                assert!(mom.means.iter().all(|&x| (x - want).abs() < 1e-9));
            }
        }
    }

    #[test]
    fn bound_examples() {
        assert_eq!(variance_bound(50, 4.0, 0.3, 0.6, 0), 4.0);
        assert_eq!(variance_bound(50, 4.0, 0.0, 0.6, 0), 4.0);
        let b = variance_bound(1000, 4.0, 0.1, 0.7, 17);
        assert!((b - 0.0238).abs() < 1e-4, "{b}");
    }

    #[test]
    fn bound_dominates_exact_variances() {
        let g = gen_lps2(5, 41).unwrap();
        let phi: Vec<f64> = (0..42).map(|j| 0.01 * j as f64).collect();
        for m in [
            DetectionModel::noiseless(1.0, 1.0, 42).unwrap(),
            DetectionModel::new(1.0, 1.0, phi).unwrap(),
        ] {
            let seq = VarianceSequence::new(&g, &m, MomentMethod::Auto).unwrap();
            for (i, vars) in seq.take(101).enumerate() {
                let bound = variance_upper_bound(&g, &m, i).unwrap();
                let worst = vars.iter().copied().fold(0.0, f64::max);
                assert!(worst <= bound + 1e-9, "i={i}: {worst} > {bound}");
            }
        }
    }

    #[test]
    fn rejects_mismatched_models() {
        let g = Graph::cycle(5).unwrap();
        let m = DetectionModel::noiseless(1.0, 1.0, 6).unwrap();
        assert!(VarianceSequence::new(&g, &m, MomentMethod::Auto).is_err());
        let split = Graph::cycle(3).unwrap().disjoint_union(&Graph::cycle(3).unwrap());
        let m = DetectionModel::noiseless(1.0, 1.0, 6).unwrap();
        assert!(matches!(
            VarianceSequence::new(&split, &m, MomentMethod::Auto),
            Err(Error::Disconnected)
        ));
    }
}
