//! Equal-weight average consensus, `x_{i+1} = W x_i (+ n_i)` with
//! `W = I - αL`.

use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, SymmetricMatrix};
use crate::rng::TopoRng;
use crate::spectral::{graph_laplacian_extremes, EigenStrategy};

/// `W = I - αL`, dense.
pub fn weight_matrix(g: &Graph, alpha: f64) -> SymmetricMatrix {
    let l = g.laplacian().into_dmatrix();
    let n = g.n_vertices();
    let w = nalgebra::DMatrix::identity(n, n) - l * alpha;
    SymmetricMatrix::from_dmatrix(w).expect("I - αL is symmetric")
}

/// `α* = 2/(λ₂ + λ_N)`, the equal weight with the fastest contraction.
pub fn optimal_alpha(g: &Graph) -> Result<f64> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let (l2, ln) = graph_laplacian_extremes(g, EigenStrategy::Auto)?;
    if ln == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 / (l2 + ln))
}

/// `y = W x = x - α L x`.
pub fn apply_weights(g: &Graph, alpha: f64, x: &[f64], y: &mut [f64]) {
    g.laplacian_apply(x, y);
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi = xi - alpha * *yi;
    }
}

#[derive(Debug, Clone)]
pub struct ConsensusConfig<'a> {
    pub graph: &'a Graph,
    pub alpha: f64,
    pub max_iterations: usize,
    /// Per-node channel-noise standard deviations `φ_n`.
    pub noise_stddevs: Option<Vec<f64>>,
    pub seed: u64,
}

impl<'a> ConsensusConfig<'a> {
    /// Noiseless run with `α = α*`.
    pub fn new(graph: &'a Graph, max_iterations: usize) -> Result<Self> {
        Ok(Self {
            graph,
            alpha: optimal_alpha(graph)?,
            max_iterations,
            noise_stddevs: None,
            seed: 0,
        })
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_noise(mut self, stddevs: Vec<f64>, seed: u64) -> Self {
        self.noise_stddevs = Some(stddevs);
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.graph.is_connected() {
            return Err(Error::Disconnected);
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::invalid(format!("consensus weight must be positive, got {}", self.alpha)));
        }
        if let Some(phi) = &self.noise_stddevs {
            if phi.len() != self.graph.n_vertices() {
                return Err(Error::DimensionMismatch {
                    expected: self.graph.n_vertices(),
                    got: phi.len(),
                });
            }
            if phi.iter().any(|&s| !(s >= 0.0) || !s.is_finite()) {
                return Err(Error::invalid("noise standard deviations must be finite and >= 0"));
            }
        }
        Ok(())
    }

    /// Worst-case per-step contraction of the disagreement,
    /// `max(|1 - αλ₂|, |1 - αλ_N|)`; equals `γ₂` at `α = α*`.
    pub fn contraction_factor(&self) -> Result<f64> {
        let (l2, ln) = graph_laplacian_extremes(self.graph, EigenStrategy::Auto)?;
        Ok((1.0 - self.alpha * l2).abs().max((1.0 - self.alpha * ln).abs()))
    }
}

/// Trajectory of a consensus run with its convergence diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsensusRun {
    /// `x_0, …, x_T`.
    pub states: Vec<Vec<f64>>,
    /// Mean of `x_0`.
    pub target_mean: f64,
    /// `‖x_i - r̄·1‖`.
    pub deviation_norms: Vec<f64>,
    /// `‖x_0 - r̄·1‖ · ρⁱ` with `ρ` the contraction factor.
    pub bound_values: Vec<f64>,
    pub contraction_factor: f64,
}

fn deviation_norm(x: &[f64], mean: f64) -> f64 {
    x.iter().map(|v| (v - mean).powi(2)).sum::<f64>().sqrt()
}

/// Runs `max_iterations` steps from `x0`.
///
/// Channel noise, when configured, is `φ_n · z` with `z` standard normal,
/// drawn node by node within each iteration from a single ChaCha8 stream
/// seeded with `cfg.seed`.
pub fn run_consensus(cfg: &ConsensusConfig<'_>, x0: &[f64]) -> Result<ConsensusRun> {
    cfg.validate()?;
    let g = cfg.graph;
    let n = g.n_vertices();
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x0.len(),
        });
    }
    let rho = cfg.contraction_factor()?;
    let mean = x0.iter().sum::<f64>() / n as f64;
    let d0 = deviation_norm(x0, mean);
    let noise = cfg.noise_stddevs.as_deref().filter(|phi| phi.iter().any(|&s| s > 0.0));
    let mut rng = TopoRng::seed_from_u64(cfg.seed);

    let mut states = Vec::with_capacity(cfg.max_iterations + 1);
    let mut deviation_norms = Vec::with_capacity(cfg.max_iterations + 1);
    let mut bound_values = Vec::with_capacity(cfg.max_iterations + 1);
    states.push(x0.to_vec());
    deviation_norms.push(d0);
    bound_values.push(d0);

    let mut next = vec![0.0; n];
    for i in 1..=cfg.max_iterations {
        apply_weights(g, cfg.alpha, states.last().unwrap(), &mut next);
        if let Some(phi) = noise {
            for (v, s) in next.iter_mut().zip(phi) {
                let z: f64 = StandardNormal.sample(&mut rng);
                *v += s * z;
            }
        }
        deviation_norms.push(deviation_norm(&next, mean));
        bound_values.push(d0 * rho.powi(i as i32));
        states.push(next.clone());
    }

    Ok(ConsensusRun {
        states,
        target_mean: mean,
        deviation_norms,
        bound_values,
        contraction_factor: rho,
    })
}

/// First iteration with `‖x_i - x̄‖ <= rel_tol · ‖x_0 - x̄‖`; `None` when the
/// run ends first.
pub fn convergence_time(run: &ConsensusRun, rel_tol: f64) -> Option<usize> {
    let d0 = run.deviation_norms[0];
    run.deviation_norms.iter().position(|&d| d <= rel_tol * d0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_weights_average_in_one_step() {
        let g = Graph::complete(5).unwrap();
        let alpha = optimal_alpha(&g).unwrap();
        assert!((alpha - 0.2).abs() < 1e-12);
        let w = weight_matrix(&g, alpha);
        for i in 0..5 {
            for j in 0..5 {
                assert!((w.get(i, j) - 0.2).abs() < 1e-12);
            }
        }
        let cfg = ConsensusConfig::new(&g, 3).unwrap();
        let run = run_consensus(&cfg, &[1.0, 2.0, 3.0, 4.0, 10.0]).unwrap();
        assert!(run.states[1].iter().all(|&x| (x - 4.0).abs() < 1e-12));
        assert!(run.deviation_norms[1] < 1e-12);
        assert_eq!(convergence_time(&run, 0.5), Some(1));
    }

    #[test]
    fn zero_weight_is_identity() {
        let g = Graph::cycle(5).unwrap();
        assert_eq!(weight_matrix(&g, 0.0), SymmetricMatrix::identity(5));
    }

    #[test]
    fn weight_matrix_rows_sum_to_one() {
        let g = Graph::path(6).unwrap();
        let w = weight_matrix(&g, 0.3);
        assert!(w.row_sums().iter().all(|s| (s - 1.0).abs() < 1e-12));
    }

    #[test]
    fn four_cycle_spectrum_and_rate() {
        let g = Graph::cycle(4).unwrap();
        let alpha = optimal_alpha(&g).unwrap();
        assert!((alpha - 1.0 / 3.0).abs() < 1e-12);
        let ev = weight_matrix(&g, alpha).eigenvalues();
        for (got, want) in ev.iter().zip([-1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let cfg = ConsensusConfig::new(&g, 50).unwrap();
        let run = run_consensus(&cfg, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((run.target_mean - 0.25).abs() < 1e-15);
        assert!((run.contraction_factor - 1.0 / 3.0).abs() < 1e-12);
        for (d, b) in run.deviation_norms.iter().zip(&run.bound_values) {
            assert!(*d <= b + 1e-9);
        }
        let t = convergence_time(&run, 1e-3).unwrap();
        // ⌈ln(1e-3) / ln(1/3)⌉ = 7
        assert!(t <= 7, "{t}");
    }

    #[test]
    fn consensus_is_a_fixed_point() {
        let g = Graph::cycle(7).unwrap();
        let run = run_consensus(&ConsensusConfig::new(&g, 10).unwrap(), &[2.5; 7]).unwrap();
        assert!(run.states.iter().all(|s| s.iter().all(|&x| (x - 2.5).abs() < 1e-14)));
        assert_eq!(convergence_time(&run, 1e-6), Some(0));
    }

    #[test]
    fn not_reached_is_none() {
        let g = Graph::cycle(40).unwrap();
        let run = run_consensus(&ConsensusConfig::new(&g, 3).unwrap(), &(0..40).map(f64::from).collect::<Vec<_>>()).unwrap();
        assert_eq!(convergence_time(&run, 1e-6), None);
    }

    #[test]
    fn noisy_runs_are_seeded() {
        let g = Graph::cycle(6).unwrap();
        let cfg = ConsensusConfig::new(&g, 20).unwrap().with_noise(vec![0.1; 6], 4);
        let x0 = [1.0, -1.0, 0.0, 2.0, 0.5, 0.0];
        let a = run_consensus(&cfg, &x0).unwrap();
        let b = run_consensus(&cfg, &x0).unwrap();
        assert_eq!(a, b);
        let clean = run_consensus(&ConsensusConfig::new(&g, 20).unwrap(), &x0).unwrap();
        assert_ne!(a.states[20], clean.states[20]);
    }

    #[test]
    fn config_errors() {
        let g = Graph::cycle(4).unwrap();
        let cfg = ConsensusConfig::new(&g, 5).unwrap();
        assert!(matches!(
            run_consensus(&cfg, &[1.0, 2.0]),
            Err(Error::DimensionMismatch { expected: 4, got: 2 })
        ));
        let bad = cfg.clone().with_noise(vec![0.1; 3], 0);
        assert!(run_consensus(&bad, &[0.0; 4]).is_err());
        let bad = cfg.clone().with_alpha(-1.0);
        assert!(run_consensus(&bad, &[0.0; 4]).is_err());
        let split = Graph::simple(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(optimal_alpha(&split), Err(Error::Disconnected)));
    }
}
