//! Monte Carlo error rates of the consensus detector next to the exact ones.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::moments::{variance_bound, MomentMethod, VarianceSequence};
use super::{local_llr, DetectionModel, Hypothesis};
use crate::consensus::apply_weights;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::stream_rng;
use crate::spectral::spectral_summary;

/// Trials per RNG stream. Fixed so results do not depend on thread count.
pub const TRIALS_PER_CHUNK: usize = 1024;

/// Per-iteration, per-node error probabilities; every `Vec<Vec<f64>>` is
/// indexed `[i][n]` for `i = 0..=max_iter`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeCurve {
    pub trials: usize,
    pub analytic: Vec<Vec<f64>>,
    pub empirical: Vec<Vec<f64>>,
    /// Binomial standard error of `empirical`, using the analytic rates so
    /// that it stays positive where no errors were observed.
    pub std_error: Vec<Vec<f64>>,
    pub variance_bound: Vec<f64>,
    pub max_variance: Vec<f64>,
}

fn node_mean(rows: &[Vec<f64>]) -> Vec<f64> {
    rows.iter()
        .map(|r| r.iter().sum::<f64>() / r.len() as f64)
        .collect()
}

impl PeCurve {
    pub fn max_iter(&self) -> usize {
        self.analytic.len() - 1
    }

    pub fn mean_analytic(&self) -> Vec<f64> {
        node_mean(&self.analytic)
    }

    pub fn mean_empirical(&self) -> Vec<f64> {
        node_mean(&self.empirical)
    }

    /// Node-averaged standard errors. Averaging correlated nodes cannot
    /// increase the spread, so this bounds the error of the node mean.
    pub fn mean_std_error(&self) -> Vec<f64> {
        node_mean(&self.std_error)
    }

    /// Largest `|empirical - analytic|` of the node means, in units of
    /// [`mean_std_error`](Self::mean_std_error).
    pub fn max_mean_deviation(&self) -> f64 {
        let a = self.mean_analytic();
        let e = self.mean_empirical();
        let se = self.mean_std_error();
        a.iter()
            .zip(&e)
            .zip(&se)
            .map(|((a, e), s)| if *s > 0.0 { (a - e).abs() / s } else if a == e { 0.0 } else { f64::INFINITY })
            .fold(0.0, f64::max)
    }
}

/// Simulates `trials` runs under each hypothesis for `max_iter` iterations
/// at `α*` and compares the error rates with the exact Gaussian ones.
pub fn empirical_pe_curve(
    g: &Graph,
    model: &DetectionModel,
    max_iter: usize,
    trials: usize,
    seed: u64,
) -> Result<PeCurve> {
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    let seq = VarianceSequence::new(g, model, MomentMethod::Auto)?;
    let alpha = seq.alpha();
    let variances: Vec<Vec<f64>> = seq.take(max_iter + 1).collect();
    let n = g.n_vertices();

    let gamma2 = spectral_summary(g)?.gamma2;

    let chunks = trials.div_ceil(TRIALS_PER_CHUNK);
    // errors[h][i * n + v]
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let size = TRIALS_PER_CHUNK.min(trials - c * TRIALS_PER_CHUNK);
            simulate_chunk(g, model, alpha, max_iter, size, seed, c as u64)
        })
        .reduce(
            || [vec![0u64; (max_iter + 1) * n], vec![0u64; (max_iter + 1) * n]],
            |mut a, b| {
                for h in 0..2 {
                    for (x, y) in a[h].iter_mut().zip(&b[h]) {
                        *x += y;
                    }
                }
                a
            },
        );

    let t = trials as f64;
    let mut analytic = Vec::with_capacity(max_iter + 1);
    let mut empirical = Vec::with_capacity(max_iter + 1);
    let mut std_error = Vec::with_capacity(max_iter + 1);
    for (i, vars) in variances.iter().enumerate() {
        let mut a_row = Vec::with_capacity(n);
        let mut e_row = Vec::with_capacity(n);
        let mut s_row = Vec::with_capacity(n);
        for (v, &var) in vars.iter().enumerate() {
            let (fa, miss) = model.error_probabilities(var);
            a_row.push(0.5 * (fa + miss));
            let k = i * n + v;
            e_row.push(0.5 * (counts[0][k] + counts[1][k]) as f64 / t);
            s_row.push(0.5 * ((fa * (1.0 - fa) + miss * (1.0 - miss)) / t).sqrt());
        }
        analytic.push(a_row);
        empirical.push(e_row);
        std_error.push(s_row);
    }
    let s = model.llr_variance();
    let phi_max = model.phi_max();
    Ok(PeCurve {
        trials,
        analytic,
        empirical,
        std_error,
        variance_bound: (0..=max_iter)
            .map(|i| variance_bound(n, s, phi_max, gamma2, i))
            .collect(),
        max_variance: variances
            .iter()
            .map(|v| v.iter().copied().fold(0.0, f64::max))
            .collect(),
    })
}

/// Error counts for one chunk: `[under H0, under H1]`, each `[i * n + v]`.
fn simulate_chunk(
    g: &Graph,
    model: &DetectionModel,
    alpha: f64,
    max_iter: usize,
    size: usize,
    seed: u64,
    chunk: u64,
) -> [Vec<u64>; 2] {
    let n = g.n_vertices();
    let mut rng = stream_rng(seed, chunk);
    let sigma = model.sigma2.sqrt();
    let noisy = !model.is_noiseless();
    let mut counts = [vec![0u64; (max_iter + 1) * n], vec![0u64; (max_iter + 1) * n]];
    let mut x = vec![0.0; n];
    let mut next = vec![0.0; n];
    for _ in 0..size {
        for (h, hyp) in [Hypothesis::H0, Hypothesis::H1].into_iter().enumerate() {
            let level = hyp.sign() * model.mu;
            for xv in x.iter_mut() {
                let z: f64 = StandardNormal.sample(&mut rng);
                *xv = local_llr(level + sigma * z, model);
            }
            for i in 0..=max_iter {
                if i > 0 {
                    apply_weights(g, alpha, &x, &mut next);
                    if noisy {
                        for (v, phi) in next.iter_mut().zip(&model.phi) {
                            let z: f64 = StandardNormal.sample(&mut rng);
                            *v += phi * z;
                        }
                    }
                    std::mem::swap(&mut x, &mut next);
                }
                let row = &mut counts[h][i * n..(i + 1) * n];
                for (c, &xv) in row.iter_mut().zip(&x) {
                    let says_h1 = xv > model.threshold;
                    if says_h1 != (hyp == Hypothesis::H1) {
                        *c += 1;
                    }
                }
            }
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::{parallel_fusion_pe, q_function};
    use crate::generators::gen_rrl;

    #[test]
    fn start_is_the_single_sensor_detector() {
        let g = gen_rrl(12, 4).unwrap();
        let m = DetectionModel::noiseless(0.6, 1.0, 12).unwrap();
        let c = empirical_pe_curve(&g, &m, 3, 10, 1).unwrap();
        for p in &c.analytic[0] {
            assert!((p - q_function(0.6)).abs() < 1e-14);
        }
    }

    #[test]
    fn complete_graph_fuses_in_one_step() {
        let g = Graph::complete(8).unwrap();
        let m = DetectionModel::noiseless(0.5, 1.0, 8).unwrap();
        let c = empirical_pe_curve(&g, &m, 2, 10, 1).unwrap();
        let pe = parallel_fusion_pe(&m);
        for p in &c.analytic[1] {
            assert!((p - pe).abs() < 1e-12);
        }
    }

    #[test]
    fn monte_carlo_agrees_with_exact_rates() {
        let g = gen_rrl(16, 4).unwrap();
        let m = DetectionModel::uniform_noise(0.4, 1.0, 16, 0.3).unwrap();
        let c = empirical_pe_curve(&g, &m, 10, 20_000, 7).unwrap();
        assert!(c.max_mean_deviation() < 3.0, "{}", c.max_mean_deviation());
        for (v, b) in c.max_variance.iter().zip(&c.variance_bound) {
            assert!(v <= &(b + 1e-9));
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let g = gen_rrl(10, 2).unwrap();
        let m = DetectionModel::uniform_noise(0.5, 1.0, 10, 0.1).unwrap();
        let a = empirical_pe_curve(&g, &m, 4, 3000, 11).unwrap();
        let b = empirical_pe_curve(&g, &m, 4, 3000, 11).unwrap();
        assert_eq!(a, b);
        let c = empirical_pe_curve(&g, &m, 4, 3000, 12).unwrap();
        assert_ne!(a.empirical, c.empirical);
    }

    #[test]
    fn llr_mean_under_h1() {
        let m = DetectionModel::noiseless(1.0, 1.0, 1).unwrap();
        let mut rng = stream_rng(5, 0);
        let draws = 100_000;
        let sum: f64 = (0..draws)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                local_llr(1.0 + z, &m)
            })
            .sum();
        let mean = sum / draws as f64;
        // llr variance is 4
        let se = 2.0 / (draws as f64).sqrt();
        assert!((mean - 2.0).abs() < 3.0 * se, "{mean}");
    }
}
