//! Distributed detection of a Gaussian binary hypothesis by average consensus.
//!
//! Sensor `n` measures `y_n = μ_m + ξ_n`, `ξ_n ~ N(0, σ²)`, with `μ₁ = μ`
//! (target present) and `μ₀ = -μ`. It starts from its local log-likelihood
//! ratio `r_n = 2μ y_n / σ²` and runs consensus with `α = α*` over links that
//! may add Gaussian noise of standard deviation `φ_n`. Each sensor decides
//! `H₁` when its state exceeds the threshold `υ` (0 by default).
//!
//! Under `H_m` the states stay Gaussian with mean `2μμ_m/σ²`, so error
//! probabilities are computed exactly from the state variances
//! ([`moments`]); Monte Carlo ([`montecarlo`]) is the cross-check.

pub mod moments;
pub mod montecarlo;
pub mod stopping;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use moments::{
    analytic_state_moments, state_variances, variance_bound, variance_upper_bound,
    MomentMethod, StateMoments, VarianceSequence,
};
pub use montecarlo::{empirical_pe_curve, PeCurve};
pub use stopping::{optimal_stopping, StoppingAnalysis, StoppingOutcome, StoppingProblem};

/// Upper tail of the standard normal, `Q(x) = erfc(x/√2)/2`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hypothesis {
    H0,
    H1,
}

impl Hypothesis {
    /// `μ_m / μ`.
    pub fn sign(&self) -> f64 {
        match self {
            Hypothesis::H0 => -1.0,
            Hypothesis::H1 => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionModel {
    pub mu: f64,
    pub sigma2: f64,
    /// Per-sensor channel-noise standard deviations; its length is `N`.
    pub phi: Vec<f64>,
    #[serde(default)]
    pub threshold: f64,
}

impl DetectionModel {
    /// Noiseless links, threshold 0.
    pub fn noiseless(mu: f64, sigma2: f64, n_sensors: usize) -> Result<Self> {
        Self::new(mu, sigma2, vec![0.0; n_sensors])
    }

    /// Identical noise level `phi` on every link.
    pub fn uniform_noise(mu: f64, sigma2: f64, n_sensors: usize, phi: f64) -> Result<Self> {
        Self::new(mu, sigma2, vec![phi; n_sensors])
    }

    pub fn new(mu: f64, sigma2: f64, phi: Vec<f64>) -> Result<Self> {
        let m = Self {
            mu,
            sigma2,
            phi,
            threshold: 0.0,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0) || !self.mu.is_finite() {
            return Err(Error::invalid(format!("mu must be positive, got {}", self.mu)));
        }
        if !(self.sigma2 > 0.0) || !self.sigma2.is_finite() {
            return Err(Error::invalid(format!("sigma2 must be positive, got {}", self.sigma2)));
        }
        if self.phi.is_empty() {
            return Err(Error::invalid("model needs at least one sensor"));
        }
        if self.phi.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(Error::invalid("channel noise levels must be finite and >= 0"));
        }
        Ok(())
    }

    pub fn n_sensors(&self) -> usize {
        self.phi.len()
    }

    pub fn phi_max(&self) -> f64 {
        self.phi.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_noiseless(&self) -> bool {
        self.phi.iter().all(|&p| p == 0.0)
    }

    /// `μ²/σ²`.
    pub fn snr(&self) -> f64 {
        self.mu * self.mu / self.sigma2
    }

    /// Variance of a local LLR, `4μ²/σ²`.
    pub fn llr_variance(&self) -> f64 {
        4.0 * self.snr()
    }

    /// Mean of every state under `h`, `2μμ_m/σ²`.
    pub fn state_mean(&self, h: Hypothesis) -> f64 {
        2.0 * self.mu * self.mu * h.sign() / self.sigma2
    }

    pub(crate) fn check_graph(&self, g: &Graph) -> Result<()> {
        self.validate()?;
        if g.n_vertices() != self.n_sensors() {
            return Err(Error::DimensionMismatch {
                expected: g.n_vertices(),
                got: self.n_sensors(),
            });
        }
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(())
    }

    /// Error probabilities `(P(decide H1 | H0), P(decide H0 | H1))` of a
    /// state with variance `var`.
    pub fn error_probabilities(&self, var: f64) -> (f64, f64) {
        let sd = var.sqrt();
        let false_alarm = q_function((self.threshold - self.state_mean(Hypothesis::H0)) / sd);
        let miss = q_function((self.state_mean(Hypothesis::H1) - self.threshold) / sd);
        (false_alarm, miss)
    }

    /// Average error probability under equal priors of a state with
    /// variance `var`.
    pub fn error_probability(&self, var: f64) -> f64 {
        let (false_alarm, miss) = self.error_probabilities(var);
        0.5 * (false_alarm + miss)
    }
}

/// Local log-likelihood ratio `ln f(y|H₁)/f(y|H₀) = 2μy/σ²`.
pub fn local_llr(y: f64, model: &DetectionModel) -> f64 {
    2.0 * model.mu * y / model.sigma2
}

/// Minimum error probability of the centralized (parallel fusion) detector:
/// `Q(d/2)` with `d = 2μ√N/σ`.
pub fn parallel_fusion_pe(model: &DetectionModel) -> f64 {
    let d = 2.0 * model.mu * (model.n_sensors() as f64).sqrt() / model.sigma2.sqrt();
    q_function(d / 2.0)
}

/// Noiseless convergence time: first iteration at which the node-averaged
/// analytic error probability is within 10% (relative) of the fusion-center
/// error probability. `None` if `max_iter` is reached first.
pub fn detection_convergence_time(
    g: &Graph,
    model: &DetectionModel,
    max_iter: usize,
) -> Result<Option<usize>> {
    if !model.is_noiseless() {
        return Err(Error::invalid(
            "convergence time is defined for noiseless links only",
        ));
    }
    let target = 1.1 * parallel_fusion_pe(model);
    let seq = VarianceSequence::new(g, model, MomentMethod::Auto)?;
    for (i, vars) in seq.take(max_iter + 1).enumerate() {
        let mean_pe =
            vars.iter().map(|&v| model.error_probability(v)).sum::<f64>() / vars.len() as f64;
        if mean_pe <= target {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// `S_c = 1/T_c`. `None` when the budget ran out, and also for `T_c = 0`
/// (a single measurement is already good enough, so no speed is defined).
pub fn convergence_speed(tc: Option<usize>) -> Option<f64> {
    match tc {
        Some(t) if t > 0 => Some(1.0 / t as f64),
        _ => None,
    }
}
