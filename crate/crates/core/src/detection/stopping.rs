//! When to stop iterating over noisy links.
//!
//! With channel noise the variance bound first falls geometrically and then
//! grows linearly in the iteration count. Treating the bound as a function
//! `f(z)` of a real iteration count gives a convex curve with a closed-form
//! minimizer `z*`.

use serde::{Deserialize, Serialize};

use super::DetectionModel;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::spectral_summary;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StoppingProblem {
    pub n_sensors: usize,
    /// `μ²/σ²`
    pub snr: f64,
    pub gamma2: f64,
    pub phi_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StoppingOutcome {
    /// `f` is convex with an interior minimizer.
    Minimizer,
    /// `φ_max = 0`: `f` decreases forever, run the whole budget.
    Noiseless,
    /// `4μ²/σ² <= φ²max/(1-γ₂²)`: iterating never helps.
    AssumptionViolated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StoppingAnalysis {
    pub gamma2: f64,
    pub outcome: StoppingOutcome,
    pub z_star: Option<f64>,
    pub i_star: usize,
    pub f_floor: f64,
    pub f_ceil: f64,
    pub worthwhile: bool,
    /// `(4μ²/σ²) / f(i*)`
    pub reduction_factor: f64,
}

impl StoppingAnalysis {
    pub fn assumption_holds(&self) -> bool {
        self.outcome != StoppingOutcome::AssumptionViolated
    }

    pub fn reduction_db(&self) -> f64 {
        10.0 * self.reduction_factor.log10()
    }
}

impl StoppingProblem {
    pub fn new(n_sensors: usize, snr: f64, gamma2: f64, phi_max: f64) -> Result<Self> {
        let p = Self {
            n_sensors,
            snr,
            gamma2,
            phi_max,
        };
        p.validate()?;
        Ok(p)
    }

    /// Reads `γ₂` off the spectrum of `g`.
    pub fn from_graph(g: &Graph, model: &DetectionModel) -> Result<Self> {
        model.check_graph(g)?;
        let summary = spectral_summary(g)?;
        Self::new(g.n_vertices(), model.snr(), summary.gamma2, model.phi_max())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sensors < 2 {
            return Err(Error::invalid("stopping analysis needs at least two sensors"));
        }
        if !(self.snr > 0.0) || !self.snr.is_finite() {
            return Err(Error::invalid(format!("snr must be positive, got {}", self.snr)));
        }
        if !(self.gamma2 > 0.0 && self.gamma2 < 1.0) {
            return Err(Error::invalid(format!("gamma2 must lie in (0, 1), got {}", self.gamma2)));
        }
        if !(self.phi_max >= 0.0) || !self.phi_max.is_finite() {
            return Err(Error::invalid(format!("phi_max must be >= 0, got {}", self.phi_max)));
        }
        Ok(())
    }

    /// `4μ²/σ²`
    pub fn s(&self) -> f64 {
        4.0 * self.snr
    }

    /// `φ²max/(1-γ₂²)`, the steady noise floor of a single node.
    fn noise_floor(&self) -> f64 {
        self.phi_max * self.phi_max / (1.0 - self.gamma2 * self.gamma2)
    }

    pub fn assumption_holds(&self) -> bool {
        self.s() > self.noise_floor()
    }

    /// The variance bound at a real iteration count `z`.
    pub fn objective(&self, z: f64) -> f64 {
        let n = self.n_sensors as f64;
        let phi2 = self.phi_max * self.phi_max;
        let s = self.s();
        let floor = self.noise_floor();
        (s / n + floor * (1.0 - 1.0 / n))
            + (1.0 - 1.0 / n) * (s - floor) * self.gamma2.powf(2.0 * z)
            + phi2 * z / n
    }

    /// Closed-form minimizer of [`objective`](Self::objective); `None` when
    /// there is no noise or the assumption fails.
    pub fn z_star(&self) -> Option<f64> {
        if self.phi_max == 0.0 || !self.assumption_holds() {
            return None;
        }
        let n = self.n_sensors as f64;
        let phi2 = self.phi_max * self.phi_max;
        let ln_g = self.gamma2.ln();
        let arg = phi2 / (2.0 * (-ln_g) * (n - 1.0) * (self.s() - self.noise_floor()));
        Some(arg.ln() / (2.0 * ln_g))
    }
}

/// Stopping rule for `problem`; `budget` caps the iteration count and is the
/// answer when links are noiseless.
pub fn optimal_stopping(problem: &StoppingProblem, budget: usize) -> Result<StoppingAnalysis> {
    problem.validate()?;
    let s = problem.s();
    let f = |i: usize| problem.objective(i as f64);
    let (outcome, z_star, i_star, f_floor, f_ceil) = if problem.phi_max == 0.0 {
        let fb = f(budget);
        (StoppingOutcome::Noiseless, None, budget, fb, fb)
    } else if !problem.assumption_holds() {
        (StoppingOutcome::AssumptionViolated, None, 0, s, s)
    } else {
        let z = problem.z_star().expect("assumption holds");
        let zc = z.max(0.0);
        let lo = (zc.floor() as usize).min(budget);
        let hi = (zc.ceil() as usize).min(budget);
        (StoppingOutcome::Minimizer, Some(z), lo, f(lo), f(hi))
    };
    let best = f_floor.min(f_ceil);
    Ok(StoppingAnalysis {
        gamma2: problem.gamma2,
        outcome,
        z_star,
        i_star,
        f_floor,
        f_ceil,
        worthwhile: best < s,
        reduction_factor: s / f_floor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::variance_bound;

    fn reference_problem(phi: f64) -> StoppingProblem {
        StoppingProblem::new(1000, 1.0, 0.7, phi).unwrap()
    }

    #[test]
    fn low_noise_example() {
        let a = optimal_stopping(&reference_problem(0.1), 1000).unwrap();
        assert_eq!(a.outcome, StoppingOutcome::Minimizer);
        let z = a.z_star.unwrap();
        // closed form evaluated independently
        assert!((z - 17.600_79).abs() < 1e-4, "{z}");
        assert_eq!(a.i_star, 17);
        assert!((a.f_floor - 0.023_779_8).abs() < 1e-6);
        assert!((a.f_ceil - 0.023_778_8).abs() < 1e-6);
        assert!((a.reduction_factor - 168.21).abs() < 0.01);
        assert!(a.worthwhile);
    }

    #[test]
    fn higher_noise_example() {
        let a = optimal_stopping(&reference_problem(0.3162), 1000).unwrap();
        assert!((a.z_star.unwrap() - 14.3096).abs() < 1e-3);
        assert_eq!(a.i_star, 14);
        assert!((a.f_floor - 0.201_423).abs() < 1e-5);
        assert!((a.reduction_factor - 19.8588).abs() < 1e-3);
        assert!((a.reduction_db() - 12.98).abs() < 0.01);
    }

    #[test]
    fn objective_is_the_bound_at_integers() {
        let p = reference_problem(0.2);
        for i in 0..60 {
            let want = variance_bound(1000, 4.0, 0.2, 0.7, i);
            assert!((p.objective(i as f64) - want).abs() < 1e-12 * want.max(1.0));
        }
        assert!((p.objective(0.0) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn z_star_is_stationary() {
        for phi in [0.05, 0.1, 0.3162, 0.8] {
            let p = reference_problem(phi);
            let z = p.z_star().unwrap();
            let h = 1e-4;
            let d = (p.objective(z + h) - p.objective(z - h)) / (2.0 * h);
            assert!(d.abs() < 1e-6, "phi={phi}: f'(z*) = {d}");
            for dz in [-2.0, -0.5, 0.5, 2.0] {
                assert!(p.objective(z + dz) > p.objective(z));
            }
        }
    }

    #[test]
    fn objective_is_convex() {
        for phi in [0.01, 0.1, 0.5, 1.0] {
            let p = reference_problem(phi);
            assert!(p.assumption_holds());
            for a in 0..40 {
                for b in (a + 1)..40 {
                    let (z1, z2) = (a as f64 * 1.5, b as f64 * 1.5);
                    let mid = p.objective(0.5 * (z1 + z2));
                    assert!(mid <= 0.5 * (p.objective(z1) + p.objective(z2)) + 1e-12);
                }
            }
        }
    }

    #[test]
    fn noiseless_runs_the_whole_budget() {
        let a = optimal_stopping(&reference_problem(0.0), 250).unwrap();
        assert_eq!(a.outcome, StoppingOutcome::Noiseless);
        assert_eq!(a.z_star, None);
        assert_eq!(a.i_star, 250);
        assert!(a.worthwhile);
    }

    #[test]
    fn violated_assumption_is_flagged() {
        // φ²/(1-γ₂²) = 4/0.51 > 4
        let a = optimal_stopping(&reference_problem(2.0), 100).unwrap();
        assert_eq!(a.outcome, StoppingOutcome::AssumptionViolated);
        assert!(!a.assumption_holds());
        assert_eq!(a.z_star, None);
        assert_eq!(a.i_star, 0);
        assert!(!a.worthwhile);
    }

    #[test]
    fn budget_caps_the_answer() {
        let a = optimal_stopping(&reference_problem(0.1), 5).unwrap();
        assert_eq!(a.i_star, 5);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(StoppingProblem::new(1, 1.0, 0.7, 0.1).is_err());
        assert!(StoppingProblem::new(10, 0.0, 0.7, 0.1).is_err());
        assert!(StoppingProblem::new(10, 1.0, 1.0, 0.1).is_err());
        assert!(StoppingProblem::new(10, 1.0, 0.7, -0.1).is_err());
    }
}
