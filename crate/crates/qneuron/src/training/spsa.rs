//! Simultaneous perturbation stochastic approximation.
//!
//! Each iteration evaluates the cost twice, at θ ± c_k Δ with a Rademacher
//! direction Δ, estimates the gradient as (y⁺ - y⁻)/(2 c_k) · Δ and descends
//! with gain a_k. Gain schedules: a_k = a/(k+1+A)^α and c_k = c/(k+1)^γ.
//! Deterministic for a fixed seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::training::OptimizerRun;

/// Gains and budget for an SPSA run. The defaults follow the common
/// recommendation α = 0.602, γ = 0.101 with A set to a tenth of the budget.
#[derive(Clone, Copy, Debug)]
pub struct SpsaOptions {
    pub a: f64,
    pub c: f64,
    pub alpha: f64,
    pub gamma: f64,
    /// Stability constant A; `None` defaults to max_iter / 10.
    pub big_a: Option<f64>,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for SpsaOptions {
    fn default() -> Self {
        SpsaOptions {
            a: 0.2,
            c: 0.1,
            alpha: 0.602,
            gamma: 0.101,
            big_a: None,
            max_iter: 2000,
            seed: 0,
        }
    }
}

/// Runs SPSA on `cost` from `init` for a fixed iteration budget. The trace
/// records the mean of the two evaluations per iteration; the parameter trace
/// records the iterate after each update.
pub fn optimize_spsa<F>(mut cost: F, init: &[f64], options: &SpsaOptions) -> OptimizerRun
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = init.len();
    let big_a = options.big_a.unwrap_or(options.max_iter as f64 / 10.0);
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut theta = init.to_vec();
    let mut cost_trace = Vec::with_capacity(options.max_iter);
    let mut param_trace = Vec::with_capacity(options.max_iter);

    for k in 0..options.max_iter {
        let ak = options.a / (k as f64 + 1.0 + big_a).powf(options.alpha);
        let ck = options.c / (k as f64 + 1.0).powf(options.gamma);

        let delta: Vec<f64> = (0..dim)
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect();
        let plus: Vec<f64> = theta.iter().zip(&delta).map(|(&t, &d)| t + ck * d).collect();
        let minus: Vec<f64> = theta.iter().zip(&delta).map(|(&t, &d)| t - ck * d).collect();
        let y_plus = cost(&plus);
        let y_minus = cost(&minus);

        let scale = (y_plus - y_minus) / (2.0 * ck);
        for (t, &d) in theta.iter_mut().zip(&delta) {
            *t -= ak * scale * d;
        }

        let observed = 0.5 * (y_plus + y_minus);
        cost_trace.push(observed);
        param_trace.push(theta.clone());
    }

    // The answer is the final iterate; SPSA has no convergence test, it runs
    // its whole budget.
    let best_cost = cost_trace.last().copied().unwrap_or(f64::NAN);
    OptimizerRun {
        best_params: theta,
        best_cost,
        cost_trace,
        param_trace,
        iterations: options.max_iter,
        converged: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noisy_quadratic_bowl() {
        let mut noise = ChaCha8Rng::seed_from_u64(17);
        let run = optimize_spsa(
            move |x: &[f64]| {
                let clean: f64 = x.iter().map(|&v| (v - 1.0) * (v - 1.0)).sum();
                clean + 0.01 * (noise.random::<f64>() - 0.5)
            },
            &[0.0; 4],
            &SpsaOptions {
                max_iter: 4000,
                seed: 8,
                ..SpsaOptions::default()
            },
        );
        // The last iterate should sit close to the optimum despite the noise.
        let final_params = run.param_trace.last().unwrap();
        for &x in final_params {
            assert!((x - 1.0).abs() < 0.05, "coordinate {x}");
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let objective = |x: &[f64]| x.iter().map(|&v| v * v).sum::<f64>();
        let opts = SpsaOptions {
            max_iter: 100,
            seed: 5,
            ..SpsaOptions::default()
        };
        let a = optimize_spsa(objective, &[1.0, -2.0], &opts);
        let b = optimize_spsa(objective, &[1.0, -2.0], &opts);
        assert_eq!(a.param_trace, b.param_trace);
        assert_eq!(a.cost_trace, b.cost_trace);
    }

    #[test]
    fn runs_entire_budget() {
        let run = optimize_spsa(
            |x: &[f64]| x[0] * x[0],
            &[3.0],
            &SpsaOptions {
                max_iter: 50,
                ..SpsaOptions::default()
            },
        );
        assert_eq!(run.iterations, 50);
        assert_eq!(run.cost_trace.len(), 50);
    }
}
