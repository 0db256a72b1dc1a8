//! Classical-resource scaling and training under measurement shot noise.

use serde_json::json;

use crate::ansatz::AnsatzSpec;
use crate::error::Result;
use crate::experiments::output::{fmt_f64, render_csv, render_meta, write_file};
use crate::experiments::{adapted_weight, ExperimentConfig, ExperimentReport};
use crate::training::{
    derive_seed, iterations_to_fidelity, train_global, train_local, CostEstimator,
    IterationScalingPoint, OptimizerConfig, SpsaOptions, TrainingMode, TrainingResult,
};

/// Target fidelity of the iteration-count study.
pub const ITERATION_TARGET_FIDELITY: f64 = 0.95;

#[derive(Clone, Debug)]
pub struct IterationScalingData {
    pub global: Vec<IterationScalingPoint>,
    pub local: Vec<IterationScalingPoint>,
}

/// Mean ± std of optimizer iterations needed to reach 95% fidelity, per
/// register size, for the global (n = N-1 cycles) and local (stepwise
/// structure) schemes under the exact estimator.
pub fn run_iteration_scaling(
    cfg: &ExperimentConfig,
) -> Result<(IterationScalingData, ExperimentReport)> {
    cfg.validate()?;
    let mut report = ExperimentReport::new(cfg.id);
    let lo = cfg.n_min.expect("validated");
    let hi = cfg.n_max.expect("validated");
    let entangler = cfg.entangler.expect("validated");
    let repeats = cfg.repeats.expect("validated");
    let weights: Vec<_> = (lo..=hi)
        .map(|n| adapted_weight(cfg.weight_label, cfg.base_m, n))
        .collect::<Result<_>>()?;
    let optimizer = OptimizerConfig::nelder_mead();

    let global = iterations_to_fidelity(
        TrainingMode::Global,
        entangler,
        &weights,
        ITERATION_TARGET_FIDELITY,
        repeats,
        derive_seed(cfg.seed, 1),
        &optimizer,
        &CostEstimator::Exact,
    )?;
    let local = iterations_to_fidelity(
        TrainingMode::Local,
        entangler,
        &weights,
        ITERATION_TARGET_FIDELITY,
        repeats,
        derive_seed(cfg.seed, 2),
        &optimizer,
        &CostEstimator::Exact,
    )?;

    for (mode, points) in [("global", &global), ("local", &local)] {
        for p in points {
            report.summary.push(format!(
                "{mode} N={}: {:.1} ± {:.1} iterations ({} converged, {} censored)",
                p.n_qubits, p.mean_iterations, p.std_iterations, p.converged_runs, p.censored_runs
            ));
        }
    }

    // The comparison point: the largest size at which every run of both modes
    // converged.
    let fully_converged = |points: &[IterationScalingPoint], n: usize| {
        points
            .iter()
            .find(|p| p.n_qubits == n)
            .is_some_and(|p| p.censored_runs == 0)
    };
    let common = (lo..=hi)
        .rev()
        .find(|&n| fully_converged(&global, n) && fully_converged(&local, n));
    match common {
        Some(n) if n >= 5 => {
            let g = global.iter().find(|p| p.n_qubits == n).expect("present");
            let l = local.iter().find(|p| p.n_qubits == n).expect("present");
            report.summary.push(format!(
                "largest fully converged size N={n}: local {:.1} vs global {:.1} mean iterations",
                l.mean_iterations, g.mean_iterations
            ));
            if l.mean_iterations < g.mean_iterations {
                report.violations.push(format!(
                    "local training needed fewer iterations than global at N={n}"
                ));
            }
        }
        other => {
            report.violations.push(format!(
                "no common fully converged size ≥ 5 (found {other:?})"
            ));
        }
    }

    if let Some(dir) = &cfg.out_dir {
        let mut rows = Vec::new();
        for (mode, points) in [("global", &global), ("local", &local)] {
            for p in points {
                rows.push(vec![
                    mode.to_string(),
                    p.n_qubits.to_string(),
                    fmt_f64(p.mean_iterations),
                    fmt_f64(p.std_iterations),
                    p.converged_runs.to_string(),
                    p.censored_runs.to_string(),
                ]);
            }
        }
        let csv = render_csv(
            &[
                "mode",
                "n_qubits",
                "mean_iterations",
                "std_iterations",
                "converged_runs",
                "censored_runs",
            ],
            &rows,
        );
        report.files.push(write_file(dir, "iteration_scaling.csv", &csv)?);
        let meta = render_meta(
            cfg,
            json!({"target_fidelity": ITERATION_TARGET_FIDELITY, "repeats": repeats}),
        )?;
        report.files.push(write_file(dir, "meta.json", &meta)?);
    }

    Ok((IterationScalingData { global, local }, report))
}

/// Per-iteration aggregate of one training mode across repeats.
#[derive(Clone, Debug)]
pub struct NoisyModeData {
    pub mean_cost: Vec<f64>,
    pub std_cost: Vec<f64>,
    pub mean_fidelity: Vec<f64>,
    pub final_fidelities: Vec<f64>,
    pub final_mean: f64,
    pub final_std: f64,
    pub stage_ends: Vec<usize>,
    pub plateau_iteration: usize,
}

#[derive(Clone, Debug)]
pub struct NoisyTrainingData {
    pub global: NoisyModeData,
    pub local: NoisyModeData,
}

/// First iteration at which the (mean) fidelity trace enters the band of its
/// final plateau: within 0.02 of the mean over the last tenth of iterations.
pub fn plateau_iteration(mean_fidelity: &[f64]) -> usize {
    if mean_fidelity.is_empty() {
        return 0;
    }
    let tail = mean_fidelity.len().div_ceil(10);
    let level: f64 =
        mean_fidelity[mean_fidelity.len() - tail..].iter().sum::<f64>() / tail as f64;
    mean_fidelity
        .iter()
        .position(|&f| f >= level - 0.02)
        .map(|idx| idx + 1)
        .unwrap_or(mean_fidelity.len())
}

fn aggregate(runs: &[TrainingResult]) -> NoisyModeData {
    let len = runs.iter().map(|r| r.cost_trace.len()).min().unwrap_or(0);
    let reps = runs.len() as f64;
    let mut mean_cost = Vec::with_capacity(len);
    let mut std_cost = Vec::with_capacity(len);
    let mut mean_fidelity = Vec::with_capacity(len);
    for t in 0..len {
        let costs: Vec<f64> = runs.iter().map(|r| r.cost_trace[t]).collect();
        let mean = costs.iter().sum::<f64>() / reps;
        let var = costs.iter().map(|c| (c - mean) * (c - mean)).sum::<f64>() / reps;
        mean_cost.push(mean);
        std_cost.push(var.sqrt());
        mean_fidelity.push(runs.iter().map(|r| r.fidelity_trace[t]).sum::<f64>() / reps);
    }
    let finals: Vec<f64> = runs.iter().map(|r| r.final_fidelity).collect();
    let final_mean = finals.iter().sum::<f64>() / reps;
    let final_var = finals.iter().map(|f| (f - final_mean) * (f - final_mean)).sum::<f64>() / reps;
    let plateau = plateau_iteration(&mean_fidelity);
    NoisyModeData {
        mean_cost,
        std_cost,
        mean_fidelity,
        final_fidelities: finals,
        final_mean,
        final_std: final_var.sqrt(),
        stage_ends: runs[0].stage_ends.clone(),
        plateau_iteration: plateau,
    }
}

/// Acceptance band for the final fidelities under shot noise.
pub const NOISY_FIDELITY_BAND: (f64, f64) = (0.80, 0.95);

/// SPSA training with shot-sampled costs for both schemes.
///
/// The gain constants are calibrated for unit-interval costs on this problem
/// family; the local stages get a tenth of the global iteration budget each,
/// mirroring the shorter per-stage optimizations of the layered scheme.
pub fn run_noisy_training(cfg: &ExperimentConfig) -> Result<(NoisyTrainingData, ExperimentReport)> {
    cfg.validate()?;
    let mut report = ExperimentReport::new(cfg.id);
    let n = cfg.n_qubits.expect("validated");
    let entangler = cfg.entangler.expect("validated");
    let shots = cfg.shots.expect("validated");
    let repeats = cfg.repeats.expect("validated");
    let w = adapted_weight(cfg.weight_label, cfg.base_m, n)?;
    let psi_w = w.encode();
    let estimator = CostEstimator::Shots { shots, seed: 0 };

    let global_spec = AnsatzSpec::Global {
        n_qubits: n,
        entangler,
        cycles: n - 1,
    };
    let global_optimizer = OptimizerConfig::Spsa(SpsaOptions {
        a: 1.6,
        c: 0.1,
        big_a: Some(100.0),
        max_iter: 900,
        ..SpsaOptions::default()
    });
    let global_runs: Vec<TrainingResult> = (0..repeats)
        .map(|r| {
            train_global(
                &global_spec,
                &psi_w,
                &global_optimizer,
                &estimator,
                derive_seed(derive_seed(cfg.seed, 1), r as u64),
            )
        })
        .collect::<Result<_>>()?;

    let local_spec = AnsatzSpec::Local {
        n_qubits: n,
        entangler,
        structure: crate::ansatz::stepwise_structure(n),
    };
    let local_optimizer = OptimizerConfig::Spsa(SpsaOptions {
        a: 2.0,
        c: 0.1,
        big_a: Some(20.0),
        max_iter: 100,
        ..SpsaOptions::default()
    });
    let local_runs: Vec<TrainingResult> = (0..repeats)
        .map(|r| {
            train_local(
                &local_spec,
                &psi_w,
                &local_optimizer,
                &estimator,
                derive_seed(derive_seed(cfg.seed, 2), r as u64),
            )
        })
        .collect::<Result<_>>()?;

    let global = aggregate(&global_runs);
    let local = aggregate(&local_runs);

    for (mode, data) in [("global", &global), ("local", &local)] {
        report.summary.push(format!(
            "{mode}: final fidelity {:.4} ± {:.4} over {repeats} runs, plateau at iteration {}",
            data.final_mean, data.final_std, data.plateau_iteration
        ));
        let (lo, hi) = NOISY_FIDELITY_BAND;
        if !(lo..=hi).contains(&data.final_mean) {
            report.violations.push(format!(
                "{mode} final fidelity {:.4} outside [{lo}, {hi}]",
                data.final_mean
            ));
        }
    }
    if local.plateau_iteration >= global.plateau_iteration {
        report.violations.push(format!(
            "local plateau at iteration {} not earlier than global at {}",
            local.plateau_iteration, global.plateau_iteration
        ));
    }

    if let Some(dir) = &cfg.out_dir {
        for (name, data) in [("global", &global), ("local", &local)] {
            let rows: Vec<Vec<String>> = (0..data.mean_cost.len())
                .map(|t| {
                    vec![
                        (t + 1).to_string(),
                        fmt_f64(data.mean_cost[t]),
                        fmt_f64(data.std_cost[t]),
                        fmt_f64(data.mean_fidelity[t]),
                    ]
                })
                .collect();
            let csv = render_csv(
                &["iteration", "mean_cost", "std_cost", "mean_exact_fidelity"],
                &rows,
            );
            report
                .files
                .push(write_file(dir, &format!("noisy_training_{name}.csv"), &csv)?);
        }
        let meta = render_meta(
            cfg,
            json!({
                "global": {
                    "final_mean": global.final_mean,
                    "final_std": global.final_std,
                    "final_fidelities": global.final_fidelities,
                    "plateau_iteration": global.plateau_iteration,
                },
                "local": {
                    "final_mean": local.final_mean,
                    "final_std": local.final_std,
                    "final_fidelities": local.final_fidelities,
                    "stage_ends": local.stage_ends,
                    "plateau_iteration": local.plateau_iteration,
                },
                "fidelity_band": [NOISY_FIDELITY_BAND.0, NOISY_FIDELITY_BAND.1],
            }),
        )?;
        report.files.push(write_file(dir, "meta.json", &meta)?);
    }

    Ok((NoisyTrainingData { global, local }, report))
}
