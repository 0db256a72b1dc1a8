//! Variational unsampling: cost functions, optimizers, single-run trainers
//! for the global and layered local schemes, restart helpers and the
//! iterations-to-target-fidelity study.

mod cost;
mod nelder_mead;
mod spsa;

pub use cost::{final_rotation_cost, global_cost, local_cost, CostEstimator};
pub use nelder_mead::{optimize_nelder_mead, NelderMeadOptions};
pub use spsa::{optimize_spsa, SpsaOptions};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::{build_global, build_local_layer, AnsatzSpec};
use crate::error::{Error, Result};
use crate::simcore::StateVector;

/// Raw outcome of one optimizer run.
#[derive(Clone, Debug)]
pub struct OptimizerRun {
    pub best_params: Vec<f64>,
    pub best_cost: f64,
    /// Representative cost per iteration (best vertex for Nelder-Mead, mean
    /// of the two probes for SPSA).
    pub cost_trace: Vec<f64>,
    /// Best (Nelder-Mead) or current (SPSA) parameters per iteration.
    pub param_trace: Vec<Vec<f64>>,
    pub iterations: usize,
    pub converged: bool,
}

/// Which optimizer drives a training run.
#[derive(Clone, Copy, Debug)]
pub enum OptimizerConfig {
    NelderMead {
        options: NelderMeadOptions,
        /// Extra Nelder-Mead passes restarted from the incumbent with a
        /// shrinking initial simplex; refines past the first stall.
        polish_rounds: usize,
    },
    Spsa(SpsaOptions),
}

impl OptimizerConfig {
    pub fn nelder_mead() -> Self {
        OptimizerConfig::NelderMead {
            options: NelderMeadOptions::default(),
            polish_rounds: 2,
        }
    }
}

/// Global or qubit-by-qubit training.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrainingMode {
    Global,
    Local,
}

impl std::str::FromStr for TrainingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "global" => Ok(TrainingMode::Global),
            "local" => Ok(TrainingMode::Local),
            other => Err(Error::Parse(format!("unknown training mode '{other}'"))),
        }
    }
}

/// Optimized parameters of a trained weight unitary.
#[derive(Clone, Debug)]
pub enum TrainedParameters {
    Global(Vec<f64>),
    Local {
        layers: Vec<Vec<f64>>,
        final_rotation: [f64; 3],
    },
}

/// Outcome of one training run.
#[derive(Clone, Debug)]
pub struct TrainingResult {
    pub theta_opt: TrainedParameters,
    /// Concatenated per-iteration cost values (per stage for local training).
    pub cost_trace: Vec<f64>,
    /// Exact full-circuit fidelity per iteration, recomputed from the
    /// statevector regardless of the training estimator.
    pub fidelity_trace: Vec<f64>,
    /// Cumulative iteration index at which each stage ended (one entry for
    /// global training).
    pub stage_ends: Vec<usize>,
    /// Exact fidelity of the final trained circuit.
    pub final_fidelity: f64,
    pub iterations: usize,
    pub seed: u64,
    pub converged: bool,
}

/// One splitmix64 round; used to derive independent seeds from a base seed.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const STREAM_INIT: u64 = 1;
const STREAM_EVAL: u64 = 2;
const STREAM_OPT: u64 = 3;

/// Runs the configured optimizer, adding polish passes for Nelder-Mead.
fn run_optimizer<F>(mut cost: F, init: &[f64], optimizer: &OptimizerConfig, seed: u64) -> OptimizerRun
where
    F: FnMut(&[f64]) -> f64,
{
    match optimizer {
        OptimizerConfig::NelderMead {
            options,
            polish_rounds,
        } => {
            let mut run = optimize_nelder_mead(&mut cost, init, options);
            for round in 0..*polish_rounds {
                let step = options.initial_step * 0.25f64.powi(round as i32 + 1);
                let polish_options = NelderMeadOptions {
                    tol: options.tol * 1e-4,
                    max_iter: options.max_iter,
                    initial_step: step,
                };
                let polish = optimize_nelder_mead(&mut cost, &run.best_params, &polish_options);
                run.iterations += polish.iterations;
                run.converged = polish.converged;
                run.cost_trace.extend(polish.cost_trace);
                run.param_trace.extend(polish.param_trace);
                if polish.best_cost < run.best_cost {
                    run.best_cost = polish.best_cost;
                    run.best_params = polish.best_params;
                }
            }
            run
        }
        OptimizerConfig::Spsa(options) => {
            let seeded = SpsaOptions { seed, ..*options };
            optimize_spsa(&mut cost, init, &seeded)
        }
    }
}

fn uniform_angles(rng: &mut ChaCha8Rng, count: usize) -> Vec<f64> {
    (0..count)
        .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
        .collect()
}

/// Trains the global ansatz to map `psi_w` onto |1…1⟩.
///
/// Angles start uniformly random in [0, 2π); the reported fidelity is always
/// recomputed with the exact estimator.
pub fn train_global(
    spec: &AnsatzSpec,
    psi_w: &StateVector,
    optimizer: &OptimizerConfig,
    estimator: &CostEstimator,
    seed: u64,
) -> Result<TrainingResult> {
    let AnsatzSpec::Global { .. } = spec else {
        return Err(Error::Config("train_global needs a global ansatz".into()));
    };
    spec.validate()?;
    estimator.validate()?;
    if psi_w.n_qubits() != spec.n_qubits() {
        return Err(Error::Dimension(format!(
            "weight state on {} qubits for a {}-qubit ansatz",
            psi_w.n_qubits(),
            spec.n_qubits()
        )));
    }

    let mut init_rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, STREAM_INIT));
    let init = uniform_angles(&mut init_rng, spec.parameter_count());

    let mut eval_rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, STREAM_EVAL));
    let est = *estimator;
    let spec_for_cost = spec.clone();
    let psi = psi_w.clone();
    let cost = move |params: &[f64]| -> f64 {
        let per_eval = est.reseeded(eval_rng.random());
        global_cost(params, &spec_for_cost, &psi, &per_eval).expect("validated configuration")
    };

    let run = run_optimizer(cost, &init, optimizer, derive_seed(seed, STREAM_OPT));

    let fidelity_trace: Vec<f64> = run
        .param_trace
        .iter()
        .map(|params| {
            1.0 - global_cost(params, spec, psi_w, &CostEstimator::Exact)
                .expect("validated configuration")
        })
        .collect();
    let final_fidelity =
        1.0 - global_cost(&run.best_params, spec, psi_w, &CostEstimator::Exact)?;

    Ok(TrainingResult {
        theta_opt: TrainedParameters::Global(run.best_params),
        cost_trace: run.cost_trace,
        fidelity_trace,
        stage_ends: vec![run.iterations],
        final_fidelity,
        iterations: run.iterations,
        seed,
        converged: run.converged,
    })
}

/// Trains the layered local ansatz stage by stage.
///
/// Layers run in order, each frozen at its optimum before the next starts;
/// the first layer starts from random angles, later layers and the final
/// rotation start from zero. The per-iteration fidelity trace holds the exact
/// probability of |1…1⟩ under the partial composition trained so far.
pub fn train_local(
    spec: &AnsatzSpec,
    psi_w: &StateVector,
    optimizer: &OptimizerConfig,
    estimator: &CostEstimator,
    seed: u64,
) -> Result<TrainingResult> {
    let AnsatzSpec::Local { n_qubits, structure, .. } = spec else {
        return Err(Error::Config("train_local needs a local ansatz".into()));
    };
    spec.validate()?;
    estimator.validate()?;
    if psi_w.n_qubits() != *n_qubits {
        return Err(Error::Dimension(format!(
            "weight state on {} qubits for a {}-qubit ansatz",
            psi_w.n_qubits(),
            n_qubits
        )));
    }

    let n = *n_qubits;
    let target = (1usize << n) - 1;
    let mut state = psi_w.clone();
    let mut layers: Vec<Vec<f64>> = Vec::with_capacity(n - 1);
    let mut cost_trace = Vec::new();
    let mut fidelity_trace = Vec::new();
    let mut stage_ends = Vec::new();
    let mut iterations = 0usize;
    let mut converged = true;

    for layer in 1..=(n - 1) {
        let width = n - layer + 1;
        let dim = width * (structure[layer - 1] + 1);
        let stage_seed = derive_seed(seed, 16 + layer as u64);
        let init = if layer == 1 {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(stage_seed, STREAM_INIT));
            uniform_angles(&mut rng, dim)
        } else {
            vec![0.0; dim]
        };

        let mut eval_rng = ChaCha8Rng::seed_from_u64(derive_seed(stage_seed, STREAM_EVAL));
        let est = *estimator;
        let spec_for_cost = spec.clone();
        let frozen = state.clone();
        let cost = move |params: &[f64]| -> f64 {
            let per_eval = est.reseeded(eval_rng.random());
            local_cost(layer, params, &spec_for_cost, &frozen, &per_eval)
                .expect("validated configuration")
        };

        let run = run_optimizer(cost, &init, optimizer, derive_seed(stage_seed, STREAM_OPT));
        iterations += run.iterations;
        converged &= run.converged;
        for params in &run.param_trace {
            let partial = build_local_layer(spec, layer, params)?.simulate(&state)?;
            fidelity_trace.push(partial.basis_probability(target)?);
        }
        cost_trace.extend(run.cost_trace);
        stage_ends.push(iterations);

        state = build_local_layer(spec, layer, &run.best_params)?.simulate(&state)?;
        layers.push(run.best_params);
    }

    // Final stage: the three-parameter rotation on the last qubit, trained
    // with the same single-qubit cost.
    let stage_seed = derive_seed(seed, 16 + n as u64);
    let mut eval_rng = ChaCha8Rng::seed_from_u64(derive_seed(stage_seed, STREAM_EVAL));
    let est = *estimator;
    let frozen = state.clone();
    let cost = move |params: &[f64]| -> f64 {
        let per_eval = est.reseeded(eval_rng.random());
        final_rotation_cost(params, &frozen, &per_eval).expect("validated configuration")
    };
    let run = run_optimizer(cost, &[0.0; 3], optimizer, derive_seed(stage_seed, STREAM_OPT));
    iterations += run.iterations;
    converged &= run.converged;
    for params in &run.param_trace {
        let gate =
            crate::ansatz::final_rotation_gate(n - 1, params[0], params[1], params[2]);
        let partial = state.apply_gate(&gate)?;
        fidelity_trace.push(partial.basis_probability(target)?);
    }
    cost_trace.extend(run.cost_trace);
    stage_ends.push(iterations);

    let final_rotation = [run.best_params[0], run.best_params[1], run.best_params[2]];
    let gate = crate::ansatz::final_rotation_gate(
        n - 1,
        final_rotation[0],
        final_rotation[1],
        final_rotation[2],
    );
    let final_state = state.apply_gate(&gate)?;
    let final_fidelity = final_state.basis_probability(target)?;

    Ok(TrainingResult {
        theta_opt: TrainedParameters::Local {
            layers,
            final_rotation,
        },
        cost_trace,
        fidelity_trace,
        stage_ends,
        final_fidelity,
        iterations,
        seed,
        converged,
    })
}

/// Dispatches on the ansatz kind.
pub fn train(
    spec: &AnsatzSpec,
    psi_w: &StateVector,
    optimizer: &OptimizerConfig,
    estimator: &CostEstimator,
    seed: u64,
) -> Result<TrainingResult> {
    match spec {
        AnsatzSpec::Global { .. } => train_global(spec, psi_w, optimizer, estimator, seed),
        AnsatzSpec::Local { .. } => train_local(spec, psi_w, optimizer, estimator, seed),
    }
}

/// Runs `restarts` independent trainings with seeds derived from `seed_base`,
/// in parallel. Results come back in restart order.
pub fn train_restarts(
    spec: &AnsatzSpec,
    psi_w: &StateVector,
    optimizer: &OptimizerConfig,
    estimator: &CostEstimator,
    seed_base: u64,
    restarts: usize,
) -> Result<Vec<TrainingResult>> {
    if restarts == 0 {
        return Err(Error::Argument("at least one restart is required".into()));
    }
    (0..restarts)
        .into_par_iter()
        .map(|r| train(spec, psi_w, optimizer, estimator, derive_seed(seed_base, r as u64)))
        .collect()
}

/// The run with the highest exact final fidelity.
pub fn best_result(results: &[TrainingResult]) -> &TrainingResult {
    results
        .iter()
        .max_by(|a, b| a.final_fidelity.total_cmp(&b.final_fidelity))
        .expect("at least one result")
}

/// Iteration statistics for one register size.
#[derive(Clone, Debug, Serialize)]
pub struct IterationScalingPoint {
    pub n_qubits: usize,
    pub mean_iterations: f64,
    pub std_iterations: f64,
    pub converged_runs: usize,
    pub censored_runs: usize,
}

/// For each weight pattern, runs `repeats` trainings and records how many
/// optimizer iterations the exact fidelity needs to first reach `target`.
/// Runs that never reach it within the budget are censored: excluded from the
/// statistics and counted separately.
#[allow(clippy::too_many_arguments)]
pub fn iterations_to_fidelity(
    mode: TrainingMode,
    entangler: crate::ansatz::Entangler,
    weights: &[crate::encoding::BinaryPattern],
    target: f64,
    repeats: usize,
    seed_base: u64,
    optimizer: &OptimizerConfig,
    estimator: &CostEstimator,
) -> Result<Vec<IterationScalingPoint>> {
    if !(0.0..1.0).contains(&target) || target <= 0.0 {
        return Err(Error::Argument(format!("target fidelity {target} not in (0,1)")));
    }
    if repeats == 0 {
        return Err(Error::Argument("repeats must be ≥ 1".into()));
    }
    let mut points = Vec::new();
    for (widx, w) in weights.iter().enumerate() {
        let n = w.n_qubits();
        let spec = match mode {
            TrainingMode::Global => AnsatzSpec::Global {
                n_qubits: n,
                entangler,
                cycles: n - 1,
            },
            TrainingMode::Local => AnsatzSpec::Local {
                n_qubits: n,
                entangler,
                structure: crate::ansatz::stepwise_structure(n),
            },
        };
        let psi_w = w.encode();
        let crossings: Vec<Option<usize>> = (0..repeats)
            .into_par_iter()
            .map(|r| -> Result<Option<usize>> {
                let seed = derive_seed(seed_base, (widx * repeats + r) as u64);
                let result = train(&spec, &psi_w, optimizer, estimator, seed)?;
                Ok(result
                    .fidelity_trace
                    .iter()
                    .position(|&f| f >= target)
                    .map(|idx| idx + 1))
            })
            .collect::<Result<_>>()?;

        let reached: Vec<f64> = crossings.iter().flatten().map(|&it| it as f64).collect();
        let censored = repeats - reached.len();
        let mean = if reached.is_empty() {
            f64::NAN
        } else {
            reached.iter().sum::<f64>() / reached.len() as f64
        };
        let std = if reached.len() < 2 {
            0.0
        } else {
            let var = reached.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>()
                / (reached.len() - 1) as f64;
            var.sqrt()
        };
        points.push(IterationScalingPoint {
            n_qubits: n,
            mean_iterations: mean,
            std_iterations: std,
            converged_runs: reached.len(),
            censored_runs: censored,
        });
    }
    Ok(points)
}

/// Exact fidelity of trained parameters against a weight state.
pub fn exact_fidelity(
    spec: &AnsatzSpec,
    params: &TrainedParameters,
    psi_w: &StateVector,
) -> Result<f64> {
    let circuit = match params {
        TrainedParameters::Global(p) => build_global(spec, p)?,
        TrainedParameters::Local {
            layers,
            final_rotation,
        } => crate::ansatz::build_local_full(spec, layers, *final_rotation)?,
    };
    let out = circuit.simulate(psi_w)?;
    out.basis_probability(out.dim() - 1)
}
