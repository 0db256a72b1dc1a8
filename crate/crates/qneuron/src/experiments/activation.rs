//! Exact vs variational activation probabilities over an input set spanning
//! every attainable overlap value.

use serde_json::json;

use crate::ansatz::{parse_structure, AnsatzSpec};
use crate::error::{Error, Result};
use crate::experiments::output::{fmt_f64, render_csv, render_meta, write_file};
use crate::experiments::{adapted_weight, ExperimentConfig, ExperimentReport};
use crate::neuron::{
    circuit_activation_probability, classical_activation_probability, NeuronConfig,
    UwImplementation,
};
use crate::training::{
    best_result, derive_seed, train_restarts, CostEstimator, OptimizerConfig, TrainedParameters,
};

/// Trained approximations must reach at least this exact fidelity before the
/// activation comparison is considered meaningful.
pub const FIDELITY_FLOOR: f64 = 0.9999;

/// Largest tolerated deviation from the exact activation probability once the
/// fidelity floor is met.
pub const ACTIVATION_TOLERANCE: f64 = 2e-3;

#[derive(Clone, Debug)]
pub struct ActivationRow {
    pub k_i: u64,
    pub dot: i64,
    pub p_exact: f64,
    pub p_global: f64,
    pub p_local: f64,
}

#[derive(Clone, Debug)]
pub struct ActivationData {
    pub rows: Vec<ActivationRow>,
    pub global_fidelity: f64,
    pub local_fidelity: f64,
}

/// Trains both variational weight unitaries, then compares their activation
/// probabilities against the exact neuron on one input per attainable
/// inner-product value (flipping 0..m leading entries of the weight vector).
pub fn run_activation_compare(
    cfg: &ExperimentConfig,
) -> Result<(ActivationData, ExperimentReport)> {
    cfg.validate()?;
    let mut report = ExperimentReport::new(cfg.id);
    let n = cfg.n_qubits.ok_or_else(|| Error::Config("n_qubits required".into()))?;
    let m = 1usize << n;
    let w = adapted_weight(cfg.weight_label, cfg.base_m, n)?;
    let psi_w = w.encode();
    let entangler = cfg.entangler.expect("validated");
    let restarts = cfg.restarts.expect("validated");
    let optimizer = OptimizerConfig::nelder_mead();
    let estimator = CostEstimator::Exact;

    let global_spec = AnsatzSpec::Global {
        n_qubits: n,
        entangler,
        cycles: cfg.cycles.expect("validated"),
    };
    let global_runs = train_restarts(
        &global_spec,
        &psi_w,
        &optimizer,
        &estimator,
        derive_seed(cfg.seed, 1),
        restarts,
    )?;
    let global_best = best_result(&global_runs);

    let local_spec = AnsatzSpec::Local {
        n_qubits: n,
        entangler,
        structure: parse_structure(cfg.structure.as_deref().expect("validated"))?,
    };
    let local_runs = train_restarts(
        &local_spec,
        &psi_w,
        &optimizer,
        &estimator,
        derive_seed(cfg.seed, 2),
        restarts,
    )?;
    let local_best = best_result(&local_runs);

    for (name, fidelity) in [
        ("global", global_best.final_fidelity),
        ("local", local_best.final_fidelity),
    ] {
        report.summary.push(format!("{name} trained fidelity {fidelity:.6}"));
        if fidelity < FIDELITY_FLOOR {
            report.violations.push(format!(
                "{name} training stalled at fidelity {fidelity:.6} < {FIDELITY_FLOOR}"
            ));
        }
    }

    let TrainedParameters::Global(global_params) = &global_best.theta_opt else {
        return Err(Error::Config("global training returned local parameters".into()));
    };
    let TrainedParameters::Local {
        layers,
        final_rotation,
    } = &local_best.theta_opt
    else {
        return Err(Error::Config("local training returned global parameters".into()));
    };

    let exact_neuron = NeuronConfig::exact(w.clone());
    let global_neuron = NeuronConfig::new(
        w.clone(),
        UwImplementation::VariationalGlobal {
            spec: global_spec.clone(),
            params: global_params.clone(),
        },
        false,
    )?;
    let local_neuron = NeuronConfig::new(
        w.clone(),
        UwImplementation::VariationalLocal {
            spec: local_spec.clone(),
            layer_params: layers.clone(),
            final_rotation: *final_rotation,
        },
        false,
    )?;

    // One input per inner-product value: flipping the first d entries of the
    // weight vector gives i⃗·w⃗ = m - 2d.
    let mut rows = Vec::with_capacity(m + 1);
    for flips in 0..=m {
        let mut input = w.clone();
        for j in 0..flips {
            input = input.flipped(j);
        }
        let dot = input.dot(&w)?;
        let p_oracle = classical_activation_probability(&input, &w)?;
        let p_exact = circuit_activation_probability(&input, &exact_neuron)?;
        if (p_exact - p_oracle).abs() > 1e-10 {
            report.violations.push(format!(
                "exact circuit deviates from the classical oracle at dot {dot}: {p_exact} vs {p_oracle}"
            ));
        }
        let p_global = circuit_activation_probability(&input, &global_neuron)?;
        let p_local = circuit_activation_probability(&input, &local_neuron)?;
        for (name, p) in [("global", p_global), ("local", p_local)] {
            if (p - p_oracle).abs() > ACTIVATION_TOLERANCE {
                report.violations.push(format!(
                    "{name} activation off by {:.2e} at dot {dot}",
                    (p - p_oracle).abs()
                ));
            }
        }
        rows.push(ActivationRow {
            k_i: input.label()?,
            dot,
            p_exact: p_oracle,
            p_global,
            p_local,
        });
    }

    report.summary.push(format!(
        "{} inputs compared, max |p_global - p_exact| {:.2e}, max |p_local - p_exact| {:.2e}",
        rows.len(),
        rows.iter()
            .map(|r| (r.p_global - r.p_exact).abs())
            .fold(0.0, f64::max),
        rows.iter()
            .map(|r| (r.p_local - r.p_exact).abs())
            .fold(0.0, f64::max),
    ));

    if let Some(dir) = &cfg.out_dir {
        let csv_rows: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                vec![
                    r.k_i.to_string(),
                    r.dot.to_string(),
                    fmt_f64(r.p_exact),
                    fmt_f64(r.p_global),
                    fmt_f64(r.p_local),
                ]
            })
            .collect();
        let csv = render_csv(&["k_i", "dot", "p_exact", "p_global", "p_local"], &csv_rows);
        report.files.push(write_file(dir, "activation_compare.csv", &csv)?);
        let meta = render_meta(
            cfg,
            json!({
                "global_fidelity": global_best.final_fidelity,
                "local_fidelity": local_best.final_fidelity,
                "fidelity_floor": FIDELITY_FLOOR,
                "activation_tolerance": ACTIVATION_TOLERANCE,
            }),
        )?;
        report.files.push(write_file(dir, "meta.json", &meta)?);
    }

    Ok((
        ActivationData {
            rows,
            global_fidelity: global_best.final_fidelity,
            local_fidelity: local_best.final_fidelity,
        },
        report,
    ))
}
