//! Expressibility sweeps: global cycle counts and local structure strings.

use serde_json::json;

use crate::ansatz::{
    build_global, build_local_full, parse_structure, AnsatzSpec, Entangler,
};
use crate::error::{Error, Result};
use crate::experiments::output::{fmt_f64, render_csv, render_meta, write_file};
use crate::experiments::{adapted_weight, ExperimentConfig, ExperimentReport};
use crate::training::{
    best_result, derive_seed, train_restarts, CostEstimator, OptimizerConfig, TrainedParameters,
};

#[derive(Clone, Debug)]
pub struct GlobalSweepSeries {
    pub cycles: usize,
    pub best_fidelity: f64,
    pub depth: usize,
    /// Best-run cost per iteration.
    pub trace: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct GlobalSweepData {
    pub series: Vec<GlobalSweepSeries>,
}

/// Trains the global ansatz with 1, 2 and 3 entangling cycles and records the
/// optimization traces. Only the deepest variant is expected to cross 99%.
pub fn run_global_depth_sweep(
    cfg: &ExperimentConfig,
) -> Result<(GlobalSweepData, ExperimentReport)> {
    cfg.validate()?;
    let mut report = ExperimentReport::new(cfg.id);
    let n = cfg.n_qubits.expect("validated");
    let w = adapted_weight(cfg.weight_label, cfg.base_m, n)?;
    let psi_w = w.encode();
    let entangler = cfg.entangler.expect("validated");
    let restarts = cfg.restarts.expect("validated");
    let optimizer = OptimizerConfig::nelder_mead();

    let mut series = Vec::new();
    for cycles in 1..=3usize {
        let spec = AnsatzSpec::Global {
            n_qubits: n,
            entangler,
            cycles,
        };
        let runs = train_restarts(
            &spec,
            &psi_w,
            &optimizer,
            &CostEstimator::Exact,
            derive_seed(cfg.seed, cycles as u64),
            restarts,
        )?;
        let best = best_result(&runs);
        let TrainedParameters::Global(params) = &best.theta_opt else {
            return Err(Error::Config("global training returned local parameters".into()));
        };
        let depth = build_global(&spec, params)?.depth();
        report.summary.push(format!(
            "cycles {cycles}: best fidelity {:.6}, depth {depth}",
            best.final_fidelity
        ));
        series.push(GlobalSweepSeries {
            cycles,
            best_fidelity: best.final_fidelity,
            depth,
            trace: best.cost_trace.clone(),
        });
    }

    let fid = |c: usize| series[c - 1].best_fidelity;
    if fid(3) < 0.99 {
        report
            .violations
            .push(format!("three cycles reached only fidelity {:.6}", fid(3)));
    }
    if fid(1) >= 0.99 {
        report
            .violations
            .push(format!("one cycle unexpectedly reached fidelity {:.6}", fid(1)));
    }
    for s in &series {
        let running_min_ok = s
            .trace
            .windows(2)
            .all(|pair| pair[1] <= pair[0] + 1e-12);
        if !running_min_ok {
            report
                .violations
                .push(format!("cost trace for {} cycles is not non-increasing", s.cycles));
        }
    }

    if let Some(dir) = &cfg.out_dir {
        let mut trace_rows = Vec::new();
        for s in &series {
            for (it, cost) in s.trace.iter().enumerate() {
                trace_rows.push(vec![
                    s.cycles.to_string(),
                    (it + 1).to_string(),
                    fmt_f64(*cost),
                ]);
            }
        }
        let csv = render_csv(&["cycles", "iteration", "best_cost"], &trace_rows);
        report
            .files
            .push(write_file(dir, "global_depth_sweep_traces.csv", &csv)?);

        let summary_rows: Vec<Vec<String>> = series
            .iter()
            .map(|s| {
                vec![
                    s.cycles.to_string(),
                    fmt_f64(s.best_fidelity),
                    s.depth.to_string(),
                ]
            })
            .collect();
        let csv = render_csv(&["cycles", "best_fidelity", "depth"], &summary_rows);
        report
            .files
            .push(write_file(dir, "global_depth_sweep_summary.csv", &csv)?);
        let meta = render_meta(cfg, json!({"restarts": restarts}))?;
        report.files.push(write_file(dir, "meta.json", &meta)?);
    }

    Ok((GlobalSweepData { series }, report))
}

#[derive(Clone, Debug)]
pub struct StructureBar {
    pub n_qubits: usize,
    pub entangler: Entangler,
    pub structure: String,
    pub mean_fidelity: f64,
    pub std_fidelity: f64,
    pub min_fidelity: f64,
    pub max_fidelity: f64,
    pub depth: usize,
    pub parameter_count: usize,
}

#[derive(Clone, Debug)]
pub struct StructureBarsData {
    pub bars: Vec<StructureBar>,
}

fn default_bar_sets(n: usize) -> Vec<(usize, Entangler, Vec<String>)> {
    let base: Vec<String> = ["111", "211", "221", "222", "321"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let five: Vec<String> = ["1111", "2111", "2211", "3211", "2222", "4321"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut sets = vec![
        (n, Entangler::AllToAll, base.clone()),
        (n, Entangler::NearestNeighbour, base),
    ];
    if n == 4 {
        sets.push((5, Entangler::NearestNeighbour, five));
    }
    sets
}

fn structure_depth(spec: &AnsatzSpec) -> Result<usize> {
    let AnsatzSpec::Local { n_qubits, structure, .. } = spec else {
        return Err(Error::Config("expected a local ansatz".into()));
    };
    let layer_params: Vec<Vec<f64>> = structure
        .iter()
        .enumerate()
        .map(|(idx, &c)| vec![0.0; (n_qubits - idx) * (c + 1)])
        .collect();
    Ok(build_local_full(spec, &layer_params, [0.0; 3])?.depth())
}

/// Local training statistics per structure string, for both entanglers at the
/// configured size plus the nearest-neighbour set one qubit larger.
pub fn run_structure_bars(cfg: &ExperimentConfig) -> Result<(StructureBarsData, ExperimentReport)> {
    cfg.validate()?;
    let mut report = ExperimentReport::new(cfg.id);
    let n_base = cfg.n_qubits.expect("validated");
    let repeats = cfg.repeats.expect("validated");
    let optimizer = OptimizerConfig::nelder_mead();

    let sets = match &cfg.structures {
        Some(list) => vec![
            (n_base, Entangler::AllToAll, list.clone()),
            (n_base, Entangler::NearestNeighbour, list.clone()),
        ],
        None => default_bar_sets(n_base),
    };

    let mut bars = Vec::new();
    for (set_idx, (n, entangler, structures)) in sets.iter().enumerate() {
        let w = adapted_weight(cfg.weight_label, cfg.base_m, *n)?;
        let psi_w = w.encode();
        for (s_idx, text) in structures.iter().enumerate() {
            let structure = parse_structure(text)?;
            if structure.len() != n - 1 {
                return Err(Error::Config(format!(
                    "structure '{text}' does not fit {n} qubits"
                )));
            }
            let spec = AnsatzSpec::Local {
                n_qubits: *n,
                entangler: *entangler,
                structure,
            };
            let runs = train_restarts(
                &spec,
                &psi_w,
                &optimizer,
                &CostEstimator::Exact,
                derive_seed(cfg.seed, (set_idx * 100 + s_idx) as u64),
                repeats,
            )?;
            let fids: Vec<f64> = runs.iter().map(|r| r.final_fidelity).collect();
            let mean = fids.iter().sum::<f64>() / fids.len() as f64;
            let var = fids.iter().map(|f| (f - mean) * (f - mean)).sum::<f64>()
                / (fids.len().max(2) - 1) as f64;
            bars.push(StructureBar {
                n_qubits: *n,
                entangler: *entangler,
                structure: text.clone(),
                mean_fidelity: mean,
                std_fidelity: var.sqrt(),
                min_fidelity: fids.iter().copied().fold(1.0, f64::min),
                max_fidelity: fids.iter().copied().fold(0.0, f64::max),
                depth: structure_depth(&spec)?,
                parameter_count: spec.parameter_count(),
            });
        }
    }

    for bar in &bars {
        report.summary.push(format!(
            "N={} {} '{}': mean {:.5} ± {:.5}, depth {}",
            bar.n_qubits,
            bar.entangler.as_str(),
            bar.structure,
            bar.mean_fidelity,
            bar.std_fidelity,
            bar.depth
        ));
    }

    // The stepwise structure at the base size should cross 99% even with the
    // cheaper entangler.
    if let Some(bar) = bars.iter().find(|b| {
        b.n_qubits == n_base
            && b.entangler == Entangler::NearestNeighbour
            && b.structure == "321"
    }) {
        if bar.mean_fidelity <= 0.99 {
            report.violations.push(format!(
                "stepwise nearest-neighbour structure at N={n_base} reached only {:.5}",
                bar.mean_fidelity
            ));
        }
    }
    // All-to-all should match or beat nearest-neighbour per structure, at
    // deeper circuits.
    for bar in bars.iter().filter(|b| b.entangler == Entangler::AllToAll) {
        if let Some(nn) = bars.iter().find(|b| {
            b.entangler == Entangler::NearestNeighbour
                && b.n_qubits == bar.n_qubits
                && b.structure == bar.structure
        }) {
            if bar.mean_fidelity < nn.mean_fidelity - 0.005 {
                report.violations.push(format!(
                    "all-to-all '{}' underperforms nearest-neighbour: {:.5} vs {:.5}",
                    bar.structure, bar.mean_fidelity, nn.mean_fidelity
                ));
            }
            if bar.depth <= nn.depth {
                report.violations.push(format!(
                    "all-to-all '{}' is not deeper than nearest-neighbour",
                    bar.structure
                ));
            }
        }
    }
    // The stepwise structure should be Pareto-optimal (fidelity vs depth)
    // within the larger nearest-neighbour set.
    let five: Vec<&StructureBar> = bars.iter().filter(|b| b.n_qubits == n_base + 1).collect();
    if let Some(step) = five.iter().find(|b| b.structure == "4321") {
        let dominated = five.iter().any(|other| {
            other.structure != step.structure
                && other.mean_fidelity >= step.mean_fidelity
                && other.depth <= step.depth
                && (other.mean_fidelity > step.mean_fidelity || other.depth < step.depth)
        });
        if dominated {
            report.violations.push(
                "the stepwise structure is dominated in the fidelity-depth tradeoff".into(),
            );
        }
    }

    if let Some(dir) = &cfg.out_dir {
        let rows: Vec<Vec<String>> = bars
            .iter()
            .map(|b| {
                vec![
                    b.n_qubits.to_string(),
                    b.entangler.as_str().to_string(),
                    b.structure.clone(),
                    fmt_f64(b.mean_fidelity),
                    fmt_f64(b.std_fidelity),
                    fmt_f64(b.min_fidelity),
                    fmt_f64(b.max_fidelity),
                    b.depth.to_string(),
                    b.parameter_count.to_string(),
                ]
            })
            .collect();
        let csv = render_csv(
            &[
                "n_qubits",
                "entangler",
                "structure",
                "mean_fidelity",
                "std_fidelity",
                "min_fidelity",
                "max_fidelity",
                "depth",
                "parameter_count",
            ],
            &rows,
        );
        report.files.push(write_file(dir, "structure_bars.csv", &csv)?);
        let meta = render_meta(cfg, json!({"repeats": repeats}))?;
        report.files.push(write_file(dir, "meta.json", &meta)?);
    }

    Ok((StructureBarsData { bars }, report))
}
