//! Command-line front end: pattern encoding, exact neuron evaluation,
//! variational training and the experiment runners.
//!
//! Exit codes: 0 on success, 1 on validation/usage errors, 2 when an
//! experiment finishes but violates one of its acceptance thresholds.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use qneuron::ansatz::{parse_structure, AnsatzSpec, Entangler};
use qneuron::encoding::{parse_pattern_file, BinaryPattern};
use qneuron::error::{Error, Result};
use qneuron::experiments::{run_experiment, ExperimentConfig, ExperimentId};
use qneuron::neuron::{
    ancilla_activation, circuit_activation_probability, classical_activation_probability,
    NeuronConfig,
};
use qneuron::training::{
    best_result, train_restarts, CostEstimator, NelderMeadOptions, OptimizerConfig, SpsaOptions,
    TrainingMode,
};

#[derive(Parser)]
#[command(name = "qneuron", version, about = "Quantum binary-neuron simulator and trainer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a pattern, its label and its amplitude encoding.
    Encode(EncodeArgs),
    /// Evaluate the exact neuron on one or more inputs.
    Exact(ExactArgs),
    /// Train a variational weight unitary.
    Train(TrainArgs),
    /// Run a reproducible experiment and write CSV/JSON outputs.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct EncodeArgs {
    /// Pattern label (decimal).
    #[arg(long, conflicts_with = "pattern")]
    k: Option<u64>,
    /// Pattern length; required with --k.
    #[arg(long)]
    m: Option<usize>,
    /// Explicit ±-string, e.g. "+-++".
    #[arg(long)]
    pattern: Option<String>,
}

#[derive(Args)]
struct ExactArgs {
    /// Weight pattern: 'k:<int>' or a ±-string.
    #[arg(long)]
    weights: String,
    /// Pattern length for 'k:' forms.
    #[arg(long, default_value_t = 16)]
    m: usize,
    /// Input pattern: 'k:<int>' or a ±-string.
    #[arg(long, conflicts_with = "input_file")]
    input: Option<String>,
    /// File with one input pattern per line.
    #[arg(long)]
    input_file: Option<PathBuf>,
    /// Also estimate the activation from ancilla measurement samples.
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct TrainArgs {
    /// Weight pattern: 'k:<int>' or a ±-string.
    #[arg(long, default_value = "k:20032")]
    weights: String,
    /// Pattern length; required for 'k:' forms.
    #[arg(long, default_value_t = 16)]
    m: usize,
    #[arg(long)]
    mode: TrainingMode,
    #[arg(long, default_value = "nn")]
    entangler: Entangler,
    /// Entangling cycles (global mode).
    #[arg(long)]
    n: Option<usize>,
    /// Structure string (local mode), e.g. '321' or '3,2,1'.
    #[arg(long)]
    structure: Option<String>,
    #[arg(long, default_value = "exact")]
    estimator: String,
    #[arg(long, default_value_t = 1024)]
    shots: u64,
    /// Optimizer: 'nm' or 'spsa'.
    #[arg(long, default_value = "nm")]
    optimizer: String,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    /// Iteration budget per optimizer run.
    #[arg(long)]
    max_iter: Option<usize>,
    /// Write the best run's cost trace to this CSV file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// One of: activation_compare, global_depth_sweep, structure_bars,
    /// iteration_scaling, noisy_training, depth_scaling.
    id: ExperimentId,
    /// JSON config mirroring the experiment configuration schema.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for CSV and metadata files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn parse_pattern_arg(text: &str, m: Option<usize>) -> Result<BinaryPattern> {
    if let Some(rest) = text.strip_prefix("k:") {
        let m = m.ok_or_else(|| {
            Error::Argument("--m is required when the pattern is given as a label".into())
        })?;
        let label: u64 = rest
            .parse()
            .map_err(|_| Error::Parse(format!("invalid pattern label '{rest}'")))?;
        BinaryPattern::from_label(label, m)
    } else {
        BinaryPattern::parse(text, text.trim().len())
    }
}

fn cmd_encode(args: &EncodeArgs) -> Result<i32> {
    let pattern = match (&args.k, &args.pattern) {
        (Some(k), None) => {
            let m = args
                .m
                .ok_or_else(|| Error::Argument("--m is required with --k".into()))?;
            BinaryPattern::from_label(*k, m)?
        }
        (None, Some(p)) => BinaryPattern::parse(p, p.trim().len())?,
        _ => return Err(Error::Argument("provide exactly one of --k or --pattern".into())),
    };
    println!("pattern  {}", pattern.to_line());
    match pattern.label() {
        Ok(label) => println!("label    {label}"),
        Err(_) => println!("label    (does not fit 64 bits)"),
    }
    let m = pattern.len();
    let side = (m as f64).sqrt() as usize;
    if side * side == m {
        println!("image    ({side}x{side}, # = -1)");
        for row in pattern.entries().chunks(side) {
            let line: String = row.iter().map(|&e| if e == 1 { '.' } else { '#' }).collect();
            println!("         {line}");
        }
    }
    println!("state    amplitudes ±1/√{m}:");
    for (j, a) in pattern.encode().amplitudes().iter().enumerate() {
        println!("  |{j:>3}⟩  {:+.6}", a.re);
    }
    Ok(0)
}

fn cmd_exact(args: &ExactArgs) -> Result<i32> {
    let weights = parse_pattern_arg(&args.weights, Some(args.m))?;
    let inputs: Vec<BinaryPattern> = if let Some(path) = &args.input_file {
        let text = std::fs::read_to_string(path)?;
        parse_pattern_file(&text, weights.len())?
    } else {
        let input = args
            .input
            .as_deref()
            .ok_or_else(|| Error::Argument("provide --input or --input-file".into()))?;
        vec![parse_pattern_arg(input, Some(weights.len()))?]
    };

    let cfg = NeuronConfig::exact(weights.clone()).with_ancilla();
    println!("k_i,dot,p_classical,p_circuit{}", if args.shots.is_some() { ",p_sampled" } else { "" });
    for input in &inputs {
        if input.len() != weights.len() {
            return Err(Error::Dimension(format!(
                "input of {} entries against weights of {}",
                input.len(),
                weights.len()
            )));
        }
        let p_classical = classical_activation_probability(input, &weights)?;
        let p_circuit = circuit_activation_probability(input, &cfg)?;
        let label = input
            .label()
            .map(|l| l.to_string())
            .unwrap_or_else(|_| "-".into());
        let dot = input.dot(&weights)?;
        if let Some(shots) = args.shots {
            let p_sampled = ancilla_activation(input, &cfg, shots, args.seed)?;
            println!("{label},{dot},{p_classical},{p_circuit},{p_sampled}");
        } else {
            println!("{label},{dot},{p_classical},{p_circuit}");
        }
    }
    Ok(0)
}

fn cmd_train(args: &TrainArgs) -> Result<i32> {
    let weights = parse_pattern_arg(&args.weights, Some(args.m))?;
    let n = weights.n_qubits();
    let spec = match args.mode {
        TrainingMode::Global => AnsatzSpec::Global {
            n_qubits: n,
            entangler: args.entangler,
            cycles: args
                .n
                .ok_or_else(|| Error::Argument("--n is required in global mode".into()))?,
        },
        TrainingMode::Local => AnsatzSpec::Local {
            n_qubits: n,
            entangler: args.entangler,
            structure: parse_structure(
                args.structure
                    .as_deref()
                    .ok_or_else(|| Error::Argument("--structure is required in local mode".into()))?,
            )?,
        },
    };
    let estimator = match args.estimator.as_str() {
        "exact" => CostEstimator::Exact,
        "shots" => CostEstimator::Shots {
            shots: args.shots,
            seed: 0,
        },
        other => return Err(Error::Parse(format!("unknown estimator '{other}'"))),
    };
    let optimizer = match args.optimizer.as_str() {
        "nm" => OptimizerConfig::NelderMead {
            options: NelderMeadOptions {
                max_iter: args.max_iter.unwrap_or(NelderMeadOptions::default().max_iter),
                ..NelderMeadOptions::default()
            },
            polish_rounds: 2,
        },
        "spsa" => OptimizerConfig::Spsa(SpsaOptions {
            max_iter: args.max_iter.unwrap_or(SpsaOptions::default().max_iter),
            ..SpsaOptions::default()
        }),
        other => return Err(Error::Parse(format!("unknown optimizer '{other}'"))),
    };

    let results = train_restarts(
        &spec,
        &weights.encode(),
        &optimizer,
        &estimator,
        args.seed,
        args.restarts,
    )?;
    for (r, result) in results.iter().enumerate() {
        println!(
            "restart {r}: fidelity {:.6}, iterations {}, converged {}",
            result.final_fidelity, result.iterations, result.converged
        );
    }
    let best = best_result(&results);
    println!(
        "best: fidelity {:.6} after {} iterations (seed {})",
        best.final_fidelity, best.iterations, best.seed
    );

    if let Some(path) = &args.out {
        let mut text = String::from("iteration,cost,exact_fidelity\n");
        for (t, (c, f)) in best.cost_trace.iter().zip(&best.fidelity_trace).enumerate() {
            text.push_str(&format!("{},{c},{f}\n", t + 1));
        }
        std::fs::write(path, text)?;
        println!("trace written to {}", path.display());
    }
    Ok(0)
}

fn cmd_experiment(args: &ExperimentArgs) -> Result<i32> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let cfg: ExperimentConfig = serde_json::from_str(&text)?;
            if cfg.id != args.id {
                return Err(Error::Config(format!(
                    "config file is for '{}' but '{}' was requested",
                    cfg.id.as_str(),
                    args.id.as_str()
                )));
            }
            cfg
        }
        None => ExperimentConfig::default_for(args.id),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.out_dir = Some(out.clone());
    }

    let report = run_experiment(&cfg)?;
    for line in &report.summary {
        println!("{line}");
    }
    for file in &report.files {
        println!("wrote {}", file.display());
    }
    if report.violations.is_empty() {
        println!("result: PASS");
        Ok(0)
    } else {
        for v in &report.violations {
            eprintln!("violation: {v}");
        }
        println!("result: FAIL ({} violations)", report.violations.len());
        Ok(2)
    }
}

fn main() {
    // Die quietly when the output pipe closes (e.g. `qneuron encode | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }

    if let Ok(value) = std::env::var("QNEURON_WORKERS") {
        if let Ok(workers) = value.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build_global();
        }
    }

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };

    let outcome = match &cli.command {
        Command::Encode(args) => cmd_encode(args),
        Command::Exact(args) => cmd_exact(args),
        Command::Train(args) => cmd_train(args),
        Command::Experiment(args) => cmd_experiment(args),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}
