//! Experiment runners reproducing the headline simulation studies, with
//! machine-readable CSV/JSON output.
//!
//! Every experiment is deterministic for a fixed (config, seed): repeated
//! runs produce byte-identical files.

mod activation;
mod config;
mod depth;
mod output;
mod scaling;
mod sweeps;

pub use activation::{run_activation_compare, ActivationData, ActivationRow};
pub use config::{ExperimentConfig, ExperimentId};
pub use depth::{run_depth_scaling, DepthRow, DepthScalingData, VariationalDepth};
pub use scaling::{
    plateau_iteration, run_iteration_scaling, run_noisy_training, IterationScalingData,
    NoisyModeData, NoisyTrainingData,
};
pub use sweeps::{
    run_global_depth_sweep, run_structure_bars, GlobalSweepData, GlobalSweepSeries, StructureBar,
    StructureBarsData,
};

use std::path::PathBuf;

use crate::encoding::BinaryPattern;
use crate::error::Result;

/// Outcome of one experiment run: human-readable summary lines, violated
/// threshold assertions (empty on a clean pass) and the files written.
#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub id: ExperimentId,
    pub summary: Vec<String>,
    pub violations: Vec<String>,
    pub files: Vec<PathBuf>,
}

impl ExperimentReport {
    fn new(id: ExperimentId) -> Self {
        ExperimentReport {
            id,
            summary: Vec::new(),
            violations: Vec::new(),
            files: Vec::new(),
        }
    }
}

/// The reference weight vector viewed at another register size: widening
/// prepends +1 entries (zero bits in front of the label), narrowing keeps the
/// leading entries of the pattern.
pub fn adapted_weight(label: u64, base_m: usize, n_qubits: usize) -> Result<BinaryPattern> {
    let m = 1usize << n_qubits;
    if m >= base_m {
        BinaryPattern::from_label(label, m)
    } else {
        BinaryPattern::from_label(label >> (base_m - m), m)
    }
}

/// Validates the config and runs the matching experiment.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    match cfg.id {
        ExperimentId::ActivationCompare => Ok(run_activation_compare(cfg)?.1),
        ExperimentId::GlobalDepthSweep => Ok(run_global_depth_sweep(cfg)?.1),
        ExperimentId::StructureBars => Ok(run_structure_bars(cfg)?.1),
        ExperimentId::IterationScaling => Ok(run_iteration_scaling(cfg)?.1),
        ExperimentId::NoisyTraining => Ok(run_noisy_training(cfg)?.1),
        ExperimentId::DepthScaling => Ok(run_depth_scaling(cfg)?.1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adapted_weight_widens_and_narrows() {
        let base = adapted_weight(20032, 16, 4).unwrap();
        assert_eq!(base.label().unwrap(), 20032);

        let wide = adapted_weight(20032, 16, 5).unwrap();
        assert_eq!(wide.len(), 32);
        assert!(wide.entries()[..16].iter().all(|&e| e == 1));
        assert_eq!(&wide.entries()[16..], base.entries());

        let narrow = adapted_weight(20032, 16, 3).unwrap();
        assert_eq!(narrow.entries(), &base.entries()[..8]);

        let tiny = adapted_weight(20032, 16, 2).unwrap();
        assert_eq!(tiny.entries(), &[1, -1, 1, 1]);
    }
}
