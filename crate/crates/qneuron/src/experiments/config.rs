//! Experiment identifiers, configuration and validation.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::ansatz::Entangler;
use crate::error::{Error, Result};
use crate::training::TrainingMode;

/// One identifier per reproducible study.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentId {
    /// Exact vs variational activation probabilities over a spanning input set.
    ActivationCompare,
    /// Global training traces for cycle counts 1..3.
    GlobalDepthSweep,
    /// Final fidelity and depth per local structure.
    StructureBars,
    /// Optimizer iterations to reach a target fidelity, per register size.
    IterationScaling,
    /// SPSA training under measurement shot noise.
    NoisyTraining,
    /// Circuit depth of exact vs variational weight unitaries, per size.
    DepthScaling,
}

impl ExperimentId {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentId::ActivationCompare => "activation_compare",
            ExperimentId::GlobalDepthSweep => "global_depth_sweep",
            ExperimentId::StructureBars => "structure_bars",
            ExperimentId::IterationScaling => "iteration_scaling",
            ExperimentId::NoisyTraining => "noisy_training",
            ExperimentId::DepthScaling => "depth_scaling",
        }
    }

    pub fn all() -> [ExperimentId; 6] {
        [
            ExperimentId::ActivationCompare,
            ExperimentId::GlobalDepthSweep,
            ExperimentId::StructureBars,
            ExperimentId::IterationScaling,
            ExperimentId::NoisyTraining,
            ExperimentId::DepthScaling,
        ]
    }
}

impl std::str::FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentId::all()
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown experiment '{s}'")))
    }
}

/// Configuration shared by all experiments; which fields are required depends
/// on the experiment id. `validate` rejects incomplete combinations.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub id: ExperimentId,
    /// Integer label of the reference weight vector at its base width.
    pub weight_label: u64,
    /// Width (entry count) at which `weight_label` is defined.
    pub base_m: usize,
    pub seed: u64,
    #[serde(default)]
    pub n_qubits: Option<usize>,
    /// Inclusive register-size range for scaling studies.
    #[serde(default)]
    pub n_min: Option<usize>,
    #[serde(default)]
    pub n_max: Option<usize>,
    #[serde(default)]
    pub entangler: Option<Entangler>,
    #[serde(default)]
    pub mode: Option<TrainingMode>,
    #[serde(default)]
    pub cycles: Option<usize>,
    #[serde(default)]
    pub structure: Option<String>,
    #[serde(default)]
    pub structures: Option<Vec<String>>,
    #[serde(default)]
    pub shots: Option<u64>,
    #[serde(default)]
    pub repeats: Option<usize>,
    #[serde(default)]
    pub restarts: Option<usize>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    /// The default (reference) configuration of each experiment.
    pub fn default_for(id: ExperimentId) -> Self {
        let base = ExperimentConfig {
            id,
            weight_label: 20032,
            base_m: 16,
            seed: 2024,
            n_qubits: None,
            n_min: None,
            n_max: None,
            entangler: None,
            mode: None,
            cycles: None,
            structure: None,
            structures: None,
            shots: None,
            repeats: None,
            restarts: None,
            out_dir: None,
        };
        match id {
            ExperimentId::ActivationCompare => ExperimentConfig {
                n_qubits: Some(4),
                entangler: Some(Entangler::AllToAll),
                cycles: Some(3),
                structure: Some("222".into()),
                restarts: Some(40),
                ..base
            },
            ExperimentId::GlobalDepthSweep => ExperimentConfig {
                n_qubits: Some(4),
                entangler: Some(Entangler::NearestNeighbour),
                restarts: Some(10),
                ..base
            },
            ExperimentId::StructureBars => ExperimentConfig {
                n_qubits: Some(4),
                repeats: Some(10),
                ..base
            },
            ExperimentId::IterationScaling => ExperimentConfig {
                n_min: Some(3),
                n_max: Some(6),
                entangler: Some(Entangler::NearestNeighbour),
                repeats: Some(10),
                ..base
            },
            ExperimentId::NoisyTraining => ExperimentConfig {
                n_qubits: Some(5),
                entangler: Some(Entangler::NearestNeighbour),
                shots: Some(1024),
                repeats: Some(5),
                ..base
            },
            ExperimentId::DepthScaling => ExperimentConfig {
                n_min: Some(2),
                n_max: Some(7),
                restarts: Some(5),
                ..base
            },
        }
    }

    fn require<T: Copy>(field: Option<T>, name: &str, id: ExperimentId) -> Result<T> {
        field.ok_or_else(|| {
            Error::Config(format!("experiment '{}' requires field '{name}'", id.as_str()))
        })
    }

    /// Checks that every field the experiment needs is present and coherent.
    pub fn validate(&self) -> Result<()> {
        if self.base_m < 2 || !self.base_m.is_power_of_two() {
            return Err(Error::Config(format!(
                "base_m {} is not a power of two ≥ 2",
                self.base_m
            )));
        }
        if self.base_m < 64 && self.weight_label >= 1u64 << self.base_m {
            return Err(Error::Config(format!(
                "weight label {} out of range for base_m {}",
                self.weight_label, self.base_m
            )));
        }
        match self.id {
            ExperimentId::ActivationCompare => {
                Self::require(self.n_qubits, "n_qubits", self.id)?;
                Self::require(self.entangler, "entangler", self.id)?;
                Self::require(self.cycles, "cycles", self.id)?;
                if self.structure.is_none() {
                    return Err(Error::Config(
                        "experiment 'activation_compare' requires field 'structure'".into(),
                    ));
                }
                Self::require(self.restarts, "restarts", self.id)?;
            }
            ExperimentId::GlobalDepthSweep => {
                Self::require(self.n_qubits, "n_qubits", self.id)?;
                Self::require(self.entangler, "entangler", self.id)?;
                Self::require(self.restarts, "restarts", self.id)?;
            }
            ExperimentId::StructureBars => {
                Self::require(self.n_qubits, "n_qubits", self.id)?;
                Self::require(self.repeats, "repeats", self.id)?;
            }
            ExperimentId::IterationScaling => {
                let lo = Self::require(self.n_min, "n_min", self.id)?;
                let hi = Self::require(self.n_max, "n_max", self.id)?;
                if lo < 2 || hi < lo {
                    return Err(Error::Config(format!("bad register range {lo}..={hi}")));
                }
                Self::require(self.entangler, "entangler", self.id)?;
                Self::require(self.repeats, "repeats", self.id)?;
            }
            ExperimentId::NoisyTraining => {
                Self::require(self.n_qubits, "n_qubits", self.id)?;
                Self::require(self.entangler, "entangler", self.id)?;
                Self::require(self.shots, "shots", self.id)?;
                Self::require(self.repeats, "repeats", self.id)?;
            }
            ExperimentId::DepthScaling => {
                let lo = Self::require(self.n_min, "n_min", self.id)?;
                let hi = Self::require(self.n_max, "n_max", self.id)?;
                if lo < 2 || hi < lo {
                    return Err(Error::Config(format!("bad register range {lo}..={hi}")));
                }
                Self::require(self.restarts, "restarts", self.id)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        for id in ExperimentId::all() {
            let cfg = ExperimentConfig::default_for(id);
            cfg.validate().unwrap_or_else(|e| panic!("{}: {e}", id.as_str()));
        }
    }

    #[test]
    fn missing_fields_are_rejected() {
        let mut cfg = ExperimentConfig::default_for(ExperimentId::NoisyTraining);
        cfg.shots = None;
        assert!(cfg.validate().is_err());

        let mut cfg = ExperimentConfig::default_for(ExperimentId::DepthScaling);
        cfg.n_min = Some(9);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = ExperimentConfig::default_for(ExperimentId::ActivationCompare);
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back.id, cfg.id);
        assert_eq!(back.structure, cfg.structure);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"id":"depth_scaling","weight_label":1,"base_m":16,"seed":1,"bogus":3}"#;
        assert!(serde_json::from_str::<ExperimentConfig>(text).is_err());
    }
}
