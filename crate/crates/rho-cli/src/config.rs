//! Experiment configuration: the JSON file schema, command-line overrides,
//! and resolution against per-experiment defaults.
//!
//! A configuration names a registry entry and optionally overrides sample
//! size, replication count, seed, worker count, kernel selection, estimator
//! subset, output directory, and experiment parameters.  Command-line flags
//! take precedence over file values; anything unspecified falls back to the
//! experiment's own defaults.  Unknown JSON keys are rejected so typos fail
//! loudly instead of silently running the default.

use std::fs;
use std::path::{Path, PathBuf};

use rho_core::PsiKind;
use serde::{Deserialize, Serialize};

/// Configuration-level failure: maps to process exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config file {path} is not valid JSON: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("unknown experiment `{0}` (see `rho list`)")]
    UnknownExperiment(String),
    #[error("estimator `{estimator}` does not apply to experiment `{experiment}` (allowed: {allowed})")]
    InapplicableEstimator {
        experiment: String,
        estimator: String,
        allowed: String,
    },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Kernel selection: run both bounded kernels (the default) or a single one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiChoice {
    Both,
    Psi1,
    Psi2,
}

impl PsiChoice {
    /// The kernels this choice expands to, in reporting order.
    pub fn kinds(self) -> &'static [PsiKind] {
        match self {
            PsiChoice::Both => &[PsiKind::Psi1, PsiKind::Psi2],
            PsiChoice::Psi1 => &[PsiKind::Psi1],
            PsiChoice::Psi2 => &[PsiKind::Psi2],
        }
    }

    /// Reporting label for a kernel (`psi1` / `psi2`).
    pub fn label(kind: PsiKind) -> &'static str {
        match kind {
            PsiKind::Psi1 => "psi1",
            PsiKind::Psi2 => "psi2",
            PsiKind::HalfLog => "half_log",
        }
    }
}

impl Default for PsiChoice {
    fn default() -> Self {
        PsiChoice::Both
    }
}

/// Free experiment parameters.  Every field is optional; experiments
/// document which ones they read and supply defaults for the rest.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Params {
    /// Penalty calibration constant κ (penalized selection only).
    pub kappa: Option<f64>,
    /// True parameter value where an experiment has a scalar truth.
    pub theta: Option<f64>,
    /// Injected outlier value.
    pub outlier_value: Option<f64>,
    /// Mixture weights α to sweep (approximate-model experiment).
    pub alphas: Option<Vec<f64>>,
    /// Deviation thresholds c (the event |θ̂ − θ₀| > c/n).
    pub c_values: Option<Vec<f64>>,
    /// Contamination rates ε to sweep.
    pub epsilons: Option<Vec<f64>>,
    /// Outlier index fractions |I|/n to sweep.
    pub outlier_fractions: Option<Vec<f64>>,
    /// Lattice / grid step where an experiment discretizes a parameter.
    pub grid_step: Option<f64>,
}

/// The JSON file schema.  All fields optional; `experiment` may also come
/// from the command line (the flag wins on conflict — flags override file
/// values throughout).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FileConfig {
    pub experiment: Option<String>,
    pub n: Option<usize>,
    pub reps: Option<usize>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub psi: Option<PsiChoice>,
    pub estimators: Option<Vec<String>>,
    pub out_dir: Option<PathBuf>,
    pub params: Params,
}

impl FileConfig {
    /// Parse a config file.  A missing path yields the empty configuration.
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Command-line overrides for [`FileConfig`] values.
#[derive(Debug, Clone, Default)]
pub struct CliOverrides {
    pub reps: Option<usize>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out_dir: Option<PathBuf>,
}

/// A fully resolved run: every knob has a concrete value.
#[derive(Debug, Clone)]
pub struct RunSettings {
    pub experiment: String,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    /// Worker threads; 0 lets the pool pick.  Results are identical for any
    /// value by the determinism contract.
    pub threads: usize,
    pub psi: PsiChoice,
    /// Estimator subset; `None` runs the experiment's full set.
    pub estimators: Option<Vec<String>>,
    pub out_dir: PathBuf,
    pub params: Params,
}

impl RunSettings {
    /// Merge file values and command-line overrides on top of experiment
    /// defaults.  `defaults` comes from the registry entry.
    pub fn resolve(
        experiment: &str,
        file: &FileConfig,
        cli: &CliOverrides,
        defaults: (usize, usize, u64),
    ) -> Result<Self, ConfigError> {
        let (def_n, def_reps, def_seed) = defaults;
        let settings = RunSettings {
            experiment: experiment.to_string(),
            n: file.n.unwrap_or(def_n),
            reps: cli.reps.or(file.reps).unwrap_or(def_reps),
            seed: cli.seed.or(file.seed).unwrap_or(def_seed),
            threads: cli.threads.or(file.threads).unwrap_or(0),
            psi: file.psi.unwrap_or_default(),
            estimators: file.estimators.clone(),
            out_dir: cli
                .out_dir
                .clone()
                .or_else(|| file.out_dir.clone())
                .unwrap_or_else(|| PathBuf::from("out")),
            params: file.params.clone(),
        };
        if settings.n == 0 {
            return Err(ConfigError::Invalid("sample size n must be at least 1".into()));
        }
        if settings.reps == 0 {
            return Err(ConfigError::Invalid("replication count must be at least 1".into()));
        }
        if let Some(est) = &settings.estimators {
            if est.is_empty() {
                return Err(ConfigError::Invalid("estimator list must not be empty".into()));
            }
        }
        Ok(settings)
    }

    /// Whether `name` is part of this run's estimator subset.
    pub fn wants(&self, name: &str) -> bool {
        match &self.estimators {
            None => true,
            Some(list) => list.iter().any(|e| e == name),
        }
    }

    /// Directory that receives this run's record and summary files.
    pub fn experiment_dir(&self) -> PathBuf {
        self.out_dir.join(&self.experiment)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_values() {
        let file = FileConfig {
            reps: Some(7),
            seed: Some(3),
            ..FileConfig::default()
        };
        let cli = CliOverrides {
            reps: Some(11),
            ..CliOverrides::default()
        };
        let s = RunSettings::resolve("demo", &file, &cli, (10, 5, 1)).unwrap();
        assert_eq!(s.reps, 11);
        assert_eq!(s.seed, 3);
        assert_eq!(s.n, 10);
        assert_eq!(s.threads, 0);
    }

    #[test]
    fn unknown_keys_rejected() {
        let parsed: Result<FileConfig, _> = serde_json::from_str(r#"{"repz": 3}"#);
        assert!(parsed.is_err());
    }

    #[test]
    fn zero_counts_rejected() {
        let file = FileConfig {
            reps: Some(0),
            ..FileConfig::default()
        };
        let err = RunSettings::resolve("demo", &file, &CliOverrides::default(), (10, 5, 1));
        assert!(err.is_err());
    }

    #[test]
    fn estimator_subset_lookup() {
        let mut s =
            RunSettings::resolve("demo", &FileConfig::default(), &CliOverrides::default(), (10, 5, 1)).unwrap();
        assert!(s.wants("rho"));
        s.estimators = Some(vec!["median".into()]);
        assert!(s.wants("median"));
        assert!(!s.wants("rho"));
    }

    #[test]
    fn psi_choice_expansion() {
        assert_eq!(PsiChoice::Both.kinds().len(), 2);
        assert_eq!(PsiChoice::Psi2.kinds(), &[PsiKind::Psi2]);
        assert_eq!(PsiChoice::label(PsiKind::Psi1), "psi1");
    }
}
