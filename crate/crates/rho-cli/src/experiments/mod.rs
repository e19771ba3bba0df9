//! The experiment registry.
//!
//! Each experiment is a self-contained Monte Carlo demonstration: it names
//! its generating law, model family, estimator rows, and loss columns, and
//! produces one record batch per replication from a dedicated RNG stream.
//! The registry order is stable; `rho list` prints it.

use rho_core::{CoreError, DiscreteDensity};
use serde_json::Value;

use crate::config::{ConfigError, RunSettings};
use crate::report::Record;

mod contamination;
mod convex;
mod equidistribution;
mod mixture;
mod outlier_scale;
mod pathological;
mod regression;
mod submodel;
mod translation;
mod truncation;

/// Runtime failure while executing a run (distinct from configuration
/// errors, which are caught before any replication starts).
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("estimation failure: {0}")]
    Core(#[from] CoreError),
    #[error("report failure: {0}")]
    Report(String),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("worker pool failure: {0}")]
    Pool(String),
}

/// One registry entry.
pub trait Experiment: Sync {
    /// Registry key, also the output subdirectory name.
    fn name(&self) -> &'static str;
    /// One-line description for `rho list`.
    fn describe(&self) -> &'static str;
    /// Default (n, reps, seed).
    fn defaults(&self) -> (usize, usize, u64);
    /// Estimator names this experiment can run (the config's `estimators`
    /// field must stay within this set).
    fn estimators(&self) -> &'static [&'static str];
    /// Flag keys that define sweep positions for summary grouping.
    fn sweep_keys(&self) -> &'static [&'static str] {
        &[]
    }
    /// Experiment-specific configuration checks beyond the generic ones.
    fn validate(&self, _s: &RunSettings) -> Result<(), ConfigError> {
        Ok(())
    }
    /// Produce the records of one replication.  Deterministic given
    /// (settings, rep): all randomness must come from the rep's RNG stream.
    fn run_rep(&self, s: &RunSettings, rep: usize) -> Result<Vec<Record>, HarnessError>;
    /// Bound comparisons and other experiment-level summary content.
    fn extras(&self, _s: &RunSettings, _records: &[Record]) -> Value {
        Value::Null
    }
}

/// All experiments in registry order.
pub fn registry() -> &'static [&'static dyn Experiment] {
    static REGISTRY: [&dyn Experiment; 10] = [
        &outlier_scale::OutlierUniformScale,
        &translation::UnboundedLikelihoodTranslation,
        &submodel::GaussianSubmodel,
        &pathological::PathologicalMle,
        &mixture::ApproxModelMixture,
        &contamination::ContaminationDensity,
        &equidistribution::EquidistributionOutliers,
        &convex::ConvexMleEquivalence,
        &regression::RegressionHeavyTail,
        &truncation::ExponentialTruncationCheck,
    ];
    &REGISTRY
}

/// Look an experiment up by its registry key.
pub fn find(name: &str) -> Result<&'static dyn Experiment, ConfigError> {
    registry()
        .iter()
        .copied()
        .find(|e| e.name() == name)
        .ok_or_else(|| ConfigError::UnknownExperiment(name.to_string()))
}

/// Generic validation shared by all experiments: the estimator subset must
/// be applicable.
pub fn validate(exp: &dyn Experiment, s: &RunSettings) -> Result<(), ConfigError> {
    if let Some(requested) = &s.estimators {
        for est in requested {
            if !exp.estimators().contains(&est.as_str()) {
                return Err(ConfigError::InapplicableEstimator {
                    experiment: exp.name().to_string(),
                    estimator: est.clone(),
                    allowed: exp.estimators().join(", "),
                });
            }
        }
    }
    exp.validate(s)
}

/// Record constructor with the run's invariant columns filled in.
pub(crate) fn record(
    s: &RunSettings,
    rep: usize,
    estimator: impl Into<String>,
    estimate: impl Into<String>,
    h2_loss: Option<f64>,
    sq_loss: Option<f64>,
    flags: impl Into<String>,
) -> Record {
    Record {
        experiment: s.experiment.clone(),
        rep,
        seed: s.seed,
        estimator: estimator.into(),
        estimate: estimate.into(),
        h2_loss,
        sq_loss,
        flags: flags.into(),
    }
}

/// Exact squared Hellinger distance between two finite mass vectors over a
/// common abstract support (used where both the truth and the estimate are
/// piecewise constant on known cells).
pub(crate) fn discrete_h2(truth: &[f64], estimate: &[f64]) -> Result<f64, HarnessError> {
    let support: Vec<f64> = (0..truth.len()).map(|i| i as f64).collect();
    let p = DiscreteDensity::new(support.clone(), truth.to_vec())?;
    let q = DiscreteDensity::new(support, estimate.to_vec())?;
    Ok(rho_core::hellinger2_discrete(&p, &q)?)
}

/// Binomial Monte Carlo standard error at frequency `p` over `reps` draws,
/// with the frequency floored at `p_floor` so a zero empirical count still
/// yields a usable band.
pub(crate) fn binomial_se(p: f64, p_floor: f64, reps: usize) -> f64 {
    let p = p.max(p_floor).clamp(0.0, 1.0);
    (p * (1.0 - p) / reps as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique_and_stable() {
        let names: Vec<_> = registry().iter().map(|e| e.name()).collect();
        let mut dedup = names.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), names.len());
        assert_eq!(names[0], "outlier_uniform_scale");
        assert_eq!(names[9], "exponential_truncation_check");
        assert!(find("no_such_thing").is_err());
        assert_eq!(find("pathological_mle").unwrap().name(), "pathological_mle");
    }

    #[test]
    fn estimator_subsets_are_validated() {
        let exp = find("unbounded_likelihood_translation").unwrap();
        let mut s = crate::config::RunSettings::resolve(
            exp.name(),
            &crate::config::FileConfig::default(),
            &crate::config::CliOverrides::default(),
            exp.defaults(),
        )
        .unwrap();
        assert!(validate(exp, &s).is_ok());
        s.estimators = Some(vec!["mle".into()]);
        assert!(matches!(
            validate(exp, &s),
            Err(ConfigError::InapplicableEstimator { .. })
        ));
    }

    #[test]
    fn discrete_h2_of_identical_masses_is_zero() {
        let h2 = discrete_h2(&[0.4, 0.6], &[0.4, 0.6]).unwrap();
        assert_eq!(h2, 0.0);
        let h2 = discrete_h2(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!((h2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn binomial_se_uses_floor() {
        assert_eq!(binomial_se(0.0, 0.0, 100), 0.0);
        let banded = binomial_se(0.0, 1e-4, 10_000);
        assert!(banded > 0.0);
    }
}
