//! Density estimation with a fixed block of corrupted observations.
//!
//! Same four-cell histogram truth and candidate lattice as the
//! ε-contamination run, but the corruption is adversarial rather than
//! random: a fixed fraction of positions is overwritten with the constant
//! 2.5, outside every candidate's support.  The loss is measured against
//! the clean base law — corrupted points carry no information about it, so
//! the question is purely how much the block distorts the fit.  The slope
//! check mirrors the contamination run: excess risk at fraction f stays
//! below 2f plus Monte Carlo noise.

use rho_core::{make_rng, rho_estimate, sample_law, EngineOptions, TrueLaw};
use serde_json::{json, Value};

use crate::config::{ConfigError, PsiChoice, RunSettings};
use crate::experiments::contamination::{
    base_density, histogram_family, member_estimate_string, member_masses, slope_checks, TRUTH_LEVELS,
};
use crate::experiments::{discrete_h2, record, Experiment, HarnessError};
use crate::report::Record;

pub struct EquidistributionOutliers;

fn fractions(s: &RunSettings) -> Vec<f64> {
    s.params.outlier_fractions.clone().unwrap_or_else(|| vec![0.0, 0.05, 0.1])
}

impl Experiment for EquidistributionOutliers {
    fn name(&self) -> &'static str {
        "equidistribution_outliers"
    }

    fn describe(&self) -> &'static str {
        "a fixed fraction of observations overwritten outside the candidate support; risk against the clean law grows at most linearly in the fraction"
    }

    fn defaults(&self) -> (usize, usize, u64) {
        (200, 400, 107)
    }

    fn estimators(&self) -> &'static [&'static str] {
        &["rho"]
    }

    fn sweep_keys(&self) -> &'static [&'static str] {
        &["frac"]
    }

    fn validate(&self, s: &RunSettings) -> Result<(), ConfigError> {
        for f in fractions(s) {
            if !(f.is_finite() && (0.0..0.5).contains(&f)) {
                return Err(ConfigError::Invalid(format!(
                    "outlier fractions must lie in [0, 0.5), got {f}"
                )));
            }
        }
        if !fractions(s).contains(&0.0) {
            return Err(ConfigError::Invalid(
                "the sweep needs the clean point frac = 0 as the slope reference".into(),
            ));
        }
        Ok(())
    }

    fn run_rep(&self, s: &RunSettings, rep: usize) -> Result<Vec<Record>, HarnessError> {
        let fam = histogram_family()?;
        let base = base_density()?;
        let opts = EngineOptions::default();
        let mut rng = make_rng(s.seed, rep as u64);
        // clean masses on the five comparison cells (nothing on [2, 3])
        let truth_masses: Vec<f64> =
            TRUTH_LEVELS.iter().map(|l| l * 0.25).chain([0.0]).collect();
        let mut out = Vec::new();

        for frac in fractions(s) {
            let k = (frac * s.n as f64).round() as usize;
            let law = TrueLaw::OutlierInjected {
                base: Box::new(TrueLaw::Density(base.clone())),
                indices: (0..k).collect(),
                values: vec![2.5; k],
            };
            let data = sample_law(&law, s.n, &mut rng)?;

            if s.wants("rho") {
                for &kind in s.psi.kinds() {
                    let fit = rho_estimate(&data, &fam, kind, &opts)?;
                    let h2 = discrete_h2(&truth_masses, &member_masses(&fam, fit.member_index))?;
                    out.push(record(
                        s,
                        rep,
                        format!("rho_{}", PsiChoice::label(kind)),
                        member_estimate_string(&fam, fit.member_index),
                        Some(h2),
                        None,
                        format!("frac={frac}"),
                    ));
                }
            }
        }
        Ok(out)
    }

    fn extras(&self, s: &RunSettings, records: &[Record]) -> Value {
        let estimators: Vec<String> = s
            .psi
            .kinds()
            .iter()
            .map(|k| format!("rho_{}", PsiChoice::label(*k)))
            .collect();
        json!({
            "slope_checks": slope_checks(records, "frac", &fractions(s), &estimators),
        })
    }
}
