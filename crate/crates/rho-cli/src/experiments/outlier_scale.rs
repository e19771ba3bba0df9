//! One gross outlier in a uniform scale family.
//!
//! The data are uniform on [0, θ₀] except for a single observation pinned at
//! the top of the parameter grid.  The maximum-likelihood estimator over the
//! grid of U[0, θ] candidates must cover every observation, so one outlier
//! drags it to the outlier's value — a relative error of two orders of
//! magnitude.  The minimax comparison estimator pays at most a bounded
//! per-observation price and stays next to θ₀.
//!
//! Rows: per-replication `mle` and `rho_psi*` estimates at the configured
//! sample size, plus a replication-0 `mle` row at n = 10⁶ showing that scale
//! does not rescue the likelihood.

use rho_core::{
    build_uniform_scale_family, mle_estimate, rho_estimate, sample_law, make_rng, CandidateFamily,
    DensitySpec, EngineOptions, PsiKind, TrueLaw,
};
use serde_json::{json, Value};

use crate::config::{ConfigError, PsiChoice, RunSettings};
use crate::experiments::{record, Experiment, HarnessError};
use crate::report::Record;

pub struct OutlierUniformScale;

/// θ grid: k/100 for k = 1..=10⁴, i.e. step 0.01 up to exactly 100.
fn theta_grid() -> Vec<f64> {
    (1..=10_000).map(|k| k as f64 / 100.0).collect()
}

fn family() -> CandidateFamily {
    build_uniform_scale_family(&theta_grid(), "uniform-scale grid").expect("static grid is valid")
}

fn truth(s: &RunSettings) -> TrueLaw {
    TrueLaw::OutlierInjected {
        base: Box::new(TrueLaw::UniformScale {
            theta: s.params.theta.unwrap_or(1.0),
        }),
        indices: vec![0],
        values: vec![s.params.outlier_value.unwrap_or(100.0)],
    }
}

/// The selected scale of an estimate over the grid.
fn selected_theta(family: &CandidateFamily, member: usize) -> f64 {
    match family.members()[member] {
        DensitySpec::UniformInterval { hi, .. } => hi,
        _ => unreachable!("scale family members are uniform intervals"),
    }
}

impl Experiment for OutlierUniformScale {
    fn name(&self) -> &'static str {
        "outlier_uniform_scale"
    }

    fn describe(&self) -> &'static str {
        "one observation pinned at the grid top wrecks the likelihood over U[0, θ] candidates; the bounded-kernel estimator stays at θ₀"
    }

    fn defaults(&self) -> (usize, usize, u64) {
        (10_000, 200, 101)
    }

    fn estimators(&self) -> &'static [&'static str] {
        &["rho", "mle"]
    }

    fn validate(&self, s: &RunSettings) -> Result<(), ConfigError> {
        let theta = s.params.theta.unwrap_or(1.0);
        if !(theta.is_finite() && theta > 0.0) {
            return Err(ConfigError::Invalid(format!("theta must be positive, got {theta}")));
        }
        let outlier = s.params.outlier_value.unwrap_or(100.0);
        if !(outlier.is_finite() && outlier > 0.0) {
            return Err(ConfigError::Invalid(format!(
                "outlier_value must be positive, got {outlier}"
            )));
        }
        Ok(())
    }

    fn run_rep(&self, s: &RunSettings, rep: usize) -> Result<Vec<Record>, HarnessError> {
        let fam = family();
        let theta0 = s.params.theta.unwrap_or(1.0);
        let law = truth(s);
        let mut rng = make_rng(s.seed, rep as u64);
        let data = sample_law(&law, s.n, &mut rng)?;
        let mut out = Vec::new();

        if s.wants("mle") {
            let fit = mle_estimate(&data, &fam)?;
            let theta = selected_theta(&fam, fit.member_index);
            let err = theta - theta0;
            out.push(record(s, rep, "mle", format!("{theta}"), None, Some(err * err), ""));
        }
        if s.wants("rho") {
            let opts = EngineOptions::default();
            for &kind in s.psi.kinds() {
                let fit = rho_estimate(&data, &fam, kind, &opts)?;
                let theta = selected_theta(&fam, fit.member_index);
                let err = theta - theta0;
                out.push(record(
                    s,
                    rep,
                    format!("rho_{}", PsiChoice::label(kind)),
                    format!("{theta}"),
                    None,
                    Some(err * err),
                    "",
                ));
            }
        }
        // the likelihood failure is not a small-sample artifact: repeat the
        // covering-scale argument at a hundred times the sample size
        if rep == 0 && s.wants("mle") {
            let wide = sample_law(&law, 1_000_000, &mut rng)?;
            let fit = mle_estimate(&wide, &fam)?;
            let theta = selected_theta(&fam, fit.member_index);
            let err = theta - theta0;
            out.push(record(
                s,
                rep,
                "mle",
                format!("{theta}"),
                None,
                Some(err * err),
                "n=1000000",
            ));
        }
        Ok(out)
    }

    fn extras(&self, s: &RunSettings, records: &[Record]) -> Value {
        let theta0 = s.params.theta.unwrap_or(1.0);
        let band = (0.98, 1.05);
        let mut per_psi = Vec::new();
        for kind in [PsiKind::Psi1, PsiKind::Psi2] {
            let name = format!("rho_{}", PsiChoice::label(kind));
            let estimates: Vec<f64> = records
                .iter()
                .filter(|r| r.estimator == name)
                .filter_map(|r| r.estimate.parse().ok())
                .collect();
            if estimates.is_empty() {
                continue;
            }
            let inside = estimates.iter().filter(|t| **t >= band.0 && **t <= band.1).count();
            per_psi.push(json!({
                "estimator": name,
                "band": [band.0, band.1],
                "in_band_frequency": inside as f64 / estimates.len() as f64,
                "target_frequency": 0.99,
            }));
        }
        let mle_at_top = records
            .iter()
            .filter(|r| r.estimator == "mle")
            .filter(|r| r.estimate.parse::<f64>().ok() == Some(s.params.outlier_value.unwrap_or(100.0)))
            .count();
        json!({
            "theta0": theta0,
            "rho_band_checks": per_psi,
            "mle_rows_at_outlier_value": mle_at_top,
        })
    }
}
