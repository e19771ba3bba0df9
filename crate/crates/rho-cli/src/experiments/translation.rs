//! Translation family with an unbounded likelihood.
//!
//! The generating density has an integrable |x|^{−1/2} singularity at its
//! center and x^{−2} tails: translating it so the singular point sits on any
//! observation sends the likelihood to +∞, so the maximum-likelihood
//! estimator over the translation family is meaningless.  The empirical
//! median and the minimax comparison estimator both behave — the record set
//! tracks the rescaled error n·|θ̂ − θ₀|, whose distribution stays tight as
//! n grows (the singular center carries enough mass for a 1/n rate).

use rho_core::{
    build_location_family, make_rng, rho_estimate, sample_law, sample_median, CandidateFamily,
    DensitySpec, EngineOptions, TrueLaw,
};
use serde_json::{json, Value};

use crate::config::{ConfigError, PsiChoice, RunSettings};
use crate::experiments::{record, Experiment, HarnessError};
use crate::report::Record;

pub struct UnboundedLikelihoodTranslation;

/// θ grid: step 0.02 over [−2, 2].
fn theta_grid(step: f64) -> Vec<f64> {
    let half = (2.0 / step).round() as i64;
    (-half..=half).map(|k| k as f64 * step).collect()
}

fn family(step: f64) -> Result<CandidateFamily, HarnessError> {
    let base = DensitySpec::heavy_tail(0.0)?;
    Ok(build_location_family(&base, &theta_grid(step), "heavy-tail translations")?)
}

impl Experiment for UnboundedLikelihoodTranslation {
    fn name(&self) -> &'static str {
        "unbounded_likelihood_translation"
    }

    fn describe(&self) -> &'static str {
        "singular heavy-tail translation model where the likelihood is unbounded; median and bounded-kernel estimators track θ₀ at rate 1/n"
    }

    fn defaults(&self) -> (usize, usize, u64) {
        (100, 200, 102)
    }

    fn estimators(&self) -> &'static [&'static str] {
        &["rho", "median"]
    }

    fn validate(&self, s: &RunSettings) -> Result<(), ConfigError> {
        let step = s.params.grid_step.unwrap_or(0.02);
        if !(step.is_finite() && step > 0.0 && step <= 1.0) {
            return Err(ConfigError::Invalid(format!("grid_step must lie in (0, 1], got {step}")));
        }
        let theta = s.params.theta.unwrap_or(0.0);
        if !(theta.is_finite() && theta.abs() <= 1.0) {
            return Err(ConfigError::Invalid(format!(
                "theta must lie in [−1, 1] so the grid covers it, got {theta}"
            )));
        }
        Ok(())
    }

    fn run_rep(&self, s: &RunSettings, rep: usize) -> Result<Vec<Record>, HarnessError> {
        let step = s.params.grid_step.unwrap_or(0.02);
        let theta0 = s.params.theta.unwrap_or(0.0);
        let fam = family(step)?;
        let law = TrueLaw::Density(DensitySpec::heavy_tail(theta0)?);
        let mut rng = make_rng(s.seed, rep as u64);
        let data = sample_law(&law, s.n, &mut rng)?;
        let n = s.n as f64;
        let mut out = Vec::new();

        if s.wants("rho") {
            let opts = EngineOptions::default();
            for &kind in s.psi.kinds() {
                let fit = rho_estimate(&data, &fam, kind, &opts)?;
                let theta = match fam.members()[fit.member_index] {
                    DensitySpec::HeavyTailP { shift } => shift,
                    _ => unreachable!("translation members are heavy-tail densities"),
                };
                let err = theta - theta0;
                out.push(record(
                    s,
                    rep,
                    format!("rho_{}", PsiChoice::label(kind)),
                    format!("{theta}"),
                    None,
                    Some(err * err),
                    format!("scaled_abs_err={}", n * err.abs()),
                ));
            }
        }
        if s.wants("median") {
            let xs = data.scalars().expect("scalar experiment");
            let med = sample_median(xs)?;
            let err = med - theta0;
            out.push(record(
                s,
                rep,
                "median",
                format!("{med}"),
                None,
                Some(err * err),
                format!("scaled_abs_err={}", n * err.abs()),
            ));
        }
        Ok(out)
    }

    fn extras(&self, s: &RunSettings, records: &[Record]) -> Value {
        // report the empirical n·|error| distribution per estimator; the
        // rate claim is qualitative, so no bound is asserted here
        let mut per = Vec::new();
        for est in ["rho_psi1", "rho_psi2", "median"] {
            let mut scaled: Vec<f64> = records
                .iter()
                .filter(|r| r.estimator == est)
                .filter_map(|r| crate::report::flag_value(&r.flags, "scaled_abs_err"))
                .filter_map(|v| v.parse().ok())
                .collect();
            if scaled.is_empty() {
                continue;
            }
            scaled.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mid = scaled[(scaled.len() - 1) / 2];
            let high = scaled[((scaled.len() * 9) / 10).min(scaled.len() - 1)];
            per.push(json!({
                "estimator": est,
                "median_scaled_abs_err": mid,
                "p90_scaled_abs_err": high,
            }));
        }
        json!({
            "n": s.n,
            "scaled_error_distribution": per,
        })
    }
}
