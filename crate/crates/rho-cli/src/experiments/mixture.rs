//! Unit-interval location with a far-away contaminating cluster.
//!
//! Observations are uniform on [θ₀, θ₀+1], except that with probability α
//! a draw lands in the decoy cluster [100+θ₀, 101+θ₀].  The candidate grid
//! holds unit intervals both near zero (step 1/n) and around the decoy, so
//! nothing stops an estimator from electing the wrong cluster — except
//! arithmetic.  For α < 1/2 the majority cluster wins every pairwise
//! comparison, giving the deviation bound
//! P(|θ̂ − θ₀| > c/n) ≤ e^{−n(1−2α)²/2} + 2e^{−(1−α)c}.  The likelihood,
//! by contrast, is −∞ for every candidate as soon as both clusters are
//! occupied, which at n = 100 is the rule rather than the exception.

use rho_core::{
    make_rng, mle_estimate, rho_estimate, sample_law, CandidateFamily, DensitySpec, EngineOptions, FamilyStructure,
    TrueLaw,
};
use serde_json::{json, Value};

use crate::config::{ConfigError, PsiChoice, RunSettings};
use crate::experiments::{binomial_se, record, Experiment, HarnessError};
use crate::report::{flag_value, Record};

pub struct ApproxModelMixture;

const DEFAULT_ALPHAS: [f64; 4] = [0.0, 0.05, 0.1, 0.2];
const DEFAULT_CS: [f64; 3] = [2.0, 5.0, 10.0];

fn alphas(s: &RunSettings) -> Vec<f64> {
    s.params.alphas.clone().unwrap_or_else(|| DEFAULT_ALPHAS.to_vec())
}

fn c_values(s: &RunSettings) -> Vec<f64> {
    s.params.c_values.clone().unwrap_or_else(|| DEFAULT_CS.to_vec())
}

/// Unit-interval candidates: lo ∈ [−1, 1] step 0.01 plus lo ∈ [99, 101]
/// step 0.25 around the decoy cluster.
fn family() -> Result<CandidateFamily, HarnessError> {
    let mut los: Vec<f64> = (-100..=100).map(|k| k as f64 / 100.0).collect();
    los.extend((0..=8).map(|k| 99.0 + k as f64 * 0.25));
    let members = los
        .iter()
        .map(|&lo| DensitySpec::uniform(lo, lo + 1.0))
        .collect::<Result<Vec<_>, _>>()?;
    // equal-height indicator members: selection reduces to coverage counting
    Ok(CandidateFamily::new("unit intervals with decoy block", members)?
        .with_structure(FamilyStructure::IndicatorLevel)?)
}

fn member_lo(fam: &CandidateFamily, ix: usize) -> f64 {
    match fam.members()[ix] {
        DensitySpec::UniformInterval { lo, .. } => lo,
        _ => unreachable!("unit-interval members"),
    }
}

impl Experiment for ApproxModelMixture {
    fn name(&self) -> &'static str {
        "approx_model_mixture"
    }

    fn describe(&self) -> &'static str {
        "uniform location with an α-weighted decoy cluster at +100; sub-exponential deviation for the bounded kernel, likelihood −∞ for every candidate"
    }

    fn defaults(&self) -> (usize, usize, u64) {
        (100, 10_000, 105)
    }

    fn estimators(&self) -> &'static [&'static str] {
        &["rho", "mle"]
    }

    fn sweep_keys(&self) -> &'static [&'static str] {
        &["alpha"]
    }

    fn validate(&self, s: &RunSettings) -> Result<(), ConfigError> {
        for a in alphas(s) {
            if !(a.is_finite() && (0.0..0.5).contains(&a)) {
                return Err(ConfigError::Invalid(format!(
                    "mixture weights must lie in [0, 0.5), got {a}"
                )));
            }
        }
        for c in c_values(s) {
            if !(c.is_finite() && c > 0.0) {
                return Err(ConfigError::Invalid(format!("deviation scales must be positive, got {c}")));
            }
        }
        let theta = s.params.theta.unwrap_or(0.0);
        if !(theta.is_finite() && theta.abs() <= 0.5) {
            return Err(ConfigError::Invalid(format!(
                "theta must lie in [−0.5, 0.5] so the grid covers it, got {theta}"
            )));
        }
        Ok(())
    }

    fn run_rep(&self, s: &RunSettings, rep: usize) -> Result<Vec<Record>, HarnessError> {
        let theta0 = s.params.theta.unwrap_or(0.0);
        let fam = family()?;
        let opts = EngineOptions::default();
        let mut rng = make_rng(s.seed, rep as u64);
        let mut out = Vec::new();

        for alpha in alphas(s) {
            let law = TrueLaw::MixtureAlphaTheta { alpha, theta: theta0 };
            let data = sample_law(&law, s.n, &mut rng)?;

            if s.wants("rho") {
                for &kind in s.psi.kinds() {
                    let fit = rho_estimate(&data, &fam, kind, &opts)?;
                    let theta = member_lo(&fam, fit.member_index);
                    let err = theta - theta0;
                    out.push(record(
                        s,
                        rep,
                        format!("rho_{}", PsiChoice::label(kind)),
                        format!("{theta}"),
                        None,
                        Some(err * err),
                        format!("alpha={alpha}"),
                    ));
                }
            }
            if s.wants("mle") {
                let fit = mle_estimate(&data, &fam)?;
                if fit.degenerate {
                    out.push(record(
                        s,
                        rep,
                        "mle",
                        "-inf",
                        None,
                        None,
                        format!("alpha={alpha};all_neg_inf=1"),
                    ));
                } else {
                    let theta = member_lo(&fam, fit.member_index);
                    let err = theta - theta0;
                    out.push(record(
                        s,
                        rep,
                        "mle",
                        format!("{theta}"),
                        None,
                        Some(err * err),
                        format!("alpha={alpha};all_neg_inf=0"),
                    ));
                }
            }
        }
        Ok(out)
    }

    fn extras(&self, s: &RunSettings, records: &[Record]) -> Value {
        let theta0 = s.params.theta.unwrap_or(0.0);
        let n = s.n as f64;
        let mut deviation_checks = Vec::new();
        let mut mle_checks = Vec::new();

        for alpha in alphas(s) {
            let key = format!("{alpha}");
            for kind in s.psi.kinds() {
                let est_name = format!("rho_{}", PsiChoice::label(*kind));
                let thetas: Vec<f64> = records
                    .iter()
                    .filter(|r| r.estimator == est_name)
                    .filter(|r| flag_value(&r.flags, "alpha") == Some(key.as_str()))
                    .filter_map(|r| r.estimate.parse().ok())
                    .collect();
                if thetas.is_empty() {
                    continue;
                }
                for &c in &c_values(s) {
                    let hits = thetas.iter().filter(|t| (**t - theta0).abs() > c / n).count();
                    let freq = hits as f64 / thetas.len() as f64;
                    let bound = (-n * (1.0 - 2.0 * alpha).powi(2) / 2.0).exp()
                        + 2.0 * (-(1.0 - alpha) * c).exp();
                    let se = binomial_se(freq, bound.min(1.0), thetas.len());
                    deviation_checks.push(json!({
                        "estimator": est_name,
                        "alpha": alpha,
                        "c": c,
                        "deviation_frequency": freq,
                        "bound": bound,
                        "se": se,
                        "within": freq <= bound + 3.0 * se,
                    }));
                }
            }
            let flagged: Vec<bool> = records
                .iter()
                .filter(|r| r.estimator == "mle")
                .filter(|r| flag_value(&r.flags, "alpha") == Some(key.as_str()))
                .filter_map(|r| flag_value(&r.flags, "all_neg_inf"))
                .map(|v| v == "1")
                .collect();
            if !flagged.is_empty() {
                let freq = flagged.iter().filter(|b| **b).count() as f64 / flagged.len() as f64;
                let expected = 1.0 - ((1.0 - alpha).powi(s.n as i32) + alpha.powi(s.n as i32));
                // binomial se at the expected rate, kept off both endpoints so
                // a frequency of exactly 0 or 1 still gets a finite band
                let p_tilde = expected.clamp(1e-6, 1.0 - 1e-6);
                let se = (p_tilde * (1.0 - p_tilde) / flagged.len() as f64).sqrt();
                mle_checks.push(json!({
                    "alpha": alpha,
                    "all_neg_inf_frequency": freq,
                    "expected": expected,
                    "se": se,
                    "within": (freq - expected).abs() <= 3.0 * se,
                }));
            }
        }
        json!({
            "deviation_checks": deviation_checks,
            "mle_degeneracy_checks": mle_checks,
        })
    }
}
