//! Random-design polynomial regression with bounded errors.
//!
//! Responses are β*·(1, W, W²) plus a uniform error on [−1/2, 1/2], with
//! W uniform on [−1, 1].  Candidates are conditional densities indexed by a
//! coefficient grid: a member covers an observation when the response falls
//! inside its ±1/2 band, and the comparison criterion reduces to coverage
//! counting.  Because the truth lies on the grid and covers every single
//! observation, the fitted coefficients are typically exact — and stay
//! exact when one response is pushed to 10⁶, since no candidate covers the
//! corrupted point and all comparisons shift alike.  Least squares, fitted
//! for reference, absorbs the corruption into its normal equations.
//!
//! A penalized pass selects among nested coefficient grids (intercept only,
//! degree one, full quadratic) crossed with two error widths, trading
//! coverage against a dimension-linear penalty.

use rho_core::{
    build_regression_dictionary, least_squares_fit, make_rng, rho_estimate, rho_estimate_penalized,
    sample_law, CandidateFamily, CoefficientGrid, Dataset, DensitySpec, EngineOptions, FamilyStructure,
    FeatureMap, TrueLaw,
};
use serde_json::{json, Value};

use crate::config::{ConfigError, PsiChoice, RunSettings};
use crate::experiments::{record, Experiment, HarnessError};
use crate::report::{flag_value, Record};

pub struct RegressionHeavyTail;

const BETA_STAR: [f64; 3] = [0.5, 2.0, -1.0];
const OUTLIER_SHIFT: f64 = 1e6;

fn error_band() -> Result<DensitySpec, HarnessError> {
    Ok(DensitySpec::uniform(-0.5, 0.5)?)
}

/// Full coefficient grid: 11 points per axis, step 1/4, centered on β*.
fn full_grid() -> Result<CoefficientGrid, HarnessError> {
    let axes = BETA_STAR
        .iter()
        .map(|b| (-5..=5).map(|k| b + 0.25 * k as f64).collect())
        .collect();
    Ok(CoefficientGrid::new(axes)?)
}

fn plain_family() -> Result<CandidateFamily, HarnessError> {
    let members = full_grid()?
        .cartesian()
        .into_iter()
        .map(|c| Ok(DensitySpec::regression(c, error_band()?)?))
        .collect::<Result<Vec<_>, HarnessError>>()?;
    Ok(CandidateFamily::new("coefficient grid", members)?
        .with_structure(FamilyStructure::IndicatorLevel)?)
}

/// Nested dictionary: 5-point axes around β* with later axes pinned to
/// zero, crossed with the true and a doubled error width.
fn dictionary(kappa: f64, n: usize) -> Result<rho_core::PenalizedCollection, HarnessError> {
    let five = |b: f64| -> Vec<f64> { (-2..=2).map(|k| b + 0.5 * k as f64).collect() };
    let zero = vec![0.0];
    let grids = vec![
        CoefficientGrid::new(vec![five(BETA_STAR[0]), zero.clone(), zero.clone()])?,
        CoefficientGrid::new(vec![five(BETA_STAR[0]), five(BETA_STAR[1]), zero])?,
        CoefficientGrid::new(vec![five(BETA_STAR[0]), five(BETA_STAR[1]), five(BETA_STAR[2])])?,
    ];
    let errors = vec![DensitySpec::uniform(-0.5, 0.5)?, DensitySpec::uniform(-1.0, 1.0)?];
    let mut dict = build_regression_dictionary(&grids, &errors, "dict")?;
    dict.assign_penalties(kappa, n)?;
    Ok(dict)
}

fn coefficients(spec: &DensitySpec) -> &[f64] {
    match spec {
        DensitySpec::RegressionConditional { coefficients, .. } => coefficients,
        _ => unreachable!("regression members"),
    }
}

fn sq_err(beta: &[f64]) -> f64 {
    beta.iter().zip(BETA_STAR).map(|(b, t)| (b - t) * (b - t)).sum()
}

fn beta_string(beta: &[f64]) -> String {
    beta.iter().map(|b| format!("{b}")).collect::<Vec<_>>().join("|")
}

/// Mean absolute gap between fitted and true regression functions over the
/// observed design points.
fn mean_abs_gap(features: &[Vec<f64>], beta: &[f64]) -> f64 {
    let total: f64 = features
        .iter()
        .map(|phi| {
            phi.iter()
                .zip(beta.iter().zip(BETA_STAR))
                .map(|(x, (b, t))| x * (b - t))
                .sum::<f64>()
                .abs()
        })
        .sum();
    total / features.len() as f64
}

impl Experiment for RegressionHeavyTail {
    fn name(&self) -> &'static str {
        "regression_grid_robustness"
    }

    fn describe(&self) -> &'static str {
        "quadratic regression with bounded errors: coverage counting recovers the grid truth exactly, with and without a 10⁶ response outlier that wrecks least squares"
    }

    fn defaults(&self) -> (usize, usize, u64) {
        (500, 200, 109)
    }

    fn estimators(&self) -> &'static [&'static str] {
        &["rho", "rho_penalized", "least_squares"]
    }

    fn sweep_keys(&self) -> &'static [&'static str] {
        &["phase"]
    }

    fn validate(&self, s: &RunSettings) -> Result<(), ConfigError> {
        let kappa = s.params.kappa.unwrap_or(1.0);
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(ConfigError::Invalid(format!("kappa must be positive, got {kappa}")));
        }
        if s.n < 4 {
            return Err(ConfigError::Invalid(format!(
                "fitting three coefficients needs n ≥ 4, got {}",
                s.n
            )));
        }
        Ok(())
    }

    fn run_rep(&self, s: &RunSettings, rep: usize) -> Result<Vec<Record>, HarnessError> {
        let law = TrueLaw::Regression {
            covariate: DensitySpec::uniform(-1.0, 1.0)?,
            map: FeatureMap::Polynomial { degree: 2 },
            coefficients: BETA_STAR.to_vec(),
            error: error_band()?,
        };
        let mut rng = make_rng(s.seed, rep as u64);
        let clean = sample_law(&law, s.n, &mut rng)?;
        let Dataset::Pairs { features, responses } = &clean else {
            unreachable!("regression sampling yields pairs")
        };
        let mut corrupted_responses = responses.clone();
        corrupted_responses[0] += OUTLIER_SHIFT;
        let corrupted = Dataset::Pairs {
            features: features.clone(),
            responses: corrupted_responses,
        };

        let fam = plain_family()?;
        let opts = EngineOptions::default();
        let mut out = Vec::new();

        for (phase, data) in [("clean", &clean), ("outlier", &corrupted)] {
            if s.wants("rho") {
                for &kind in s.psi.kinds() {
                    let fit = rho_estimate(data, &fam, kind, &opts)?;
                    let beta = coefficients(&fam.members()[fit.member_index]);
                    out.push(record(
                        s,
                        rep,
                        format!("rho_{}", PsiChoice::label(kind)),
                        beta_string(beta),
                        None,
                        Some(sq_err(beta)),
                        format!("phase={phase};l1={}", mean_abs_gap(features, beta)),
                    ));
                }
            }
            if s.wants("least_squares") {
                let Dataset::Pairs { features: f, responses: r } = data else { unreachable!() };
                let beta = least_squares_fit(f, r)?;
                out.push(record(
                    s,
                    rep,
                    "least_squares",
                    beta_string(&beta),
                    None,
                    Some(sq_err(&beta)),
                    format!("phase={phase};l1={}", mean_abs_gap(features, &beta)),
                ));
            }
        }

        // the penalized pass runs on clean data only: its point is model
        // selection across dimensions, not outlier response
        if s.wants("rho_penalized") {
            let dict = dictionary(s.params.kappa.unwrap_or(1.0), s.n)?;
            for &kind in s.psi.kinds() {
                let fit = rho_estimate_penalized(&clean, &dict, kind, &opts)?;
                let fam = &dict.families()[fit.family_index];
                let beta = coefficients(&fam.members()[fit.member_index]);
                out.push(record(
                    s,
                    rep,
                    format!("rho_pen_{}", PsiChoice::label(kind)),
                    beta_string(beta),
                    None,
                    Some(sq_err(beta)),
                    format!("phase=clean;family={};l1={}", fam.label(), mean_abs_gap(features, beta)),
                ));
            }
        }
        Ok(out)
    }

    fn extras(&self, s: &RunSettings, records: &[Record]) -> Value {
        let median = |est: &str, phase: &str| -> Option<f64> {
            let mut v: Vec<f64> = records
                .iter()
                .filter(|r| r.estimator == est)
                .filter(|r| flag_value(&r.flags, "phase") == Some(phase))
                .filter_map(|r| r.sq_loss)
                .collect();
            if v.is_empty() {
                return None;
            }
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            Some(v[(v.len() - 1) / 2])
        };
        let ls_clean = median("least_squares", "clean");
        let mut clean_checks = Vec::new();
        let mut outlier_checks = Vec::new();
        for kind in s.psi.kinds() {
            let est = format!("rho_{}", PsiChoice::label(*kind));
            if let (Some(rho), Some(ls)) = (median(&est, "clean"), ls_clean) {
                clean_checks.push(json!({
                    "estimator": est,
                    "median_sq_err": rho,
                    "least_squares_median_sq_err": ls,
                    "within": rho <= ls,
                }));
            }
            // per-rep ratio of least-squares to grid error under corruption
            let pairs: Vec<(f64, f64)> = records
                .iter()
                .filter(|r| flag_value(&r.flags, "phase") == Some("outlier"))
                .filter(|r| r.estimator == est)
                .filter_map(|r| Some((r.rep, r.sq_loss?)))
                .filter_map(|(rep, rho_loss)| {
                    let ls = records.iter().find(|r| {
                        r.rep == rep
                            && r.estimator == "least_squares"
                            && flag_value(&r.flags, "phase") == Some("outlier")
                    })?;
                    Some((rho_loss, ls.sq_loss?))
                })
                .collect();
            if !pairs.is_empty() {
                let dominated = pairs
                    .iter()
                    .filter(|(rho_loss, ls_loss)| *ls_loss >= 10.0 * rho_loss.max(1e-300))
                    .count();
                outlier_checks.push(json!({
                    "estimator": est,
                    "ls_at_least_10x_frequency": dominated as f64 / pairs.len() as f64,
                    "target_frequency": 0.95,
                }));
            }
        }
        let selected: Vec<String> = records
            .iter()
            .filter(|r| r.estimator.starts_with("rho_pen_"))
            .filter_map(|r| flag_value(&r.flags, "family").map(str::to_string))
            .collect();
        let full_model = selected.iter().filter(|f| f.contains("[d3][q0]")).count();
        json!({
            "clean_median_checks": clean_checks,
            "outlier_ratio_checks": outlier_checks,
            "penalized_full_model_rate": if selected.is_empty() {
                Value::Null
            } else {
                Value::from(full_model as f64 / selected.len() as f64)
            },
        })
    }
}
