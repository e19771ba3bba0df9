//! One-observation Gaussian mean estimation through a line submodel.
//!
//! A single observation X ~ N(θ, I_k) with k = 128 is summarized by the
//! one-dimensional submodel {(t, 0, …, 0)}.  Estimating θ by (X₀, 0, …, 0)
//! costs exactly one unit of variance plus the squared distance ‖θ′‖² from
//! θ to the submodel — risk 1 + ‖θ′‖², far below the k-order risk of the
//! full maximum-likelihood estimator X itself.  On the submodel the
//! comparison criterion degenerates to a concave function of t maximized at
//! the grid point nearest X₀, so the minimax fit coincides with the
//! projected likelihood fit; every replication checks that identity.
//!
//! Two truth positions are swept: `axis` puts θ on the submodel at
//! θ₀ = k^{1/4}, `ortho` puts θ orthogonal to it with ‖θ′‖ = 2.

use rho_core::{gaussian_submodel_estimate, make_rng, standard_normal};
use serde_json::{json, Value};

use crate::config::{ConfigError, PsiChoice, RunSettings};
use crate::experiments::{record, Experiment, HarnessError};
use crate::report::{flag_value, Record};

pub struct GaussianSubmodel;

const DIM: usize = 128;
const GRID_LO: f64 = -8.0;
const GRID_STEP: f64 = 0.05;
const GRID_LEN: usize = 321;

fn grid() -> Vec<f64> {
    (0..GRID_LEN).map(|i| GRID_LO + i as f64 * GRID_STEP).collect()
}

fn nearest_index(x0: f64) -> usize {
    let raw = ((x0 - GRID_LO) / GRID_STEP).round();
    (raw.max(0.0) as usize).min(GRID_LEN - 1)
}

/// (label, first coordinate θ₀, squared submodel distance ‖θ′‖²).
fn truths() -> [(&'static str, f64, f64); 2] {
    let theta0 = (DIM as f64).powf(0.25);
    [("axis", theta0, 0.0), ("ortho", 0.0, 4.0)]
}

impl Experiment for GaussianSubmodel {
    fn name(&self) -> &'static str {
        "gaussian_submodel"
    }

    fn describe(&self) -> &'static str {
        "one 128-dimensional Gaussian observation projected on a line submodel; risk 1 + ‖θ′‖² and the minimax fit equals the nearest grid point to X₀"
    }

    fn defaults(&self) -> (usize, usize, u64) {
        (1, 10_000, 103)
    }

    fn estimators(&self) -> &'static [&'static str] {
        &["rho", "mle"]
    }

    fn sweep_keys(&self) -> &'static [&'static str] {
        &["truth"]
    }

    fn validate(&self, s: &RunSettings) -> Result<(), ConfigError> {
        if s.n != 1 {
            return Err(ConfigError::Invalid(format!(
                "this experiment observes exactly one vector per replication; set n = 1, got {}",
                s.n
            )));
        }
        Ok(())
    }

    fn run_rep(&self, s: &RunSettings, rep: usize) -> Result<Vec<Record>, HarnessError> {
        let mut rng = make_rng(s.seed, rep as u64);
        // one noise vector serves both truth positions: each observation is
        // marginally N(θ, I), and coupling them only reduces MC variance
        let noise: Vec<f64> = (0..DIM).map(|_| standard_normal(&mut rng)).collect();
        let grid = grid();
        let mut out = Vec::new();

        for (label, theta0, ortho2) in truths() {
            let mut x = noise.clone();
            x[0] += theta0;
            if ortho2 > 0.0 {
                x[1] += ortho2.sqrt();
            }
            let x0 = x[0];

            if s.wants("mle") {
                // projected likelihood fit (X₀, 0, …, 0)
                let sq = (x0 - theta0).powi(2) + ortho2;
                out.push(record(
                    s,
                    rep,
                    "mle",
                    format!("{x0}"),
                    None,
                    Some(sq),
                    format!("truth={label}"),
                ));
            }
            if s.wants("rho") {
                for &kind in s.psi.kinds() {
                    let fit = gaussian_submodel_estimate(&x, &grid, kind)?;
                    let sq = (fit.theta0 - theta0).powi(2) + ortho2;
                    let nearest = (fit.index == nearest_index(x0)) as u8;
                    out.push(record(
                        s,
                        rep,
                        format!("rho_{}", PsiChoice::label(kind)),
                        format!("{}", fit.theta0),
                        None,
                        Some(sq),
                        format!("truth={label};nearest={nearest}"),
                    ));
                }
            }
        }
        Ok(out)
    }

    fn extras(&self, _s: &RunSettings, records: &[Record]) -> Value {
        let mut checks = Vec::new();
        for (label, _, ortho2) in truths() {
            let losses: Vec<f64> = records
                .iter()
                .filter(|r| r.estimator == "mle" && flag_value(&r.flags, "truth") == Some(label))
                .filter_map(|r| r.sq_loss)
                .collect();
            if let Ok(risk) = crate::report::estimate_risk(&losses) {
                checks.push(json!({
                    "truth": label,
                    "mc_risk": risk.mean,
                    "se": risk.se,
                    "target_risk": 1.0 + ortho2,
                    "risk_cap": 5.0,
                }));
            }
        }
        let rho_rows = records.iter().filter(|r| r.estimator.starts_with("rho_")).count();
        let nearest_rows = records
            .iter()
            .filter(|r| r.estimator.starts_with("rho_"))
            .filter(|r| flag_value(&r.flags, "nearest") == Some("1"))
            .count();
        json!({
            "projection_risk_checks": checks,
            "nearest_grid_point_rows": [nearest_rows, rho_rows],
        })
    }
}
