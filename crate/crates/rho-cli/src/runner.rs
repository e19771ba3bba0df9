//! Replication executor.
//!
//! Replications are embarrassingly parallel: each owns a dedicated RNG
//! stream keyed by its index, so the schedule cannot leak into the results.
//! The pool maps replication indices to record batches and the batches are
//! reassembled in index order, which makes the CSV byte-identical across
//! thread counts — a property the acceptance suite pins down.

use std::fs;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::RunSettings;
use crate::experiments::{Experiment, HarnessError};
use crate::report::{group_summaries, write_records_csv, Record};

/// Everything one run produces, before it is written anywhere.
pub struct RunOutcome {
    pub records: Vec<Record>,
    pub summary: Value,
}

/// Run every replication and assemble the summary document.
pub fn execute(exp: &dyn Experiment, s: &RunSettings) -> Result<RunOutcome, HarnessError> {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(s.threads)
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))?;
    let batches: Result<Vec<Vec<Record>>, HarnessError> = pool.install(|| {
        (0..s.reps)
            .into_par_iter()
            .map(|rep| exp.run_rep(s, rep))
            .collect()
    });
    let records: Vec<Record> = batches?.into_iter().flatten().collect();
    let summary = json!({
        "config": {
            "experiment": s.experiment,
            "n": s.n,
            "reps": s.reps,
            "seed": s.seed,
            "threads": s.threads,
            "psi": s.psi,
            "estimators": s.estimators,
            "out_dir": s.out_dir.display().to_string(),
            "params": s.params,
        },
        "record_count": records.len(),
        "groups": group_summaries(&records, exp.sweep_keys()),
        "extras": exp.extras(s, &records),
        "wall_seconds": start.elapsed().as_secs_f64(),
    });
    Ok(RunOutcome { records, summary })
}

/// Write `records.csv` and `summary.json` under the experiment directory.
pub fn write_outputs(s: &RunSettings, outcome: &RunOutcome) -> Result<(), HarnessError> {
    let dir = s.experiment_dir();
    write_records_csv(&dir, &outcome.records)?;
    let mut doc = serde_json::to_string_pretty(&outcome.summary)
        .map_err(|e| HarnessError::Report(e.to_string()))?;
    doc.push('\n');
    fs::write(dir.join("summary.json"), doc)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{CliOverrides, FileConfig};
    use crate::experiments;
    use crate::report::render_csv;

    fn settings(reps: usize, threads: usize) -> RunSettings {
        let exp = experiments::find("exponential_truncation_check").unwrap();
        let mut s = RunSettings::resolve(
            exp.name(),
            &FileConfig::default(),
            &CliOverrides::default(),
            exp.defaults(),
        )
        .unwrap();
        s.reps = reps;
        s.threads = threads;
        s
    }

    #[test]
    fn thread_count_does_not_change_records() {
        let exp = experiments::find("exponential_truncation_check").unwrap();
        let a = execute(exp, &settings(3, 1)).unwrap();
        let b = execute(exp, &settings(3, 4)).unwrap();
        assert_eq!(render_csv(&a.records), render_csv(&b.records));
    }

    #[test]
    fn outputs_land_in_experiment_directory() {
        let tmp = tempfile::tempdir().unwrap();
        let exp = experiments::find("exponential_truncation_check").unwrap();
        let mut s = settings(1, 1);
        s.out_dir = tmp.path().to_path_buf();
        let outcome = execute(exp, &s).unwrap();
        write_outputs(&s, &outcome).unwrap();
        let dir = tmp.path().join("exponential_truncation_check");
        let csv = std::fs::read_to_string(dir.join("records.csv")).unwrap();
        assert!(csv.starts_with("experiment,rep,seed,estimator,estimate,h2_loss,sq_loss,flags\n"));
        assert!(csv.ends_with('\n'));
        let summary: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap();
        assert_eq!(summary["config"]["experiment"], "exponential_truncation_check");
        assert!(summary["extras"]["max_quadrature_gap"].as_f64().unwrap() < 1e-8);
    }
}
