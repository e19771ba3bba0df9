//! Replication records, risk summaries, and report files.
//!
//! Every replication emits one record per estimator row.  Records land in
//! `records.csv` with a fixed eight-column header, `.` decimal separators,
//! LF line endings, and shortest round-trip float formatting — the byte
//! layout is part of the determinism contract, so the writer is deliberately
//! hand-rolled.  Aggregation (`estimate_risk`) produces mean, Monte Carlo
//! standard error, and nearest-rank quantiles per estimator group; the
//! grouped output plus experiment-specific bound comparisons become
//! `summary.json`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;

/// One estimator evaluation on one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub experiment: String,
    /// Replication index; doubles as the RNG stream id.
    pub rep: usize,
    /// Base seed of the run (echoed on every row).
    pub seed: u64,
    pub estimator: String,
    /// Point estimate, already rendered (scalars, `a|b|c` vectors, `-inf`).
    pub estimate: String,
    /// Squared Hellinger loss against the generating law, when defined.
    pub h2_loss: Option<f64>,
    /// Squared parameter-space loss, when defined.
    pub sq_loss: Option<f64>,
    /// Semicolon-separated `key=value` annotations (sweep position,
    /// per-replication diagnostics).  No commas — the CSV stays quote-free.
    pub flags: String,
}

/// Fixed CSV header.
pub const CSV_HEADER: &str = "experiment,rep,seed,estimator,estimate,h2_loss,sq_loss,flags";

/// Shortest round-trip decimal rendering with `.` separator; empty for a
/// missing value.
fn fmt_opt(v: Option<f64>) -> String {
    match v {
        None => String::new(),
        Some(x) => format!("{x}"),
    }
}

/// Render records to the fixed CSV layout (header + LF rows).
pub fn render_csv(records: &[Record]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        debug_assert!(
            !r.estimate.contains(',') && !r.flags.contains(',') && !r.estimator.contains(','),
            "record fields must stay comma-free"
        );
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.experiment,
            r.rep,
            r.seed,
            r.estimator,
            r.estimate,
            fmt_opt(r.h2_loss),
            fmt_opt(r.sq_loss),
            r.flags
        );
    }
    out
}

/// Write `records.csv` under `dir`, creating the directory first.
pub fn write_records_csv(dir: &Path, records: &[Record]) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("records.csv"), render_csv(records))
}

/// Monte Carlo summary of one loss series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiskSummary {
    pub count: usize,
    pub mean: f64,
    /// Unbiased sample sd divided by √count; `None` below two observations.
    pub se: Option<f64>,
    pub q50: f64,
    pub q90: f64,
    pub q99: f64,
}

/// Nearest-rank quantile of an ascending series: the ⌈p·n⌉-th value.
fn nearest_rank(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty() && (0.0..=1.0).contains(&p));
    let n = sorted.len();
    let rank = (p * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

/// Mean, standard error, and {0.5, 0.9, 0.99} nearest-rank quantiles of a
/// loss series.  Errors on empty input.
pub fn estimate_risk(losses: &[f64]) -> Result<RiskSummary, String> {
    if losses.is_empty() {
        return Err("risk summary needs at least one record".into());
    }
    let n = losses.len();
    let mean = losses.iter().sum::<f64>() / n as f64;
    let se = if n >= 2 {
        let var = losses.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
        Some((var / n as f64).sqrt())
    } else {
        None
    };
    let mut sorted = losses.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("losses must be comparable"));
    Ok(RiskSummary {
        count: n,
        mean,
        se,
        q50: nearest_rank(&sorted, 0.5),
        q90: nearest_rank(&sorted, 0.9),
        q99: nearest_rank(&sorted, 0.99),
    })
}

/// Aggregated risk for one (estimator, sweep-position) group.
#[derive(Debug, Clone, Serialize)]
pub struct GroupSummary {
    pub estimator: String,
    /// The sweep-relevant subset of the flags (empty when the experiment has
    /// no sweep).
    pub group: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h2: Option<RiskSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sq: Option<RiskSummary>,
}

/// Keep only the sweep-defining `key=value` entries of a flags string, in
/// their original order.
pub fn sweep_group(flags: &str, sweep_keys: &[&str]) -> String {
    flags
        .split(';')
        .filter(|kv| {
            let key = kv.split('=').next().unwrap_or("");
            sweep_keys.contains(&key)
        })
        .collect::<Vec<_>>()
        .join(";")
}

/// Group records by (estimator, sweep position) and summarize each loss
/// column that is present.  Groups appear in first-occurrence order.
pub fn group_summaries(records: &[Record], sweep_keys: &[&str]) -> Vec<GroupSummary> {
    let mut order: Vec<(String, String)> = Vec::new();
    let mut h2: BTreeMap<(String, String), Vec<f64>> = BTreeMap::new();
    let mut sq: BTreeMap<(String, String), Vec<f64>> = BTreeMap::new();
    for r in records {
        let key = (r.estimator.clone(), sweep_group(&r.flags, sweep_keys));
        if !order.contains(&key) {
            order.push(key.clone());
        }
        if let Some(v) = r.h2_loss {
            h2.entry(key.clone()).or_default().push(v);
        }
        if let Some(v) = r.sq_loss {
            sq.entry(key).or_default().push(v);
        }
    }
    order
        .into_iter()
        .map(|key| GroupSummary {
            estimator: key.0.clone(),
            group: key.1.clone(),
            h2: h2.get(&key).map(|v| estimate_risk(v).expect("non-empty by construction")),
            sq: sq.get(&key).map(|v| estimate_risk(v).expect("non-empty by construction")),
        })
        .collect()
}

/// Read a `key=value` flag back out of a record's flags string.
pub fn flag_value<'a>(flags: &'a str, key: &str) -> Option<&'a str> {
    flags.split(';').find_map(|kv| {
        let (k, v) = kv.split_once('=')?;
        (k == key).then_some(v)
    })
}
