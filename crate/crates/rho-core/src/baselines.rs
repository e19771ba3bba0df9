//! Classical estimators the comparison engine is measured against, plus a
//! few closed-form references used by the experiment harness.
//!
//! The maximum-likelihood routine deliberately shares the engine's tie rule
//! (smallest index) and flags the vacuous case where every member scores
//! −∞.  The decreasing-density estimator is the usual pool-adjacent-
//! violators construction; an exponential-time pooling enumeration is kept
//! alongside it as an independent oracle.

use crate::density::{Dataset, DensitySpec};
use crate::engine::{EstimateResult, Kahan};
use crate::error::{CoreError, Result};
use crate::model::{CandidateFamily, FamilyStructure};
use crate::psi::PsiKind;

/// Maximize Σᵢ log q(Xᵢ) over the family; ties go to the smallest index.
///
/// `criterion` on the result carries the maximized log-likelihood.  When
/// every member scores −∞ the fit is `degenerate` and member 0 is returned.
/// Families of nested uniform scales are solved in closed form.
pub fn mle_estimate(data: &Dataset, family: &CandidateFamily) -> Result<EstimateResult> {
    if data.is_empty() {
        return Err(CoreError::EmptyInput("dataset"));
    }
    if let (FamilyStructure::UniformScale { thetas }, Some(xs)) = (family.structure(), data.scalars()) {
        return Ok(uniform_scale_mle(xs, thetas));
    }
    let mut row = Vec::new();
    let mut best = f64::NEG_INFINITY;
    let mut best_ix = 0usize;
    let mut any_finite = false;
    for (ix, m) in family.members().iter().enumerate() {
        m.values_into(data, &mut row)?;
        let mut acc = Kahan::default();
        for &v in &row {
            acc.add(v.ln());
        }
        let mut ll = acc.value();
        if ll.is_nan() {
            ll = f64::NEG_INFINITY;
        }
        if ll > f64::NEG_INFINITY {
            any_finite = true;
        }
        if ll > best {
            best = ll;
            best_ix = ix;
        }
    }
    Ok(EstimateResult {
        family_index: 0,
        member_index: best_ix,
        criterion: best,
        adversary: None,
        pair_matrix: None,
        degenerate: !any_finite,
    })
}

fn uniform_scale_mle(xs: &[f64], thetas: &[f64]) -> EstimateResult {
    let n = xs.len() as f64;
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    for &x in xs {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
    }
    // log-likelihood is −n·log θ when [0, θ] covers the data, −∞ otherwise:
    // the maximizer is the smallest covering scale
    let ix = thetas.partition_point(|t| *t < xmax);
    if xmin < 0.0 || ix == thetas.len() {
        return EstimateResult {
            family_index: 0,
            member_index: 0,
            criterion: f64::NEG_INFINITY,
            adversary: None,
            pair_matrix: None,
            degenerate: true,
        };
    }
    EstimateResult {
        family_index: 0,
        member_index: ix,
        criterion: -n * thetas[ix].ln(),
        adversary: None,
        pair_matrix: None,
        degenerate: false,
    }
}

fn binned_counts(data: &[f64], edges: &[f64]) -> Result<Vec<u64>> {
    if data.is_empty() {
        return Err(CoreError::EmptyInput("dataset"));
    }
    if edges.len() < 2 {
        return Err(CoreError::InvalidArgument("need at least two bin edges".into()));
    }
    for w in edges.windows(2) {
        if !(w[0] < w[1]) {
            return Err(CoreError::InvalidArgument("bin edges must be strictly increasing".into()));
        }
    }
    let cells = edges.len() - 1;
    let (lo, hi) = (edges[0], edges[cells]);
    let mut counts = vec![0u64; cells];
    for &x in data {
        if !(x >= lo && x <= hi) {
            return Err(CoreError::DataOutsideBins { value: x, lo, hi });
        }
        let j = edges.partition_point(|b| *b <= x).min(cells);
        counts[j - 1] += 1;
    }
    Ok(counts)
}

/// Histogram-based decreasing-density estimator: the empirical cell levels
/// are projected onto the non-increasing cone by pooling adjacent
/// violators, with cell widths as weights.
pub fn grenander_estimate(data: &[f64], edges: &[f64]) -> Result<DensitySpec> {
    let counts = binned_counts(data, edges)?;
    let n = data.len() as f64;
    struct Block {
        cnt: f64,
        w: f64,
        span: usize,
    }
    let mut stack: Vec<Block> = Vec::new();
    for (j, &c) in counts.iter().enumerate() {
        let mut b = Block { cnt: c as f64, w: edges[j + 1] - edges[j], span: 1 };
        while let Some(top) = stack.last() {
            // merge while the incoming level exceeds the one to its left
            if top.cnt * b.w < b.cnt * top.w {
                let t = stack.pop().unwrap();
                b.cnt += t.cnt;
                b.w += t.w;
                b.span += t.span;
            } else {
                break;
            }
        }
        stack.push(b);
    }
    let mut levels = Vec::with_capacity(counts.len());
    for b in &stack {
        let level = b.cnt / (n * b.w);
        levels.extend(std::iter::repeat(level).take(b.span));
    }
    DensitySpec::piecewise_constant(edges.to_vec(), levels)
}

/// Exponential-time reference for [`grenander_estimate`]: enumerate every
/// pooling of adjacent cells, keep the ones whose block levels are
/// non-increasing, and return the likelihood maximizer.
pub fn decreasing_mle_oracle(data: &[f64], edges: &[f64]) -> Result<DensitySpec> {
    let counts = binned_counts(data, edges)?;
    let cells = counts.len();
    if cells > 20 {
        return Err(CoreError::InvalidArgument(format!(
            "pooling enumeration over 2^{} patterns refused",
            cells - 1
        )));
    }
    let n = data.len() as f64;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 0u32..(1u32 << (cells - 1)) {
        // bit j set pools the boundary between cells j and j+1
        let mut levels = vec![0.0f64; cells];
        let mut start = 0usize;
        let mut prev_level = f64::INFINITY;
        let mut monotone = true;
        for j in 0..cells {
            let boundary_pooled = j + 1 < cells && (mask >> j) & 1 == 1;
            if !boundary_pooled {
                let cnt: u64 = counts[start..=j].iter().sum();
                let w: f64 = edges[j + 1] - edges[start];
                let level = cnt as f64 / (n * w);
                if level > prev_level {
                    monotone = false;
                    break;
                }
                for lv in &mut levels[start..=j] {
                    *lv = level;
                }
                prev_level = level;
                start = j + 1;
            }
        }
        if !monotone {
            continue;
        }
        let mut ll = 0.0;
        for (j, &c) in counts.iter().enumerate() {
            if c > 0 {
                ll += c as f64 * levels[j].ln();
            }
        }
        if best.as_ref().map_or(true, |(b, _)| ll > *b) {
            best = Some((ll, levels));
        }
    }
    let (_, levels) = best.expect("unpooled pattern is always monotone-feasible");
    DensitySpec::piecewise_constant(edges.to_vec(), levels)
}

/// Fit from the high-dimensional Gaussian mean submodel (θ₀, 0, …, 0).
#[derive(Debug, Clone, PartialEq)]
pub struct SubmodelFit {
    /// Selected first coordinate.
    pub theta0: f64,
    /// Its grid index.
    pub index: usize,
    /// Criterion value over the whole grid (the entry at `index` is 0).
    pub trace: Vec<f64>,
}

fn submodel_checks(x: &[f64], grid: &[f64]) -> Result<()> {
    if x.len() < 2 {
        return Err(CoreError::InvalidArgument(
            "submodel observation needs at least two coordinates".into(),
        ));
    }
    if grid.is_empty() {
        return Err(CoreError::EmptyInput("grid"));
    }
    for w in grid.windows(2) {
        if !(w[0] < w[1]) {
            return Err(CoreError::InvalidArgument("grid must be strictly increasing".into()));
        }
    }
    Ok(())
}

/// Minimizer of the one-observation criterion over N((t, 0, …, 0), I)
/// candidates.  Density ratios reduce to exp(A(t′) − A(t)) with
/// A(t) = t·x₀ − t²/2, so for any monotone kernel the minimax choice is the
/// grid argmax of A — the grid point nearest x₀.
pub fn gaussian_submodel_argmin(x: &[f64], grid: &[f64]) -> Result<(f64, usize)> {
    submodel_checks(x, grid)?;
    let x0 = x[0];
    let mut best = f64::NEG_INFINITY;
    let mut ix = 0usize;
    for (i, &t) in grid.iter().enumerate() {
        let a = t * x0 - 0.5 * t * t;
        if a > best {
            best = a;
            ix = i;
        }
    }
    Ok((grid[ix], ix))
}

/// As [`gaussian_submodel_argmin`], additionally materializing the criterion
/// ψ(exp((A_max − A(t))/2)) along the grid.
pub fn gaussian_submodel_estimate(x: &[f64], grid: &[f64], kind: PsiKind) -> Result<SubmodelFit> {
    let (theta0, index) = gaussian_submodel_argmin(x, grid)?;
    let x0 = x[0];
    let amax = theta0 * x0 - 0.5 * theta0 * theta0;
    let trace = grid
        .iter()
        .map(|&t| kind.eval((0.5 * (amax - (t * x0 - 0.5 * t * t))).exp()))
        .collect();
    Ok(SubmodelFit { theta0, index, trace })
}

/// Log-likelihood, relative to the standard Gaussian reference, of the
/// location family whose density carries an exp((θ²/2)·exp(x²)) factor at
/// the single point x = θ (θ > 0).  The factor is invisible to any integral
/// but dominates the likelihood as soon as an observation hits θ exactly.
pub fn pathological_loglik(data: &[f64], theta: f64) -> f64 {
    let mut acc = Kahan::default();
    for &x in data {
        acc.add(theta * x);
    }
    let n = data.len() as f64;
    let mut ll = acc.value() - 0.5 * n * theta * theta;
    if theta > 0.0 {
        let hits = data.iter().filter(|&&x| x == theta).count();
        if hits > 0 {
            ll += hits as f64 * 0.5 * theta * theta * (theta * theta).exp();
        }
    }
    ll
}

/// Ordinary least squares through the normal equations with partial
/// pivoting.  Rows of `features` are observations.
pub fn least_squares_fit(features: &[Vec<f64>], responses: &[f64]) -> Result<Vec<f64>> {
    if features.is_empty() {
        return Err(CoreError::EmptyInput("features"));
    }
    if features.len() != responses.len() {
        return Err(CoreError::DimensionMismatch { expected: features.len(), got: responses.len() });
    }
    let d = features[0].len();
    if d == 0 {
        return Err(CoreError::EmptyInput("feature row"));
    }
    for row in features {
        if row.len() != d {
            return Err(CoreError::DimensionMismatch { expected: d, got: row.len() });
        }
    }
    let mut ata = vec![vec![0.0f64; d]; d];
    let mut aty = vec![0.0f64; d];
    for (row, &y) in features.iter().zip(responses) {
        for i in 0..d {
            for j in i..d {
                ata[i][j] += row[i] * row[j];
            }
            aty[i] += row[i] * y;
        }
    }
    for i in 0..d {
        for j in 0..i {
            ata[i][j] = ata[j][i];
        }
    }
    let scale = ata
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1.0);
    // Gaussian elimination with partial pivoting
    let mut a = ata;
    let mut b = aty;
    for col in 0..d {
        let (pivot_row, pivot_abs) = (col..d)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        if pivot_abs <= 1e-12 * scale {
            return Err(CoreError::RankDeficient);
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for r in (col + 1)..d {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..d {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut beta = vec![0.0f64; d];
    for col in (0..d).rev() {
        let mut s = b[col];
        for c in (col + 1)..d {
            s -= a[col][c] * beta[c];
        }
        beta[col] = s / a[col][col];
    }
    Ok(beta)
}

/// Lower-middle sample median (the ⌈n/2⌉-th order statistic).
pub fn sample_median(data: &[f64]) -> Result<f64> {
    if data.is_empty() {
        return Err(CoreError::EmptyInput("dataset"));
    }
    let mut sorted = data.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(sorted[(sorted.len() - 1) / 2])
}
