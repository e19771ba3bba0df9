//! The minimax comparison engine.
//!
//! For a dataset X = (X₁,…,Xₙ), a kernel ψ and candidates q, q′ the
//! comparison statistic is
//!
//! > T(X, q, q′) = Σᵢ ψ(√(q′(Xᵢ)/q(Xᵢ)))
//!
//! and the selected member minimizes the criterion sup_{q′} T(X, q, q′) over
//! the family.  T(X, q, q) = 0 puts the minimized criterion at ≥ 0.  All
//! argmins and argmaxes break ties toward the smallest index.
//!
//! The generic route materializes the member×observation density matrix once
//! and scans all ordered pairs.  Three structure hints shorten this without
//! changing any result (fast and generic paths agree to summation-order
//! rounding, which the tests pin down):
//!
//! * shared partition — T depends on the data only through cell counts; on a
//!   complete probability lattice the inner sup is additionally solved by
//!   exact greedy allocation (the per-cell gain k ↦ ψ(√(k·s/w)) is concave);
//! * indicator families — members take one common level on their own
//!   support, so T(q, q′) = #covered(q′) − #covered(q) and the criterion
//!   minimum is attained by maximal coverage;
//! * nested uniform scales — T depends only on order-statistic counts at the
//!   two scales.
//!
//! The penalized variant minimizes
//! Υ(q) = sup_{q′}[T(X, q, q′) − pen(q′)] + pen(q) over a family union.

use crate::density::{Dataset, DensitySpec};
use crate::error::{CoreError, Result};
use crate::model::{CandidateFamily, FamilyStructure, PenalizedCollection};
use crate::psi::PsiKind;

/// Compensated accumulator; falls back to plain addition when non-finite
/// terms appear (the compensation would otherwise poison the sum with NaN).
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Kahan {
    s: f64,
    c: f64,
}

impl Kahan {
    pub(crate) fn add(&mut self, y: f64) {
        if !(y.is_finite() && self.s.is_finite()) {
            self.s += y;
            self.c = 0.0;
            return;
        }
        let adj = y - self.c;
        let t = self.s + adj;
        self.c = (t - self.s) - adj;
        self.s = t;
    }

    pub(crate) fn value(self) -> f64 {
        self.s
    }
}

/// Controls for the estimation entry points.
#[derive(Debug, Clone, Copy)]
pub struct EngineOptions {
    /// Ignore structure hints and run the generic pairwise scan.
    pub force_generic: bool,
    /// Record the full T matrix when the family is small enough.
    pub keep_pair_matrix: bool,
    /// Largest family size for which the matrix is recorded.
    pub pair_matrix_cap: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { force_generic: false, keep_pair_matrix: false, pair_matrix_cap: 64 }
    }
}

/// Outcome of an estimation run.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateResult {
    /// Family index (0 for single-family estimation).
    pub family_index: usize,
    /// Selected member within its family; smallest index on ties.
    pub member_index: usize,
    /// Criterion value at the selected member (≥ 0 for plain estimation).
    pub criterion: f64,
    /// A (family, member) pair attaining the inner sup, when tracked.
    pub adversary: Option<(usize, usize)>,
    /// T(X, q, q′) for all ordered pairs, when requested and small enough.
    pub pair_matrix: Option<Vec<Vec<f64>>>,
    /// Flags a vacuous fit (every member scored −∞; maximum likelihood only).
    pub degenerate: bool,
}

/// The comparison statistic T(X, q, q′) = Σᵢ ψ(√(q′(Xᵢ)/q(Xᵢ))).
pub fn t_statistic(data: &Dataset, q: &DensitySpec, q2: &DensitySpec, kind: PsiKind) -> Result<f64> {
    if data.is_empty() {
        return Err(CoreError::EmptyInput("dataset"));
    }
    let mut vq = Vec::new();
    let mut vq2 = Vec::new();
    q.values_into(data, &mut vq)?;
    q2.values_into(data, &mut vq2)?;
    Ok(t_from_rows(&vq2, &vq, kind))
}

fn t_from_rows(num_row: &[f64], den_row: &[f64], kind: PsiKind) -> f64 {
    let mut acc = Kahan::default();
    for (&n, &d) in num_row.iter().zip(den_row) {
        acc.add(kind.eval_ratio(n, d));
    }
    acc.value()
}

/// Member×observation density values for a family on a dataset.
pub fn density_matrix(data: &Dataset, family: &CandidateFamily) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::with_capacity(family.len());
    for m in family.members() {
        let mut row = Vec::new();
        m.values_into(data, &mut row)?;
        rows.push(row);
    }
    Ok(rows)
}

fn check_data(data: &Dataset) -> Result<()> {
    if data.is_empty() {
        return Err(CoreError::EmptyInput("dataset"));
    }
    Ok(())
}

/// sup_{q′∈family} T(X, q, q′) for one member, with the smallest maximizing
/// index.  Uses the same structure dispatch as [`rho_estimate`].
pub fn rho_criterion(data: &Dataset, family: &CandidateFamily, member: usize, kind: PsiKind) -> Result<(f64, usize)> {
    check_data(data)?;
    if member >= family.len() {
        return Err(CoreError::InvalidArgument(format!(
            "member index {member} out of range for family of {}",
            family.len()
        )));
    }
    match family.structure() {
        FamilyStructure::CommonPartition { breakpoints, .. } => {
            if let Some(xs) = data.scalars() {
                let counts = cell_counts(xs, breakpoints);
                let levels = partition_levels(family);
                return Ok(partition_criterion_row(&counts, &levels, member, kind));
            }
        }
        FamilyStructure::UniformScale { thetas } => {
            if let Some(xs) = data.scalars() {
                let counts = scale_counts(xs, thetas);
                return Ok(scale_criterion_row(&counts, thetas, member, kind));
            }
        }
        FamilyStructure::IndicatorLevel => {
            let covers = coverage_counts(data, family)?;
            let (max, arg) = max_with_smallest_arg(covers.iter().map(|&c| c as f64));
            return Ok((max - covers[member] as f64, arg));
        }
        FamilyStructure::Generic => {}
    }
    let matrix = density_matrix(data, family)?;
    let mut sup = f64::NEG_INFINITY;
    let mut arg = 0usize;
    for (qp, row) in matrix.iter().enumerate() {
        let t = t_from_rows(row, &matrix[member], kind);
        if t > sup {
            sup = t;
            arg = qp;
        }
    }
    Ok((sup, arg))
}

/// Minimize sup_{q′} T(X, q, q′) over the family.
pub fn rho_estimate(data: &Dataset, family: &CandidateFamily, kind: PsiKind, opts: &EngineOptions) -> Result<EstimateResult> {
    check_data(data)?;
    if !opts.force_generic {
        match family.structure() {
            FamilyStructure::CommonPartition { breakpoints, full_lattice_step } => {
                if let Some(xs) = data.scalars() {
                    return partition_estimate(xs, family, breakpoints, *full_lattice_step, kind);
                }
            }
            FamilyStructure::UniformScale { thetas } => {
                if let Some(xs) = data.scalars() {
                    return scale_estimate(xs, thetas, kind);
                }
            }
            FamilyStructure::IndicatorLevel => {
                return indicator_estimate(data, family);
            }
            FamilyStructure::Generic => {}
        }
    }
    generic_estimate(data, family, kind, opts)
}

fn generic_estimate(data: &Dataset, family: &CandidateFamily, kind: PsiKind, opts: &EngineOptions) -> Result<EstimateResult> {
    let matrix = density_matrix(data, family)?;
    let m = family.len();
    let keep = opts.keep_pair_matrix && m <= opts.pair_matrix_cap;
    let mut pair = if keep { Some(vec![vec![0.0; m]; m]) } else { None };
    let mut best = f64::INFINITY;
    let mut best_ix = 0usize;
    let mut best_adv = 0usize;
    for qi in 0..m {
        let mut sup = f64::NEG_INFINITY;
        let mut arg = 0usize;
        for qp in 0..m {
            let t = t_from_rows(&matrix[qp], &matrix[qi], kind);
            if let Some(p) = pair.as_mut() {
                p[qi][qp] = t;
            }
            if t > sup {
                sup = t;
                arg = qp;
            }
        }
        if sup < best {
            best = sup;
            best_ix = qi;
            best_adv = arg;
        }
    }
    Ok(EstimateResult {
        family_index: 0,
        member_index: best_ix,
        criterion: best,
        adversary: Some((0, best_adv)),
        pair_matrix: pair,
        degenerate: false,
    })
}

fn max_with_smallest_arg(vals: impl Iterator<Item = f64>) -> (f64, usize) {
    let mut max = f64::NEG_INFINITY;
    let mut arg = 0usize;
    for (i, v) in vals.enumerate() {
        if v > max {
            max = v;
            arg = i;
        }
    }
    (max, arg)
}

// ---- shared-partition path ----------------------------------------------

/// Observations per cell; points outside the partition are dropped (every
/// member vanishes there, so they contribute ψ-score 0 to any pair).
fn cell_counts(xs: &[f64], breakpoints: &[f64]) -> Vec<u64> {
    let cells = breakpoints.len() - 1;
    let mut counts = vec![0u64; cells];
    let (lo, hi) = (breakpoints[0], breakpoints[cells]);
    for &x in xs {
        if x < lo || x > hi {
            continue;
        }
        let j = breakpoints.partition_point(|b| *b <= x).min(cells);
        counts[j - 1] += 1;
    }
    counts
}

fn partition_levels(family: &CandidateFamily) -> Vec<&[f64]> {
    family
        .members()
        .iter()
        .map(|m| match m {
            DensitySpec::PiecewiseConstant { levels, .. } => levels.as_slice(),
            _ => unreachable!("structure verified at construction"),
        })
        .collect()
}

fn partition_t(counts: &[u64], num_levels: &[f64], den_levels: &[f64], kind: PsiKind) -> f64 {
    let mut acc = Kahan::default();
    for ((&n, &ln), &ld) in counts.iter().zip(num_levels).zip(den_levels) {
        if n == 0 {
            continue;
        }
        let v = kind.eval_ratio(ln, ld);
        if v != 0.0 {
            acc.add(n as f64 * v);
        }
    }
    acc.value()
}

fn partition_criterion_row(counts: &[u64], levels: &[&[f64]], member: usize, kind: PsiKind) -> (f64, usize) {
    let mut sup = f64::NEG_INFINITY;
    let mut arg = 0usize;
    for (qp, lv) in levels.iter().enumerate() {
        let t = partition_t(counts, lv, levels[member], kind);
        if t > sup {
            sup = t;
            arg = qp;
        }
    }
    (sup, arg)
}

const GREEDY_MIN_MEMBERS: usize = 64;

fn partition_estimate(
    xs: &[f64],
    family: &CandidateFamily,
    breakpoints: &[f64],
    full_lattice_step: Option<f64>,
    kind: PsiKind,
) -> Result<EstimateResult> {
    let counts = cell_counts(xs, breakpoints);
    let levels = partition_levels(family);
    let m = family.len();

    if let Some(step) = full_lattice_step {
        if m >= GREEDY_MIN_MEMBERS {
            return lattice_estimate_greedy(&counts, &levels, breakpoints, step, kind);
        }
    }

    let mut best = f64::INFINITY;
    let mut best_ix = 0usize;
    let mut best_adv = 0usize;
    for qi in 0..m {
        let (sup, arg) = partition_criterion_row(&counts, &levels, qi, kind);
        if sup < best {
            best = sup;
            best_ix = qi;
            best_adv = arg;
        }
    }
    Ok(EstimateResult {
        family_index: 0,
        member_index: best_ix,
        criterion: best,
        adversary: Some((0, best_adv)),
        pair_matrix: None,
        degenerate: false,
    })
}

/// Exact inner sup over a complete probability lattice by greedy unit
/// allocation: the gain of the j-th lattice unit in a cell, n_c·(ψ(...j+1)
/// − ψ(...j)), is nonincreasing in j (concavity of x ↦ ψ(√x)), so repeatedly
/// taking the best marginal unit attains the separable-concave maximum.
/// Reference implementation for the shared-table member loop in
/// [`lattice_estimate_greedy`]; the enumeration test pins both to the same
/// answer.
#[cfg(test)]
fn lattice_sup_greedy(
    counts: &[u64],
    member_levels: &[f64],
    widths: &[f64],
    resolution: usize,
    step: f64,
    kind: PsiKind,
) -> (f64, Vec<usize>) {
    let cells = counts.len();
    // ψ score per (cell, lattice count): level ratio (j·step/w) / member level
    let mut tab: Vec<Vec<f64>> = Vec::with_capacity(cells);
    for c in 0..cells {
        if counts[c] == 0 {
            tab.push(Vec::new());
            continue;
        }
        let mut col = Vec::with_capacity(resolution + 1);
        for j in 0..=resolution {
            col.push(kind.eval_ratio(j as f64 * step / widths[c], member_levels[c]));
        }
        tab.push(col);
    }
    let mut alloc = vec![0usize; cells];
    for _ in 0..resolution {
        let mut best_gain = f64::NEG_INFINITY;
        let mut best_cell = 0usize;
        for c in 0..cells {
            let gain = if counts[c] == 0 {
                0.0
            } else {
                counts[c] as f64 * (tab[c][alloc[c] + 1] - tab[c][alloc[c]])
            };
            if gain > best_gain {
                best_gain = gain;
                best_cell = c;
            }
        }
        alloc[best_cell] += 1;
    }
    let mut total = Kahan::default();
    for c in 0..cells {
        if counts[c] > 0 {
            total.add(counts[c] as f64 * tab[c][alloc[c]]);
        }
    }
    (total.value(), alloc)
}

fn lattice_estimate_greedy(
    counts: &[u64],
    levels: &[&[f64]],
    breakpoints: &[f64],
    step: f64,
    kind: PsiKind,
) -> Result<EstimateResult> {
    let widths: Vec<f64> = breakpoints.windows(2).map(|w| w[1] - w[0]).collect();
    let resolution = (1.0 / step).round() as usize;
    let cells = counts.len();
    let cols = resolution + 1;

    // Every member level in cell c is a lattice multiple of step/width, so
    // the per-observation score ψ(√(j·step/w ÷ k·step/w)) depends only on
    // the unit counts (j, k).  One table per occupied cell serves the whole
    // member loop; the entries use the same expressions as the per-member
    // form, so results are bit-identical to scanning members one at a time.
    let mut scores: Vec<Vec<f64>> = Vec::with_capacity(cells);
    for c in 0..cells {
        if counts[c] == 0 {
            scores.push(Vec::new());
            continue;
        }
        let mut tab = Vec::with_capacity(cols * cols);
        for k in 0..cols {
            let den = k as f64 * step / widths[c];
            for j in 0..cols {
                tab.push(kind.eval_ratio(j as f64 * step / widths[c], den));
            }
        }
        scores.push(tab);
    }

    let mut best = f64::INFINITY;
    let mut best_ix = 0usize;
    let mut best_alloc: Vec<usize> = Vec::new();
    let mut member_units = vec![0usize; cells];
    let mut alloc = vec![0usize; cells];
    for (qi, lv) in levels.iter().enumerate() {
        for c in 0..cells {
            member_units[c] = (lv[c] * widths[c] / step).round() as usize;
        }
        alloc.iter_mut().for_each(|a| *a = 0);
        for _ in 0..resolution {
            let mut best_gain = f64::NEG_INFINITY;
            let mut best_cell = 0usize;
            for c in 0..cells {
                let gain = if counts[c] == 0 {
                    0.0
                } else {
                    let row = &scores[c][member_units[c] * cols..];
                    counts[c] as f64 * (row[alloc[c] + 1] - row[alloc[c]])
                };
                if gain > best_gain {
                    best_gain = gain;
                    best_cell = c;
                }
            }
            alloc[best_cell] += 1;
        }
        let mut total = Kahan::default();
        for c in 0..cells {
            if counts[c] > 0 {
                total.add(counts[c] as f64 * scores[c][member_units[c] * cols + alloc[c]]);
            }
        }
        let sup = total.value();
        if sup < best {
            best = sup;
            best_ix = qi;
            best_alloc = alloc.clone();
        }
    }
    let adv_index = composition_rank(&best_alloc, resolution);
    Ok(EstimateResult {
        family_index: 0,
        member_index: best_ix,
        criterion: best,
        adversary: Some((0, adv_index)),
        pair_matrix: None,
        degenerate: false,
    })
}

/// Position of a composition in the builder's enumeration order (first cell
/// descending).
///
/// Lets callers map a cell-count allocation back to the index of the
/// corresponding member in a [`build_histogram_family`](crate::model::build_histogram_family)
/// lattice without enumerating the whole family.
pub fn composition_rank(alloc: &[usize], total: usize) -> usize {
    fn count(sum: usize, cells: usize) -> usize {
        // C(sum + cells − 1, cells − 1)
        let mut c: u128 = 1;
        for i in 1..=(cells - 1) as u128 {
            c = c * (sum as u128 + i) / i;
        }
        c as usize
    }
    let mut rank = 0usize;
    let mut rem = total;
    for (pos, &kc) in alloc.iter().enumerate() {
        let cells_left = alloc.len() - pos;
        if cells_left == 1 {
            break;
        }
        for v in (kc + 1)..=rem {
            rank += count(rem - v, cells_left - 1);
        }
        rem -= kc;
    }
    rank
}

// ---- indicator path ------------------------------------------------------

fn coverage_counts(data: &Dataset, family: &CandidateFamily) -> Result<Vec<u64>> {
    let mut row = Vec::new();
    let mut covers = Vec::with_capacity(family.len());
    for m in family.members() {
        m.values_into(data, &mut row)?;
        covers.push(row.iter().filter(|v| **v > 0.0).count() as u64);
    }
    Ok(covers)
}

fn indicator_estimate(data: &Dataset, family: &CandidateFamily) -> Result<EstimateResult> {
    let covers = coverage_counts(data, family)?;
    let (max, arg) = max_with_smallest_arg(covers.iter().map(|&c| c as f64));
    Ok(EstimateResult {
        family_index: 0,
        member_index: arg,
        criterion: max - covers[arg] as f64,
        adversary: Some((0, arg)),
        pair_matrix: None,
        degenerate: false,
    })
}

// ---- uniform-scale path --------------------------------------------------

/// #\{x ∈ [0, θ]\} for each θ.
fn scale_counts(xs: &[f64], thetas: &[f64]) -> Vec<u64> {
    let mut sorted: Vec<f64> = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let below_zero = sorted.partition_point(|x| *x < 0.0);
    thetas
        .iter()
        .map(|&t| (sorted.partition_point(|x| *x <= t) - below_zero) as u64)
        .collect()
}

fn scale_t(counts: &[u64], thetas: &[f64], qi: usize, qp: usize, kind: PsiKind) -> f64 {
    // densities 1/θ on [0, θ]: on the shared support the ratio is θ_qi/θ_qp,
    // between the two scales one density vanishes
    let v = kind.eval((thetas[qi] / thetas[qp]).sqrt());
    let (clo, chi) = (counts[qi.min(qp)], counts[qi.max(qp)]);
    let uncovered = (chi - clo) as f64;
    let mut t = clo as f64 * v;
    if chi > clo {
        t += if qp > qi {
            uncovered * kind.eval_ratio(1.0, 0.0)
        } else {
            uncovered * kind.eval_ratio(0.0, 1.0)
        };
    }
    t
}

/// First index of each maximal run of equal coverage counts.
fn scale_block_leaders(counts: &[u64]) -> Vec<usize> {
    let mut leaders = Vec::with_capacity(counts.len().min(64));
    for i in 0..counts.len() {
        if i == 0 || counts[i] != counts[i - 1] {
            leaders.push(i);
        }
    }
    leaders
}

/// Sup over adversaries scanning only run leaders plus the member itself.
/// Within a run the count terms are constant and the ψ term is monotone in
/// θ′ toward the run's first index, so the run's sup sits there (with ties
/// the leader is also the first attainer); candidates are visited in
/// ascending index order, preserving the full scan's tie-breaking.
fn scale_sup(counts: &[u64], thetas: &[f64], leaders: &[usize], member: usize, kind: PsiKind) -> (f64, usize) {
    let mut sup = f64::NEG_INFINITY;
    let mut arg = 0usize;
    let consider = |qp: usize, sup: &mut f64, arg: &mut usize| {
        let t = scale_t(counts, thetas, member, qp, kind);
        if t > *sup {
            *sup = t;
            *arg = qp;
        }
    };
    let split = leaders.partition_point(|&l| l < member);
    for &l in &leaders[..split] {
        consider(l, &mut sup, &mut arg);
    }
    consider(member, &mut sup, &mut arg);
    for &l in &leaders[split..] {
        if l != member {
            consider(l, &mut sup, &mut arg);
        }
    }
    (sup, arg)
}

fn scale_criterion_row(counts: &[u64], thetas: &[f64], member: usize, kind: PsiKind) -> (f64, usize) {
    let leaders = scale_block_leaders(counts);
    scale_sup(counts, thetas, &leaders, member, kind)
}

fn scale_estimate(xs: &[f64], thetas: &[f64], kind: PsiKind) -> Result<EstimateResult> {
    let counts = scale_counts(xs, thetas);
    let leaders = scale_block_leaders(&counts);
    let mut best = f64::INFINITY;
    let mut best_ix = 0usize;
    let mut best_adv = 0usize;
    for qi in 0..thetas.len() {
        let (sup, arg) = scale_sup(&counts, thetas, &leaders, qi, kind);
        if sup < best {
            best = sup;
            best_ix = qi;
            best_adv = arg;
        }
    }
    Ok(EstimateResult {
        family_index: 0,
        member_index: best_ix,
        criterion: best,
        adversary: Some((0, best_adv)),
        pair_matrix: None,
        degenerate: false,
    })
}

// ---- penalized selection -------------------------------------------------

/// Minimize Υ(q) = sup_{q′}[T(X, q, q′) − pen(q′)] + pen(q) over the union
/// of the collection's families.  Penalties must be assigned first.
pub fn rho_estimate_penalized(
    data: &Dataset,
    collection: &PenalizedCollection,
    kind: PsiKind,
    _opts: &EngineOptions,
) -> Result<EstimateResult> {
    check_data(data)?;
    if !collection.has_penalties() {
        return Err(CoreError::PenaltiesUnassigned);
    }
    // flatten the union, keeping (family, member) addresses
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(collection.total_members());
    let mut address: Vec<(usize, usize)> = Vec::with_capacity(collection.total_members());
    let mut pen: Vec<f64> = Vec::with_capacity(collection.total_members());
    for (fi, fam) in collection.families().iter().enumerate() {
        let fam_pen = collection.penalties()[fi];
        for (mi, m) in fam.members().iter().enumerate() {
            let mut row = Vec::new();
            m.values_into(data, &mut row)?;
            rows.push(row);
            address.push((fi, mi));
            pen.push(fam_pen);
        }
    }
    let u = rows.len();
    let mut best = f64::INFINITY;
    let mut best_flat = 0usize;
    let mut best_adv = 0usize;
    for qi in 0..u {
        let mut sup = f64::NEG_INFINITY;
        let mut arg = 0usize;
        for qp in 0..u {
            let t = t_from_rows(&rows[qp], &rows[qi], kind) - pen[qp];
            if t > sup {
                sup = t;
                arg = qp;
            }
        }
        let upsilon = sup + pen[qi];
        if upsilon < best {
            best = upsilon;
            best_flat = qi;
            best_adv = arg;
        }
    }
    Ok(EstimateResult {
        family_index: address[best_flat].0,
        member_index: address[best_flat].1,
        criterion: best,
        adversary: Some(address[best_adv]),
        pair_matrix: None,
        degenerate: false,
    })
}

// ---- independent oracle --------------------------------------------------

/// Reference implementation: bare nested loops, per-observation density
/// evaluation, plain (uncompensated) summation, no caching.  Kept deliberately
/// separate from the production paths so they can be checked against it.
pub fn brute_force_oracle(data: &Dataset, family: &CandidateFamily, kind: PsiKind) -> Result<(usize, f64)> {
    check_data(data)?;
    let n = data.len();
    let mut best = f64::INFINITY;
    let mut best_ix = 0usize;
    for (qi, q) in family.members().iter().enumerate() {
        let mut sup = f64::NEG_INFINITY;
        for qp in family.members() {
            let mut t = 0.0;
            for i in 0..n {
                t += kind.eval_ratio(density_at(qp, data, i)?, density_at(q, data, i)?);
            }
            if t > sup {
                sup = t;
            }
        }
        if sup < best {
            best = sup;
            best_ix = qi;
        }
    }
    Ok((best_ix, best))
}

fn density_at(spec: &DensitySpec, data: &Dataset, i: usize) -> Result<f64> {
    match (spec, data) {
        (DensitySpec::RegressionConditional { coefficients, error }, Dataset::Pairs { features, responses }) => {
            let phi = &features[i];
            if phi.len() != coefficients.len() {
                return Err(CoreError::DimensionMismatch { expected: coefficients.len(), got: phi.len() });
            }
            let fitted: f64 = coefficients.iter().zip(phi).map(|(c, v)| c * v).sum();
            Ok(error.eval_scalar(responses[i] - fitted))
        }
        (DensitySpec::RegressionConditional { .. }, _) => {
            Err(CoreError::Unsupported("regression density needs feature/response pairs"))
        }
        (_, Dataset::Scalars(xs)) => Ok(spec.eval_scalar(xs[i])),
        (_, Dataset::Pairs { .. }) => Err(CoreError::Unsupported("scalar density cannot score feature/response pairs")),
    }
}
