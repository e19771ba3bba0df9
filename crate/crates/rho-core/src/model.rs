//! Candidate models: finite families of densities, structure hints for the
//! fast evaluation paths, and penalized collections for model selection.
//!
//! A [`CandidateFamily`] is an ordered, finite list of [`DensitySpec`]s; the
//! minimum over a family always breaks ties toward the smallest index, so
//! member order is part of the contract and every builder produces a
//! deterministic order.
//!
//! Builders attach a [`FamilyStructure`] hint when the family provably has
//! exploitable structure (a shared partition, indicator-shaped members, a
//! nested uniform scale).  The estimation engine dispatches on the hint; the
//! hints are only ever set by code that guarantees them.

use crate::density::DensitySpec;
use crate::error::{CoreError, Result};

/// Structure the engine may exploit.  Set by builders; verified claims only.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyStructure {
    /// No special structure; evaluate densities pointwise.
    Generic,
    /// All members are piecewise-constant on these breakpoints.  When the
    /// family is the *complete* probability lattice with cell masses in
    /// step·{0,…,K}, `full_lattice_step` holds the step, enabling the exact
    /// greedy supremum.
    CommonPartition { breakpoints: Vec<f64>, full_lattice_step: Option<f64> },
    /// Every member takes a single common positive value on its own support
    /// (uniform location bands, uniform-error regression tubes): comparison
    /// statistics reduce to coverage counts.
    IndicatorLevel,
    /// Members are U[0, θ] for this ascending list of θ: comparison
    /// statistics reduce to order-statistic counts.
    UniformScale { thetas: Vec<f64> },
}

/// Model dimension surrogate entering penalties.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DimensionBound {
    /// A fixed, n-independent value.
    Fixed(f64),
    /// d·max(1, log(e·n/d)) — linear span of dimension d.
    LinearSpan { d: usize },
    /// d·max(1, log(n/d))³ — d-cell piecewise-constant class.
    PiecewiseCells { d: usize },
}

impl DimensionBound {
    /// Evaluate at sample size n (n ≥ 1).
    pub fn value(&self, n: usize) -> f64 {
        let n = n.max(1) as f64;
        match *self {
            DimensionBound::Fixed(v) => v,
            DimensionBound::LinearSpan { d } => {
                let d = d.max(1) as f64;
                d * (std::f64::consts::E * n / d).ln().max(1.0)
            }
            DimensionBound::PiecewiseCells { d } => {
                let d = d.max(1) as f64;
                d * (n / d).ln().max(1.0).powi(3)
            }
        }
    }
}

/// An ordered finite family of candidate densities.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateFamily {
    label: String,
    members: Vec<DensitySpec>,
    dimension: Option<DimensionBound>,
    structure: FamilyStructure,
}

impl CandidateFamily {
    /// A family with no structure hint and no dimension bound.
    pub fn new(label: impl Into<String>, members: Vec<DensitySpec>) -> Result<Self> {
        if members.is_empty() {
            return Err(CoreError::EmptyInput("candidate family"));
        }
        Ok(CandidateFamily {
            label: label.into(),
            members,
            dimension: None,
            structure: FamilyStructure::Generic,
        })
    }

    /// Attach a structure hint after verifying it against the members.
    pub fn with_structure(mut self, structure: FamilyStructure) -> Result<Self> {
        verify_structure(&self.members, &structure)?;
        self.structure = structure;
        Ok(self)
    }

    /// Attach a dimension bound (needed before penalization).
    pub fn with_dimension(mut self, dim: DimensionBound) -> Self {
        self.dimension = Some(dim);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn members(&self) -> &[DensitySpec] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn structure(&self) -> &FamilyStructure {
        &self.structure
    }

    pub fn dimension(&self) -> Option<DimensionBound> {
        self.dimension
    }
}

fn verify_structure(members: &[DensitySpec], structure: &FamilyStructure) -> Result<()> {
    let fail = |msg: &str| Err(CoreError::InvalidArgument(format!("structure claim rejected: {msg}")));
    match structure {
        FamilyStructure::Generic => Ok(()),
        FamilyStructure::CommonPartition { breakpoints, .. } => {
            for m in members {
                match m {
                    DensitySpec::PiecewiseConstant { breakpoints: bp, .. } if bp == breakpoints => {}
                    _ => return fail("member not piecewise-constant on the claimed partition"),
                }
            }
            Ok(())
        }
        FamilyStructure::IndicatorLevel => {
            let width = |m: &DensitySpec| -> Option<f64> {
                match m {
                    DensitySpec::UniformInterval { lo, hi } => Some(hi - lo),
                    DensitySpec::RegressionConditional { error, .. } => match error.as_ref() {
                        DensitySpec::UniformInterval { lo, hi } => Some(hi - lo),
                        _ => None,
                    },
                    _ => None,
                }
            };
            let first = match width(&members[0]) {
                Some(w) => w,
                None => return fail("members are not uniform bands"),
            };
            // widths of translated intervals can disagree by rounding; the
            // coverage reduction only needs the common level up to that
            let close = |w: f64| (w - first).abs() <= 1e-9 * first.max(1.0);
            for m in members {
                if !width(m).is_some_and(close) {
                    return fail("uniform bands must share one width");
                }
            }
            Ok(())
        }
        FamilyStructure::UniformScale { thetas } => {
            if thetas.len() != members.len() {
                return fail("theta list must match member count");
            }
            if !thetas.windows(2).all(|w| w[0] < w[1]) {
                return fail("thetas must be strictly increasing");
            }
            for (m, &t) in members.iter().zip(thetas) {
                match m {
                    DensitySpec::UniformInterval { lo, hi } if *lo == 0.0 && *hi == t => {}
                    _ => return fail("members must be U[0, θ] in theta order"),
                }
            }
            Ok(())
        }
    }
}

/// Location family: the base density translated by each θ (ascending).
pub fn build_location_family(base: &DensitySpec, thetas: &[f64], label: &str) -> Result<CandidateFamily> {
    if thetas.is_empty() {
        return Err(CoreError::EmptyInput("location grid"));
    }
    if !thetas.windows(2).all(|w| w[0] < w[1]) {
        return Err(CoreError::InvalidArgument("location grid must be strictly increasing".into()));
    }
    let members = thetas.iter().map(|&t| base.shifted(t)).collect::<Result<Vec<_>>>()?;
    let fam = CandidateFamily::new(label, members)?;
    if matches!(base, DensitySpec::UniformInterval { .. }) {
        fam.with_structure(FamilyStructure::IndicatorLevel)
    } else {
        Ok(fam)
    }
}

/// Scale family U[0, θ] for an ascending list of positive θ.
pub fn build_uniform_scale_family(thetas: &[f64], label: &str) -> Result<CandidateFamily> {
    if thetas.is_empty() {
        return Err(CoreError::EmptyInput("scale grid"));
    }
    if !(thetas[0] > 0.0 && thetas.windows(2).all(|w| w[0] < w[1])) {
        return Err(CoreError::InvalidArgument("scale grid must be positive and strictly increasing".into()));
    }
    let members = thetas.iter().map(|&t| DensitySpec::uniform(0.0, t)).collect::<Result<Vec<_>>>()?;
    CandidateFamily::new(label, members)?
        .with_structure(FamilyStructure::UniformScale { thetas: thetas.to_vec() })
}

/// Number of compositions of `k` into `cells` nonnegative parts,
/// C(k+cells−1, cells−1), saturating once it exceeds `cap`.
pub fn composition_count(k: usize, cells: usize, cap: u128) -> u128 {
    // C(k + cells − 1, cells − 1) via incremental multiply/divide
    let mut c: u128 = 1;
    for i in 1..=(cells - 1) as u128 {
        c = c * (k as u128 + i) / i;
        if c > cap {
            return c;
        }
    }
    c
}

/// Visit every composition of `total` into `cells` nonnegative parts.
///
/// The first cell varies slowest and descends: (K,0,…), (K−1,1,…), …,
/// (0,…,K).  Member indices of full-lattice families follow this order.
pub fn enumerate_compositions(total: usize, cells: usize, mut emit: impl FnMut(&[usize])) {
    fn rec(prefix: &mut Vec<usize>, remaining: usize, cells_left: usize, emit: &mut impl FnMut(&[usize])) {
        if cells_left == 1 {
            prefix.push(remaining);
            emit(prefix);
            prefix.pop();
            return;
        }
        for v in (0..=remaining).rev() {
            prefix.push(v);
            rec(prefix, remaining - v, cells_left - 1, emit);
            prefix.pop();
        }
    }
    let mut prefix = Vec::with_capacity(cells);
    rec(&mut prefix, total, cells, &mut emit);
}

pub fn lattice_resolution(step: f64) -> Result<usize> {
    if !(step.is_finite() && step > 0.0 && step <= 1.0) {
        return Err(CoreError::InvalidArgument(format!("lattice step must be in (0,1], got {step}")));
    }
    let k = (1.0 / step).round();
    if (k * step - 1.0).abs() > 1e-9 {
        return Err(CoreError::InvalidArgument(format!("lattice step {step} does not divide 1 evenly")));
    }
    Ok(k as usize)
}

fn lattice_members(breakpoints: &[f64], step: f64, cap: usize) -> Result<(usize, Vec<Vec<usize>>)> {
    if breakpoints.len() < 2 || !breakpoints.windows(2).all(|w| w[0] < w[1]) {
        return Err(CoreError::InvalidArgument("breakpoints must be strictly increasing, length ≥ 2".into()));
    }
    let cells = breakpoints.len() - 1;
    let k = lattice_resolution(step)?;
    let count = composition_count(k, cells, cap as u128);
    if count > cap as u128 {
        return Err(CoreError::LatticeCap { count, cap });
    }
    let mut all = Vec::with_capacity(count as usize);
    enumerate_compositions(k, cells, |c| all.push(c.to_vec()));
    Ok((k, all))
}

fn lattice_density(breakpoints: &[f64], counts: &[usize], step: f64) -> Result<DensitySpec> {
    let levels = counts
        .iter()
        .zip(breakpoints.windows(2))
        .map(|(&c, w)| c as f64 * step / (w[1] - w[0]))
        .collect::<Vec<_>>();
    DensitySpec::piecewise_constant(breakpoints.to_vec(), levels)
}

/// All piecewise-constant probabilities on the partition whose cell masses
/// lie on the lattice step·{0,…,1/step}; enumeration order fixes the first
/// cell's mass descending.  Errors when the member count would exceed `cap`.
pub fn build_histogram_family(breakpoints: &[f64], step: f64, cap: usize, label: &str) -> Result<CandidateFamily> {
    let (_, compositions) = lattice_members(breakpoints, step, cap)?;
    let members = compositions
        .iter()
        .map(|c| lattice_density(breakpoints, c, step))
        .collect::<Result<Vec<_>>>()?;
    let cells = breakpoints.len() - 1;
    CandidateFamily::new(label, members)?
        .with_structure(FamilyStructure::CommonPartition {
            breakpoints: breakpoints.to_vec(),
            full_lattice_step: Some(step),
        })
        .map(|f| f.with_dimension(DimensionBound::PiecewiseCells { d: cells }))
}

/// The subset of the histogram lattice whose density levels are
/// non-increasing left to right (decreasing-density candidates).
pub fn build_decreasing_family(breakpoints: &[f64], step: f64, cap: usize, label: &str) -> Result<CandidateFamily> {
    let (_, compositions) = lattice_members(breakpoints, step, cap)?;
    let widths: Vec<f64> = breakpoints.windows(2).map(|w| w[1] - w[0]).collect();
    let members = compositions
        .iter()
        .filter(|c| {
            let level = |j: usize| c[j] as f64 * step / widths[j];
            (1..c.len()).all(|j| level(j - 1) >= level(j))
        })
        .map(|c| lattice_density(breakpoints, c, step))
        .collect::<Result<Vec<_>>>()?;
    let cells = breakpoints.len() - 1;
    CandidateFamily::new(label, members)?
        .with_structure(FamilyStructure::CommonPartition {
            breakpoints: breakpoints.to_vec(),
            full_lattice_step: None,
        })
        .map(|f| f.with_dimension(DimensionBound::PiecewiseCells { d: cells }))
}

/// Per-coefficient value grids spanning one regression model; members are
/// the cartesian product (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientGrid {
    pub axes: Vec<Vec<f64>>,
}

impl CoefficientGrid {
    pub fn new(axes: Vec<Vec<f64>>) -> Result<Self> {
        if axes.is_empty() || axes.iter().any(|a| a.is_empty()) {
            return Err(CoreError::EmptyInput("coefficient grid axis"));
        }
        for a in &axes {
            if !a.windows(2).all(|w| w[0] < w[1]) {
                return Err(CoreError::InvalidArgument("coefficient axes must be strictly increasing".into()));
            }
        }
        Ok(CoefficientGrid { axes })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Number of free coordinates: axes with more than one grid value.
    /// Submodels of a common coefficient space are embedded by pinning the
    /// remaining axes to a single value (usually zero), and only the free
    /// ones count toward model complexity.
    pub fn free_dim(&self) -> usize {
        self.axes.iter().filter(|a| a.len() > 1).count()
    }

    /// All coefficient vectors in lexicographic order (first axis slowest).
    pub fn cartesian(&self) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = vec![Vec::new()];
        for axis in &self.axes {
            let mut next = Vec::with_capacity(out.len() * axis.len());
            for prefix in &out {
                for &v in axis {
                    let mut row = prefix.clone();
                    row.push(v);
                    next.push(row);
                }
            }
            out = next;
        }
        out
    }
}

/// A list of families sharing one penalty calibration.
#[derive(Debug, Clone, PartialEq)]
pub struct PenalizedCollection {
    families: Vec<CandidateFamily>,
    deltas: Vec<f64>,
    kappa: f64,
    penalties: Vec<f64>,
}

impl PenalizedCollection {
    /// Families with complexity weights Δ.  The weights must satisfy
    /// Σ exp(−Δ) = 1; drift up to 1e−6 is corrected by a uniform shift when
    /// `renormalize` is set and accepted as-is otherwise, larger drift is an
    /// error either way.
    pub fn new(families: Vec<CandidateFamily>, deltas: Vec<f64>, renormalize: bool) -> Result<Self> {
        if families.is_empty() {
            return Err(CoreError::EmptyInput("penalized collection"));
        }
        if families.len() != deltas.len() {
            return Err(CoreError::DimensionMismatch { expected: families.len(), got: deltas.len() });
        }
        if !deltas.iter().all(|d| d.is_finite()) {
            return Err(CoreError::InvalidArgument("complexity weights must be finite".into()));
        }
        let total: f64 = deltas.iter().map(|d| (-d).exp()).sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(CoreError::WeightSum(total));
        }
        let mut deltas = deltas;
        if renormalize {
            let shift = total.ln();
            for d in &mut deltas {
                *d += shift;
            }
        }
        Ok(PenalizedCollection { families, deltas, kappa: 1.0, penalties: Vec::new() })
    }

    /// pen(Q) = κ·(D(n) + Δ) per family; requires every family to carry a
    /// dimension bound and κ > 0.
    pub fn assign_penalties(&mut self, kappa: f64, n: usize) -> Result<()> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(CoreError::InvalidArgument(format!("kappa must be positive, got {kappa}")));
        }
        let mut pens = Vec::with_capacity(self.families.len());
        for (fam, &delta) in self.families.iter().zip(&self.deltas) {
            let dim = fam
                .dimension()
                .ok_or_else(|| CoreError::InvalidArgument(format!("family '{}' has no dimension bound", fam.label())))?;
            pens.push(kappa * (dim.value(n) + delta));
        }
        self.kappa = kappa;
        self.penalties = pens;
        Ok(())
    }

    pub fn families(&self) -> &[CandidateFamily] {
        &self.families
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Per-family penalties; empty until [`assign_penalties`] runs.
    ///
    /// [`assign_penalties`]: PenalizedCollection::assign_penalties
    pub fn penalties(&self) -> &[f64] {
        &self.penalties
    }

    pub fn has_penalties(&self) -> bool {
        !self.penalties.is_empty()
    }

    pub fn total_members(&self) -> usize {
        self.families.iter().map(|f| f.len()).sum()
    }
}

/// Regression dictionary: one family per (coefficient grid, error density),
/// grids outer, error densities inner.  Weights follow Δ = d + a with one a
/// per error density chosen so all error weights sum to e−1, then shifted so
/// Σ exp(−Δ) = 1 holds exactly for the finite dictionary.
pub fn build_regression_dictionary(
    grids: &[CoefficientGrid],
    errors: &[DensitySpec],
    label: &str,
) -> Result<PenalizedCollection> {
    if grids.is_empty() {
        return Err(CoreError::EmptyInput("regression grids"));
    }
    if errors.is_empty() {
        return Err(CoreError::EmptyInput("regression error densities"));
    }
    let a_k = (errors.len() as f64 / (std::f64::consts::E - 1.0)).ln();
    let mut families = Vec::new();
    let mut deltas = Vec::new();
    for grid in grids {
        let d = grid.free_dim().max(1);
        let coeffs = grid.cartesian();
        for (k, err) in errors.iter().enumerate() {
            let members = coeffs
                .iter()
                .map(|c| DensitySpec::regression(c.clone(), err.clone()))
                .collect::<Result<Vec<_>>>()?;
            let fam = CandidateFamily::new(format!("{label}[d{d}][q{k}]"), members)?
                .with_dimension(DimensionBound::LinearSpan { d });
            let fam = if matches!(err, DensitySpec::UniformInterval { .. }) {
                fam.with_structure(FamilyStructure::IndicatorLevel)?
            } else {
                fam
            };
            families.push(fam);
            deltas.push(d as f64 + a_k);
        }
    }
    // exact unit-mass shift for the finite dictionary
    let z: f64 = deltas.iter().map(|d| (-d).exp()).sum();
    for d in &mut deltas {
        *d += z.ln();
    }
    PenalizedCollection::new(families, deltas, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_two_cells_half_step() {
        let fam = build_histogram_family(&[0.0, 1.0, 2.0], 0.5, 100, "h").unwrap();
        assert_eq!(fam.len(), 3);
        // order pinned: first-cell mass descending
        let masses: Vec<(f64, f64)> = fam
            .members()
            .iter()
            .map(|m| match m {
                DensitySpec::PiecewiseConstant { levels, .. } => (levels[0], levels[1]),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(masses, vec![(1.0, 0.0), (0.5, 0.5), (0.0, 1.0)]);
    }

    #[test]
    fn histogram_counts_match_compositions() {
        // 4 cells, step 1/3: C(3+4−1, 4−1) = C(6,3) = 20
        let fam = build_histogram_family(&[0.0, 1.0, 2.0, 3.0, 4.0], 1.0 / 3.0, 100, "h").unwrap();
        assert_eq!(fam.len(), 20);
    }

    #[test]
    fn histogram_cap_enforced() {
        // 3 cells, step 0.02: C(52,2) = 1326 > 1000
        let err = build_histogram_family(&[0.0, 1.0, 2.0, 3.0], 0.02, 1000, "h").unwrap_err();
        match err {
            CoreError::LatticeCap { count, cap } => {
                assert_eq!(count, 1326);
                assert_eq!(cap, 1000);
            }
            other => panic!("wrong error: {other}"),
        }
    }

    #[test]
    fn decreasing_family_is_histogram_subset() {
        let hist = build_histogram_family(&[0.0, 1.0, 2.0], 0.5, 100, "h").unwrap();
        let dec = build_decreasing_family(&[0.0, 1.0, 2.0], 0.5, 100, "d").unwrap();
        assert_eq!(dec.len(), 2);
        for m in dec.members() {
            assert!(hist.members().contains(m));
        }
        // unequal widths: levels, not masses, must decrease
        let dec2 = build_decreasing_family(&[0.0, 1.0, 3.0], 0.5, 100, "d2").unwrap();
        // (1,0): levels (1,0) ok; (.5,.5): levels (0.5,0.25) ok; (0,1): levels (0,0.5) not
        assert_eq!(dec2.len(), 2);
    }

    #[test]
    fn uniform_scale_structure_checked() {
        let fam = build_uniform_scale_family(&[0.5, 1.0, 2.0], "s").unwrap();
        assert!(matches!(fam.structure(), FamilyStructure::UniformScale { .. }));
        assert!(build_uniform_scale_family(&[1.0, 1.0], "s").is_err());
        assert!(build_uniform_scale_family(&[-1.0, 1.0], "s").is_err());
    }

    #[test]
    fn location_family_of_uniform_is_indicator() {
        let base = DensitySpec::uniform(0.0, 1.0).unwrap();
        let fam = build_location_family(&base, &[-0.5, 0.0, 0.5], "loc").unwrap();
        assert_eq!(fam.structure(), &FamilyStructure::IndicatorLevel);
        let g = DensitySpec::gaussian(0.0, 1.0).unwrap();
        let fam2 = build_location_family(&g, &[-0.5, 0.0, 0.5], "gloc").unwrap();
        assert_eq!(fam2.structure(), &FamilyStructure::Generic);
    }

    #[test]
    fn structure_claims_rejected_when_false() {
        let base = DensitySpec::gaussian(0.0, 1.0).unwrap();
        let fam = CandidateFamily::new("g", vec![base]).unwrap();
        assert!(fam.clone().with_structure(FamilyStructure::IndicatorLevel).is_err());
        assert!(fam
            .with_structure(FamilyStructure::CommonPartition { breakpoints: vec![0.0, 1.0], full_lattice_step: None })
            .is_err());
    }

    #[test]
    fn dimension_bounds_formulas() {
        // linear span: d·log(en/d)
        let lin = DimensionBound::LinearSpan { d: 3 };
        let n = 500;
        let expect = 3.0 * (std::f64::consts::E * 500.0 / 3.0).ln();
        assert!((lin.value(n) - expect).abs() < 1e-12);
        // piecewise: d·log₊³(n/d)
        let pc = DimensionBound::PiecewiseCells { d: 4 };
        let expect_pc = 4.0 * (125.0_f64).ln().powi(3);
        assert!((pc.value(n) - expect_pc).abs() < 1e-12);
        // log₊ clamps at 1 when n/d is small
        assert!((DimensionBound::PiecewiseCells { d: 4 }.value(4) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn regression_dictionary_weights_sum_to_one() {
        let grid = CoefficientGrid::new(vec![(0..11).map(|i| i as f64 * 0.1).collect()]).unwrap();
        let errors = vec![
            DensitySpec::uniform(-0.5, 0.5).unwrap(),
            DensitySpec::gaussian(0.0, 0.3).unwrap(),
        ];
        let coll = build_regression_dictionary(&[grid], &errors, "reg").unwrap();
        assert_eq!(coll.families().len(), 2);
        assert_eq!(coll.families()[0].len(), 11);
        let total: f64 = coll.deltas().iter().map(|d| (-d).exp()).sum();
        assert!((total - 1.0).abs() < 1e-12, "{total}");
        // uniform-error family gets the indicator structure, gaussian stays generic
        assert_eq!(coll.families()[0].structure(), &FamilyStructure::IndicatorLevel);
        assert_eq!(coll.families()[1].structure(), &FamilyStructure::Generic);
    }

    #[test]
    fn weight_sum_violations_rejected() {
        let fam = || CandidateFamily::new("f", vec![DensitySpec::uniform(0.0, 1.0).unwrap()]).unwrap();
        // Σ e^{−Δ} = 2e^{−1} ≈ 0.736: rejected with or without renormalization
        assert!(PenalizedCollection::new(vec![fam(), fam()], vec![1.0, 1.0], true).is_err());
        // exact split passes
        let ln2 = std::f64::consts::LN_2;
        assert!(PenalizedCollection::new(vec![fam(), fam()], vec![ln2, ln2], false).is_ok());
    }

    #[test]
    fn penalties_require_dimension_and_scale_with_kappa() {
        let ln2 = std::f64::consts::LN_2;
        let base = DensitySpec::uniform(0.0, 1.0).unwrap();
        let no_dim = CandidateFamily::new("a", vec![base.clone()]).unwrap();
        let with_dim = CandidateFamily::new("b", vec![base]).unwrap().with_dimension(DimensionBound::Fixed(2.0));
        let mut bad = PenalizedCollection::new(vec![no_dim, with_dim.clone()], vec![ln2, ln2], false).unwrap();
        assert!(bad.assign_penalties(1.0, 100).is_err());

        let mut ok = PenalizedCollection::new(vec![with_dim.clone(), with_dim], vec![ln2, ln2], false).unwrap();
        ok.assign_penalties(1.0, 100).unwrap();
        let p1 = ok.penalties().to_vec();
        ok.assign_penalties(3.0, 100).unwrap();
        for (a, b) in p1.iter().zip(ok.penalties()) {
            assert!((b / a - 3.0).abs() < 1e-12);
        }
    }
}
