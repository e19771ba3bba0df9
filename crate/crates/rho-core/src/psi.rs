//! Bounded comparison kernels and their moment constants.
//!
//! A kernel ψ maps the square-rooted likelihood ratio x = √(q′(X)/q(X)) ∈
//! [0, +∞] to a score.  The minimax comparison machinery requires ψ to be
//! nondecreasing and antisymmetric under inversion (ψ(1/x) = −ψ(x)), and the
//! risk bounds additionally require boundedness together with three moment
//! constants (a₀, a₁, a₂²):
//!
//! | kind      | ψ(x)            | a₀   | a₁    | a₂²    |
//! |-----------|-----------------|------|-------|--------|
//! | `Psi1`    | (x−1)/(x+1)     | 4    | 3/8   | 3√2    |
//! | `Psi2`    | (x−1)/√(x²+1)   | 4.97 | 0.083 | 3+2√2  |
//! | `HalfLog` | ½·log x         | —    | —     | —      |
//!
//! `HalfLog` is the unbounded log-likelihood kernel: running the same
//! machinery with it reproduces maximum likelihood.  It carries no moment
//! constants and is rejected by [`check_moment_inequalities`].
//!
//! Ratio conventions (densities are nonnegative, possibly +∞ at an integrable
//! singularity): 0/0 counts as ratio 1 (score 0), a/0 as +∞ (score +1 for the
//! bounded kernels), 0/a as 0 (score −1), and ∞/∞ — two members sharing a
//! singular point — as ratio 1.

use crate::error::{CoreError, Result};
use crate::hellinger::{hellinger2_discrete, DiscreteDensity};

/// Which comparison kernel to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PsiKind {
    /// ψ₁(x) = (x−1)/(x+1).
    Psi1,
    /// ψ₂(x) = (x−1)/√(x²+1).
    Psi2,
    /// ψ(x) = ½·log x — unbounded; reproduces maximum likelihood.
    HalfLog,
}

/// Moment constants (a₀, a₁, a₂²) entering the expectation and variance
/// bounds for a bounded kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiConstants {
    pub a0: f64,
    pub a1: f64,
    pub a2_sq: f64,
}

impl PsiKind {
    /// Moment constants; `None` for the unbounded kernel.
    pub fn constants(self) -> Option<PsiConstants> {
        match self {
            PsiKind::Psi1 => Some(PsiConstants {
                a0: 4.0,
                a1: 0.375,
                a2_sq: 3.0 * std::f64::consts::SQRT_2,
            }),
            PsiKind::Psi2 => Some(PsiConstants {
                a0: 4.97,
                a1: 0.083,
                a2_sq: 3.0 + 2.0 * std::f64::consts::SQRT_2,
            }),
            PsiKind::HalfLog => None,
        }
    }

    /// Whether the kernel is bounded (|ψ| ≤ 1).
    pub fn is_bounded(self) -> bool {
        !matches!(self, PsiKind::HalfLog)
    }

    /// Evaluate ψ at x ∈ [0, +∞].
    ///
    /// Panics if x is negative or NaN.
    pub fn eval(self, x: f64) -> f64 {
        assert!(x >= 0.0, "kernel argument must be nonnegative, got {x}");
        match self {
            PsiKind::Psi1 => {
                if x.is_infinite() {
                    1.0
                } else {
                    (x - 1.0) / (x + 1.0)
                }
            }
            PsiKind::Psi2 => {
                if x.is_infinite() {
                    1.0
                } else {
                    // hypot keeps √(x²+1) finite for x near f64::MAX
                    (x - 1.0) / x.hypot(1.0)
                }
            }
            PsiKind::HalfLog => 0.5 * x.ln(),
        }
    }

    /// Evaluate ψ(√(num/den)) for a pair of nonnegative density values,
    /// applying the ratio conventions listed in the module docs.
    ///
    /// Panics if either value is negative or NaN.
    pub fn eval_ratio(self, num: f64, den: f64) -> f64 {
        assert!(
            num >= 0.0 && den >= 0.0,
            "density values must be nonnegative, got {num}/{den}"
        );
        let num_inf = num.is_infinite();
        let den_inf = den.is_infinite();
        if (num == 0.0 && den == 0.0) || (num_inf && den_inf) {
            // both vanish (or both blow up at a shared singular point): ratio 1
            return 0.0;
        }
        if den == 0.0 || num_inf {
            return match self {
                PsiKind::HalfLog => f64::INFINITY,
                _ => 1.0,
            };
        }
        if num == 0.0 || den_inf {
            return match self {
                PsiKind::HalfLog => f64::NEG_INFINITY,
                _ => -1.0,
            };
        }
        self.eval((num / den).sqrt())
    }
}

/// Min/max of the ratio ψ₁(x)/(½·log x) over the grid points falling in the
/// two reference windows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRatioBounds {
    /// (min, max) over grid points in [1/2, 2].
    pub on_half_two: (f64, f64),
    /// (min, max) over grid points in [1/4, 4].
    pub on_quarter_four: (f64, f64),
}

/// Outcome of the kernel axiom sweep, see [`check_axioms`].
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    /// ψ(1); must be exactly 0.
    pub at_one: f64,
    /// ψ(0).
    pub at_zero: f64,
    /// ψ(+∞).
    pub at_infinity: f64,
    /// max over the grid of |ψ(1/x) + ψ(x)|.
    pub max_antisymmetry_defect: f64,
    /// Number of adjacent grid pairs where ψ decreases by more than one ulp.
    pub monotonicity_violations: usize,
    /// Number of grid points with |ψ| > 1 (flags the unbounded kernel).
    pub range_violations: usize,
    /// Comparison against the half-log kernel; populated for `Psi1` only.
    pub log_ratio: Option<LogRatioBounds>,
}

/// Logarithmically spaced grid of `points` values covering [lo, hi].
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && points >= 2, "need 0 < lo < hi and at least two points");
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            (llo + t * (lhi - llo)).exp()
        })
        .collect()
}

/// Sweep the kernel over a positive, ascending grid and report boundary
/// values, the worst antisymmetry defect, monotonicity and range violations,
/// and (for ψ₁) its closeness to the half-log kernel on [1/2, 2] and [1/4, 4].
pub fn check_axioms(kind: PsiKind, grid: &[f64]) -> Result<AxiomReport> {
    if grid.is_empty() {
        return Err(CoreError::EmptyInput("axiom check grid"));
    }
    for w in grid.windows(2) {
        if !(w[0] < w[1]) {
            return Err(CoreError::InvalidArgument("grid must be strictly ascending".into()));
        }
    }
    if grid[0] <= 0.0 || !grid[0].is_finite() || !grid[grid.len() - 1].is_finite() {
        return Err(CoreError::InvalidArgument("grid must be positive and finite".into()));
    }

    let mut max_defect = 0.0_f64;
    let mut mono = 0usize;
    let mut range = 0usize;
    let mut prev = f64::NEG_INFINITY;
    let mut half_two = (f64::INFINITY, f64::NEG_INFINITY);
    let mut quarter_four = (f64::INFINITY, f64::NEG_INFINITY);
    for &x in grid {
        let v = kind.eval(x);
        max_defect = max_defect.max((kind.eval(1.0 / x) + v).abs());
        if v.abs() > 1.0 {
            range += 1;
        }
        if prev > f64::NEG_INFINITY {
            // ties within one ulp are accepted; a real decrease is a violation
            let drop = prev - v;
            if drop > ulp(prev) {
                mono += 1;
            }
        }
        prev = v;
        if kind == PsiKind::Psi1 && (x - 1.0).abs() > 1e-9 {
            let ratio = v / (0.5 * x.ln());
            if (0.25..=4.0).contains(&x) {
                quarter_four = (quarter_four.0.min(ratio), quarter_four.1.max(ratio));
                if (0.5..=2.0).contains(&x) {
                    half_two = (half_two.0.min(ratio), half_two.1.max(ratio));
                }
            }
        }
    }
    let log_ratio = if kind == PsiKind::Psi1 && half_two.0.is_finite() {
        Some(LogRatioBounds { on_half_two: half_two, on_quarter_four: quarter_four })
    } else {
        None
    };
    Ok(AxiomReport {
        at_one: kind.eval(1.0),
        at_zero: kind.eval(0.0),
        at_infinity: kind.eval(f64::INFINITY),
        max_antisymmetry_defect: max_defect,
        monotonicity_violations: mono,
        range_violations: range,
        log_ratio,
    })
}

fn ulp(v: f64) -> f64 {
    let a = v.abs();
    if a.is_finite() {
        a.next_up() - a
    } else {
        f64::INFINITY
    }
}

/// Both sides of the expectation and second-moment bounds for one triple of
/// discrete densities on a shared support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityReport {
    /// ∫ ψ(√(q′/q)) dR.
    pub expectation_lhs: f64,
    /// a₀·h²(R,Q) − a₁·h²(R,Q′).
    pub expectation_rhs: f64,
    /// rhs − lhs; nonnegative when the bound holds.
    pub expectation_slack: f64,
    /// ∫ ψ²(√(q′/q)) dR.
    pub second_moment_lhs: f64,
    /// a₂²·(h²(R,Q) + h²(R,Q′)).
    pub second_moment_rhs: f64,
    /// rhs − lhs; nonnegative when the bound holds.
    pub second_moment_slack: f64,
}

/// Evaluate the two moment bounds for a sampling law `r` and a candidate pair
/// (`q`, `q2`) on a shared support.  Errors for the unbounded kernel (no
/// moment constants) and for mismatched supports.
pub fn check_moment_inequalities(
    kind: PsiKind,
    r: &DiscreteDensity,
    q: &DiscreteDensity,
    q2: &DiscreteDensity,
) -> Result<InequalityReport> {
    let c = kind
        .constants()
        .ok_or(CoreError::Unsupported("moment bounds need a bounded kernel"))?;
    if r.support() != q.support() || r.support() != q2.support() {
        return Err(CoreError::MismatchedSupport);
    }
    let h2_rq = hellinger2_discrete(r, q)?;
    let h2_rq2 = hellinger2_discrete(r, q2)?;
    let mut lhs1 = 0.0;
    let mut lhs2 = 0.0;
    for ((&rm, &qm), &q2m) in r.mass().iter().zip(q.mass()).zip(q2.mass()) {
        if rm == 0.0 {
            continue;
        }
        let v = kind.eval_ratio(q2m, qm);
        lhs1 += rm * v;
        lhs2 += rm * v * v;
    }
    let rhs1 = c.a0 * h2_rq - c.a1 * h2_rq2;
    let rhs2 = c.a2_sq * (h2_rq + h2_rq2);
    Ok(InequalityReport {
        expectation_lhs: lhs1,
        expectation_rhs: rhs1,
        expectation_slack: rhs1 - lhs1,
        second_moment_lhs: lhs2,
        second_moment_rhs: rhs2,
        second_moment_slack: rhs2 - lhs2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_values() {
        for kind in [PsiKind::Psi1, PsiKind::Psi2] {
            assert_eq!(kind.eval(1.0), 0.0);
            assert_eq!(kind.eval(0.0), -1.0);
            assert_eq!(kind.eval(f64::INFINITY), 1.0);
        }
        assert_eq!(PsiKind::HalfLog.eval(1.0), 0.0);
        assert_eq!(PsiKind::HalfLog.eval(0.0), f64::NEG_INFINITY);
        assert_eq!(PsiKind::HalfLog.eval(f64::INFINITY), f64::INFINITY);
    }

    #[test]
    fn pinned_interior_values() {
        assert!((PsiKind::Psi1.eval(4.0) - 0.6).abs() < 1e-15);
        assert!((PsiKind::Psi2.eval(4.0) - 0.727606875108999).abs() < 1e-12);
        assert!((PsiKind::HalfLog.eval(std::f64::consts::E.powi(2)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ratio_conventions() {
        for kind in [PsiKind::Psi1, PsiKind::Psi2] {
            assert_eq!(kind.eval_ratio(0.0, 0.0), 0.0);
            assert_eq!(kind.eval_ratio(2.5, 0.0), 1.0);
            assert_eq!(kind.eval_ratio(0.0, 2.5), -1.0);
            assert_eq!(kind.eval_ratio(f64::INFINITY, f64::INFINITY), 0.0);
            assert_eq!(kind.eval_ratio(f64::INFINITY, 1.0), 1.0);
            assert_eq!(kind.eval_ratio(1.0, f64::INFINITY), -1.0);
        }
        assert_eq!(PsiKind::HalfLog.eval_ratio(1.0, 0.0), f64::INFINITY);
        assert_eq!(PsiKind::HalfLog.eval_ratio(0.0, 1.0), f64::NEG_INFINITY);
        // ψ₁(√(1/4)) = ψ₁(1/2) = −1/3
        assert!((PsiKind::Psi1.eval_ratio(1.0, 4.0) + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn constants_table() {
        let c1 = PsiKind::Psi1.constants().unwrap();
        assert_eq!(c1.a0, 4.0);
        assert_eq!(c1.a1, 0.375);
        assert!((c1.a2_sq - 3.0 * std::f64::consts::SQRT_2).abs() < 1e-15);
        let c2 = PsiKind::Psi2.constants().unwrap();
        assert_eq!(c2.a0, 4.97);
        assert_eq!(c2.a1, 0.083);
        assert!((c2.a2_sq - (3.0 + 2.0 * std::f64::consts::SQRT_2)).abs() < 1e-15);
        assert!(PsiKind::HalfLog.constants().is_none());
        // admissibility: a₂² ≥ max(1, 6·a₁)
        for c in [c1, c2] {
            assert!(c.a2_sq >= 1.0_f64.max(6.0 * c.a1));
        }
    }

    #[test]
    fn axiom_sweep_bounded_kernels() {
        let grid = log_grid(1e-8, 1e8, 10_000);
        for kind in [PsiKind::Psi1, PsiKind::Psi2] {
            let rep = check_axioms(kind, &grid).unwrap();
            assert_eq!(rep.at_one, 0.0);
            assert!(rep.max_antisymmetry_defect <= 1e-12, "{rep:?}");
            assert_eq!(rep.monotonicity_violations, 0);
            assert_eq!(rep.range_violations, 0);
        }
    }

    #[test]
    fn axiom_sweep_flags_unbounded_kernel() {
        let grid = log_grid(1e-8, 1e8, 1000);
        let rep = check_axioms(PsiKind::HalfLog, &grid).unwrap();
        assert!(rep.range_violations > 0);
        assert_eq!(rep.monotonicity_violations, 0);
        assert!(rep.max_antisymmetry_defect <= 1e-12);
    }

    #[test]
    fn psi1_tracks_half_log_on_reference_windows() {
        let grid = log_grid(1e-8, 1e8, 10_000);
        let rep = check_axioms(PsiKind::Psi1, &grid).unwrap();
        let lr = rep.log_ratio.unwrap();
        assert!(lr.on_half_two.0 > 0.96 && lr.on_half_two.1 <= 1.0, "{lr:?}");
        assert!(lr.on_quarter_four.0 > 0.86 && lr.on_quarter_four.1 <= 1.0, "{lr:?}");
    }

    #[test]
    fn moment_check_rejects_unbounded_kernel() {
        let d = DiscreteDensity::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        assert!(check_moment_inequalities(PsiKind::HalfLog, &d, &d, &d).is_err());
    }

    #[test]
    fn moment_check_simple_triple() {
        let r = DiscreteDensity::new(vec![0.0, 1.0, 2.0], vec![0.2, 0.5, 0.3]).unwrap();
        let q = DiscreteDensity::new(vec![0.0, 1.0, 2.0], vec![0.6, 0.4, 0.0]).unwrap();
        let q2 = DiscreteDensity::new(vec![0.0, 1.0, 2.0], vec![0.0, 0.3, 0.7]).unwrap();
        for kind in [PsiKind::Psi1, PsiKind::Psi2] {
            let rep = check_moment_inequalities(kind, &r, &q, &q2).unwrap();
            assert!(rep.expectation_slack >= -1e-12, "{rep:?}");
            assert!(rep.second_moment_slack >= -1e-12, "{rep:?}");
        }
    }
}
