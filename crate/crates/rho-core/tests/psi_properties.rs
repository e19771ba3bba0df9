//! Property tests for the comparison kernels: the axioms hold on arbitrary
//! inputs, ratio evaluation is scale-invariant, and the two moment
//! inequalities hold for random density triples including vanishing cells.

use proptest::prelude::*;
use rho_core::{check_moment_inequalities, DiscreteDensity, PsiKind};

const BOUNDED: [PsiKind; 2] = [PsiKind::Psi1, PsiKind::Psi2];

fn positive_arg() -> impl Strategy<Value = f64> {
    // log-uniform over ~16 orders of magnitude
    (-18.0f64..18.0).prop_map(f64::exp)
}

/// Random probability vector with a controllable share of empty cells.
fn masses(cells: usize) -> impl Strategy<Value = Vec<f64>> {
    (
        prop::collection::vec(0.01f64..1.0, cells),
        prop::collection::vec(0.0f64..1.0, cells),
    )
        .prop_map(|(raw, keep)| {
            let mut m: Vec<f64> = raw
                .iter()
                .zip(&keep)
                .map(|(&r, &k)| if k < 0.25 { 0.0 } else { r })
                .collect();
            if m.iter().sum::<f64>() <= 0.0 {
                m[0] = 1.0;
            }
            let s: f64 = m.iter().sum();
            m.iter_mut().for_each(|v| *v /= s);
            m
        })
}

fn discrete(mass: Vec<f64>) -> DiscreteDensity {
    let support: Vec<f64> = (0..mass.len()).map(|i| i as f64).collect();
    DiscreteDensity::new(support, mass).unwrap()
}

proptest! {
    #[test]
    fn bounded_kernels_stay_in_range(x in positive_arg()) {
        for kind in BOUNDED {
            let v = kind.eval(x);
            prop_assert!((-1.0..=1.0).contains(&v), "{kind:?}({x}) = {v}");
        }
    }

    #[test]
    fn antisymmetry_under_inversion(x in positive_arg()) {
        for kind in [PsiKind::Psi1, PsiKind::Psi2, PsiKind::HalfLog] {
            let defect = (kind.eval(x) + kind.eval(1.0 / x)).abs();
            prop_assert!(defect <= 1e-12, "{kind:?} defect {defect} at {x}");
        }
    }

    #[test]
    fn monotone_in_the_ratio(a in positive_arg(), b in positive_arg()) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        for kind in BOUNDED {
            prop_assert!(kind.eval(lo) <= kind.eval(hi) + 1e-15);
        }
    }

    #[test]
    fn ratio_scale_invariance_exact_for_binary_scales(
        num in 0.0f64..1e6,
        den in 1e-6f64..1e6,
        exp in -40i32..40,
    ) {
        // scaling both masses by a power of two is exact in binary floating
        // point, so the score must not move at all
        let c = (2.0f64).powi(exp);
        for kind in BOUNDED {
            let direct = kind.eval_ratio(num, den);
            let scaled = kind.eval_ratio(c * num, c * den);
            prop_assert_eq!(direct, scaled, "kind {:?} c {}", kind, c);
        }
    }

    #[test]
    fn ratio_scale_invariance_general(
        num in 1e-6f64..1e6,
        den in 1e-6f64..1e6,
        c in 1e-3f64..1e3,
    ) {
        for kind in BOUNDED {
            let direct = kind.eval_ratio(num, den);
            let scaled = kind.eval_ratio(c * num, c * den);
            prop_assert!((direct - scaled).abs() <= 1e-12);
        }
    }

    #[test]
    fn ratio_conventions_on_vanishing_cells(a in 1e-9f64..1e9) {
        for kind in BOUNDED {
            prop_assert_eq!(kind.eval_ratio(a, 0.0), 1.0);
            prop_assert_eq!(kind.eval_ratio(0.0, a), -1.0);
            prop_assert_eq!(kind.eval_ratio(0.0, 0.0), 0.0);
        }
    }

    #[test]
    fn moment_inequalities_hold_with_empty_cells(
        r in masses(6),
        q in masses(6),
        q2 in masses(6),
    ) {
        let (r, q, q2) = (discrete(r), discrete(q), discrete(q2));
        for kind in BOUNDED {
            let rep = check_moment_inequalities(kind, &r, &q, &q2).unwrap();
            prop_assert!(rep.expectation_slack >= -1e-10,
                "{kind:?} expectation slack {}", rep.expectation_slack);
            prop_assert!(rep.second_moment_slack >= -1e-10,
                "{kind:?} second-moment slack {}", rep.second_moment_slack);
        }
    }

    #[test]
    fn half_log_scores_are_unbounded(scale in 2.0f64..1e6) {
        // the unbounded kernel escapes [−1, 1] as the ratio grows
        let v = PsiKind::HalfLog.eval(scale * scale * 10.0);
        prop_assert!(v > 1.0);
    }
}
