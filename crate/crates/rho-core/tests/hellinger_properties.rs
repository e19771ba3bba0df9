//! Distance-level property tests: metric behavior of the squared Hellinger
//! distance, its relation to affinity and total variation, contamination
//! bounds, refinement invariance, and agreement between closed forms and
//! quadrature.

use proptest::prelude::*;
use rho_core::{
    affinity_discrete, hellinger2_analytic, hellinger2_discrete, hellinger2_quadrature, iid_hellinger2,
    DensitySpec, DiscreteDensity, QuadratureOpts,
};

fn masses(cells: usize) -> impl Strategy<Value = Vec<f64>> {
    (
        prop::collection::vec(0.01f64..1.0, cells),
        prop::collection::vec(0.0f64..1.0, cells),
    )
        .prop_map(|(raw, keep)| {
            let mut m: Vec<f64> = raw
                .iter()
                .zip(&keep)
                .map(|(&r, &k)| if k < 0.2 { 0.0 } else { r })
                .collect();
            if m.iter().sum::<f64>() <= 0.0 {
                m[0] = 1.0;
            }
            let s: f64 = m.iter().sum();
            m.iter_mut().for_each(|v| *v /= s);
            m
        })
}

fn discrete(mass: &[f64]) -> DiscreteDensity {
    let support: Vec<f64> = (0..mass.len()).map(|i| i as f64).collect();
    DiscreteDensity::new(support.clone(), mass.to_vec()).unwrap()
}

proptest! {
    #[test]
    fn symmetric_bitwise_and_bounded(a in masses(7), b in masses(7)) {
        let (p, q) = (discrete(&a), discrete(&b));
        let ab = hellinger2_discrete(&p, &q).unwrap();
        let ba = hellinger2_discrete(&q, &p).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert_eq!(hellinger2_discrete(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn distance_complements_affinity(a in masses(7), b in masses(7)) {
        let (p, q) = (discrete(&a), discrete(&b));
        let h2 = hellinger2_discrete(&p, &q).unwrap();
        let rho = affinity_discrete(&p, &q).unwrap();
        prop_assert!((h2 - (1.0 - rho)).abs() <= 1e-12);
    }

    #[test]
    fn triangle_inequality_on_the_root(a in masses(6), b in masses(6), c in masses(6)) {
        let (p, q, r) = (discrete(&a), discrete(&b), discrete(&c));
        let hpq = hellinger2_discrete(&p, &q).unwrap().sqrt();
        let hqr = hellinger2_discrete(&q, &r).unwrap().sqrt();
        let hpr = hellinger2_discrete(&p, &r).unwrap().sqrt();
        prop_assert!(hpr <= hpq + hqr + 1e-9);
    }

    #[test]
    fn sandwiched_by_total_variation(a in masses(7), b in masses(7)) {
        let (p, q) = (discrete(&a), discrete(&b));
        let h2 = hellinger2_discrete(&p, &q).unwrap();
        let tv: f64 = 0.5 * a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum::<f64>();
        prop_assert!(h2 <= tv + 1e-12, "h² {h2} > TV {tv}");
        prop_assert!(tv <= h2.sqrt() * (2.0 - h2).sqrt() + 1e-12);
    }

    #[test]
    fn contamination_moves_at_most_epsilon(a in masses(7), b in masses(7), eps in 0.0f64..1.0) {
        let mixed: Vec<f64> = a.iter().zip(&b).map(|(x, y)| (1.0 - eps) * x + eps * y).collect();
        let h2 = hellinger2_discrete(&discrete(&a), &discrete(&mixed)).unwrap();
        prop_assert!(h2 <= eps + 1e-12, "h² {h2} under ε {eps}");
    }

    #[test]
    fn refining_cells_changes_nothing(a in masses(6), b in masses(6), split in 1e-3f64..0.999, cell in 0usize..6) {
        // split one support cell of both densities in the same proportion
        let refine = |m: &[f64]| -> Vec<f64> {
            let mut out = Vec::with_capacity(m.len() + 1);
            for (j, &v) in m.iter().enumerate() {
                if j == cell {
                    out.push(split * v);
                    out.push((1.0 - split) * v);
                } else {
                    out.push(v);
                }
            }
            out
        };
        let (ra, rb) = (refine(&a), refine(&b));
        let support: Vec<f64> = (0..ra.len()).map(|i| i as f64).collect();
        let fine_a = DiscreteDensity::new(support.clone(), ra).unwrap();
        let fine_b = DiscreteDensity::new(support, rb).unwrap();
        let coarse = hellinger2_discrete(&discrete(&a), &discrete(&b)).unwrap();
        let fine = hellinger2_discrete(&fine_a, &fine_b).unwrap();
        prop_assert!((coarse - fine).abs() <= 1e-12);
    }

    #[test]
    fn closed_forms_agree_with_quadrature_uniforms(
        lo1 in -3.0f64..3.0, w1 in 0.1f64..4.0,
        lo2 in -3.0f64..3.0, w2 in 0.1f64..4.0,
    ) {
        let a = DensitySpec::uniform(lo1, lo1 + w1).unwrap();
        let b = DensitySpec::uniform(lo2, lo2 + w2).unwrap();
        let exact = hellinger2_analytic(&a, &b).unwrap();
        let quad = hellinger2_quadrature(&a, &b, &QuadratureOpts::default()).unwrap();
        prop_assert!((exact - quad).abs() <= 1e-6, "{exact} vs {quad}");
    }

    #[test]
    fn closed_forms_agree_with_quadrature_gaussians(
        m1 in -4.0f64..4.0, m2 in -4.0f64..4.0, sd in 0.3f64..3.0,
    ) {
        let a = DensitySpec::gaussian(m1, sd).unwrap();
        let b = DensitySpec::gaussian(m2, sd).unwrap();
        let exact = hellinger2_analytic(&a, &b).unwrap();
        let quad = hellinger2_quadrature(&a, &b, &QuadratureOpts::default()).unwrap();
        prop_assert!((exact - quad).abs() <= 1e-6, "{exact} vs {quad}");
    }

    #[test]
    fn product_sample_distance_scales_linearly(
        lo in -2.0f64..2.0, w in 0.2f64..3.0, n in 1usize..40,
    ) {
        let a = DensitySpec::uniform(0.0, 1.0).unwrap();
        let b = DensitySpec::uniform(lo, lo + w).unwrap();
        let one = hellinger2_quadrature(&a, &b, &QuadratureOpts::default()).unwrap();
        let many = iid_hellinger2(&a, &b, n, &QuadratureOpts::default()).unwrap();
        prop_assert!((many - n as f64 * one).abs() <= 1e-9 * n as f64);
        prop_assert!(many <= n as f64 + 1e-12);
    }
}
