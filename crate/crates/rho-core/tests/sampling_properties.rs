//! Sampling-layer property tests: quantile/CDF consistency, stream
//! independence from evaluation order, and distributional sanity via
//! Kolmogorov–Smirnov distances.

use proptest::prelude::*;
use rho_core::{draw_density, ks_statistic, make_rng, sample_law, Dataset, DensitySpec, TrueLaw};

fn invertible_spec() -> impl Strategy<Value = DensitySpec> {
    prop_oneof![
        (-3.0f64..3.0, 0.1f64..4.0).prop_map(|(lo, w)| DensitySpec::uniform(lo, lo + w).unwrap()),
        (0.2f64..3.0, -1.0f64..1.0).prop_map(|(rate, shift)| DensitySpec::exponential(rate, shift).unwrap()),
        (0.2f64..3.0, 0.5f64..6.0)
            .prop_map(|(rate, cutoff)| DensitySpec::truncated_exponential(rate, cutoff).unwrap()),
        (-1.0f64..1.0).prop_map(|s| DensitySpec::heavy_tail(s).unwrap()),
        Just(DensitySpec::piecewise_constant(vec![0.0, 0.5, 1.5, 2.0], vec![0.8, 0.35, 0.5]).unwrap()),
    ]
}

proptest! {
    #[test]
    fn quantile_inverts_cdf(spec in invertible_spec(), u in 1e-6f64..1.0) {
        prop_assume!(u < 1.0 - 1e-9);
        let x = spec.quantile(u).unwrap();
        let back = spec.cdf(x).unwrap();
        prop_assert!((back - u).abs() <= 1e-9, "u {u} → x {x} → {back}");
    }

    #[test]
    fn draws_fall_in_the_support(spec in invertible_spec(), seed in 0u64..1000) {
        let mut rng = make_rng(seed, 0);
        for _ in 0..50 {
            let x = draw_density(&spec, &mut rng).unwrap();
            let f = spec.cdf(x).unwrap();
            prop_assert!((0.0..=1.0).contains(&f));
            prop_assert!(x.is_finite());
        }
    }

    #[test]
    fn streams_commute_with_evaluation_order(seed in 0u64..1000, a in 0u64..64, b in 0u64..64) {
        prop_assume!(a != b);
        let law = TrueLaw::Density(DensitySpec::gaussian(0.0, 1.0).unwrap());
        // draw a then b
        let (first_a, first_b) = {
            let mut ra = make_rng(seed, a);
            let mut rb = make_rng(seed, b);
            (sample_law(&law, 10, &mut ra).unwrap(), sample_law(&law, 10, &mut rb).unwrap())
        };
        // draw b then a
        let (second_b, second_a) = {
            let mut rb = make_rng(seed, b);
            let mut ra = make_rng(seed, a);
            (sample_law(&law, 10, &mut rb).unwrap(), sample_law(&law, 10, &mut ra).unwrap())
        };
        prop_assert_eq!(scalars(first_a), scalars(second_a));
        prop_assert_eq!(scalars(first_b), scalars(second_b));
    }

    #[test]
    fn distinct_streams_differ(seed in 0u64..1000) {
        let law = TrueLaw::Density(DensitySpec::uniform(0.0, 1.0).unwrap());
        let mut r0 = make_rng(seed, 0);
        let mut r1 = make_rng(seed, 1);
        let x0 = scalars(sample_law(&law, 8, &mut r0).unwrap());
        let x1 = scalars(sample_law(&law, 8, &mut r1).unwrap());
        prop_assert_ne!(x0, x1);
    }

    #[test]
    fn regression_responses_respect_error_support(
        seed in 0u64..500,
        b0 in -1.0f64..1.0, b1 in -2.0f64..2.0, b2 in -2.0f64..2.0,
        half in 0.1f64..1.0,
    ) {
        let law = TrueLaw::Regression {
            covariate: DensitySpec::uniform(-1.0, 1.0).unwrap(),
            map: rho_core::FeatureMap::Polynomial { degree: 2 },
            coefficients: vec![b0, b1, b2],
            error: DensitySpec::uniform(-half, half).unwrap(),
        };
        let mut rng = make_rng(seed, 0);
        let Dataset::Pairs { features, responses } = sample_law(&law, 30, &mut rng).unwrap() else {
            panic!()
        };
        for (phi, &y) in features.iter().zip(&responses) {
            let fitted = b0 + b1 * phi[1] + b2 * phi[2];
            prop_assert!((y - fitted).abs() <= half + 1e-12);
        }
    }
}

fn scalars(d: Dataset) -> Vec<f64> {
    match d {
        Dataset::Scalars(xs) => xs,
        _ => panic!("scalar dataset expected"),
    }
}

#[test]
fn gaussian_law_passes_ks_at_conservative_level() {
    let mut rng = make_rng(41, 7);
    let spec = DensitySpec::gaussian(0.5, 2.0).unwrap();
    let mut xs: Vec<f64> = (0..4000).map(|_| draw_density(&spec, &mut rng).unwrap()).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let d = ks_statistic(&xs, |x| spec.cdf(x).unwrap()).unwrap();
    // level-1e-3 critical value 1.95/√n
    assert!(d < 1.95 / (4000.0f64).sqrt(), "KS {d}");
}

#[test]
fn truncated_law_matches_conditioned_parent() {
    // truncated draws follow the parent law conditioned on the window
    let mut rng = make_rng(42, 0);
    let spec = DensitySpec::truncated_exponential(1.0, 3.0).unwrap();
    let mut xs: Vec<f64> = (0..4000).map(|_| draw_density(&spec, &mut rng).unwrap()).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let z = 1.0 - (-3.0f64).exp();
    let d = ks_statistic(&xs, |x| (1.0 - (-x).exp()).clamp(0.0, z) / z).unwrap();
    assert!(d < 1.95 / (4000.0f64).sqrt(), "KS {d}");
    assert!(xs.iter().all(|&x| (0.0..=3.0).contains(&x)));
}
