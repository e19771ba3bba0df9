//! Invariant suite behind `rho verify`.
//!
//! Every check here is fast, deterministic, and independent of the Monte
//! Carlo experiments: kernel axioms and moment inequalities, engine-versus-
//! oracle agreement, the uniform-location counting identity, closed-form
//! distance checks, sampler calibration and thread-count determinism.  One
//! line per check is printed; the suite as a whole passes only if every
//! check does, and the command's exit code reflects exactly that.

use rand::Rng;
use rho_core::{
    brute_force_oracle, build_histogram_family, build_location_family, build_uniform_scale_family,
    check_axioms, check_moment_inequalities, decreasing_mle_oracle, grenander_estimate,
    hellinger2_analytic, hellinger2_quadrature, log_grid, make_rng, quadrature_mass, rho_estimate,
    sample_law, CandidateFamily, Dataset, DensitySpec, DiscreteDensity, EngineOptions, FamilyStructure,
    PsiKind, QuadratureOpts, TailPolicy, TrueLaw,
};

const CHECK_SEED: u64 = 0x5eed;

fn fail(detail: impl Into<String>) -> Result<(), String> {
    Err(detail.into())
}

// ---- kernel axioms -------------------------------------------------------

fn psi_axioms() -> Result<(), String> {
    let grid = log_grid(1e-8, 1e8, 10_000);
    for kind in [PsiKind::Psi1, PsiKind::Psi2] {
        let rep = check_axioms(kind, &grid).map_err(|e| e.to_string())?;
        if rep.at_one != 0.0 {
            return fail(format!("{kind:?}: ψ(1) = {} ≠ 0", rep.at_one));
        }
        if (rep.at_zero - (-1.0)).abs() > 1e-15 || (rep.at_infinity - 1.0).abs() > 1e-15 {
            return fail(format!("{kind:?}: boundary values {} / {}", rep.at_zero, rep.at_infinity));
        }
        if rep.max_antisymmetry_defect > 1e-12 {
            return fail(format!("{kind:?}: antisymmetry defect {}", rep.max_antisymmetry_defect));
        }
        if rep.monotonicity_violations > 0 || rep.range_violations > 0 {
            return fail(format!(
                "{kind:?}: {} monotonicity / {} range violations",
                rep.monotonicity_violations, rep.range_violations
            ));
        }
    }
    let rep = check_axioms(PsiKind::Psi1, &grid).map_err(|e| e.to_string())?;
    let lr = rep.log_ratio.ok_or("ψ₁ log-ratio bands missing")?;
    if !(lr.on_half_two.0 > 0.96 && lr.on_half_two.1 <= 1.0 + 1e-12) {
        return fail(format!("ψ₁/half-log on [1/2,2] ∈ [{}, {}]", lr.on_half_two.0, lr.on_half_two.1));
    }
    if !(lr.on_quarter_four.0 > 0.86 && lr.on_quarter_four.1 <= 1.0 + 1e-12) {
        return fail(format!(
            "ψ₁/half-log on [1/4,4] ∈ [{}, {}]",
            lr.on_quarter_four.0, lr.on_quarter_four.1
        ));
    }
    // the half-log kernel must trip the range check — that unboundedness is
    // the whole story
    let halflog = check_axioms(PsiKind::HalfLog, &grid).map_err(|e| e.to_string())?;
    if halflog.range_violations == 0 {
        return fail("half-log kernel unexpectedly bounded on the grid");
    }
    Ok(())
}

// ---- moment inequalities -------------------------------------------------

/// Draw a sampling law and two candidates on a shared integer support of
/// 2–16 points.  The candidates may place zero mass on support points the
/// law hits, which is exactly where the ratio conventions matter; shared
/// with the acceptance suite.
pub fn random_triple(rng: &mut rand_chacha::ChaCha8Rng) -> (DiscreteDensity, DiscreteDensity, DiscreteDensity) {
    let k = rng.gen_range(2..=16usize);
    let support: Vec<f64> = (0..k).map(|i| i as f64).collect();
    let mut draw = |allow_zero: bool| {
        let mut mass: Vec<f64> = (0..k)
            .map(|_| {
                let u: f64 = rng.gen();
                if allow_zero && u < 0.2 {
                    0.0
                } else {
                    u
                }
            })
            .collect();
        let total: f64 = mass.iter().sum();
        if total == 0.0 {
            mass[0] = 1.0;
        } else {
            for m in &mut mass {
                *m /= total;
            }
        }
        DiscreteDensity::new(support.clone(), mass).expect("normalized mass vector")
    };
    (draw(false), draw(true), draw(true))
}

fn moment_inequalities() -> Result<(), String> {
    let mut rng = make_rng(CHECK_SEED, 1);
    for trial in 0..400 {
        let (r, q, q2) = random_triple(&mut rng);
        for kind in [PsiKind::Psi1, PsiKind::Psi2] {
            let rep = check_moment_inequalities(kind, &r, &q, &q2).map_err(|e| e.to_string())?;
            if rep.expectation_slack < -1e-10 || rep.second_moment_slack < -1e-10 {
                return fail(format!(
                    "trial {trial} {kind:?}: slacks {} / {}",
                    rep.expectation_slack, rep.second_moment_slack
                ));
            }
        }
    }
    Ok(())
}

// ---- engine vs oracle ----------------------------------------------------

/// Rotating catalog of small family/data setups for oracle comparisons
/// (every family has at most twelve members and every sample at most fifty
/// points, so the quadratic reference scan stays cheap); shared with the
/// acceptance suite.
pub fn oracle_instance(
    case: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> (CandidateFamily, Dataset) {
    let n = rng.gen_range(10..=50usize);
    match case % 4 {
        0 => {
            let thetas: Vec<f64> = (0..rng.gen_range(3..=12usize)).map(|k| -1.5 + 0.3 * k as f64).collect();
            let base = DensitySpec::gaussian(0.0, 1.0).unwrap();
            let fam = build_location_family(&base, &thetas, "gaussian locations").unwrap();
            let law = TrueLaw::Density(DensitySpec::gaussian(0.0, 1.0).unwrap());
            (fam, sample_law(&law, n, rng).unwrap())
        }
        1 => {
            let thetas: Vec<f64> = (1..=rng.gen_range(3..=12usize)).map(|k| 0.4 * k as f64).collect();
            let fam = build_uniform_scale_family(&thetas, "scales").unwrap();
            let theta = thetas[thetas.len() / 2];
            (fam, sample_law(&TrueLaw::UniformScale { theta }, n, rng).unwrap())
        }
        2 => {
            let members: Vec<DensitySpec> = (0..rng.gen_range(3..=12usize))
                .map(|k| DensitySpec::uniform(-1.0 + 0.25 * k as f64, 0.25 * k as f64).unwrap())
                .collect();
            let fam = CandidateFamily::new("unit intervals", members)
                .unwrap()
                .with_structure(FamilyStructure::IndicatorLevel)
                .unwrap();
            let law = TrueLaw::Density(DensitySpec::uniform(-0.5, 0.5).unwrap());
            (fam, sample_law(&law, n, rng).unwrap())
        }
        _ => {
            let fam = build_histogram_family(&[0.0, 0.5, 1.0], 0.25, 100, "small lattice").unwrap();
            let law = TrueLaw::Density(DensitySpec::uniform(0.0, 1.0).unwrap());
            (fam, sample_law(&law, n, rng).unwrap())
        }
    }
}

fn oracle_equivalence() -> Result<(), String> {
    let mut rng = make_rng(CHECK_SEED, 2);
    let opts = EngineOptions::default();
    for case in 0..50 {
        let (fam, data) = oracle_instance(case, &mut rng);
        for kind in [PsiKind::Psi1, PsiKind::Psi2] {
            let fast = rho_estimate(&data, &fam, kind, &opts).map_err(|e| e.to_string())?;
            let (oracle_ix, _) = brute_force_oracle(&data, &fam, kind).map_err(|e| e.to_string())?;
            if fast.member_index != oracle_ix {
                return fail(format!(
                    "case {case} {kind:?} ({}): engine {} vs oracle {oracle_ix}",
                    fam.label(),
                    fast.member_index
                ));
            }
        }
    }
    Ok(())
}

// ---- uniform-location counting identity ----------------------------------

fn uniform_location_identity() -> Result<(), String> {
    let mut rng = make_rng(CHECK_SEED, 3);
    let los: Vec<f64> = (0..41).map(|k| -1.0 + 0.05 * k as f64).collect();
    let members: Vec<DensitySpec> = los.iter().map(|&lo| DensitySpec::uniform(lo, lo + 1.0).unwrap()).collect();
    let fam = CandidateFamily::new("unit-interval locations", members)
        .unwrap()
        .with_structure(FamilyStructure::IndicatorLevel)
        .unwrap();
    for case in 0..100 {
        let shift: f64 = rng.gen_range(-0.4..0.4);
        let n = rng.gen_range(5..=60usize);
        let law = TrueLaw::Density(DensitySpec::uniform(shift - 0.5, shift + 0.5).unwrap());
        let data = sample_law(&law, n, &mut rng).unwrap();
        let xs = data.scalars().unwrap();
        // the counting identity: the selected member maximizes the number
        // of covered observations, smallest index on ties
        let counts: Vec<usize> = los
            .iter()
            .map(|&lo| xs.iter().filter(|x| (lo..=lo + 1.0).contains(*x)).count())
            .collect();
        let best = *counts.iter().max().unwrap();
        let argmax = counts.iter().position(|&c| c == best).unwrap();
        for kind in [PsiKind::Psi1, PsiKind::Psi2] {
            // alternate between the counting fast path and the generic scan
            let opts = EngineOptions { force_generic: case % 2 == 1, ..EngineOptions::default() };
            let fit = rho_estimate(&data, &fam, kind, &opts).map_err(|e| e.to_string())?;
            if fit.member_index != argmax {
                return fail(format!(
                    "case {case} {kind:?}: selected {} vs count argmax {argmax}",
                    fit.member_index
                ));
            }
        }
    }
    Ok(())
}

// ---- closed forms --------------------------------------------------------

fn truncation_closed_form() -> Result<(), String> {
    let opts = QuadratureOpts {
        cells: 200_000,
        window: (0.0, 60.0),
        tail: TailPolicy::ErrorIfExcluded,
    };
    for theta in [0.5, 1.0, 2.0] {
        for cutoff in [1.0, 3.0, 10.0] {
            let full = DensitySpec::exponential(theta, 0.0).map_err(|e| e.to_string())?;
            let trunc = DensitySpec::truncated_exponential(theta, cutoff).map_err(|e| e.to_string())?;
            let analytic = hellinger2_analytic(&full, &trunc).ok_or("missing closed form")?;
            let quad = hellinger2_quadrature(&full, &trunc, &opts).map_err(|e| e.to_string())?;
            if (analytic - quad).abs() > 1e-8 {
                return fail(format!(
                    "θ={theta} T={cutoff}: closed form {analytic} vs quadrature {quad}"
                ));
            }
        }
    }
    Ok(())
}

// ---- heavy-tail sampler --------------------------------------------------

fn heavy_tail_sampler() -> Result<(), String> {
    let p = DensitySpec::heavy_tail(0.0).map_err(|e| e.to_string())?;
    // quantile/CDF round-trip on an even grid of levels
    for i in 0..1000 {
        let u = (i as f64 + 0.5) / 1000.0;
        let x = p.quantile(u).map_err(|e| e.to_string())?;
        let back = p.cdf(x).map_err(|e| e.to_string())?;
        if (back - u).abs() > 1e-8 {
            return fail(format!("round-trip at u={u}: came back {back}"));
        }
    }
    // normalization: quadrature inside [−50, 50] plus the closed-form
    // x^{−2}/6 tails must give exactly unit mass
    let inside = quadrature_mass(&p, (-50.0, 50.0), 1_000_000).map_err(|e| e.to_string())?;
    let total = inside + 2.0 / (6.0 * 50.0);
    if (total - 1.0).abs() > 1e-9 {
        return fail(format!("density mass {total} ≠ 1"));
    }
    // distributional check at a pinned seed
    let mut rng = make_rng(CHECK_SEED, 4);
    let data = sample_law(&TrueLaw::Density(p.clone()), 100_000, &mut rng).map_err(|e| e.to_string())?;
    let mut xs = data.scalars().unwrap().to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let d = rho_core::ks_statistic(&xs, |x| p.cdf(x).unwrap()).map_err(|e| e.to_string())?;
    if d >= 0.01 {
        return fail(format!("KS statistic {d} ≥ 0.01"));
    }
    Ok(())
}

// ---- decreasing-density projection ---------------------------------------

fn pava_matches_oracle() -> Result<(), String> {
    let mut rng = make_rng(CHECK_SEED, 5);
    let edge_sets: [&[f64]; 3] = [
        &[0.0, 1.0, 2.0],
        &[0.0, 0.5, 1.0, 2.0],
        &[0.0, 0.5, 1.0, 1.5, 2.0],
    ];
    for case in 0..60 {
        let edges = edge_sets[case % edge_sets.len()];
        let n = rng.gen_range(20..=80usize);
        let truth = DensitySpec::piecewise_constant(vec![0.0, 1.0, 2.0], vec![0.7, 0.3]).unwrap();
        let data = sample_law(&TrueLaw::Density(truth), n, &mut rng).unwrap();
        let xs = data.scalars().unwrap();
        let fit = grenander_estimate(xs, edges).map_err(|e| e.to_string())?;
        let oracle = decreasing_mle_oracle(xs, edges).map_err(|e| e.to_string())?;
        if fit != oracle {
            return fail(format!("case {case}: pooled fit differs from enumeration oracle"));
        }
    }
    Ok(())
}

// ---- thread determinism --------------------------------------------------

fn thread_determinism() -> Result<(), String> {
    use crate::config::{CliOverrides, FileConfig, RunSettings};
    let exp = crate::experiments::find("unbounded_likelihood_translation").map_err(|e| e.to_string())?;
    let render = |threads: usize| -> Result<String, String> {
        let mut s = RunSettings::resolve(
            exp.name(),
            &FileConfig::default(),
            &CliOverrides::default(),
            exp.defaults(),
        )
        .map_err(|e| e.to_string())?;
        s.n = 30;
        s.reps = 4;
        s.threads = threads;
        let outcome = crate::runner::execute(exp, &s).map_err(|e| e.to_string())?;
        Ok(crate::report::render_csv(&outcome.records))
    };
    let single = render(1)?;
    let multi = render(2)?;
    if single != multi {
        return fail("records differ between 1 and 2 worker threads");
    }
    Ok(())
}

// ---- driver --------------------------------------------------------------

/// Run the whole suite, printing one line per check.  Returns true only if
/// every check passed.
pub fn run_all() -> bool {
    let checks: [(&str, fn() -> Result<(), String>); 8] = [
        ("psi_axioms", psi_axioms),
        ("moment_inequalities", moment_inequalities),
        ("oracle_equivalence", oracle_equivalence),
        ("uniform_location_identity", uniform_location_identity),
        ("truncation_closed_form", truncation_closed_form),
        ("heavy_tail_sampler", heavy_tail_sampler),
        ("pava_matches_oracle", pava_matches_oracle),
        ("thread_determinism", thread_determinism),
    ];
    let mut all_ok = true;
    for (name, check) in checks {
        match check() {
            Ok(()) => println!("verify {name}: ok"),
            Err(detail) => {
                all_ok = false;
                println!("verify {name}: FAIL — {detail}");
            }
        }
    }
    all_ok
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        assert!(run_all());
    }

    #[test]
    fn random_triples_are_normalized() {
        let mut rng = make_rng(7, 7);
        for _ in 0..50 {
            let (r, q, q2) = random_triple(&mut rng);
            for d in [&r, &q, &q2] {
                let total: f64 = d.mass().iter().sum();
                assert!((total - 1.0).abs() < 1e-9);
            }
        }
    }
}
