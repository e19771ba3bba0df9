//! Seeded data generation for the Monte Carlo harness.
//!
//! Replications are independent streams of one ChaCha generator: the seed
//! picks the experiment-level key and the stream index picks the
//! replication, so results are reproducible for any replication count and
//! any thread schedule.  Every draw consumes a fixed, documented number of
//! uniforms given the drawn path (mixtures first consume one selection
//! uniform, then the selected component's budget), which keeps sequences
//! stable under refactoring.
//!
//! Gaussians use the cosine Box–Muller branch and discard the paired sine
//! value: exactly two uniforms per variate, no cached state.

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::density::{Dataset, DensitySpec};
use crate::error::{CoreError, Result};

/// Generator keyed by experiment seed and replication stream.
pub fn make_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard normal via Box–Muller (cosine branch, two uniforms).
pub fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.sample(Open01);
    let u2: f64 = rng.sample(Open01);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Quantile of the heavy-tailed density (|x|^{−1/2}/6 inside the unit
/// interval, x^{−2}/6 outside), for u ∈ (0, 1).
pub fn heavy_tail_quantile(u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(CoreError::InvalidArgument(format!("quantile level {u} outside (0, 1)")));
    }
    Ok(crate::density::heavy_tail_quantile_impl(u))
}

/// One draw from a scalar density.
pub fn draw_density(spec: &DensitySpec, rng: &mut ChaCha8Rng) -> Result<f64> {
    match spec {
        DensitySpec::Gaussian { mean, sd } => Ok(mean + sd * standard_normal(rng)),
        DensitySpec::Mixture { weights, components } => {
            let u: f64 = rng.sample(Open01);
            let mut acc = 0.0;
            let mut pick = components.len() - 1;
            for (i, w) in weights.iter().enumerate() {
                acc += w;
                if u < acc {
                    pick = i;
                    break;
                }
            }
            draw_density(&components[pick], rng)
        }
        _ => {
            let u: f64 = rng.sample(Open01);
            spec.quantile(u)
        }
    }
}

/// Covariate-to-feature expansion for regression designs.
#[derive(Debug, Clone, PartialEq)]
pub enum FeatureMap {
    /// φ(w) = (w).
    Identity,
    /// φ(w) = (1, w, …, w^degree).
    Polynomial { degree: usize },
}

impl FeatureMap {
    pub fn dim(&self) -> usize {
        match self {
            FeatureMap::Identity => 1,
            FeatureMap::Polynomial { degree } => degree + 1,
        }
    }

    pub fn apply(&self, w: f64) -> Vec<f64> {
        match self {
            FeatureMap::Identity => vec![w],
            FeatureMap::Polynomial { degree } => {
                let mut row = Vec::with_capacity(degree + 1);
                let mut p = 1.0;
                for _ in 0..=*degree {
                    row.push(p);
                    p *= w;
                }
                row
            }
        }
    }
}

/// Data-generating laws for the experiments.
#[derive(Debug, Clone, PartialEq)]
pub enum TrueLaw {
    /// i.i.d. draws from a scalar density.
    Density(DensitySpec),
    /// i.i.d. uniform on [0, θ].
    UniformScale { theta: f64 },
    /// With probability α an outlier uniform on [100+θ, 101+θ], otherwise
    /// uniform on [θ, θ+1].  Two uniforms per draw on either path.
    MixtureAlphaTheta { alpha: f64, theta: f64 },
    /// With probability ε a draw from the contaminant, otherwise the base.
    Contaminated { epsilon: f64, base: DensitySpec, contaminant: DensitySpec },
    /// Sample the base law, then overwrite fixed positions with fixed values.
    OutlierInjected { base: Box<TrueLaw>, indices: Vec<usize>, values: Vec<f64> },
    /// Draw covariate w, expand features φ(w), respond β·φ(w) + error.
    Regression { covariate: DensitySpec, map: FeatureMap, coefficients: Vec<f64>, error: DensitySpec },
}

/// Sample n observations.
pub fn sample_law(law: &TrueLaw, n: usize, rng: &mut ChaCha8Rng) -> Result<Dataset> {
    if n == 0 {
        return Err(CoreError::EmptyInput("sample size"));
    }
    match law {
        TrueLaw::Density(spec) => {
            let mut xs = Vec::with_capacity(n);
            for _ in 0..n {
                xs.push(draw_density(spec, rng)?);
            }
            Ok(Dataset::Scalars(xs))
        }
        TrueLaw::UniformScale { theta } => {
            if !(theta.is_finite() && *theta > 0.0) {
                return Err(CoreError::InvalidArgument(format!("scale {theta} must be positive")));
            }
            let mut xs = Vec::with_capacity(n);
            for _ in 0..n {
                let u: f64 = rng.sample(Open01);
                xs.push(theta * u);
            }
            Ok(Dataset::Scalars(xs))
        }
        TrueLaw::MixtureAlphaTheta { alpha, theta } => {
            if !(0.0..=1.0).contains(alpha) {
                return Err(CoreError::InvalidArgument(format!("mixture weight {alpha} outside [0, 1]")));
            }
            let mut xs = Vec::with_capacity(n);
            for _ in 0..n {
                let pick: f64 = rng.sample(Open01);
                let u: f64 = rng.sample(Open01);
                let lo = if pick < *alpha { 100.0 + theta } else { *theta };
                xs.push(lo + u);
            }
            Ok(Dataset::Scalars(xs))
        }
        TrueLaw::Contaminated { epsilon, base, contaminant } => {
            if !(0.0..=1.0).contains(epsilon) {
                return Err(CoreError::InvalidArgument(format!("contamination rate {epsilon} outside [0, 1]")));
            }
            let mut xs = Vec::with_capacity(n);
            for _ in 0..n {
                let pick: f64 = rng.sample(Open01);
                let spec = if pick < *epsilon { contaminant } else { base };
                xs.push(draw_density(spec, rng)?);
            }
            Ok(Dataset::Scalars(xs))
        }
        TrueLaw::OutlierInjected { base, indices, values } => {
            if indices.len() != values.len() {
                return Err(CoreError::DimensionMismatch { expected: indices.len(), got: values.len() });
            }
            let mut data = sample_law(base, n, rng)?;
            let Dataset::Scalars(xs) = &mut data else {
                return Err(CoreError::Unsupported("outlier injection into non-scalar data"));
            };
            for (&ix, &v) in indices.iter().zip(values) {
                if ix >= xs.len() {
                    return Err(CoreError::InvalidArgument(format!("outlier position {ix} beyond sample size {n}")));
                }
                xs[ix] = v;
            }
            Ok(data)
        }
        TrueLaw::Regression { covariate, map, coefficients, error } => {
            if coefficients.len() != map.dim() {
                return Err(CoreError::DimensionMismatch { expected: map.dim(), got: coefficients.len() });
            }
            let mut features = Vec::with_capacity(n);
            let mut responses = Vec::with_capacity(n);
            for _ in 0..n {
                let w = draw_density(covariate, rng)?;
                let phi = map.apply(w);
                let fitted: f64 = phi.iter().zip(coefficients).map(|(p, c)| p * c).sum();
                let eps = draw_density(error, rng)?;
                features.push(phi);
                responses.push(fitted + eps);
            }
            Ok(Dataset::Pairs { features, responses })
        }
    }
}

/// Kolmogorov–Smirnov distance between a sorted sample and a CDF.
pub fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if sorted.is_empty() {
        return Err(CoreError::EmptyInput("sample"));
    }
    for w in sorted.windows(2) {
        if !(w[0] <= w[1]) {
            return Err(CoreError::InvalidArgument("sample must be sorted ascending".into()));
        }
    }
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max((f - (i as f64 + 1.0) / n).abs());
    }
    Ok(d)
}
