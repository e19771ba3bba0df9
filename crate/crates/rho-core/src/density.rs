//! Density catalog: parametric families, evaluation, CDFs, quantiles.
//!
//! Every variant of [`DensitySpec`] describes a probability density on ℝ
//! (or, for [`DensitySpec::RegressionConditional`], a conditional density of
//! a response given a feature vector).  Constructors validate parameters and,
//! where the normalizing constant is not forced by construction, that the
//! density integrates to 1 within 1e−7.
//!
//! Two deliberate oddities:
//!
//! * [`DensitySpec::HeavyTailP`] has an integrable singularity at its shift
//!   point; evaluation there returns +∞, which the kernel ratio conventions
//!   absorb.  Its mass splits as 1/3 on each of ±(0,1] and 1/6 on each tail.
//! * [`DensitySpec::SpikedGaussian`] is a density with respect to the
//!   standard Gaussian reference measure, not Lebesgue: exp(θx − θ²/2),
//!   multiplied by exp((θ²/2)·e^{x²}) at the single point x = θ (bitwise)
//!   when θ > 0.  Each member integrates to 1 (the spike sits on a Lebesgue
//!   null set) yet the likelihood it induces is unbounded over the family —
//!   the textbook trap for maximum likelihood.  It is excluded from the
//!   Hellinger/quadrature machinery.

use crate::error::{CoreError, Result};

const MASS_TOL: f64 = 1e-7;

/// A dataset: real observations, or feature/response pairs for regression.
#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    Scalars(Vec<f64>),
    Pairs { features: Vec<Vec<f64>>, responses: Vec<f64> },
}

impl Dataset {
    pub fn len(&self) -> usize {
        match self {
            Dataset::Scalars(v) => v.len(),
            Dataset::Pairs { responses, .. } => responses.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The scalar observations, if this is a scalar dataset.
    pub fn scalars(&self) -> Option<&[f64]> {
        match self {
            Dataset::Scalars(v) => Some(v),
            Dataset::Pairs { .. } => None,
        }
    }
}

/// A parametric density (see the module docs for the two non-Lebesgue
/// oddities).  Construct through the checked constructors.
#[derive(Debug, Clone, PartialEq)]
pub enum DensitySpec {
    /// Uniform on the closed interval [lo, hi].
    UniformInterval { lo: f64, hi: f64 },
    /// Normal with the given mean and standard deviation.
    Gaussian { mean: f64, sd: f64 },
    /// Exponential with the given rate, supported on [shift, ∞).
    Exponential { rate: f64, shift: f64 },
    /// Exponential with the given rate conditioned on [0, cutoff].
    TruncatedExponential { rate: f64, cutoff: f64 },
    /// p(x) = (1/6)·(|x−s|^{−1/2}·1{0<|x−s|≤1} + |x−s|^{−2}·1{|x−s|>1}).
    /// Symmetric around its shift s, singular at s, no finite moments of any
    /// positive order (the tail decays like x^{−2}).
    HeavyTailP { shift: f64 },
    /// Piecewise-constant levels between consecutive breakpoints, zero
    /// outside; `levels.len() + 1 == breakpoints.len()`.
    PiecewiseConstant { breakpoints: Vec<f64>, levels: Vec<f64> },
    /// Finite mixture Σ wᵢ·pᵢ.
    Mixture { weights: Vec<f64>, components: Vec<DensitySpec> },
    /// exp(θx − θ²/2) w.r.t. the standard Gaussian reference, spiked at
    /// x = θ (see module docs).
    SpikedGaussian { theta: f64 },
    /// Conditional density of y given features φ: error density evaluated at
    /// y − ⟨coefficients, φ⟩.
    RegressionConditional { coefficients: Vec<f64>, error: Box<DensitySpec> },
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(CoreError::InvalidDensity(msg.into()))
    }
}

impl DensitySpec {
    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        require(lo.is_finite() && hi.is_finite() && lo < hi, "uniform needs finite lo < hi")?;
        Ok(DensitySpec::UniformInterval { lo, hi })
    }

    pub fn gaussian(mean: f64, sd: f64) -> Result<Self> {
        require(mean.is_finite() && sd.is_finite() && sd > 0.0, "gaussian needs finite mean and sd > 0")?;
        Ok(DensitySpec::Gaussian { mean, sd })
    }

    pub fn exponential(rate: f64, shift: f64) -> Result<Self> {
        require(rate.is_finite() && rate > 0.0 && shift.is_finite(), "exponential needs rate > 0")?;
        Ok(DensitySpec::Exponential { rate, shift })
    }

    pub fn truncated_exponential(rate: f64, cutoff: f64) -> Result<Self> {
        require(
            rate.is_finite() && rate > 0.0 && cutoff.is_finite() && cutoff > 0.0,
            "truncated exponential needs rate > 0 and cutoff > 0",
        )?;
        Ok(DensitySpec::TruncatedExponential { rate, cutoff })
    }

    pub fn heavy_tail(shift: f64) -> Result<Self> {
        require(shift.is_finite(), "heavy-tail shift must be finite")?;
        Ok(DensitySpec::HeavyTailP { shift })
    }

    pub fn piecewise_constant(breakpoints: Vec<f64>, levels: Vec<f64>) -> Result<Self> {
        require(breakpoints.len() >= 2, "need at least two breakpoints")?;
        require(breakpoints.len() == levels.len() + 1, "need one level per cell")?;
        require(breakpoints.iter().all(|b| b.is_finite()), "breakpoints must be finite")?;
        require(
            breakpoints.windows(2).all(|w| w[0] < w[1]),
            "breakpoints must be strictly increasing",
        )?;
        require(levels.iter().all(|l| l.is_finite() && *l >= 0.0), "levels must be nonnegative")?;
        let mass: f64 = levels
            .iter()
            .zip(breakpoints.windows(2))
            .map(|(l, w)| l * (w[1] - w[0]))
            .sum();
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(CoreError::NotNormalized { mass, tol: MASS_TOL });
        }
        Ok(DensitySpec::PiecewiseConstant { breakpoints, levels })
    }

    pub fn mixture(weights: Vec<f64>, components: Vec<DensitySpec>) -> Result<Self> {
        require(!weights.is_empty() && weights.len() == components.len(), "mixture needs one weight per component")?;
        require(weights.iter().all(|w| w.is_finite() && *w >= 0.0), "weights must be nonnegative")?;
        for c in &components {
            require(
                !matches!(c, DensitySpec::SpikedGaussian { .. } | DensitySpec::RegressionConditional { .. }),
                "mixture components must be plain scalar densities",
            )?;
        }
        let mass: f64 = weights.iter().sum();
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(CoreError::NotNormalized { mass, tol: MASS_TOL });
        }
        Ok(DensitySpec::Mixture { weights, components })
    }

    pub fn spiked_gaussian(theta: f64) -> Result<Self> {
        require(theta.is_finite(), "spiked gaussian parameter must be finite")?;
        Ok(DensitySpec::SpikedGaussian { theta })
    }

    pub fn regression(coefficients: Vec<f64>, error: DensitySpec) -> Result<Self> {
        require(!coefficients.is_empty(), "regression needs at least one coefficient")?;
        require(coefficients.iter().all(|c| c.is_finite()), "coefficients must be finite")?;
        require(
            !matches!(error, DensitySpec::SpikedGaussian { .. } | DensitySpec::RegressionConditional { .. }),
            "regression error must be a plain scalar density",
        )?;
        Ok(DensitySpec::RegressionConditional { coefficients, error: Box::new(error) })
    }

    /// Density value at a scalar point.  May return +∞ at an integrable
    /// singularity.  Panics for the regression variant (pair-valued domain).
    pub fn eval_scalar(&self, x: f64) -> f64 {
        match self {
            DensitySpec::UniformInterval { lo, hi } => {
                if x >= *lo && x <= *hi {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
            DensitySpec::Gaussian { mean, sd } => {
                let z = (x - mean) / sd;
                (-0.5 * z * z).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt())
            }
            DensitySpec::Exponential { rate, shift } => {
                if x >= *shift {
                    rate * (-rate * (x - shift)).exp()
                } else {
                    0.0
                }
            }
            DensitySpec::TruncatedExponential { rate, cutoff } => {
                if (0.0..=*cutoff).contains(&x) {
                    rate * (-rate * x).exp() / (-(-rate * cutoff).exp_m1())
                } else {
                    0.0
                }
            }
            DensitySpec::HeavyTailP { shift } => {
                let t = (x - shift).abs();
                if t == 0.0 {
                    f64::INFINITY
                } else if t <= 1.0 {
                    1.0 / (6.0 * t.sqrt())
                } else {
                    1.0 / (6.0 * t * t)
                }
            }
            DensitySpec::PiecewiseConstant { breakpoints, levels } => {
                let k = breakpoints.len();
                if x < breakpoints[0] || x > breakpoints[k - 1] {
                    0.0
                } else {
                    // half-open cells [bⱼ, bⱼ₊₁), last cell closed
                    let j = breakpoints.partition_point(|b| *b <= x).min(k - 1);
                    levels[j - 1]
                }
            }
            DensitySpec::Mixture { weights, components } => weights
                .iter()
                .zip(components)
                .filter(|(w, _)| **w > 0.0)
                .map(|(w, c)| w * c.eval_scalar(x))
                .sum(),
            DensitySpec::SpikedGaussian { theta } => {
                let mut v = (theta * x - 0.5 * theta * theta).exp();
                if *theta > 0.0 && x == *theta {
                    v *= (0.5 * theta * theta * (x * x).exp()).exp();
                }
                v
            }
            DensitySpec::RegressionConditional { .. } => {
                panic!("regression density needs a feature/response pair")
            }
        }
    }

    /// Fill `out` with the density values at every observation of `data`.
    pub fn values_into(&self, data: &Dataset, out: &mut Vec<f64>) -> Result<()> {
        out.clear();
        match (self, data) {
            (DensitySpec::RegressionConditional { coefficients, error }, Dataset::Pairs { features, responses }) => {
                out.reserve(responses.len());
                for (phi, &y) in features.iter().zip(responses) {
                    if phi.len() != coefficients.len() {
                        return Err(CoreError::DimensionMismatch {
                            expected: coefficients.len(),
                            got: phi.len(),
                        });
                    }
                    let fitted: f64 = coefficients.iter().zip(phi).map(|(c, v)| c * v).sum();
                    out.push(error.eval_scalar(y - fitted));
                }
                Ok(())
            }
            (DensitySpec::RegressionConditional { .. }, Dataset::Scalars(_)) => {
                Err(CoreError::Unsupported("regression density needs feature/response pairs"))
            }
            (_, Dataset::Scalars(xs)) => {
                out.reserve(xs.len());
                for &x in xs {
                    out.push(self.eval_scalar(x));
                }
                Ok(())
            }
            (_, Dataset::Pairs { .. }) => {
                Err(CoreError::Unsupported("scalar density cannot score feature/response pairs"))
            }
        }
    }

    /// Cumulative distribution function.  Unsupported for the spiked and
    /// regression variants.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(match self {
            DensitySpec::UniformInterval { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
            DensitySpec::Gaussian { mean, sd } => {
                0.5 * libm::erfc(-(x - mean) / (sd * std::f64::consts::SQRT_2))
            }
            DensitySpec::Exponential { rate, shift } => {
                if x <= *shift {
                    0.0
                } else {
                    -(-rate * (x - shift)).exp_m1()
                }
            }
            DensitySpec::TruncatedExponential { rate, cutoff } => {
                if x <= 0.0 {
                    0.0
                } else if x >= *cutoff {
                    1.0
                } else {
                    (-rate * x).exp_m1() / (-rate * cutoff).exp_m1()
                }
            }
            DensitySpec::HeavyTailP { shift } => {
                let t = x - shift;
                if t >= 0.0 {
                    0.5 + heavy_tail_half_mass(t)
                } else {
                    0.5 - heavy_tail_half_mass(-t)
                }
            }
            DensitySpec::PiecewiseConstant { breakpoints, levels } => {
                let mut acc = 0.0;
                for (l, w) in levels.iter().zip(breakpoints.windows(2)) {
                    if x <= w[0] {
                        break;
                    }
                    acc += l * (x.min(w[1]) - w[0]);
                }
                acc.clamp(0.0, 1.0)
            }
            DensitySpec::Mixture { weights, components } => {
                let mut acc = 0.0;
                for (w, c) in weights.iter().zip(components) {
                    if *w > 0.0 {
                        acc += w * c.cdf(x)?;
                    }
                }
                acc.clamp(0.0, 1.0)
            }
            DensitySpec::SpikedGaussian { .. } | DensitySpec::RegressionConditional { .. } => {
                return Err(CoreError::Unsupported("cdf undefined for this variant"))
            }
        })
    }

    /// Mass strictly left of the window start / strictly right of the window
    /// end; used by the quadrature tail accounting.
    pub fn mass_below(&self, x: f64) -> Result<f64> {
        self.cdf(x)
    }

    pub fn mass_above(&self, x: f64) -> Result<f64> {
        Ok(1.0 - self.cdf(x)?)
    }

    /// Inverse CDF for the families sampled by inversion.  Gaussian and
    /// mixture draws go through dedicated samplers instead.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0 < u && u < 1.0) {
            return Err(CoreError::InvalidArgument(format!("quantile level must be in (0,1), got {u}")));
        }
        Ok(match self {
            DensitySpec::UniformInterval { lo, hi } => lo + u * (hi - lo),
            DensitySpec::Exponential { rate, shift } => shift - (1.0 - u).ln() / rate,
            DensitySpec::TruncatedExponential { rate, cutoff } => {
                -(u * (-rate * cutoff).exp_m1()).ln_1p() / rate
            }
            DensitySpec::HeavyTailP { shift } => shift + heavy_tail_quantile_impl(u),
            DensitySpec::PiecewiseConstant { breakpoints, levels } => {
                let mut acc = 0.0;
                for (l, w) in levels.iter().zip(breakpoints.windows(2)) {
                    let cell = l * (w[1] - w[0]);
                    if acc + cell >= u && *l > 0.0 {
                        return Ok(w[0] + (u - acc) / l);
                    }
                    acc += cell;
                }
                breakpoints[breakpoints.len() - 1]
            }
            _ => return Err(CoreError::Unsupported("quantile undefined for this variant")),
        })
    }

    /// The same density translated by `delta` (location shift).
    pub fn shifted(&self, delta: f64) -> Result<Self> {
        Ok(match self {
            DensitySpec::UniformInterval { lo, hi } => DensitySpec::UniformInterval { lo: lo + delta, hi: hi + delta },
            DensitySpec::Gaussian { mean, sd } => DensitySpec::Gaussian { mean: mean + delta, sd: *sd },
            DensitySpec::Exponential { rate, shift } => DensitySpec::Exponential { rate: *rate, shift: shift + delta },
            DensitySpec::HeavyTailP { shift } => DensitySpec::HeavyTailP { shift: shift + delta },
            DensitySpec::PiecewiseConstant { breakpoints, levels } => DensitySpec::PiecewiseConstant {
                breakpoints: breakpoints.iter().map(|b| b + delta).collect(),
                levels: levels.clone(),
            },
            DensitySpec::Mixture { weights, components } => DensitySpec::Mixture {
                weights: weights.clone(),
                components: components.iter().map(|c| c.shifted(delta)).collect::<Result<_>>()?,
            },
            _ => return Err(CoreError::Unsupported("this variant has no location shift")),
        })
    }

    /// Whether the Hellinger/quadrature machinery applies (plain scalar
    /// Lebesgue densities only).
    pub fn supports_integration(&self) -> bool {
        !matches!(
            self,
            DensitySpec::SpikedGaussian { .. } | DensitySpec::RegressionConditional { .. }
        )
    }

    /// Discontinuities and kinks, used as quadrature panel boundaries.
    pub(crate) fn critical_points(&self, out: &mut Vec<f64>) {
        match self {
            DensitySpec::UniformInterval { lo, hi } => out.extend([*lo, *hi]),
            DensitySpec::Gaussian { .. } => {}
            DensitySpec::Exponential { shift, .. } => out.push(*shift),
            DensitySpec::TruncatedExponential { cutoff, .. } => out.extend([0.0, *cutoff]),
            DensitySpec::HeavyTailP { shift } => out.extend([shift - 1.0, *shift, shift + 1.0]),
            DensitySpec::PiecewiseConstant { breakpoints, .. } => out.extend_from_slice(breakpoints),
            DensitySpec::Mixture { components, .. } => {
                for c in components {
                    c.critical_points(out);
                }
            }
            DensitySpec::SpikedGaussian { .. } | DensitySpec::RegressionConditional { .. } => {}
        }
    }

    /// Points where the density diverges (integrable singularities).
    pub(crate) fn singular_points(&self, out: &mut Vec<f64>) {
        match self {
            DensitySpec::HeavyTailP { shift } => out.push(*shift),
            DensitySpec::Mixture { components, .. } => {
                for c in components {
                    c.singular_points(out);
                }
            }
            _ => {}
        }
    }
}

/// Mass of the heavy-tail density on (0, t] for t ≥ 0 (its symmetric half).
fn heavy_tail_half_mass(t: f64) -> f64 {
    debug_assert!(t >= 0.0);
    let near = t.min(1.0).sqrt() / 3.0;
    let far = if t > 1.0 { (1.0 - 1.0 / t) / 6.0 } else { 0.0 };
    near + far
}

/// Inverse CDF of the centered heavy-tail density on the open unit interval.
pub(crate) fn heavy_tail_quantile_impl(u: f64) -> f64 {
    debug_assert!(0.0 < u && u < 1.0);
    if u < 0.5 {
        return -heavy_tail_quantile_impl(1.0 - u);
    }
    if u <= 5.0 / 6.0 {
        let r = 3.0 * (u - 0.5);
        r * r
    } else {
        1.0 / (6.0 * (1.0 - u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_validate() {
        assert!(DensitySpec::uniform(1.0, 1.0).is_err());
        assert!(DensitySpec::gaussian(0.0, 0.0).is_err());
        assert!(DensitySpec::exponential(-1.0, 0.0).is_err());
        assert!(DensitySpec::truncated_exponential(1.0, 0.0).is_err());
        assert!(DensitySpec::piecewise_constant(vec![0.0, 1.0], vec![0.5]).is_err());
        assert!(DensitySpec::piecewise_constant(vec![0.0, 1.0], vec![1.0]).is_ok());
        assert!(DensitySpec::mixture(vec![0.5, 0.4], vec![
            DensitySpec::uniform(0.0, 1.0).unwrap(),
            DensitySpec::uniform(2.0, 3.0).unwrap()
        ])
        .is_err());
    }

    #[test]
    fn uniform_eval_and_boundaries() {
        let u = DensitySpec::uniform(0.0, 2.0).unwrap();
        assert_eq!(u.eval_scalar(-0.1), 0.0);
        assert_eq!(u.eval_scalar(0.0), 0.5);
        assert_eq!(u.eval_scalar(2.0), 0.5);
        assert_eq!(u.eval_scalar(2.1), 0.0);
    }

    #[test]
    fn heavy_tail_shape() {
        let p = DensitySpec::heavy_tail(0.0).unwrap();
        assert_eq!(p.eval_scalar(0.0), f64::INFINITY);
        assert!((p.eval_scalar(0.25) - 1.0 / 3.0).abs() < 1e-15);
        assert!((p.eval_scalar(2.0) - 1.0 / 24.0).abs() < 1e-15);
        assert!((p.eval_scalar(-2.0) - 1.0 / 24.0).abs() < 1e-15);
        // F(1) = 5/6, F(2) = 11/12, symmetric around 0
        assert!((p.cdf(1.0).unwrap() - 5.0 / 6.0).abs() < 1e-12);
        assert!((p.cdf(2.0).unwrap() - 11.0 / 12.0).abs() < 1e-12);
        assert!((p.cdf(0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((p.cdf(-1.0).unwrap() - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn heavy_tail_quantile_pinned_points() {
        assert!((heavy_tail_quantile_impl(11.0 / 12.0) - 2.0).abs() < 1e-12);
        assert!((heavy_tail_quantile_impl(5.0 / 6.0) - 1.0).abs() < 1e-12);
        assert!((heavy_tail_quantile_impl(1.0 / 12.0) + 2.0).abs() < 1e-12);
        assert_eq!(heavy_tail_quantile_impl(0.5), 0.0);
    }

    #[test]
    fn quantile_cdf_roundtrip() {
        let specs = [
            DensitySpec::uniform(-1.0, 3.0).unwrap(),
            DensitySpec::exponential(2.0, 0.5).unwrap(),
            DensitySpec::truncated_exponential(1.5, 2.0).unwrap(),
            DensitySpec::heavy_tail(0.3).unwrap(),
            DensitySpec::piecewise_constant(vec![0.0, 1.0, 3.0], vec![0.8, 0.1]).unwrap(),
        ];
        for spec in &specs {
            for i in 1..200 {
                let u = i as f64 / 200.0;
                let x = spec.quantile(u).unwrap();
                let back = spec.cdf(x).unwrap();
                assert!((back - u).abs() < 1e-9, "{spec:?} at {u}: {back}");
            }
        }
    }

    #[test]
    fn gaussian_cdf_reference_values() {
        let g = DensitySpec::gaussian(0.0, 1.0).unwrap();
        assert!((g.cdf(0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((g.cdf(1.959963984540054).unwrap() - 0.975).abs() < 1e-12);
        assert!((g.cdf(-1.0).unwrap() - 0.15865525393145707).abs() < 1e-12);
    }

    #[test]
    fn truncated_exponential_is_conditioned_exponential() {
        let t = DensitySpec::truncated_exponential(1.0, 3.0).unwrap();
        let e = DensitySpec::exponential(1.0, 0.0).unwrap();
        let scale = 1.0 / (1.0 - (-3.0_f64).exp());
        for x in [0.0, 0.5, 1.7, 3.0] {
            assert!((t.eval_scalar(x) - scale * e.eval_scalar(x)).abs() < 1e-12);
        }
        assert_eq!(t.eval_scalar(3.1), 0.0);
    }

    #[test]
    fn spiked_gaussian_matches_plain_tilt_off_spike() {
        let s = DensitySpec::spiked_gaussian(1.5).unwrap();
        assert!((s.eval_scalar(2.0) - (1.5 * 2.0 - 1.125_f64).exp()).abs() < 1e-12);
        // at the spike the exotic factor kicks in
        let at = s.eval_scalar(1.5);
        let plain = (1.5 * 1.5 - 1.125_f64).exp();
        assert!(at > plain * 1e3);
        // negative parameter: no spike even at x = θ
        let neg = DensitySpec::spiked_gaussian(-1.5).unwrap();
        assert!((neg.eval_scalar(-1.5) - (-1.5 * -1.5 - 1.125_f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn regression_density_scores_residuals() {
        let err = DensitySpec::uniform(-0.5, 0.5).unwrap();
        let r = DensitySpec::regression(vec![1.0, 2.0], err).unwrap();
        let data = Dataset::Pairs {
            features: vec![vec![1.0, 0.5], vec![1.0, -1.0]],
            responses: vec![2.3, -0.4],
        };
        let mut out = Vec::new();
        r.values_into(&data, &mut out).unwrap();
        // fitted: 2.0 and -1.0; residuals 0.3 and 0.6 → inside / outside the band
        assert_eq!(out, vec![1.0, 0.0]);
    }

    #[test]
    fn shifted_translates_support() {
        let u = DensitySpec::uniform(0.0, 1.0).unwrap().shifted(2.5).unwrap();
        assert_eq!(u.eval_scalar(2.4), 0.0);
        assert_eq!(u.eval_scalar(2.5), 1.0);
        assert_eq!(u.eval_scalar(3.5), 1.0);
        let h = DensitySpec::heavy_tail(0.0).unwrap().shifted(-1.0).unwrap();
        assert_eq!(h.eval_scalar(-1.0), f64::INFINITY);
    }
}
