//! Robust density and regression estimation by bounded minimax comparison.
//!
//! The estimator selects, from a finite candidate family, the member whose
//! worst pairwise comparison score sup_{q′} Σᵢ ψ(√(q′(Xᵢ)/q(Xᵢ))) is
//! smallest, for a bounded odd-symmetric kernel ψ.  Squashing the
//! log-likelihood ratio through ψ is what buys robustness: a single wild
//! observation moves any comparison by at most ±1, while its influence on a
//! likelihood can be unbounded.  With the unbounded half-log kernel the same
//! machinery reproduces maximum likelihood exactly, which the test suite
//! uses as a bridge between the two worlds.
//!
//! Crate layout:
//!
//! * [`psi`] — comparison kernels, their axioms and moment inequalities;
//! * [`density`] — density catalog, evaluation, CDFs and quantiles;
//! * [`hellinger`] — squared Hellinger distances: discrete, closed-form and
//!   adaptive quadrature with singularity handling;
//! * [`model`] — candidate families, structure hints, dimension bounds and
//!   penalized collections;
//! * [`engine`] — the minimax selection engine with its exact fast paths
//!   and the penalized variant;
//! * [`baselines`] — maximum likelihood, decreasing-density projection,
//!   least squares and closed-form references;
//! * [`sampling`] — seeded per-replication data generation.

pub mod baselines;
pub mod density;
pub mod engine;
pub mod error;
pub mod hellinger;
pub mod model;
pub mod psi;
pub mod sampling;

pub use baselines::{
    decreasing_mle_oracle, gaussian_submodel_argmin, gaussian_submodel_estimate, grenander_estimate,
    least_squares_fit, mle_estimate, pathological_loglik, sample_median, SubmodelFit,
};
pub use density::{Dataset, DensitySpec};
pub use engine::{
    brute_force_oracle, composition_rank, density_matrix, rho_criterion, rho_estimate,
    rho_estimate_penalized, t_statistic, EngineOptions, EstimateResult,
};
pub use error::{CoreError, Result};
pub use hellinger::{
    affinity_discrete, hellinger2_analytic, hellinger2_auto, hellinger2_discrete, hellinger2_quadrature,
    iid_hellinger2, product_hellinger2, quadrature_mass, DiscreteDensity, QuadratureOpts, TailPolicy,
};
pub use model::{
    build_decreasing_family, build_histogram_family, build_location_family, build_regression_dictionary,
    build_uniform_scale_family, composition_count, enumerate_compositions, lattice_resolution,
    CandidateFamily, CoefficientGrid, DimensionBound, FamilyStructure, PenalizedCollection,
};
pub use psi::{
    check_axioms, check_moment_inequalities, log_grid, AxiomReport, InequalityReport, LogRatioBounds,
    PsiConstants, PsiKind,
};
pub use sampling::{
    draw_density, heavy_tail_quantile, ks_statistic, make_rng, sample_law, standard_normal, FeatureMap,
    TrueLaw,
};
