//! Periodic autoregressive (PAR) and periodically integrated autoregressive
//! (PIAR) time series modelling through the eigen structure of
//! multi-companion matrices.
//!
//! The year-transition matrix of a periodic autoregression is a product of
//! companion matrices whose eigenvectors are pinned down by their leading
//! `d` elements (seed-vectors). Unit eigenvalues and their Jordan block
//! layout determine the periodic integration order; the per-season
//! integration filter that removes all unit roots is obtained from the
//! seed-vectors by solving small linear systems. This crate provides:
//!
//! - series containers with season indexing and vector-of-seasons stacking;
//! - companion/multi-companion construction and eigen-based synthesis;
//! - periodic filter algebra and all seed-based filter parametrizations;
//! - simulation of PAR and PIAR processes;
//! - estimation (per-season least squares; seed-space nonlinear least
//!   squares with a two-step split of integration and stationary parts);
//! - year-ahead forecasting with error covariances in both the
//!   vector-of-seasons and multi-companion representations;
//! - residual diagnostics, a likelihood-ratio unit-root test and accuracy
//!   metrics.
//!
//! All numerics are generic over the scalar type ([`Scalar`], implemented
//! for `f32` and `f64`); concrete aliases are exported at the crate root.

pub mod diagnostics;
pub mod error;
pub mod estimate;
pub mod forecast;
pub mod generate;
pub mod mcmatrix;
pub mod models;
pub mod pifilter;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Linear-algebra types used in public signatures.
pub use nalgebra;

pub use diagnostics::{
    fit_metrics, lr_unit_root_test, mcleod_stat, normality_summary, periodic_acf, FitMetrics,
    NormalitySummary, PeriodicACF, TestReport, JOHANSEN_TRACE_5PCT,
};
pub use estimate::{fit_par, fit_piar, fit_piar_with, residuals, FitOptions, FittedModel};
pub use forecast::{forecast_mc, forecast_mc_level, forecast_vs, forecast_vs_level, ForecastResult};
pub use generate::{simulate_par, simulate_piar, substream_rng, SimConfig, SimModel};
pub use mcmatrix::{
    companion_from_coeffs, extend_seed, fd_from_eigen, mc_from_coeffs, omega_matrix,
    unit_root_count, CompanionMatrix, EigenSpec, MultiCompanion, OmegaMatrix, DEFAULT_UNIT_TOL,
};
pub use models::Table2Model;
pub use pifilter::{
    alpha_from_seed, apply_filter, cascade, compose, theta_from_seeds, theta_general,
    theta_two_chained, theta_two_simple, CascadeOrder, PeriodicFilter, StackedSeeds,
};
pub use series::{season_of, NoiseSpec, PeriodicCoefficients, PeriodicSeries, SeasonIndex};

/// `f64` aliases for the main model types.
pub type Series64 = series::PeriodicSeries<f64>;
pub type Coefficients64 = series::PeriodicCoefficients<f64>;
pub type Noise64 = series::NoiseSpec<f64>;
pub type Filter64 = pifilter::PeriodicFilter<f64>;
pub type EigenSpec64 = mcmatrix::EigenSpec<f64>;
pub type MultiCompanion64 = mcmatrix::MultiCompanion<f64>;
pub type FittedModel64 = estimate::FittedModel<f64>;
pub type ForecastResult64 = forecast::ForecastResult<f64>;

/// `f32` aliases for the container types.
pub type Series32 = series::PeriodicSeries<f32>;
pub type Coefficients32 = series::PeriodicCoefficients<f32>;
pub type Noise32 = series::NoiseSpec<f32>;
pub type Filter32 = pifilter::PeriodicFilter<f32>;
