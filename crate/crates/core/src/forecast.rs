//! Year-ahead forecasting with error covariances, in the vector-of-seasons
//! and the multi-companion state representations.
//!
//! Both routes produce the same point forecasts for `p <= d`; the
//! multi-companion route also handles `p > d` through the larger state
//! vector. Interval bounds use Gaussian quantiles on the per-element error
//! variances.

use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::estimate::FittedModel;
use crate::mcmatrix::{mc_from_coeffs, omega_matrix};
use crate::scalar::Scalar;
use crate::series::{PeriodicCoefficients, PeriodicSeries};

/// Point forecasts with per-horizon error covariances and interval bounds.
///
/// Rows of `point`, `lower` and `upper` are years `N+1 ..= N+H` in the
/// descending-season VS order (first column is season `d`). `err_cov[h]` is
/// the forecast error covariance after `h + 1` years (`d x d` for the VS
/// route, `m x m` for the multi-companion route, leading block ordered the
/// same way).
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastResult<T: Scalar> {
    pub point: DMatrix<T>,
    pub err_cov: Vec<DMatrix<T>>,
    pub lower: DMatrix<T>,
    pub upper: DMatrix<T>,
    pub level: T,
}

impl<T: Scalar> ForecastResult<T> {
    pub fn horizon(&self) -> usize {
        self.point.nrows()
    }

    /// Forecasts in chronological order (season 1 first within each year).
    pub fn chronological(&self) -> Vec<(T, T, T)> {
        let d = self.point.ncols();
        let mut out = Vec::with_capacity(self.horizon() * d);
        for h in 0..self.horizon() {
            for j in (0..d).rev() {
                out.push((self.point[(h, j)], self.lower[(h, j)], self.upper[(h, j)]));
            }
        }
        out
    }
}

/// Build the VS matrices `Phi_0` (unit upper triangular) and `Phi_1` for
/// coefficients with `p <= d`:
/// `(Phi_0)_{jk} = -phi_{k-j, d-j+1}` above the diagonal and
/// `(Phi_i)_{jk} = phi_{k+di-j, d-j+1}`.
pub fn vs_matrices<T: Scalar>(coeffs: &PeriodicCoefficients<T>) -> (DMatrix<T>, DMatrix<T>) {
    let d = coeffs.period();
    let mut phi0 = DMatrix::identity(d, d);
    let mut phi1 = DMatrix::zeros(d, d);
    for j in 1..=d {
        for k in 1..=d {
            if k > j {
                phi0[(j - 1, k - 1)] = -coeffs.phi(k - j, d - j + 1);
            }
            phi1[(j - 1, k - 1)] = coeffs.phi(k + d - j, d - j + 1);
        }
    }
    (phi0, phi1)
}

fn gaussian_z<T: Scalar>(level: T) -> T {
    let lv = level.to_f64_lossy();
    assert!((0.0..1.0).contains(&lv), "confidence level must be in (0, 1)");
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    T::from_f64_lossy(normal.inverse_cdf(0.5 + lv / 2.0))
}

/// Final-year state in descending order: `(x_{[N,d]}, ..., x_{[N,d]-m+1})`.
/// The series must end on a complete year and carry at least `m` values.
fn trailing_state<T: Scalar>(x: &PeriodicSeries<T>, m: usize) -> Result<DVector<T>> {
    let n = x.len();
    if n == 0 || x.season_at(n - 1) != x.period() {
        return Err(Error::IncompleteYear { n, period: x.period() });
    }
    if n < m {
        return Err(Error::InsufficientHistory { min: m, got: n });
    }
    Ok(DVector::from_fn(m, |j, _| x.value(n - 1 - j)))
}

fn intervals<T: Scalar>(
    point: &DMatrix<T>,
    err_cov: &[DMatrix<T>],
    d: usize,
    level: T,
) -> (DMatrix<T>, DMatrix<T>) {
    let z = gaussian_z(level);
    let h = point.nrows();
    let mut lower = point.clone();
    let mut upper = point.clone();
    for r in 0..h {
        for c in 0..d {
            let sd = err_cov[r][(c, c)].max(T::zero()).sqrt();
            lower[(r, c)] -= z * sd;
            upper[(r, c)] += z * sd;
        }
    }
    (lower, upper)
}

/// H-year-ahead forecast in the vector-of-seasons representation:
/// point `(Phi_0^{-1} Phi_1)^h X_N`, error covariance
/// `sum_{j<h} G^j Phi_0^{-1} Sigma_eps Phi_0^{-T} (G^j)'`.
pub fn forecast_vs<T: Scalar>(
    model: &FittedModel<T>,
    x: &PeriodicSeries<T>,
    horizon: usize,
) -> Result<ForecastResult<T>> {
    forecast_vs_level(model, x, horizon, T::from_f64_lossy(0.95))
}

pub fn forecast_vs_level<T: Scalar>(
    model: &FittedModel<T>,
    x: &PeriodicSeries<T>,
    horizon: usize,
    level: T,
) -> Result<ForecastResult<T>> {
    let d = model.period;
    if x.period() != d {
        return Err(Error::PeriodMismatch { left: d, right: x.period() });
    }
    if model.order > d {
        return Err(Error::OrderTooHigh { p: model.order, period: d });
    }
    let coeffs = model.composed_coefficients();
    let (phi0, phi1) = vs_matrices(&coeffs);
    let lu = phi0.clone().lu();
    // Phi_0 is unit triangular, always invertible.
    let phi0_inv = lu.try_inverse().expect("unit triangular Phi_0");
    let g = &phi0_inv * &phi1;

    let state = trailing_state(x, d)?;
    let sigma_eps = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            model.sigma2.sigma2(d - i)
        } else {
            T::zero()
        }
    });
    let innov = &phi0_inv * sigma_eps * phi0_inv.transpose();

    let mut point = DMatrix::zeros(horizon, d);
    let mut err_cov = Vec::with_capacity(horizon);
    let mut fh = state.clone();
    let mut cov = DMatrix::zeros(d, d);
    for h in 0..horizon {
        fh = &g * fh;
        cov = &innov + &g * cov * g.transpose();
        for c in 0..d {
            point[(h, c)] = fh[c];
        }
        err_cov.push(cov.clone());
    }
    let (lower, upper) = intervals(&point, &err_cov, d, level);
    Ok(ForecastResult { point, err_cov, lower, upper, level })
}

/// H-year-ahead forecast in the multi-companion representation:
/// point `F_d^h X_N`, error covariance `sum_{j<h} F^j Sigma_u (F^j)'` with
/// `Sigma_u = Omega Sigma_eps Omega'`.
pub fn forecast_mc<T: Scalar>(
    model: &FittedModel<T>,
    x: &PeriodicSeries<T>,
    horizon: usize,
) -> Result<ForecastResult<T>> {
    forecast_mc_level(model, x, horizon, T::from_f64_lossy(0.95))
}

pub fn forecast_mc_level<T: Scalar>(
    model: &FittedModel<T>,
    x: &PeriodicSeries<T>,
    horizon: usize,
    level: T,
) -> Result<ForecastResult<T>> {
    let d = model.period;
    if x.period() != d {
        return Err(Error::PeriodMismatch { left: d, right: x.period() });
    }
    let coeffs = model.composed_coefficients();
    let m = coeffs.order().max(d);
    let f = mc_from_coeffs(&coeffs);
    let sigma_u = omega_matrix(&coeffs).sigma_u(&model.sigma2);

    let state = trailing_state(x, m)?;
    let mut point = DMatrix::zeros(horizon, d);
    let mut err_cov = Vec::with_capacity(horizon);
    let mut fh = state.clone();
    let mut cov = DMatrix::zeros(m, m);
    for h in 0..horizon {
        fh = f.matrix() * fh;
        cov = &sigma_u + f.matrix() * cov * f.matrix().transpose();
        for c in 0..d {
            point[(h, c)] = fh[c];
        }
        err_cov.push(cov.clone());
    }
    let (lower, upper) = intervals(&point, &err_cov, d, level);
    Ok(ForecastResult { point, err_cov, lower, upper, level })
}
