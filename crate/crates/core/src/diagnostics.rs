//! Residual diagnostics, the likelihood-ratio unit-root test, information
//! criteria and forecast accuracy metrics.

use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::estimate::{fit_par, fit_piar, residuals, FittedModel};
use crate::forecast::ForecastResult;
use crate::scalar::Scalar;
use crate::series::PeriodicSeries;

/// 5% critical values of the likelihood-ratio unit-root statistic, keyed by
/// the number of unit roots (1, 2, 3). Trace-statistic quantiles for a
/// system without deterministic terms, Johansen (1995), Table 15.1.
pub const JOHANSEN_TRACE_5PCT: [f64; 3] = [4.14, 12.21, 24.08];

/// Per-season residual autocorrelations.
///
/// `rho(s, l)` correlates season-`s` observations with the observations `l`
/// steps earlier, normalized by the two season standard deviations. The
/// white-noise band is `+-1.96 / sqrt(N)` with `N` the number of years.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicACF<T: Scalar> {
    rho: DMatrix<T>,
    bound: T,
    years: usize,
}

impl<T: Scalar> PeriodicACF<T> {
    pub fn period(&self) -> usize {
        self.rho.nrows()
    }

    pub fn max_lag(&self) -> usize {
        self.rho.ncols()
    }

    /// Autocorrelation at season `s`, lag `l` (both 1-based).
    pub fn rho(&self, season: usize, lag: usize) -> T {
        self.rho[(season - 1, lag - 1)]
    }

    pub fn bound(&self) -> T {
        self.bound
    }

    pub fn years(&self) -> usize {
        self.years
    }
}

/// Sample periodic autocorrelations of a residual series up to `max_lag`.
pub fn periodic_acf<T: Scalar>(
    resid: &PeriodicSeries<T>,
    max_lag: usize,
) -> Result<PeriodicACF<T>> {
    let d = resid.period();
    let n = resid.len();
    let years = n / d;
    if max_lag < 1 {
        return Err(Error::InvalidParameter("need max_lag >= 1".into()));
    }
    if years < max_lag + 2 {
        return Err(Error::InsufficientData { min: (max_lag + 2) * d, got: n });
    }

    // per-season means and variances
    let mut mean = vec![T::zero(); d];
    let mut var = vec![T::zero(); d];
    let mut count = vec![0usize; d];
    for i in 0..n {
        let s = resid.season_at(i) - 1;
        mean[s] += resid.value(i);
        count[s] += 1;
    }
    for s in 0..d {
        if count[s] > 0 {
            mean[s] /= T::from_usize(count[s]).unwrap();
        }
    }
    for i in 0..n {
        let s = resid.season_at(i) - 1;
        let dev = resid.value(i) - mean[s];
        var[s] += dev * dev;
    }
    for s in 0..d {
        if count[s] > 0 {
            var[s] /= T::from_usize(count[s]).unwrap();
        }
        if var[s] <= T::zero() {
            return Err(Error::DegenerateVariance { season: s + 1 });
        }
    }

    let mut rho = DMatrix::zeros(d, max_lag);
    for s in 1..=d {
        for l in 1..=max_lag {
            let mut acc = T::zero();
            let mut pairs = 0usize;
            for i in l..n {
                if resid.season_at(i) != s {
                    continue;
                }
                let s_lag = resid.season_at(i - l) - 1;
                acc += (resid.value(i) - mean[s - 1]) * (resid.value(i - l) - mean[s_lag]);
                pairs += 1;
            }
            if pairs == 0 {
                continue;
            }
            // season of the lagged observation for this (s, l) pair
            let s_lag = (s + d * (l / d + 1) - l - 1) % d;
            let denom = (var[s - 1] * var[s_lag]).sqrt() * T::from_usize(pairs).unwrap();
            rho[(s - 1, l - 1)] = (acc / denom).clamp(-T::one(), T::one());
        }
    }
    let bound = T::from_f64_lossy(1.96) / T::from_usize(years).unwrap().sqrt();
    Ok(PeriodicACF { rho, bound, years })
}

/// Outcome of a single hypothesis test.
#[derive(Debug, Clone, PartialEq)]
pub struct TestReport<T: Scalar> {
    pub statistic: T,
    pub critical_value: T,
    /// Degrees of freedom when the reference distribution is chi-squared.
    pub df: Option<usize>,
    /// Where the critical value comes from.
    pub source: &'static str,
    /// Rejected at the 5% level.
    pub reject: bool,
}

/// Portmanteau statistic per season: `Q_s = N sum_l rho(s, l)^2`, compared
/// against the chi-squared 95% quantile with `L - p_fitted` degrees of
/// freedom.
pub fn mcleod_stat<T: Scalar>(acf: &PeriodicACF<T>, p_fitted: usize) -> Vec<TestReport<T>> {
    let max_lag = acf.max_lag();
    assert!(max_lag > p_fitted, "need more lags than fitted parameters");
    let df = max_lag - p_fitted;
    let crit = ChiSquared::new(df as f64)
        .expect("positive df")
        .inverse_cdf(0.95);
    let critical_value = T::from_f64_lossy(crit);
    let n_years = T::from_usize(acf.years()).unwrap();
    (1..=acf.period())
        .map(|s| {
            let q = (1..=max_lag).fold(T::zero(), |acc, l| {
                let r = acf.rho(s, l);
                acc + r * r
            }) * n_years;
            TestReport {
                statistic: q,
                critical_value,
                df: Some(df),
                source: "chi-squared 95% quantile",
                reject: q > critical_value,
            }
        })
        .collect()
}

/// Residual cross-product matrix of VS-stacked residuals over the years
/// where all seasons are observed.
fn vs_residual_crossproduct<T: Scalar>(resid: &PeriodicSeries<T>) -> Result<(DMatrix<T>, usize)> {
    let d = resid.period();
    let n = resid.len();
    // first index aligned to a season-1 boundary
    let lead = (0..n)
        .find(|&i| resid.season_at(i) == 1)
        .ok_or_else(|| Error::AlignmentError("no complete year in residuals".into()))?;
    let years = (n - lead) / d;
    if years == 0 {
        return Err(Error::AlignmentError("no complete year in residuals".into()));
    }
    let mut s = DMatrix::zeros(d, d);
    for t in 0..years {
        let base = lead + t * d;
        let v = DVector::from_fn(d, |j, _| resid.value(base + d - 1 - j));
        s += &v * v.transpose();
    }
    Ok((s, years))
}

/// Likelihood-ratio test of an integration hypothesis against an
/// unrestricted PAR(p): `Q_LR = N log(|S^{-1} S_0|)` from the VS residual
/// cross-product matrices of the restricted (`S_0`) and unrestricted (`S`)
/// fits, compared to the tabulated 5% critical value for `m1` unit roots.
pub fn lr_unit_root_test<T: Scalar>(
    x: &PeriodicSeries<T>,
    p: usize,
    m1: usize,
    blocks: &[usize],
) -> Result<TestReport<T>> {
    if m1 < 1 || m1 > JOHANSEN_TRACE_5PCT.len() {
        return Err(Error::InvalidParameter(format!(
            "critical value tabulated for 1..=3 unit roots, got {m1}"
        )));
    }
    let alternative = fit_par(x, p).map_err(|e| Error::FitFailed(format!("alternative: {e}")))?;
    let null = fit_piar(x, p, m1, blocks).map_err(|e| Error::FitFailed(format!("null: {e}")))?;
    let resid_alt = residuals(&alternative, x)?;
    let resid_null = residuals(&null, x)?;
    lr_statistic_from_residuals(&resid_null, &resid_alt, m1)
}

/// The statistic itself, from the two residual series. Exposed so callers
/// can reuse existing fits.
pub fn lr_statistic_from_residuals<T: Scalar>(
    resid_null: &PeriodicSeries<T>,
    resid_alt: &PeriodicSeries<T>,
    m1: usize,
) -> Result<TestReport<T>> {
    let (s0, years0) = vs_residual_crossproduct(resid_null)?;
    let (s, years) = vs_residual_crossproduct(resid_alt)?;
    if years0 != years {
        return Err(Error::AlignmentError(format!(
            "residual spans differ: {years0} vs {years} years"
        )));
    }
    let det0 = s0.lu().determinant();
    let det = s.lu().determinant();
    if det <= T::zero() || det0 <= T::zero() {
        return Err(Error::DegenerateVariance { season: 0 });
    }
    let statistic = T::from_usize(years).unwrap() * (det0.ln() - det.ln());
    let critical_value = T::from_f64_lossy(JOHANSEN_TRACE_5PCT[m1 - 1]);
    Ok(TestReport {
        statistic,
        critical_value,
        df: None,
        source: "Johansen (1995) Table 15.1, 5%",
        reject: statistic > critical_value,
    })
}

/// Information criteria and cumulative forecast accuracy.
///
/// `mape[h]`/`rmse[h]` aggregate the first `h + 1` forecast observations
/// against the holdout, in the holdout's scale; MAPE is in percent.
#[derive(Debug, Clone, PartialEq)]
pub struct FitMetrics<T: Scalar> {
    pub aic: T,
    pub bic: T,
    pub mape: Vec<T>,
    pub rmse: Vec<T>,
}

pub fn fit_metrics<T: Scalar>(
    model: &FittedModel<T>,
    holdout: &PeriodicSeries<T>,
    forecasts: &ForecastResult<T>,
) -> Result<FitMetrics<T>> {
    if holdout.period() != model.period {
        return Err(Error::PeriodMismatch { left: model.period, right: holdout.period() });
    }
    let flat: Vec<T> = forecasts.chronological().iter().map(|&(p, _, _)| p).collect();
    if holdout.is_empty() || holdout.len() > flat.len() {
        return Err(Error::AlignmentError(format!(
            "holdout of {} observations does not fit the {}-step forecast",
            holdout.len(),
            flat.len()
        )));
    }
    let k = T::from_usize(model.free_parameters()).unwrap();
    let two = T::from_f64_lossy(2.0);
    let n = T::from_usize(model.n_used).unwrap();
    let aic = -two * model.loglik + two * k;
    let bic = -two * model.loglik + k * n.ln();

    let mut mape = Vec::with_capacity(holdout.len());
    let mut rmse = Vec::with_capacity(holdout.len());
    let mut abs_pct = T::zero();
    let mut sq = T::zero();
    let hundred = T::from_f64_lossy(100.0);
    for (h, &predicted) in flat.iter().take(holdout.len()).enumerate() {
        let actual = holdout.value(h);
        let err = predicted - actual;
        if actual == T::zero() {
            return Err(Error::AlignmentError(
                "holdout contains zeros; MAPE undefined".into(),
            ));
        }
        abs_pct += (err / actual).abs() * hundred;
        sq += err * err;
        let count = T::from_usize(h + 1).unwrap();
        mape.push(abs_pct / count);
        rmse.push((sq / count).sqrt());
    }
    Ok(FitMetrics { aic, bic, mape, rmse })
}

/// Standardized-residual summary: skewness, excess kurtosis and
/// quantile-quantile pairs against the standard normal.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalitySummary<T: Scalar> {
    pub skewness: T,
    pub excess_kurtosis: T,
    /// Sorted (theoretical, sample) quantile pairs.
    pub qq: Vec<(T, T)>,
}

pub fn normality_summary<T: Scalar>(
    resid: &PeriodicSeries<T>,
    sigma2: &crate::series::NoiseSpec<T>,
) -> Result<NormalitySummary<T>> {
    use statrs::distribution::Normal;
    let n = resid.len();
    if n < 3 {
        return Err(Error::InsufficientData { min: 3, got: n });
    }
    let mut std: Vec<T> = (0..n)
        .map(|i| {
            let s = resid.season_at(i);
            let sd = sigma2.sigma2(s).sqrt();
            if sd > T::zero() {
                resid.value(i) / sd
            } else {
                T::zero()
            }
        })
        .collect();
    let nt = T::from_usize(n).unwrap();
    let mean = std.iter().fold(T::zero(), |a, &b| a + b) / nt;
    let m2 = std.iter().fold(T::zero(), |a, &b| a + (b - mean) * (b - mean)) / nt;
    if m2 <= T::zero() {
        return Err(Error::DegenerateVariance { season: 0 });
    }
    let m3 = std
        .iter()
        .fold(T::zero(), |a, &b| a + (b - mean) * (b - mean) * (b - mean))
        / nt;
    let m4 = std.iter().fold(T::zero(), |a, &b| {
        let dv = b - mean;
        a + dv * dv * dv * dv
    }) / nt;
    let skew = m3 / m2.powf(T::from_f64_lossy(1.5));
    let kurt = m4 / (m2 * m2) - T::from_f64_lossy(3.0);

    std.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let qq = std
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let p = (i as f64 + 0.5) / n as f64;
            (T::from_f64_lossy(normal.inverse_cdf(p)), v)
        })
        .collect();
    Ok(NormalitySummary { skewness: skew, excess_kurtosis: kurt, qq })
}
