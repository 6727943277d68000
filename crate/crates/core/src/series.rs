//! Series container, season indexing and the vector-of-seasons stacking.
//!
//! Time `t = 1, 2, ...` maps to year/season pairs `[T, s]` through
//! `t = (T - 1) d + s` with seasons `1..=d`. The vector-of-seasons (VS)
//! form stacks one year into a vector in *descending* season order, so the
//! first element of a year vector is season `d`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Season of time index `t` for period `d`: `d` when `t mod d == 0`, else
/// `t mod d`.
pub fn season_of(t: usize, period: usize) -> usize {
    assert!(t >= 1, "time index must be positive");
    assert!(period >= 1, "period must be positive");
    let r = t % period;
    if r == 0 {
        period
    } else {
        r
    }
}

/// Year/season address of a time index, `[T, s] == (T - 1) d + s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeasonIndex {
    pub year: usize,
    pub season: usize,
}

impl SeasonIndex {
    pub fn new(year: usize, season: usize, period: usize) -> Result<Self> {
        if season < 1 || season > period {
            return Err(Error::SeasonOutOfRange { season, period });
        }
        if year < 1 {
            return Err(Error::InvalidParameter("year must be positive".into()));
        }
        Ok(Self { year, season })
    }

    pub fn from_time(t: usize, period: usize) -> Self {
        let season = season_of(t, period);
        Self { year: (t - season) / period + 1, season }
    }

    pub fn to_time(self, period: usize) -> usize {
        (self.year - 1) * period + self.season
    }
}

/// Univariate observations with period `d`.
///
/// `origin` is the time index of the first observation (1 unless the series
/// is the output of a filter, which consumes leading observations). An empty
/// series is allowed so that filters and VS round trips compose; operations
/// that need data report `SeriesTooShort`/`InsufficientData`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSeries<T: Scalar> {
    values: Vec<T>,
    period: usize,
    origin: usize,
}

impl<T: Scalar> PeriodicSeries<T> {
    /// Series starting at time 1 (year 1, season 1).
    pub fn new(values: Vec<T>, period: usize) -> Result<Self> {
        Self::with_origin(values, period, 1)
    }

    pub fn with_origin(values: Vec<T>, period: usize, origin: usize) -> Result<Self> {
        if period < 1 {
            return Err(Error::InvalidParameter("period must be >= 1".into()));
        }
        if origin < 1 {
            return Err(Error::InvalidParameter("origin must be >= 1".into()));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index });
        }
        Ok(Self { values, period, origin })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Season of the element at 0-based position `idx`.
    pub fn season_at(&self, idx: usize) -> usize {
        season_of(self.origin + idx, self.period)
    }

    pub fn index_at(&self, idx: usize) -> SeasonIndex {
        SeasonIndex::from_time(self.origin + idx, self.period)
    }

    pub fn value(&self, idx: usize) -> T {
        self.values[idx]
    }

    /// Number of whole years covered, counting from the first observation.
    pub fn year_count(&self) -> usize {
        self.values.len() / self.period
    }

    pub fn mean(&self) -> T {
        if self.values.is_empty() {
            return T::zero();
        }
        let sum = self.values.iter().fold(T::zero(), |acc, &v| acc + v);
        sum / T::from_usize(self.values.len()).unwrap()
    }

    /// Subtract the overall mean; returns the centred series and the mean.
    pub fn centered(&self) -> (Self, T) {
        let mu = self.mean();
        let values = self.values.iter().map(|&v| v - mu).collect();
        (
            Self { values, period: self.period, origin: self.origin },
            mu,
        )
    }

    /// Observations at season `s`, in chronological order.
    pub fn season_values(&self, season: usize) -> Vec<T> {
        (0..self.len())
            .filter(|&i| self.season_at(i) == season)
            .map(|i| self.values[i])
            .collect()
    }

    /// Stack into year vectors in descending season order,
    /// `(X_[T,d], ..., X_[T,1])'`.
    ///
    /// Requires the series to start at season 1 and to contain whole years.
    pub fn to_vs(&self) -> Result<Vec<DVector<T>>> {
        let d = self.period;
        if self.season_at(0) != 1 && !self.values.is_empty() {
            return Err(Error::IncompleteYear { n: self.values.len(), period: d });
        }
        if !self.values.len().is_multiple_of(d) {
            return Err(Error::IncompleteYear { n: self.values.len(), period: d });
        }
        Ok(self
            .values
            .chunks(d)
            .map(|year| DVector::from_iterator(d, year.iter().rev().copied()))
            .collect())
    }

    /// Inverse of [`Self::to_vs`]: rebuild the chronological series from year
    /// vectors in descending season order.
    pub fn from_vs(vectors: &[DVector<T>], period: usize) -> Result<Self> {
        if period < 1 {
            return Err(Error::InvalidParameter("period must be >= 1".into()));
        }
        let mut values = Vec::with_capacity(vectors.len() * period);
        for v in vectors {
            if v.len() != period {
                return Err(Error::DimensionMismatch { expected: period, got: v.len() });
            }
            values.extend(v.iter().rev().copied());
        }
        Self::new(values, period)
    }
}

/// Seasonally varying autoregressive coefficients, `phi[i][s]` for lag
/// `i = 1..=p` and season `s = 1..=d`, stored as a `d x p` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicCoefficients<T: Scalar> {
    phi: DMatrix<T>,
}

impl<T: Scalar> PeriodicCoefficients<T> {
    /// `phi` has one row per season and one column per lag.
    pub fn new(phi: DMatrix<T>) -> Result<Self> {
        if phi.nrows() < 1 {
            return Err(Error::InvalidParameter("need at least one season".into()));
        }
        if let Some(index) = phi.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index });
        }
        Ok(Self { phi })
    }

    /// Rows are seasons `1..=d`; each row lists lag coefficients `1..=p`.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::InvalidParameter("need at least one season".into()));
        }
        let p = rows[0].len();
        if rows.iter().any(|r| r.len() != p) {
            return Err(Error::DimensionMismatch { expected: p, got: 0 });
        }
        let phi = DMatrix::from_fn(d, p, |s, i| rows[s][i]);
        Self::new(phi)
    }

    pub fn zero(period: usize, order: usize) -> Self {
        Self { phi: DMatrix::zeros(period, order) }
    }

    pub fn period(&self) -> usize {
        self.phi.nrows()
    }

    pub fn order(&self) -> usize {
        self.phi.ncols()
    }

    /// Coefficient of lag `i` at season `s` (both 1-based); zero beyond the
    /// stored order, matching the zero padding of the companion form.
    pub fn phi(&self, lag: usize, season: usize) -> T {
        debug_assert!(lag >= 1);
        let s = (season - 1) % self.period();
        if lag <= self.order() {
            self.phi[(s, lag - 1)]
        } else {
            T::zero()
        }
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.phi
    }
}

/// Per-season innovation variances.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec<T: Scalar> {
    sigma2: Vec<T>,
}

impl<T: Scalar> NoiseSpec<T> {
    /// Variances per season. Zero variance is accepted (noise-free runs);
    /// negative or non-finite values are rejected.
    pub fn new(sigma2: Vec<T>) -> Result<Self> {
        if sigma2.is_empty() {
            return Err(Error::InvalidParameter("need at least one season".into()));
        }
        for (index, &v) in sigma2.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue { index });
            }
            if v < T::zero() {
                return Err(Error::InvalidParameter(format!(
                    "variance at season {} is negative",
                    index + 1
                )));
            }
        }
        Ok(Self { sigma2 })
    }

    pub fn constant(period: usize, sigma2: T) -> Result<Self> {
        Self::new(vec![sigma2; period])
    }

    pub fn period(&self) -> usize {
        self.sigma2.len()
    }

    /// Variance at season `s` (1-based).
    pub fn sigma2(&self, season: usize) -> T {
        self.sigma2[(season - 1) % self.sigma2.len()]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.sigma2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn season_of_examples() {
        assert_eq!(season_of(5, 4), 1);
        assert_eq!(season_of(8, 4), 4);
        assert_eq!(season_of(1, 1), 1);
    }

    #[test]
    fn season_index_round_trip() {
        for d in 1..=5 {
            for t in 1..=4 * d {
                let idx = SeasonIndex::from_time(t, d);
                assert_eq!(idx.to_time(d), t);
                assert_eq!(idx.season, season_of(t, d));
            }
        }
    }

    #[test]
    fn to_vs_descending_order() {
        let x = PeriodicSeries::new(vec![1.0, 2.0, 3.0, 4.0], 2).unwrap();
        let vs = x.to_vs().unwrap();
        assert_eq!(vs.len(), 2);
        assert_eq!(vs[0].as_slice(), &[2.0, 1.0]);
        assert_eq!(vs[1].as_slice(), &[4.0, 3.0]);
    }

    #[test]
    fn to_vs_identity_for_period_one() {
        let x = PeriodicSeries::new(vec![5.0, 6.0], 1).unwrap();
        let vs = x.to_vs().unwrap();
        assert_eq!(vs[0].as_slice(), &[5.0]);
        assert_eq!(vs[1].as_slice(), &[6.0]);
    }

    #[test]
    fn to_vs_rejects_incomplete_years() {
        let x = PeriodicSeries::new(vec![0.0; 10], 4).unwrap();
        assert_eq!(
            x.to_vs().unwrap_err(),
            Error::IncompleteYear { n: 10, period: 4 }
        );
    }

    #[test]
    fn to_vs_rejects_offset_origin() {
        let x = PeriodicSeries::with_origin(vec![0.0; 4], 4, 2).unwrap();
        assert!(matches!(x.to_vs(), Err(Error::IncompleteYear { .. })));
    }

    #[test]
    fn from_vs_round_trip_and_single_year() {
        let x = PeriodicSeries::new(vec![1.0, 2.0, 3.0, 4.0], 2).unwrap();
        let back = PeriodicSeries::from_vs(&x.to_vs().unwrap(), 2).unwrap();
        assert_eq!(back, x);

        let one = PeriodicSeries::from_vs(&[DVector::from_vec(vec![9.0, 7.0])], 2).unwrap();
        assert_eq!(one.values(), &[7.0, 9.0]);
    }

    #[test]
    fn from_vs_empty_input_gives_empty_series() {
        let x: PeriodicSeries<f64> = PeriodicSeries::from_vs(&[], 3).unwrap();
        assert!(x.is_empty());
    }

    #[test]
    fn from_vs_rejects_wrong_dimension() {
        let v = [DVector::from_vec(vec![1.0_f64, 2.0, 3.0])];
        assert_eq!(
            PeriodicSeries::from_vs(&v, 2).unwrap_err(),
            Error::DimensionMismatch { expected: 2, got: 3 }
        );
    }

    #[test]
    fn rejects_non_finite_values() {
        assert!(matches!(
            PeriodicSeries::new(vec![1.0, f64::NAN], 2),
            Err(Error::NonFiniteValue { index: 1 })
        ));
    }

    #[test]
    fn coefficients_zero_padded_beyond_order() {
        let c = PeriodicCoefficients::from_rows(&[vec![0.5], vec![-0.2]]).unwrap();
        assert_eq!(c.phi(1, 2), -0.2);
        assert_eq!(c.phi(3, 1), 0.0);
    }

    #[test]
    fn noise_spec_rejects_negative() {
        assert!(NoiseSpec::new(vec![0.1, -0.2]).is_err());
        assert!(NoiseSpec::new(vec![0.0, 0.0]).is_ok());
    }

    #[test]
    fn centered_subtracts_mean() {
        let x = PeriodicSeries::new(vec![1.0, 3.0], 2).unwrap();
        let (c, mu) = x.centered();
        assert_eq!(mu, 2.0);
        assert_eq!(c.values(), &[-1.0, 1.0]);
    }

    #[test]
    fn f32_series_works() {
        let x: PeriodicSeries<f32> = PeriodicSeries::new(vec![1.0_f32, 2.0], 2).unwrap();
        assert_eq!(x.season_at(1), 2);
    }

    proptest! {
        #[test]
        fn vs_round_trip(values in prop::collection::vec(-1e6_f64..1e6, 1..60), d in 1_usize..6) {
            let n = (values.len() / d) * d;
            if n > 0 {
                let x = PeriodicSeries::new(values[..n].to_vec(), d).unwrap();
                let back = PeriodicSeries::from_vs(&x.to_vs().unwrap(), d).unwrap();
                prop_assert_eq!(back, x);
            }
        }

        #[test]
        fn season_of_inverts_address(year in 1_usize..200, s in 1_usize..13, d in 1_usize..13) {
            let s = (s - 1) % d + 1;
            prop_assert_eq!(season_of((year - 1) * d + s, d), s);
        }
    }
}
