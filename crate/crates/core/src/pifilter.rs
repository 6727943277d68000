//! Periodic filters and the parametrization of integration filters from
//! seed-vectors.
//!
//! A periodic filter of order `q` acts as
//! `y_t = x_t - sum_i a_{i,s(t)} x_{t-i}`. Sequential application of two
//! periodic filters is *not* commutative and is not the per-season product
//! of the lag polynomials; [`compose`] implements the correct season-shifted
//! convolution.
//!
//! The `theta_*` functions turn seed-vectors of unit eigenvalues into the
//! integration filter that removes all unit roots. The order-`m1` filter at
//! season `s` solves an `m1 x m1` linear system assembled from the stacked
//! seed matrix; closed forms for one and two roots are provided alongside
//! the general solver.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::mcmatrix::{junit_from_blocks, EigenSpec};
use crate::scalar::Scalar;
use crate::series::PeriodicSeries;

/// Pick of the first eliminated root in the two simple unit roots cascade.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CascadeOrder {
    /// `alpha` from the first seed column, `beta` from the second.
    FirstThenSecond,
    /// `alpha` from the second seed column, `beta` from the first.
    SecondThenFirst,
}

/// Per-season lag filter `1 - sum_i a_{i,s} L^i`, stored as a `d x q`
/// coefficient matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicFilter<T: Scalar> {
    coeffs: DMatrix<T>,
}

impl<T: Scalar> PeriodicFilter<T> {
    pub fn new(coeffs: DMatrix<T>) -> Result<Self> {
        if coeffs.nrows() < 1 {
            return Err(Error::InvalidParameter("need at least one season".into()));
        }
        if let Some(index) = coeffs.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index });
        }
        Ok(Self { coeffs })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::InvalidParameter("need at least one season".into()));
        }
        let q = rows[0].len();
        if rows.iter().any(|r| r.len() != q) {
            return Err(Error::DimensionMismatch { expected: q, got: 0 });
        }
        Self::new(DMatrix::from_fn(d, q, |s, i| rows[s][i]))
    }

    /// Order-zero filter (identity).
    pub fn identity(period: usize) -> Self {
        Self { coeffs: DMatrix::zeros(period, 0) }
    }

    /// Order-one filter `1 - a_s L` from per-season coefficients.
    pub fn first_order(coeffs: &[T]) -> Result<Self> {
        Self::new(DMatrix::from_fn(coeffs.len(), 1, |s, _| coeffs[s]))
    }

    pub fn period(&self) -> usize {
        self.coeffs.nrows()
    }

    pub fn order(&self) -> usize {
        self.coeffs.ncols()
    }

    /// Coefficient of lag `i` at season `s` (1-based); zero beyond the order.
    pub fn coeff(&self, lag: usize, season: usize) -> T {
        debug_assert!(lag >= 1);
        let s = (season - 1) % self.period();
        if lag <= self.order() {
            self.coeffs[(s, lag - 1)]
        } else {
            T::zero()
        }
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.coeffs
    }

    /// Product of the lag-1 coefficients over one period.
    pub fn coefficient_product(&self) -> T {
        (1..=self.period()).fold(T::one(), |acc, s| acc * self.coeff(1, s))
    }
}

/// Apply a periodic filter: `y_t = x_t - sum_i a_{i,s(t)} x_{t-i}`, defined
/// for `t > q`; the output keeps the season alignment through its origin.
pub fn apply_filter<T: Scalar>(
    f: &PeriodicFilter<T>,
    x: &PeriodicSeries<T>,
) -> Result<PeriodicSeries<T>> {
    if f.period() != x.period() {
        return Err(Error::PeriodMismatch { left: f.period(), right: x.period() });
    }
    let q = f.order();
    let n = x.len();
    if n <= q {
        return Err(Error::SeriesTooShort { min: q, got: n });
    }
    let v = x.values();
    let mut out = Vec::with_capacity(n - q);
    for t in q..n {
        let s = x.season_at(t);
        let mut acc = v[t];
        for i in 1..=q {
            acc -= f.coeff(i, s) * v[t - i];
        }
        out.push(acc);
    }
    PeriodicSeries::with_origin(out, x.period(), x.origin() + q)
}

/// Compose two periodic filters so that
/// `apply(compose(outer, inner), x) == apply(outer, apply(inner, x))`.
///
/// The lag-`k` coefficient at season `s` is
/// `a_{k,s} + b_{k,s} - sum_i a_{i,s} b_{k-i, s-i}`, with the inner
/// coefficients read at the shifted season `s - i`.
pub fn compose<T: Scalar>(
    outer: &PeriodicFilter<T>,
    inner: &PeriodicFilter<T>,
) -> Result<PeriodicFilter<T>> {
    let d = outer.period();
    if d != inner.period() {
        return Err(Error::PeriodMismatch { left: d, right: inner.period() });
    }
    let q = outer.order() + inner.order();
    let shift = |s: usize, i: usize| -> usize {
        // season s - i wrapped into 1..=d
        let z = (s + d * (i / d + 1) - i - 1) % d;
        z + 1
    };
    let coeffs = DMatrix::from_fn(d, q, |row, col| {
        let s = row + 1;
        let k = col + 1;
        let mut c = outer.coeff(k, s) + inner.coeff(k, s);
        for i in 1..k.min(outer.order() + 1) {
            c -= outer.coeff(i, s) * inner.coeff(k - i, shift(s, i));
        }
        c
    });
    PeriodicFilter::new(coeffs)
}

/// Unit integration filter from a single seed-vector:
/// `alpha_s = c^(d-s+1) / c^(d-s+2)` with wraparound `c^(d+1) = c^(1)`.
/// The product over one period telescopes to exactly one.
pub fn alpha_from_seed<T: Scalar>(seed: &[T]) -> Result<PeriodicFilter<T>> {
    let d = seed.len();
    if d == 0 {
        return Err(Error::InvalidParameter("empty seed".into()));
    }
    if let Some(index) = seed.iter().position(|&v| v == T::zero()) {
        return Err(Error::ZeroSeedEntry { index });
    }
    let co = |j: usize| seed[(j - 1) % d];
    let alphas: Vec<T> = (1..=d).map(|s| co(d - s + 1) / co(d - s + 2)).collect();
    PeriodicFilter::first_order(&alphas)
}

/// Stacked seed matrix `(X1 * Junit ; X1)'`, an `m1 x 2d` matrix whose
/// columns drive the per-season systems of the general parametrization.
#[derive(Debug, Clone, PartialEq)]
pub struct StackedSeeds<T: Scalar> {
    xbind: DMatrix<T>,
    period: usize,
}

impl<T: Scalar> StackedSeeds<T> {
    /// `seeds` is `d x m1`; `blocks` gives the unit Jordan block sizes.
    pub fn new(seeds: &DMatrix<T>, blocks: &[usize]) -> Result<Self> {
        let d = seeds.nrows();
        let m1 = seeds.ncols();
        if blocks.iter().sum::<usize>() != m1 {
            return Err(Error::InvalidParameter("block sizes must sum to the seed count".into()));
        }
        if m1 > d {
            return Err(Error::InvalidParameter(
                "number of unit roots cannot exceed the period".into(),
            ));
        }
        let junit: DMatrix<T> = junit_from_blocks(blocks);
        let top = seeds * &junit;
        let mut stack = DMatrix::zeros(2 * d, m1);
        stack.view_mut((0, 0), (d, m1)).copy_from(&top);
        stack.view_mut((d, 0), (d, m1)).copy_from(seeds);
        Ok(Self { xbind: stack.transpose(), period: d })
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.xbind
    }

    /// Column `j` (1-based, `j <= 2d`).
    pub fn col(&self, j: usize) -> DVector<T> {
        self.xbind.column(j - 1).clone_owned()
    }
}

fn inf_norm<T: Scalar>(a: &DMatrix<T>) -> T {
    let mut worst = T::zero();
    for i in 0..a.nrows() {
        let mut row = T::zero();
        for j in 0..a.ncols() {
            row += a[(i, j)].abs();
        }
        if row > worst {
            worst = row;
        }
    }
    worst
}

/// Integration filter of order `m1` from seed-vectors and their unit Jordan
/// block structure. Season `s` solves
/// `(Xbind)_{.,(d-s+2)..(d-s+m1+1)} theta(s) = (Xbind)_{.,d-s+1}`.
pub fn theta_from_seeds<T: Scalar>(
    seeds: &DMatrix<T>,
    blocks: &[usize],
) -> Result<PeriodicFilter<T>> {
    theta_from_seeds_capped(seeds, blocks, T::from_f64_lossy(1e12))
}

/// As [`theta_from_seeds`], rejecting seasons whose system condition number
/// exceeds `condition_limit`.
pub fn theta_from_seeds_capped<T: Scalar>(
    seeds: &DMatrix<T>,
    blocks: &[usize],
    condition_limit: T,
) -> Result<PeriodicFilter<T>> {
    let d = seeds.nrows();
    let m1 = seeds.ncols();
    let stacked = StackedSeeds::new(seeds, blocks)?;
    let mut theta = DMatrix::zeros(d, m1);
    for s in 1..=d {
        let mut a = DMatrix::zeros(m1, m1);
        for k in 1..=m1 {
            a.set_column(k - 1, &stacked.col(d - s + 1 + k));
        }
        let b = stacked.col(d - s + 1);
        let lu = a.clone().lu();
        let inv = lu.try_inverse().ok_or(Error::SingularSystem { season: s })?;
        if inf_norm(&a) * inf_norm(&inv) > condition_limit {
            return Err(Error::SingularSystem { season: s });
        }
        let sol = &inv * b;
        for i in 0..m1 {
            theta[(s - 1, i)] = sol[i];
        }
    }
    PeriodicFilter::new(theta)
}

/// Integration filter from a full eigen specification (uses its seeds and
/// unit block structure).
pub fn theta_general<T: Scalar>(spec: &EigenSpec<T>) -> Result<PeriodicFilter<T>> {
    theta_from_seeds(spec.seeds(), spec.blocks())
}

fn two_column_seeds<T: Scalar>(seeds: &DMatrix<T>) -> Result<()> {
    if seeds.ncols() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: seeds.ncols() });
    }
    if seeds.nrows() < 2 {
        return Err(Error::InvalidParameter("need period >= 2 for two unit roots".into()));
    }
    Ok(())
}

/// Seed element `c_i^(j)` with simple wraparound `c^(d+k) = c^(k)`.
fn co_simple<T: Scalar>(seeds: &DMatrix<T>, i: usize, j: usize) -> T {
    let d = seeds.nrows();
    seeds[((j - 1) % d, i - 1)]
}

/// Seed element `c_i^(j)` with chained wraparound
/// `c_1^(d+k) = c_1^(k)`, `c_2^(d+k) = c_2^(k) - c_1^(k)`.
fn co_chained<T: Scalar>(seeds: &DMatrix<T>, i: usize, j: usize) -> T {
    let d = seeds.nrows();
    if j <= d {
        seeds[(j - 1, i - 1)]
    } else if i == 1 {
        seeds[(j - d - 1, 0)]
    } else {
        seeds[(j - d - 1, 1)] - seeds[(j - d - 1, 0)]
    }
}

fn theta_two_with<T: Scalar>(
    seeds: &DMatrix<T>,
    co: impl Fn(&DMatrix<T>, usize, usize) -> T,
) -> Result<PeriodicFilter<T>> {
    two_column_seeds(seeds)?;
    let d = seeds.nrows();
    let delta = |i: usize, j: usize| co(seeds, 1, i) * co(seeds, 2, j) - co(seeds, 1, j) * co(seeds, 2, i);
    let mut theta = DMatrix::zeros(d, 2);
    for s in 1..=d {
        let den = delta(d - s + 2, d - s + 3);
        if den == T::zero() {
            return Err(Error::DegenerateSeeds(format!(
                "zero denominator in the closed form at season {s}"
            )));
        }
        theta[(s - 1, 0)] = delta(d - s + 1, d - s + 3) / den;
        theta[(s - 1, 1)] = delta(d - s + 2, d - s + 1) / den;
    }
    PeriodicFilter::new(theta)
}

/// Closed-form order-2 integration filter for two *simple* unit roots.
pub fn theta_two_simple<T: Scalar>(seeds: &DMatrix<T>) -> Result<PeriodicFilter<T>> {
    theta_two_with(seeds, co_simple)
}

/// Closed-form order-2 integration filter for two *chained* unit roots
/// (one Jordan block of size two; the second column is the chain successor).
pub fn theta_two_chained<T: Scalar>(seeds: &DMatrix<T>) -> Result<PeriodicFilter<T>> {
    theta_two_with(seeds, co_chained)
}

/// Cascade representation `(1 - beta_s L)(1 - alpha_s L)` of the order-2
/// integration filter.
///
/// For two simple roots either root can be removed first; `order` selects
/// which seed column drives `alpha`. For a chained pair the cascade is
/// unique (`alpha` must break the chain head) and `order` is ignored.
/// Both filters satisfy a unit coefficient product over one period, and
/// `theta_1s = alpha_s + beta_s`, `theta_2s = -beta_s alpha_{s-1}`.
pub fn cascade<T: Scalar>(
    seeds: &DMatrix<T>,
    chained: bool,
    order: CascadeOrder,
) -> Result<(PeriodicFilter<T>, PeriodicFilter<T>)> {
    two_column_seeds(seeds)?;
    let d = seeds.nrows();
    let (i1, i2) = if chained {
        (1, 2)
    } else {
        match order {
            CascadeOrder::FirstThenSecond => (1, 2),
            CascadeOrder::SecondThenFirst => (2, 1),
        }
    };
    let co = |i: usize, j: usize| {
        if chained {
            co_chained(seeds, i, j)
        } else {
            co_simple(seeds, i, j)
        }
    };

    let mut alphas = vec![T::zero(); d];
    for s in 1..=d {
        let den = co(i1, d - s + 2);
        if den == T::zero() {
            return Err(Error::DegenerateSeeds(format!(
                "zero seed element in the alpha stage at season {s}"
            )));
        }
        alphas[s - 1] = co(i1, d - s + 1) / den;
    }
    let mut betas = vec![T::zero(); d];
    for s in 1..=d {
        let alpha_prev = alphas[(s + d - 2) % d];
        let den = co(i2, d - s + 2) - alpha_prev * co(i2, d - s + 3);
        if den == T::zero() {
            return Err(Error::DegenerateSeeds(format!(
                "zero denominator in the beta stage at season {s}"
            )));
        }
        betas[s - 1] = (co(i2, d - s + 1) - alphas[s - 1] * co(i2, d - s + 2)) / den;
    }
    Ok((
        PeriodicFilter::first_order(&alphas)?,
        PeriodicFilter::first_order(&betas)?,
    ))
}
