//! Model estimation.
//!
//! PAR models are fitted by per-season least squares (asymptotically the
//! periodic Yule-Walker solution). PIAR models are fitted in seed space:
//! the residual sum of squares of the integration-filtered series is
//! minimized over the seed matrix, so the fitted filter satisfies the
//! per-season determination systems exactly and the product-type
//! restrictions hold by construction instead of being imposed. With
//! autoregressive order above the number of unit roots, a stationary PAR
//! part is fitted to the filtered series in a second step.

mod optim;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mcmatrix::mc_from_coeffs;
use crate::pifilter::{apply_filter, compose, theta_from_seeds_capped, PeriodicFilter};
use crate::scalar::Scalar;
use crate::series::{NoiseSpec, PeriodicCoefficients, PeriodicSeries};

/// Estimated model: optional integration filter, optional stationary part,
/// per-season innovation variances.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedModel<T: Scalar> {
    pub period: usize,
    /// Total autoregressive order `p` (integration plus stationary part).
    pub order: usize,
    /// Unit Jordan block sizes of the integration hypothesis; empty for PAR.
    pub blocks: Vec<usize>,
    /// Integration filter of order `m1`.
    pub pi_filter: Option<PeriodicFilter<T>>,
    /// Stationary coefficients of order `p - m1`.
    pub stationary: Option<PeriodicCoefficients<T>>,
    pub sigma2: NoiseSpec<T>,
    /// Estimated seed matrix (`d x m1`, canonical block scaling).
    pub seeds: Option<DMatrix<T>>,
    pub rss_by_season: Vec<T>,
    pub loglik: T,
    pub n_used: usize,
}

impl<T: Scalar> FittedModel<T> {
    /// Number of unit roots in the hypothesis.
    pub fn m1(&self) -> usize {
        self.pi_filter.as_ref().map_or(0, |f| f.order())
    }

    /// Free parameter count: `d p` coefficients plus `d` variances minus one
    /// product-type constraint per unit root.
    pub fn free_parameters(&self) -> usize {
        self.period * self.order + self.period - self.m1()
    }

    /// Coefficients of the full order-`p` autoregression, obtained by
    /// composing the stationary filter with the integration filter.
    pub fn composed_coefficients(&self) -> PeriodicCoefficients<T> {
        let filter = self.composed_filter();
        PeriodicCoefficients::new(filter.matrix().clone()).expect("finite coefficients")
    }

    /// The full filter whose output is the innovation series.
    pub fn composed_filter(&self) -> PeriodicFilter<T> {
        let stationary = self
            .stationary
            .as_ref()
            .map(|c| PeriodicFilter::new(c.matrix().clone()).expect("finite coefficients"));
        match (&stationary, &self.pi_filter) {
            (Some(psi), Some(theta)) => compose(psi, theta).expect("same period"),
            (Some(psi), None) => psi.clone(),
            (None, Some(theta)) => theta.clone(),
            (None, None) => PeriodicFilter::identity(self.period),
        }
    }
}

/// Options for the seed-space search.
#[derive(Debug, Clone)]
pub struct FitOptions {
    /// Random restarts in addition to the data-driven start.
    pub restarts: usize,
    /// Iteration cap per simplex run.
    pub max_iters: usize,
    /// Relative objective tolerance for simplex convergence.
    pub tol: f64,
    /// Seed for the restart draws.
    pub seed: u64,
    /// Per-season systems above this condition number are rejected.
    pub condition_limit: f64,
    /// Run the quasi-Newton polish after each simplex search.
    pub polish: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iters: 5000,
            tol: 1e-12,
            seed: 0x5EED_0001,
            condition_limit: 1e12,
            polish: true,
        }
    }
}

fn gaussian_loglik<T: Scalar>(rss_by_season: &[T], counts: &[usize]) -> T {
    let two_pi = T::from_f64_lossy(std::f64::consts::TAU);
    let floor = T::from_f64_lossy(1e-300);
    let mut ll = T::zero();
    for (s, &rss) in rss_by_season.iter().enumerate() {
        if counts[s] == 0 {
            continue;
        }
        let n_s = T::from_usize(counts[s]).unwrap();
        let sigma2 = (rss / n_s).max(floor);
        ll -= (n_s / (T::one() + T::one())) * ((two_pi * sigma2).ln() + T::one());
    }
    ll
}

/// Per-season least squares fit of a PAR(p) model.
///
/// For every season the observation is regressed on its `p` lags; the
/// innovation variance is the per-season residual mean square. With `p = 0`
/// the fit reduces to per-season mean squares.
pub fn fit_par<T: Scalar>(x: &PeriodicSeries<T>, p: usize) -> Result<FittedModel<T>> {
    let d = x.period();
    let n = x.len();
    let min = d * (p + 2);
    if n < min {
        return Err(Error::InsufficientData { min, got: n });
    }
    let v = x.values();

    let mut phi = DMatrix::<T>::zeros(d, p);
    let mut rss = vec![T::zero(); d];
    let mut counts = vec![0usize; d];

    for s in 1..=d {
        let rows: Vec<usize> = (p..n).filter(|&i| x.season_at(i) == s).collect();
        counts[s - 1] = rows.len();
        if rows.is_empty() {
            continue;
        }
        if p == 0 {
            rss[s - 1] = rows.iter().map(|&i| v[i] * v[i]).fold(T::zero(), |a, b| a + b);
            continue;
        }
        if rows.len() < p {
            return Err(Error::InsufficientData { min, got: n });
        }
        let design = DMatrix::from_fn(rows.len(), p, |r, c| v[rows[r] - 1 - c]);
        let y = DVector::from_fn(rows.len(), |r, _| v[rows[r]]);
        let svd = design.clone().svd(true, true);
        let smax = svd.singular_values.max();
        let cutoff = smax * T::from_f64_lossy(1e-12);
        if smax == T::zero() || svd.singular_values.min() <= cutoff {
            return Err(Error::CollinearLags { season: s });
        }
        let beta = svd
            .solve(&y, cutoff)
            .map_err(|_| Error::CollinearLags { season: s })?;
        let resid = &y - design * &beta;
        rss[s - 1] = resid.dot(&resid);
        for c in 0..p {
            phi[(s - 1, c)] = beta[c];
        }
    }

    let sigma2: Vec<T> = (0..d)
        .map(|s| {
            if counts[s] == 0 {
                T::zero()
            } else {
                rss[s] / T::from_usize(counts[s]).unwrap()
            }
        })
        .collect();
    let loglik = gaussian_loglik(&rss, &counts);
    Ok(FittedModel {
        period: d,
        order: p,
        blocks: Vec::new(),
        pi_filter: None,
        stationary: Some(PeriodicCoefficients::new(phi)?),
        sigma2: NoiseSpec::new(sigma2)?,
        seeds: None,
        rss_by_season: rss,
        loglik,
        n_used: n - p,
    })
}

/// Innovation series of a fitted model: the composed filter applied to `x`.
pub fn residuals<T: Scalar>(
    model: &FittedModel<T>,
    x: &PeriodicSeries<T>,
) -> Result<PeriodicSeries<T>> {
    if model.period != x.period() {
        return Err(Error::PeriodMismatch { left: model.period, right: x.period() });
    }
    apply_filter(&model.composed_filter(), x)
}

// --- seed-space parametrization --------------------------------------------
//
// Chain heads live on the unit sphere through d-1 angles; chain successors
// are free vectors with their head component projected out (the component
// along the head is a gauge direction that leaves the filter unchanged).

fn sphere_point(angles: &[f64]) -> Vec<f64> {
    let d = angles.len() + 1;
    let mut v = vec![1.0; d];
    let mut sin_prod = 1.0;
    for (k, &a) in angles.iter().enumerate() {
        v[k] = sin_prod * a.cos();
        sin_prod *= a.sin();
    }
    v[d - 1] = sin_prod;
    v
}

fn angles_from_unit(v: &[f64]) -> Vec<f64> {
    let d = v.len();
    let mut angles = vec![0.0; d - 1];
    for k in 0..d - 1 {
        let tail: f64 = v[k + 1..].iter().map(|u| u * u).sum::<f64>().sqrt();
        angles[k] = if k == d - 2 { v[d - 1].atan2(v[d - 2]) } else { tail.atan2(v[k]) };
    }
    angles
}

struct SeedParametrization {
    period: usize,
    blocks: Vec<usize>,
}

impl SeedParametrization {
    fn new(period: usize, blocks: &[usize]) -> Self {
        Self { period, blocks: blocks.to_vec() }
    }

    fn len(&self) -> usize {
        let d = self.period;
        self.blocks.iter().map(|&r| (d - 1) + (r - 1) * d).sum()
    }

    fn unpack<T: Scalar>(&self, params: &[f64]) -> DMatrix<T> {
        let d = self.period;
        let m1: usize = self.blocks.iter().sum();
        let mut seeds = DMatrix::<T>::zeros(d, m1);
        let mut at = 0;
        let mut col = 0;
        for &r in &self.blocks {
            let head = sphere_point(&params[at..at + d - 1]);
            at += d - 1;
            for i in 0..d {
                seeds[(i, col)] = T::from_f64_lossy(head[i]);
            }
            col += 1;
            for _ in 1..r {
                let raw = &params[at..at + d];
                at += d;
                let dot: f64 = raw.iter().zip(&head).map(|(a, b)| a * b).sum();
                for i in 0..d {
                    seeds[(i, col)] = T::from_f64_lossy(raw[i] - dot * head[i]);
                }
                col += 1;
            }
        }
        seeds
    }

    fn pack<T: Scalar>(&self, seeds: &DMatrix<T>) -> Vec<f64> {
        let d = self.period;
        let mut params = Vec::with_capacity(self.len());
        let mut col = 0;
        for &r in &self.blocks {
            let mut head: Vec<f64> = (0..d).map(|i| seeds[(i, col)].to_f64_lossy()).collect();
            let norm: f64 = head.iter().map(|u| u * u).sum::<f64>().sqrt();
            let scale = if norm > 0.0 { norm } else { 1.0 };
            for h in &mut head {
                *h /= scale;
            }
            params.extend(angles_from_unit(&head));
            col += 1;
            for _ in 1..r {
                let raw: Vec<f64> =
                    (0..d).map(|i| seeds[(i, col)].to_f64_lossy() / scale).collect();
                let dot: f64 = raw.iter().zip(&head).map(|(a, b)| a * b).sum();
                params.extend(raw.iter().zip(&head).map(|(v, h)| v - dot * h));
                col += 1;
            }
        }
        params
    }
}

/// Canonical seed scaling: per block, the head has unit norm with its first
/// non-negligible entry positive; successors carry the same block scale and
/// are orthogonal to the head.
fn canonicalize_seeds<T: Scalar>(seeds: &DMatrix<T>, blocks: &[usize]) -> DMatrix<T> {
    let d = seeds.nrows();
    let mut out = seeds.clone();
    let mut col = 0;
    let tiny = T::from_f64_lossy(1e-12);
    for &r in blocks {
        let head = out.column(col).clone_owned();
        let norm = head.norm();
        if norm > T::zero() {
            let first_sign = head
                .iter()
                .find(|v| v.abs() > tiny)
                .map_or(T::one(), |v| if *v < T::zero() { -T::one() } else { T::one() });
            let scale = first_sign / norm;
            for j in 0..r {
                for i in 0..d {
                    out[(i, col + j)] *= scale;
                }
            }
        }
        let head = out.column(col).clone_owned();
        for j in 1..r {
            let dot = out.column(col + j).dot(&head);
            for i in 0..d {
                let h = head[i];
                out[(i, col + j)] -= dot * h;
            }
        }
        col += r;
    }
    out
}

/// Residual sum of squares of the integration filter derived from `seeds`.
fn rss_objective<T: Scalar>(
    x: &PeriodicSeries<T>,
    seeds: &DMatrix<T>,
    blocks: &[usize],
    condition_limit: f64,
) -> f64 {
    let theta = match theta_from_seeds_capped(seeds, blocks, T::from_f64_lossy(condition_limit)) {
        Ok(t) => t,
        Err(_) => return f64::INFINITY,
    };
    let filtered = match apply_filter(&theta, x) {
        Ok(f) => f,
        Err(_) => return f64::INFINITY,
    };
    let rss = filtered
        .values()
        .iter()
        .fold(T::zero(), |acc, &v| acc + v * v)
        .to_f64_lossy();
    if rss.is_finite() {
        rss
    } else {
        f64::INFINITY
    }
}

/// Data-driven start: seed the search with the near-unit eigenstructure of
/// the year-transition matrix of an unrestricted PAR fit.
fn smart_start<T: Scalar>(
    x: &PeriodicSeries<T>,
    p: usize,
    blocks: &[usize],
) -> Option<DMatrix<T>> {
    let d = x.period();
    let base = fit_par(x, p).ok()?;
    let f = mc_from_coeffs(base.stationary.as_ref()?);
    let m = f.dim();
    let b = f.matrix() - DMatrix::<T>::identity(m, m);
    let svd = b.clone().svd(true, true);
    let v_t = svd.v_t.as_ref()?;
    // right singular vectors for the smallest singular values approximate
    // the unit eigenspace
    let g = blocks.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[i]
            .partial_cmp(&svd.singular_values[j])
            .unwrap()
    });
    let smax = svd.singular_values.max();
    let eps = smax * T::from_f64_lossy(1e-10);

    let m1: usize = blocks.iter().sum();
    let mut seeds = DMatrix::<T>::zeros(d, m1);
    let mut col = 0;
    debug_assert!(g <= m);
    for (k, &r) in blocks.iter().enumerate() {
        let mut chain = v_t.row(order[k]).transpose();
        for i in 0..d {
            seeds[(i, col)] = chain[i];
        }
        col += 1;
        for _ in 1..r {
            // successor solves (F - I) z = chain in the least-squares sense
            chain = b.clone().svd(true, true).solve(&chain, eps).ok()?;
            for i in 0..d {
                seeds[(i, col)] = chain[i];
            }
            col += 1;
        }
    }
    // degenerate leading block: fall back to random starts only
    let head_norm = seeds.column(0).norm();
    if head_norm < T::from_f64_lossy(1e-8) {
        return None;
    }
    Some(seeds)
}

/// Fit a PIAR model with `m1` unit roots arranged in the given Jordan
/// blocks.
///
/// Step one minimizes the residual sum of squares of the integration filter
/// over the seed matrix (simplex search with restarts plus quasi-Newton
/// polish); step two fits a stationary PAR of order `p - m1` to the
/// filtered series.
pub fn fit_piar<T: Scalar>(
    x: &PeriodicSeries<T>,
    p: usize,
    m1: usize,
    blocks: &[usize],
) -> Result<FittedModel<T>> {
    fit_piar_with(x, p, m1, blocks, &FitOptions::default())
}

pub fn fit_piar_with<T: Scalar>(
    x: &PeriodicSeries<T>,
    p: usize,
    m1: usize,
    blocks: &[usize],
    opts: &FitOptions,
) -> Result<FittedModel<T>> {
    let d = x.period();
    if m1 < 1 || m1 > p.min(d) {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= m1 <= min(p, d); got m1 = {m1}, p = {p}, d = {d}"
        )));
    }
    if blocks.iter().sum::<usize>() != m1 || blocks.contains(&0) {
        return Err(Error::InvalidParameter("block sizes must be positive and sum to m1".into()));
    }
    let n = x.len();
    let min = d * (p + 2);
    if n < min {
        return Err(Error::InsufficientData { min, got: n });
    }

    let parametrization = SeedParametrization::new(d, blocks);
    let n_params = parametrization.len();
    let mut objective = |params: &[f64]| -> f64 {
        let seeds = parametrization.unpack::<T>(params);
        rss_objective(x, &seeds, blocks, opts.condition_limit)
    };

    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(opts.restarts + 1);
    if let Some(seeds) = smart_start(x, p, blocks) {
        starts.push(parametrization.pack(&seeds));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.restarts {
        let mut head_params = Vec::with_capacity(n_params);
        for &r in blocks {
            let mut head: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm: f64 = head.iter().map(|u| u * u).sum::<f64>().sqrt();
            if norm < 1e-3 {
                head[0] = 1.0;
            }
            let norm: f64 = head.iter().map(|u| u * u).sum::<f64>().sqrt();
            for h in &mut head {
                *h /= norm;
            }
            head_params.extend(angles_from_unit(&head));
            for _ in 1..r {
                head_params.extend((0..d).map(|_| rng.random_range(-1.0_f64..1.0)));
            }
        }
        starts.push(head_params);
    }

    let mut best: Option<optim::OptimResult> = None;
    let mut total_evals = 0usize;
    for start in &starts {
        let run = optim::nelder_mead(&mut objective, start, 0.3, opts.max_iters, opts.tol);
        total_evals += run.evals;
        let run = if opts.polish && run.fval.is_finite() {
            let polished = optim::bfgs_polish(&mut objective, &run.x, 200, 1e-10);
            total_evals += polished.evals;
            polished
        } else {
            run
        };
        if best.as_ref().is_none_or(|b| run.fval < b.fval) {
            best = Some(run);
        }
    }
    let best = best.ok_or_else(|| Error::OptimizerFailed("no start point".into()))?;
    if !best.fval.is_finite() {
        return Err(Error::OptimizerFailed(format!(
            "objective not finite at any of {} visited points (singular per-season systems)",
            total_evals
        )));
    }

    let seeds = canonicalize_seeds(&parametrization.unpack::<T>(&best.x), blocks);
    let theta = theta_from_seeds_capped(&seeds, blocks, T::from_f64_lossy(opts.condition_limit))?;
    let filtered = apply_filter(&theta, x)?;

    if p > m1 {
        let step2 = fit_par(&filtered, p - m1)?;
        Ok(FittedModel {
            period: d,
            order: p,
            blocks: blocks.to_vec(),
            pi_filter: Some(theta),
            stationary: step2.stationary,
            sigma2: step2.sigma2,
            seeds: Some(seeds),
            rss_by_season: step2.rss_by_season,
            loglik: step2.loglik,
            n_used: step2.n_used,
        })
    } else {
        let d_t = |k: usize| T::from_usize(k).unwrap();
        let mut rss = vec![T::zero(); d];
        let mut counts = vec![0usize; d];
        for i in 0..filtered.len() {
            let s = filtered.season_at(i);
            let v = filtered.value(i);
            rss[s - 1] += v * v;
            counts[s - 1] += 1;
        }
        let sigma2: Vec<T> = (0..d)
            .map(|s| if counts[s] == 0 { T::zero() } else { rss[s] / d_t(counts[s]) })
            .collect();
        let loglik = gaussian_loglik(&rss, &counts);
        Ok(FittedModel {
            period: d,
            order: p,
            blocks: blocks.to_vec(),
            pi_filter: Some(theta),
            stationary: None,
            sigma2: NoiseSpec::new(sigma2)?,
            seeds: Some(seeds),
            rss_by_season: rss,
            loglik,
            n_used: filtered.len(),
        })
    }
}
