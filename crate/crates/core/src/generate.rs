//! Simulation of PAR and PIAR series.
//!
//! Integrated series are generated through the two-step split: a stationary
//! PAR part driven by Gaussian periodic white noise feeds the integration
//! recursion `X_t = sum_i theta_{i,s} X_{t-i} + y_t`. The integration
//! recursion starts from zeros and receives no burn-in (a unit-root process
//! has no stationary distribution to converge to); the stationary part is
//! burned in.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::mcmatrix::{mc_from_coeffs, EigenSpec};
use crate::pifilter::{theta_general, PeriodicFilter};
use crate::scalar::Scalar;
use crate::series::{season_of, NoiseSpec, PeriodicCoefficients, PeriodicSeries};

/// Integrated-part specification: eigen information or explicit filter
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub enum SimModel<T: Scalar> {
    /// Derive the integration filter from seed-vectors and block structure.
    Eigen(EigenSpec<T>),
    /// Use the coefficients directly as the integration filter.
    Coefficients(PeriodicCoefficients<T>),
}

/// Configuration of a PIAR simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig<T: Scalar> {
    pub model: SimModel<T>,
    /// Stationary PAR part of order `p - m1`; `None` for a pure integration
    /// filter driven by white noise.
    pub stationary: Option<PeriodicFilter<T>>,
    pub noise: NoiseSpec<T>,
    pub n: usize,
    pub burn_in: usize,
    pub rng_seed: u64,
    /// Substream index; replications of one experiment share `rng_seed` and
    /// vary the stream.
    pub rng_stream: u64,
}

impl<T: Scalar> SimConfig<T> {
    pub fn period(&self) -> usize {
        match &self.model {
            SimModel::Eigen(spec) => spec.period(),
            SimModel::Coefficients(c) => c.period(),
        }
    }
}

/// Deterministic generator for replication `stream` of a seeded experiment.
/// Distinct streams of the same seed are independent.
pub fn substream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn draw_noise<T: Scalar, R: Rng>(rng: &mut R, sd: T) -> T {
    let z: f64 = StandardNormal.sample(rng);
    sd * T::from_f64_lossy(z)
}

/// Simulate a periodically stationary PAR series.
///
/// All eigenvalues of the year-transition matrix must have modulus strictly
/// below one; `burn_in` start-up draws (rounded up to whole years) are
/// discarded so the output starts at season 1 in the stationary regime.
pub fn simulate_par<T: Scalar>(
    coeffs: &PeriodicCoefficients<T>,
    noise: &NoiseSpec<T>,
    n: usize,
    burn_in: usize,
    rng_seed: u64,
) -> Result<PeriodicSeries<T>> {
    let d = coeffs.period();
    if noise.period() != d {
        return Err(Error::PeriodMismatch { left: d, right: noise.period() });
    }
    let p = coeffs.order();
    if p > 0 {
        let moduli = mc_from_coeffs(coeffs).eigenvalue_moduli();
        let max_modulus = moduli[0].to_f64_lossy();
        if max_modulus >= 1.0 - 1e-9 {
            return Err(Error::NonStationaryCoefficients { max_modulus });
        }
    }
    let mut rng = substream_rng(rng_seed, 0);
    Ok(par_recursion(coeffs, noise, n, burn_in, &mut rng))
}

fn par_recursion<T: Scalar, R: Rng>(
    coeffs: &PeriodicCoefficients<T>,
    noise: &NoiseSpec<T>,
    n: usize,
    burn_in: usize,
    rng: &mut R,
) -> PeriodicSeries<T> {
    let d = coeffs.period();
    let p = coeffs.order();
    let skip = burn_in.div_ceil(d) * d;
    let total = skip + n;
    let mut x = Vec::with_capacity(total);
    for t in 1..=total {
        let s = season_of(t, d);
        let mut acc = draw_noise(rng, noise.sigma2(s).sqrt());
        for i in 1..=p.min(t - 1) {
            acc += coeffs.phi(i, s) * x[t - 1 - i];
        }
        x.push(acc);
    }
    PeriodicSeries::new(x.split_off(skip), d).expect("finite by construction")
}

/// Simulate a periodically integrated series.
///
/// The innovation series `y` is the stationary PAR part (or raw periodic
/// white noise when absent); the integration recursion runs from zero
/// initial values. Identical configurations produce identical output.
pub fn simulate_piar<T: Scalar>(config: &SimConfig<T>) -> Result<PeriodicSeries<T>> {
    let d = config.period();
    if config.noise.period() != d {
        return Err(Error::PeriodMismatch { left: d, right: config.noise.period() });
    }
    if config.n < d {
        return Err(Error::InsufficientData { min: d, got: config.n });
    }
    let theta = match &config.model {
        SimModel::Eigen(spec) => theta_general(spec)?,
        SimModel::Coefficients(c) => PeriodicFilter::new(c.matrix().clone())?,
    };
    if let Some(psi) = &config.stationary {
        if psi.period() != d {
            return Err(Error::PeriodMismatch { left: d, right: psi.period() });
        }
    }

    let mut rng = substream_rng(config.rng_seed, config.rng_stream);
    let y = match &config.stationary {
        Some(psi) => {
            let coeffs = PeriodicCoefficients::new(psi.matrix().clone())?;
            let moduli = mc_from_coeffs(&coeffs).eigenvalue_moduli();
            let max_modulus = moduli[0].to_f64_lossy();
            if psi.order() > 0 && max_modulus >= 1.0 - 1e-9 {
                return Err(Error::NonStationaryCoefficients { max_modulus });
            }
            par_recursion(&coeffs, &config.noise, config.n, config.burn_in, &mut rng)
        }
        None => {
            let zero = PeriodicCoefficients::zero(d, 0);
            par_recursion(&zero, &config.noise, config.n, 0, &mut rng)
        }
    };

    let m1 = theta.order();
    let mut x: Vec<T> = Vec::with_capacity(config.n);
    for t in 1..=config.n {
        let s = season_of(t, d);
        let mut acc = y.value(t - 1);
        for i in 1..=m1.min(t - 1) {
            acc += theta.coeff(i, s) * x[t - 1 - i];
        }
        x.push(acc);
    }
    PeriodicSeries::new(x, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn model_one_spec() -> EigenSpec<f64> {
        let seeds = DMatrix::from_column_slice(4, 1, &[-0.64, 0.46, 0.65, 0.68]);
        EigenSpec::simple_units(4, seeds).unwrap()
    }

    #[test]
    fn zero_noise_gives_zero_series() {
        let config = SimConfig {
            model: SimModel::Eigen(model_one_spec()),
            stationary: None,
            noise: NoiseSpec::new(vec![0.0; 4]).unwrap(),
            n: 40,
            burn_in: 0,
            rng_seed: 1,
            rng_stream: 0,
        };
        let x = simulate_piar(&config).unwrap();
        assert!(x.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn same_seed_is_bitwise_identical() {
        let config = SimConfig {
            model: SimModel::Eigen(model_one_spec()),
            stationary: None,
            noise: NoiseSpec::new(vec![0.15, 0.46, 0.24, 0.08]).unwrap(),
            n: 240,
            burn_in: 0,
            rng_seed: 42,
            rng_stream: 0,
        };
        let a = simulate_piar(&config).unwrap();
        let b = simulate_piar(&config).unwrap();
        assert_eq!(a, b);
        let c = simulate_piar(&SimConfig { rng_seed: 43, ..config.clone() }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn substreams_differ() {
        let mut a = substream_rng(7, 0);
        let mut b = substream_rng(7, 1);
        let va: f64 = StandardNormal.sample(&mut a);
        let vb: f64 = StandardNormal.sample(&mut b);
        assert_ne!(va, vb);
    }

    #[test]
    fn white_noise_variances_match_spec() {
        let coeffs = PeriodicCoefficients::<f64>::zero(4, 0);
        let noise = NoiseSpec::new(vec![0.5, 2.0, 1.0, 0.1]).unwrap();
        let x = simulate_par(&coeffs, &noise, 100_000, 0, 11).unwrap();
        for s in 1..=4 {
            let vals = x.season_values(s);
            let mean: f64 = vals.iter().sum::<f64>() / vals.len() as f64;
            let var: f64 = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
                / vals.len() as f64;
            let want = noise.sigma2(s);
            assert!((var / want - 1.0).abs() < 0.05, "season {s}: {var} vs {want}");
            assert!(mean.abs() < 0.05 * want.sqrt() + 0.02);
        }
    }

    #[test]
    fn period_one_reduces_to_ordinary_ar() {
        let coeffs = PeriodicCoefficients::from_rows(&[vec![0.6]]).unwrap();
        let noise = NoiseSpec::new(vec![1.0]).unwrap();
        let x = simulate_par(&coeffs, &noise, 50_000, 200, 3).unwrap();
        // lag-1 autocorrelation of an AR(1) is phi
        let v = x.values();
        let mean: f64 = v.iter().sum::<f64>() / v.len() as f64;
        let var: f64 = v.iter().map(|u| (u - mean) * (u - mean)).sum::<f64>() / v.len() as f64;
        let cov: f64 = v
            .windows(2)
            .map(|w| (w[0] - mean) * (w[1] - mean))
            .sum::<f64>()
            / (v.len() - 1) as f64;
        assert!((cov / var - 0.6).abs() < 0.03);
    }

    #[test]
    fn unit_root_coefficients_rejected() {
        let coeffs = PeriodicCoefficients::from_rows(&[vec![1.0]]).unwrap();
        let noise = NoiseSpec::new(vec![1.0]).unwrap();
        assert!(matches!(
            simulate_par(&coeffs, &noise, 100, 0, 1),
            Err(Error::NonStationaryCoefficients { .. })
        ));
    }

    #[test]
    fn integrated_series_has_unit_root_and_filtered_does_not_trend() {
        use crate::pifilter::{alpha_from_seed, apply_filter};
        let spec = model_one_spec();
        let config = SimConfig {
            model: SimModel::Eigen(spec),
            stationary: None,
            noise: NoiseSpec::new(vec![0.15, 0.46, 0.24, 0.08]).unwrap(),
            n: 240,
            burn_in: 0,
            rng_seed: 2024,
            rng_stream: 0,
        };
        let x = simulate_piar(&config).unwrap();

        // The integration filter removes the trend: per-season variances of
        // the two halves stay comparable.
        let alpha = alpha_from_seed(&[-0.64, 0.46, 0.65, 0.68]).unwrap();
        let filtered = apply_filter(&alpha, &x).unwrap();
        for s in 1..=4 {
            let vals = filtered.season_values(s);
            let half = vals.len() / 2;
            let ms = |v: &[f64]| v.iter().map(|u| u * u).sum::<f64>() / v.len() as f64;
            let (a, b) = (ms(&vals[..half]), ms(&vals[half..]));
            assert!(b < 10.0 * a + 1.0, "season {s} variance grew: {a} -> {b}");
        }

        // Refit oracle: the raw series keeps the unit root, so the
        // year-transition matrix of an unrestricted PAR(1) fit has an
        // eigenvalue within 0.05 of one.
        let refit = crate::estimate::fit_par(&x, 1).unwrap();
        let f = crate::mcmatrix::mc_from_coeffs(refit.stationary.as_ref().unwrap());
        assert_eq!(crate::mcmatrix::unit_root_count(&f, 0.05), 1);
    }
}
