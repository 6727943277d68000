//! Monthly-scale workflow: simulate a PIAR with a chained unit-root pair
//! and a stationary part at d = 12, fit the two-step model, run the
//! diagnostics and forecast ahead.

use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use piar::diagnostics::lr_statistic_from_residuals;
use piar::*;

fn growth_ratio(x: &PeriodicSeries<f64>) -> f64 {
    let d = x.period();
    let mut ratios = Vec::new();
    for s in 1..=d {
        let vals = x.season_values(s);
        let half = vals.len() / 2;
        let ms = |v: &[f64]| v.iter().map(|u| u * u).sum::<f64>() / v.len() as f64;
        let (a, b) = (ms(&vals[..half]), ms(&vals[half..]));
        if a > 0.0 {
            ratios.push(b / a);
        }
    }
    ratios.iter().sum::<f64>() / ratios.len() as f64
}

#[test]
fn chained_pair_with_stationary_part_at_period_twelve() {
    let d = 12;
    let mut rng = StdRng::seed_from_u64(0xBEEF);
    let seeds = DMatrix::from_fn(d, 2, |_, _| loop {
        let v: f64 = rng.random_range(-1.0..1.0);
        if v.abs() >= 0.25 {
            break v;
        }
    });
    let spec = EigenSpec::new(d, d, vec![2], seeds.clone(), vec![]).unwrap();
    let psi = PeriodicFilter::new(DMatrix::from_fn(d, 3, |_, j| {
        [0.25, -0.1, 0.05][j] * rng.random_range(0.5..1.5)
    }))
    .unwrap();
    let noise = NoiseSpec::constant(d, 0.05).unwrap();
    let x = simulate_piar(&SimConfig {
        model: SimModel::Eigen(spec),
        stationary: Some(psi),
        noise: noise.clone(),
        n: 47 * d,
        burn_in: 10 * d,
        rng_seed: 0xFACE,
        rng_stream: 0,
    })
    .unwrap();

    // two-step fit of the hypothesized structure
    let opts = FitOptions { restarts: 10, ..FitOptions::default() };
    let fitted = fit_piar_with(&x, 5, 2, &[2], &opts).unwrap();
    assert_eq!(fitted.m1(), 2);
    let psi_hat = fitted.stationary.as_ref().unwrap();
    assert_eq!(psi_hat.order(), 3);

    // the fitted integration filter renders the series stationary
    let theta_hat = fitted.pi_filter.as_ref().unwrap();
    let filtered = apply_filter(theta_hat, &x).unwrap();
    let ratio = growth_ratio(&filtered);
    assert!(ratio < 2.5, "filtered series still trends: {ratio:.2}");
    assert!(growth_ratio(&x) > 3.0, "raw series should trend strongly");

    // cascade stages of the chained pair satisfy the unit products
    let (alpha, beta) =
        cascade(fitted.seeds.as_ref().unwrap(), true, CascadeOrder::FirstThenSecond).unwrap();
    assert!((alpha.coefficient_product() - 1.0).abs() < 1e-8);
    assert!((beta.coefficient_product() - 1.0).abs() < 1e-8);

    // innovation variances land near the generating level
    for s in 1..=d {
        let v = fitted.sigma2.sigma2(s);
        assert!(
            (0.5 * 0.05..2.0 * 0.05).contains(&v),
            "season {s} variance {v} far from 0.05"
        );
    }

    // diagnostics pass on the residuals of the true structure
    let resid = residuals(&fitted, &x).unwrap();
    let acf = periodic_acf(&resid, 12).unwrap();
    let reports = mcleod_stat(&acf, 5);
    let rejections = reports.iter().filter(|r| r.reject).count();
    assert!(rejections <= 3, "{rejections}/12 seasons rejected");

    // the unit-root hypothesis is accepted against the unrestricted fit
    let alternative = fit_par(&x, 5).unwrap();
    let lr = lr_statistic_from_residuals(
        &residuals(&fitted, &x).unwrap(),
        &residuals(&alternative, &x).unwrap(),
        2,
    )
    .unwrap();
    assert!(!lr.reject, "LR statistic {} vs {}", lr.statistic, lr.critical_value);

    // forecasting runs through the large state representation
    let fc = forecast_mc(&fitted, &x, 3).unwrap();
    assert_eq!(fc.horizon(), 3);
    assert!(fc.point.iter().all(|v| v.is_finite()));
    assert!(fc.upper.iter().zip(fc.lower.iter()).all(|(u, l)| u >= l));
}
