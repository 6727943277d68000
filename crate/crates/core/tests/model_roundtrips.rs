//! Cross-module invariants: interval coverage, integration-order witnesses
//! and an end-to-end f32 smoke test.

use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use piar::*;

/// Mean-square growth between the first and second half of each season's
/// subseries; near 1 for stationary data, large for integrated data.
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
fn gaussian_interval_coverage_on_par_data() {
    let reps = 2000u64;
    let horizon = 2;
    let years = 12;
    let d = 4;
    let rows = vec![vec![0.6], vec![-0.4], vec![0.7], vec![0.3]];
    let coeffs = PeriodicCoefficients::from_rows(&rows).unwrap();
    let noise = NoiseSpec::new(vec![0.5, 1.0, 0.8, 0.3]).unwrap();
    let model = FittedModel {
        period: d,
        order: 1,
        blocks: vec![],
        pi_filter: None,
        stationary: Some(coeffs.clone()),
        sigma2: noise.clone(),
        seeds: None,
        rss_by_season: vec![0.0; d],
        loglik: 0.0,
        n_used: 0,
    };

    let (covered, total): (u64, u64) = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let n = (years + horizon) * d;
            let x = simulate_par(&coeffs, &noise, n, 40 * d, 0xC0BE + rep).unwrap();
            let history =
                PeriodicSeries::new(x.values()[..years * d].to_vec(), d).unwrap();
            let fc = forecast_vs(&model, &history, horizon).unwrap();
            let mut covered = 0u64;
            let mut total = 0u64;
            for h in 0..horizon {
                for c in 0..d {
                    // column c is season d - c
                    let idx = (years + h) * d + (d - 1 - c);
                    let actual = x.values()[idx];
                    total += 1;
                    if actual >= fc.lower[(h, c)] && actual <= fc.upper[(h, c)] {
                        covered += 1;
                    }
                }
            }
            (covered, total)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    let rate = covered as f64 / total as f64;
    assert!(
        (rate - 0.95).abs() <= 0.03,
        "coverage {rate:.3} outside 0.95 +- 0.03"
    );
}

#[test]
fn single_unit_root_needs_one_differencing_stage() {
    let spec = Table2Model::I.eigen_spec::<f64>();
    let alpha = alpha_from_seed(&[-0.64, 0.46, 0.65, 0.68]).unwrap();
    let mut raw_ratio = 0.0;
    let mut filtered_ratio = 0.0;
    let reps = 30;
    for rep in 0..reps {
        let x = simulate_piar(&SimConfig {
            model: SimModel::Eigen(spec.clone()),
            stationary: None,
            noise: Table2Model::I.noise::<f64>(),
            n: 240,
            burn_in: 0,
            rng_seed: 0xD1FF,
            rng_stream: rep,
        })
        .unwrap();
        raw_ratio += growth_ratio(&x) / reps as f64;
        filtered_ratio += growth_ratio(&apply_filter(&alpha, &x).unwrap()) / reps as f64;
    }
    assert!(raw_ratio > 1.8, "integrated series should trend: {raw_ratio:.2}");
    assert!(filtered_ratio < 1.7, "filtered series should be flat: {filtered_ratio:.2}");
}

#[test]
fn chained_pair_needs_two_differencing_stages() {
    let mut rng = StdRng::seed_from_u64(0xD2FF);
    let seeds = DMatrix::from_fn(4, 2, |_, _| loop {
        let v: f64 = rng.random_range(-1.0..1.0);
        if v.abs() >= 0.2 {
            break v;
        }
    });
    let spec = EigenSpec::new(4, 4, vec![2], seeds.clone(), vec![]).unwrap();
    let (alpha, beta) = cascade(&seeds, true, CascadeOrder::FirstThenSecond).unwrap();

    let reps = 30;
    let mut one_stage = 0.0;
    let mut two_stage = 0.0;
    for rep in 0..reps {
        let x = simulate_piar(&SimConfig {
            model: SimModel::Eigen(spec.clone()),
            stationary: None,
            noise: NoiseSpec::constant(4, 0.25).unwrap(),
            n: 240,
            burn_in: 0,
            rng_seed: 0xD3FF,
            rng_stream: rep,
        })
        .unwrap();
        let once = apply_filter(&alpha, &x).unwrap();
        let twice = apply_filter(&beta, &once).unwrap();
        one_stage += growth_ratio(&once) / reps as f64;
        two_stage += growth_ratio(&twice) / reps as f64;
    }
    // after breaking the chain the series is still integrated of order one
    assert!(one_stage > 1.8, "one stage should leave a trend: {one_stage:.2}");
    assert!(two_stage < 1.7, "two stages should be stationary: {two_stage:.2}");
}

#[test]
fn f32_end_to_end_smoke() {
    let spec = Table2Model::I.eigen_spec::<f32>();
    let x = simulate_piar(&SimConfig {
        model: SimModel::Eigen(spec),
        stationary: None,
        noise: Table2Model::I.noise::<f32>(),
        n: 240,
        burn_in: 0,
        rng_seed: 5,
        rng_stream: 0,
    })
    .unwrap();
    let fitted = fit_piar_with(
        &x,
        1,
        1,
        &[1],
        &FitOptions { restarts: 4, ..FitOptions::default() },
    )
    .unwrap();
    let theta = fitted.pi_filter.as_ref().unwrap();
    let alpha = alpha_from_seed(&[-0.64_f32, 0.46, 0.65, 0.68]).unwrap();
    for s in 1..=4 {
        assert!(
            (theta.coeff(1, s) - alpha.coeff(1, s)).abs() < 0.15,
            "season {s}: {} vs {}",
            theta.coeff(1, s),
            alpha.coeff(1, s)
        );
    }
    let fc = forecast_mc(&fitted, &x, 3).unwrap();
    assert!(fc.point.iter().all(|v| v.is_finite()));
}
