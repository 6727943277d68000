//! Simulate a quarterly process with two simple unit roots, fit it, test
//! the unit-root hypothesis and forecast two years ahead.

use piar::nalgebra::DMatrix;
use piar::*;

fn main() -> piar::Result<()> {
    // two simple unit roots at period 4, from seed-vectors
    let seeds = DMatrix::from_column_slice(
        4,
        2,
        &[0.08, -0.41, 0.52, 0.40, 0.22, 0.29, -0.58, -0.49],
    );
    let spec = EigenSpec::simple_units(4, seeds)?;
    let x = simulate_piar(&SimConfig {
        model: SimModel::Eigen(spec),
        stationary: None,
        noise: NoiseSpec::new(vec![0.29, 0.37, 0.44, 0.02])?,
        n: 240,
        burn_in: 0,
        rng_seed: 7,
        rng_stream: 0,
    })?;

    let fitted = fit_piar(&x, 2, 2, &[1, 1])?;
    let theta = fitted.pi_filter.as_ref().expect("integration filter");
    println!("fitted integration filter (lag 1): {:?}",
        (1..=4).map(|s| theta.coeff(1, s)).collect::<Vec<_>>());

    let lr = lr_unit_root_test(&x, 2, 2, &[1, 1])?;
    println!(
        "unit-root LR statistic {:.3} vs critical {:.2} -> {}",
        lr.statistic,
        lr.critical_value,
        if lr.reject { "reject" } else { "accept" }
    );

    let forecast = forecast_mc(&fitted, &x, 2)?;
    for (point, lower, upper) in forecast.chronological() {
        println!("{point:8.3}  [{lower:8.3}, {upper:8.3}]");
    }
    Ok(())
}
