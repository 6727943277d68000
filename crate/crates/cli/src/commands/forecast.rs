use std::path::PathBuf;

use clap::Args;
use piar::{forecast_mc_level, forecast_vs_level, PeriodicSeries, SeasonIndex};

use crate::commands::Hypothesis;
use crate::config::FileConfig;
use crate::data::{read_series, write_table};
use crate::error::{CliError, Result};
use crate::table::{aligned, sig6};

/// Fit a model and produce year-ahead forecasts with intervals.
#[derive(Debug, Args)]
pub struct ForecastArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub period: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub m1: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub blocks: Option<Vec<usize>>,
    /// Forecast horizon in years
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Forecast horizon in observations; overrides --horizon and truncates
    /// the final year
    #[arg(long)]
    pub horizon_obs: Option<usize>,
    /// Interval confidence level
    #[arg(long)]
    pub level: Option<f64>,
    /// Model the natural logarithm of the series; outputs add
    /// back-transformed columns
    #[arg(long)]
    pub log: bool,
    /// Subtract the overall mean before fitting (added back on output)
    #[arg(long)]
    pub center: bool,
    /// State representation: mc (default, any order) or vs (order <= period)
    #[arg(long)]
    pub route: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub output_prefix: Option<String>,
}

pub fn run(args: ForecastArgs, file: &FileConfig) -> Result<()> {
    let section = &file.forecast;
    let input = args
        .input
        .or_else(|| section.model.input.clone())
        .ok_or_else(|| CliError::Usage("missing --input".into()))?;
    let period = args
        .period
        .or(section.model.period)
        .ok_or_else(|| CliError::Usage("missing --period".into()))?;
    let hypothesis = Hypothesis::resolve(
        args.p,
        args.m1,
        args.blocks,
        if args.center { Some(true) } else { None },
        args.seed,
        args.restarts,
        &section.model,
    )?;
    let horizon = match args.horizon_obs {
        Some(0) => return Err(CliError::Usage("--horizon-obs must be positive".into())),
        Some(k) => k.div_ceil(period),
        None => args.horizon.or(section.horizon).unwrap_or(8),
    };
    let level = args.level.or(section.level).unwrap_or(0.95);
    if !(0.0..1.0).contains(&level) {
        return Err(CliError::Usage(format!("--level {level} must be in (0, 1)")));
    }
    let log_scale = args.log || section.log.unwrap_or(false);
    let route = args
        .route
        .or_else(|| section.route.clone())
        .unwrap_or_else(|| "mc".into());
    let prefix = args
        .output_prefix
        .or_else(|| section.model.output_prefix.clone())
        .unwrap_or_else(|| "forecast_".into());

    let observed = read_series(&input, period)?;
    let modeled = if log_scale {
        if observed.values().iter().any(|&v| v <= 0.0) {
            return Err(CliError::Data(
                "log transform requires strictly positive observations".into(),
            ));
        }
        PeriodicSeries::with_origin(
            observed.values().iter().map(|v| v.ln()).collect(),
            period,
            observed.origin(),
        )?
    } else {
        observed.clone()
    };
    let (fit_input, mean) = if hypothesis.center {
        let (c, mu) = modeled.centered();
        (c, mu)
    } else {
        (modeled.clone(), 0.0)
    };

    let model = hypothesis.fit(&fit_input)?;
    let fc = match route.as_str() {
        "mc" => forecast_mc_level(&model, &fit_input, horizon, level)?,
        "vs" => forecast_vs_level(&model, &fit_input, horizon, level)?,
        other => return Err(CliError::Usage(format!("unknown --route '{other}' (mc or vs)"))),
    };

    // chronological rows with year/season addresses following the sample
    let d = period;
    let last_t = fit_input.origin() + fit_input.len() - 1;
    let mut chron = fc.chronological();
    if let Some(k) = args.horizon_obs {
        chron.truncate(k);
    }
    let mut header = vec!["year", "season", "point", "lower", "upper", "variance"];
    if log_scale {
        header.extend(["point_back", "lower_back", "upper_back"]);
    }
    let mut rows = Vec::with_capacity(chron.len());
    let mut text_rows = Vec::with_capacity(chron.len());
    for (k, &(point, lower, upper)) in chron.iter().enumerate() {
        let t = last_t + k + 1;
        let idx = SeasonIndex::from_time(t, d);
        let h = k / d;
        let col = d - 1 - (k % d); // chronological season k%d+1 sits at column d-1-k%d
        let variance = fc.err_cov[h][(col, col)];
        let (point, lower, upper) = (point + mean, lower + mean, upper + mean);
        let mut row = vec![
            idx.year.to_string(),
            idx.season.to_string(),
            point.to_string(),
            lower.to_string(),
            upper.to_string(),
            variance.to_string(),
        ];
        if log_scale {
            row.push(point.exp().to_string());
            row.push(lower.exp().to_string());
            row.push(upper.exp().to_string());
        }
        rows.push(row);
        let shown = if log_scale { point.exp() } else { point };
        let (lo, hi) = if log_scale { (lower.exp(), upper.exp()) } else { (lower, upper) };
        text_rows.push(vec![
            format!("[{},{}]", idx.year, idx.season),
            sig6(shown),
            sig6(lo),
            sig6(hi),
        ]);
    }
    let csv_path = PathBuf::from(format!("{prefix}forecast.csv"));
    write_table(&csv_path, &header, &rows)?;

    // plot data: observed series then forecast ribbon, original scale
    let plot_header = ["kind", "year", "season", "value", "lower", "upper"];
    let mut plot_rows = Vec::with_capacity(observed.len() + rows.len());
    for i in 0..observed.len() {
        let idx = observed.index_at(i);
        plot_rows.push(vec![
            "observed".to_string(),
            idx.year.to_string(),
            idx.season.to_string(),
            observed.value(i).to_string(),
            String::new(),
            String::new(),
        ]);
    }
    for (k, &(point, lower, upper)) in chron.iter().enumerate() {
        let t = last_t + k + 1;
        let idx = SeasonIndex::from_time(t, d);
        let (p, lo, hi) = if log_scale {
            ((point + mean).exp(), (lower + mean).exp(), (upper + mean).exp())
        } else {
            (point + mean, lower + mean, upper + mean)
        };
        plot_rows.push(vec![
            "forecast".to_string(),
            idx.year.to_string(),
            idx.season.to_string(),
            p.to_string(),
            lo.to_string(),
            hi.to_string(),
        ]);
    }
    let plot_path = PathBuf::from(format!("{prefix}plotdata.csv"));
    write_table(&plot_path, &plot_header, &plot_rows)?;

    let header = vec![
        "[year,season]".to_string(),
        "point".to_string(),
        "lower".to_string(),
        "upper".to_string(),
    ];
    print!("{}", aligned(&header, &text_rows));
    println!("wrote {} and {}", csv_path.display(), plot_path.display());
    Ok(())
}
