use std::path::PathBuf;

use clap::Args;
use piar::{
    fit_par, lr_unit_root_test, mc_from_coeffs, mcleod_stat, normality_summary, periodic_acf,
    residuals, unit_root_count,
};

use crate::commands::Hypothesis;
use crate::config::FileConfig;
use crate::data::{read_series, write_table};
use crate::error::{CliError, Result};
use crate::table::{aligned, sig6};

/// Residual diagnostics and the unit-root likelihood-ratio test for a
/// hypothesized model.
#[derive(Debug, Args)]
pub struct DiagnoseArgs {
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
    /// Maximum autocorrelation lag
    #[arg(long)]
    pub lags: Option<usize>,
    /// Eigenvalues within this distance of 1 count as unit roots of the
    /// fitted unrestricted model (estimation noise moves roots)
    #[arg(long, default_value_t = 0.05)]
    pub unit_tol: f64,
    #[arg(long)]
    pub center: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub output_prefix: Option<String>,
}

pub fn run(args: DiagnoseArgs, file: &FileConfig) -> Result<()> {
    let section = &file.diagnose;
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
    let lags = args.lags.or(section.lags).unwrap_or(12);
    if lags <= hypothesis.p {
        return Err(CliError::Usage(format!(
            "--lags {lags} must exceed the autoregressive order {}",
            hypothesis.p
        )));
    }
    let prefix = args
        .output_prefix
        .or_else(|| section.model.output_prefix.clone())
        .unwrap_or_else(|| "diagnose_".into());

    let raw = read_series(&input, period)?;
    let x = if hypothesis.center { raw.centered().0 } else { raw };

    // eigenvalue screen of the unrestricted fit: how many roots look unit
    let unrestricted = fit_par(&x, hypothesis.p)?;
    let f_hat = mc_from_coeffs(unrestricted.stationary.as_ref().expect("PAR coefficients"));
    let moduli = f_hat.eigenvalue_moduli();
    let near_unit = unit_root_count(&f_hat, args.unit_tol);
    println!(
        "unrestricted fit: eigenvalue moduli [{}]; {} within {} of 1",
        moduli.iter().map(|m| sig6(*m)).collect::<Vec<_>>().join(", "),
        near_unit,
        args.unit_tol
    );

    let model = hypothesis.fit(&x)?;
    let resid = residuals(&model, &x)?;

    // periodic autocorrelations
    let acf = periodic_acf(&resid, lags)?;
    let mut acf_rows = Vec::new();
    for s in 1..=period {
        for l in 1..=lags {
            acf_rows.push(vec![
                s.to_string(),
                l.to_string(),
                acf.rho(s, l).to_string(),
                acf.bound().to_string(),
            ]);
        }
    }
    let acf_path = PathBuf::from(format!("{prefix}acf.csv"));
    write_table(&acf_path, &["season", "lag", "rho", "bound"], &acf_rows)?;

    // portmanteau statistics
    let reports = mcleod_stat(&acf, hypothesis.p);
    let mut mcleod_rows = Vec::new();
    let mut mcleod_text = Vec::new();
    for (s, r) in reports.iter().enumerate() {
        mcleod_rows.push(vec![
            (s + 1).to_string(),
            r.statistic.to_string(),
            r.df.map_or(String::new(), |v| v.to_string()),
            r.critical_value.to_string(),
            r.reject.to_string(),
        ]);
        mcleod_text.push(vec![
            format!("s={}", s + 1),
            sig6(r.statistic),
            sig6(r.critical_value),
            if r.reject { "reject".into() } else { "accept".into() },
        ]);
    }
    let mcleod_path = PathBuf::from(format!("{prefix}mcleod.csv"));
    write_table(
        &mcleod_path,
        &["season", "statistic", "df", "critical", "reject"],
        &mcleod_rows,
    )?;
    let header = vec![
        "season".to_string(),
        "Q".to_string(),
        "critical".to_string(),
        "decision".to_string(),
    ];
    println!("portmanteau test (max lag {lags}, df {}):", lags - hypothesis.p);
    print!("{}", aligned(&header, &mcleod_text));

    // unit-root likelihood ratio test of the hypothesis against PAR(p)
    let mut written = vec![acf_path.display().to_string(), mcleod_path.display().to_string()];
    if hypothesis.m1 >= 1 {
        let report = lr_unit_root_test(&x, hypothesis.p, hypothesis.m1, &hypothesis.blocks)?;
        let lr_path = PathBuf::from(format!("{prefix}lr.csv"));
        write_table(
            &lr_path,
            &["m1", "statistic", "critical", "reject"],
            &[vec![
                hypothesis.m1.to_string(),
                report.statistic.to_string(),
                report.critical_value.to_string(),
                report.reject.to_string(),
            ]],
        )?;
        println!(
            "unit-root LR test ({} roots): statistic {} vs critical {} -> {}",
            hypothesis.m1,
            sig6(report.statistic),
            sig6(report.critical_value),
            if report.reject { "reject the unit-root hypothesis" } else { "accept the unit-root hypothesis" }
        );
        written.push(lr_path.display().to_string());
    }

    // normality summary of standardized residuals
    let summary = normality_summary(&resid, &model.sigma2)?;
    let qq_rows: Vec<Vec<String>> = summary
        .qq
        .iter()
        .map(|(t, s)| vec![t.to_string(), s.to_string()])
        .collect();
    let qq_path = PathBuf::from(format!("{prefix}qq.csv"));
    write_table(&qq_path, &["theoretical", "sample"], &qq_rows)?;
    println!(
        "standardized residuals: skewness {}  excess kurtosis {}",
        sig6(summary.skewness),
        sig6(summary.excess_kurtosis)
    );
    written.push(qq_path.display().to_string());

    println!("wrote {}", written.join(", "));
    Ok(())
}
