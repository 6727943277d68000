use std::path::PathBuf;

use clap::Args;
use piar::{cascade, CascadeOrder, FittedModel, PeriodicSeries};

use crate::commands::{information_criteria, Hypothesis};
use crate::config::FileConfig;
use crate::data::{read_series, write_table};
use crate::error::{CliError, Result};
use crate::table::{aligned, sig6};

/// Fit a PAR or PIAR model and write the parameter table.
#[derive(Debug, Args)]
pub struct FitArgs {
    /// Input series CSV (time_index,value or year,season,value)
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Period of the series
    #[arg(long)]
    pub period: Option<usize>,
    /// Autoregressive order
    #[arg(long)]
    pub p: Option<usize>,
    /// Number of unit roots (0 fits an unrestricted PAR)
    #[arg(long)]
    pub m1: Option<usize>,
    /// Unit Jordan block sizes, comma separated (default: all simple)
    #[arg(long, value_delimiter = ',')]
    pub blocks: Option<Vec<usize>>,
    /// Subtract the overall mean before fitting
    #[arg(long)]
    pub center: bool,
    /// Optimizer seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Optimizer restarts
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Prefix for output files
    #[arg(long)]
    pub output_prefix: Option<String>,
}

/// Parameter table rows: integration filter, cascade stages when available,
/// stationary coefficients and per-season innovation standard deviations.
pub fn parameter_rows(model: &FittedModel<f64>) -> Vec<(String, Vec<f64>)> {
    let d = model.period;
    let mut rows = Vec::new();
    if let Some(theta) = &model.pi_filter {
        for i in 1..=theta.order() {
            rows.push((
                format!("theta_{i}"),
                (1..=d).map(|s| theta.coeff(i, s)).collect(),
            ));
        }
    }
    if let Some(seeds) = &model.seeds {
        match model.m1() {
            1 => {
                if let Some(theta) = &model.pi_filter {
                    rows.push(("alpha".into(), (1..=d).map(|s| theta.coeff(1, s)).collect()));
                }
            }
            2 => {
                let chained = model.blocks.iter().any(|&r| r > 1);
                if let Ok((alpha, beta)) = cascade(seeds, chained, CascadeOrder::FirstThenSecond) {
                    rows.push(("alpha".into(), (1..=d).map(|s| alpha.coeff(1, s)).collect()));
                    rows.push(("beta".into(), (1..=d).map(|s| beta.coeff(1, s)).collect()));
                }
            }
            _ => {}
        }
    }
    if let Some(psi) = &model.stationary {
        for i in 1..=psi.order() {
            rows.push((
                format!("psi_{i}"),
                (1..=d).map(|s| psi.phi(i, s)).collect(),
            ));
        }
    }
    rows.push((
        "sigma".into(),
        (1..=d).map(|s| model.sigma2.sigma2(s).sqrt()).collect(),
    ));
    rows
}

pub fn render_parameter_table(model: &FittedModel<f64>) -> String {
    let d = model.period;
    let mut header = vec!["parameter".to_string()];
    header.extend((1..=d).map(|s| format!("s={s}")));
    let rows: Vec<Vec<String>> = parameter_rows(model)
        .into_iter()
        .map(|(name, values)| {
            let mut row = vec![name];
            row.extend(values.iter().map(|v| sig6(*v)));
            row
        })
        .collect();
    aligned(&header, &rows)
}

pub fn write_parameter_csv(
    path: &std::path::Path,
    model: &FittedModel<f64>,
) -> Result<()> {
    let d = model.period;
    let mut header = vec!["parameter".to_string()];
    header.extend((1..=d).map(|s| format!("s={s}")));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<String>> = parameter_rows(model)
        .into_iter()
        .map(|(name, values)| {
            let mut row = vec![name];
            row.extend(values.iter().map(|v| v.to_string()));
            row
        })
        .collect();
    write_table(path, &header_refs, &rows)
}

pub fn run(args: FitArgs, file: &FileConfig) -> Result<()> {
    let section = &file.fit;
    let input = args
        .input
        .or_else(|| section.input.clone())
        .ok_or_else(|| CliError::Usage("missing --input".into()))?;
    let period = args
        .period
        .or(section.period)
        .ok_or_else(|| CliError::Usage("missing --period".into()))?;
    let hypothesis = Hypothesis::resolve(
        args.p,
        args.m1,
        args.blocks,
        if args.center { Some(true) } else { None },
        args.seed,
        args.restarts,
        section,
    )?;
    let prefix = args
        .output_prefix
        .or_else(|| section.output_prefix.clone())
        .unwrap_or_else(|| "fit_".into());

    let raw = read_series(&input, period)?;
    let x: PeriodicSeries<f64> = if hypothesis.center { raw.centered().0 } else { raw };
    let model = hypothesis.fit(&x)?;

    let text = render_parameter_table(&model);
    print!("{text}");
    let (aic, bic) = information_criteria(&model);
    println!(
        "n_used {}  loglik {}  aic {}  bic {}",
        model.n_used,
        sig6(model.loglik),
        sig6(aic),
        sig6(bic)
    );
    if let Some(theta) = &model.pi_filter {
        if theta.order() == 1 {
            println!("product of alpha over one period: {}", sig6(theta.coefficient_product()));
        }
    }
    if let Some(seeds) = &model.seeds {
        if model.m1() == 2 {
            let chained = model.blocks.iter().any(|&r| r > 1);
            if let Ok((alpha, beta)) = cascade(seeds, chained, CascadeOrder::FirstThenSecond) {
                println!(
                    "cascade products: alpha {}  beta {}",
                    sig6(alpha.coefficient_product()),
                    sig6(beta.coefficient_product())
                );
            }
        }
    }

    let csv_path = PathBuf::from(format!("{prefix}params.csv"));
    write_parameter_csv(&csv_path, &model)?;
    let txt_path = PathBuf::from(format!("{prefix}params.txt"));
    std::fs::write(&txt_path, &text)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", txt_path.display())))?;
    println!("wrote {} and {}", csv_path.display(), txt_path.display());
    Ok(())
}
