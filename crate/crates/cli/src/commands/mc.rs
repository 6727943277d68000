use std::path::PathBuf;
use std::str::FromStr;

use clap::Args;
use piar::{
    fit_piar_with, simulate_piar, theta_general, FitOptions, SimConfig, SimModel, Table2Model,
};
use rayon::prelude::*;

use crate::config::FileConfig;
use crate::data::write_table;
use crate::error::{CliError, Result};
use crate::table::{aligned, sig6};

/// Replicated simulate-and-estimate experiment with a true/mean/sd/rmse
/// summary.
#[derive(Debug, Args)]
pub struct McArgs {
    /// Built-in model: table2:I, table2:II or table2:III
    #[arg(long)]
    pub model: Option<String>,
    /// Number of replications
    #[arg(long)]
    pub reps: Option<usize>,
    /// Sample size per replication
    #[arg(long)]
    pub n: Option<usize>,
    /// Experiment seed; replication r uses substream r
    #[arg(long)]
    pub seed: Option<u64>,
    /// Optimizer restarts per fit
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Output CSV path
    #[arg(long)]
    pub output: Option<PathBuf>,
}

pub fn run(args: McArgs, file: &FileConfig) -> Result<()> {
    let section = &file.mc_experiment;
    let model_name = args
        .model
        .or_else(|| section.model.clone())
        .ok_or_else(|| CliError::Usage("missing --model".into()))?;
    let model = Table2Model::from_str(&model_name).map_err(|e| CliError::Usage(e.to_string()))?;
    let reps = args.reps.or(section.reps).unwrap_or(200);
    let n = args.n.or(section.n).unwrap_or(240);
    let seed = args.seed.or(section.seed).unwrap_or(0);
    let restarts = args.restarts.or(section.restarts).unwrap_or(20);
    let output = args
        .output
        .or_else(|| section.output.clone())
        .unwrap_or_else(|| PathBuf::from("mc_summary.csv"));
    if reps < 2 {
        return Err(CliError::Usage("need at least 2 replications".into()));
    }

    let spec = model.eigen_spec::<f64>();
    let m1 = model.m1();
    let d = model.period();
    let blocks = model.blocks();
    let theta_true = theta_general(&spec)?;
    let noise = model.noise::<f64>();

    let mut names: Vec<String> = Vec::new();
    let mut truth: Vec<f64> = Vec::new();
    for i in 1..=m1 {
        for s in 1..=d {
            names.push(format!("theta_{i}_{s}"));
            truth.push(theta_true.coeff(i, s));
        }
    }
    for s in 1..=d {
        names.push(format!("sigma2_{s}"));
        truth.push(noise.sigma2(s));
    }

    let estimates: Vec<Vec<f64>> = (0..reps as u64)
        .into_par_iter()
        .map(|rep| -> Result<Vec<f64>> {
            let x = simulate_piar(&SimConfig {
                model: SimModel::Eigen(spec.clone()),
                stationary: None,
                noise: noise.clone(),
                n,
                burn_in: 0,
                rng_seed: seed,
                rng_stream: rep,
            })?;
            let opts = FitOptions {
                restarts,
                seed: seed.wrapping_add(rep),
                ..FitOptions::default()
            };
            let fitted = fit_piar_with(&x, m1, m1, &blocks, &opts)?;
            let theta = fitted.pi_filter.as_ref().expect("integration filter");
            let mut row = Vec::with_capacity(names.len());
            for i in 1..=m1 {
                for s in 1..=d {
                    row.push(theta.coeff(i, s));
                }
            }
            for s in 1..=d {
                row.push(fitted.sigma2.sigma2(s));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;

    let k = names.len();
    let mut mean = vec![0.0; k];
    let mut sd = vec![0.0; k];
    let mut rmse = vec![0.0; k];
    for j in 0..k {
        let col: Vec<f64> = estimates.iter().map(|r| r[j]).collect();
        let m = col.iter().sum::<f64>() / reps as f64;
        mean[j] = m;
        sd[j] = (col.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (reps as f64 - 1.0)).sqrt();
        rmse[j] = (col.iter().map(|v| (v - truth[j]) * (v - truth[j])).sum::<f64>()
            / reps as f64)
            .sqrt();
    }

    let mut header = vec!["row".to_string()];
    header.extend(names.iter().cloned());
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let to_row = |label: &str, values: &[f64]| -> Vec<String> {
        let mut row = vec![label.to_string()];
        row.extend(values.iter().map(|v| v.to_string()));
        row
    };
    let rows = vec![
        to_row("true", &truth),
        to_row("mean", &mean),
        to_row("sd", &sd),
        to_row("rmse", &rmse),
    ];
    write_table(&output, &header_refs, &rows)?;

    let text_rows: Vec<Vec<String>> = [("true", &truth), ("mean", &mean), ("sd", &sd), ("rmse", &rmse)]
        .iter()
        .map(|(label, values)| {
            let mut row = vec![label.to_string()];
            row.extend(values.iter().map(|v| sig6(*v)));
            row
        })
        .collect();
    println!("{} replications of {} at n = {n}:", reps, model.name());
    print!("{}", aligned(&header, &text_rows));
    println!("wrote {}", output.display());
    Ok(())
}
