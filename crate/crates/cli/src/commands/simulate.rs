use std::path::PathBuf;
use std::str::FromStr;

use clap::Args;
use piar::nalgebra::DMatrix;
use piar::{
    simulate_piar, EigenSpec, NoiseSpec, PeriodicFilter, SimConfig, SimModel, Table2Model,
};

use crate::config::FileConfig;
use crate::data::write_series;
use crate::error::{CliError, Result};

/// Simulate a periodically integrated series and write it as CSV.
#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Built-in model: table2:I, table2:II or table2:III
    #[arg(long)]
    pub model: Option<String>,
    /// Sample size
    #[arg(long)]
    pub n: Option<usize>,
    /// RNG seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Burn-in for the stationary part (rounded up to whole years)
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// Output CSV path
    #[arg(long)]
    pub output: Option<PathBuf>,
}

pub fn run(args: SimulateArgs, file: &FileConfig) -> Result<()> {
    let section = &file.simulate;
    let n = args.n.or(section.n).unwrap_or(240);
    let seed = args.seed.or(section.seed).unwrap_or(0);
    let burn_in = args.burn_in.or(section.burn_in).unwrap_or(0);
    let output = args
        .output
        .or_else(|| section.output.clone())
        .unwrap_or_else(|| PathBuf::from("series.csv"));

    let model_name = args.model.or_else(|| section.model.clone());
    let (model, stationary, noise) = match (model_name, &section.custom) {
        (Some(name), _) => {
            let builtin = Table2Model::from_str(&name).map_err(|e| CliError::Usage(e.to_string()))?;
            (
                SimModel::Eigen(builtin.eigen_spec::<f64>()),
                None,
                builtin.noise::<f64>(),
            )
        }
        (None, Some(custom)) => {
            let d = custom.period;
            let m1 = custom.seeds.len();
            for (i, col) in custom.seeds.iter().enumerate() {
                if col.len() != d {
                    return Err(CliError::Usage(format!(
                        "custom seed {} has {} elements, expected period {d}",
                        i + 1,
                        col.len()
                    )));
                }
            }
            let seeds = DMatrix::from_fn(d, m1, |r, c| custom.seeds[c][r]);
            let spec = EigenSpec::new(d, d, custom.blocks.clone(), seeds, Vec::new())?;
            let stationary = match &custom.stationary {
                Some(rows) => Some(PeriodicFilter::from_rows(rows)?),
                None => None,
            };
            let noise = NoiseSpec::new(custom.sigma2.clone())?;
            (SimModel::Eigen(spec), stationary, noise)
        }
        (None, None) => {
            return Err(CliError::Usage(
                "missing --model (or a [simulate.custom] config section)".into(),
            ))
        }
    };

    let x = simulate_piar(&SimConfig {
        model,
        stationary,
        noise,
        n,
        burn_in,
        rng_seed: seed,
        rng_stream: 0,
    })?;
    write_series(&output, &x)?;
    println!(
        "wrote {} observations (period {}) to {}",
        x.len(),
        x.period(),
        output.display()
    );
    Ok(())
}
