pub mod diagnose;
pub mod fit;
pub mod forecast;
pub mod mc;
pub mod simulate;

use piar::{fit_par, fit_piar_with, FitOptions, FittedModel, PeriodicSeries};

use crate::config::ModelSection;
use crate::error::{CliError, Result};

/// Model hypothesis shared by fit, forecast and diagnose.
#[derive(Debug, Clone)]
pub struct Hypothesis {
    pub p: usize,
    pub m1: usize,
    pub blocks: Vec<usize>,
    pub center: bool,
    pub seed: u64,
    pub restarts: usize,
}

impl Hypothesis {
    pub fn resolve(
        p: Option<usize>,
        m1: Option<usize>,
        blocks: Option<Vec<usize>>,
        center: Option<bool>,
        seed: Option<u64>,
        restarts: Option<usize>,
        file: &ModelSection,
    ) -> Result<Self> {
        let p = p
            .or(file.p)
            .ok_or_else(|| CliError::Usage("missing --p (autoregressive order)".into()))?;
        let m1 = m1.or(file.m1).unwrap_or(0);
        let blocks = match blocks.or_else(|| file.blocks.clone()) {
            Some(b) => b,
            None => vec![1; m1],
        };
        if blocks.iter().sum::<usize>() != m1 {
            return Err(CliError::Usage(format!(
                "--blocks {blocks:?} does not sum to --m1 {m1}"
            )));
        }
        Ok(Self {
            p,
            m1,
            blocks,
            center: center.or(file.center).unwrap_or(false),
            seed: seed.or(file.seed).unwrap_or(1),
            restarts: restarts.or(file.restarts).unwrap_or(20),
        })
    }

    pub fn fit(&self, x: &PeriodicSeries<f64>) -> Result<FittedModel<f64>> {
        if self.m1 == 0 {
            fit_par(x, self.p).map_err(Into::into)
        } else {
            let opts = FitOptions {
                restarts: self.restarts,
                seed: self.seed,
                ..FitOptions::default()
            };
            fit_piar_with(x, self.p, self.m1, &self.blocks, &opts).map_err(Into::into)
        }
    }
}

/// Information criteria of a fitted model.
pub fn information_criteria(model: &FittedModel<f64>) -> (f64, f64) {
    let k = model.free_parameters() as f64;
    let aic = -2.0 * model.loglik + 2.0 * k;
    let bic = -2.0 * model.loglik + k * (model.n_used as f64).ln();
    (aic, bic)
}
