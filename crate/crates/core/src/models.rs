//! Built-in quarterly model specifications (`table2:I`, `table2:II`,
//! `table2:III`): one, two and three simple unit roots with their
//! generating seed-vectors and per-season noise variances.

use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::mcmatrix::EigenSpec;
use crate::scalar::Scalar;
use crate::series::NoiseSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table2Model {
    I,
    II,
    III,
}

impl Table2Model {
    pub const ALL: [Table2Model; 3] = [Table2Model::I, Table2Model::II, Table2Model::III];

    pub fn name(&self) -> &'static str {
        match self {
            Table2Model::I => "table2:I",
            Table2Model::II => "table2:II",
            Table2Model::III => "table2:III",
        }
    }

    /// Number of (simple) unit roots.
    pub fn m1(&self) -> usize {
        match self {
            Table2Model::I => 1,
            Table2Model::II => 2,
            Table2Model::III => 3,
        }
    }

    pub fn period(&self) -> usize {
        4
    }

    pub fn blocks(&self) -> Vec<usize> {
        vec![1; self.m1()]
    }

    /// Seed-vectors, one column per unit root.
    pub fn seed_columns(&self) -> &'static [[f64; 4]] {
        match self {
            Table2Model::I => &[[-0.64, 0.46, 0.65, 0.68]],
            Table2Model::II => &[[0.08, -0.41, 0.52, 0.40], [0.22, 0.29, -0.58, -0.49]],
            Table2Model::III => &[
                [-0.64, -0.46, 0.65, 0.68],
                [-0.23, 0.95, -0.83, -0.89],
                [-0.30, 0.91, 0.47, -0.15],
            ],
        }
    }

    /// Per-season innovation variances.
    pub fn sigma2_values(&self) -> [f64; 4] {
        match self {
            Table2Model::I => [0.15, 0.46, 0.24, 0.08],
            Table2Model::II => [0.29, 0.37, 0.44, 0.02],
            Table2Model::III => [0.22, 0.35, 0.25, 0.05],
        }
    }

    pub fn eigen_spec<T: Scalar>(&self) -> EigenSpec<T> {
        let cols = self.seed_columns();
        let d = self.period();
        let seeds = DMatrix::from_fn(d, cols.len(), |i, j| T::from_f64_lossy(cols[j][i]));
        EigenSpec::simple_units(d, seeds).expect("built-in seeds are valid")
    }

    pub fn noise<T: Scalar>(&self) -> NoiseSpec<T> {
        let s = self.sigma2_values();
        NoiseSpec::new(s.iter().map(|&v| T::from_f64_lossy(v)).collect())
            .expect("built-in variances are valid")
    }
}

impl FromStr for Table2Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table2:I" | "table2:i" | "I" | "i" | "1" => Ok(Table2Model::I),
            "table2:II" | "table2:ii" | "II" | "ii" | "2" => Ok(Table2Model::II),
            "table2:III" | "table2:iii" | "III" | "iii" | "3" => Ok(Table2Model::III),
            other => Err(Error::InvalidParameter(format!(
                "unknown built-in model '{other}' (expected table2:I, table2:II or table2:III)"
            ))),
        }
    }
}
