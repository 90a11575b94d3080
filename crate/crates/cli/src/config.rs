use std::path::PathBuf;

use qclone_core::{uniform_grid, FrontierSolver, MAX_VERIFY_DIM};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Shared parameters of every sweep command.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub d_min: usize,
    pub d_max: usize,
    pub dims: Vec<usize>,
    pub p_grid: Vec<f64>,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub solver: FrontierSolver,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("d-min must be at least 2 (got {0})")]
    DMin(usize),
    #[error("d-min {0} exceeds d-max {1}")]
    DRange(usize, usize),
    #[error("dimension list is empty or contains d < 2")]
    Dims,
    #[error("asymmetry weights must lie in [0, 1] and the grid must be nonempty")]
    PGrid,
    #[error("tolerance must be positive (got {0})")]
    Tol(f64),
    #[error("verification supports d <= {MAX_VERIFY_DIM} (got {0})")]
    VerifyDim(usize),
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            d_min: 2,
            d_max: 100,
            dims: vec![2, 3, 4, 10, 100],
            p_grid: uniform_grid(41),
            tol: 1e-10,
            max_iter: 10_000,
            seed: 0,
            solver: FrontierSolver::Exact,
            output_path: None,
            format: Format::Csv,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.d_min < 2 {
            return Err(ConfigError::DMin(self.d_min));
        }
        if self.d_min > self.d_max {
            return Err(ConfigError::DRange(self.d_min, self.d_max));
        }
        if self.dims.is_empty() || self.dims.iter().any(|&d| d < 2) {
            return Err(ConfigError::Dims);
        }
        if self.p_grid.is_empty() || self.p_grid.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(ConfigError::PGrid);
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(ConfigError::Tol(self.tol));
        }
        Ok(())
    }

    pub fn validate_for_verify(&self) -> Result<(), ConfigError> {
        self.validate()?;
        match self.dims.iter().find(|&&d| d > MAX_VERIFY_DIM) {
            Some(&d) => Err(ConfigError::VerifyDim(d)),
            None => Ok(()),
        }
    }
}

/// `"0.1,0.5,0.9"` or `"uniform:N"`.
pub fn parse_p_grid(s: &str) -> Result<Vec<f64>, ConfigError> {
    let err = || ConfigError::Parse {
        what: "asymmetry grid",
        input: s.to_string(),
    };
    if let Some(n) = s.strip_prefix("uniform:") {
        let n: usize = n.trim().parse().map_err(|_| err())?;
        return Ok(uniform_grid(n));
    }
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| err()))
        .collect()
}

/// `"2,3,4"`.
pub fn parse_dims(s: &str) -> Result<Vec<usize>, ConfigError> {
    s.split(',')
        .map(|t| {
            t.trim().parse::<usize>().map_err(|_| ConfigError::Parse {
                what: "dimension list",
                input: s.to_string(),
            })
        })
        .collect()
}
