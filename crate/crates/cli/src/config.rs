//! Model files read from disk.

use std::path::Path;

use fmkernel::fock::{EulerPairing, ModelCohomology};
use fmkernel::Matrix;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Cohomology ring model: `{"degrees": [..], "pairing": [[..], ..]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ModelConfig {
    pub degrees: Vec<i64>,
    pub pairing: Vec<Vec<i64>>,
}

/// Euler form on a lattice of K-classes, with `⊗ω` as a matrix.
/// `omega` defaults to the identity.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EulerConfig {
    pub chi: Vec<Vec<i64>>,
    #[serde(default)]
    pub omega: Option<Vec<Vec<i64>>>,
}

fn matrix(rows: &[Vec<i64>]) -> Result<Matrix> {
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(CliError::Usage("matrix rows have different lengths".into()));
    }
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    Ok(Matrix::from_i64(&refs))
}

fn read<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| CliError::Config { path: path.to_path_buf(), source })
}

impl ModelConfig {
    pub fn load(path: &Path) -> Result<Self> {
        read(path)
    }

    pub fn build(&self) -> Result<ModelCohomology> {
        Ok(ModelCohomology::new(self.degrees.clone(), matrix(&self.pairing)?)?)
    }
}

impl EulerConfig {
    pub fn load(path: &Path) -> Result<Self> {
        read(path)
    }

    pub fn build(&self) -> Result<EulerPairing> {
        let chi = matrix(&self.chi)?;
        Ok(match &self.omega {
            Some(w) => EulerPairing::new(chi, matrix(w)?)?,
            None => EulerPairing::with_trivial_canonical_class(chi)?,
        })
    }

    /// Rank two, `ω` swapping the two classes.
    pub fn swap_example() -> Self {
        EulerConfig { chi: vec![vec![1, 3], vec![3, 5]], omega: Some(vec![vec![0, 1], vec![1, 0]]) }
    }

    /// Rank two with trivial canonical class.
    pub fn trivial_example() -> Self {
        EulerConfig { chi: vec![vec![2, -1], vec![-1, 2]], omega: None }
    }
}
