//! JSON matrix files.
//!
//! ```json
//! {"kind": "complex", "rows": [[[1, 0], [0, -1]], [[0, 1], 0.5]]}
//! {"kind": "real", "rows": [[0.7, 0.4], [0.3, 0.6]]}
//! ```
//!
//! Complex entries are `[re, im]` pairs or plain reals. Real files hold
//! stochastic matrices, which are column-stochastic: `P' = T·P`.

use std::path::Path;

use dynsub::{ComplexMatrix, C64};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::report::sig12;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Complex,
    Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Pair([f64; 2]),
    Real(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub kind: Kind,
    pub rows: Vec<Vec<Entry>>,
}

impl MatrixFile {
    fn shape(&self) -> Result<(usize, usize), CliError> {
        let nrows = self.rows.len();
        let ncols = self.rows.first().map_or(0, Vec::len);
        if nrows == 0 || ncols == 0 {
            return Err(CliError::Input("matrix has no entries".into()));
        }
        if self.rows.iter().any(|r| r.len() != ncols) {
            return Err(CliError::Input("rows have different lengths".into()));
        }
        Ok((nrows, ncols))
    }

    pub fn to_complex(&self) -> Result<ComplexMatrix, CliError> {
        let (nrows, ncols) = self.shape()?;
        let mut m = ComplexMatrix::zeros(nrows, ncols);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                m[(i, j)] = match (self.kind, e) {
                    (_, Entry::Real(x)) => C64::new(*x, 0.0),
                    (Kind::Complex, Entry::Pair([re, im])) => C64::new(*re, *im),
                    (Kind::Real, Entry::Pair(_)) => {
                        return Err(CliError::Input(format!(
                            "complex entry at ({i}, {j}) in a real matrix"
                        )))
                    }
                };
                if !(m[(i, j)].re.is_finite() && m[(i, j)].im.is_finite()) {
                    return Err(CliError::Input(format!("non-finite entry at ({i}, {j})")));
                }
            }
        }
        Ok(m)
    }

    pub fn to_real(&self) -> Result<DMatrix<f64>, CliError> {
        if self.kind != Kind::Real {
            return Err(CliError::Input("expected a real matrix".into()));
        }
        Ok(self.to_complex()?.map(|z| z.re))
    }

    pub fn from_complex(m: &ComplexMatrix) -> Self {
        MatrixFile {
            kind: Kind::Complex,
            rows: m
                .row_iter()
                .map(|r| {
                    r.iter()
                        .map(|z| Entry::Pair([sig12(z.re), sig12(z.im)]))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_real(m: &DMatrix<f64>) -> Self {
        MatrixFile {
            kind: Kind::Real,
            rows: m
                .row_iter()
                .map(|r| r.iter().map(|&x| Entry::Real(sig12(x))).collect())
                .collect(),
        }
    }
}

pub fn read_matrix(path: &Path) -> Result<MatrixFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn read_complex(path: &Path) -> Result<ComplexMatrix, CliError> {
    read_matrix(path)?.to_complex()
}

pub fn read_real(path: &Path) -> Result<DMatrix<f64>, CliError> {
    read_matrix(path)?.to_real()
}
