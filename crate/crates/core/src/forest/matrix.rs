use crate::error::{Error, Result};

/// Dense column-major feature matrix with no missing values.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    n_rows: usize,
}

impl Matrix {
    pub fn from_columns(names: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if names.len() != columns.len() {
            return Err(Error::LengthMismatch {
                left: names.len(),
                right: columns.len(),
            });
        }
        let n_rows = columns.first().map_or(0, Vec::len);
        for (name, c) in names.iter().zip(&columns) {
            if c.len() != n_rows {
                return Err(Error::LengthMismatch {
                    left: n_rows,
                    right: c.len(),
                });
            }
            if c.iter().any(|v| !v.is_finite()) {
                return Err(Error::Degenerate(format!("{name} has a non-finite value")));
            }
        }
        Ok(Self {
            names,
            columns,
            n_rows,
        })
    }

    pub fn from_rows(names: Vec<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let mut columns = vec![Vec::with_capacity(rows.len()); names.len()];
        for r in rows {
            if r.len() != names.len() {
                return Err(Error::LengthMismatch {
                    left: names.len(),
                    right: r.len(),
                });
            }
            for (c, &v) in columns.iter_mut().zip(r) {
                c.push(v);
            }
        }
        let n_rows = rows.len();
        let mut m = Self::from_columns(names, columns)?;
        m.n_rows = n_rows;
        Ok(m)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_features(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn value(&self, row: usize, feature: usize) -> f64 {
        self.columns[feature][row]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[i]).collect()
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self {
            names: self.names.clone(),
            columns: self
                .columns
                .iter()
                .map(|c| rows.iter().map(|&i| c[i]).collect())
                .collect(),
            n_rows: rows.len(),
        }
    }
}
