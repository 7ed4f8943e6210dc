use crate::error::{Error, Result};

use super::grid::Grid;

/// Real samples of a function on a [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::InvalidGrid(format!(
                "field has {} samples, grid has {}",
                values.len(),
                grid.n()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite sample at index {j}")));
        }
        Ok(Self {
            grid: grid.clone(),
            values,
        })
    }

    /// Builds a field without the finiteness scan (values produced internally).
    pub(crate) fn from_raw(grid: &Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.n());
        Self {
            grid: grid.clone(),
            values,
        }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::from_raw(grid, vec![0.0; grid.n()])
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        Self::from_raw(grid, grid.x().iter().map(|&x| f(x)).collect())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Self::from_raw(&self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Result<Field> {
        self.same_grid(other)?;
        Ok(Self::from_raw(
            &self.grid,
            self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        ))
    }

    pub fn scaled(&self, s: f64) -> Field {
        self.map(|v| s * v)
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn same_grid(&self, other: &Field) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Samples reflected through the origin, `f(-x)`.
    pub fn reflected(&self) -> Field {
        let n = self.values.len();
        let mut out = vec![0.0; n];
        for j in 0..n {
            out[(n - j) % n] = self.values[j];
        }
        Self::from_raw(&self.grid, out)
    }

    /// Odd part `(f(x) - f(-x)) / 2`, exactly odd on the grid.
    pub fn odd_part(&self) -> Field {
        let r = self.reflected();
        let mut out: Vec<f64> = self.values.iter().zip(&r.values).map(|(a, b)| 0.5 * (a - b)).collect();
        let n = out.len();
        out[0] = 0.0;
        out[n / 2] = 0.0;
        Self::from_raw(&self.grid, out)
    }

    /// Max of `|f(x) + f(-x)|`: zero for an exactly odd field.
    pub fn oddness_defect(&self) -> f64 {
        let r = self.reflected();
        self.values
            .iter()
            .zip(&r.values)
            .fold(0.0, |m, (a, b)| m.max((a + b).abs()))
    }
}
