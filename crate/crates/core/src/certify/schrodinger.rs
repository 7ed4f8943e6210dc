use serde::{Deserialize, Serialize};

use super::tridiag::SymTridiagonal;
use crate::error::{Error, Result};

/// Minimum number of interior nodes of a discretization.
pub const MIN_NODES: usize = 200;

/// Second-order finite differences for `-(1 - eps) d^2 + V` on nodes
/// `x_i`, `i = 1..M`, spaced `h` apart, with Dirichlet ends.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchrodingerDiscretization {
    pub nodes: Vec<f64>,
    pub potential: Vec<f64>,
    pub h: f64,
    pub half_width: f64,
}

impl SchrodingerDiscretization {
    /// Nodes are the uniformly spaced `xs` with `|x| < half_width`.
    pub fn new(xs: &[f64], potential: &[f64], half_width: f64) -> Result<Self> {
        if xs.len() != potential.len() || xs.len() < 2 {
            return Err(Error::InvalidParameter("nodes and potential differ in length".into()));
        }
        let h = xs[1] - xs[0];
        let (nodes, pot): (Vec<f64>, Vec<f64>) = xs
            .iter()
            .zip(potential)
            .filter(|(x, _)| x.abs() < half_width)
            .map(|(x, v)| (*x, *v))
            .unzip();
        if nodes.len() < MIN_NODES {
            return Err(Error::InvalidParameter(format!(
                "discretization needs at least {MIN_NODES} nodes, got {}",
                nodes.len()
            )));
        }
        Ok(Self {
            nodes,
            potential: pot,
            h,
            half_width,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn matrix(&self, eps: f64) -> Result<SymTridiagonal> {
        if !(0.0..1.0).contains(&eps) {
            return Err(Error::InvalidParameter(format!("eps must lie in [0, 1), got {eps}")));
        }
        let c = (1.0 - eps) / (self.h * self.h);
        let diag = self.potential.iter().map(|v| 2.0 * c + v).collect();
        SymTridiagonal::new(diag, vec![-c; self.len() - 1])
    }
}
