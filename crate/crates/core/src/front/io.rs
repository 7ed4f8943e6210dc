use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{FrontProfile, HypothesisReport};
use crate::error::{Error, Result};
use crate::spectral::io::{read_columns, write_columns};
use crate::spectral::{Field, Grid};
use crate::symbol::{MultiplierSpec, Preset};

/// JSON sidecar stored next to a profile CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontMeta {
    pub operator: String,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    pub method: String,
    pub n: usize,
    pub length: f64,
    pub endpoints: (f64, f64),
    pub residual_sup: f64,
    pub box_residual: f64,
    pub hypothesis: HypothesisReport,
}

impl FrontMeta {
    pub fn of(front: &FrontProfile) -> Self {
        let op = front.operator();
        Self {
            operator: op.expr().source().to_string(),
            label: op.label().to_string(),
            preset: op.preset().cloned(),
            method: front.method().to_string(),
            n: front.grid().n(),
            length: front.grid().length(),
            endpoints: front.endpoints(),
            residual_sup: front.residual_sup(),
            box_residual: front.box_residual(),
            hypothesis: front.hypothesis().clone(),
        }
    }

    pub fn operator_spec(&self) -> Result<MultiplierSpec> {
        match &self.preset {
            Some(p) => p.spec(),
            None => MultiplierSpec::parse(&self.operator),
        }
    }
}

/// Path of the JSON sidecar belonging to a profile CSV.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

/// Writes `x,phi,phi_prime` to `csv` and the metadata to its sidecar.
pub fn save_front(front: &FrontProfile, csv: &Path) -> Result<()> {
    write_columns(
        csv,
        &["x", "phi", "phi_prime"],
        &[front.grid().x(), front.phi().values(), front.phi_prime().values()],
    )?;
    let meta = FrontMeta::of(front);
    std::fs::write(sidecar_path(csv), serde_json::to_string_pretty(&meta)?)?;
    Ok(())
}

/// Reloads a profile saved by [`save_front`].
pub fn load_front(csv: &Path) -> Result<FrontProfile> {
    let side = sidecar_path(csv);
    let meta: FrontMeta = serde_json::from_str(&std::fs::read_to_string(&side).map_err(|e| {
        Error::Missing(format!("{}: {e}", side.display()))
    })?)?;
    let (names, cols) = read_columns(csv)?;
    let phi_col = names
        .iter()
        .position(|n| n == "phi")
        .ok_or_else(|| Error::Format(format!("{}: no phi column", csv.display())))?;
    let grid = Grid::new(meta.n, meta.length)?;
    let phi = Field::new(&grid, cols[phi_col].clone())?;
    let spec = meta.operator_spec()?;
    FrontProfile::from_samples(phi, &spec, meta.method.clone())
}
