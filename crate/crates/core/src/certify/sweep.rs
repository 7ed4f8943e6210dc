use serde::{Deserialize, Serialize};

use super::{certify_front, CertifyOptions};
use crate::error::Result;
use crate::front::{kdvb_grid, shoot_local_front, ShootingOptions};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    /// Tails are resolved down to `e^{-decades}` inside the box.
    pub decades: f64,
    pub h_max: f64,
    pub certify: CertifyOptions,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            decades: 30.0,
            h_max: 0.08,
            certify: CertifyOptions::default(),
        }
    }
}

/// Certificate summary for one KdV-Burgers front.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub nu: f64,
    pub satisfied: Option<bool>,
    pub min_count: Option<usize>,
    pub argmin_eps: Option<f64>,
    pub counts: Vec<usize>,
    pub all_resolved: bool,
    pub n: usize,
    pub length: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Solves and certifies the front for one value of `nu`. Failures are
/// recorded in the row rather than returned.
pub fn sweep_row(nu: f64, opts: &SweepOptions) -> SweepRow {
    let mut row = SweepRow {
        nu,
        satisfied: None,
        min_count: None,
        argmin_eps: None,
        counts: Vec::new(),
        all_resolved: false,
        n: 0,
        length: 0.0,
        error: None,
    };
    let run = || -> Result<_> {
        let grid = kdvb_grid(nu, opts.decades, opts.h_max)?;
        let front = if nu == 0.0 {
            crate::front::closed_form_burgers(&grid)?
        } else {
            shoot_local_front(nu, &grid, &ShootingOptions::default())?
        };
        Ok((grid, certify_front(&front, &opts.certify)?))
    };
    match run() {
        Ok((grid, cert)) => {
            let (m, e) = cert.min_count();
            row.satisfied = Some(cert.satisfied);
            row.min_count = Some(m);
            row.argmin_eps = Some(e);
            row.counts = cert.counts();
            row.all_resolved = cert.all_resolved;
            row.n = grid.n();
            row.length = grid.length();
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

pub fn sweep_nu(nus: &[f64], opts: &SweepOptions) -> Vec<SweepRow> {
    nus.iter().map(|&nu| sweep_row(nu, opts)).collect()
}

/// Largest `|nu|` among rows whose certificate is satisfied.
pub fn threshold(rows: &[SweepRow]) -> Option<f64> {
    rows.iter()
        .filter(|r| r.satisfied == Some(true))
        .map(|r| r.nu.abs())
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
}
