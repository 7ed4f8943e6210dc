use serde::{Deserialize, Serialize};

use super::NormSeries;
use crate::error::{Error, Result};

/// Recorded intervals needed for an energy fit.
pub const MIN_ENERGY_POINTS: usize = 10;
const DV_FLOOR: f64 = 1e-12;
const GROWTH_SLACK: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyCheck {
    /// Largest `C` with `d/dt ||v||_2^2 <= -C ||v'||_2^2` on every interval.
    pub c_fit: f64,
    /// Intervals where `||v||_2^2` grew by more than `1e-10 ||v||_2^2`.
    pub violations: usize,
    pub intervals: usize,
}

/// Fits the constant of the energy inequality between consecutive records.
///
/// The dissipation over an interval is the increment of the accumulated
/// `int ||v'||^2 dt` when the series carries it, otherwise the trapezoid
/// rule on the recorded `||v'||_2`.
pub fn check_energy_inequality(series: &NormSeries) -> Result<EnergyCheck> {
    let r = &series.records;
    let usable = r.iter().filter(|x| x.dv_l2 > DV_FLOOR).count();
    if usable < MIN_ENERGY_POINTS {
        return Err(Error::SeriesTooShort(format!(
            "{usable} records with ||v'||_2 > {DV_FLOOR:e}, need {MIN_ENERGY_POINTS}"
        )));
    }
    let accumulated = r.last().is_some_and(|x| x.int_dv2 > 0.0);
    let mut c_fit = f64::INFINITY;
    let (mut violations, mut intervals) = (0, 0);
    for w in r.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.dv_l2 <= DV_FLOOR || b.dv_l2 <= DV_FLOOR {
            continue;
        }
        let diss = if accumulated {
            b.int_dv2 - a.int_dv2
        } else {
            0.5 * (b.t - a.t) * (a.dv_l2.powi(2) + b.dv_l2.powi(2))
        };
        if diss <= 0.0 {
            continue;
        }
        let d = b.l2 * b.l2 - a.l2 * a.l2;
        if d > GROWTH_SLACK * a.l2 * a.l2 {
            violations += 1;
        }
        intervals += 1;
        c_fit = c_fit.min(-d / diss);
    }
    if intervals == 0 {
        return Err(Error::SeriesTooShort("no interval with positive dissipation".into()));
    }
    Ok(EnergyCheck {
        c_fit,
        violations,
        intervals,
    })
}
