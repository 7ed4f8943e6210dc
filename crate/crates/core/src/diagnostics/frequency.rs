use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::PerturbationState;
use crate::spectral::{band_measure, band_project, l2_norm, lp_norm};

/// Low/high frequency split `I = I_{<eps} + I_{>eps}` of `||v||_2^2`,
/// with the band `|k| < 2 pi eps`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencySplit {
    pub eps_freq: f64,
    pub times: Vec<f64>,
    pub low: Vec<f64>,
    pub high: Vec<f64>,
    pub total: Vec<f64>,
    /// `||v||_1^2` times the measure of the band.
    pub bernstein_bound: Vec<f64>,
    pub bernstein_violations: usize,
    /// Largest relative defect of `I_low + I_high = I`.
    pub parseval_defect: f64,
    /// Root of `exp(-C1 eps^2 t) = eps` per time, when `C1` is given.
    pub eps_opt: Option<Vec<f64>>,
}

pub fn frequency_split_series(
    snapshots: &[PerturbationState],
    eps_freq: f64,
    c1: Option<f64>,
) -> Result<FrequencySplit> {
    if snapshots.is_empty() {
        return Err(Error::Missing("no snapshots for the frequency split".into()));
    }
    if !(eps_freq > 0.0 && eps_freq.is_finite()) {
        return Err(Error::InvalidParameter(format!("band edge must be positive, got {eps_freq}")));
    }
    let measure = band_measure(snapshots[0].v.grid(), eps_freq);
    let mut s = FrequencySplit {
        eps_freq,
        times: Vec::new(),
        low: Vec::new(),
        high: Vec::new(),
        total: Vec::new(),
        bernstein_bound: Vec::new(),
        bernstein_violations: 0,
        parseval_defect: 0.0,
        eps_opt: None,
    };
    for st in snapshots {
        let (lo, hi) = band_project(&st.v, eps_freq);
        let (il, ih, i) = (l2_norm(&lo).powi(2), l2_norm(&hi).powi(2), l2_norm(&st.v).powi(2));
        let bound = measure * lp_norm(&st.v, 1.0)?.powi(2);
        if il > bound * (1.0 + 1e-12) {
            s.bernstein_violations += 1;
        }
        if i > 0.0 {
            s.parseval_defect = s.parseval_defect.max((il + ih - i).abs() / i);
        }
        s.times.push(st.t);
        s.low.push(il);
        s.high.push(ih);
        s.total.push(i);
        s.bernstein_bound.push(bound);
    }
    if let Some(c1) = c1 {
        s.eps_opt = Some(s.times.iter().map(|&t| eps_opt(t, c1)).collect::<Result<_>>()?);
    }
    Ok(s)
}

impl FrequencySplit {
    /// Times where `I_high(t) > I(0) exp(-c eps^2 t) + max_{s <= t} I_low(s)`.
    pub fn decay_violations(&self, c: f64) -> usize {
        let i0 = self.total.first().copied().unwrap_or(0.0);
        let mut low_max = 0.0f64;
        let mut n = 0;
        for j in 0..self.times.len() {
            low_max = low_max.max(self.low[j]);
            let bound = i0 * (-c * self.eps_freq.powi(2) * self.times[j]).exp() + low_max;
            if self.high[j] > bound * (1.0 + 1e-12) + 1e-300 {
                n += 1;
            }
        }
        n
    }
}

/// Solves `exp(-c1 eps^2 t) = eps` for `eps` in `(0, 1]`; the root is 1
/// at `t = 0`.
pub fn eps_opt(t: f64, c1: f64) -> Result<f64> {
    if !(t >= 0.0 && c1 > 0.0 && t.is_finite() && c1.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "eps_opt needs t >= 0 and C1 > 0, got {t} and {c1}"
        )));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    // g(s) = -c1 t e^{2s} - s with s = ln eps is strictly decreasing
    let g = |s: f64| -c1 * t * (2.0 * s).exp() - s;
    let (mut a, mut b) = (-1.0, 0.0);
    while g(a) < 0.0 {
        a *= 2.0;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if g(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
        if b - a < 1e-15 {
            break;
        }
    }
    Ok((0.5 * (a + b)).exp())
}
