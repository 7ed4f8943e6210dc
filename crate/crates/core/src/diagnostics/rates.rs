use serde::{Deserialize, Serialize};

use super::NormSeries;
use crate::error::{Error, Result};

pub const MIN_FIT_SAMPLES: usize = 8;

/// Least-squares fit of `norm ~ A (ln t)^beta t^exponent`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub window: (f64, f64),
    pub exponent: f64,
    pub log_correction: f64,
    pub prefactor: f64,
    pub r_squared: f64,
    pub samples: usize,
    /// Slack of the `L^q`, `1 < q < 2` comparisons.
    pub delta: f64,
}

/// Default window `[T/4, T]` for a series ending at `T`.
pub fn default_window(series: &NormSeries) -> Result<(f64, f64)> {
    let t = series
        .records
        .last()
        .ok_or_else(|| Error::SeriesTooShort("empty series".into()))?
        .t;
    Ok((0.25 * t, t))
}

/// Fits `ln y - beta ln ln t` against `ln t` over the samples with `t` in
/// `window`; the slope is the exponent.
pub fn fit_rate(times: &[f64], values: &[f64], window: (f64, f64), beta: f64) -> Result<RateFit> {
    let (t0, t1) = window;
    if times.len() != values.len() {
        return Err(Error::InvalidParameter("times and values differ in length".into()));
    }
    if !(t0 > 0.0 && t1 > t0) {
        return Err(Error::Window(format!("need 0 < t_min < t_max, got [{t0}, {t1}]")));
    }
    let (first, last) = match (times.first(), times.last()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => return Err(Error::SeriesTooShort("empty series".into())),
    };
    let eps = 1e-9 * last.abs().max(1.0);
    if t0 < first - eps || t1 > last + eps {
        return Err(Error::Window(format!(
            "[{t0}, {t1}] is not inside the series range [{first}, {last}]"
        )));
    }
    if beta != 0.0 && t0 < 2.0 {
        return Err(Error::Window(format!(
            "log-corrected fits need t_min >= 2, got {t0}"
        )));
    }
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(t, _)| **t >= t0 && **t <= t1)
        .map(|(t, v)| (*t, *v))
        .collect();
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(Error::SeriesTooShort(format!(
            "{} samples in [{t0}, {t1}], need {MIN_FIT_SAMPLES}",
            pts.len()
        )));
    }
    if let Some((t, v)) = pts.iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidParameter(format!(
            "nonpositive value {v} at t = {t} in the fitting window"
        )));
    }
    let xs: Vec<f64> = pts.iter().map(|(t, _)| t.ln()).collect();
    let ys: Vec<f64> = pts
        .iter()
        .map(|(t, v)| v.ln() - if beta != 0.0 { beta * t.ln().ln() } else { 0.0 })
        .collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    Ok(RateFit {
        window,
        exponent: slope,
        log_correction: beta,
        prefactor: intercept.exp(),
        r_squared: if syy > 0.0 { 1.0 - sse / syy } else { 1.0 },
        samples: pts.len(),
        delta: 0.0,
    })
}

/// [`fit_rate`] on a named series column.
pub fn fit_series(series: &NormSeries, column: &str, window: (f64, f64), beta: f64) -> Result<RateFit> {
    fit_rate(&series.times(), &series.column(column)?, window, beta)
}
