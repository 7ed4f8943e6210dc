use std::fmt;

use serde::{Deserialize, Serialize};

use super::rates::fit_rate;
use super::NormSeries;
use crate::error::{Error, Result};

/// Envelope ratio accepted as "bounded".
pub const ENVELOPE_FACTOR: f64 = 2.0;
/// Slack used for `L^q`, `1 < q < 2`, in the KdV-Burgers table.
pub const DEFAULT_DELTA: f64 = 0.05;

/// Decay table to compare against.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum TheoremModel {
    /// Localized data for the KdV-Burgers front.
    KdvBurgers { delta: f64 },
    /// Odd data for a fractional operator; rates carry `ln t` corrections.
    FractionalOdd,
}

/// A tracked quantity: `||v||_p` or `||v'||_2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Quantity {
    Norm(f64),
    Derivative,
}

impl Quantity {
    pub fn column(self) -> String {
        match self {
            Quantity::Norm(p) if p == 1.0 => "l1".into(),
            Quantity::Norm(p) if p == 2.0 => "l2".into(),
            Quantity::Norm(p) if p.is_infinite() => "linf".into(),
            Quantity::Norm(p) => super::lp_column(p),
            Quantity::Derivative => "dv_l2".into(),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Norm(p) if p.is_infinite() => write!(f, "||v||_inf"),
            Quantity::Norm(p) => write!(f, "||v||_{p}"),
            Quantity::Derivative => write!(f, "||v'||_2"),
        }
    }
}

impl TheoremModel {
    /// Predicted decay `(rate, beta)`: the norm is bounded by
    /// `C (ln t)^beta t^{-rate}`.
    pub fn predicted(&self, q: Quantity) -> Option<(f64, f64)> {
        match (self, q) {
            (TheoremModel::KdvBurgers { delta }, Quantity::Norm(p)) => {
                if p > 1.0 && p < 2.0 {
                    Some((1.0 - 1.0 / p - delta, 0.0))
                } else if p >= 2.0 {
                    Some((1.0 / p, 0.0))
                } else {
                    None
                }
            }
            (TheoremModel::KdvBurgers { .. }, Quantity::Derivative) => None,
            (TheoremModel::FractionalOdd, Quantity::Norm(p)) => {
                let r = if p > 1.0 && p <= 2.0 {
                    (1.0 - 1.0 / p) / 2.0
                } else if p > 2.0 {
                    7.0 / 24.0 - 1.0 / (12.0 * p)
                } else {
                    return None;
                };
                Some((r, r))
            }
            (TheoremModel::FractionalOdd, Quantity::Derivative) => Some((1.0 / 3.0, 1.0 / 3.0)),
        }
    }

    /// Quantities every comparison must include.
    pub fn required(&self) -> Vec<Quantity> {
        match self {
            TheoremModel::KdvBurgers { .. } => vec![Quantity::Norm(2.0)],
            TheoremModel::FractionalOdd => vec![Quantity::Norm(2.0), Quantity::Derivative],
        }
    }

    /// Quantities of `series` that this model makes a prediction for.
    pub fn quantities(&self, series: &NormSeries) -> Vec<Quantity> {
        let mut ps = vec![2.0];
        ps.extend(series.p_list.iter().copied());
        ps.push(f64::INFINITY);
        ps.into_iter()
            .map(Quantity::Norm)
            .chain([Quantity::Derivative])
            .filter(|q| self.predicted(*q).is_some())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub quantity: String,
    pub column: String,
    pub predicted_rate: f64,
    pub beta: f64,
    /// Fitted exponent (reported as data; `None` if the fit failed).
    pub fitted_exponent: Option<f64>,
    pub r_squared: Option<f64>,
    pub window: (f64, f64),
    /// `norm t^rate (ln t)^-beta` at the window start.
    pub envelope_start: f64,
    pub envelope_sup: f64,
    pub ratio: f64,
    pub satisfied: bool,
}

fn envelope(t: f64, y: f64, rate: f64, beta: f64) -> f64 {
    let e = y * t.powf(rate);
    if beta != 0.0 {
        e * t.ln().powf(-beta)
    } else {
        e
    }
}

/// Envelope verdict for one quantity over `window`.
pub fn envelope_verdict(
    series: &NormSeries,
    q: Quantity,
    rate: f64,
    beta: f64,
    window: (f64, f64),
) -> Result<Verdict> {
    let (t0, t1) = window;
    if beta != 0.0 && t0 < 2.0 {
        return Err(Error::Window(format!("log-corrected envelopes need t >= 2, got {t0}")));
    }
    let column = q.column();
    let y = series.column(&column)?;
    let t = series.times();
    let idx: Vec<usize> = (0..t.len()).filter(|&i| t[i] >= t0 && t[i] <= t1).collect();
    let Some(&start) = idx.first() else {
        return Err(Error::Window(format!("no samples in [{t0}, {t1}]")));
    };
    let e0 = envelope(t[start], y[start], rate, beta);
    let sup = idx
        .iter()
        .map(|&i| envelope(t[i], y[i], rate, beta))
        .fold(0.0f64, f64::max);
    let ratio = if e0 > 0.0 { sup / e0 } else if sup > 0.0 { f64::INFINITY } else { 0.0 };
    let fit = fit_rate(&t, &y, window, beta).ok();
    Ok(Verdict {
        quantity: q.to_string(),
        column,
        predicted_rate: rate,
        beta,
        fitted_exponent: fit.as_ref().map(|f| f.exponent),
        r_squared: fit.as_ref().map(|f| f.r_squared),
        window,
        envelope_start: e0,
        envelope_sup: sup,
        ratio,
        satisfied: ratio <= ENVELOPE_FACTOR,
    })
}

/// Envelope verdicts for every quantity the model predicts and the series
/// records. Fails when a required quantity is missing.
pub fn compare_to_theorem(series: &NormSeries, model: &TheoremModel, window: (f64, f64)) -> Result<Vec<Verdict>> {
    for q in model.required() {
        series
            .column(&q.column())
            .map_err(|_| Error::Missing(format!("series lacks {q} required by the comparison")))?;
    }
    model
        .quantities(series)
        .into_iter()
        .map(|q| {
            let (rate, beta) = model.predicted(q).expect("filtered");
            envelope_verdict(series, q, rate, beta, window)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct L1Contraction {
    /// `max_t ||v(t)||_1 / ||v(0)||_1`.
    pub worst_ratio: f64,
    pub passed: bool,
}

/// `||v(t)||_1 <= ||v(0)||_1 (1 + slack)` along the series.
pub fn l1_contraction(series: &NormSeries, slack: f64) -> Result<L1Contraction> {
    let l1 = series.column("l1")?;
    let first = *l1.first().ok_or_else(|| Error::SeriesTooShort("empty series".into()))?;
    let worst = l1.iter().fold(0.0f64, |m, v| m.max(*v));
    let worst_ratio = if first > 0.0 { worst / first } else if worst > 0.0 { f64::INFINITY } else { 1.0 };
    Ok(L1Contraction {
        worst_ratio,
        passed: worst_ratio <= 1.0 + slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kdvb_table() {
        let m = TheoremModel::KdvBurgers { delta: DEFAULT_DELTA };
        assert_eq!(m.predicted(Quantity::Norm(2.0)), Some((0.5, 0.0)));
        assert_eq!(m.predicted(Quantity::Norm(4.0)), Some((0.25, 0.0)));
        let (r, _) = m.predicted(Quantity::Norm(1.5)).unwrap();
        assert!((r - (1.0 / 3.0 - 0.05)).abs() < 1e-15);
        assert_eq!(m.predicted(Quantity::Norm(1.0)), None);
    }

    #[test]
    fn fractional_table() {
        let m = TheoremModel::FractionalOdd;
        let (r, b) = m.predicted(Quantity::Norm(f64::INFINITY)).unwrap();
        assert!((r - 7.0 / 24.0).abs() < 1e-15 && r == b);
        let (r2, _) = m.predicted(Quantity::Norm(2.0)).unwrap();
        assert_eq!(r2, 0.25);
        // the two branches agree at p = 2
        assert!((7.0 / 24.0 - 1.0 / 24.0 - r2).abs() < 1e-15);
        assert_eq!(m.predicted(Quantity::Derivative), Some((1.0 / 3.0, 1.0 / 3.0)));
    }
}
