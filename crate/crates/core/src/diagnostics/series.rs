use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::io::{read_columns, write_columns};
use crate::spectral::{derivative, l2_norm, lp_norm, weighted_l2, Field};

/// Norms of the perturbation at one output time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormRecord {
    pub t: f64,
    pub x0: f64,
    pub x0_dot: f64,
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
    /// `||v'||_2`.
    pub dv_l2: f64,
    /// `int v^2 |x| dx`.
    pub weighted: f64,
    /// Running `sup_{s <= t} ||v(s)||_inf`.
    pub m_t: f64,
    /// `int_0^t ||v'||_2^2 ds`, accumulated every step.
    pub int_dv2: f64,
    /// `int_0^t |x0'|^2 ds`.
    pub int_x0dot2: f64,
    /// `int_0^t ||v||_2^2 ds`.
    pub int_l2sq: f64,
    /// `||v||_p` for the series p-list.
    pub lp: Vec<f64>,
}

impl NormRecord {
    /// Instantaneous norms of `v`; running and cumulative entries are left
    /// at zero.
    pub fn measure(v: &Field, t: f64, x0: f64, x0_dot: f64, p_list: &[f64]) -> Result<Self> {
        let linf = v.max_abs();
        Ok(Self {
            t,
            x0,
            x0_dot,
            l1: lp_norm(v, 1.0)?,
            l2: l2_norm(v),
            linf,
            dv_l2: l2_norm(&derivative(v, 1)),
            weighted: weighted_l2(v, 0.0).powi(2),
            m_t: linf,
            int_dv2: 0.0,
            int_x0dot2: 0.0,
            int_l2sq: 0.0,
            lp: p_list.iter().map(|&p| lp_norm(v, p)).collect::<Result<_>>()?,
        })
    }

    fn is_finite(&self) -> bool {
        [
            self.t, self.x0, self.x0_dot, self.l1, self.l2, self.linf, self.dv_l2, self.weighted,
            self.m_t, self.int_dv2, self.int_x0dot2, self.int_l2sq,
        ]
        .iter()
        .chain(&self.lp)
        .all(|v| v.is_finite())
    }
}

const FIXED: [&str; 12] = [
    "t", "x0", "x0_dot", "l1", "l2", "linf", "dv_l2", "weighted", "m_t", "int_dv2", "int_x0dot2",
    "int_l2sq",
];

/// Column name for `||v||_p`.
pub fn lp_column(p: f64) -> String {
    format!("lp_{p}")
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NormSeries {
    pub p_list: Vec<f64>,
    pub records: Vec<NormRecord>,
}

impl NormSeries {
    pub fn new(p_list: Vec<f64>) -> Result<Self> {
        if let Some(p) = p_list.iter().find(|p| !(p.is_finite() && **p >= 1.0)) {
            return Err(Error::InvalidParameter(format!(
                "series exponents must be finite and >= 1, got {p}"
            )));
        }
        Ok(Self {
            p_list,
            records: Vec::new(),
        })
    }

    pub fn push(&mut self, r: NormRecord) -> Result<()> {
        if !r.is_finite() {
            return Err(Error::NonFinite { t: r.t });
        }
        if r.lp.len() != self.p_list.len() {
            return Err(Error::InvalidParameter("record does not match the p-list".into()));
        }
        if let Some(last) = self.records.last() {
            if r.t <= last.t {
                return Err(Error::InvalidParameter(format!(
                    "series times must increase ({} after {})",
                    r.t, last.t
                )));
            }
        }
        self.records.push(r);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    pub fn column_names(&self) -> Vec<String> {
        FIXED
            .iter()
            .map(|s| s.to_string())
            .chain(self.p_list.iter().map(|&p| lp_column(p)))
            .collect()
    }

    fn value(r: &NormRecord, i: usize) -> f64 {
        match i {
            0 => r.t,
            1 => r.x0,
            2 => r.x0_dot,
            3 => r.l1,
            4 => r.l2,
            5 => r.linf,
            6 => r.dv_l2,
            7 => r.weighted,
            8 => r.m_t,
            9 => r.int_dv2,
            10 => r.int_x0dot2,
            11 => r.int_l2sq,
            _ => r.lp[i - FIXED.len()],
        }
    }

    /// Values of a named column; `l2`, `lp_4`, `linf`, ...
    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let i = self
            .column_names()
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::Missing(format!("series has no column `{name}`")))?;
        Ok(self.records.iter().map(|r| Self::value(r, i)).collect())
    }

    /// Column for `||v||_p`, mapping `p = 1, 2, inf` to the fixed columns.
    pub fn norm_column(&self, p: f64) -> Result<Vec<f64>> {
        match p {
            p if p == 1.0 => self.column("l1"),
            p if p == 2.0 => self.column("l2"),
            p if p.is_infinite() => self.column("linf"),
            p => self.column(&lp_column(p)),
        }
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let names = self.column_names();
        let cols: Vec<Vec<f64>> = (0..names.len())
            .map(|i| self.records.iter().map(|r| Self::value(r, i)).collect())
            .collect();
        let headers: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
        write_columns(path, &headers, &refs)
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let (headers, cols) = read_columns(path)?;
        if headers.len() < FIXED.len() || headers[..FIXED.len()] != FIXED {
            return Err(Error::Format(format!("{} is not a norm series", path.display())));
        }
        let p_list = headers[FIXED.len()..]
            .iter()
            .map(|h| {
                h.strip_prefix("lp_")
                    .and_then(|p| p.parse::<f64>().ok())
                    .ok_or_else(|| Error::Format(format!("bad series column `{h}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut s = NormSeries::new(p_list)?;
        let rows = cols.first().map_or(0, |c| c.len());
        for j in 0..rows {
            let c = |i: usize| cols[i][j];
            s.push(NormRecord {
                t: c(0),
                x0: c(1),
                x0_dot: c(2),
                l1: c(3),
                l2: c(4),
                linf: c(5),
                dv_l2: c(6),
                weighted: c(7),
                m_t: c(8),
                int_dv2: c(9),
                int_x0dot2: c(10),
                int_l2sq: c(11),
                lp: (FIXED.len()..headers.len()).map(c).collect(),
            })?;
        }
        Ok(s)
    }
}
