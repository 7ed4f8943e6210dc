//! Exact solution of the viscous Burgers equation `u_t + u u_x = u_xx`
//! through `u = -2 w_x / w`, with `w` solving the heat equation.

use crate::error::{Error, Result};
use crate::spectral::{upsample, Field, Grid};
use crate::Complex64;

/// `ln(1e-18)`: integrand values below this fraction of the peak are dropped.
const LOG_CUTOFF: f64 = -41.45;
const MAX_LEVELS: usize = 8;
const REL_TOL: f64 = 1e-12;

/// `G(y) = int_0^y u0` for heteroclinic data sampled on a box, written as
/// `c y - 2a ln cosh(y/2)` plus the spectral primitive of the decaying rest.
struct Primitive {
    grid: Grid,
    a: f64,
    c: f64,
    /// Primitive of the remainder at the refined nodes.
    inner: Vec<f64>,
    left: f64,
    right: f64,
}

fn ln_cosh(x: f64) -> f64 {
    let x = x.abs();
    x + (-2.0 * x).exp().ln_1p() - std::f64::consts::LN_2
}

impl Primitive {
    fn new(u0: &Field, level: usize) -> Result<Self> {
        let g = u0.grid();
        let n = g.n();
        let (x0, x1) = (g.x()[0], g.x()[n - 1]);
        let (um, up) = (u0.values()[0], u0.values()[n - 1]);
        let (t0, t1) = ((x0 / 2.0).tanh(), (x1 / 2.0).tanh());
        // r(x) = c - a tanh(x/2) matches u0 at the first and last node
        let a = (up - um) / (t0 - t1);
        let c = um + a * t0;
        let w = Field::from_fn(g, |x| c - a * (x / 2.0).tanh());
        let w = u0.sub(&w)?;
        let w = if level > 0 { upsample(&w, 1 << level)? } else { w };
        let grid = w.grid().clone();
        let mut s = grid.fft(w.values());
        let mean = s[0].re / grid.n() as f64;
        s[0] = Complex64::new(0.0, 0.0);
        let ny = grid.nyquist();
        s[ny] = Complex64::new(0.0, 0.0);
        for (v, k) in s.iter_mut().zip(grid.wavenumbers()).skip(1) {
            *v /= Complex64::new(0.0, *k);
        }
        let p = grid.ifft_real(s);
        // P(0) sits at the centre node of the grid
        let p0 = p[grid.n() / 2];
        let half = grid.length() / 2.0;
        let inner: Vec<f64> = grid.x().iter().zip(&p).map(|(x, p)| mean * x + p - p0).collect();
        Ok(Self {
            a,
            c,
            left: -mean * half + p[0] - p0,
            right: mean * half + p[0] - p0,
            inner,
            grid,
        })
    }

    fn reference(&self, y: f64) -> f64 {
        self.c * y - 2.0 * self.a * ln_cosh(y / 2.0)
    }

    /// `G` at mesh node `j` of the refined spacing, counted from `-L/2`.
    fn at(&self, j: i64) -> f64 {
        let h = self.grid.h();
        let y = -self.grid.length() / 2.0 + j as f64 * h;
        let n = self.grid.n() as i64;
        let w = if j < 0 {
            self.left
        } else if j >= n {
            self.right
        } else {
            self.inner[j as usize]
        };
        self.reference(y) + w
    }
}

fn evaluate(prim: &Primitive, t: f64, points: &[f64], reach: f64) -> Result<Vec<f64>> {
    let h = prim.grid.h();
    let half = prim.grid.length() / 2.0;
    let lo = points.iter().fold(f64::INFINITY, |m, p| m.min(*p)) - reach;
    let hi = points.iter().fold(f64::NEG_INFINITY, |m, p| m.max(*p)) + reach;
    let j0 = ((lo + half) / h).floor() as i64;
    let j1 = ((hi + half) / h).ceil() as i64;
    let nodes: Vec<(f64, f64)> = (j0..=j1)
        .map(|j| (-half + j as f64 * h, -0.5 * prim.at(j)))
        .collect();
    let mut out = Vec::with_capacity(points.len());
    let mut expo = vec![0.0; nodes.len()];
    for &x in points {
        let mut emax = f64::NEG_INFINITY;
        for (e, (y, g)) in expo.iter_mut().zip(&nodes) {
            *e = g - (x - y) * (x - y) / (4.0 * t);
            emax = emax.max(*e);
        }
        if expo[0] - emax > LOG_CUTOFF || expo[expo.len() - 1] - emax > LOG_CUTOFF {
            return Err(Error::Quadrature(format!(
                "integrand not negligible at the truncation ends for x = {x}"
            )));
        }
        let (mut num, mut den) = (0.0, 0.0);
        for (e, (y, _)) in expo.iter().zip(&nodes) {
            let d = e - emax;
            if d > LOG_CUTOFF {
                let q = d.exp();
                num += (x - y) / t * q;
                den += q;
            }
        }
        out.push(num / den);
    }
    Ok(out)
}

/// `u(t, x)` for Burgers data `u0` (heteroclinic, sampled on a box; it is
/// continued beyond the box by its `tanh`-shaped far field).
///
/// The integrals over `y` use the trapezoid rule on the grid refined by
/// powers of two until successive levels agree to `1e-12`.
pub fn cole_hopf_exact(u0: &Field, t: f64, points: &[f64]) -> Result<Vec<f64>> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("time must be positive, got {t}")));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidParameter("query points must be finite".into()));
    }
    if points.is_empty() {
        return Ok(Vec::new());
    }
    let umax = u0.max_abs();
    let reach = t * umax + 2.0 * (-LOG_CUTOFF * 4.0 * t).sqrt() + 1.0;
    let mut prev: Option<Vec<f64>> = None;
    for level in 0..=MAX_LEVELS {
        let cur = evaluate(&Primitive::new(u0, level)?, t, points, reach)?;
        if let Some(p) = &prev {
            let scale = cur.iter().fold(1e-300f64, |m, v| m.max(v.abs()));
            let diff = cur.iter().zip(p).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            if diff <= REL_TOL * scale.max(1.0) {
                return Ok(cur);
            }
        }
        prev = Some(cur);
    }
    Err(Error::Quadrature(format!(
        "no agreement after {MAX_LEVELS} grid refinements at t = {t}"
    )))
}
