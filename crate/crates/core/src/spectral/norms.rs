use super::field::Field;
use crate::error::{Error, Result};

/// Sum of `a_j` with the terms for `x_j` and `-x_j` added first, so that
/// odd integrands cancel exactly.
fn symmetric_sum(n: usize, a: impl Fn(usize) -> f64) -> f64 {
    let mut s = a(0) + a(n / 2);
    for j in 1..n / 2 {
        s += a(j) + a(n - j);
    }
    s
}

/// Quadrature inner product `h sum f_j g_j`.
pub fn inner(f: &Field, g: &Field) -> Result<f64> {
    f.same_grid(g)?;
    let (a, b) = (f.values(), g.values());
    Ok(f.grid().h() * symmetric_sum(a.len(), |j| a[j] * b[j]))
}

pub fn l2_norm(f: &Field) -> f64 {
    let v = f.values();
    (f.grid().h() * v.iter().map(|x| x * x).sum::<f64>()).sqrt()
}

/// Rectangle-rule `L^p` norm; `p = f64::INFINITY` gives the max norm.
pub fn lp_norm(f: &Field, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter(format!("norm exponent must be >= 1, got {p}")));
    }
    let m = f.max_abs();
    if p.is_infinite() {
        return Ok(m);
    }
    if m == 0.0 {
        return Ok(0.0);
    }
    if p == 2.0 {
        return Ok(l2_norm(f));
    }
    let s: f64 = f.values().iter().map(|v| (v.abs() / m).powf(p)).sum();
    Ok(m * (f.grid().h() * s).powf(1.0 / p))
}

/// `(h sum f_j^2 |x_j - a|)^{1/2}`.
pub fn weighted_l2(f: &Field, center: f64) -> f64 {
    let h = f.grid().h();
    let s: f64 = f
        .values()
        .iter()
        .zip(f.grid().x())
        .map(|(v, x)| v * v * (x - center).abs())
        .sum();
    (h * s).sqrt()
}
