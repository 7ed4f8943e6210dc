use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::Field;
use super::grid::Grid;
use crate::error::{Error, Result};
use crate::symbol::MultiplierSpec;

/// Relative tolerance below which negative kernel values count as roundoff.
pub const KERNEL_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelReport {
    pub t: f64,
    pub min: f64,
    pub max: f64,
    /// Quadrature integral of the kernel; 1 for `l(0) = 0`.
    pub integral: f64,
    /// `min >= -1e-10 max`.
    pub positive: bool,
}

/// Kernel of `e^{t L}` centred at `x = 0`, sampled on the grid.
pub fn semigroup_kernel(grid: &Grid, symbol: &[Complex64], t: f64) -> Result<Field> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("time must be positive, got {t}")));
    }
    if symbol.len() != grid.n() {
        return Err(Error::InvalidGrid("symbol length does not match grid".into()));
    }
    // e^{i k x_j} = (-1)^m e^{2 pi i j m / N} since x_0 = -L/2
    let spectrum: Vec<Complex64> = symbol
        .iter()
        .enumerate()
        .map(|(m, l)| {
            let l = if m == grid.nyquist() { Complex64::new(l.re, 0.0) } else { *l };
            let sign = if grid.mode(m) % 2 == 0 { 1.0 } else { -1.0 };
            (t * l).exp() * sign
        })
        .collect();
    let inv_h = 1.0 / grid.h();
    Ok(Field::from_raw(
        grid,
        grid.ifft(spectrum).into_iter().map(|c| c.re * inv_h).collect(),
    ))
}

fn report(kernel: &Field, t: f64) -> KernelReport {
    let v = kernel.values();
    let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let integral = kernel.grid().h() * v.iter().sum::<f64>();
    KernelReport {
        t,
        min,
        max,
        integral,
        positive: min >= -KERNEL_TOL * max.abs(),
    }
}

/// Positivity report for the kernel of `e^{t L}` with `L` given by `spec`.
pub fn kernel_positivity_check(spec: &MultiplierSpec, grid: &Grid, t: f64) -> Result<KernelReport> {
    let symbol = spec.eval(grid.wavenumbers())?;
    Ok(report(&semigroup_kernel(grid, &symbol, t)?, t))
}

/// Positivity report for `e^{-t (-d^2)^alpha}`.
pub fn fractional_kernel_check(alpha: f64, grid: &Grid, t: f64) -> Result<KernelReport> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    let symbol: Vec<Complex64> = grid
        .wavenumbers()
        .iter()
        .map(|k| Complex64::new(-k.abs().powf(2.0 * alpha), 0.0))
        .collect();
    Ok(report(&semigroup_kernel(grid, &symbol, t)?, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn heat_kernel() {
        let g = Grid::new(1024, 80.0).unwrap();
        let r = fractional_kernel_check(1.0, &g, 1.0).unwrap();
        assert!(r.min >= -1e-12);
        assert!((r.integral - 1.0).abs() < 1e-8);
        let k = semigroup_kernel(&g, &vec![Complex64::new(0.0, 0.0); g.n()], 1.0);
        assert!(k.is_ok());
    }

    #[test]
    fn poisson_kernel_closed_form() {
        let g = Grid::new(1024, 80.0).unwrap();
        let sym: Vec<Complex64> =
            g.wavenumbers().iter().map(|k| Complex64::new(-k.abs(), 0.0)).collect();
        let p = semigroup_kernel(&g, &sym, 1.0).unwrap();
        // periodized Poisson kernel: sum over images of t / (pi (t^2 + x^2))
        for (v, &x) in p.values().iter().zip(g.x()).step_by(37) {
            let mut exact = 0.0;
            for img in -20000i64..=20000 {
                let y = x + img as f64 * g.length();
                exact += 1.0 / (PI * (1.0 + y * y));
            }
            assert!((v - exact).abs() < 1e-6, "x = {x}: {v} vs {exact}");
        }
        assert!(fractional_kernel_check(0.5, &g, 1.0).unwrap().positive);
    }

    #[test]
    fn super_diffusive_kernel_changes_sign() {
        let g = Grid::new(1024, 80.0).unwrap();
        let r = fractional_kernel_check(1.5, &g, 1.0).unwrap();
        assert!(r.min < 0.0 && !r.positive);
    }
}
