use num_complex::Complex64;

use super::field::Field;
use super::grid::Grid;
use super::norms::l2_norm;
use crate::error::{Error, Result};
use crate::symbol::MultiplierSpec;

/// Relative tolerance on the imaginary residue of a multiplier applied to a
/// real field.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Symbol values sampled on a grid, ready to be applied in Fourier space.
///
/// The Nyquist slot keeps only the real part of the symbol so that real
/// fields map to real fields.
#[derive(Clone, Debug)]
pub struct Multiplier {
    grid: Grid,
    values: Vec<Complex64>,
}

impl Multiplier {
    /// Wraps symbol values given in FFT order, checking Hermitian symmetry.
    pub fn from_values(grid: &Grid, mut values: Vec<Complex64>) -> Result<Self> {
        let n = grid.n();
        if values.len() != n {
            return Err(Error::InvalidGrid(format!(
                "symbol has {} values, grid has {n}",
                values.len()
            )));
        }
        let mut residue: f64 = values[0].im.abs();
        for m in 1..n / 2 {
            let (a, b) = (values[m], values[n - m]);
            let scale = a.norm().max(b.norm()).max(1.0);
            residue = residue.max((a - b.conj()).norm() / scale);
        }
        if residue > HERMITIAN_TOL {
            return Err(Error::NonHermitian { residue });
        }
        values[n / 2] = Complex64::new(values[n / 2].re, 0.0);
        Ok(Self {
            grid: grid.clone(),
            values,
        })
    }

    pub fn from_spec(spec: &MultiplierSpec, grid: &Grid) -> Result<Self> {
        Self::from_values(grid, spec.eval(grid.wavenumbers())?)
    }

    /// Symbol `(ik)^order`.
    pub fn derivative(grid: &Grid, order: u32) -> Self {
        let values = grid
            .wavenumbers()
            .iter()
            .map(|&k| Complex64::new(0.0, k).powu(order))
            .collect();
        let mut out = Self {
            grid: grid.clone(),
            values,
        };
        let ny = grid.nyquist();
        out.values[ny] = Complex64::new(out.values[ny].re, 0.0);
        out
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn apply_spectrum(&self, spectrum: &mut [Complex64]) {
        for (c, l) in spectrum.iter_mut().zip(&self.values) {
            *c *= l;
        }
    }

    pub fn apply(&self, f: &Field) -> Field {
        let mut s = self.grid.fft(f.values());
        self.apply_spectrum(&mut s);
        Field::from_raw(&self.grid, self.grid.ifft_real(s))
    }
}

/// Applies symbol values (FFT order, see [`Grid`]) to a real field.
///
/// The imaginary part of the result is discarded after checking that it is
/// below `1e-12` relative to the field norms.
pub fn apply_multiplier(f: &Field, symbol_values: &[Complex64]) -> Result<Field> {
    let grid = f.grid();
    if symbol_values.len() != grid.n() {
        return Err(Error::InvalidGrid(format!(
            "symbol has {} values, grid has {}",
            symbol_values.len(),
            grid.n()
        )));
    }
    let mut s = grid.fft(f.values());
    for (m, (c, l)) in s.iter_mut().zip(symbol_values).enumerate() {
        *c *= if m == grid.nyquist() { Complex64::new(l.re, 0.0) } else { *l };
    }
    let out = grid.ifft(s);
    let re = Field::from_raw(grid, out.iter().map(|c| c.re).collect());
    let im = Field::from_raw(grid, out.iter().map(|c| c.im).collect());
    let residue = l2_norm(&im);
    let scale = l2_norm(f).max(l2_norm(&re));
    if residue > HERMITIAN_TOL * scale {
        return Err(Error::NonHermitian {
            residue: residue / scale.max(f64::MIN_POSITIVE),
        });
    }
    Ok(re)
}

/// Spectral derivative of order 1, 2 or 3 (any order is accepted).
pub fn derivative(f: &Field, order: u32) -> Field {
    Multiplier::derivative(f.grid(), order).apply(f)
}

/// Splits `f` into the part with `|xi| < eps_freq` (frequencies in cycles per
/// unit length, so `k = 2 pi xi`) and the remainder.
pub fn band_project(f: &Field, eps_freq: f64) -> (Field, Field) {
    let grid = f.grid();
    let cut = 2.0 * std::f64::consts::PI * eps_freq;
    let mut s = grid.fft(f.values());
    for (c, &k) in s.iter_mut().zip(grid.wavenumbers()) {
        if k.abs() >= cut {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    let low = Field::from_raw(grid, grid.ifft_real(s));
    let high = Field::from_raw(
        grid,
        f.values().iter().zip(low.values()).map(|(a, b)| a - b).collect(),
    );
    (low, high)
}

/// Lebesgue measure of the set of retained frequencies of [`band_project`],
/// counted on the discrete frequency lattice `xi = m / L`.
pub fn band_measure(grid: &Grid, eps_freq: f64) -> f64 {
    let cut = 2.0 * std::f64::consts::PI * eps_freq;
    let count = grid.wavenumbers().iter().filter(|k| k.abs() < cut).count();
    count as f64 / grid.length()
}

/// Two-thirds rule: zeroes every mode with `|m| > N/3`.
pub fn dealias(spectrum: &mut [Complex64]) {
    let n = spectrum.len();
    for (m, c) in spectrum.iter_mut().enumerate() {
        let mode = if m < n / 2 { m } else { n - m };
        if 3 * mode > n {
            *c = Complex64::new(0.0, 0.0);
        }
    }
}

/// Band-limited field (modes `|m| <= N/3` only).
pub fn dealiased(f: &Field) -> Field {
    let mut s = f.grid().fft(f.values());
    dealias(&mut s);
    Field::from_raw(f.grid(), f.grid().ifft_real(s))
}

/// Alias-free projection of the product `f g` onto modes `|m| <= N/3`.
pub fn dealiased_product(f: &Field, g: &Field) -> Result<Field> {
    f.same_grid(g)?;
    let fa = dealiased(f);
    let ga = dealiased(g);
    Ok(dealiased(&fa.mul(&ga)?))
}

/// Band-limited translate `f(x + s)`.
pub fn shift(f: &Field, s: f64) -> Field {
    let grid = f.grid();
    let mut spec = grid.fft(f.values());
    for (m, (c, &k)) in spec.iter_mut().zip(grid.wavenumbers()).enumerate() {
        let phase = if m == grid.nyquist() {
            Complex64::new((k * s).cos(), 0.0)
        } else {
            Complex64::from_polar(1.0, k * s)
        };
        *c *= phase;
    }
    Field::from_raw(grid, grid.ifft_real(spec))
}

/// Trigonometric interpolation of `f` onto a grid `factor` times finer.
pub fn upsample(f: &Field, factor: usize) -> Result<Field> {
    let grid = f.grid();
    let fine = grid.refined(factor)?;
    let n = grid.n();
    let nf = fine.n();
    let s = grid.fft(f.values());
    let mut padded = vec![Complex64::new(0.0, 0.0); nf];
    for m in 0..n / 2 {
        padded[m] = s[m];
    }
    for m in n / 2 + 1..n {
        padded[nf - (n - m)] = s[m];
    }
    let ny = 0.5 * s[n / 2].re;
    padded[n / 2] = Complex64::new(ny, 0.0);
    padded[nf - n / 2] = Complex64::new(ny, 0.0);
    // coefficients refer to x_0 = -L/2 in both grids, so no phase correction
    let vals: Vec<f64> = fine.ifft_real(padded).into_iter().map(|v| v * factor as f64).collect();
    Ok(Field::from_raw(&fine, vals))
}

/// Trigonometric interpolant of `f` evaluated at arbitrary points (direct
/// sum, `O(N)` per point).
pub fn interpolate(f: &Field, points: &[f64]) -> Vec<f64> {
    let grid = f.grid();
    let n = grid.n();
    let x0 = grid.x()[0];
    let s = grid.fft(f.values());
    let ny = grid.nyquist();
    points
        .iter()
        .map(|&x| {
            let mut acc = s[0].re;
            for m in 1..ny {
                let k = grid.wavenumbers()[m];
                acc += 2.0 * (s[m] * Complex64::from_polar(1.0, k * (x - x0))).re;
            }
            acc += s[ny].re * (grid.k_max() * (x - x0)).cos();
            acc / n as f64
        })
        .collect()
}
