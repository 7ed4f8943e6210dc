use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Smallest supported grid size.
pub const MIN_POINTS: usize = 8;

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

fn plans(n: usize) -> Arc<Plans> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<Plans>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.read().unwrap().get(&n) {
        return p.clone();
    }
    let mut w = cache.write().unwrap();
    w.entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Arc::new(Plans {
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
            })
        })
        .clone()
}

struct GridData {
    n: usize,
    length: f64,
    x: Vec<f64>,
    k: Vec<f64>,
    plans: Arc<Plans>,
}

/// Uniform periodic grid `x_j = -L/2 + j h` on a box of length `L`.
///
/// Spectra are stored in FFT order: index `m` holds wavenumber `2 pi m / L`
/// for `m < N/2` and `2 pi (m - N) / L` otherwise. Index `N/2` is the
/// Nyquist mode (wavenumber `-pi N / L`).
#[derive(Clone)]
pub struct Grid(Arc<GridData>);

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < MIN_POINTS || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "point count must be a power of two >= {MIN_POINTS}, got {n}"
            )));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidGrid(format!("length must be positive, got {length}")));
        }
        let h = length / n as f64;
        let x = (0..n).map(|j| -0.5 * length + j as f64 * h).collect();
        let k = (0..n)
            .map(|m| {
                let s = if m < n / 2 { m as f64 } else { m as f64 - n as f64 };
                2.0 * PI * s / length
            })
            .collect();
        Ok(Grid(Arc::new(GridData {
            n,
            length,
            x,
            k,
            plans: plans(n),
        })))
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn length(&self) -> f64 {
        self.0.length
    }

    pub fn h(&self) -> f64 {
        self.0.length / self.0.n as f64
    }

    pub fn x(&self) -> &[f64] {
        &self.0.x
    }

    /// Angular wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.0.k
    }

    /// Signed mode index of FFT slot `m`.
    pub fn mode(&self, m: usize) -> i64 {
        let n = self.0.n;
        if m < n / 2 {
            m as i64
        } else {
            m as i64 - n as i64
        }
    }

    pub fn nyquist(&self) -> usize {
        self.0.n / 2
    }

    /// Largest resolved wavenumber `pi N / L`.
    pub fn k_max(&self) -> f64 {
        PI * self.0.n as f64 / self.0.length
    }

    /// Unnormalized DFT `sum_j f_j e^{-2 pi i j m / N}` of real samples.
    pub fn fft(&self, values: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.0.plans.forward.process(&mut buf);
        buf
    }

    /// Inverse of [`Grid::fft`] (includes the `1/N` factor).
    pub fn ifft(&self, mut spectrum: Vec<Complex64>) -> Vec<Complex64> {
        self.0.plans.inverse.process(&mut spectrum);
        let s = 1.0 / self.0.n as f64;
        for c in spectrum.iter_mut() {
            *c *= s;
        }
        spectrum
    }

    /// Inverse transform keeping only the real part.
    pub fn ifft_real(&self, spectrum: Vec<Complex64>) -> Vec<f64> {
        self.ifft(spectrum).into_iter().map(|c| c.re).collect()
    }

    /// Grid with `factor` times as many points on the same box.
    pub fn refined(&self, factor: usize) -> Result<Grid> {
        Grid::new(self.0.n * factor, self.0.length)
    }
}

/// Convenience constructor mirroring [`Grid::new`].
pub fn make_grid(n: usize, length: f64) -> Result<Grid> {
    Grid::new(n, length)
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.0.n == other.0.n && self.0.length == other.0.length
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Grid(n = {}, length = {})", self.0.n, self.0.length)
    }
}
