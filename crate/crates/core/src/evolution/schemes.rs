use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use super::rhs::PerturbationRhs;
use super::PerturbationState;
use crate::error::Result;
use crate::registry::Registry;
use crate::spectral::Field;
use crate::Complex64;

/// A time integrator with the diagonal part `-k^2 + l(k)` treated
/// exactly or implicitly and the remainder explicitly.
pub trait TimeScheme: Send + Sync {
    fn describe(&self) -> &'static str;
    fn order(&self) -> u32;
    /// Precomputes the per-mode coefficients for step `dt`.
    fn prepare(&self, rhs: &PerturbationRhs, dt: f64) -> Box<dyn PreparedScheme>;
}

pub trait PreparedScheme: Send + Sync {
    /// One step; `t` and `x0` advance with the same stages as `v`.
    fn step(&self, rhs: &PerturbationRhs, state: &PerturbationState) -> Result<PerturbationState>;
}

const CONTOUR_POINTS: usize = 64;

struct Etdrk4;

struct Etdrk4Prepared {
    dt: f64,
    e: Vec<Complex64>,
    e2: Vec<Complex64>,
    q: Vec<Complex64>,
    f1: Vec<Complex64>,
    f2: Vec<Complex64>,
    f3: Vec<Complex64>,
}

impl TimeScheme for Etdrk4 {
    fn describe(&self) -> &'static str {
        "fourth-order exponential time differencing (contour-integral coefficients)"
    }
    fn order(&self) -> u32 {
        4
    }
    fn prepare(&self, rhs: &PerturbationRhs, dt: f64) -> Box<dyn PreparedScheme> {
        let roots: Vec<Complex64> = (0..CONTOUR_POINTS)
            .map(|j| Complex64::from_polar(1.0, PI * (j as f64 + 0.5) * 2.0 / CONTOUR_POINTS as f64))
            .collect();
        let n = rhs.linear_symbol().len();
        let mut p = Etdrk4Prepared {
            dt,
            e: Vec::with_capacity(n),
            e2: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            f1: Vec::with_capacity(n),
            f2: Vec::with_capacity(n),
            f3: Vec::with_capacity(n),
        };
        let m = CONTOUR_POINTS as f64;
        for &l in rhs.linear_symbol() {
            let c = l * dt;
            p.e.push(c.exp());
            p.e2.push((c / 2.0).exp());
            let (mut q, mut f1, mut f2, mut f3) = (Complex64::default(), Complex64::default(), Complex64::default(), Complex64::default());
            for r in roots.iter().map(|r| c + r) {
                let er = r.exp();
                let r3 = r * r * r;
                q += ((r / 2.0).exp() - 1.0) / r;
                f1 += (-4.0 - r + er * (4.0 - 3.0 * r + r * r)) / r3;
                f2 += (2.0 + r + er * (r - 2.0)) / r3;
                f3 += (-4.0 - 3.0 * r - r * r + er * (4.0 - r)) / r3;
            }
            p.q.push(q * dt / m);
            p.f1.push(f1 * dt / m);
            p.f2.push(f2 * dt / m);
            p.f3.push(f3 * dt / m);
        }
        Box::new(p)
    }
}

fn spectral_explicit(rhs: &PerturbationRhs, v: &Field) -> Result<(Vec<Complex64>, f64)> {
    let (n, xd) = rhs.explicit(v)?;
    Ok((v.grid().fft(n.values()), xd))
}

impl PreparedScheme for Etdrk4Prepared {
    fn step(&self, rhs: &PerturbationRhs, s: &PerturbationState) -> Result<PerturbationState> {
        let grid = s.v.grid();
        let to_field = |h: Vec<Complex64>| Field::from_raw(grid, grid.ifft_real(h));
        let vh = grid.fft(s.v.values());
        let (nv, xv) = spectral_explicit(rhs, &s.v)?;
        let ah: Vec<Complex64> = (0..vh.len()).map(|i| self.e2[i] * vh[i] + self.q[i] * nv[i]).collect();
        let (na, xa) = spectral_explicit(rhs, &to_field(ah.clone()))?;
        let bh: Vec<Complex64> = (0..vh.len()).map(|i| self.e2[i] * vh[i] + self.q[i] * na[i]).collect();
        let (nb, xb) = spectral_explicit(rhs, &to_field(bh))?;
        let ch: Vec<Complex64> = (0..vh.len())
            .map(|i| self.e2[i] * ah[i] + self.q[i] * (2.0 * nb[i] - nv[i]))
            .collect();
        let (nc, xc) = spectral_explicit(rhs, &to_field(ch))?;
        let out: Vec<Complex64> = (0..vh.len())
            .map(|i| {
                self.e[i] * vh[i]
                    + self.f1[i] * nv[i]
                    + 2.0 * self.f2[i] * (na[i] + nb[i])
                    + self.f3[i] * nc[i]
            })
            .collect();
        let v = to_field(out);
        let x0_dot_last = rhs.x0_dot(&v)?;
        Ok(PerturbationState {
            v,
            x0: s.x0 + self.dt / 6.0 * (xv + 2.0 * xa + 2.0 * xb + xc),
            t: s.t + self.dt,
            x0_dot_last,
        })
    }
}

/// ARS(2,2,2): L-stable implicit part, stiffly accurate.
struct Imex2;

struct Imex2Prepared {
    dt: f64,
    inv: Vec<Complex64>,
    linear: Vec<Complex64>,
}

const ARS_GAMMA: f64 = 1.0 - std::f64::consts::FRAC_1_SQRT_2;

impl TimeScheme for Imex2 {
    fn describe(&self) -> &'static str {
        "second-order implicit-explicit Runge-Kutta ARS(2,2,2)"
    }
    fn order(&self) -> u32 {
        2
    }
    fn prepare(&self, rhs: &PerturbationRhs, dt: f64) -> Box<dyn PreparedScheme> {
        Box::new(Imex2Prepared {
            dt,
            inv: rhs
                .linear_symbol()
                .iter()
                .map(|l| 1.0 / (1.0 - dt * ARS_GAMMA * l))
                .collect(),
            linear: rhs.linear_symbol().to_vec(),
        })
    }
}

impl PreparedScheme for Imex2Prepared {
    fn step(&self, rhs: &PerturbationRhs, s: &PerturbationState) -> Result<PerturbationState> {
        let (g, dt) = (ARS_GAMMA, self.dt);
        let delta = 1.0 - 1.0 / (2.0 * g);
        let grid = s.v.grid();
        let vh = grid.fft(s.v.values());
        let (n1, x1) = spectral_explicit(rhs, &s.v)?;
        let u2: Vec<Complex64> = (0..vh.len())
            .map(|i| self.inv[i] * (vh[i] + dt * g * n1[i]))
            .collect();
        let (n2, x2) = spectral_explicit(rhs, &Field::from_raw(grid, grid.ifft_real(u2.clone())))?;
        let u3: Vec<Complex64> = (0..vh.len())
            .map(|i| {
                self.inv[i]
                    * (vh[i]
                        + dt * (delta * n1[i] + (1.0 - delta) * n2[i])
                        + dt * (1.0 - g) * self.linear[i] * u2[i])
            })
            .collect();
        let v = Field::from_raw(grid, grid.ifft_real(u3));
        let x0_dot_last = rhs.x0_dot(&v)?;
        Ok(PerturbationState {
            v,
            x0: s.x0 + dt * (delta * x1 + (1.0 - delta) * x2),
            t: s.t + dt,
            x0_dot_last,
        })
    }
}

/// Registry of time schemes.
pub fn time_schemes() -> &'static Registry<dyn TimeScheme> {
    static REG: OnceLock<Registry<dyn TimeScheme>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut r: Registry<dyn TimeScheme> = Registry::new("time scheme");
        r.register("etdrk4", Arc::new(Etdrk4));
        r.register("imex2", Arc::new(Imex2));
        r
    })
}
