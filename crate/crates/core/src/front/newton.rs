use num_complex::Complex64;

use super::gmres::gmres;
use super::{apply_to_front, phi_ref_prime, reference_multiplier, FrontProfile};
use crate::error::{Error, Result};
use crate::spectral::{Field, Grid, Multiplier};
use crate::symbol::MultiplierSpec;

/// Condition removing the translational null direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pinning {
    /// `<phi_ref', w> = 0`.
    Orthogonal,
    /// `w(0) = 0`.
    PointValue,
}

#[derive(Clone, Debug)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub pinning: Pinning,
    pub gmres_restart: usize,
    pub gmres_max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 60,
            pinning: Pinning::Orthogonal,
            gmres_restart: 80,
            gmres_max_iter: 2000,
        }
    }
}

struct System<'a> {
    grid: &'a Grid,
    mult: Multiplier,
    reference: Vec<Complex64>,
    d1: Multiplier,
    d2: Multiplier,
    precond: Vec<f64>,
    pin: Vec<f64>,
}

impl<'a> System<'a> {
    fn new(spec: &MultiplierSpec, grid: &'a Grid, pinning: Pinning) -> Result<Self> {
        let mult = Multiplier::from_spec(spec, grid)?;
        let precond = grid
            .wavenumbers()
            .iter()
            .zip(mult.values())
            .map(|(&k, l)| {
                if k == 0.0 {
                    1.0
                } else {
                    1.0 / (k * k + k.abs() - l.re)
                }
            })
            .collect();
        let h = grid.h();
        let pin = match pinning {
            Pinning::Orthogonal => grid.x().iter().map(|&x| h * phi_ref_prime(x)).collect(),
            Pinning::PointValue => {
                let mut p = vec![0.0; grid.n()];
                p[grid.nyquist()] = 1.0;
                p
            }
        };
        Ok(Self {
            grid,
            reference: reference_multiplier(spec, grid)?,
            mult,
            d1: Multiplier::derivative(grid, 1),
            d2: Multiplier::derivative(grid, 2),
            precond,
            pin,
        })
    }

    /// Returns `(F(w), phi, phi')`.
    fn residual(&self, w: &Field) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let x = self.grid.x();
        let dw = self.d1.apply(w);
        let ddw = self.d2.apply(w);
        let lphi = apply_to_front(&self.mult, &self.reference, w);
        let n = self.grid.n();
        let mut f = vec![0.0; n];
        let mut phi = vec![0.0; n];
        let mut dphi = vec![0.0; n];
        for j in 0..n {
            let s = 1.0 / (0.5 * x[j]).cosh();
            let t = (0.5 * x[j]).tanh();
            phi[j] = -t + w.values()[j];
            dphi[j] = -0.5 * s * s + dw.values()[j];
            let ddphi = 0.5 * s * s * t + ddw.values()[j];
            f[j] = -ddphi + phi[j] * dphi[j] - lphi.values()[j];
        }
        (f, phi, dphi)
    }

    /// `J dw = -dw'' + phi' dw + phi dw' - L dw`.
    fn jacobian(&self, phi: &[f64], dphi: &[f64], dw: &[f64]) -> Vec<f64> {
        let n = self.grid.n();
        let mut s = self.grid.fft(dw);
        let mut s1 = s.clone();
        for (m, c) in s.iter_mut().enumerate() {
            let k = self.grid.wavenumbers()[m];
            // -d^2 - L
            *c *= Complex64::new(k * k, 0.0) - self.mult.values()[m];
        }
        self.d1.apply_spectrum(&mut s1);
        let a = self.grid.ifft_real(s);
        let b = self.grid.ifft_real(s1);
        (0..n).map(|j| a[j] + dphi[j] * dw[j] + phi[j] * b[j]).collect()
    }

    fn apply_precond(&self, v: &[f64]) -> Vec<f64> {
        let n = self.grid.n();
        let mut s = self.grid.fft(&v[..n]);
        for (c, p) in s.iter_mut().zip(&self.precond) {
            *c *= p;
        }
        let mut out = self.grid.ifft_real(s);
        out.push(v[n]);
        out
    }
}

fn iterate(sys: &System, grid: &Grid, guess: Field, opts: &NewtonOptions) -> Result<(Field, f64, usize)> {
    let n = grid.n();
    let mut w = guess;
    let (mut f, mut phi, mut dphi) = sys.residual(&w);
    let mut mu = 0.0;
    let merit = |f: &[f64], mu: f64| f.iter().fold(0.0f64, |m, x| m.max((x + mu).abs()));
    let mut fnorm = merit(&f, 0.0);
    let mut iterations = 0;
    while fnorm > opts.tol {
        if iterations >= opts.max_iter {
            return Err(Error::Divergence {
                iterations,
                residual: fnorm,
            });
        }
        iterations += 1;
        let pinned: f64 = sys.pin.iter().zip(w.values()).map(|(p, w)| p * w).sum();
        let mut rhs: Vec<f64> = f.iter().map(|fj| -(fj + mu)).collect();
        rhs.push(-pinned);
        let apply = |v: &[f64]| {
            let mut out = sys.jacobian(&phi, &dphi, &v[..n]);
            for o in out.iter_mut() {
                *o += v[n];
            }
            out.push(sys.pin.iter().zip(&v[..n]).map(|(p, x)| p * x).sum());
            out
        };
        let rtol = (1e-4 * fnorm).clamp(1e-13, 1e-6);
        let sol = gmres(apply, |v| sys.apply_precond(v), &rhs, rtol, opts.gmres_restart, opts.gmres_max_iter);
        if !sol.converged && sol.residual > 1e-3 {
            return Err(Error::SingularLinearization {
                estimate: sol.min_pivot_ratio,
            });
        }
        log::debug!("gmres: {} iterations, residual {:.2e}, converged {}", sol.iterations, sol.residual, sol.converged);
        let step_w = sol.x;
        // damped update: accept the first step length that reduces the residual
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let trial: Vec<f64> = w.values().iter().zip(&step_w).map(|(a, d)| a + alpha * d).collect();
            let trial = Field::from_raw(grid, trial);
            let (tf, tphi, tdphi) = sys.residual(&trial);
            let tmu = mu + alpha * step_w[n];
            let tn = merit(&tf, tmu);
            if tn.is_finite() && tn < fnorm * (1.0 - 1e-4 * alpha) {
                w = trial;
                f = tf;
                phi = tphi;
                dphi = tdphi;
                mu = tmu;
                fnorm = tn;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            return Err(Error::Divergence {
                iterations,
                residual: fnorm,
            });
        }
        log::debug!("newton iteration {iterations}: residual {fnorm:.3e}, mu {mu:.3e}, step {alpha}");
    }
    Ok((w, mu, iterations))
}

/// Newton iteration on `F(w) = -phi'' + phi phi' - L phi` with
/// `phi = -tanh(x/2) + w`, bordered by a pinning condition and a constant
/// Lagrange multiplier. Linear systems are solved by right-preconditioned
/// GMRES with preconditioner symbol `k^2 + |k| - Re l(k)`.
pub fn newton_front(
    spec: &MultiplierSpec,
    grid: &Grid,
    guess: &FrontProfile,
    opts: &NewtonOptions,
) -> Result<FrontProfile> {
    spec.require_admissible()?;
    if guess.grid() != grid {
        return Err(Error::GridMismatch);
    }
    let sys = System::new(spec, grid, opts.pinning)?;
    let (w, mut mu, mut iterations) = iterate(&sys, grid, guess.correction().clone(), opts)?;
    let mut front = FrontProfile::from_correction(w, spec, "newton")?.rephased()?;
    if opts.pinning == Pinning::Orthogonal && front.box_residual() > opts.tol {
        // translating a box front moves its tails across the box edge;
        // polish with the zero of phi pinned at the origin
        let sys = System::new(spec, grid, Pinning::PointValue)?;
        let (w, m, it) = iterate(&sys, grid, front.correction().clone(), opts)?;
        (mu, iterations) = (m, iterations + it);
        front = FrontProfile::from_correction(w, spec, "newton")?;
    }
    // the multiplier absorbs the box average of the residual; the rest must
    // meet the tolerance (re-phasing adds interpolation roundoff)
    if front.box_residual() > 10.0 * opts.tol {
        return Err(Error::Divergence {
            iterations,
            residual: front.box_residual(),
        });
    }
    if front.residual_sup() > opts.tol {
        log::warn!(
            "front for {}: residual {:.2e} is dominated by the box average {mu:.2e}; \
             the profile has slowly decaying tails",
            spec.label(),
            front.residual_sup()
        );
    }
    Ok(front)
}
