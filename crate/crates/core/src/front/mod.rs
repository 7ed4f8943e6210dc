//! Steady fronts `-phi'' + phi phi' = L phi` with `phi(-inf) = 1`,
//! `phi(+inf) = -1`.
//!
//! Profiles are stored as `phi = -tanh(x/2) + w` with a periodic correction
//! `w`, so that spectral calculus on the box only ever sees decaying data.
//! The non-periodic reference part is differentiated analytically and `L`
//! acts on it through `L phi_ref = M (phi_ref')` with `M(k) = l(k) / (ik)`.

mod closed_form;
pub mod io;
mod galilean;
mod gmres;
mod newton;
mod shooting;

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::registry::Registry;
use crate::spectral::{derivative, interpolate, inner, l2_norm, shift, Field, Grid, Multiplier};
use crate::symbol::{MultiplierSpec, Preset};

pub use closed_form::closed_form_burgers;
pub use galilean::{denormalize_profile, denormalize_state, galilean_normalize, GalileanParams};
pub use gmres::{gmres, GmresOutcome};
pub use newton::{newton_front, NewtonOptions, Pinning};
pub use shooting::{kdvb_decay_rates, kdvb_grid, shoot_local_front, ShootingOptions};

/// `-tanh(x/2)`, the Burgers front and the reference part of every profile.
pub fn phi_ref(x: f64) -> f64 {
    -(0.5 * x).tanh()
}

pub fn phi_ref_prime(x: f64) -> f64 {
    let s = 1.0 / (0.5 * x).cosh();
    -0.5 * s * s
}

pub fn phi_ref_second(x: f64) -> f64 {
    let s = 1.0 / (0.5 * x).cosh();
    0.5 * s * s * (0.5 * x).tanh()
}

/// Integrability indicators for the front derivative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub phi_prime_l2: f64,
    pub phi_second_l2: f64,
    /// `int (1 + |x|) |phi'| dx`.
    pub first_moment: f64,
    /// Share of the first moment coming from the outer 10% of the box.
    pub moment_tail_fraction: f64,
    /// `max |phi'|` over the two end samples of the box.
    pub edge_phi_prime: f64,
    /// Largest deviation of the end samples from the endpoint values.
    pub endpoint_error: f64,
    /// `max phi'`; positive values mean the profile is not monotone.
    pub max_phi_prime: f64,
}

/// A sampled front together with the operator it solves.
#[derive(Clone, Debug)]
pub struct FrontProfile {
    grid: Grid,
    w: Field,
    phi: Field,
    phi_prime: Field,
    phi_second: Field,
    operator: MultiplierSpec,
    residual_sup: f64,
    box_residual: f64,
    hypothesis: HypothesisReport,
    method: String,
}

impl FrontProfile {
    /// Assembles a profile from its periodic correction `w`.
    pub fn from_correction(
        w: Field,
        operator: &MultiplierSpec,
        method: impl Into<String>,
    ) -> Result<Self> {
        let grid = w.grid().clone();
        let phi = Field::from_fn(&grid, phi_ref).add(&w)?;
        let phi_prime = Field::from_fn(&grid, phi_ref_prime).add(&derivative(&w, 1))?;
        let phi_second = Field::from_fn(&grid, phi_ref_second).add(&derivative(&w, 2))?;
        let mut out = Self {
            grid,
            w,
            phi,
            phi_prime,
            phi_second,
            operator: operator.clone(),
            residual_sup: f64::NAN,
            box_residual: f64::NAN,
            hypothesis: HypothesisReport {
                phi_prime_l2: 0.0,
                phi_second_l2: 0.0,
                first_moment: 0.0,
                moment_tail_fraction: 0.0,
                edge_phi_prime: 0.0,
                endpoint_error: 0.0,
                max_phi_prime: 0.0,
            },
            method: method.into(),
        };
        let r = profile_residual(&out)?;
        let mean = r.values().iter().sum::<f64>() / r.values().len() as f64;
        out.residual_sup = r.max_abs();
        out.box_residual = r.map(|v| v - mean).max_abs();
        out.hypothesis = out.compute_hypothesis();
        Ok(out)
    }

    /// Profile from samples of `phi` itself.
    pub fn from_samples(phi: Field, operator: &MultiplierSpec, method: impl Into<String>) -> Result<Self> {
        let w = phi.sub(&Field::from_fn(phi.grid(), phi_ref))?;
        Self::from_correction(w, operator, method)
    }

    fn compute_hypothesis(&self) -> HypothesisReport {
        let h = self.grid.h();
        let x = self.grid.x();
        let n = self.grid.n();
        let dp = self.phi_prime.values();
        let weights: Vec<f64> = dp.iter().zip(x).map(|(d, x)| (1.0 + x.abs()) * d.abs()).collect();
        let total: f64 = h * weights.iter().sum::<f64>();
        let cut = 0.4 * self.grid.length();
        let tail: f64 = h * weights
            .iter()
            .zip(x)
            .filter(|(_, x)| x.abs() >= cut)
            .map(|(w, _)| w)
            .sum::<f64>();
        let phi = self.phi.values();
        HypothesisReport {
            phi_prime_l2: l2_norm(&self.phi_prime),
            phi_second_l2: l2_norm(&self.phi_second),
            first_moment: total,
            moment_tail_fraction: if total > 0.0 { tail / total } else { 0.0 },
            edge_phi_prime: dp[0].abs().max(dp[n - 1].abs()),
            endpoint_error: (phi[0] - 1.0).abs().max((phi[n - 1] + 1.0).abs()),
            max_phi_prime: dp.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn correction(&self) -> &Field {
        &self.w
    }
    pub fn phi(&self) -> &Field {
        &self.phi
    }
    pub fn phi_prime(&self) -> &Field {
        &self.phi_prime
    }
    pub fn phi_second(&self) -> &Field {
        &self.phi_second
    }
    pub fn operator(&self) -> &MultiplierSpec {
        &self.operator
    }
    pub fn residual_sup(&self) -> f64 {
        self.residual_sup
    }
    /// Residual with its box average removed. On a periodic box the average
    /// equals `2 w(L/2) / L`, which cannot vanish when the front has slowly
    /// decaying tails; this is the quantity the Newton solver drives to zero.
    pub fn box_residual(&self) -> f64 {
        self.box_residual
    }
    /// `max |phi(x) + phi(-x)|` over interior points, zero for odd fronts.
    pub fn oddness_defect(&self) -> f64 {
        self.w.oddness_defect()
    }
    pub fn hypothesis(&self) -> &HypothesisReport {
        &self.hypothesis
    }
    pub fn method(&self) -> &str {
        &self.method
    }
    /// Limits `(phi(-inf), phi(+inf))` of the normalized problem.
    pub fn endpoints(&self) -> (f64, f64) {
        (1.0, -1.0)
    }
    pub fn is_monotone(&self, tol: f64) -> bool {
        self.hypothesis.max_phi_prime <= tol
    }

    /// `phi` at arbitrary points inside the box (trigonometric interpolation
    /// of the correction plus the exact reference part).
    pub fn eval(&self, points: &[f64]) -> Result<Vec<f64>> {
        let lo = self.grid.x()[0];
        let hi = lo + self.grid.length();
        if let Some(p) = points.iter().find(|p| !(**p >= lo && **p <= hi)) {
            return Err(Error::InvalidParameter(format!(
                "point {p} lies outside the box [{lo}, {hi}]"
            )));
        }
        let w = interpolate(&self.w, points);
        Ok(points.iter().zip(w).map(|(&x, w)| phi_ref(x) + w).collect())
    }

    /// Same front translated so that `phi(x_new) = phi_old(x + s)`.
    pub fn translated(&self, s: f64) -> Result<Self> {
        let ws = shift(&self.w, s);
        let dref = Field::from_fn(&self.grid, |x| phi_ref(x + s) - phi_ref(x));
        Self::from_correction(ws.add(&dref)?, &self.operator, self.method.clone())
    }

    /// Translates the profile so that `phi(0) = 0`.
    pub fn rephased(&self) -> Result<Self> {
        let s = self.zero_crossing()?;
        if s == 0.0 {
            return Ok(self.clone());
        }
        self.translated(s)
    }

    /// Location of the zero of `phi` nearest the origin.
    pub fn zero_crossing(&self) -> Result<f64> {
        let x = self.grid.x();
        let phi = self.phi.values();
        let mid = self.grid.nyquist();
        if phi[mid] == 0.0 {
            return Ok(0.0);
        }
        // nearest sign change to the centre
        let n = x.len();
        let mut bracket = None;
        for d in 0..n / 2 {
            for j in [mid + d, mid.wrapping_sub(d + 1)] {
                if j + 1 < n && phi[j] * phi[j + 1] <= 0.0 {
                    bracket = Some((x[j], x[j + 1]));
                    break;
                }
            }
            if bracket.is_some() {
                break;
            }
        }
        let (mut a, mut b) =
            bracket.ok_or_else(|| Error::NoConnection("profile has no zero crossing".into()))?;
        let f = |t: f64| self.eval(&[t]).map(|v| v[0]);
        let mut fa = f(a)?;
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            let fm = f(m)?;
            if fm == 0.0 || (b - a) < 1e-15 * (1.0 + m.abs()) {
                return Ok(m);
            }
            if fa * fm < 0.0 {
                b = m;
            } else {
                a = m;
                fa = fm;
            }
        }
        Ok(0.5 * (a + b))
    }
}

/// `M(k) = l(k)/(ik)` on the grid, with `M(0) = 0`.
pub(crate) fn reference_multiplier(spec: &MultiplierSpec, grid: &Grid) -> Result<Vec<Complex64>> {
    let l = spec.eval(grid.wavenumbers())?;
    let mut m: Vec<Complex64> = grid
        .wavenumbers()
        .iter()
        .zip(&l)
        .map(|(&k, &l)| if k == 0.0 { Complex64::new(0.0, 0.0) } else { l / Complex64::new(0.0, k) })
        .collect();
    let ny = grid.nyquist();
    m[ny] = Complex64::new(m[ny].re, 0.0);
    Ok(m)
}

/// `L phi` for `phi = phi_ref + w`.
pub(crate) fn apply_to_front(
    spec_on_grid: &Multiplier,
    reference: &[Complex64],
    w: &Field,
) -> Field {
    let grid = w.grid();
    let mut s = grid.fft(Field::from_fn(grid, phi_ref_prime).values());
    for (c, m) in s.iter_mut().zip(reference) {
        *c *= m;
    }
    let lref = grid.ifft_real(s);
    let lw = spec_on_grid.apply(w);
    Field::from_raw(grid, lref.iter().zip(lw.values()).map(|(a, b)| a + b).collect())
}

/// Pointwise residual `-phi'' + phi phi' - L phi`.
pub fn profile_residual(front: &FrontProfile) -> Result<Field> {
    let grid = front.grid();
    let mult = Multiplier::from_spec(front.operator(), grid)?;
    let reference = reference_multiplier(front.operator(), grid)?;
    let lphi = apply_to_front(&mult, &reference, front.correction());
    let (p, dp, ddp) = (front.phi().values(), front.phi_prime().values(), front.phi_second().values());
    Ok(Field::from_raw(
        grid,
        (0..grid.n()).map(|j| -ddp[j] + p[j] * dp[j] - lphi.values()[j]).collect(),
    ))
}

/// Projection-free agreement between two profiles on the same grid.
pub fn profile_distance(a: &FrontProfile, b: &FrontProfile) -> Result<f64> {
    Ok(a.phi().sub(b.phi())?.max_abs())
}

/// `<phi', f>`.
pub fn project_on_derivative(front: &FrontProfile, f: &Field) -> Result<f64> {
    inner(front.phi_prime(), f)
}

/// Options shared by all front methods.
#[derive(Clone, Debug)]
pub struct FrontOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub pinning: Pinning,
    pub initial_guess: Option<FrontProfile>,
}

impl Default for FrontOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 60,
            pinning: Pinning::Orthogonal,
            initial_guess: None,
        }
    }
}

/// A profile construction strategy.
pub trait FrontMethod: Send + Sync {
    fn describe(&self) -> &'static str;
    fn solve(&self, spec: &MultiplierSpec, grid: &Grid, opts: &FrontOptions) -> Result<FrontProfile>;
}

struct ClosedForm;

impl FrontMethod for ClosedForm {
    fn describe(&self) -> &'static str {
        "exact -tanh(x/2) profile; zero operator only"
    }
    fn solve(&self, spec: &MultiplierSpec, grid: &Grid, _opts: &FrontOptions) -> Result<FrontProfile> {
        if !spec.is_zero() {
            return Err(Error::InvalidParameter(format!(
                "closed form front needs the zero operator, got {}",
                spec.label()
            )));
        }
        closed_form_burgers(grid)
    }
}

fn kdvb_nu(spec: &MultiplierSpec) -> Result<f64> {
    match spec.preset() {
        Some(Preset::Kdvb { nu }) => Ok(*nu),
        Some(Preset::Burgers) => Ok(0.0),
        _ => Err(Error::InvalidParameter(format!(
            "shooting needs a kdvb or burgers operator, got {}",
            spec.label()
        ))),
    }
}

struct Shooting;

impl FrontMethod for Shooting {
    fn describe(&self) -> &'static str {
        "first-integral ODE along the unstable manifold; kdvb only"
    }
    fn solve(&self, spec: &MultiplierSpec, grid: &Grid, opts: &FrontOptions) -> Result<FrontProfile> {
        let nu = kdvb_nu(spec)?;
        if nu == 0.0 {
            return closed_form_burgers(grid);
        }
        let o = ShootingOptions {
            tol: opts.tol,
            ..Default::default()
        };
        shoot_local_front(nu, grid, &o)
    }
}

struct Newton;

impl FrontMethod for Newton {
    fn describe(&self) -> &'static str {
        "spectral Newton-GMRES on the box; any admissible operator"
    }
    fn solve(&self, spec: &MultiplierSpec, grid: &Grid, opts: &FrontOptions) -> Result<FrontProfile> {
        let guess = match &opts.initial_guess {
            Some(g) => g.clone(),
            None => FrontProfile::from_correction(Field::zeros(grid), spec, "guess")?,
        };
        let o = NewtonOptions {
            tol: opts.tol,
            max_iter: opts.max_iter,
            pinning: opts.pinning,
            ..Default::default()
        };
        newton_front(spec, grid, &guess, &o)
    }
}

struct Auto;

impl FrontMethod for Auto {
    fn describe(&self) -> &'static str {
        "closed form for burgers, shooting for kdvb, Newton otherwise"
    }
    fn solve(&self, spec: &MultiplierSpec, grid: &Grid, opts: &FrontOptions) -> Result<FrontProfile> {
        if spec.is_zero() {
            return ClosedForm.solve(spec, grid, opts);
        }
        if matches!(spec.preset(), Some(Preset::Kdvb { .. })) {
            return Shooting.solve(spec, grid, opts);
        }
        Newton.solve(spec, grid, opts)
    }
}

/// Registry of front construction methods.
pub fn front_methods() -> &'static Registry<dyn FrontMethod> {
    static REG: OnceLock<Registry<dyn FrontMethod>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut r: Registry<dyn FrontMethod> = Registry::new("front method");
        r.register("auto", Arc::new(Auto));
        r.register("closed_form", Arc::new(ClosedForm));
        r.register("shooting", Arc::new(Shooting));
        r.register("newton", Arc::new(Newton));
        r
    })
}

/// Solves for the front with the named method.
pub fn solve_front(
    method: &str,
    spec: &MultiplierSpec,
    grid: &Grid,
    opts: &FrontOptions,
) -> Result<FrontProfile> {
    spec.require_admissible()?;
    front_methods().get(method)?.solve(spec, grid, opts)
}
