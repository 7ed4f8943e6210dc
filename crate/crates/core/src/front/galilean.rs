use serde::{Deserialize, Serialize};

use super::FrontProfile;
use crate::error::{Error, Result};
use crate::evolution::PerturbationState;
use crate::spectral::interpolate;
use crate::symbol::{rescale_symbol, MultiplierSpec};

/// Frame change `u(t,x) = lambda U(lambda^2 t, lambda x - c lambda^2 t) + c lambda`
/// mapping endpoints `(u_minus, u_plus)` to `(1, -1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GalileanParams {
    pub u_minus: f64,
    pub u_plus: f64,
    pub c: f64,
    pub lambda: f64,
}

impl GalileanParams {
    pub fn new(u_minus: f64, u_plus: f64) -> Result<Self> {
        if !(u_minus > u_plus) || !u_minus.is_finite() || !u_plus.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "endpoints must satisfy u_minus > u_plus, got ({u_minus}, {u_plus})"
            )));
        }
        Ok(Self {
            u_minus,
            u_plus,
            c: (u_minus + u_plus) / (u_minus - u_plus),
            lambda: 0.5 * (u_minus - u_plus),
        })
    }

    /// Maps a normalized value back: `lambda U + c lambda`.
    pub fn denormalize_value(&self, u: f64) -> f64 {
        self.lambda * u + self.c * self.lambda
    }

    /// Endpoints reconstructed from `(c, lambda)`.
    pub fn endpoints(&self) -> (f64, f64) {
        (self.denormalize_value(1.0), self.denormalize_value(-1.0))
    }

    /// Normalized coordinates `(lambda^2 t, lambda x - c lambda^2 t)`.
    pub fn normalized_point(&self, t: f64, x: f64) -> (f64, f64) {
        let l2 = self.lambda * self.lambda;
        (l2 * t, self.lambda * x - self.c * l2 * t)
    }

    /// Smallest admissible modulation gain in the original variables.
    pub fn min_gamma(&self) -> f64 {
        2.0 / (self.u_minus - self.u_plus)
    }
}

/// Normalizes endpoints and rescales the operator symbol by `lambda`.
pub fn galilean_normalize(
    u_minus: f64,
    u_plus: f64,
    spec: &MultiplierSpec,
) -> Result<(GalileanParams, MultiplierSpec)> {
    let p = GalileanParams::new(u_minus, u_plus)?;
    let rescaled = rescale_symbol(spec, p.lambda)?;
    Ok((p, rescaled))
}

/// The steady front in original variables at time `t` and points `x`.
pub fn denormalize_profile(
    front: &FrontProfile,
    params: &GalileanParams,
    t: f64,
    points: &[f64],
) -> Result<Vec<f64>> {
    let ys: Vec<f64> = points.iter().map(|&x| params.normalized_point(t, x).1).collect();
    Ok(front
        .eval(&ys)?
        .into_iter()
        .map(|u| params.denormalize_value(u))
        .collect())
}

/// `u = phi(y - x0) + v(y - x0)` in original variables, with `y` and the
/// state time in normalized units.
pub fn denormalize_state(
    front: &FrontProfile,
    state: &PerturbationState,
    params: &GalileanParams,
    points: &[f64],
) -> Result<Vec<f64>> {
    let l2 = params.lambda * params.lambda;
    let t_orig = state.t / l2;
    let ys: Vec<f64> = points
        .iter()
        .map(|&x| params.normalized_point(t_orig, x).1 - state.x0)
        .collect();
    let phi = front.eval(&ys)?;
    let v = interpolate(&state.v, &ys);
    Ok(phi
        .iter()
        .zip(v)
        .map(|(p, v)| params.denormalize_value(p + v))
        .collect())
}
