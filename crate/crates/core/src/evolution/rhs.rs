use serde::{Deserialize, Serialize};

use super::PerturbationState;
use crate::error::Result;
use crate::front::FrontProfile;
use crate::spectral::{dealias, inner, Field, Multiplier};
use crate::symbol::MultiplierSpec;
use crate::Complex64;

/// Switches for the individual terms of the perturbation equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RhsTerms {
    /// `L v` in the linear part.
    pub operator: bool,
    /// `-phi' v - phi v'`.
    pub front: bool,
    /// `-v v'`.
    pub nonlinear: bool,
    /// `x0_dot (v' + phi')`.
    pub modulation: bool,
}

impl Default for RhsTerms {
    fn default() -> Self {
        Self {
            operator: true,
            front: true,
            nonlinear: true,
            modulation: true,
        }
    }
}

impl RhsTerms {
    /// Only `v_xx + L v`.
    pub fn linear_only() -> Self {
        Self {
            operator: true,
            front: false,
            nonlinear: false,
            modulation: false,
        }
    }
}

/// The perturbation equation split into a diagonal part `-k^2 + l(k)`
/// and the explicitly treated remainder.
#[derive(Clone, Debug)]
pub struct PerturbationRhs {
    phi: Field,
    phi_prime: Field,
    linear: Vec<Complex64>,
    ik: Vec<Complex64>,
    gamma: f64,
    terms: RhsTerms,
    dealias: bool,
}

impl PerturbationRhs {
    pub fn new(
        front: &FrontProfile,
        spec: &MultiplierSpec,
        gamma: f64,
        terms: RhsTerms,
        dealias: bool,
    ) -> Result<Self> {
        let grid = front.grid();
        let ik = Multiplier::derivative(grid, 1).values().to_vec();
        let l = if terms.operator {
            Multiplier::from_spec(spec, grid)?.values().to_vec()
        } else {
            vec![Complex64::new(0.0, 0.0); grid.n()]
        };
        let linear = grid
            .wavenumbers()
            .iter()
            .zip(&l)
            .map(|(k, l)| l - k * k)
            .collect();
        Ok(Self {
            phi: front.phi().clone(),
            phi_prime: front.phi_prime().clone(),
            linear,
            ik,
            gamma,
            terms,
            dealias,
        })
    }

    /// Diagonal symbol `-k^2 + l(k)`.
    pub fn linear_symbol(&self) -> &[Complex64] {
        &self.linear
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn terms(&self) -> RhsTerms {
        self.terms
    }

    /// Modulation speed `x0_dot = -gamma <phi', v>`.
    pub fn x0_dot(&self, v: &Field) -> Result<f64> {
        if !self.terms.modulation {
            return Ok(0.0);
        }
        Ok(-self.gamma * inner(&self.phi_prime, v)?)
    }

    fn spectral_derivative(&self, spectrum: &[Complex64]) -> Vec<Complex64> {
        spectrum.iter().zip(&self.ik).map(|(a, b)| a * b).collect()
    }

    /// Explicit part of the tendency and the modulation speed.
    pub fn explicit(&self, v: &Field) -> Result<(Field, f64)> {
        v.same_grid(&self.phi)?;
        let grid = v.grid();
        let xd = self.x0_dot(v)?;
        if !(self.terms.front || self.terms.nonlinear || self.terms.modulation) {
            return Ok((Field::zeros(grid), xd));
        }
        let vh = grid.fft(v.values());
        let dv = grid.ifft_real(self.spectral_derivative(&vh));
        let (p, dp, vv) = (self.phi.values(), self.phi_prime.values(), v.values());
        let mut out: Vec<f64> = (0..grid.n())
            .map(|j| {
                let mut s = 0.0;
                if self.terms.modulation {
                    s += xd * (dv[j] + dp[j]);
                }
                if self.terms.front {
                    s -= dp[j] * vv[j] + p[j] * dv[j];
                }
                s
            })
            .collect();
        if self.terms.nonlinear {
            let q = if self.dealias {
                let mut a = vh;
                dealias(&mut a);
                let da = grid.ifft_real(self.spectral_derivative(&a));
                let a = grid.ifft_real(a);
                let mut prod = grid.fft(&a.iter().zip(&da).map(|(x, y)| x * y).collect::<Vec<_>>());
                dealias(&mut prod);
                grid.ifft_real(prod)
            } else {
                vv.iter().zip(&dv).map(|(x, y)| x * y).collect()
            };
            out.iter_mut().zip(&q).for_each(|(o, q)| *o -= q);
        }
        Ok((Field::from_raw(grid, out), xd))
    }

    /// Full tendency `v_xx + L v + x0_dot (v' + phi') - phi' v - phi v' - v v'`.
    pub fn tendency(&self, v: &Field) -> Result<(Field, f64)> {
        let (n, xd) = self.explicit(v)?;
        let grid = v.grid();
        let lin: Vec<Complex64> = grid
            .fft(v.values())
            .iter()
            .zip(&self.linear)
            .map(|(a, b)| a * b)
            .collect();
        let lin = grid.ifft_real(lin);
        let out = n.values().iter().zip(&lin).map(|(a, b)| a + b).collect();
        Ok((Field::from_raw(grid, out), xd))
    }
}

/// Tendency of the modulated perturbation equation with all terms active
/// and the quadratic term dealiased.
pub fn rhs_perturbation(
    state: &PerturbationState,
    front: &FrontProfile,
    spec: &MultiplierSpec,
    gamma: f64,
) -> Result<(Field, f64)> {
    PerturbationRhs::new(front, spec, gamma, RhsTerms::default(), true)?.tendency(&state.v)
}
