//! Time integration of the modulated perturbation equation
//!
//! `v_t = v_xx + L v + x0_dot (v' + phi') - phi' v - phi v' - v v'`,
//! `x0_dot = -gamma <phi', v>`,
//!
//! in the co-moving frame of a steady front `phi`, plus the Cole–Hopf
//! oracle for `L = 0` and perturbation generators.

mod cole_hopf;
mod perturbation;
mod rhs;
mod schemes;

use serde::{Deserialize, Serialize};

pub use cole_hopf::cole_hopf_exact;
pub use perturbation::{make_perturbation, PerturbationKind};
pub use rhs::{rhs_perturbation, PerturbationRhs, RhsTerms};
pub use schemes::{time_schemes, PreparedScheme, TimeScheme};

use crate::diagnostics::{NormRecord, NormSeries};
use crate::error::{Error, Result};
use crate::front::FrontProfile;
use crate::spectral::{derivative, l2_norm, weighted_l2, Field};
use crate::symbol::MultiplierSpec;

/// Relative size of `v` on the outer 5% of the box above which the run
/// is flagged as contaminated by the periodic boundary.
pub const BOUNDARY_TOL: f64 = 1e-6;
/// Relative per-step growth of `||v||_2` tolerated by the monotonicity audit.
pub const MONOTONE_SLACK: f64 = 1e-10;
/// `int v0^2 |x| dx` above this multiple of `||v0||_2^2` triggers a warning.
pub const WEIGHTED_DATA_RATIO: f64 = 100.0;

#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationState {
    pub v: Field,
    /// Translation of the front, in length units.
    pub x0: f64,
    pub t: f64,
    pub x0_dot_last: f64,
}

impl PerturbationState {
    pub fn new(v: Field) -> Self {
        Self {
            v,
            x0: 0.0,
            t: 0.0,
            x0_dot_last: 0.0,
        }
    }
}

/// `max |v|` over the outer 5% of the box relative to `||v||_inf`.
pub fn boundary_contamination(v: &Field) -> f64 {
    let m = v.max_abs();
    if m == 0.0 {
        return 0.0;
    }
    let edge = 0.45 * v.grid().length();
    let b = v
        .values()
        .iter()
        .zip(v.grid().x())
        .filter(|(_, x)| x.abs() >= edge)
        .fold(0.0f64, |a, (v, _)| a.max(v.abs()));
    b / m
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StepperConfig {
    /// Time step; chosen from the grid and scheme when absent.
    pub dt: Option<f64>,
    pub scheme: String,
    pub gamma: f64,
    pub dealias: bool,
    pub t_end: f64,
    /// Steps between recorded norms.
    pub stride: usize,
    pub terms: RhsTerms,
    /// Extra `L^p` norms recorded besides `p = 1, 2, inf`.
    pub p_list: Vec<f64>,
}

impl Default for StepperConfig {
    fn default() -> Self {
        Self {
            dt: None,
            scheme: "etdrk4".into(),
            gamma: 1.1,
            dealias: true,
            t_end: 50.0,
            stride: 10,
            terms: RhsTerms::default(),
            p_list: vec![1.5, 3.0, 4.0],
        }
    }
}

impl StepperConfig {
    /// Step used when `dt` is unset: an advective bound for `etdrk4`,
    /// `h^2 / 2` otherwise.
    pub fn default_dt(&self, front: &FrontProfile) -> f64 {
        let g = front.grid();
        if self.scheme == "etdrk4" {
            1.0 / (g.k_max() * (1.0 + front.phi().max_abs()))
        } else {
            0.5 * g.h() * g.h()
        }
    }

    pub fn resolved_dt(&self, front: &FrontProfile) -> f64 {
        self.dt.unwrap_or_else(|| self.default_dt(front))
    }

    pub fn validate(&self, front: &FrontProfile) -> Result<()> {
        let dt = self.resolved_dt(front);
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!("t_end must be >= 0, got {}", self.t_end)));
        }
        if self.stride == 0 {
            return Err(Error::InvalidParameter("stride must be at least 1".into()));
        }
        let (a, b) = front.endpoints();
        let gmin = 2.0 / (a - b);
        if self.terms.modulation && !(self.gamma > gmin) {
            return Err(Error::InvalidParameter(format!(
                "modulation gain must exceed {gmin}, got {}",
                self.gamma
            )));
        }
        time_schemes().get(&self.scheme)?;
        NormSeries::new(self.p_list.clone())?;
        Ok(())
    }
}

/// A prepared time stepper for one front, operator and step size.
pub struct Integrator {
    rhs: PerturbationRhs,
    scheme: Box<dyn PreparedScheme>,
    dt: f64,
    k_max: f64,
}

impl Integrator {
    pub fn new(front: &FrontProfile, spec: &MultiplierSpec, config: &StepperConfig) -> Result<Self> {
        config.validate(front)?;
        let dt = config.resolved_dt(front);
        Self::with_dt(front, spec, config, dt)
    }

    fn with_dt(front: &FrontProfile, spec: &MultiplierSpec, config: &StepperConfig, dt: f64) -> Result<Self> {
        let rhs = PerturbationRhs::new(front, spec, config.gamma, config.terms, config.dealias)?;
        let scheme = time_schemes().get(&config.scheme)?.prepare(&rhs, dt);
        Ok(Self {
            rhs,
            scheme,
            dt,
            k_max: front.grid().k_max(),
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn rhs(&self) -> &PerturbationRhs {
        &self.rhs
    }

    pub fn step(&self, state: &PerturbationState) -> Result<PerturbationState> {
        let c = self.dt * state.v.max_abs() * self.k_max;
        if c > 1.0 {
            return Err(Error::Cfl(format!(
                "dt |v|_inf k_max = {c:.3} > 1 at t = {}",
                state.t
            )));
        }
        let next = self.scheme.step(&self.rhs, state)?;
        if !next.v.is_finite() || !next.x0.is_finite() {
            return Err(Error::NonFinite { t: next.t });
        }
        Ok(next)
    }
}

/// One step of the configured scheme.
pub fn step(
    state: &PerturbationState,
    front: &FrontProfile,
    spec: &MultiplierSpec,
    config: &StepperConfig,
) -> Result<PerturbationState> {
    Integrator::new(front, spec, config)?.step(state)
}

/// Receives every recorded state.
pub trait Observer {
    fn record(&mut self, state: &PerturbationState, norms: &NormRecord) -> Result<()>;
}

impl<F: FnMut(&PerturbationState, &NormRecord) -> Result<()>> Observer for F {
    fn record(&mut self, state: &PerturbationState, norms: &NormRecord) -> Result<()> {
        self(state, norms)
    }
}

/// Keeps every recorded state in memory.
#[derive(Clone, Debug, Default)]
pub struct SnapshotCollector {
    pub snapshots: Vec<PerturbationState>,
}

impl Observer for SnapshotCollector {
    fn record(&mut self, state: &PerturbationState, _: &NormRecord) -> Result<()> {
        self.snapshots.push(state.clone());
        Ok(())
    }
}

/// Steps at which `||v||_2` grew by more than the slack.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityAudit {
    pub violations: usize,
    pub worst_relative_increase: f64,
    pub first_violation_t: Option<f64>,
}

impl MonotonicityAudit {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug)]
pub struct EvolveOutcome {
    pub series: NormSeries,
    pub final_state: PerturbationState,
    pub monotonicity: MonotonicityAudit,
    /// Recorded states whose boundary contamination exceeded the tolerance.
    pub boundary_warnings: usize,
    pub steps: usize,
    pub dt: f64,
}

/// Integrates from `v0` to `config.t_end`, recording norms every `stride`
/// steps and at the final time. Integrals in the series are accumulated
/// with the trapezoid rule over every step.
pub fn evolve(
    v0: &Field,
    front: &FrontProfile,
    spec: &MultiplierSpec,
    config: &StepperConfig,
    observer: &mut dyn Observer,
) -> Result<EvolveOutcome> {
    spec.require_admissible()?;
    v0.same_grid(front.phi())?;
    config.validate(front)?;
    let b = boundary_contamination(v0);
    if b > BOUNDARY_TOL {
        return Err(Error::InvalidParameter(format!(
            "initial perturbation is not small near the box edges (relative size {b:.2e})"
        )));
    }
    let l2_0 = l2_norm(v0);
    if weighted_l2(v0, 0.0).powi(2) > WEIGHTED_DATA_RATIO * l2_0 * l2_0 {
        log::warn!("initial perturbation has a large weighted norm int v^2 |x| dx");
    }
    let nominal = config.resolved_dt(front);
    let steps = if config.t_end == 0.0 {
        0
    } else {
        (config.t_end / nominal - 1e-9).ceil().max(1.0) as usize
    };
    let dt = if steps == 0 { nominal } else { config.t_end / steps as f64 };
    let integ = Integrator::with_dt(front, spec, config, dt)?;

    let mut state = PerturbationState::new(v0.clone());
    state.x0_dot_last = integ.rhs.x0_dot(v0)?;
    let mut series = NormSeries::new(config.p_list.clone())?;
    let first = NormRecord::measure(&state.v, 0.0, 0.0, state.x0_dot_last, &config.p_list)?;
    observer.record(&state, &first)?;

    let mut audit = MonotonicityAudit::default();
    let mut boundary_warnings = 0;
    let (mut l2, mut dv2, mut xd2) = (first.l2, first.dv_l2.powi(2), state.x0_dot_last.powi(2));
    let (mut int_dv2, mut int_x0dot2, mut int_l2sq, mut m_t) = (0.0, 0.0, 0.0, first.linf);
    series.push(first)?;
    for i in 1..=steps {
        state = integ.step(&state)?;
        // avoid drift from repeated addition of dt
        state.t = i as f64 * dt;
        let l2_new = l2_norm(&state.v);
        let dv2_new = l2_norm(&derivative(&state.v, 1)).powi(2);
        let xd2_new = state.x0_dot_last.powi(2);
        int_dv2 += 0.5 * dt * (dv2 + dv2_new);
        int_x0dot2 += 0.5 * dt * (xd2 + xd2_new);
        int_l2sq += 0.5 * dt * (l2 * l2 + l2_new * l2_new);
        m_t = m_t.max(state.v.max_abs());
        if l2_new > l2 * (1.0 + MONOTONE_SLACK) {
            let rel = l2_new / l2 - 1.0;
            audit.violations += 1;
            audit.worst_relative_increase = audit.worst_relative_increase.max(rel);
            audit.first_violation_t.get_or_insert(state.t);
        }
        (l2, dv2, xd2) = (l2_new, dv2_new, xd2_new);
        if i % config.stride == 0 || i == steps {
            let mut r = NormRecord::measure(&state.v, state.t, state.x0, state.x0_dot_last, &config.p_list)?;
            r.m_t = m_t;
            r.int_dv2 = int_dv2;
            r.int_x0dot2 = int_x0dot2;
            r.int_l2sq = int_l2sq;
            if boundary_contamination(&state.v) > BOUNDARY_TOL {
                if boundary_warnings == 0 {
                    log::warn!("perturbation reaches the box edges at t = {:.3}", state.t);
                }
                boundary_warnings += 1;
            }
            observer.record(&state, &r)?;
            series.push(r)?;
        }
    }
    if audit.violations > 0 {
        log::warn!(
            "||v||_2 increased on {} steps (worst relative increase {:.2e})",
            audit.violations,
            audit.worst_relative_increase
        );
    }
    Ok(EvolveOutcome {
        series,
        final_state: state,
        monotonicity: audit,
        boundary_warnings,
        steps,
        dt,
    })
}
