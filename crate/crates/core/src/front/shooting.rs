use super::FrontProfile;
use crate::error::{Error, Result};
use crate::spectral::{Field, Grid};
use crate::symbol::Preset;

#[derive(Clone, Debug)]
pub struct ShootingOptions {
    /// Tolerance reported against the profile residual.
    pub tol: f64,
    /// Local error tolerance of the Runge-Kutta pair.
    pub rk_tol: f64,
    /// Initial offset from the rest state along the unstable direction.
    pub delta: f64,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            rk_tol: 1e-13,
            delta: 1e-8,
        }
    }
}

type State = [f64; 2];

// Dormand-Prince 5(4) tableau
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// One Dormand-Prince step; returns the new state and the scaled error.
fn dopri_step(f: &impl Fn(&State) -> State, y: &State, h: f64, tol: f64) -> (State, f64) {
    let mut k = [[0.0; 2]; 7];
    k[0] = f(y);
    for s in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            for i in 0..2 {
                ys[i] += h * A[s][j] * kj[i];
            }
        }
        k[s] = f(&ys);
    }
    let mut out = *y;
    let mut e = [0.0; 2];
    for i in 0..2 {
        for s in 0..7 {
            out[i] += h * B[s] * k[s][i];
            e[i] += h * E[s] * k[s][i];
        }
    }
    // relative to the state size: near the rest state the deviation itself
    // is tiny and an absolute floor would lose the phase
    let size = y.iter().chain(out.iter()).fold(0.0f64, |m, v| m.max(v.abs()));
    let err = e[0].abs().max(e[1].abs()) / (tol * size.max(f64::MIN_POSITIVE));
    (out, err)
}

/// Adaptive integration from `s0` to `s1 > s0` with step-size control.
fn integrate(
    f: &impl Fn(&State) -> State,
    mut y: State,
    s0: f64,
    s1: f64,
    h: &mut f64,
    tol: f64,
) -> Result<State> {
    let mut s = s0;
    let mut guard = 0usize;
    while s < s1 {
        guard += 1;
        if guard > 10_000_000 {
            return Err(Error::NoConnection("step-size underflow in shooting".into()));
        }
        let step = h.min(s1 - s);
        let (yn, err) = dopri_step(f, &y, step, tol);
        if err <= 1.0 {
            y = yn;
            s = if step == s1 - s { s1 } else { s + step };
            if y.iter().any(|v| !v.is_finite() || v.abs() > 1e6) {
                return Err(Error::NoConnection(format!("trajectory diverged at s = {s}")));
            }
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        *h = (step * fac).max(1e-12);
    }
    Ok(y)
}

/// Front of `nu phi'' + phi' + (1 - phi^2)/2 = 0` for `nu > 0` sampled at
/// ascending `s` values relative to the zero crossing.
///
/// The state is `(eta, phi')` with `eta = phi - 1`.
fn unstable_branch(nu: f64, targets: &[f64], opts: &ShootingOptions) -> Result<Vec<f64>> {
    let r = (-1.0 + (1.0 + 4.0 * nu).sqrt()) / (2.0 * nu);
    let f = move |y: &State| [y[1], -(y[1] - y[0] - 0.5 * y[0] * y[0]) / nu];
    let delta = opts.delta;
    let y0 = [-delta, -delta * r];

    // locate the first zero of phi
    let mut y = y0;
    let mut s = 0.0;
    let mut h = 0.01;
    let s_max = 200.0 / r.min(1.0 / nu) + 1000.0;
    let crossing = loop {
        let (yn, err) = dopri_step(&f, &y, h, opts.rk_tol);
        if err <= 1.0 {
            if yn[0] <= -1.0 {
                // bisection on the length of a single step from (s, y)
                let (mut a, mut b) = (0.0, h);
                for _ in 0..200 {
                    let m = 0.5 * (a + b);
                    let (ym, _) = dopri_step(&f, &y, m, opts.rk_tol);
                    if ym[0] > -1.0 {
                        a = m;
                    } else {
                        b = m;
                    }
                    if b - a < 1e-15 {
                        break;
                    }
                }
                break s + 0.5 * (a + b);
            }
            y = yn;
            s += h;
            if s > s_max || y.iter().any(|v| !v.is_finite()) {
                return Err(Error::NoConnection(format!(
                    "no zero crossing within s = {s_max:.1}"
                )));
            }
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = (h * fac).clamp(1e-10, 0.5);
    };

    let mut out = Vec::with_capacity(targets.len());
    let mut y = y0;
    let mut s = 0.0;
    let mut h = 0.01;
    for &t in targets {
        let st = t + crossing;
        if st < 0.0 {
            out.push(1.0 - delta * (r * st).exp());
            continue;
        }
        y = integrate(&f, y, s, st, &mut h, opts.rk_tol)?;
        h = h.min(0.5);
        s = st;
        out.push(1.0 + y[0]);
    }
    Ok(out)
}

/// KdV-Burgers front for `L = nu d^3` via the first integral
/// `nu phi'' + phi' + (1 - phi^2)/2 = 0`, with `phi(0) = 0`.
///
/// For `nu > 0` the rest state `phi = 1` has a one-dimensional unstable
/// manifold that is followed forward. For `nu < 0` the profile is the
/// reflection `phi_nu(x) = -phi_{-nu}(-x)`.
pub fn shoot_local_front(nu: f64, grid: &Grid, opts: &ShootingOptions) -> Result<FrontProfile> {
    if nu == 0.0 || !nu.is_finite() {
        return Err(Error::InvalidParameter(format!("shooting needs nonzero finite nu, got {nu}")));
    }
    let reflect = nu < 0.0;
    let x = grid.x();
    let n = x.len();
    // targets in ascending order of the integration variable
    let targets: Vec<f64> = if reflect {
        (0..n).rev().map(|j| -x[j]).collect()
    } else {
        x.to_vec()
    };
    let vals = unstable_branch(nu.abs(), &targets, opts)?;
    let phi: Vec<f64> = if reflect {
        // vals[i] is psi(-x[n-1-i]); phi(x_j) = -psi(-x_j)
        (0..n).map(|j| -vals[n - 1 - j]).collect()
    } else {
        vals
    };
    if phi.iter().any(|v| v.abs() > 10.0) {
        return Err(Error::NoConnection("profile left the bounded region".into()));
    }
    let spec = Preset::Kdvb { nu }.spec()?;
    let front = FrontProfile::from_samples(Field::new(grid, phi)?, &spec, "shooting")?;
    if front.residual_sup() > opts.tol {
        let fit = kdvb_grid(nu, 30.0, 0.08).map_or(String::new(), |g| {
            format!("; the tails need about N = {}, L = {}", g.n(), g.length())
        });
        return Err(Error::NoConnection(format!(
            "residual {:.2e} above tolerance {:.1e} for nu = {nu} on N = {}, L = {}{fit}",
            front.residual_sup(),
            opts.tol,
            grid.n(),
            grid.length()
        )));
    }
    Ok(front)
}

/// Exponential decay rates of `phi - 1` as `x -> -inf` and of `phi + 1` as
/// `x -> +inf` for the KdV-Burgers front (real parts for oscillatory tails).
pub fn kdvb_decay_rates(nu: f64) -> (f64, f64) {
    if nu == 0.0 {
        return (0.5, 0.5);
    }
    let a = nu.abs();
    // nu > 0: left root of a r^2 + r - 1, right roots of a r^2 + r + 1
    let unstable = (-1.0 + (1.0 + 4.0 * a).sqrt()) / (2.0 * a);
    let disc = 1.0 - 4.0 * a;
    let stable = if disc >= 0.0 {
        (1.0 - disc.sqrt()) / (2.0 * a)
    } else {
        1.0 / (2.0 * a)
    };
    if nu > 0.0 {
        (unstable, stable)
    } else {
        (stable, unstable)
    }
}

/// Grid on which the KdV-Burgers front tails fall below `e^{-decades}`
/// inside the box, with spacing at most `h_max`.
pub fn kdvb_grid(nu: f64, decades: f64, h_max: f64) -> Result<Grid> {
    let (l, r) = kdvb_decay_rates(nu);
    let half = (decades / l.min(r) + 8.0).max(40.0);
    let length = 2.0 * half;
    let n = ((length / h_max).ceil() as usize).next_power_of_two().max(crate::spectral::MIN_POINTS);
    Grid::new(n, length)
}
