//! Negative-eigenvalue counts of `H_eps = -(1 - eps) d^2 + phi'/2` and the
//! resulting stability certificate, plus a sweep over KdV-Burgers fronts.

mod schrodinger;
mod sweep;
mod tridiag;

use serde::{Deserialize, Serialize};

pub use schrodinger::{SchrodingerDiscretization, MIN_NODES};
pub use sweep::{sweep_nu, sweep_row, threshold, SweepOptions, SweepRow};
pub use tridiag::{count_negative_eigenvalues, SymTridiagonal};

use crate::error::{Error, Result};
use crate::front::FrontProfile;
use crate::spectral::upsample;

/// Default sample of `eps` values.
pub const DEFAULT_EPS: [f64; 6] = [0.01, 0.05, 0.1, 0.2, 0.4, 0.8];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CertifyOptions {
    pub eps: Vec<f64>,
    /// Dirichlet half-width as a fraction of the box length.
    pub domain_fraction: f64,
    /// Eigenvalues within this distance of zero are flagged.
    pub zero_tol: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            eps: DEFAULT_EPS.to_vec(),
            domain_fraction: 0.45,
            zero_tol: 1e-10,
        }
    }
}

/// Counts for one value of `eps` at three resolutions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsCount {
    pub eps: f64,
    pub count: usize,
    /// Count with twice as many nodes.
    pub count_refined: usize,
    /// Count on half the Dirichlet interval.
    pub count_half_domain: usize,
    pub resolved: bool,
    /// An eigenvalue lies within the zero tolerance.
    pub near_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralCertificate {
    pub operator: String,
    pub front_method: String,
    /// Reference count at `eps = 0`.
    pub at_zero: EpsCount,
    pub samples: Vec<EpsCount>,
    /// Some resolved sample has exactly one negative eigenvalue.
    pub satisfied: bool,
    pub nodes: usize,
    pub half_width: f64,
    pub all_resolved: bool,
}

impl SpectralCertificate {
    pub fn counts(&self) -> Vec<usize> {
        self.samples.iter().map(|s| s.count).collect()
    }

    /// Smallest count over the samples and the first `eps` attaining it.
    pub fn min_count(&self) -> (usize, f64) {
        self.samples
            .iter()
            .fold((usize::MAX, f64::NAN), |acc, s| if s.count < acc.0 { (s.count, s.eps) } else { acc })
    }
}

struct Levels {
    coarse: SchrodingerDiscretization,
    fine: SchrodingerDiscretization,
    half: SchrodingerDiscretization,
}

fn count_row(levels: &Levels, eps: f64, zero_tol: f64) -> Result<EpsCount> {
    let t = levels.coarse.matrix(eps)?;
    let count = count_negative_eigenvalues(&t)?;
    let near_zero = t.count_below(-zero_tol)? != t.count_below(zero_tol)?;
    let count_refined = count_negative_eigenvalues(&levels.fine.matrix(eps)?)?;
    let count_half_domain = count_negative_eigenvalues(&levels.half.matrix(eps)?)?;
    Ok(EpsCount {
        eps,
        count,
        count_refined,
        count_half_domain,
        resolved: count == count_refined && count == count_half_domain,
        near_zero,
    })
}

/// Counts negative eigenvalues of `H_eps` for each sampled `eps`.
///
/// The potential `phi'/2` is sampled on the front grid inside
/// `|x| < domain_fraction * L`; the refined level uses the trigonometric
/// interpolant on a twice finer grid.
pub fn certify_front(front: &FrontProfile, opts: &CertifyOptions) -> Result<SpectralCertificate> {
    if let Some(e) = opts.eps.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
        return Err(Error::InvalidParameter(format!("eps samples must lie in (0, 1), got {e}")));
    }
    let grid = front.grid();
    let half_width = opts.domain_fraction * grid.length();
    let pot: Vec<f64> = front.phi_prime().values().iter().map(|d| 0.5 * d).collect();
    let fine_dp = upsample(front.phi_prime(), 2)?;
    let fine_pot: Vec<f64> = fine_dp.values().iter().map(|d| 0.5 * d).collect();
    let levels = Levels {
        coarse: SchrodingerDiscretization::new(grid.x(), &pot, half_width)?,
        fine: SchrodingerDiscretization::new(fine_dp.grid().x(), &fine_pot, half_width)?,
        half: SchrodingerDiscretization::new(grid.x(), &pot, 0.5 * half_width)?,
    };
    let at_zero = count_row(&levels, 0.0, opts.zero_tol)?;
    let samples = opts
        .eps
        .iter()
        .map(|&e| count_row(&levels, e, opts.zero_tol))
        .collect::<Result<Vec<_>>>()?;
    let satisfied = samples.iter().any(|s| s.resolved && s.count == 1);
    let could_be = samples
        .iter()
        .any(|s| s.count == 1 || s.count_refined == 1 || s.count_half_domain == 1);
    if could_be && !satisfied {
        let bad: Vec<String> = samples
            .iter()
            .filter(|s| !s.resolved)
            .map(|s| format!("eps = {}: {}/{}/{}", s.eps, s.count, s.count_refined, s.count_half_domain))
            .collect();
        return Err(Error::UnresolvedCount(bad.join("; ")));
    }
    Ok(SpectralCertificate {
        operator: front.operator().label().to_string(),
        front_method: front.method().to_string(),
        all_resolved: at_zero.resolved && samples.iter().all(|s| s.resolved),
        at_zero,
        samples,
        satisfied,
        nodes: levels.coarse.len(),
        half_width,
    })
}
