use serde::{Deserialize, Serialize};

use super::expr::SymbolExpr;

/// Absolute tolerance (scaled by magnitude) for every symbol check.
pub const SYMBOL_TOL: f64 = 1e-12;

/// Evidence that a symbol defines a real, dissipative operator annihilating constants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub zero_at_origin: bool,
    pub hermitian: bool,
    pub dissipative: bool,
    /// Largest sampled `Re l(k)`.
    pub max_re: f64,
    pub passed: bool,
    /// Evaluation failure, when the symbol could not be sampled at all.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl AdmissibilityReport {
    fn failed(error: String) -> Self {
        Self {
            zero_at_origin: false,
            hermitian: false,
            dissipative: false,
            max_re: f64::NAN,
            passed: false,
            error: Some(error),
        }
    }
}

/// Symmetric sample set built from the magnitudes of `wavenumbers`, refined
/// geometrically towards `k = 0` and always containing the origin.
pub fn admissibility_samples(wavenumbers: &[f64]) -> Vec<f64> {
    let mut mags: Vec<f64> = wavenumbers
        .iter()
        .map(|k| k.abs())
        .filter(|k| *k > 0.0 && k.is_finite())
        .collect();
    mags.extend((1..=8).map(|j| 10f64.powi(-j)));
    mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
    mags.dedup();
    let mut out = Vec::with_capacity(2 * mags.len() + 1);
    out.extend(mags.iter().rev().map(|k| -k));
    out.push(0.0);
    out.extend(mags.iter().copied());
    out
}

/// Sample set used when no simulation grid is at hand: the wavenumbers of a
/// 1024-point grid on a box of length 80, plus a few large wavenumbers.
pub fn default_samples() -> Vec<f64> {
    let n = 1024;
    let l = 80.0;
    let mut ks: Vec<f64> = (1..=n / 2)
        .map(|m| 2.0 * std::f64::consts::PI * m as f64 / l)
        .collect();
    ks.extend([100.0, 300.0, 1000.0]);
    admissibility_samples(&ks)
}

/// Checks `l(0) = 0`, Hermitian symmetry `l(-k) = conj l(k)` and `Re l <= 0`
/// on the sample set.
pub fn validate_admissibility(expr: &SymbolExpr, samples: &[f64]) -> AdmissibilityReport {
    let mut mags: Vec<f64> = samples.iter().map(|k| k.abs()).filter(|k| *k > 0.0).collect();
    mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
    mags.dedup();

    let l0 = match expr.eval(0.0) {
        Ok(v) => v,
        Err(e) => return AdmissibilityReport::failed(e.to_string()),
    };
    let zero_at_origin = l0.norm() <= SYMBOL_TOL;
    let mut hermitian = true;
    let mut dissipative = l0.re <= SYMBOL_TOL * (1.0 + l0.norm());
    let mut max_re = l0.re;
    for &k in &mags {
        let (lp, lm) = match (expr.eval(k), expr.eval(-k)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return AdmissibilityReport::failed(e.to_string()),
        };
        let scale = lp.norm().max(lm.norm()).max(1.0);
        if (lm - lp.conj()).norm() > SYMBOL_TOL * scale {
            hermitian = false;
        }
        for v in [lp, lm] {
            max_re = max_re.max(v.re);
            if v.re > SYMBOL_TOL * (1.0 + v.norm()) {
                dissipative = false;
            }
        }
    }
    AdmissibilityReport {
        zero_at_origin,
        hermitian,
        dissipative,
        max_re,
        passed: zero_at_origin && hermitian && dissipative,
        error: None,
    }
}
