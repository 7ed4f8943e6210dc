use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix: `diag[i]` and `off[i]` = entry `(i, i+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::InvalidParameter(format!(
                "tridiagonal needs n diagonal and n-1 off-diagonal entries, got {} and {}",
                diag.len(),
                off.len()
            )));
        }
        if diag.iter().chain(&off).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite matrix entry".into()));
        }
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Pivots of `T - sigma I = L D L^T`; `None` on an exact zero pivot.
    fn pivots_below(&self, sigma: f64) -> Option<usize> {
        let mut count = 0;
        let mut d = self.diag[0] - sigma;
        for i in 0..self.diag.len() {
            if i > 0 {
                d = (self.diag[i] - sigma) - self.off[i - 1] * self.off[i - 1] / d;
            }
            if d == 0.0 || !d.is_finite() {
                return None;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        Some(count)
    }

    /// Number of eigenvalues strictly below `sigma` (Sylvester inertia). An
    /// exact zero pivot is resolved by moving the shift down by `1e-13`.
    pub fn count_below(&self, sigma: f64) -> Result<usize> {
        if let Some(c) = self.pivots_below(sigma) {
            return Ok(c);
        }
        let shifted = sigma - 1e-13 * (1.0 + sigma.abs());
        self.pivots_below(shifted).ok_or_else(|| {
            Error::InertiaBreakdown(format!("zero pivot at shift {sigma} persists after perturbation"))
        })
    }

    /// Eigenvalues by bisection on the inertia count, ascending.
    pub fn eigenvalues(&self, tol: f64) -> Result<Vec<f64>> {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let (mut a, mut b) = (lo - 1.0, hi + 1.0);
            while b - a > tol * (1.0 + a.abs().max(b.abs())) {
                let m = 0.5 * (a + b);
                if self.count_below(m)? > k {
                    b = m;
                } else {
                    a = m;
                }
            }
            out.push(0.5 * (a + b));
        }
        Ok(out)
    }
}

/// Number of strictly negative eigenvalues of `t`.
pub fn count_negative_eigenvalues(t: &SymTridiagonal) -> Result<usize> {
    t.count_below(0.0)
}
