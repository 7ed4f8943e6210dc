/// Result of a restarted GMRES solve.
#[derive(Clone, Debug)]
pub struct GmresOutcome {
    pub x: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Smallest `|R_jj|` seen in the triangular factor, relative to the
    /// largest one: a cheap indicator of near-singularity.
    pub min_pivot_ratio: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Right-preconditioned restarted GMRES for `A x = b`, starting from zero.
///
/// `apply` computes `A v`, `precond` computes `P^{-1} v`. Stops when
/// `||b - A x|| <= rtol ||b||`.
pub fn gmres(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    precond: impl Fn(&[f64]) -> Vec<f64>,
    b: &[f64],
    rtol: f64,
    restart: usize,
    max_iter: usize,
) -> GmresOutcome {
    let n = b.len();
    let bnorm = norm(b);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return GmresOutcome {
            x,
            residual: 0.0,
            iterations: 0,
            converged: true,
            min_pivot_ratio: 1.0,
        };
    }
    let target = rtol * bnorm;
    let mut total = 0;
    let mut min_ratio = f64::INFINITY;
    let mut r: Vec<f64> = b.to_vec();
    let mut beta = bnorm;
    while total < max_iter {
        let mut v: Vec<Vec<f64>> = vec![r.iter().map(|ri| ri / beta).collect()];
        let mut hcols: Vec<Vec<f64>> = Vec::new();
        let mut cs: Vec<f64> = Vec::new();
        let mut sn: Vec<f64> = Vec::new();
        let mut g = vec![beta];
        let mut zs: Vec<Vec<f64>> = Vec::new();
        let mut rmax: f64 = 0.0;
        let mut rmin = f64::INFINITY;
        for j in 0..restart {
            total += 1;
            let z = precond(&v[j]);
            let mut w = apply(&z);
            zs.push(z);
            let mut hcol = vec![0.0; j + 2];
            // modified Gram-Schmidt, twice for stability
            for _ in 0..2 {
                for (i, vi) in v.iter().enumerate() {
                    let hij = dot(&w, vi);
                    hcol[i] += hij;
                    for (wk, vk) in w.iter_mut().zip(vi) {
                        *wk -= hij * vk;
                    }
                }
            }
            let hnext = norm(&w);
            hcol[j + 1] = hnext;
            for i in 0..j {
                let t = cs[i] * hcol[i] + sn[i] * hcol[i + 1];
                hcol[i + 1] = -sn[i] * hcol[i] + cs[i] * hcol[i + 1];
                hcol[i] = t;
            }
            let d = hcol[j].hypot(hcol[j + 1]);
            let (c, s) = if d == 0.0 { (1.0, 0.0) } else { (hcol[j] / d, hcol[j + 1] / d) };
            cs.push(c);
            sn.push(s);
            hcol[j] = d;
            hcol[j + 1] = 0.0;
            g.push(-s * g[j]);
            g[j] *= c;
            rmax = rmax.max(d.abs());
            rmin = rmin.min(d.abs());
            hcols.push(hcol);
            let res = g[j + 1].abs();
            let done = res <= target || total >= max_iter || hnext == 0.0;
            if !done {
                v.push(w.iter().map(|wk| wk / hnext).collect());
            }
            if done || j + 1 == restart {
                // back substitution
                let m = j + 1;
                let mut y = vec![0.0; m];
                for i in (0..m).rev() {
                    let mut s = g[i];
                    for l in i + 1..m {
                        s -= hcols[l][i] * y[l];
                    }
                    y[i] = if hcols[i][i] != 0.0 { s / hcols[i][i] } else { 0.0 };
                }
                for (yi, zi) in y.iter().zip(&zs) {
                    for (xk, zk) in x.iter_mut().zip(zi) {
                        *xk += yi * zk;
                    }
                }
                break;
            }
        }
        if rmax > 0.0 {
            min_ratio = min_ratio.min(rmin / rmax);
        }
        let ax = apply(&x);
        r = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        beta = norm(&r);
        if beta <= target {
            return GmresOutcome {
                x,
                residual: beta / bnorm,
                iterations: total,
                converged: true,
                min_pivot_ratio: min_ratio,
            };
        }
    }
    GmresOutcome {
        x,
        residual: beta / bnorm,
        iterations: total,
        converged: false,
        min_pivot_ratio: min_ratio,
    }
}
