use std::f64::consts::PI;

use frontlab::spectral::io::{read_field_binary, read_field_csv, write_field_binary, write_field_csv};
use frontlab::spectral::{
    apply_multiplier, band_project, dealias, dealiased_product, derivative, fractional_kernel_check, l2_norm,
    lp_norm, make_grid, weighted_l2, Field, Grid,
};
use frontlab::Complex64;

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn grid_examples() {
    let g = make_grid(8, 8.0).unwrap();
    assert_eq!(g.x(), &[-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
    let mut ks: Vec<f64> = g.wavenumbers().to_vec();
    ks.sort_by(f64::total_cmp);
    let expect: Vec<f64> = (-4..4).map(|m| 2.0 * PI * m as f64 / 8.0).collect();
    assert!(sup_diff(&ks, &expect) < 1e-15);
    assert_eq!(make_grid(1024, 80.0).unwrap().h(), 0.078125);
    assert!(make_grid(12, 8.0).is_err());
    assert!(make_grid(16, 0.0).is_err());
}

#[test]
fn multiplier_examples() {
    let g = Grid::new(1024, 80.0).unwrap();
    let f = Field::from_fn(&g, |x| (-x * x / 5.0).exp() * (1.0 + x.sin()));
    let one = vec![Complex64::new(1.0, 0.0); g.n()];
    assert!(sup_diff(apply_multiplier(&f, &one).unwrap().values(), f.values()) < 1e-14);

    let q = 2.0 * PI / g.length();
    let s = Field::from_fn(&g, |x| (q * x).sin());
    let d2: Vec<Complex64> = g.wavenumbers().iter().map(|k| Complex64::new(-k * k, 0.0)).collect();
    let out = apply_multiplier(&s, &d2).unwrap();
    assert!(sup_diff(out.values(), s.scaled(-q * q).values()) < 1e-10);
}

/// `-|D|` applied to `exp(-x^2)` on the periodic box, summed directly over
/// the box frequencies with the exact transform `sqrt(pi) exp(-k^2/4)`.
fn half_laplacian_gaussian(x: f64, length: f64) -> f64 {
    let dk = 2.0 * PI / length;
    let mut s = 0.0;
    for m in 1..4000 {
        let k = m as f64 * dk;
        s += 2.0 * k * PI.sqrt() * (-k * k / 4.0).exp() * (k * x).cos();
    }
    -s / length
}

#[test]
fn half_laplacian_matches_fourier_sum() {
    let g = Grid::new(1024, 80.0).unwrap();
    let f = Field::from_fn(&g, |x| (-x * x).exp());
    let l: Vec<Complex64> = g.wavenumbers().iter().map(|k| Complex64::new(-k.abs(), 0.0)).collect();
    let out = apply_multiplier(&f, &l).unwrap();
    for (j, &x) in g.x().iter().enumerate().step_by(13) {
        let exact = half_laplacian_gaussian(x, g.length());
        assert!((out.values()[j] - exact).abs() < 1e-6, "x = {x}: {} vs {exact}", out.values()[j]);
    }
}

#[test]
fn derivative_examples() {
    let g = Grid::new(1024, 80.0).unwrap();
    let c = Field::from_fn(&g, |_| 3.5);
    assert!(derivative(&c, 1).max_abs() < 1e-13);
    let q = 2.0 * PI / g.length();
    let s = Field::from_fn(&g, |x| (q * x).sin());
    let d = derivative(&s, 1);
    let expect: Vec<f64> = g.x().iter().map(|x| q * (q * x).cos()).collect();
    assert!(sup_diff(d.values(), &expect) < 1e-10);

    // centred differences on a smooth tanh bump agree to O(h^2)
    let f = Field::from_fn(&g, |x| (x / 2.0).tanh() * (-(x / 15.0).powi(2)).exp());
    let d2 = derivative(&f, 2);
    let h = g.h();
    let v = f.values();
    let mut err: f64 = 0.0;
    for j in 1..g.n() - 1 {
        if g.x()[j].abs() < 30.0 {
            let fd = (v[j + 1] - 2.0 * v[j] + v[j - 1]) / (h * h);
            err = err.max((fd - d2.values()[j]).abs());
        }
    }
    // fourth derivative of the bump is below 1, so the truncation term is h^2/12
    assert!(err < h * h / 12.0, "{err}");
    assert!(err > 0.0);
}

#[test]
fn norm_examples() {
    let g = Grid::new(1024, 80.0).unwrap();
    let one = Field::from_fn(&g, |_| 1.0);
    assert!((lp_norm(&one, 2.0).unwrap() - 80f64.sqrt()).abs() < 1e-12);
    let f = Field::from_fn(&g, |x| (x * 1.3).sin() * (-x * x / 40.0).exp());
    assert_eq!(lp_norm(&f, f64::INFINITY).unwrap(), f.max_abs());
    let gauss = Field::from_fn(&g, |x| (-x * x).exp());
    assert!((lp_norm(&gauss, 1.0).unwrap() - PI.sqrt()).abs() < 1e-8);
    assert!(lp_norm(&gauss, 0.5).is_err());
}

#[test]
fn weighted_norm_examples() {
    let g = Grid::new(8192, 80.0).unwrap();
    assert_eq!(weighted_l2(&Field::zeros(&g), 0.0), 0.0);
    // mollified indicator of [-1, 1]; oracle is a fine trapezoid rule
    let bump = |x: f64| 0.5 * (((1.0 - x.abs()) / 0.05).tanh() + 1.0);
    let m = 400_000;
    let dx = 4.0 / m as f64;
    let exact: f64 = (0..=m)
        .map(|i| {
            let x = -2.0 + i as f64 * dx;
            let w = if i == 0 || i == m { 0.5 } else { 1.0 };
            w * bump(x).powi(2) * x.abs()
        })
        .sum::<f64>()
        * dx;
    let w = weighted_l2(&Field::from_fn(&g, bump), 0.0);
    assert!((w - exact.sqrt()).abs() < 1e-4, "{w} vs {}", exact.sqrt());
    assert!((w - 1.0).abs() < 0.05);
    let sym = Field::from_fn(&g, |x| (-x * x / 3.0).exp());
    let e = 1e-4;
    let avg = 0.5 * (weighted_l2(&sym, e) + weighted_l2(&sym, -e));
    assert!((avg - weighted_l2(&sym, 0.0)).abs() < 1e-6);
}

#[test]
fn band_projection_examples() {
    let g = Grid::new(512, 40.0).unwrap();
    let f = Field::from_fn(&g, |x| (-x * x / 4.0).exp() * (3.0 * x).cos() + 0.2);
    let (lo, hi) = band_project(&f, 1e3);
    assert!(sup_diff(lo.values(), f.values()) < 1e-14);
    assert!(hi.max_abs() < 1e-14);
    let (lo, hi) = band_project(&f, 1e-9);
    let mean = f.values().iter().sum::<f64>() / g.n() as f64;
    assert!(lo.values().iter().all(|v| (v - mean).abs() < 1e-14));
    assert!(sup_diff(hi.add(&lo).unwrap().values(), f.values()) < 1e-14);
    let (lo, hi) = band_project(&f, 0.3);
    let total = l2_norm(&f).powi(2);
    let split = l2_norm(&lo).powi(2) + l2_norm(&hi).powi(2);
    assert!((total - split).abs() <= 1e-12 * total);
}

#[test]
fn dealiased_product_matches_fine_grid() {
    let n = 128;
    let g = Grid::new(n, 2.0 * PI).unwrap();
    let fine = g.refined(2).unwrap();
    let cut = n / 3;
    let a_modes: Vec<(usize, f64, f64)> = (0..=cut).map(|m| (m, 1.0 / (1.0 + m as f64), 0.3 / (2.0 + m as f64))).collect();
    let b_modes: Vec<(usize, f64, f64)> = (0..=cut).map(|m| (m, (m as f64 * 0.7).sin(), (m as f64).cos() / (1.0 + m as f64))).collect();
    let build = |grid: &Grid, modes: &[(usize, f64, f64)]| {
        Field::from_fn(grid, |x| modes.iter().map(|&(m, c, s)| c * (m as f64 * x).cos() + s * (m as f64 * x).sin()).sum())
    };
    let (a, b) = (build(&g, &a_modes), build(&g, &b_modes));
    let p = dealiased_product(&a, &b).unwrap();
    // exact product on the fine grid (no aliasing), then truncated to |m| <= N/3
    let exact = build(&fine, &a_modes).mul(&build(&fine, &b_modes)).unwrap();
    let mut s = fine.fft(exact.values());
    for (i, c) in s.iter_mut().enumerate() {
        let m = fine.mode(i).unsigned_abs() as usize;
        if m > cut {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    let truncated = fine.ifft_real(s);
    let coarse: Vec<f64> = truncated.iter().step_by(2).copied().collect();
    assert!(sup_diff(p.values(), &coarse) < 1e-12, "{}", sup_diff(p.values(), &coarse));

    let mut spec = g.fft(a.values());
    dealias(&mut spec);
    let once = spec.clone();
    dealias(&mut spec);
    assert_eq!(spec, once);
}

#[test]
fn kernel_examples() {
    let g = Grid::new(1024, 80.0).unwrap();
    let heat = fractional_kernel_check(1.0, &g, 1.0).unwrap();
    assert!(heat.min >= -1e-12);
    assert!((heat.integral - 1.0).abs() < 1e-8);
    let poisson = fractional_kernel_check(0.5, &g, 1.0).unwrap();
    assert!(poisson.min >= -1e-10 * poisson.max);
    // periodized Poisson kernel in closed form
    let (l, t) = (g.length(), 1.0);
    let exact = |x: f64| {
        let a = 2.0 * PI * t / l;
        (1.0 / l) * a.sinh() / (a.cosh() - (2.0 * PI * x / l).cos())
    };
    assert!((poisson.max - exact(0.0)).abs() < 1e-8);
    let super_diff = fractional_kernel_check(1.5, &g, 1.0).unwrap();
    assert!(super_diff.min < 0.0 && !super_diff.positive);
}

#[test]
fn field_files_round_trip() {
    let dir = std::env::temp_dir().join(format!("frontlab-field-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let g = Grid::new(64, 10.0).unwrap();
    let f = Field::from_fn(&g, |x| (x / 3.0).sin() + 1e-17 * x);
    write_field_csv(&dir.join("f.csv"), &f).unwrap();
    write_field_binary(&dir.join("f.bin"), &f).unwrap();
    assert_eq!(read_field_csv(&dir.join("f.csv")).unwrap().values(), f.values());
    let b = read_field_binary(&dir.join("f.bin")).unwrap();
    assert_eq!(b.values(), f.values());
    assert_eq!(b.grid().length(), 10.0);
    std::fs::remove_dir_all(&dir).unwrap();
}
