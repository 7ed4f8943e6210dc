//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use std::time::Instant;

use frontlab::certify::{count_negative_eigenvalues, sweep_nu, threshold, SchrodingerDiscretization, SweepOptions};
use frontlab::diagnostics::{
    check_energy_inequality, compare_to_theorem, fit_rate, l1_contraction, TheoremModel, DEFAULT_DELTA,
};
use frontlab::evolution::{
    cole_hopf_exact, evolve, make_perturbation, EvolveOutcome, PerturbationKind, PerturbationState, RhsTerms,
    StepperConfig,
};
use frontlab::front::{
    closed_form_burgers, galilean_normalize, kdvb_grid, shoot_local_front, solve_front, FrontOptions,
    GalileanParams, ShootingOptions,
};
use frontlab::spectral::{
    apply_multiplier, band_measure, band_project, derivative, fractional_kernel_check, l2_norm, lp_norm, Field, Grid,
};
use frontlab::symbol::{FracTerm, MultiplierSpec, Preset};
use frontlab::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = (bool, String);

fn frac(a: f64, alpha: f64) -> MultiplierSpec {
    Preset::Frac { terms: vec![FracTerm { a, alpha }] }.spec().unwrap()
}

fn kdvb(nu: f64) -> MultiplierSpec {
    Preset::Kdvb { nu }.spec().unwrap()
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn ignore(_: &PerturbationState, _: &frontlab::diagnostics::NormRecord) -> frontlab::Result<()> {
    Ok(())
}

fn run(spec: &MultiplierSpec, grid: &Grid, v0: &Field, cfg: &StepperConfig) -> frontlab::Result<EvolveOutcome> {
    let front = solve_front("auto", spec, grid, &FrontOptions::default())?;
    evolve(v0, &front, spec, cfg, &mut ignore)
}

fn cole_hopf_oracle() -> Outcome {
    let start = Instant::now();
    let g = Grid::new(1024, 80.0).unwrap();
    let front = closed_form_burgers(&g).unwrap();
    let v0 = make_perturbation(&g, PerturbationKind::Gaussian, 0.3, 1.0, 0).unwrap();
    let spec = Preset::Burgers.spec().unwrap();
    let cfg = StepperConfig { dt: Some(1e-3), t_end: 1.0, stride: 1000, ..Default::default() };
    let s = evolve(&v0, &front, &spec, &cfg, &mut ignore).unwrap().final_state;
    let pts: Vec<f64> = g.x().iter().map(|y| y + s.x0).collect();
    let exact = cole_hopf_exact(&front.phi().add(&v0).unwrap(), s.t, &pts).unwrap();
    let u: Vec<f64> = front.phi().values().iter().zip(s.v.values()).map(|(a, b)| a + b).collect();
    let err = sup_diff(&u, &exact);
    let secs = start.elapsed().as_secs_f64();
    (err <= 1e-6 && secs <= 60.0, format!("sup error {err:.2e} at t = 1, {secs:.1} s"))
}

fn closed_form_front() -> Outcome {
    let g = Grid::new(1024, 80.0).unwrap();
    let exact: Vec<f64> = g.x().iter().map(|x| -(x / 2.0).tanh()).collect();
    let burgers = Preset::Burgers.spec().unwrap();
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for method in ["closed_form", "newton"] {
        let f = solve_front(method, &burgers, &g, &FrontOptions::default()).unwrap();
        let e = sup_diff(f.phi().values(), &exact);
        worst = worst.max(e);
        parts.push(format!("{method} {e:.1e}"));
    }
    (worst <= 1e-8, parts.join(", "))
}

fn explicit_u(y: f64) -> f64 {
    let s = 5.0 * y / 12.0;
    0.5 / s.cosh().powi(2) - s.tanh()
}

fn explicit_kdvb_front() -> Outcome {
    let nu = -6.0 / 25.0;
    let g = kdvb_grid(nu, 30.0, 0.08).unwrap();
    let f = shoot_local_front(nu, &g, &ShootingOptions::default()).unwrap();
    // profiles are phased with phi(0) = 0; locate the zero of U
    let (mut a, mut b) = (0.0, 5.0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if explicit_u(m) > 0.0 {
            a = m
        } else {
            b = m
        }
    }
    let y0 = 0.5 * (a + b);
    let exact: Vec<f64> = g.x().iter().map(|x| explicit_u(x + y0)).collect();
    let err = sup_diff(f.phi().values(), &exact);
    let (p, _) = galilean_normalize(0.0, -24.0 / 5.0, &kdvb(-0.1)).unwrap();
    let frame = (p.c + 1.0).abs() < 1e-14 && (p.lambda - 2.4).abs() < 1e-14;
    (
        err <= 1e-7 && f.residual_sup() <= 1e-8 && frame,
        format!("sup error {err:.2e}, residual {:.2e}, c = {}, lambda = {}", f.residual_sup(), p.c, p.lambda),
    )
}

fn poschl_teller(depth: f64, half: f64, nodes: usize) -> usize {
    let h = 2.0 * half / (nodes + 1) as f64;
    let xs: Vec<f64> = (1..=nodes).map(|i| -half + i as f64 * h).collect();
    let v: Vec<f64> = xs.iter().map(|x| -depth / (x / 2.0).cosh().powi(2)).collect();
    let d = SchrodingerDiscretization::new(&xs, &v, half).unwrap();
    count_negative_eigenvalues(&d.matrix(0.0).unwrap()).unwrap()
}

fn eigenvalue_counting() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (depth, expected) in [(0.25, 1), (0.75, 2)] {
        let counts = [
            poschl_teller(depth, 40.0, 4000),
            poschl_teller(depth, 40.0, 8000),
            poschl_teller(depth, 80.0, 8000),
        ];
        ok &= counts.iter().all(|c| *c == expected);
        parts.push(format!("depth {depth}: {counts:?}"));
    }
    (ok, parts.join(", "))
}

fn spectral_condition() -> Outcome {
    let opts = SweepOptions::default();
    let small: Vec<f64> = (1..=5).map(|i| 0.05 * i as f64).collect();
    let rows = sweep_nu(&small, &opts);
    let all = rows.iter().all(|r| r.satisfied == Some(true));
    let nus: Vec<f64> = (2..=20).map(|i| 0.25 * i as f64).collect();
    let rows = sweep_nu(&nus, &opts);
    let th = threshold(&rows).unwrap_or(0.0);
    (
        all && (3.4..=4.6).contains(&th),
        format!("nu in 0.05..0.25 satisfied: {all}; threshold {th}"),
    )
}

fn matrix_specs() -> Vec<(&'static str, MultiplierSpec)> {
    vec![
        ("burgers", Preset::Burgers.spec().unwrap()),
        ("kdvb(0.2)", kdvb(0.2)),
        ("kdvb(-0.2)", kdvb(-0.2)),
        ("kdvb(-6/25)", kdvb(-6.0 / 25.0)),
        ("bo", Preset::Bo.spec().unwrap()),
        ("hilbert", Preset::Hilbert.spec().unwrap()),
        ("frac(1,0.5)", frac(1.0, 0.5)),
    ]
}

struct MatrixRun {
    label: String,
    l2sq0: f64,
    outcome: frontlab::Result<EvolveOutcome>,
}

fn test_matrix() -> Vec<MatrixRun> {
    let g = Grid::new(2048, 160.0).unwrap();
    let gauss = make_perturbation(&g, PerturbationKind::Gaussian, 0.5, 2.0, 0).unwrap();
    let odd = make_perturbation(&g, PerturbationKind::OddGaussianDerivative, 0.5, 2.0, 0).unwrap();
    let large = gauss.scaled(1.0 / l2_norm(&gauss));
    let cfg = StepperConfig { t_end: 50.0, stride: 20, ..Default::default() };
    let mut runs = Vec::new();
    for (name, spec) in matrix_specs() {
        for (kind, v0) in [("gaussian", &gauss), ("odd", &odd), ("large", &large)] {
            runs.push(MatrixRun {
                label: format!("{name}/{kind}"),
                l2sq0: l2_norm(v0).powi(2),
                outcome: run(&spec, &g, v0, &cfg),
            });
        }
    }
    runs
}

fn monotonicity(runs: &[MatrixRun]) -> Outcome {
    let bad: Vec<String> = runs
        .iter()
        .filter_map(|r| match &r.outcome {
            Ok(o) if o.monotonicity.passed() => None,
            Ok(o) => Some(format!("{} ({} steps)", r.label, o.monotonicity.violations)),
            Err(e) => Some(format!("{}: {e}", r.label)),
        })
        .collect();
    (bad.is_empty(), format!("{} runs, failures: {}", runs.len(), list(&bad)))
}

fn energy(runs: &[MatrixRun]) -> Outcome {
    let mut bad = Vec::new();
    let mut c_min = f64::INFINITY;
    let mut cumulative: f64 = 0.0;
    for r in runs {
        let Ok(o) = &r.outcome else {
            bad.push(format!("{}: run failed", r.label));
            continue;
        };
        match check_energy_inequality(&o.series) {
            Ok(e) if e.c_fit > 0.0 && e.violations == 0 => c_min = c_min.min(e.c_fit),
            Ok(e) => bad.push(format!("{} (C {:.3}, {} violations)", r.label, e.c_fit, e.violations)),
            Err(e) => bad.push(format!("{}: {e}", r.label)),
        }
        let last = o.series.records.last().unwrap();
        let ratio = last.int_dv2.max(last.int_x0dot2) / r.l2sq0;
        cumulative = cumulative.max(ratio);
        if ratio > 10.0 {
            bad.push(format!("{} cumulative ratio {ratio:.2}", r.label));
        }
    }
    let g = Grid::new(512, 80.0).unwrap();
    let v0 = make_perturbation(&g, PerturbationKind::Gaussian, 0.5, 2.0, 0).unwrap();
    let heat = StepperConfig {
        t_end: 10.0,
        dt: Some(0.01),
        stride: 20,
        terms: RhsTerms { operator: false, front: false, nonlinear: false, modulation: false },
        ..Default::default()
    };
    let c_heat = run(&Preset::Burgers.spec().unwrap(), &g, &v0, &heat)
        .and_then(|o| check_energy_inequality(&o.series))
        .map_or(f64::NAN, |e| e.c_fit);
    let heat_ok = (c_heat - 2.0).abs() <= 0.02;
    (
        bad.is_empty() && heat_ok,
        format!(
            "min C_fit {c_min:.3} over the matrix, heat C_fit {c_heat:.4}, max cumulative/||v0||^2 {cumulative:.2}, failures: {}",
            list(&bad)
        ),
    )
}

fn list(v: &[String]) -> String {
    if v.is_empty() {
        "none".into()
    } else {
        v.join("; ")
    }
}

fn kdvb_envelope() -> Outcome {
    let start = Instant::now();
    let g = Grid::new(2048, 160.0).unwrap();
    let v0 = make_perturbation(&g, PerturbationKind::Gaussian, 0.5, 2.0, 0).unwrap();
    let cfg = StepperConfig { t_end: 200.0, stride: 20, ..Default::default() };
    let o = match run(&kdvb(-6.0 / 25.0), &g, &v0, &cfg) {
        Ok(o) => o,
        Err(e) => return (false, e.to_string()),
    };
    let v = compare_to_theorem(&o.series, &TheoremModel::KdvBurgers { delta: DEFAULT_DELTA }, (10.0, 200.0)).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for col in ["l2", "lp_4", "lp_1.5"] {
        let x = v.iter().find(|x| x.column == col).unwrap();
        ok &= x.satisfied;
        parts.push(format!("{col} ratio {:.3}", x.ratio));
    }
    let secs = start.elapsed().as_secs_f64();
    (ok && secs <= 600.0, format!("{}, {secs:.1} s", parts.join(", ")))
}

fn fractional_envelope() -> Outcome {
    let g = Grid::new(2048, 160.0).unwrap();
    let v0 = make_perturbation(&g, PerturbationKind::OddGaussianDerivative, 0.5, 2.0, 0).unwrap();
    let cfg = StepperConfig { t_end: 200.0, stride: 20, ..Default::default() };
    let o = match run(&frac(1.0, 0.5), &g, &v0, &cfg) {
        Ok(o) => o,
        Err(e) => return (false, e.to_string()),
    };
    let l1 = l1_contraction(&o.series, 1e-8).unwrap();
    let v = compare_to_theorem(&o.series, &TheoremModel::FractionalOdd, (10.0, 200.0)).unwrap();
    let mut ok = l1.passed;
    let mut parts = vec![format!("l1 worst ratio {:.10}", l1.worst_ratio)];
    for col in ["l2", "dv_l2"] {
        let x = v.iter().find(|x| x.column == col).unwrap();
        ok &= x.satisfied;
        parts.push(format!("{col} ratio {:.3}", x.ratio));
    }
    (ok, parts.join(", "))
}

fn trig_field(g: &Grid, rng: &mut ChaCha8Rng, modes: usize) -> Field {
    let coef: Vec<(f64, f64)> = (0..rng.gen_range(1..=modes))
        .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let q = 2.0 * std::f64::consts::PI / g.length();
    Field::from_fn(g, |x| {
        coef.iter()
            .enumerate()
            .map(|(i, (a, b))| {
                let k = q * (i + 1) as f64;
                (a * (k * x).cos() + b * (k * x).sin()) / (1.0 + i as f64)
            })
            .sum()
    })
}

fn property_suites() -> Outcome {
    const TRIALS: usize = 100;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let g = Grid::new(256, 40.0).unwrap();
    let mut failures = vec![0usize; 7];
    let lp = |f: &Field, p: f64| lp_norm(f, p).unwrap();
    for _ in 0..TRIALS {
        let f = trig_field(&g, &mut rng, 24).map(|v| v * 10.0);
        let physical = g.h() * f.values().iter().map(|v| v * v).sum::<f64>();
        let fourier = g.h() / g.n() as f64 * g.fft(f.values()).iter().map(|c| c.norm_sqr()).sum::<f64>();
        failures[0] += ((physical - fourier).abs() > 1e-12 * physical) as usize;

        let eps = rng.gen_range(0.02..1.5);
        let (low, _) = band_project(&f, eps);
        let a = band_measure(&g, eps);
        let bernstein = lp(&low, 2.0) <= a.sqrt() * lp(&f, 1.0) * (1.0 + 1e-10)
            && lp(&low, f64::INFINITY) <= a * lp(&f, 1.0) * (1.0 + 1e-10)
            && lp(&low, f64::INFINITY) <= a.sqrt() * lp(&f, 2.0) * (1.0 + 1e-10);
        failures[1] += (!bernstein) as usize;

        let p = rng.gen_range(1.0..3.0);
        let q = p + rng.gen_range(0.1..3.0);
        let r = q + rng.gen_range(0.1..6.0);
        let theta = (1.0 / q - 1.0 / r) / (1.0 / p - 1.0 / r);
        failures[2] += (lp(&f, q) > lp(&f, p).powf(theta) * lp(&f, r).powf(1.0 - theta) * (1.0 + 1e-12)) as usize;

        failures[3] += (f.max_abs().powi(2) > 1.05 * l2_norm(&derivative(&f, 1)) * l2_norm(&f)) as usize;

        let h = trig_field(&g, &mut rng, 12).map(|v| v + 0.3);
        for alpha in [0.3, 0.5, 1.0] {
            let sym: Vec<Complex64> =
                g.wavenumbers().iter().map(|k| Complex64::new(k.abs().powf(2.0 * alpha), 0.0)).collect();
            let ah = apply_multiplier(&h, &sym).unwrap();
            for p in [2.0, 3.0, 4.0] {
                let form: f64 =
                    g.h() * ah.values().iter().zip(h.values()).map(|(a, v)| a * v * v.abs().powf(p - 2.0)).sum::<f64>();
                failures[4] += (form < -1e-10) as usize;
            }
        }

        let alpha = rng.gen_range(0.25..=1.0);
        let t = rng.gen_range(1.0..3.0);
        let n = (((36.0 / t as f64).powf(0.5 / alpha) * 80.0 / std::f64::consts::PI).ceil() as usize)
            .next_power_of_two()
            .max(256);
        let kr = fractional_kernel_check(alpha, &Grid::new(n, 80.0).unwrap(), t).unwrap();
        failures[5] += (!kr.positive || (kr.integral - 1.0).abs() > 1e-8) as usize;

        let kr = fractional_kernel_check(1.5, &Grid::new(1024, 80.0).unwrap(), rng.gen_range(0.5..3.0)).unwrap();
        failures[6] += (kr.positive || kr.min >= 0.0) as usize;
    }
    let names = ["parseval", "bernstein", "log-convexity", "agmon", "diffusive", "kernel positivity", "sign change"];
    let desc: Vec<String> = names.iter().zip(&failures).map(|(n, f)| format!("{n} {f}")).collect();
    (failures.iter().all(|f| *f == 0), format!("{TRIALS} trials each, failures: {}", desc.join(", ")))
}

fn rate_fitter() -> Outcome {
    let t: Vec<f64> = (1..=200).map(|i| i as f64 * 0.5).collect();
    let mut worst: f64 = 0.0;
    for r in [-2.0, -1.0, -0.5, -0.25, -1.0 / 3.0] {
        let y: Vec<f64> = t.iter().map(|t| 2.0 * t.powf(r)).collect();
        worst = worst.max((fit_rate(&t, &y, (1.0, 100.0), 0.0).unwrap().exponent - r).abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut noisy: f64 = 0.0;
    for r in [-1.0, -0.5, -0.25] {
        let y: Vec<f64> = t.iter().map(|t| t.powf(r) * (1.0 + rng.gen_range(-0.01..0.01))).collect();
        noisy = noisy.max((fit_rate(&t, &y, (10.0, 100.0), 0.0).unwrap().exponent - r).abs());
    }
    (worst <= 1e-10 && noisy <= 0.02, format!("exact error {worst:.1e}, noisy error {noisy:.1e}"))
}

fn galilean() -> Outcome {
    let mut worst: f64 = 0.0;
    for (um, up) in [(1.0, -1.0), (0.0, -4.8), (3.7, 1.1), (-2.0, -9.5), (250.0, -0.003)] {
        let p = GalileanParams::new(um, up).unwrap();
        let (a, b) = p.endpoints();
        worst = worst.max((a - um).abs() / (1.0 + um.abs())).max((b - up).abs() / (1.0 + up.abs()));
    }
    let presets = [
        kdvb(0.2),
        Preset::Bo.spec().unwrap(),
        Preset::Hilbert.spec().unwrap(),
        frac(1.0, 0.5),
        frac(0.5, 0.75),
    ];
    let mut admissible = true;
    for spec in &presets {
        for lambda in [0.5, 1.0, 2.4] {
            admissible &= spec.rescaled(lambda).is_ok_and(|s| s.admissibility().passed);
        }
    }
    (worst <= 1e-12 && admissible, format!("endpoint error {worst:.1e}, rescaled symbols admissible: {admissible}"))
}

fn main() {
    let start = Instant::now();
    let mut results: Vec<(u32, &str, Outcome)> = vec![
        (1, "Cole-Hopf oracle", cole_hopf_oracle()),
        (2, "closed-form front", closed_form_front()),
        (3, "explicit KdV-Burgers front", explicit_kdvb_front()),
        (4, "eigenvalue counting", eigenvalue_counting()),
        (5, "spectral condition", spectral_condition()),
    ];
    let runs = test_matrix();
    results.push((6, "monotonicity", monotonicity(&runs)));
    results.push((7, "energy inequality", energy(&runs)));
    results.push((8, "KdV-Burgers envelope", kdvb_envelope()));
    results.push((9, "fractional odd envelope", fractional_envelope()));
    results.push((10, "property suites", property_suites()));
    results.push((11, "rate fitter", rate_fitter()));
    results.push((12, "Galilean round trip", galilean()));
    let mut failed = 0;
    for (i, name, (ok, detail)) in &results {
        println!("{} criterion {i:>2} {name}: {detail}", if *ok { "PASS" } else { "FAIL" });
        failed += (!ok) as usize;
    }
    println!("{} of {} criteria pass ({:.0} s)", results.len() - failed, results.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
