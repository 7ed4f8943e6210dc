use frontlab::diagnostics::check_energy_inequality;
use frontlab::evolution::{
    cole_hopf_exact, evolve, make_perturbation, rhs_perturbation, Integrator, PerturbationKind, PerturbationRhs,
    PerturbationState, RhsTerms, SnapshotCollector, StepperConfig,
};
use frontlab::front::{closed_form_burgers, solve_front, FrontOptions, FrontProfile};
use frontlab::spectral::{derivative, inner, l2_norm, Field, Grid};
use frontlab::symbol::{FracTerm, MultiplierSpec, Preset};
use frontlab::Error;

fn frac(a: f64, alpha: f64) -> MultiplierSpec {
    Preset::Frac { terms: vec![FracTerm { a, alpha }] }.spec().unwrap()
}

fn front_for(spec: &MultiplierSpec, grid: &Grid) -> FrontProfile {
    solve_front("auto", spec, grid, &FrontOptions::default()).unwrap()
}

fn sup_diff(a: &Field, b: &Field) -> f64 {
    a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn no_terms() -> RhsTerms {
    RhsTerms { operator: false, front: false, nonlinear: false, modulation: false }
}

fn discard(_: &PerturbationState, _: &frontlab::diagnostics::NormRecord) -> frontlab::Result<()> {
    Ok(())
}

#[test]
fn zero_perturbation_stays_zero() {
    let g = Grid::new(512, 80.0).unwrap();
    let specs = [
        Preset::Burgers.spec().unwrap(),
        Preset::Kdvb { nu: 0.2 }.spec().unwrap(),
        frac(0.5, 0.5),
    ];
    for spec in specs {
        let front = front_for(&spec, &g);
        let cfg = StepperConfig { t_end: 100.0, stride: 100, ..Default::default() };
        let out = evolve(&Field::zeros(&g), &front, &spec, &cfg, &mut discard).unwrap();
        assert!(out.final_state.v.max_abs() <= 1e-12, "{}", spec.label());
        assert!(out.final_state.x0.abs() <= 1e-12);
        assert_eq!(out.final_state.t, 100.0);
    }
}

#[test]
fn single_mode_decays_at_the_symbol_rate() {
    let g = Grid::new(256, 40.0).unwrap();
    let front = closed_form_burgers(&g).unwrap();
    let k = 2.0 * std::f64::consts::PI * 3.0 / g.length();
    let dt = 0.01;
    let t_end = 1.0;
    let cases = [
        (Preset::Burgers.spec().unwrap(), no_terms(), -k * k),
        (frac(1.0, 0.5), RhsTerms::linear_only(), -k * k - k),
    ];
    for scheme in ["etdrk4", "imex2"] {
        for (spec, terms, rate) in &cases {
            let cfg = StepperConfig { dt: Some(dt), scheme: scheme.into(), terms: *terms, ..Default::default() };
            let integ = Integrator::new(&front, spec, &cfg).unwrap();
            let mut s = PerturbationState::new(Field::from_fn(&g, |x| (k * x).cos()));
            for _ in 0..(t_end / dt).round() as usize {
                s = integ.step(&s).unwrap();
            }
            let exact = Field::from_fn(&g, |x| (rate * t_end).exp() * (k * x).cos());
            let err = sup_diff(&s.v, &exact);
            let tol = if scheme == "etdrk4" { 1e-10 } else { 1e-4 };
            assert!(err <= tol, "{scheme} {}: {err:e}", spec.label());
        }
    }
}

fn final_field(scheme: &str, dt: f64, front: &FrontProfile, spec: &MultiplierSpec, v0: &Field) -> Field {
    let cfg = StepperConfig { dt: Some(dt), scheme: scheme.into(), t_end: 2.0, stride: 1000, ..Default::default() };
    evolve(v0, front, spec, &cfg, &mut discard).unwrap().final_state.v
}

#[test]
fn convergence_orders() {
    let g = Grid::new(256, 60.0).unwrap();
    let spec = Preset::Kdvb { nu: 0.2 }.spec().unwrap();
    let front = front_for(&spec, &g);
    let v0 = make_perturbation(&g, PerturbationKind::Gaussian, 0.3, 2.0, 0).unwrap();
    for (scheme, dt, expected) in [("etdrk4", 0.05, 16.0), ("imex2", 0.01, 4.0)] {
        let reference = final_field(scheme, dt / 32.0, &front, &spec, &v0);
        let e: Vec<f64> = [dt, dt / 2.0, dt / 4.0]
            .iter()
            .map(|&d| sup_diff(&final_field(scheme, d, &front, &spec, &v0), &reference))
            .collect();
        for w in e.windows(2) {
            let ratio = w[0] / w[1];
            assert!(ratio > 0.7 * expected && ratio < 1.4 * expected, "{scheme}: errors {e:?}");
        }
    }
}

#[test]
fn tendency_linearization_matches_finite_differences() {
    let g = Grid::new(512, 60.0).unwrap();
    let nu = 0.2;
    let spec = Preset::Kdvb { nu }.spec().unwrap();
    let front = front_for(&spec, &g);
    let gamma = 1.1;
    let v = Field::from_fn(&g, |x| 0.2 * (-(x - 1.0).powi(2) / 4.0).exp());
    let w = Field::from_fn(&g, |x| x * (-x * x / 9.0).exp());
    let eps = 1e-6;
    let f = |u: &Field| rhs_perturbation(&PerturbationState::new(u.clone()), &front, &spec, gamma).unwrap().0;
    let fd = f(&v.add(&w.scaled(eps)).unwrap()).sub(&f(&v)).unwrap().scaled(1.0 / eps);

    // w'' + nu w''' + xd(w) (v' + phi') + xd(v) w' - (phi' w)' - (v w)'
    let (phi, dphi) = (front.phi(), front.phi_prime());
    let xd = |u: &Field| -gamma * inner(dphi, u).unwrap();
    let (dv, dw) = (derivative(&v, 1), derivative(&w, 1));
    let (d2w, d3w) = (derivative(&w, 2), derivative(&w, 3));
    let expected = Field::from_fn(&g, |_| 0.0);
    let vals: Vec<f64> = (0..g.n())
        .map(|j| {
            d2w.values()[j] + nu * d3w.values()[j] + xd(&w) * (dv.values()[j] + dphi.values()[j])
                + xd(&v) * dw.values()[j]
                - dphi.values()[j] * w.values()[j]
                - phi.values()[j] * dw.values()[j]
                - dv.values()[j] * w.values()[j]
                - v.values()[j] * dw.values()[j]
        })
        .collect();
    let expected = Field::new(expected.grid(), vals).unwrap();
    let err = sup_diff(&fd, &expected);
    assert!(err <= 1e-4, "{err:e}");
}

#[test]
fn odd_data_keep_parity_on_the_burgers_front() {
    let g = Grid::new(512, 80.0).unwrap();
    let spec = Preset::Burgers.spec().unwrap();
    let front = closed_form_burgers(&g).unwrap();
    let v0 = make_perturbation(&g, PerturbationKind::OddGaussianDerivative, 0.5, 2.0, 0).unwrap();
    let cfg = StepperConfig { t_end: 20.0, stride: 50, ..Default::default() };
    let mut snaps = SnapshotCollector::default();
    evolve(&v0, &front, &spec, &cfg, &mut snaps).unwrap();
    for s in &snaps.snapshots {
        assert!(s.v.oddness_defect() <= 1e-10, "t = {}", s.t);
        assert!(s.x0.abs() <= 1e-14, "t = {}", s.t);
    }
}

#[test]
fn heat_flow_saturates_the_energy_identity() {
    let g = Grid::new(512, 80.0).unwrap();
    let spec = Preset::Burgers.spec().unwrap();
    let front = closed_form_burgers(&g).unwrap();
    let v0 = make_perturbation(&g, PerturbationKind::Gaussian, 0.5, 2.0, 0).unwrap();
    let cfg = StepperConfig { t_end: 10.0, dt: Some(0.01), stride: 20, terms: no_terms(), ..Default::default() };
    let out = evolve(&v0, &front, &spec, &cfg, &mut discard).unwrap();
    let e = check_energy_inequality(&out.series).unwrap();
    assert_eq!(e.violations, 0);
    assert!((e.c_fit - 2.0).abs() <= 0.02, "{}", e.c_fit);
}

#[test]
fn burgers_perturbation_decays() {
    let g = Grid::new(1024, 160.0).unwrap();
    let spec = Preset::Burgers.spec().unwrap();
    let front = closed_form_burgers(&g).unwrap();
    let v0 = make_perturbation(&g, PerturbationKind::Gaussian, 0.5, 2.0, 0).unwrap();
    let cfg = StepperConfig { t_end: 50.0, stride: 100, ..Default::default() };
    let out = evolve(&v0, &front, &spec, &cfg, &mut discard).unwrap();
    assert!(l2_norm(&out.final_state.v) < 0.05 * l2_norm(&v0));
    assert!(out.monotonicity.passed());
    let l2sq = l2_norm(&v0).powi(2);
    let last = out.series.records.last().unwrap();
    assert!(last.int_dv2 <= 10.0 * l2sq && last.int_x0dot2 <= 10.0 * l2sq);
}

#[test]
fn large_kdvb_perturbation_decays_monotonically() {
    let g = Grid::new(1024, 160.0).unwrap();
    let spec = Preset::Kdvb { nu: 0.2 }.spec().unwrap();
    let front = front_for(&spec, &g);
    let v0 = make_perturbation(&g, PerturbationKind::Gaussian, 1.0, 2.0, 0).unwrap();
    let cfg = StepperConfig { t_end: 30.0, stride: 50, ..Default::default() };
    let out = evolve(&v0, &front, &spec, &cfg, &mut discard).unwrap();
    assert!(out.monotonicity.passed(), "{:?}", out.monotonicity);
    let l2sq = l2_norm(&v0).powi(2);
    let last = out.series.records.last().unwrap();
    assert!(last.int_dv2 <= 10.0 * l2sq && last.int_x0dot2 <= 10.0 * l2sq);
}

#[test]
fn burgers_run_agrees_with_cole_hopf() {
    let g = Grid::new(512, 80.0).unwrap();
    let spec = Preset::Burgers.spec().unwrap();
    let front = closed_form_burgers(&g).unwrap();
    let v0 = make_perturbation(&g, PerturbationKind::Gaussian, 0.5, 2.0, 0).unwrap();
    let u0 = front.phi().add(&v0).unwrap();
    let cfg = StepperConfig { t_end: 1.0, dt: Some(1e-3), stride: 1000, ..Default::default() };
    let s = evolve(&v0, &front, &spec, &cfg, &mut discard).unwrap().final_state;
    // the moving frame: u(t, y + x0) = phi(y) + v(t, y)
    let pts: Vec<f64> = g.x().iter().map(|y| y + s.x0).collect();
    let exact = cole_hopf_exact(&u0, s.t, &pts).unwrap();
    let err = (0..g.n())
        .map(|j| (front.phi().values()[j] + s.v.values()[j] - exact[j]).abs())
        .fold(0.0, f64::max);
    assert!(err <= 1e-8, "{err:e}");
}

#[test]
fn cole_hopf_examples() {
    let g = Grid::new(512, 60.0).unwrap();
    // a shifted front travels with speed zero and stays put
    let u0 = Field::from_fn(&g, |x| -((x - 1.5) / 2.0).tanh());
    let xs: Vec<f64> = (-10..=10).map(|i| i as f64).collect();
    let u = cole_hopf_exact(&u0, 2.0, &xs).unwrap();
    for (x, u) in xs.iter().zip(&u) {
        assert!((u + ((x - 1.5) / 2.0).tanh()).abs() <= 1e-8);
    }
    assert!(matches!(cole_hopf_exact(&u0, -1.0, &xs), Err(Error::InvalidParameter(_))));
    assert!(cole_hopf_exact(&u0, 1.0, &[]).unwrap().is_empty());
}

#[test]
fn perturbation_examples() {
    let g = Grid::new(1024, 80.0).unwrap();
    let gauss = make_perturbation(&g, PerturbationKind::Gaussian, 0.5, 2.0, 0).unwrap();
    assert_eq!(gauss.values()[g.nyquist()], 0.5);
    let mass: f64 = gauss.values().iter().sum::<f64>() * g.h();
    assert!((mass - 0.5 * 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-12);
    for kind in [PerturbationKind::OddGaussianDerivative, PerturbationKind::OddSinePacket] {
        let v = make_perturbation(&g, kind, 0.5, 2.0, 0).unwrap();
        assert_eq!(v.oddness_defect(), 0.0);
    }
    let a = make_perturbation(&g, PerturbationKind::RandomBandlimited, 0.3, 2.0, 42).unwrap();
    let b = make_perturbation(&g, PerturbationKind::RandomBandlimited, 0.3, 2.0, 42).unwrap();
    let c = make_perturbation(&g, PerturbationKind::RandomBandlimited, 0.3, 2.0, 43).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!((a.max_abs() - 0.3).abs() < 1e-15);
    assert!(make_perturbation(&g, PerturbationKind::Gaussian, 0.0, 2.0, 0).is_err());
}

#[test]
fn invalid_runs_are_rejected() {
    let g = Grid::new(256, 40.0).unwrap();
    let spec = Preset::Burgers.spec().unwrap();
    let front = closed_form_burgers(&g).unwrap();
    let v0 = make_perturbation(&g, PerturbationKind::Gaussian, 0.1, 1.0, 0).unwrap();
    let bad_gamma = StepperConfig { gamma: 0.5, ..Default::default() };
    assert!(evolve(&v0, &front, &spec, &bad_gamma, &mut discard).is_err());
    let wide = Field::from_fn(&g, |_| 0.1);
    assert!(evolve(&wide, &front, &spec, &StepperConfig::default(), &mut discard).is_err());
    let huge = StepperConfig { dt: Some(5.0), t_end: 10.0, ..Default::default() };
    let big = make_perturbation(&g, PerturbationKind::Gaussian, 5.0, 1.0, 0).unwrap();
    assert!(matches!(evolve(&big, &front, &spec, &huge, &mut discard), Err(Error::Cfl(_))));
    let rhs = PerturbationRhs::new(&front, &spec, 1.1, RhsTerms::default(), true).unwrap();
    assert_eq!(rhs.x0_dot(&Field::zeros(&g)).unwrap(), 0.0);
}
