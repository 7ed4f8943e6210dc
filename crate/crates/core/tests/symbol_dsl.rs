use std::f64::consts::PI;

use frontlab::spectral::{apply_multiplier, Field, Grid};
use frontlab::symbol::{
    default_samples, parse_symbol, parse_symbol_with, preset, presets, rescale_symbol, validate_admissibility,
    FracTerm, MultiplierSpec, PresetParams,
};
use frontlab::{Complex64, Error};
use std::collections::HashMap;

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

#[test]
fn parse_examples() {
    let zero = parse_symbol("0").unwrap();
    assert_eq!(zero.eval(3.0).unwrap(), Complex64::new(0.0, 0.0));
    let kdvb = parse_symbol("-0.1*(i*k)^3").unwrap();
    // -0.1 (ik)^3 = 0.1 i k^3
    assert!(close(kdvb.eval(2.0).unwrap(), Complex64::new(0.0, 0.8), 1e-15));
    match parse_symbol("k^^2") {
        Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 2),
        other => panic!("expected a syntax error, got {other:?}"),
    }
}

#[test]
fn eval_examples() {
    let mut params = HashMap::new();
    params.insert("a".to_string(), 1.0);
    params.insert("alpha".to_string(), 0.5);
    let e = parse_symbol_with("-a*abs(k)^(2*alpha)", &params).unwrap();
    assert!((e.eval(2.0 * PI).unwrap().re + 2.0 * PI).abs() < 1e-14);
    let h = parse_symbol("i*sgn(k)").unwrap();
    assert_eq!(h.eval(-5.0).unwrap(), Complex64::new(0.0, -1.0));
    assert_eq!(parse_symbol("(i*k)^3").unwrap().eval(0.0).unwrap().norm(), 0.0);
}

#[test]
fn admissibility_examples() {
    let s = default_samples();
    for nu in [-4.0, -0.24, 0.0, 0.3, 10.0] {
        let e = parse_symbol(&format!("{nu}*(i*k)^3")).unwrap();
        assert!(validate_admissibility(&e, &s).passed, "nu = {nu}");
    }
    let r = validate_admissibility(&parse_symbol("k^2").unwrap(), &s);
    assert!(!r.dissipative && !r.passed);
    assert!(validate_admissibility(&parse_symbol("-(abs(k))^1").unwrap(), &s).passed);
}

fn frac(terms: &[(f64, f64)]) -> PresetParams {
    PresetParams {
        nu: None,
        terms: terms.iter().map(|&(a, alpha)| FracTerm { a, alpha }).collect(),
    }
}

#[test]
fn preset_examples() {
    let k = 2.0 * PI;
    let kdvb = preset("kdvb", &PresetParams { nu: Some(1.0), terms: vec![] }).unwrap();
    let v = kdvb.eval(&[k]).unwrap()[0];
    assert!(close(v, Complex64::new(0.0, -8.0 * PI.powi(3)), 1e-14));
    assert!((v.im + 248.050).abs() < 1e-3);
    let f = preset("frac", &frac(&[(1.0, 0.5)])).unwrap();
    assert!((f.eval(&[k]).unwrap()[0].re + k).abs() < 1e-13);
    assert!(matches!(preset("frac", &frac(&[(1.0, 1.2)])), Err(Error::InvalidParameter(_))));
    assert!(preset("frac", &frac(&[(-1.0, 0.5)])).is_err());
    assert!(preset("frac", &frac(&[(1.0, 0.7), (1.0, 0.5)])).is_err());
}

#[test]
fn rescaling_examples() {
    let nu = -0.1;
    let lambda = 2.4;
    let spec = preset("kdvb", &PresetParams { nu: Some(nu), terms: vec![] }).unwrap();
    let r = rescale_symbol(&spec, lambda).unwrap();
    let target = preset("kdvb", &PresetParams { nu: Some(nu * lambda), terms: vec![] }).unwrap();
    let ks: Vec<f64> = (-20..=20).map(|m| 0.37 * m as f64).collect();
    for (a, b) in r.eval(&ks).unwrap().iter().zip(target.eval(&ks).unwrap()) {
        assert!(close(*a, b, 1e-13));
    }
    let same = rescale_symbol(&spec, 1.0).unwrap();
    assert_eq!(same.eval(&ks).unwrap(), spec.eval(&ks).unwrap());

    let (a, alpha) = (0.7, 0.3);
    let f = preset("frac", &frac(&[(a, alpha)])).unwrap();
    let rf = rescale_symbol(&f, lambda).unwrap();
    let expect = preset("frac", &frac(&[(a * lambda.powf(2.0 * alpha - 2.0), alpha)])).unwrap();
    for (x, y) in rf.eval(&ks).unwrap().iter().zip(expect.eval(&ks).unwrap()) {
        assert!(close(*x, y, 1e-13));
    }
}

fn every_preset() -> Vec<MultiplierSpec> {
    vec![
        preset("burgers", &PresetParams::default()).unwrap(),
        preset("kdvb", &PresetParams { nu: Some(-0.24), terms: vec![] }).unwrap(),
        preset("bo", &PresetParams::default()).unwrap(),
        preset("hilbert", &PresetParams::default()).unwrap(),
        preset("frac", &frac(&[(1.0, 0.25), (0.5, 0.75)])).unwrap(),
    ]
}

#[test]
fn rescaled_presets_stay_admissible() {
    for spec in every_preset() {
        for lambda in [0.01, 0.5, 1.0, 2.4, 37.0] {
            let r = rescale_symbol(&spec, lambda).unwrap();
            assert!(r.admissibility().passed, "{} at lambda {lambda}", spec.label());
        }
    }
}

#[test]
fn preset_trees_match_their_source_strings() {
    let ks: Vec<f64> = (-64..=64).map(|m| 0.173 * m as f64).collect();
    for spec in every_preset() {
        let reparsed = MultiplierSpec::parse(spec.expr().source()).unwrap();
        for (a, b) in spec.eval(&ks).unwrap().iter().zip(reparsed.eval(&ks).unwrap()) {
            assert!((a - b).norm() <= 1e-14 * (1.0 + a.norm()), "{}", spec.label());
        }
    }
    assert_eq!(presets().names().len(), 5);
}

#[test]
fn hermitian_symbols_keep_real_fields_real() {
    let grid = Grid::new(256, 40.0).unwrap();
    let f = Field::from_fn(&grid, |x| (-(x - 1.0).powi(2) / 3.0).exp() * (1.0 + 0.3 * (2.0 * x).sin()));
    for spec in every_preset() {
        let l = spec.eval(grid.wavenumbers()).unwrap();
        let g = apply_multiplier(&f, &l).unwrap();
        assert!(g.is_finite());
        // an independent complex inverse transform must have negligible imaginary part
        let mut s = grid.fft(f.values());
        for (c, m) in s.iter_mut().zip(&l) {
            *c *= m;
        }
        let n = grid.n();
        s[n / 2] = Complex64::new(s[n / 2].re, 0.0);
        let back = grid.ifft(s);
        let norm = f.values().iter().map(|x| x * x).sum::<f64>().sqrt();
        let imag = back.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        assert!(imag <= 1e-12 * norm.max(1.0), "{}: {imag}", spec.label());
    }
}
