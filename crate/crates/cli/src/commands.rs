use std::path::Path;

use anyhow::{bail, Context, Result};
use frontlab::certify::{certify_front, sweep_row, threshold, SpectralCertificate, SweepOptions, SweepRow};
use frontlab::diagnostics::NormSeries;
use frontlab::evolution::{cole_hopf_exact, evolve, PerturbationState};
use frontlab::front::io::{load_front, save_front};
use frontlab::front::closed_form_burgers;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::analyze;
use crate::args::{parse_list, parse_model, parse_range, parse_window, CertifyArgs, OracleArgs, RatesArgs};
use crate::config::RunConfig;
use crate::run::{build_front, initial_perturbation};
use crate::ExitCode;

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))
}

pub fn front(cfg: &RunConfig) -> Result<ExitCode> {
    let (spec, front) = build_front(cfg)?;
    ensure_dir(&cfg.out)?;
    let path = cfg.out.join("front.csv");
    save_front(&front, &path)?;
    let (a, b) = front.endpoints();
    let h = front.hypothesis();
    println!("operator      {}", spec.label());
    println!("method        {}", front.method());
    println!("grid          N = {}, L = {}", front.grid().n(), front.grid().length());
    println!("endpoints     {a:.6} -> {b:.6}");
    println!("residual sup  {:.3e}", front.residual_sup());
    println!("box residual  {:.3e}", front.box_residual());
    println!("oddness       {:.3e}", front.oddness_defect());
    println!("monotone      {}", front.is_monotone(1e-8));
    println!("hypothesis    {}", serde_json::to_string(h)?);
    println!("saved         {}", path.display());
    Ok(ExitCode::Ok)
}

fn print_certificate(c: &SpectralCertificate) {
    println!("operator {} (front: {})", c.operator, c.front_method);
    println!("nodes {}, half width {:.3}", c.nodes, c.half_width);
    println!("{:>8} {:>6} {:>8} {:>6} {:>9} {:>10}", "eps", "count", "refined", "half", "resolved", "near_zero");
    for s in std::iter::once(&c.at_zero).chain(&c.samples) {
        println!(
            "{:>8} {:>6} {:>8} {:>6} {:>9} {:>10}",
            s.eps, s.count, s.count_refined, s.count_half_domain, s.resolved, s.near_zero
        );
    }
    let (m, e) = c.min_count();
    println!("min count {m} at eps = {e}");
    println!("certificate {}", if c.satisfied { "SATISFIED" } else { "NOT SATISFIED" });
}

fn write_sweep(dir: &Path, rows: &[SweepRow]) -> Result<Option<f64>> {
    let mut csv = String::from("nu,satisfied,min_count,argmin_eps,all_resolved,n,length,counts,error\n");
    let opt = |x: Option<String>| x.unwrap_or_default();
    for r in rows {
        let counts: Vec<String> = r.counts.iter().map(|c| c.to_string()).collect();
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.nu,
            opt(r.satisfied.map(|s| s.to_string())),
            opt(r.min_count.map(|s| s.to_string())),
            opt(r.argmin_eps.map(|s| s.to_string())),
            r.all_resolved,
            r.n,
            r.length,
            counts.join(";"),
            r.error.as_deref().unwrap_or("").replace([',', '\n'], " ")
        ));
    }
    std::fs::write(dir.join("sweep.csv"), csv)?;
    let th = threshold(rows);
    #[derive(Serialize)]
    struct Out<'a> {
        threshold: Option<f64>,
        rows: &'a [SweepRow],
    }
    std::fs::write(dir.join("sweep.json"), serde_json::to_string_pretty(&Out { threshold: th, rows })?)?;
    Ok(th)
}

pub fn certify(cfg: &RunConfig, a: &CertifyArgs) -> Result<ExitCode> {
    let mut opts = cfg.certificate.clone();
    if let Some(e) = &a.eps {
        opts.eps = parse_list(e)?;
    }
    if let Some(f) = a.domain_fraction {
        opts.domain_fraction = f;
    }
    ensure_dir(&cfg.out)?;
    if let Some(range) = &a.sweep_nu {
        let nus = parse_range(range)?;
        let sopts = SweepOptions {
            certify: opts,
            ..Default::default()
        };
        let rows: Vec<SweepRow> = nus.par_iter().map(|&nu| sweep_row(nu, &sopts)).collect();
        println!("{:>8} {:>10} {:>6} {:>8} {:>9}  counts", "nu", "satisfied", "min", "at eps", "resolved");
        for r in &rows {
            let show = |x: Option<String>| x.unwrap_or_else(|| "-".into());
            println!(
                "{:>8} {:>10} {:>6} {:>8} {:>9}  {:?}{}",
                r.nu,
                show(r.satisfied.map(|s| s.to_string())),
                show(r.min_count.map(|s| s.to_string())),
                show(r.argmin_eps.map(|s| s.to_string())),
                r.all_resolved,
                r.counts,
                r.error.as_ref().map(|e| format!("  ({e})")).unwrap_or_default()
            );
        }
        match write_sweep(&cfg.out, &rows)? {
            Some(t) => println!("threshold |nu| = {t}"),
            None => println!("no certified value of nu"),
        }
        return Ok(ExitCode::Ok);
    }
    let front = match &a.profile {
        Some(p) => load_front(p).with_context(|| format!("cannot load profile {}", p.display()))?,
        None => {
            let (_, f) = build_front(cfg)?;
            save_front(&f, &cfg.out.join("front.csv"))?;
            f
        }
    };
    let cert = certify_front(&front, &opts)?;
    std::fs::write(cfg.out.join("certificate.json"), serde_json::to_string_pretty(&cert)?)?;
    print_certificate(&cert);
    Ok(if cert.satisfied { ExitCode::Ok } else { ExitCode::Verdict })
}

#[derive(Serialize)]
struct OracleRow {
    t_requested: f64,
    t: f64,
    discrepancy: f64,
}

pub fn oracle(cfg: &RunConfig, a: &OracleArgs) -> Result<ExitCode> {
    let spec = cfg.operator.spec()?;
    if !spec.is_zero() {
        bail!("the Cole-Hopf oracle needs the zero operator, got {}", spec.label());
    }
    let mut times = parse_list(&a.times)?;
    if times.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        bail!("oracle times must be positive");
    }
    times.sort_by(f64::total_cmp);
    let grid = cfg.grid.grid()?;
    let front = closed_form_burgers(&grid)?;
    let v0 = initial_perturbation(cfg, &front)?;
    let u0 = front.phi().add(&v0)?;
    let mut stepper = cfg.stepper.clone();
    stepper.dt = Some(a.stepper.dt.unwrap_or(1e-3));
    stepper.t_end = *times.last().unwrap();
    stepper.stride = 1;

    let mut states: Vec<PerturbationState> = Vec::new();
    let mut keep = |s: &PerturbationState, _: &_| -> frontlab::Result<()> {
        if times.iter().any(|t| (s.t - t).abs() <= 0.51 * stepper.dt.unwrap()) {
            states.push(s.clone());
        }
        Ok(())
    };
    evolve(&v0, &front, &spec, &stepper, &mut keep)?;

    let mut rows = Vec::new();
    for &t in &times {
        let s = states
            .iter()
            .min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs()))
            .context("no state recorded near a requested time")?;
        let x = grid.x();
        let pts: Vec<f64> = x.iter().map(|y| y + s.x0).collect();
        let exact = cole_hopf_exact(&u0, s.t, &pts)?;
        let disc = (0..grid.n())
            .map(|j| (front.phi().values()[j] + s.v.values()[j] - exact[j]).abs())
            .fold(0.0, f64::max);
        rows.push(OracleRow {
            t_requested: t,
            t: s.t,
            discrepancy: disc,
        });
    }
    let passed = rows.iter().all(|r| r.discrepancy <= a.threshold);
    println!("{:>10} {:>14}", "t", "sup error");
    for r in &rows {
        println!("{:>10.4} {:>14.3e}", r.t, r.discrepancy);
    }
    println!("threshold {:.1e}: {}", a.threshold, if passed { "PASS" } else { "FAIL" });
    ensure_dir(&cfg.out)?;
    #[derive(Serialize)]
    struct Out<'a> {
        threshold: f64,
        dt: f64,
        passed: bool,
        rows: &'a [OracleRow],
    }
    let out = Out {
        threshold: a.threshold,
        dt: stepper.dt.unwrap(),
        passed,
        rows: &rows,
    };
    std::fs::write(cfg.out.join("oracle.json"), serde_json::to_string_pretty(&out)?)?;
    Ok(if passed { ExitCode::Ok } else { ExitCode::Verdict })
}

pub fn rates(a: &RatesArgs, out: Option<&Path>) -> Result<ExitCode> {
    let dir = &a.run;
    let series = NormSeries::read_csv(&dir.join("series.csv"))
        .with_context(|| format!("{} is not a run directory", dir.display()))?;
    let snapshot = dir.join("config.snapshot");
    let mut cfg: RunConfig = match std::fs::read_to_string(&snapshot) {
        Ok(s) => serde_json::from_str(&s).with_context(|| format!("bad {}", snapshot.display()))?,
        Err(_) => {
            log::warn!("{} missing; using default configuration", snapshot.display());
            RunConfig::default()
        }
    };
    if let Some(m) = &a.model {
        cfg.diagnostics.model = parse_model(m)?;
    }
    if let Some(w) = &a.window {
        cfg.diagnostics.window = Some(parse_window(w)?);
    }
    if let Some(d) = a.delta {
        cfg.diagnostics.delta = d;
    }
    let spec = cfg.operator.spec()?;
    let model = cfg.diagnostics.model(&spec, cfg.perturbation.kind);
    let analysis = analyze(&series, model, cfg.diagnostics.window)?;
    let target = out.unwrap_or(dir);
    ensure_dir(target)?;
    let header = format!("operator {} | rates from {}", spec.label(), dir.display());
    analysis.write(target, &header, &series, cfg.diagnostics.svg)?;
    print!("{}", analysis.report(&header));
    Ok(if analysis.exceeded() { ExitCode::Verdict } else { ExitCode::Ok })
}
