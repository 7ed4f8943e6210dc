use std::cell::RefCell;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use frontlab::certify::{certify_front, SpectralCertificate};
use frontlab::diagnostics::{NormRecord, NormSeries};
use frontlab::evolution::{evolve, make_perturbation, MonotonicityAudit, PerturbationState};
use frontlab::front::io::save_front;
use frontlab::front::{solve_front, FrontProfile};
use frontlab::spectral::io::write_columns;
use frontlab::spectral::Field;
use frontlab::symbol::MultiplierSpec;
use frontlab::Error;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{analyze, Analysis};
use crate::config::{RunConfig, SweepEntry};

pub fn build_front(cfg: &RunConfig) -> Result<(MultiplierSpec, FrontProfile)> {
    let spec = cfg.operator.spec()?;
    let grid = cfg.grid.grid()?;
    let front = solve_front(&cfg.front.method, &spec, &grid, &cfg.front.options())
        .with_context(|| format!("front for {}", spec.label()))?;
    Ok((spec, front))
}

pub fn initial_perturbation(cfg: &RunConfig, front: &FrontProfile) -> Result<Field> {
    let p = &cfg.perturbation;
    if p.amplitude == 0.0 {
        return Ok(Field::zeros(front.grid()));
    }
    Ok(make_perturbation(front.grid(), p.kind, p.amplitude, p.width, p.seed)?)
}

#[derive(Debug, Serialize)]
struct GridMeta {
    n: usize,
    length: f64,
}

#[derive(Debug, Serialize)]
struct FrontRef {
    path: &'static str,
    method: String,
    residual_sup: f64,
    box_residual: f64,
    monotone: bool,
}

#[derive(Debug, Serialize)]
struct CertificateRef {
    path: &'static str,
    satisfied: bool,
    all_resolved: bool,
}

#[derive(Debug, Serialize)]
struct RunMeta {
    version: &'static str,
    operator: String,
    symbol: String,
    grid: GridMeta,
    front: FrontRef,
    certificate: Option<CertificateRef>,
    scheme: String,
    dt: Option<f64>,
    steps: Option<usize>,
    records: usize,
    monotonicity: Option<MonotonicityAudit>,
    boundary_warnings: Option<usize>,
    energy_c_fit: Option<f64>,
    status: String,
}

/// What a finished (or aborted) run reports back to the caller.
#[derive(Debug, Serialize)]
pub struct RunSummary {
    pub dir: PathBuf,
    pub operator: String,
    pub status: String,
    pub certified: Option<bool>,
    pub monotone: Option<bool>,
    pub verdicts_exceeded: bool,
    pub final_l2: Option<f64>,
    pub c_fit: Option<f64>,
}

fn stamp(t: f64) -> String {
    format!("{:012.4}", t).replace('.', "_")
}

fn write_snapshot(dir: &Path, state: &PerturbationState) -> Result<()> {
    let v = &state.v;
    write_columns(
        &dir.join(format!("t_{}.csv", stamp(state.t))),
        &["x", "v"],
        &[v.grid().x(), v.values()],
    )?;
    Ok(())
}

/// Certifies the front; unresolved counts are reported, not fatal.
fn try_certify(cfg: &RunConfig, front: &FrontProfile, dir: &Path) -> Result<Option<SpectralCertificate>> {
    match certify_front(front, &cfg.certificate) {
        Ok(c) => {
            std::fs::write(dir.join("certificate.json"), serde_json::to_string_pretty(&c)?)?;
            if !c.satisfied {
                log::warn!("front for {} is not certified", c.operator);
            }
            Ok(Some(c))
        }
        Err(Error::UnresolvedCount(m)) => {
            log::warn!("certificate unresolved: {m}");
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

/// Runs one simulation into `dir`: front, certificate, evolution, series,
/// field snapshots, analysis and `meta.json`. On a numerical failure the
/// partial series and last good snapshot are written before the error is
/// returned.
pub fn simulate(cfg: &RunConfig, dir: &Path) -> Result<RunSummary> {
    let fields = dir.join("fields");
    std::fs::create_dir_all(&fields).with_context(|| format!("cannot create {}", fields.display()))?;
    std::fs::write(dir.join("config.snapshot"), serde_json::to_string_pretty(cfg)?)?;
    // the same configuration in the format `--config` reads
    std::fs::write(dir.join("config.toml"), cfg.to_toml()?)?;
    let (spec, front) = build_front(cfg)?;
    save_front(&front, &dir.join("front.csv"))?;
    let cert = try_certify(cfg, &front, dir)?;
    let v0 = initial_perturbation(cfg, &front)?;

    let partial = RefCell::new(NormSeries::new(cfg.stepper.p_list.clone())?);
    let last = RefCell::new(None::<PerturbationState>);
    let every = cfg.diagnostics.field_every.max(1);
    let mut count = 0usize;
    let mut observer = |s: &PerturbationState, r: &NormRecord| -> frontlab::Result<()> {
        partial.borrow_mut().push(r.clone())?;
        if count % every == 0 {
            write_snapshot(&fields, s).map_err(|e| Error::Format(e.to_string()))?;
        }
        count += 1;
        *last.borrow_mut() = Some(s.clone());
        Ok(())
    };
    let result = evolve(&v0, &front, &spec, &cfg.stepper, &mut observer);

    let mut meta = RunMeta {
        version: env!("CARGO_PKG_VERSION"),
        operator: spec.label().to_string(),
        symbol: spec.expr().source().to_string(),
        grid: GridMeta {
            n: front.grid().n(),
            length: front.grid().length(),
        },
        front: FrontRef {
            path: "front.csv",
            method: front.method().to_string(),
            residual_sup: front.residual_sup(),
            box_residual: front.box_residual(),
            monotone: front.is_monotone(1e-8),
        },
        certificate: cert.as_ref().map(|c| CertificateRef {
            path: "certificate.json",
            satisfied: c.satisfied,
            all_resolved: c.all_resolved,
        }),
        scheme: cfg.stepper.scheme.clone(),
        dt: None,
        steps: None,
        records: 0,
        monotonicity: None,
        boundary_warnings: None,
        energy_c_fit: None,
        status: String::new(),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            let series = partial.into_inner();
            series.write_csv(&dir.join("series.csv"))?;
            if let Some(s) = last.into_inner() {
                write_snapshot(&fields, &s)?;
            }
            meta.records = series.len();
            meta.status = format!("aborted: {e}");
            std::fs::write(dir.join("meta.json"), serde_json::to_string_pretty(&meta)?)?;
            return Err(anyhow::Error::new(e).context(format!("run in {}", dir.display())));
        }
    };
    if let Some(s) = last.into_inner() {
        write_snapshot(&fields, &s)?;
    }
    let series = &outcome.series;
    series.write_csv(&dir.join("series.csv"))?;
    let model = cfg.diagnostics.model(&spec, cfg.perturbation.kind);
    let analysis: Analysis = analyze(series, model, cfg.diagnostics.window)?;
    let header = format!(
        "operator {} | {} perturbation, amplitude {} | T = {}",
        spec.label(),
        cfg.perturbation.kind,
        cfg.perturbation.amplitude,
        cfg.stepper.t_end
    );
    analysis.write(dir, &header, series, cfg.diagnostics.svg)?;

    meta.dt = Some(outcome.dt);
    meta.steps = Some(outcome.steps);
    meta.records = series.len();
    meta.monotonicity = Some(outcome.monotonicity.clone());
    meta.boundary_warnings = Some(outcome.boundary_warnings);
    meta.energy_c_fit = analysis.energy.as_ref().map(|e| e.c_fit);
    meta.status = "completed".into();
    std::fs::write(dir.join("meta.json"), serde_json::to_string_pretty(&meta)?)?;

    Ok(RunSummary {
        dir: dir.to_path_buf(),
        operator: spec.label().to_string(),
        status: meta.status,
        certified: cert.map(|c| c.satisfied),
        monotone: Some(outcome.monotonicity.passed()),
        verdicts_exceeded: analysis.exceeded(),
        final_l2: series.records.last().map(|r| r.l2),
        c_fit: meta.energy_c_fit,
    })
}

fn entry_config(base: &RunConfig, e: &SweepEntry) -> RunConfig {
    let mut c = base.clone();
    if let Some(op) = &e.operator {
        c.operator = op.clone();
    }
    if let Some(p) = &e.perturbation {
        c.perturbation = p.clone();
    }
    if let Some(t) = e.t_end {
        c.stepper.t_end = t;
    }
    c.sweep.runs.clear();
    c
}

fn entry_name(i: usize, e: &SweepEntry, c: &RunConfig) -> String {
    let raw = match &e.name {
        Some(n) => n.clone(),
        None => format!(
            "{}_{}",
            c.operator.preset.as_deref().unwrap_or(if c.operator.symbol.is_some() { "symbol" } else { "burgers" }),
            c.perturbation.kind
        ),
    };
    let clean: String = raw
        .chars()
        .map(|ch| if ch.is_ascii_alphanumeric() || ch == '-' || ch == '_' { ch } else { '_' })
        .collect();
    format!("{i:02}_{clean}")
}

/// Outcome of one sweep entry; failures are kept so the others still run.
pub struct SweepResult {
    pub name: String,
    pub result: Result<RunSummary>,
}

pub fn sweep(base: &RunConfig, entries: &[SweepEntry], out: &Path) -> Vec<SweepResult> {
    entries
        .par_iter()
        .enumerate()
        .map(|(i, e)| {
            let cfg = entry_config(base, e);
            let name = entry_name(i, e, &cfg);
            let result = simulate(&cfg, &out.join(&name));
            SweepResult { name, result }
        })
        .collect()
}
