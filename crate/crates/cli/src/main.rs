mod analysis;
mod args;
mod commands;
mod config;
mod run;

use std::process;

use anyhow::{Context, Result};
use clap::Parser;
use frontlab::Error;

use args::{Cli, Command, SimulateArgs, SweepArgs};
use config::{OperatorConfig, RunConfig, SweepEntry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitCode {
    Ok = 0,
    Input = 1,
    /// Certificate not satisfied, counts unresolved, oracle mismatch or an
    /// exceeded envelope.
    Verdict = 2,
    Numerical = 3,
}

fn classify(err: &anyhow::Error) -> ExitCode {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::UnresolvedCount(_) => ExitCode::Verdict,
                Error::NonFinite { .. }
                | Error::Cfl(_)
                | Error::Divergence { .. }
                | Error::SingularLinearization { .. }
                | Error::Quadrature(_)
                | Error::InertiaBreakdown(_)
                | Error::NoConnection(_) => ExitCode::Numerical,
                _ => ExitCode::Input,
            };
        }
    }
    ExitCode::Input
}

fn base_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(o) = &cli.out {
        cfg.out = o.clone();
    }
    if let Some(s) = cli.seed {
        cfg.perturbation.seed = s;
    }
    Ok(cfg)
}

fn simulate(mut cfg: RunConfig, a: &SimulateArgs) -> Result<ExitCode> {
    a.op.apply(&mut cfg)?;
    a.perturbation.apply(&mut cfg);
    a.stepper.apply(&mut cfg);
    if let Some(m) = &a.model {
        cfg.diagnostics.model = args::parse_model(m)?;
    }
    if let Some(w) = &a.window {
        cfg.diagnostics.window = Some(args::parse_window(w)?);
    }
    let s = run::simulate(&cfg, &cfg.out)?;
    println!("run written to {}", s.dir.display());
    print!("{}", std::fs::read_to_string(s.dir.join("report.txt"))?);
    if s.monotone == Some(false) {
        println!("warning: ||v||_2 was not monotone (see meta.json)");
    }
    if s.certified == Some(false) {
        println!("warning: the front is not certified");
    }
    Ok(if s.verdicts_exceeded { ExitCode::Verdict } else { ExitCode::Ok })
}

fn sweep(mut cfg: RunConfig, a: &SweepArgs) -> Result<ExitCode> {
    a.stepper.apply(&mut cfg);
    let entries: Vec<SweepEntry> = match (&a.presets, &a.kinds) {
        (None, None) => cfg.sweep.runs.clone(),
        (p, k) => {
            let presets: Vec<String> = match p {
                Some(p) => p.split(',').map(|s| s.trim().to_string()).collect(),
                None => vec![cfg.operator.preset.clone().unwrap_or_else(|| "burgers".into())],
            };
            let kinds = match k {
                Some(k) => k.split(',').map(|s| s.trim().parse()).collect::<Result<Vec<_>, _>>()?,
                None => vec![cfg.perturbation.kind],
            };
            presets
                .iter()
                .flat_map(|p| {
                    let cfg = &cfg;
                    kinds.iter().map(move |k| SweepEntry {
                        name: None,
                        operator: Some(OperatorConfig {
                            preset: Some(p.clone()),
                            ..cfg.operator.clone()
                        }),
                        perturbation: Some(config::PerturbationConfig {
                            kind: *k,
                            ..cfg.perturbation.clone()
                        }),
                        t_end: None,
                    })
                })
                .collect()
        }
    };
    if entries.is_empty() {
        anyhow::bail!("nothing to sweep: give [[sweep.runs]] in the config or --presets/--kinds");
    }
    std::fs::create_dir_all(&cfg.out).with_context(|| format!("cannot create {}", cfg.out.display()))?;
    let results = run::sweep(&cfg, &entries, &cfg.out);
    let mut code = ExitCode::Ok;
    let mut csv = String::from("name,operator,status,certified,monotone,verdicts_exceeded,final_l2,c_fit\n");
    let opt = |x: Option<String>| x.unwrap_or_default();
    for r in &results {
        match &r.result {
            Ok(s) => {
                if s.verdicts_exceeded {
                    code = code.max(ExitCode::Verdict);
                }
                println!(
                    "{:<40} {:<24} monotone {:<5} final l2 {:.3e}{}",
                    r.name,
                    s.operator,
                    s.monotone.unwrap_or(false),
                    s.final_l2.unwrap_or(f64::NAN),
                    if s.verdicts_exceeded { "  EXCEEDED" } else { "" }
                );
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    r.name,
                    s.operator.replace(',', ";"),
                    s.status,
                    opt(s.certified.map(|b| b.to_string())),
                    opt(s.monotone.map(|b| b.to_string())),
                    s.verdicts_exceeded,
                    opt(s.final_l2.map(|b| b.to_string())),
                    opt(s.c_fit.map(|b| b.to_string()))
                ));
            }
            Err(e) => {
                code = code.max(classify(e));
                println!("{:<40} failed: {e:#}", r.name);
                csv.push_str(&format!("{},,failed: {},,,,,\n", r.name, format!("{e:#}").replace([',', '\n'], " ")));
            }
        }
    }
    std::fs::write(cfg.out.join("sweep.csv"), csv)?;
    Ok(code)
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("cannot configure the thread pool")?;
    }
    let mut cfg = base_config(&cli)?;
    match &cli.command {
        Command::Front(a) => {
            a.op.apply(&mut cfg)?;
            commands::front(&cfg)
        }
        Command::Certify(a) => {
            a.op.apply(&mut cfg)?;
            commands::certify(&cfg, a)
        }
        Command::Simulate(a) => simulate(cfg, a),
        Command::Oracle(a) => {
            a.op.apply(&mut cfg)?;
            a.perturbation.apply(&mut cfg);
            a.stepper.apply(&mut cfg);
            commands::oracle(&cfg, a)
        }
        Command::Rates(a) => commands::rates(a, cli.out.as_deref()),
        Command::Sweep(a) => sweep(cfg, a),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            process::exit(if e.use_stderr() { ExitCode::Input as i32 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let code = match run(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            classify(&e)
        }
    };
    process::exit(code as i32);
}
