use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use frontlab::evolution::PerturbationKind;

use crate::config::{ModelChoice, OperatorConfig, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "frontlab", version, about = "Fronts, spectral certificates and perturbation decay for dispersive-diffusive Burgers equations")]
pub struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for random perturbations.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve for the front profile and save it.
    Front(FrontArgs),
    /// Count negative eigenvalues of -(1-eps) d^2 + phi'/2.
    Certify(CertifyArgs),
    /// Evolve a perturbation of the front and write a run directory.
    Simulate(SimulateArgs),
    /// Compare the solver with the exact Cole-Hopf solution (zero operator).
    Oracle(OracleArgs),
    /// Recompute fits and envelope verdicts for an existing run directory.
    Rates(RatesArgs),
    /// Run several simulations concurrently.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Default, Clone)]
pub struct OperatorArgs {
    /// Operator preset: burgers, kdvb, bo, hilbert, frac.
    #[arg(long)]
    pub preset: Option<String>,
    /// Dispersion coefficient for kdvb.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    /// Fractional terms `a:alpha[,a:alpha...]`.
    #[arg(long)]
    pub terms: Option<String>,
    /// Symbol expression in k, e.g. "-abs(k)^1.5".
    #[arg(long)]
    pub operator: Option<String>,
    /// Grid points (power of two).
    #[arg(long)]
    pub n: Option<usize>,
    /// Box length.
    #[arg(long)]
    pub length: Option<f64>,
    /// Front method: auto, closed_form, shooting, newton.
    #[arg(long)]
    pub method: Option<String>,
    /// Front residual tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug)]
pub struct FrontArgs {
    #[command(flatten)]
    pub op: OperatorArgs,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub op: OperatorArgs,
    /// Saved profile CSV (with its JSON sidecar) instead of solving.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Comma-separated eps samples in (0, 1).
    #[arg(long)]
    pub eps: Option<String>,
    /// Dirichlet half-width as a fraction of the box length.
    #[arg(long)]
    pub domain_fraction: Option<f64>,
    /// Sweep KdV-Burgers fronts over `start:end:step` in nu.
    #[arg(long, allow_hyphen_values = true)]
    pub sweep_nu: Option<String>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct PerturbationArgs {
    /// gaussian, odd_gaussian_derivative, odd_sine_packet, random_bandlimited.
    #[arg(long)]
    pub kind: Option<PerturbationKind>,
    /// Zero gives the zero perturbation.
    #[arg(long)]
    pub amplitude: Option<f64>,
    #[arg(long)]
    pub width: Option<f64>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct StepperArgs {
    /// etdrk4 or imex2.
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Steps between recorded norms.
    #[arg(long)]
    pub stride: Option<usize>,
    /// Keep aliased quadratic products.
    #[arg(long)]
    pub no_dealias: bool,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub op: OperatorArgs,
    #[command(flatten)]
    pub perturbation: PerturbationArgs,
    #[command(flatten)]
    pub stepper: StepperArgs,
    /// Decay table: auto, kdvb, fractional, none.
    #[arg(long)]
    pub model: Option<String>,
    /// Envelope window `t_min:t_max`.
    #[arg(long)]
    pub window: Option<String>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(flatten)]
    pub op: OperatorArgs,
    #[command(flatten)]
    pub perturbation: PerturbationArgs,
    #[command(flatten)]
    pub stepper: StepperArgs,
    /// Comparison times, comma-separated.
    #[arg(long, default_value = "1")]
    pub times: String,
    /// Largest accepted sup-norm discrepancy.
    #[arg(long, default_value_t = 1e-6)]
    pub threshold: f64,
}

#[derive(Args, Debug)]
pub struct RatesArgs {
    /// Run directory written by `simulate`.
    pub run: PathBuf,
    /// Decay table: auto, kdvb, fractional, none.
    #[arg(long)]
    pub model: Option<String>,
    /// Envelope window `t_min:t_max`.
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Comma-separated presets crossed with `--kinds` (instead of the
    /// `[[sweep.runs]]` table of the config).
    #[arg(long)]
    pub presets: Option<String>,
    #[arg(long)]
    pub kinds: Option<String>,
    #[command(flatten)]
    pub stepper: StepperArgs,
}

pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().with_context(|| format!("bad number `{x}`")))
        .collect()
}

/// `a:b` pair.
pub fn parse_window(s: &str) -> Result<[f64; 2]> {
    let v: Vec<&str> = s.split(':').collect();
    if v.len() != 2 {
        bail!("expected t_min:t_max, got `{s}`");
    }
    Ok([v[0].trim().parse()?, v[1].trim().parse()?])
}

/// `start:end:step`, inclusive of `end` up to rounding.
pub fn parse_range(s: &str) -> Result<Vec<f64>> {
    let v: Vec<f64> = s
        .split(':')
        .map(|x| x.trim().parse::<f64>().with_context(|| format!("bad number `{x}` in range")))
        .collect::<Result<_>>()?;
    let [a, b, h] = v[..] else {
        bail!("expected start:end:step, got `{s}`");
    };
    if !(h > 0.0) || b < a {
        bail!("range `{s}` needs a positive step and end >= start");
    }
    let n = ((b - a) / h + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| a + i as f64 * h).collect())
}

pub fn parse_terms(s: &str) -> Result<Vec<[f64; 2]>> {
    s.split(',')
        .map(|t| {
            let (a, alpha) = t
                .split_once(':')
                .with_context(|| format!("fractional term `{t}` is not a:alpha"))?;
            Ok([a.trim().parse()?, alpha.trim().parse()?])
        })
        .collect()
}

pub fn parse_model(s: &str) -> Result<ModelChoice> {
    Ok(match s {
        "auto" => ModelChoice::Auto,
        "kdvb" => ModelChoice::Kdvb,
        "fractional" => ModelChoice::Fractional,
        "none" => ModelChoice::None,
        _ => bail!("unknown model `{s}` (auto, kdvb, fractional, none)"),
    })
}

impl OperatorArgs {
    pub fn apply(&self, cfg: &mut RunConfig) -> Result<()> {
        if self.preset.is_some() || self.operator.is_some() {
            cfg.operator = OperatorConfig {
                preset: self.preset.clone(),
                symbol: self.operator.clone(),
                ..Default::default()
            };
        }
        if let Some(nu) = self.nu {
            cfg.operator.nu = Some(nu);
        }
        if let Some(t) = &self.terms {
            cfg.operator.terms = Some(parse_terms(t)?);
        }
        if let Some(n) = self.n {
            cfg.grid.n = n;
        }
        if let Some(l) = self.length {
            cfg.grid.length = l;
        }
        if let Some(m) = &self.method {
            cfg.front.method = m.clone();
        }
        if let Some(t) = self.tol {
            cfg.front.tol = t;
        }
        Ok(())
    }
}

impl PerturbationArgs {
    pub fn apply(&self, cfg: &mut RunConfig) {
        if let Some(k) = self.kind {
            cfg.perturbation.kind = k;
        }
        if let Some(a) = self.amplitude {
            cfg.perturbation.amplitude = a;
        }
        if let Some(w) = self.width {
            cfg.perturbation.width = w;
        }
    }
}

impl StepperArgs {
    pub fn apply(&self, cfg: &mut RunConfig) {
        let s = &mut cfg.stepper;
        if let Some(x) = &self.scheme {
            s.scheme = x.clone();
        }
        if self.dt.is_some() {
            s.dt = self.dt;
        }
        if let Some(g) = self.gamma {
            s.gamma = g;
        }
        if let Some(t) = self.t_end {
            s.t_end = t;
        }
        if let Some(k) = self.stride {
            s.stride = k;
        }
        if self.no_dealias {
            s.dealias = false;
        }
    }
}
