use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use frontlab::certify::CertifyOptions;
use frontlab::diagnostics::{TheoremModel, DEFAULT_DELTA};
use frontlab::evolution::{PerturbationKind, StepperConfig};
use frontlab::front::FrontOptions;
use frontlab::spectral::Grid;
use frontlab::symbol::{preset, FracTerm, MultiplierSpec, Preset, PresetParams};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OperatorConfig {
    /// Registered preset name (`burgers`, `kdvb`, `bo`, `hilbert`, `frac`).
    pub preset: Option<String>,
    pub nu: Option<f64>,
    /// Fractional terms as `[a, alpha]` pairs.
    pub terms: Option<Vec<[f64; 2]>>,
    /// Symbol expression in `k`; exclusive with `preset`.
    pub symbol: Option<String>,
}

impl OperatorConfig {
    pub fn spec(&self) -> Result<MultiplierSpec> {
        let spec = match (&self.symbol, &self.preset) {
            (Some(_), Some(_)) => bail!("give either an operator preset or a symbol, not both"),
            (Some(s), None) => MultiplierSpec::parse(s)?,
            (None, p) => {
                let params = PresetParams {
                    nu: self.nu,
                    terms: self
                        .terms
                        .iter()
                        .flatten()
                        .map(|[a, alpha]| FracTerm { a: *a, alpha: *alpha })
                        .collect(),
                };
                preset(p.as_deref().unwrap_or("burgers"), &params)?
            }
        };
        spec.require_admissible()?;
        Ok(spec)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    pub length: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { n: 1024, length: 80.0 }
    }
}

impl GridConfig {
    pub fn grid(&self) -> Result<Grid> {
        Ok(Grid::new(self.n, self.length)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrontConfig {
    pub method: String,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FrontConfig {
    fn default() -> Self {
        let o = FrontOptions::default();
        Self {
            method: "auto".into(),
            tol: o.tol,
            max_iter: o.max_iter,
        }
    }
}

impl FrontConfig {
    pub fn options(&self) -> FrontOptions {
        FrontOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PerturbationConfig {
    pub kind: PerturbationKind,
    /// Zero gives the zero perturbation.
    pub amplitude: f64,
    pub width: f64,
    pub seed: u64,
}

impl Default for PerturbationConfig {
    fn default() -> Self {
        Self {
            kind: PerturbationKind::Gaussian,
            amplitude: 0.3,
            width: 1.0,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelChoice {
    /// KdV-Burgers table for local operators, fractional table for odd data
    /// with a real symbol, none otherwise.
    #[default]
    Auto,
    Kdvb,
    Fractional,
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnosticsConfig {
    pub model: ModelChoice,
    /// Envelope and fitting window; `[T/4, T]` when absent.
    pub window: Option<[f64; 2]>,
    pub delta: f64,
    /// Write a field snapshot every this many recorded states.
    pub field_every: usize,
    pub svg: bool,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            model: ModelChoice::Auto,
            window: None,
            delta: DEFAULT_DELTA,
            field_every: 20,
            svg: true,
        }
    }
}

impl DiagnosticsConfig {
    pub fn model(&self, spec: &MultiplierSpec, kind: PerturbationKind) -> Option<TheoremModel> {
        match self.model {
            ModelChoice::Kdvb => Some(TheoremModel::KdvBurgers { delta: self.delta }),
            ModelChoice::Fractional => Some(TheoremModel::FractionalOdd),
            ModelChoice::None => None,
            ModelChoice::Auto => match spec.preset() {
                Some(Preset::Burgers | Preset::Kdvb { .. }) => {
                    Some(TheoremModel::KdvBurgers { delta: self.delta })
                }
                Some(Preset::Frac { .. }) if kind.is_odd() => Some(TheoremModel::FractionalOdd),
                _ => None,
            },
        }
    }
}

/// One entry of a sweep: overrides applied to the base configuration.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepEntry {
    pub name: Option<String>,
    pub operator: Option<OperatorConfig>,
    pub perturbation: Option<PerturbationConfig>,
    pub t_end: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub runs: Vec<SweepEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub out: PathBuf,
    pub operator: OperatorConfig,
    pub grid: GridConfig,
    pub front: FrontConfig,
    pub certificate: CertifyOptions,
    pub perturbation: PerturbationConfig,
    pub stepper: StepperConfig,
    pub diagnostics: DiagnosticsConfig,
    pub sweep: SweepConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            out: PathBuf::from("frontlab-out"),
            operator: OperatorConfig::default(),
            grid: GridConfig::default(),
            front: FrontConfig::default(),
            certificate: CertifyOptions::default(),
            perturbation: PerturbationConfig::default(),
            stepper: StepperConfig::default(),
            diagnostics: DiagnosticsConfig::default(),
            sweep: SweepConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }
}
