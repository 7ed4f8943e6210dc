use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::expr::{Node, SymbolExpr};
use super::MultiplierSpec;
use crate::error::{Error, Result};
use crate::registry::Registry;

/// One term `a |k|^(2 alpha)` of a fractional dissipation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FracTerm {
    pub a: f64,
    pub alpha: f64,
}

/// Named operator families with their parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Preset {
    /// `L = 0`.
    Burgers,
    /// `L = nu d^3`, symbol `nu (ik)^3`.
    Kdvb { nu: f64 },
    /// Benjamin–Ono–Burgers, `L = d |d|`, symbol `ik |k|`.
    Bo,
    /// Hilbert–Burgers, `L = d |d|^-1`, symbol `i sgn(k)`.
    Hilbert,
    /// `L = -sum a_j (-d^2)^alpha_j`, symbol `-sum a_j |k|^(2 alpha_j)`.
    Frac { terms: Vec<FracTerm> },
}

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::Burgers => "burgers",
            Preset::Kdvb { .. } => "kdvb",
            Preset::Bo => "bo",
            Preset::Hilbert => "hilbert",
            Preset::Frac { .. } => "frac",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Preset::Kdvb { nu } if !nu.is_finite() => {
                Err(Error::InvalidParameter(format!("kdvb: nu must be finite, got {nu}")))
            }
            Preset::Frac { terms } => {
                if terms.is_empty() {
                    return Err(Error::InvalidParameter("frac: at least one term required".into()));
                }
                let mut prev = 0.0;
                for t in terms {
                    if !(t.a >= 0.0) || !t.a.is_finite() {
                        return Err(Error::InvalidParameter(format!(
                            "frac: coefficient a = {} must be nonnegative",
                            t.a
                        )));
                    }
                    if !(t.alpha > prev && t.alpha < 1.0) {
                        return Err(Error::InvalidParameter(format!(
                            "frac: exponents must satisfy 0 < alpha_1 < ... < alpha_N < 1, got {}",
                            t.alpha
                        )));
                    }
                    prev = t.alpha;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Expression tree for the preset, built directly (not parsed).
    pub fn node(&self) -> Node {
        let ik = || Node::mul(Node::imag_unit(), Node::K);
        match self {
            Preset::Burgers => Node::real(0.0),
            Preset::Kdvb { nu } => Node::mul(Node::real(*nu), Node::pow(ik(), 3.0)),
            Preset::Bo => Node::mul(ik(), Node::abs(Node::K)),
            Preset::Hilbert => Node::mul(Node::imag_unit(), Node::sgn(Node::K)),
            Preset::Frac { terms } => {
                let term = |t: &FracTerm| {
                    Node::mul(Node::real(t.a), Node::pow(Node::abs(Node::K), 2.0 * t.alpha))
                };
                let mut sum = term(&terms[0]);
                for t in &terms[1..] {
                    sum = Node::add(sum, term(t));
                }
                Node::neg(sum)
            }
        }
    }

    /// Source text in the DSL that parses to the same symbol.
    pub fn source(&self) -> String {
        match self {
            Preset::Burgers => "0".into(),
            Preset::Kdvb { nu } => format!("{nu:?}*(i*k)^3"),
            Preset::Bo => "i*k*abs(k)".into(),
            Preset::Hilbert => "i*sgn(k)".into(),
            Preset::Frac { terms } => {
                let parts: Vec<String> = terms
                    .iter()
                    .map(|t| format!("{:?}*abs(k)^{:?}", t.a, 2.0 * t.alpha))
                    .collect();
                format!("-({})", parts.join("+"))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Preset::Kdvb { nu } => format!("kdvb(nu={nu})"),
            Preset::Frac { terms } => {
                let parts: Vec<String> =
                    terms.iter().map(|t| format!("({}, {})", t.a, t.alpha)).collect();
                format!("frac([{}])", parts.join(", "))
            }
            other => other.name().to_string(),
        }
    }

    /// Preset describing `lambda^-2 l(lambda k)`, when the family is closed
    /// under rescaling.
    pub fn rescaled(&self, lambda: f64) -> Option<Preset> {
        match self {
            Preset::Burgers => Some(Preset::Burgers),
            Preset::Kdvb { nu } => Some(Preset::Kdvb { nu: nu * lambda }),
            Preset::Bo => Some(Preset::Bo),
            Preset::Hilbert => (lambda == 1.0).then_some(Preset::Hilbert),
            Preset::Frac { terms } => Some(Preset::Frac {
                terms: terms
                    .iter()
                    .map(|t| FracTerm {
                        a: t.a * lambda.powf(2.0 * t.alpha - 2.0),
                        alpha: t.alpha,
                    })
                    .collect(),
            }),
        }
    }

    pub fn spec(&self) -> Result<MultiplierSpec> {
        self.validate()?;
        let expr = SymbolExpr::new(self.source(), self.node())?;
        Ok(MultiplierSpec::with_preset(expr, self.label(), Some(self.clone())))
    }
}

/// Parameters accepted by preset builders.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PresetParams {
    pub nu: Option<f64>,
    pub terms: Vec<FracTerm>,
}

/// A named operator family that can be instantiated from parameters.
pub trait OperatorPreset: Send + Sync {
    fn describe(&self) -> &'static str;
    fn build(&self, params: &PresetParams) -> Result<Preset>;
}

struct Fixed(Preset, &'static str);

impl OperatorPreset for Fixed {
    fn describe(&self) -> &'static str {
        self.1
    }
    fn build(&self, _params: &PresetParams) -> Result<Preset> {
        Ok(self.0.clone())
    }
}

struct KdvbPreset;

impl OperatorPreset for KdvbPreset {
    fn describe(&self) -> &'static str {
        "KdV-Burgers, L = nu d^3 (requires nu)"
    }
    fn build(&self, params: &PresetParams) -> Result<Preset> {
        let nu = params
            .nu
            .ok_or_else(|| Error::InvalidParameter("kdvb requires nu".into()))?;
        Ok(Preset::Kdvb { nu })
    }
}

struct FracPreset;

impl OperatorPreset for FracPreset {
    fn describe(&self) -> &'static str {
        "fractional Burgers, L = -sum a_j (-d^2)^alpha_j (requires terms)"
    }
    fn build(&self, params: &PresetParams) -> Result<Preset> {
        let p = Preset::Frac {
            terms: params.terms.clone(),
        };
        p.validate()?;
        Ok(p)
    }
}

/// Registry of the built-in operator presets.
pub fn presets() -> &'static Registry<dyn OperatorPreset> {
    static REG: OnceLock<Registry<dyn OperatorPreset>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut r: Registry<dyn OperatorPreset> = Registry::new("preset");
        r.register("burgers", Arc::new(Fixed(Preset::Burgers, "viscous Burgers, L = 0")));
        r.register("kdvb", Arc::new(KdvbPreset));
        r.register("bo", Arc::new(Fixed(Preset::Bo, "Benjamin-Ono-Burgers, L = d|d|")));
        r.register("hilbert", Arc::new(Fixed(Preset::Hilbert, "Hilbert-Burgers, L = d|d|^-1")));
        r.register("frac", Arc::new(FracPreset));
        r
    })
}

/// Builds the validated multiplier spec of a named preset.
pub fn preset(name: &str, params: &PresetParams) -> Result<MultiplierSpec> {
    presets().get(name)?.build(params)?.spec()
}
