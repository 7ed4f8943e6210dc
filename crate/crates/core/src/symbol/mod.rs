//! Fourier-multiplier symbols `l(k)`: parsing, evaluation, admissibility
//! checks, named presets and Galilean rescaling.
//!
//! The variable `k` is the angular wavenumber, so `d/dx` corresponds to
//! `i k` and `(-d^2)^alpha` to `|k|^(2 alpha)`.

mod admissibility;
mod expr;
mod parser;
mod preset;

pub use admissibility::{
    admissibility_samples, default_samples, validate_admissibility, AdmissibilityReport,
    SYMBOL_TOL,
};
pub use expr::{eval_symbol, Node, SymbolExpr};
pub use parser::{parse_symbol, parse_symbol_with};
pub use preset::{preset, presets, FracTerm, OperatorPreset, Preset, PresetParams};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A multiplier symbol together with its label and admissibility evidence.
#[derive(Clone, Debug)]
pub struct MultiplierSpec {
    expr: SymbolExpr,
    label: String,
    preset: Option<Preset>,
    admissibility: AdmissibilityReport,
}

impl MultiplierSpec {
    /// Wraps `expr`, validating it on the default sample set.
    pub fn new(expr: SymbolExpr, label: impl Into<String>) -> Self {
        Self::with_preset(expr, label, None)
    }

    pub(crate) fn with_preset(
        expr: SymbolExpr,
        label: impl Into<String>,
        preset: Option<Preset>,
    ) -> Self {
        let admissibility = validate_admissibility(&expr, &default_samples());
        Self {
            expr,
            label: label.into(),
            preset,
            admissibility,
        }
    }

    /// Parses a DSL string and validates it.
    pub fn parse(text: &str) -> Result<Self> {
        let expr = parse_symbol(text)?;
        Ok(Self::new(expr, text))
    }

    pub fn expr(&self) -> &SymbolExpr {
        &self.expr
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn preset(&self) -> Option<&Preset> {
        self.preset.as_ref()
    }

    pub fn admissibility(&self) -> &AdmissibilityReport {
        &self.admissibility
    }

    /// Re-validates on an explicit sample set (e.g. a simulation grid).
    pub fn revalidate(&mut self, samples: &[f64]) -> &AdmissibilityReport {
        self.admissibility = validate_admissibility(&self.expr, samples);
        &self.admissibility
    }

    pub fn require_admissible(&self) -> Result<()> {
        if self.admissibility.passed {
            Ok(())
        } else {
            Err(Error::NotAdmissible(self.label.clone()))
        }
    }

    /// True for the zero symbol (plain viscous Burgers).
    pub fn is_zero(&self) -> bool {
        matches!(self.preset, Some(Preset::Burgers))
            || matches!(self.expr.root(), Node::Const(c) if *c == Complex64::new(0.0, 0.0))
    }

    pub fn eval(&self, wavenumbers: &[f64]) -> Result<Vec<Complex64>> {
        self.expr.eval_many(wavenumbers)
    }

    /// Spec of `lambda^-2 l(lambda k)`.
    pub fn rescaled(&self, lambda: f64) -> Result<MultiplierSpec> {
        rescale_symbol(self, lambda)
    }
}

/// Galilean rescaling of a multiplier: `l_1(k) = lambda^-2 l(lambda k)`.
pub fn rescale_symbol(spec: &MultiplierSpec, lambda: f64) -> Result<MultiplierSpec> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "scale lambda must be positive, got {lambda}"
        )));
    }
    if lambda == 1.0 {
        return Ok(spec.clone());
    }
    if let Some(p) = spec.preset().and_then(|p| p.rescaled(lambda)) {
        return p.spec();
    }
    let expr = spec.expr.rescaled(lambda)?;
    let label = format!("{} rescaled by {lambda}", spec.label);
    Ok(MultiplierSpec::new(expr, label))
}
