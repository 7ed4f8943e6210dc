use std::fmt::Write;
use std::path::Path;

use anyhow::Result;
use frontlab::diagnostics::plot::{loglog_svg, Curve, Guide};
use frontlab::diagnostics::{
    check_energy_inequality, compare_to_theorem, default_window, l1_contraction, verdict_table,
    weighted_bound_monitor, write_verdicts_csv, EnergyCheck, L1Contraction, NormSeries, TheoremModel,
    Verdict, WeightedReport,
};
use frontlab::Error;
use serde::Serialize;

/// Post-processing of a norm series, shared by `simulate` and `rates` so
/// both produce identical verdicts from the same data.
#[derive(Debug, Serialize)]
pub struct Analysis {
    pub model: Option<TheoremModel>,
    pub window: Option<(f64, f64)>,
    pub verdicts: Vec<Verdict>,
    pub energy: Option<EnergyCheck>,
    pub l1: Option<L1Contraction>,
    pub weighted: WeightedReport,
    pub notes: Vec<String>,
}

impl Analysis {
    pub fn exceeded(&self) -> bool {
        self.verdicts.iter().any(|v| !v.satisfied)
    }
}

pub fn analyze(series: &NormSeries, model: Option<TheoremModel>, window: Option<[f64; 2]>) -> Result<Analysis> {
    let mut notes = Vec::new();
    let energy = match check_energy_inequality(series) {
        Ok(e) => Some(e),
        Err(Error::SeriesTooShort(m)) => {
            notes.push(format!("energy check skipped: {m}"));
            None
        }
        Err(e) => return Err(e.into()),
    };
    let mut verdicts = Vec::new();
    let mut win = None;
    if let Some(m) = &model {
        let w = match window {
            Some([a, b]) => Ok((a, b)),
            None => default_window(series).map(|(a, b)| match m {
                TheoremModel::FractionalOdd => (a.max(2.0), b),
                _ => (a, b),
            }),
        };
        match w.and_then(|w| compare_to_theorem(series, m, w).map(|v| (w, v))) {
            Ok((w, v)) => {
                win = Some(w);
                verdicts = v;
            }
            Err(e @ (Error::Window(_) | Error::SeriesTooShort(_))) => {
                notes.push(format!("no envelope verdicts: {e}"))
            }
            Err(e) => return Err(e.into()),
        }
    }
    let l1 = match model {
        Some(TheoremModel::FractionalOdd) => Some(l1_contraction(series, 1e-8)?),
        _ => None,
    };
    Ok(Analysis {
        model,
        window: win,
        verdicts,
        energy,
        l1,
        weighted: weighted_bound_monitor(series),
        notes,
    })
}

impl Analysis {
    pub fn report(&self, header: &str) -> String {
        let mut s = String::new();
        writeln!(s, "{header}").unwrap();
        match &self.model {
            Some(m) => writeln!(s, "model: {}", serde_json::to_string(m).unwrap_or_default()).unwrap(),
            None => writeln!(s, "model: none").unwrap(),
        }
        if let Some((a, b)) = self.window {
            writeln!(s, "window: [{a}, {b}]").unwrap();
        }
        if !self.verdicts.is_empty() {
            s.push('\n');
            s.push_str(&verdict_table(&self.verdicts));
            s.push('\n');
        }
        match &self.energy {
            Some(e) => writeln!(
                s,
                "energy: C_fit = {:.4}, {} growth intervals out of {}",
                e.c_fit, e.violations, e.intervals
            )
            .unwrap(),
            None => writeln!(s, "energy: not fitted").unwrap(),
        }
        if let Some(l1) = &self.l1 {
            writeln!(
                s,
                "L1 contraction: worst ratio {:.6}, {}",
                l1.worst_ratio,
                if l1.passed { "holds" } else { "FAILS" }
            )
            .unwrap();
        }
        let w = &self.weighted;
        writeln!(
            s,
            "weighted norm: sup {:.4e}, growth flag {}, chain violations {}",
            w.sup_weighted, w.growth_flag, w.chain_violations
        )
        .unwrap();
        for n in &self.notes {
            writeln!(s, "note: {n}").unwrap();
        }
        s
    }

    /// Writes `verdicts.csv`, `report.txt`, `analysis.json` and optionally
    /// `norms.svg` into `dir`.
    pub fn write(&self, dir: &Path, header: &str, series: &NormSeries, svg: bool) -> Result<()> {
        write_verdicts_csv(&dir.join("verdicts.csv"), &self.verdicts)?;
        std::fs::write(dir.join("report.txt"), self.report(header))?;
        std::fs::write(dir.join("analysis.json"), serde_json::to_string_pretty(self)?)?;
        if svg {
            std::fs::write(dir.join("norms.svg"), norms_svg(series, &self.verdicts)?)?;
        }
        Ok(())
    }
}

fn norms_svg(series: &NormSeries, verdicts: &[Verdict]) -> Result<String> {
    let t = series.times();
    let mut names = vec!["l2".to_string(), "linf".to_string(), "dv_l2".to_string()];
    for v in verdicts {
        if !names.contains(&v.column) {
            names.push(v.column.clone());
        }
    }
    let cols: Vec<Vec<f64>> = names.iter().map(|n| series.column(n)).collect::<Result<_, _>>()?;
    let curves: Vec<Curve> = names
        .iter()
        .zip(&cols)
        .map(|(n, c)| Curve {
            label: n,
            times: &t,
            values: c,
        })
        .collect();
    let labels: Vec<String> = verdicts.iter().map(|v| format!("t^-{:.3}", v.predicted_rate)).collect();
    let guides: Vec<Guide> = verdicts
        .iter()
        .zip(&labels)
        .map(|(v, l)| Guide {
            label: l,
            rate: v.predicted_rate,
            anchor: names.iter().position(|n| *n == v.column).unwrap_or(0),
        })
        .collect();
    Ok(loglog_svg("perturbation norms", &curves, &guides))
}
