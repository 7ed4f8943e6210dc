use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use super::Verdict;
use crate::error::Result;

pub fn write_verdicts_csv(path: &Path, verdicts: &[Verdict]) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(
        f,
        "quantity,column,predicted_rate,beta,fitted_exponent,r_squared,t_min,t_max,envelope_start,envelope_sup,ratio,satisfied"
    )?;
    let opt = |v: Option<f64>| v.map_or(String::new(), |v| format!("{v:?}"));
    for v in verdicts {
        writeln!(
            f,
            "\"{}\",{},{:?},{:?},{},{},{:?},{:?},{:?},{:?},{:?},{}",
            v.quantity,
            v.column,
            v.predicted_rate,
            v.beta,
            opt(v.fitted_exponent),
            opt(v.r_squared),
            v.window.0,
            v.window.1,
            v.envelope_start,
            v.envelope_sup,
            v.ratio,
            v.satisfied
        )?;
    }
    f.flush()?;
    Ok(())
}

/// Fixed-width text table of verdicts.
pub fn verdict_table(verdicts: &[Verdict]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<10} {:>8} {:>6} {:>10} {:>8} {:>8}",
        "quantity", "rate", "beta", "fitted", "ratio", "verdict"
    );
    for v in verdicts {
        let fitted = v.fitted_exponent.map_or("-".to_string(), |e| format!("{:.4}", -e));
        let _ = writeln!(
            s,
            "{:<10} {:>8.4} {:>6.3} {:>10} {:>8.3} {:>8}",
            v.quantity,
            v.predicted_rate,
            v.beta,
            fitted,
            v.ratio,
            if v.satisfied { "bounded" } else { "EXCEEDED" }
        );
    }
    s
}
