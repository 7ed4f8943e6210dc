use serde::{Deserialize, Serialize};

use super::NormSeries;

/// Growth factor of `int v^2 |x| dx` over its initial value that is flagged.
pub const WEIGHTED_GROWTH_FLAG: f64 = 3.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedReport {
    /// `sup_t int v^2 |x| dx`.
    pub sup_weighted: f64,
    /// `int_0^T ||v||_2^2 dt`.
    pub cumulative_l2sq: f64,
    pub growth_flag: bool,
    /// Records with `t ||v(t)||_2^2` above the running time integral.
    pub chain_violations: usize,
}

pub fn weighted_bound_monitor(series: &NormSeries) -> WeightedReport {
    let r = &series.records;
    let w0 = r.first().map_or(0.0, |x| x.weighted);
    let sup_weighted = r.iter().fold(0.0f64, |m, x| m.max(x.weighted));
    let chain_violations = r
        .iter()
        .filter(|x| x.t * x.l2 * x.l2 > x.int_l2sq * (1.0 + 1e-10) + 1e-300)
        .count();
    WeightedReport {
        sup_weighted,
        cumulative_l2sq: r.last().map_or(0.0, |x| x.int_l2sq),
        growth_flag: sup_weighted > WEIGHTED_GROWTH_FLAG * w0,
        chain_violations,
    }
}
