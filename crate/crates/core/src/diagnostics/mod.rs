//! Norm series, energy and frequency-split checks, decay-rate fits and
//! envelope verdicts against the predicted decay tables.

mod energy;
mod frequency;
mod monitor;
pub mod plot;
mod rates;
mod report;
mod series;
mod theorem;

pub use energy::{check_energy_inequality, EnergyCheck, MIN_ENERGY_POINTS};
pub use frequency::{eps_opt, frequency_split_series, FrequencySplit};
pub use monitor::{weighted_bound_monitor, WeightedReport, WEIGHTED_GROWTH_FLAG};
pub use rates::{default_window, fit_rate, fit_series, RateFit, MIN_FIT_SAMPLES};
pub use report::{verdict_table, write_verdicts_csv};
pub use series::{lp_column, NormRecord, NormSeries};
pub use theorem::{
    compare_to_theorem, envelope_verdict, l1_contraction, L1Contraction, Quantity, TheoremModel,
    Verdict, DEFAULT_DELTA, ENVELOPE_FACTOR,
};
