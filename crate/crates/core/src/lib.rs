//! Economic metabolism analysis of research organizations.
//!
//! Reads annual income-statement tables and measures how funding is consumed:
//!
//! - [`ledger`]: data model, ledger file format, currency normalization, validation
//! - [`stats`]: simple OLS with standard errors, R², F and p-values
//! - [`special`]: incomplete beta and the t / F tail probabilities
//! - [`metabolism`]: trends, cost share of revenue, arithmetic growth,
//!   allometric (log-log) model with B-classification, crossovers, mean costs
//! - [`report`]: the combined report, its renderings and figure-data files

pub mod error;
pub mod ledger;
pub mod metabolism;
pub mod report;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
pub use ledger::{
    extract_series, normalize_currency, parse_ledger, validate_ledger, write_ledger, Currency,
    Finding, FiscalRecord, Item, LedgerSeries, ParseOptions, Series, YearRange, LIRE_PER_EURO,
};
pub use metabolism::{
    allometric_fit, arithmetic_growth, classify_allometry, crossover_years, mean_cost_profile,
    metabolism_index, trend_fit, AllometricFit, Allometry, CostProfile, Crossing, GrowthRate,
    MetabolismPoint,
};
pub use report::{
    build_report, emit_all_figures, emit_figure_data, render_report, run_report, FigureId,
    OutputFormat, Report, ReportConfig,
};
pub use special::{p_value_f, p_value_t, regularized_incomplete_beta, t_critical};
pub use stats::{descriptives, ols, ols_fit, significance_stars, Descriptives, RegressionFit};
