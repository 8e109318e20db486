//! Economic-metabolism analyses over a ledger: linear trends, the cost share
//! of revenue, arithmetic growth, the log-log allometric model, crossovers
//! between two series and the mean-cost profile.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ledger::{extract_series, Item, LedgerSeries, Series, YearRange};
use crate::special::t_critical;
use crate::stats::{descriptives, ols_fit, Descriptives, RegressionFit};

/// Default significance level for the isometry test.
pub const DEFAULT_ALPHA: f64 = 0.05;

/// Tolerance on `|b - 1|` when an exact fit leaves no standard error.
pub const EXACT_ISOMETRY_TOLERANCE: f64 = 1e-12;

/// Linear time trend of one item over calendar years.
pub fn trend_fit(ledger: &LedgerSeries, item: Item, period: YearRange) -> Result<RegressionFit> {
    let y = extract_series(ledger, item, Some(period))?;
    ols_fit(&y.year_series(), &y)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetabolismPoint {
    pub year: i32,
    pub m_percent: f64,
}

/// `100 * numerator / denominator` for every year in the period.
pub fn metabolism_index(
    ledger: &LedgerSeries,
    numerator: Item,
    denominator: Item,
    period: YearRange,
) -> Result<Vec<MetabolismPoint>> {
    let num = extract_series(ledger, numerator, Some(period))?;
    let den = extract_series(ledger, denominator, Some(period))?;
    num.points()
        .iter()
        .zip(den.points())
        .map(|(&(year, n), &(_, d))| {
            if d > 0.0 {
                Ok(MetabolismPoint {
                    year,
                    m_percent: 100.0 * n / d,
                })
            } else {
                Err(Error::DivisionDomain {
                    year,
                    item: denominator.name().to_string(),
                    value: d,
                })
            }
        })
        .collect()
}

/// Arithmetic (non-compounding) growth between two years.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthRate {
    pub start: i32,
    pub end: i32,
    pub p0: f64,
    pub pt: f64,
    pub t_years: u32,
    /// `(pt - p0) / (p0 * t_years)`
    pub r_per_year: f64,
    /// `(pt - p0) / p0`
    pub cumulative: f64,
}

impl GrowthRate {
    pub fn cumulative_pct(&self) -> f64 {
        100.0 * self.cumulative
    }
}

pub fn arithmetic_growth(series: &Series, start: i32, end: i32) -> Result<GrowthRate> {
    if start >= end {
        return Err(Error::Range { start, end });
    }
    let lookup = |year| {
        series.value_at(year).ok_or_else(|| Error::MissingData {
            item: "growth series".into(),
            years: vec![year],
        })
    };
    let p0 = lookup(start)?;
    let pt = lookup(end)?;
    if p0 <= 0.0 {
        return Err(Error::Domain(format!(
            "growth base must be positive, got {p0} in {start}"
        )));
    }
    let t_years = (end - start) as u32;
    let cumulative = (pt - p0) / p0;
    Ok(GrowthRate {
        start,
        end,
        p0,
        pt,
        t_years,
        r_per_year: cumulative / t_years as f64,
        cumulative,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Allometry {
    /// B < 1: cost grows more slowly than revenue.
    NegativeAllometric,
    /// B = 1: proportional growth.
    Isometric,
    /// B > 1: disproportionate cost growth.
    PositiveAllometric,
}

impl fmt::Display for Allometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Allometry::NegativeAllometric => "negative allometric",
            Allometry::Isometric => "isometric",
            Allometry::PositiveAllometric => "positive allometric",
        })
    }
}

/// Tests H0: B = 1 with a two-sided t test at `alpha`.
pub fn classify_allometry(b: f64, se_b: f64, n: usize, alpha: f64) -> Result<Allometry> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    if n < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n });
    }
    if se_b.is_nan() || se_b < 0.0 || !b.is_finite() {
        return Err(Error::Domain(format!(
            "invalid estimate b = {b}, se = {se_b}"
        )));
    }
    let rejects = if se_b == 0.0 {
        (b - 1.0).abs() > EXACT_ISOMETRY_TOLERANCE
    } else {
        ((b - 1.0) / se_b).abs() > t_critical(alpha, (n - 2) as u32)?
    };
    Ok(match (rejects, b > 1.0) {
        (false, _) => Allometry::Isometric,
        (true, true) => Allometry::PositiveAllometric,
        (true, false) => Allometry::NegativeAllometric,
    })
}

/// Fit of `ln dependent = ln_a + b ln explanatory`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllometricFit {
    pub dependent: Item,
    pub explanatory: Item,
    pub ln_a: f64,
    pub se_ln_a: f64,
    pub b: f64,
    pub se_b: f64,
    pub standardized_b: f64,
    pub r_squared: f64,
    pub residual_se: f64,
    #[serde(with = "crate::stats::non_finite_as_null")]
    pub f_statistic: f64,
    pub p_ln_a: f64,
    pub p_b: f64,
    /// `(b - 1) / se_b`; absent for an exact fit.
    pub t_vs_isometry: Option<f64>,
    /// Two-sided critical value at `test_alpha`, df `n - 2`.
    pub t_critical: f64,
    pub n: usize,
    pub classification: Allometry,
    pub test_alpha: f64,
    pub exact_fit: bool,
}

impl AllometricFit {
    pub fn a(&self) -> f64 {
        self.ln_a.exp()
    }
}

pub fn allometric_fit(
    ledger: &LedgerSeries,
    dependent: Item,
    explanatory: Item,
    period: YearRange,
    alpha: f64,
) -> Result<AllometricFit> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let ln_series = |item: Item| -> Result<Series> {
        let s = extract_series(ledger, item, Some(period))?;
        if let Some(&(year, value)) = s.points().iter().find(|p| p.1.is_nan() || p.1 <= 0.0) {
            return Err(Error::LogDomain {
                year,
                item: item.name().to_string(),
                value,
            });
        }
        Ok(s.map(f64::ln))
    };
    let y = ln_series(dependent)?;
    let x = ln_series(explanatory)?;
    let fit = ols_fit(&x, &y)?;
    let classification = classify_allometry(fit.slope, fit.se_slope, fit.n, alpha)?;
    Ok(AllometricFit {
        dependent,
        explanatory,
        ln_a: fit.intercept,
        se_ln_a: fit.se_intercept,
        b: fit.slope,
        se_b: fit.se_slope,
        standardized_b: fit.standardized_slope,
        r_squared: fit.r_squared,
        residual_se: fit.residual_se,
        f_statistic: fit.f_statistic,
        p_ln_a: fit.p_intercept,
        p_b: fit.p_slope,
        t_vs_isometry: (fit.se_slope > 0.0).then(|| (fit.slope - 1.0) / fit.se_slope),
        t_critical: t_critical(alpha, (fit.n - 2) as u32)?,
        n: fit.n,
        classification,
        test_alpha: alpha,
        exact_fit: fit.exact_fit,
    })
}

/// A sign change of `a - b` between two consecutive years.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub from_year: i32,
    pub to_year: i32,
    /// Linearly interpolated abscissa where `a - b = 0`.
    pub at: f64,
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Scans consecutive year pairs for sign changes of `a - b`. A zero counts as
/// its own sign, but a zero already reached by the previous pair is not
/// reported a second time.
pub fn crossover_years(a: &Series, b: &Series) -> Result<Vec<Crossing>> {
    if !a.same_years(b) {
        return Err(Error::Alignment("crossover series years differ".into()));
    }
    if a.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: a.len(),
        });
    }
    let diffs: Vec<(i32, f64)> = a
        .points()
        .iter()
        .zip(b.points())
        .map(|(&(year, va), &(_, vb))| (year, va - vb))
        .collect();

    let mut out = Vec::new();
    let mut last_reached_zero = false;
    for pair in diffs.windows(2) {
        let ((y0, d0), (y1, d1)) = (pair[0], pair[1]);
        let changed = sign(d0) != sign(d1);
        let reported = changed && !(d0 == 0.0 && last_reached_zero);
        if reported {
            let at = if d0 == 0.0 {
                y0 as f64
            } else {
                let s = d0 / (d0 - d1);
                y0 as f64 + s * (y1 - y0) as f64
            };
            out.push(Crossing {
                from_year: y0,
                to_year: y1,
                at,
            });
        }
        last_reached_zero = reported && d1 == 0.0;
    }
    Ok(out)
}

/// Per-item descriptives of cost lines over a period.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CostProfile {
    pub items: BTreeMap<Item, Descriptives>,
    /// Cost items left out because some year in the period lacks them.
    pub omitted: Vec<Item>,
}

pub fn mean_cost_profile(ledger: &LedgerSeries, period: YearRange) -> Result<CostProfile> {
    let records: Vec<_> = ledger.in_period(period).collect();
    if records.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let mut profile = CostProfile::default();
    for item in Item::COSTS {
        let values: Option<Vec<f64>> = records.iter().map(|r| r.get(item)).collect();
        match values {
            Some(values) => {
                profile.items.insert(item, descriptives(&values)?);
            }
            None => profile.omitted.push(item),
        }
    }
    Ok(profile)
}
