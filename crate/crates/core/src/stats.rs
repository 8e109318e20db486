//! Simple linear regression with inference, and descriptive statistics.
//!
//! The regression works on mean-centered data and reports coefficients in the
//! original parameterization. Calendar years against statement-scale money
//! produce intercepts around 1e10, so the centered sums matter.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ledger::Series;
use crate::special::{p_value_f, p_value_t};

/// Residual norm, relative to the spread of the response, at or below which a
/// fit is treated as exact.
pub const EXACT_FIT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub n: usize,
    pub intercept: f64,
    pub slope: f64,
    pub se_intercept: f64,
    pub se_slope: f64,
    pub standardized_slope: f64,
    pub r_squared: f64,
    /// Std. error of the estimate (residual standard deviation).
    pub residual_se: f64,
    /// +inf for an exact fit.
    #[serde(with = "non_finite_as_null")]
    pub f_statistic: f64,
    pub p_intercept: f64,
    pub p_slope: f64,
    pub p_f: f64,
    pub residuals: Vec<f64>,
    /// The response has zero variance.
    pub degenerate_response: bool,
    /// Residuals vanish; standard errors and p-values are reported as 0.
    pub exact_fit: bool,
}

impl RegressionFit {
    pub fn df_residual(&self) -> usize {
        self.n - 2
    }

    /// Slope t statistic, or `None` when the standard error is zero.
    pub fn t_slope(&self) -> Option<f64> {
        (self.se_slope > 0.0).then(|| self.slope / self.se_slope)
    }
}

/// Serializes infinities as `null` and reads `null` back as +inf.
pub(crate) mod non_finite_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &f64, s: S) -> Result<S::Ok, S::Error> {
        if value.is_finite() {
            s.serialize_f64(*value)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// Fits `y = intercept + slope * x` on two series with identical years.
pub fn ols_fit(x: &Series, y: &Series) -> Result<RegressionFit> {
    if x.len() != y.len() {
        return Err(Error::Alignment(format!(
            "regressor has {} points, response has {}",
            x.len(),
            y.len()
        )));
    }
    if !x.same_years(y) {
        return Err(Error::Alignment(
            "regressor and response years differ".into(),
        ));
    }
    let xs: Vec<f64> = x.values().collect();
    let ys: Vec<f64> = y.values().collect();
    ols(&xs, &ys)
}

/// Fits `y = intercept + slope * x` on paired slices.
pub fn ols(x: &[f64], y: &[f64]) -> Result<RegressionFit> {
    if x.len() != y.len() {
        return Err(Error::Alignment(format!(
            "regressor has {} points, response has {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Domain(
            "regression input contains non-finite values".into(),
        ));
    }
    if x.iter().all(|&v| v == x[0]) {
        return Err(Error::DegenerateRegressor);
    }

    let nf = n as f64;
    let x_mean = x.iter().sum::<f64>() / nf;
    let df = (n - 2) as u32;

    if y.iter().all(|&v| v == y[0]) {
        return Ok(RegressionFit {
            n,
            intercept: y[0],
            slope: 0.0,
            se_intercept: 0.0,
            se_slope: 0.0,
            standardized_slope: 0.0,
            r_squared: 0.0,
            residual_se: 0.0,
            f_statistic: 0.0,
            p_intercept: if y[0] == 0.0 { 1.0 } else { 0.0 },
            p_slope: 1.0,
            p_f: 1.0,
            residuals: vec![0.0; n],
            degenerate_response: true,
            exact_fit: false,
        });
    }

    let y_mean = y.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - x_mean;
        let dy = yi - y_mean;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let residuals: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| (yi - y_mean) - slope * (xi - x_mean))
        .collect();
    let sse: f64 = residuals.iter().map(|r| r * r).sum();

    let r = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);
    let exact_fit = sse.sqrt() <= EXACT_FIT_TOLERANCE * syy.sqrt();

    if exact_fit {
        let sign = if slope > 0.0 { 1.0 } else { -1.0 };
        return Ok(RegressionFit {
            n,
            intercept,
            slope,
            se_intercept: 0.0,
            se_slope: 0.0,
            standardized_slope: sign,
            r_squared: 1.0,
            residual_se: 0.0,
            f_statistic: f64::INFINITY,
            p_intercept: if intercept == 0.0 { 1.0 } else { 0.0 },
            p_slope: 0.0,
            p_f: 0.0,
            residuals,
            degenerate_response: false,
            exact_fit: true,
        });
    }

    let sigma2 = sse / df as f64;
    let se_slope = (sigma2 / sxx).sqrt();
    let se_intercept = (sigma2 * (1.0 / nf + x_mean * x_mean / sxx)).sqrt();
    let t_slope = slope / se_slope;
    let t_intercept = intercept / se_intercept;
    let f_statistic = t_slope * t_slope;

    Ok(RegressionFit {
        n,
        intercept,
        slope,
        se_intercept,
        se_slope,
        standardized_slope: r,
        r_squared: r * r,
        residual_se: sigma2.sqrt(),
        f_statistic,
        p_intercept: p_value_t(t_intercept, df)?,
        p_slope: p_value_t(t_slope, df)?,
        p_f: p_value_f(f_statistic, 1, df)?,
        residuals,
        degenerate_response: false,
        exact_fit: false,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Descriptives {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single value.
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

pub fn descriptives(values: &[f64]) -> Result<Descriptives> {
    if values.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    // Welford
    let mut mean = 0.0;
    let mut m2 = 0.0;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for (i, &v) in values.iter().enumerate() {
        let delta = v - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (v - mean);
        min = min.min(v);
        max = max.max(v);
    }
    let n = values.len();
    let sd = if n > 1 {
        (m2 / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(Descriptives {
        n,
        mean: mean.clamp(min, max),
        sd,
        min,
        max,
    })
}

/// Significance stars: `***` below 0.001, `**` below 0.01, `*` below 0.05.
pub fn significance_stars(p: f64) -> &'static str {
    if p < 0.001 {
        "***"
    } else if p < 0.01 {
        "**"
    } else if p < 0.05 {
        "*"
    } else {
        ""
    }
}
