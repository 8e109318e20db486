//! Full analysis report, its text/JSON/CSV renderings and figure-data files.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::ledger::{
    extract_series, parse_ledger, validate_ledger, Finding, Item, LedgerSeries, ParseOptions,
    Series, YearRange,
};
use crate::metabolism::{
    allometric_fit, arithmetic_growth, crossover_years, mean_cost_profile, metabolism_index,
    trend_fit, AllometricFit, CostProfile, Crossing, GrowthRate, DEFAULT_ALPHA,
};
use crate::stats::{significance_stars, RegressionFit};

/// Items given a trend regression and a growth rate in the report.
pub const HEADLINE_ITEMS: [Item; 3] = [Item::TotalRevenue, Item::CostOfPersonnel, Item::TotalCost];

/// Companion share plotted against the numerator share.
pub const COMPANION_ITEM: Item = Item::OtherCosts;

/// Published CNR 1997-2015 cumulative growth of the cost of personnel.
pub const REFERENCE_CUMULATIVE_PERSONNEL: f64 = 1.6787;
/// Published CNR 1997-2015 cumulative growth of total revenue.
pub const REFERENCE_CUMULATIVE_REVENUE: f64 = 1.1872;
/// Published CNR 1997-2015 cumulative growth of total cost.
pub const REFERENCE_CUMULATIVE_TOTAL_COST: f64 = 1.2744;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone)]
pub struct ReportConfig {
    pub input_path: PathBuf,
    pub period: YearRange,
    pub numerator: Item,
    pub denominator: Item,
    pub alpha: f64,
    pub output_format: OutputFormat,
    pub output_dir: Option<PathBuf>,
    pub delimiter: u8,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            input_path: PathBuf::new(),
            period: YearRange::DEFAULT,
            numerator: Item::CostOfPersonnel,
            denominator: Item::TotalRevenue,
            alpha: DEFAULT_ALPHA,
            output_format: OutputFormat::Text,
            output_dir: None,
            delimiter: b',',
        }
    }
}

impl ReportConfig {
    pub fn validate(&self) -> Result<()> {
        if self.period.start >= self.period.end {
            return Err(Error::Range {
                start: self.period.start,
                end: self.period.end,
            });
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Domain(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    pub fn load_ledger(&self) -> Result<LedgerSeries> {
        let file = fs::File::open(&self.input_path).map_err(Error::io(&self.input_path))?;
        let organization = self
            .input_path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        parse_ledger(
            file,
            &ParseOptions {
                delimiter: self.delimiter,
                organization,
            },
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendRow {
    pub item: Item,
    pub fit: RegressionFit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub item: Item,
    pub rate: GrowthRate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetabolismRow {
    pub year: i32,
    pub m_percent: f64,
    pub m_companion_percent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetabolismSeries {
    pub numerator: Item,
    pub denominator: Item,
    /// `None` when the companion item is missing in some year.
    pub companion: Option<Item>,
    pub points: Vec<MetabolismRow>,
}

/// Share-ratio consistency between the metabolism index and growth rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub m_start: f64,
    pub m_end: f64,
    pub cumulative_numerator: f64,
    pub cumulative_denominator: f64,
    /// `m_end / m_start`
    pub observed_share_ratio: f64,
    /// `(1 + cumulative_numerator) / (1 + cumulative_denominator)`
    pub predicted_share_ratio: f64,
    pub reference_cumulative_personnel: f64,
    pub reference_cumulative_revenue: f64,
    pub reference_share_ratio: f64,
    /// `m_start * reference_share_ratio`
    pub reference_implied_m_end: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub organization: String,
    pub period: YearRange,
    pub trend: Vec<TrendRow>,
    pub growth: Vec<GrowthRow>,
    pub allometric: AllometricFit,
    pub metabolism: MetabolismSeries,
    pub crossings: Vec<Crossing>,
    pub mean_costs: CostProfile,
    pub validation: Vec<Finding>,
    pub cross_check: CrossCheck,
    pub notes: Vec<String>,
    /// Ledger restricted to the analysis window; source for figure files.
    #[serde(skip)]
    pub ledger: LedgerSeries,
}

pub fn run_report(config: &ReportConfig) -> Result<Report> {
    config.validate()?;
    let ledger = config.load_ledger()?;
    build_report(&ledger, config)
}

/// First through last ledger year inside `requested`.
pub fn analysis_window(ledger: &LedgerSeries, requested: YearRange) -> Result<YearRange> {
    let mut years = ledger.in_period(requested).map(|r| r.year);
    match (years.next(), years.last()) {
        (Some(start), Some(end)) => YearRange::new(start, end),
        (Some(only), None) => YearRange::new(only, only),
        _ => Err(Error::EmptyRange {
            start: requested.start,
            end: requested.end,
        }),
    }
}

/// Runs every analysis over an in-memory ledger. The analysis window is the
/// first through last ledger year inside `config.period`.
pub fn build_report(ledger: &LedgerSeries, config: &ReportConfig) -> Result<Report> {
    config.validate()?;
    let period = analysis_window(ledger, config.period)?;
    let window = ledger.restrict(period);
    let mut notes = Vec::new();

    let trend = HEADLINE_ITEMS
        .iter()
        .map(|&item| {
            trend_fit(&window, item, period)
                .map(|fit| TrendRow { item, fit })
                .map_err(Error::in_analysis("trend"))
        })
        .collect::<Result<Vec<_>>>()?;

    let growth_for = |item: Item| -> Result<GrowthRate> {
        let series = extract_series(&window, item, Some(period))?;
        arithmetic_growth(&series, period.start, period.end)
    };
    let growth = HEADLINE_ITEMS
        .iter()
        .map(|&item| {
            growth_for(item)
                .map(|rate| GrowthRow { item, rate })
                .map_err(Error::in_analysis("growth"))
        })
        .collect::<Result<Vec<_>>>()?;

    let allometric = allometric_fit(
        &window,
        config.numerator,
        config.denominator,
        period,
        config.alpha,
    )
    .map_err(Error::in_analysis("allometric"))?;

    let primary = metabolism_index(&window, config.numerator, config.denominator, period)
        .map_err(Error::in_analysis("metabolism"))?;
    let companion = match metabolism_index(&window, COMPANION_ITEM, config.denominator, period) {
        Ok(points) => Some(points),
        Err(Error::MissingData { years, .. }) => {
            notes.push(format!(
                "{COMPANION_ITEM} missing in {years:?}; companion share and crossings omitted"
            ));
            None
        }
        Err(e) => return Err(Error::in_analysis("metabolism")(e)),
    };
    let metabolism = MetabolismSeries {
        numerator: config.numerator,
        denominator: config.denominator,
        companion: companion.as_ref().map(|_| COMPANION_ITEM),
        points: primary
            .iter()
            .enumerate()
            .map(|(i, p)| MetabolismRow {
                year: p.year,
                m_percent: p.m_percent,
                m_companion_percent: companion.as_ref().map(|c| c[i].m_percent),
            })
            .collect(),
    };

    let crossings = match &companion {
        Some(other) => {
            let a = Series::new(primary.iter().map(|p| (p.year, p.m_percent)).collect())?;
            let b = Series::new(other.iter().map(|p| (p.year, p.m_percent)).collect())?;
            crossover_years(&a, &b).map_err(Error::in_analysis("crossover"))?
        }
        None => Vec::new(),
    };

    let mean_costs =
        mean_cost_profile(&window, period).map_err(Error::in_analysis("mean costs"))?;
    if !mean_costs.omitted.is_empty() {
        let names: Vec<&str> = mean_costs.omitted.iter().map(|i| i.name()).collect();
        notes.push(format!(
            "mean cost profile omits items not reported in every year: {}",
            names.join(", ")
        ));
    }

    let cross_check = {
        let num = growth_for(config.numerator).map_err(Error::in_analysis("cross-check"))?;
        let den = growth_for(config.denominator).map_err(Error::in_analysis("cross-check"))?;
        let m_start = primary.first().map(|p| p.m_percent).unwrap_or(f64::NAN);
        let m_end = primary.last().map(|p| p.m_percent).unwrap_or(f64::NAN);
        let reference_share_ratio =
            (1.0 + REFERENCE_CUMULATIVE_PERSONNEL) / (1.0 + REFERENCE_CUMULATIVE_REVENUE);
        CrossCheck {
            m_start,
            m_end,
            cumulative_numerator: num.cumulative,
            cumulative_denominator: den.cumulative,
            observed_share_ratio: m_end / m_start,
            predicted_share_ratio: (1.0 + num.cumulative) / (1.0 + den.cumulative),
            reference_cumulative_personnel: REFERENCE_CUMULATIVE_PERSONNEL,
            reference_cumulative_revenue: REFERENCE_CUMULATIVE_REVENUE,
            reference_share_ratio,
            reference_implied_m_end: m_start * reference_share_ratio,
        }
    };

    Ok(Report {
        organization: window.organization.clone(),
        period,
        trend,
        growth,
        allometric,
        metabolism,
        crossings,
        mean_costs,
        validation: validate_ledger(&window),
        cross_check,
        notes,
        ledger: window,
    })
}

// ---------------------------------------------------------------------------
// rendering

/// Renders `value` as pretty JSON, as long-format `field,value` CSV, or with
/// the supplied text renderer.
pub fn render<T: Serialize>(
    value: &T,
    format: OutputFormat,
    text: impl FnOnce(&T) -> String,
) -> Result<String> {
    match format {
        OutputFormat::Text => Ok(text(value)),
        OutputFormat::Json => {
            let mut out = serde_json::to_string_pretty(value)?;
            out.push('\n');
            Ok(out)
        }
        OutputFormat::Csv => {
            let mut rows = Vec::new();
            flatten_json(&serde_json::to_value(value)?, String::new(), &mut rows);
            let mut out = String::from("field,value\n");
            for (field, v) in rows {
                let _ = writeln!(out, "{},{}", csv_escape(&field), csv_escape(&v));
            }
            Ok(out)
        }
    }
}

fn flatten_json(value: &Value, prefix: String, out: &mut Vec<(String, String)>) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten_json(v, join(k), out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten_json(v, join(&i.to_string()), out);
            }
        }
        Value::Null => out.push((prefix, String::new())),
        Value::String(s) => out.push((prefix, s.clone())),
        other => out.push((prefix, other.to_string())),
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render_report(report: &Report, format: OutputFormat) -> Result<String> {
    render(report, format, report_text)
}

pub fn render_trend_table(rows: &[TrendRow], format: OutputFormat) -> Result<String> {
    render(&rows, format, |rows| trend_text(rows))
}

pub fn render_allometric_table(fit: &AllometricFit, format: OutputFormat) -> Result<String> {
    render(fit, format, allometric_text)
}

fn format_p(p: f64) -> String {
    if p < 0.001 {
        "<0.001".to_string()
    } else {
        format!("{p:.3}")
    }
}

fn format_f(f: f64) -> String {
    if f.is_finite() {
        format!("{f:.2}")
    } else {
        "inf".to_string()
    }
}

fn fit_flags(fit: &RegressionFit) -> &'static str {
    if fit.degenerate_response {
        "  [degenerate response]"
    } else if fit.exact_fit {
        "  [exact fit]"
    } else {
        ""
    }
}

pub fn trend_text(rows: &[TrendRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Linear trends: item = constant + coefficient * year");
    let _ = writeln!(
        out,
        "{:<20} {:>26} {:>22} {:>14} {:>6} {:>18}",
        "dependent", "constant (s.e.)", "coefficient (s.e.)", "stand. coef.", "R2", "F (sign.)"
    );
    for row in rows {
        let fit = &row.fit;
        let constant = format!(
            "{:.3}{}",
            fit.intercept,
            significance_stars(fit.p_intercept)
        );
        let coef = format!("{:.3}{}", fit.slope, significance_stars(fit.p_slope));
        let f = format!("{} ({})", format_f(fit.f_statistic), format_p(fit.p_f));
        let _ = writeln!(
            out,
            "{:<20} {:>26} {:>22} {:>14.2} {:>6.2} {:>18}{}",
            row.item.name(),
            constant,
            coef,
            fit.standardized_slope,
            fit.r_squared,
            f,
            fit_flags(fit)
        );
        let _ = writeln!(
            out,
            "{:<20} {:>26} {:>22}",
            format!("  n = {}", fit.n),
            format!("({:.3})", fit.se_intercept),
            format!("({:.3})", fit.se_slope)
        );
    }
    let _ = writeln!(out, "*** p < 0.001, ** p < 0.01, * p < 0.05");
    out
}

pub fn growth_text(rows: &[GrowthRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Arithmetic growth (r_per_year = (pt - p0) / (p0 * t_years); cumulative_pct = 100 * (pt - p0) / p0)");
    let _ = writeln!(
        out,
        "{:<20} {:>6} {:>6} {:>20} {:>20} {:>8} {:>12} {:>15}",
        "item", "start", "end", "p0", "pt", "t_years", "r_per_year", "cumulative_pct"
    );
    for row in rows {
        let g = &row.rate;
        let _ = writeln!(
            out,
            "{:<20} {:>6} {:>6} {:>20.3} {:>20.3} {:>8} {:>12.6} {:>15.2}",
            row.item.name(),
            g.start,
            g.end,
            g.p0,
            g.pt,
            g.t_years,
            g.r_per_year,
            g.cumulative_pct()
        );
    }
    out
}

pub fn allometric_text(fit: &AllometricFit) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Allometric model: ln {} = ln a + B ln {}  (n = {})",
        fit.dependent, fit.explanatory, fit.n
    );
    let _ = writeln!(
        out,
        "  constant ln a      {:.3}{} ({:.3})",
        fit.ln_a,
        significance_stars(fit.p_ln_a),
        fit.se_ln_a
    );
    let _ = writeln!(
        out,
        "  coefficient B      {:.3}{} ({:.3})",
        fit.b,
        significance_stars(fit.p_b),
        fit.se_b
    );
    let _ = writeln!(out, "  stand. coef.       {:.2}", fit.standardized_b);
    let _ = writeln!(
        out,
        "  R2                 {:.2} (std. error of the estimate {:.3})",
        fit.r_squared, fit.residual_se
    );
    let _ = writeln!(
        out,
        "  F                  {} ({})",
        format_f(fit.f_statistic),
        format_p(fit.p_b)
    );
    let t = fit
        .t_vs_isometry
        .map(|t| format!("{t:.3}"))
        .unwrap_or_else(|| "exact fit".to_string());
    let _ = writeln!(
        out,
        "  H0 B = 1: t = {}, critical {:.3} at alpha {} -> {}",
        t, fit.t_critical, fit.test_alpha, fit.classification
    );
    out
}

fn share_column(item: Item) -> String {
    match item {
        Item::CostOfPersonnel => "m_personnel_percent".to_string(),
        other => format!("m_{}_percent", other.name()),
    }
}

pub fn metabolism_text(series: &MetabolismSeries) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Metabolism index: 100 * {} / {}",
        series.numerator, series.denominator
    );
    let companion = series
        .companion
        .map(share_column)
        .unwrap_or_else(|| "-".to_string());
    let _ = writeln!(
        out,
        "{:<6} {:>22} {:>22}",
        "year",
        share_column(series.numerator),
        companion
    );
    for p in &series.points {
        let other = p
            .m_companion_percent
            .map(|v| format!("{v:.2}"))
            .unwrap_or_default();
        let _ = writeln!(out, "{:<6} {:>22.2} {:>22}", p.year, p.m_percent, other);
    }
    out
}

pub fn crossings_text(crossings: &[Crossing]) -> String {
    let mut out = String::from("Crossings\n");
    if crossings.is_empty() {
        out.push_str("  none\n");
    }
    for c in crossings {
        let _ = writeln!(
            out,
            "  between {} and {}: at {:.2}",
            c.from_year, c.to_year, c.at
        );
    }
    out
}

pub fn mean_costs_text(profile: &CostProfile) -> String {
    let mut out = String::from("Mean costs\n");
    let _ = writeln!(
        out,
        "{:<28} {:>4} {:>20} {:>20} {:>20} {:>20}",
        "item", "n", "mean", "sd", "min", "max"
    );
    for (item, d) in &profile.items {
        let _ = writeln!(
            out,
            "{:<28} {:>4} {:>20.3} {:>20.3} {:>20.3} {:>20.3}",
            item.name(),
            d.n,
            d.mean,
            d.sd,
            d.min,
            d.max
        );
    }
    out
}

pub fn validation_text(findings: &[Finding]) -> String {
    let mut out = String::from("Validation\n");
    if findings.is_empty() {
        out.push_str("  no findings\n");
    }
    for f in findings {
        let _ = writeln!(out, "  {f}");
    }
    out
}

pub fn cross_check_text(check: &CrossCheck) -> String {
    let mut out = String::from("Cross-check\n");
    let _ = writeln!(
        out,
        "  M(start) = {:.2}, M(end) = {:.2}, observed M(end)/M(start) = {:.4}",
        check.m_start, check.m_end, check.observed_share_ratio
    );
    let _ = writeln!(
        out,
        "  (1 + {:.4}) / (1 + {:.4}) = {:.4} predicted from cumulative growth",
        check.cumulative_numerator, check.cumulative_denominator, check.predicted_share_ratio
    );
    let _ = writeln!(
        out,
        "  reference CNR 1997-2015 cumulative growth: personnel {:.2}%, revenue {:.2}% -> share ratio {:.4}; from M(start) this implies M(end) = {:.2}",
        100.0 * check.reference_cumulative_personnel,
        100.0 * check.reference_cumulative_revenue,
        check.reference_share_ratio,
        check.reference_implied_m_end
    );
    out
}

pub fn report_text(report: &Report) -> String {
    let mut out = String::new();
    let org = if report.organization.is_empty() {
        "ledger"
    } else {
        &report.organization
    };
    let _ = writeln!(
        out,
        "Economic metabolism report: {org}, {}\n",
        report.period
    );
    out.push_str(&trend_text(&report.trend));
    out.push('\n');
    out.push_str(&growth_text(&report.growth));
    out.push('\n');
    out.push_str(&allometric_text(&report.allometric));
    out.push('\n');
    out.push_str(&metabolism_text(&report.metabolism));
    out.push('\n');
    out.push_str(&crossings_text(&report.crossings));
    out.push('\n');
    out.push_str(&mean_costs_text(&report.mean_costs));
    out.push('\n');
    out.push_str(&cross_check_text(&report.cross_check));
    out.push('\n');
    out.push_str(&validation_text(&report.validation));
    if !report.notes.is_empty() {
        out.push_str("\nNotes\n");
        for note in &report.notes {
            let _ = writeln!(out, "  {note}");
        }
    }
    out
}

// ---------------------------------------------------------------------------
// figure data

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    FigA1,
    FigA2,
    FigA3,
}

impl FigureId {
    pub const ALL: [FigureId; 7] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::FigA1,
        FigureId::FigA2,
        FigureId::FigA3,
    ];

    pub fn id(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::FigA1 => "figA1",
            FigureId::FigA2 => "figA2",
            FigureId::FigA3 => "figA3",
        }
    }

    pub fn file_name(self) -> String {
        format!("{}.csv", self.id())
    }

    fn yearly_items(self) -> &'static [Item] {
        match self {
            FigureId::Fig2 => &[Item::TotalRevenue, Item::CostOfPersonnel],
            FigureId::Fig3 => &[Item::TotalRevenue, Item::TotalCost],
            FigureId::FigA1 => &[
                Item::CostOfPersonnel,
                Item::MaterialsAndProducts,
                Item::Services,
                Item::LeasedAssetsThirdParties,
                Item::OtherCosts,
            ],
            FigureId::FigA2 => &Item::PERSONNEL_COMPONENTS,
            FigureId::FigA3 => &[Item::CostOfPersonnel, Item::OtherCosts],
            FigureId::Fig1 | FigureId::Fig4 => &[],
        }
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| Error::UnknownFigure(s.to_string()))
    }
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// CSV contents of one figure-data file.
pub fn figure_csv(report: &Report, figure: FigureId) -> Result<String> {
    let mut out = String::new();
    match figure {
        FigureId::Fig1 => {
            out.push_str("item,mean\n");
            for (item, d) in &report.mean_costs.items {
                let _ = writeln!(out, "{},{}", item.name(), d.mean);
            }
        }
        FigureId::Fig4 => {
            let m = &report.metabolism;
            let companion = share_column(m.companion.unwrap_or(COMPANION_ITEM));
            let _ = writeln!(out, "year,{},{}", share_column(m.numerator), companion);
            for p in &m.points {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    p.year,
                    p.m_percent,
                    opt_cell(p.m_companion_percent)
                );
            }
        }
        yearly => {
            let items = yearly.yearly_items();
            let names: Vec<&str> = items.iter().map(|i| i.name()).collect();
            let _ = writeln!(out, "year,{}", names.join(","));
            if report.ledger.is_empty() {
                return Err(Error::Domain(format!(
                    "report carries no ledger rows for {}",
                    yearly.id()
                )));
            }
            for record in report.ledger.records() {
                let cells: Vec<String> = items.iter().map(|&i| opt_cell(record.get(i))).collect();
                let _ = writeln!(out, "{},{}", record.year, cells.join(","));
            }
        }
    }
    Ok(out)
}

fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(Error::io(dir))?;
    tmp.write_all(contents.as_bytes())
        .map_err(Error::io(&path))?;
    tmp.persist(&path).map_err(|e| Error::io(&path)(e.error))?;
    Ok(path)
}

/// Writes `<figure_id>.csv` into `output_dir` and returns its path.
pub fn emit_figure_data(report: &Report, figure: FigureId, output_dir: &Path) -> Result<PathBuf> {
    let contents = figure_csv(report, figure)?;
    fs::create_dir_all(output_dir).map_err(Error::io(output_dir))?;
    write_atomic(output_dir, &figure.file_name(), &contents)
}

/// Writes every figure file. Contents are rendered before anything touches
/// the disk, and files already written are removed if a later write fails.
pub fn emit_all_figures(report: &Report, output_dir: &Path) -> Result<Vec<PathBuf>> {
    let rendered = FigureId::ALL
        .iter()
        .map(|&f| figure_csv(report, f).map(|c| (f, c)))
        .collect::<Result<Vec<_>>>()?;
    fs::create_dir_all(output_dir).map_err(Error::io(output_dir))?;
    let mut written = Vec::new();
    for (figure, contents) in rendered {
        match write_atomic(output_dir, &figure.file_name(), &contents) {
            Ok(path) => written.push(path),
            Err(e) => {
                for path in &written {
                    let _ = fs::remove_file(path);
                }
                return Err(e);
            }
        }
    }
    Ok(written)
}
