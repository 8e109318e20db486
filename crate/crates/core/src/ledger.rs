//! Income-statement data model and the delimited-text ledger format.
//!
//! A ledger file holds one row per fiscal year with the columns named by
//! [`HEADER`]. Rows denominated in Italian lire are converted to euro at the
//! fixed rate [`LIRE_PER_EURO`] while parsing, so every [`LedgerSeries`] is
//! homogeneous in EUR.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Irrevocable lira/euro conversion rate.
pub const LIRE_PER_EURO: f64 = 1936.27;

/// Relative tolerance for the personnel decomposition check.
pub const DECOMPOSITION_TOLERANCE: f64 = 1e-6;

/// Canonical header row, in column order.
pub const HEADER: [&str; 14] = [
    "year",
    "currency",
    "total_revenue",
    "cost_of_personnel",
    "salary",
    "social_security_taxes",
    "severance_pay",
    "personnel_other_costs",
    "materials_and_products",
    "services",
    "leased_assets_third_parties",
    "other_costs",
    "total_cost",
    "surplus_or_loss",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Currency {
    #[serde(rename = "EUR")]
    Eur,
    #[serde(rename = "ITL")]
    Itl,
}

impl Currency {
    pub fn code(self) -> &'static str {
        match self {
            Currency::Eur => "EUR",
            Currency::Itl => "ITL",
        }
    }
}

impl FromStr for Currency {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "EUR" => Ok(Currency::Eur),
            "ITL" => Ok(Currency::Itl),
            other => Err(format!("unknown currency code `{other}`")),
        }
    }
}

/// A money-valued line of the income statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Item {
    TotalRevenue,
    CostOfPersonnel,
    Salary,
    SocialSecurityTaxes,
    SeverancePay,
    PersonnelOtherCosts,
    MaterialsAndProducts,
    Services,
    LeasedAssetsThirdParties,
    OtherCosts,
    TotalCost,
    SurplusOrLoss,
}

impl Item {
    pub const ALL: [Item; 12] = [
        Item::TotalRevenue,
        Item::CostOfPersonnel,
        Item::Salary,
        Item::SocialSecurityTaxes,
        Item::SeverancePay,
        Item::PersonnelOtherCosts,
        Item::MaterialsAndProducts,
        Item::Services,
        Item::LeasedAssetsThirdParties,
        Item::OtherCosts,
        Item::TotalCost,
        Item::SurplusOrLoss,
    ];

    /// Cost lines, in statement order.
    pub const COSTS: [Item; 10] = [
        Item::CostOfPersonnel,
        Item::Salary,
        Item::SocialSecurityTaxes,
        Item::SeverancePay,
        Item::PersonnelOtherCosts,
        Item::MaterialsAndProducts,
        Item::Services,
        Item::LeasedAssetsThirdParties,
        Item::OtherCosts,
        Item::TotalCost,
    ];

    /// Components that should add up to the cost of personnel.
    pub const PERSONNEL_COMPONENTS: [Item; 4] = [
        Item::Salary,
        Item::SocialSecurityTaxes,
        Item::SeverancePay,
        Item::PersonnelOtherCosts,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Item::TotalRevenue => "total_revenue",
            Item::CostOfPersonnel => "cost_of_personnel",
            Item::Salary => "salary",
            Item::SocialSecurityTaxes => "social_security_taxes",
            Item::SeverancePay => "severance_pay",
            Item::PersonnelOtherCosts => "personnel_other_costs",
            Item::MaterialsAndProducts => "materials_and_products",
            Item::Services => "services",
            Item::LeasedAssetsThirdParties => "leased_assets_third_parties",
            Item::OtherCosts => "other_costs",
            Item::TotalCost => "total_cost",
            Item::SurplusOrLoss => "surplus_or_loss",
        }
    }

    pub fn is_required(self) -> bool {
        matches!(
            self,
            Item::TotalRevenue | Item::CostOfPersonnel | Item::TotalCost
        )
    }

    /// Only the surplus/loss line may legitimately be negative.
    pub fn may_be_negative(self) -> bool {
        self == Item::SurplusOrLoss
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Item {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Item::ALL
            .into_iter()
            .find(|item| item.name() == s)
            .ok_or_else(|| Error::UnknownItem(s.to_string()))
    }
}

/// One fiscal year of the income statement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiscalRecord {
    pub year: i32,
    pub currency: Currency,
    pub total_revenue: f64,
    pub cost_of_personnel: f64,
    pub salary: Option<f64>,
    pub social_security_taxes: Option<f64>,
    pub severance_pay: Option<f64>,
    pub personnel_other_costs: Option<f64>,
    pub materials_and_products: Option<f64>,
    pub services: Option<f64>,
    pub leased_assets_third_parties: Option<f64>,
    pub other_costs: Option<f64>,
    pub total_cost: f64,
    pub surplus_or_loss: f64,
}

impl FiscalRecord {
    /// A EUR record with only the required items and a zero surplus.
    pub fn new(year: i32, total_revenue: f64, cost_of_personnel: f64, total_cost: f64) -> Self {
        FiscalRecord {
            year,
            currency: Currency::Eur,
            total_revenue,
            cost_of_personnel,
            salary: None,
            social_security_taxes: None,
            severance_pay: None,
            personnel_other_costs: None,
            materials_and_products: None,
            services: None,
            leased_assets_third_parties: None,
            other_costs: None,
            total_cost,
            surplus_or_loss: 0.0,
        }
    }

    pub fn get(&self, item: Item) -> Option<f64> {
        match item {
            Item::TotalRevenue => Some(self.total_revenue),
            Item::CostOfPersonnel => Some(self.cost_of_personnel),
            Item::Salary => self.salary,
            Item::SocialSecurityTaxes => self.social_security_taxes,
            Item::SeverancePay => self.severance_pay,
            Item::PersonnelOtherCosts => self.personnel_other_costs,
            Item::MaterialsAndProducts => self.materials_and_products,
            Item::Services => self.services,
            Item::LeasedAssetsThirdParties => self.leased_assets_third_parties,
            Item::OtherCosts => self.other_costs,
            Item::TotalCost => Some(self.total_cost),
            Item::SurplusOrLoss => Some(self.surplus_or_loss),
        }
    }

    /// Sets `item`. Passing `None` for a required item is ignored.
    pub fn set(&mut self, item: Item, value: Option<f64>) {
        match item {
            Item::TotalRevenue => self.total_revenue = value.unwrap_or(self.total_revenue),
            Item::CostOfPersonnel => {
                self.cost_of_personnel = value.unwrap_or(self.cost_of_personnel)
            }
            Item::Salary => self.salary = value,
            Item::SocialSecurityTaxes => self.social_security_taxes = value,
            Item::SeverancePay => self.severance_pay = value,
            Item::PersonnelOtherCosts => self.personnel_other_costs = value,
            Item::MaterialsAndProducts => self.materials_and_products = value,
            Item::Services => self.services = value,
            Item::LeasedAssetsThirdParties => self.leased_assets_third_parties = value,
            Item::OtherCosts => self.other_costs = value,
            Item::TotalCost => self.total_cost = value.unwrap_or(self.total_cost),
            Item::SurplusOrLoss => self.surplus_or_loss = value.unwrap_or(self.surplus_or_loss),
        }
    }

    pub fn with(mut self, item: Item, value: f64) -> Self {
        self.set(item, Some(value));
        self
    }

    /// Applies `f` to every present money value.
    pub fn map_money(&self, f: impl Fn(f64) -> f64) -> Self {
        let mut out = self.clone();
        for item in Item::ALL {
            out.set(item, self.get(item).map(&f));
        }
        out
    }
}

/// Converts an ITL record to EUR; EUR records pass through unchanged.
pub fn normalize_currency(record: FiscalRecord) -> FiscalRecord {
    match record.currency {
        Currency::Eur => record,
        Currency::Itl => {
            let mut out = record.map_money(|v| v / LIRE_PER_EURO);
            out.currency = Currency::Eur;
            out
        }
    }
}

/// Inclusive range of calendar years.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearRange {
    pub start: i32,
    pub end: i32,
}

impl YearRange {
    pub const DEFAULT: YearRange = YearRange {
        start: 1997,
        end: 2015,
    };

    pub fn new(start: i32, end: i32) -> Result<Self> {
        if start > end {
            return Err(Error::Range { start, end });
        }
        Ok(YearRange { start, end })
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.start..=self.end).contains(&year)
    }
}

impl Default for YearRange {
    fn default() -> Self {
        YearRange::DEFAULT
    }
}

impl fmt::Display for YearRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.start, self.end)
    }
}

/// Year-indexed values with strictly increasing years.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Series {
    points: Vec<(i32, f64)>,
}

impl Series {
    pub fn new(points: Vec<(i32, f64)>) -> Result<Self> {
        for pair in points.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::UnorderedYears {
                    previous: pair[0].0,
                    year: pair[1].0,
                });
            }
        }
        Ok(Series { points })
    }

    pub fn from_values(first_year: i32, values: &[f64]) -> Self {
        Series {
            points: values
                .iter()
                .enumerate()
                .map(|(i, &v)| (first_year + i as i32, v))
                .collect(),
        }
    }

    pub fn points(&self) -> &[(i32, f64)] {
        &self.points
    }

    pub fn years(&self) -> impl ExactSizeIterator<Item = i32> + '_ {
        self.points.iter().map(|p| p.0)
    }

    pub fn values(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.1)
    }

    pub fn value_at(&self, year: i32) -> Option<f64> {
        self.points
            .binary_search_by_key(&year, |p| p.0)
            .ok()
            .map(|i| self.points[i].1)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Series {
        Series {
            points: self.points.iter().map(|&(y, v)| (y, f(v))).collect(),
        }
    }

    /// The calendar years as a regressor series.
    pub fn year_series(&self) -> Series {
        Series {
            points: self.points.iter().map(|&(y, _)| (y, y as f64)).collect(),
        }
    }

    pub fn same_years(&self, other: &Series) -> bool {
        self.years().eq(other.years())
    }
}

/// All fiscal records of one organization, in EUR and ordered by year.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LedgerSeries {
    pub organization: String,
    records: Vec<FiscalRecord>,
}

impl LedgerSeries {
    /// Normalizes every record to EUR and sorts by year.
    pub fn new(organization: impl Into<String>, records: Vec<FiscalRecord>) -> Result<Self> {
        let mut records: Vec<FiscalRecord> = records.into_iter().map(normalize_currency).collect();
        records.sort_by_key(|r| r.year);
        if let Some(pair) = records.windows(2).find(|w| w[0].year == w[1].year) {
            return Err(Error::DuplicateYear {
                line: 0,
                year: pair[0].year,
            });
        }
        Ok(LedgerSeries {
            organization: organization.into(),
            records,
        })
    }

    pub fn records(&self) -> &[FiscalRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn first_year(&self) -> Option<i32> {
        self.records.first().map(|r| r.year)
    }

    pub fn last_year(&self) -> Option<i32> {
        self.records.last().map(|r| r.year)
    }

    /// Records whose year falls in `period`.
    pub fn in_period(&self, period: YearRange) -> impl Iterator<Item = &FiscalRecord> + '_ {
        self.records.iter().filter(move |r| period.contains(r.year))
    }

    /// A copy restricted to `period`.
    pub fn restrict(&self, period: YearRange) -> LedgerSeries {
        LedgerSeries {
            organization: self.organization.clone(),
            records: self.in_period(period).cloned().collect(),
        }
    }
}

/// Options for reading a ledger file.
#[derive(Debug, Clone)]
pub struct ParseOptions {
    pub delimiter: u8,
    pub organization: String,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            delimiter: b',',
            organization: String::new(),
        }
    }
}

fn parse_error(line: u64, column: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column: column.to_string(),
        message: message.into(),
    }
}

/// Reads a delimited ledger table. Line numbers in errors are 1-based and
/// count the header.
pub fn parse_ledger<R: Read>(source: R, options: &ParseOptions) -> Result<LedgerSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let headers = reader
        .headers()
        .map_err(|e| parse_error(1, "<header>", e.to_string()))?
        .clone();

    let mut year_col = None;
    let mut currency_col = None;
    let mut item_cols: Vec<(Item, usize)> = Vec::new();
    for (idx, name) in headers.iter().enumerate() {
        let duplicate = || parse_error(1, name, "column appears more than once");
        match name {
            "year" => {
                if year_col.replace(idx).is_some() {
                    return Err(duplicate());
                }
            }
            "currency" => {
                if currency_col.replace(idx).is_some() {
                    return Err(duplicate());
                }
            }
            other => {
                let item =
                    Item::from_str(other).map_err(|_| parse_error(1, other, "unknown column"))?;
                if item_cols.iter().any(|(i, _)| *i == item) {
                    return Err(duplicate());
                }
                item_cols.push((item, idx));
            }
        }
    }
    let year_col = year_col.ok_or_else(|| parse_error(1, "year", "missing required column"))?;
    let currency_col =
        currency_col.ok_or_else(|| parse_error(1, "currency", "missing required column"))?;
    for item in Item::ALL.into_iter().filter(|i| i.is_required()) {
        if !item_cols.iter().any(|(i, _)| *i == item) {
            return Err(parse_error(1, item.name(), "missing required column"));
        }
    }

    let mut records: Vec<FiscalRecord> = Vec::new();
    let mut seen: BTreeMap<i32, u64> = BTreeMap::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            parse_error(line, "<row>", e.to_string())
        })?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let cell = |idx: usize| row.get(idx).unwrap_or("");

        let year_text = cell(year_col);
        let year: i32 = year_text
            .parse()
            .map_err(|_| parse_error(line, "year", format!("invalid year `{year_text}`")))?;
        if seen.insert(year, line).is_some() {
            return Err(Error::DuplicateYear { line, year });
        }
        let currency = Currency::from_str(cell(currency_col))
            .map_err(|msg| parse_error(line, "currency", msg))?;

        let mut record = FiscalRecord::new(year, 0.0, 0.0, 0.0);
        record.currency = currency;
        let mut surplus_given = false;
        for &(item, idx) in &item_cols {
            let text = cell(idx);
            if text.is_empty() {
                if item.is_required() {
                    return Err(parse_error(line, item.name(), "required value is blank"));
                }
                record.set(item, None);
                continue;
            }
            let value: f64 = text
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| {
                    parse_error(line, item.name(), format!("malformed number `{text}`"))
                })?;
            record.set(item, Some(value));
            surplus_given |= item == Item::SurplusOrLoss;
        }
        if !surplus_given {
            record.surplus_or_loss = record.total_revenue - record.total_cost;
        }
        records.push(record);
    }

    if records.is_empty() {
        return Err(parse_error(2, "<row>", "ledger has no data rows"));
    }
    LedgerSeries::new(options.organization.clone(), records)
}

/// Writes a ledger in the canonical column order. Values use the shortest
/// representation that parses back to the same `f64`.
pub fn write_ledger<W: Write>(ledger: &LedgerSeries, sink: W, delimiter: u8) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .from_writer(sink);
    let to_err = |e: csv::Error| Error::Io {
        path: "<ledger>".into(),
        source: std::io::Error::other(e),
    };
    writer.write_record(HEADER).map_err(to_err)?;
    for record in ledger.records() {
        let mut row = vec![record.year.to_string(), record.currency.code().to_string()];
        row.extend(
            Item::ALL
                .iter()
                .map(|&item| record.get(item).map(|v| v.to_string()).unwrap_or_default()),
        );
        writer.write_record(&row).map_err(to_err)?;
    }
    writer.flush().map_err(Error::io("<ledger>"))?;
    Ok(())
}

/// Selects one item as a year-ordered series, optionally restricted to a period.
pub fn extract_series(
    ledger: &LedgerSeries,
    item: Item,
    period: Option<YearRange>,
) -> Result<Series> {
    let records: Vec<&FiscalRecord> = match period {
        Some(p) => ledger.in_period(p).collect(),
        None => ledger.records().iter().collect(),
    };
    if records.is_empty() {
        let p = period.unwrap_or(YearRange { start: 0, end: 0 });
        return Err(Error::EmptyRange {
            start: p.start,
            end: p.end,
        });
    }
    let missing: Vec<i32> = records
        .iter()
        .filter(|r| r.get(item).is_none())
        .map(|r| r.year)
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingData {
            item: item.name().to_string(),
            years: missing,
        });
    }
    Series::new(
        records
            .iter()
            .map(|r| (r.year, r.get(item).expect("checked above")))
            .collect(),
    )
}

/// A data-quality observation about a ledger.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Finding {
    DecompositionMismatch {
        year: i32,
        components_sum: f64,
        cost_of_personnel: f64,
        relative_error: f64,
    },
    NegativeValue {
        year: i32,
        item: Item,
        value: f64,
    },
    YearGap {
        after: i32,
        before: i32,
        missing: Vec<i32>,
    },
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::DecompositionMismatch {
                year,
                components_sum,
                cost_of_personnel,
                relative_error,
            } => write!(
                f,
                "{year}: personnel components sum to {components_sum} but cost_of_personnel is {cost_of_personnel} (relative error {relative_error:.3e})"
            ),
            Finding::NegativeValue { year, item, value } => {
                write!(f, "{year}: {item} is negative ({value})")
            }
            Finding::YearGap { after, before, missing } => {
                write!(f, "gap between {after} and {before}: missing {missing:?}")
            }
        }
    }
}

pub fn validate_ledger(ledger: &LedgerSeries) -> Vec<Finding> {
    let mut findings = Vec::new();
    for record in ledger.records() {
        let components: Option<Vec<f64>> = Item::PERSONNEL_COMPONENTS
            .iter()
            .map(|&item| record.get(item))
            .collect();
        if let Some(parts) = components {
            let sum: f64 = parts.iter().sum();
            let total = record.cost_of_personnel;
            let diff = (sum - total).abs();
            if diff > DECOMPOSITION_TOLERANCE * total.abs() {
                let relative_error = if total == 0.0 {
                    f64::INFINITY
                } else {
                    diff / total.abs()
                };
                findings.push(Finding::DecompositionMismatch {
                    year: record.year,
                    components_sum: sum,
                    cost_of_personnel: total,
                    relative_error,
                });
            }
        }
        for item in Item::ALL.into_iter().filter(|i| !i.may_be_negative()) {
            if let Some(value) = record.get(item).filter(|v| *v < 0.0) {
                findings.push(Finding::NegativeValue {
                    year: record.year,
                    item,
                    value,
                });
            }
        }
    }
    for pair in ledger.records().windows(2) {
        let (after, before) = (pair[0].year, pair[1].year);
        if before - after > 1 {
            findings.push(Finding::YearGap {
                after,
                before,
                missing: (after + 1..before).collect(),
            });
        }
    }
    findings
}
