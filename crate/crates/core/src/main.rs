use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use labmetab::metabolism::{arithmetic_growth, crossover_years, metabolism_index, trend_fit};
use labmetab::report::{
    analysis_window, crossings_text, growth_text, metabolism_text, render, render_allometric_table,
    render_report, render_trend_table, validation_text, GrowthRow, TrendRow, HEADLINE_ITEMS,
};
use labmetab::{
    allometric_fit, build_report, emit_all_figures, emit_figure_data, extract_series,
    validate_ledger, FigureId, Item, MetabolismPoint, OutputFormat, ReportConfig, Series,
    YearRange,
};

/// Economic metabolism analysis of research-organization income statements.
#[derive(Parser)]
#[command(name = "labmetab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Every analysis plus cross-checks; writes figure files when --out-dir is set
    Report(Common),
    /// Linear time trends
    Trend {
        #[command(flatten)]
        common: Common,
        /// Item to regress on time (repeatable)
        #[arg(long = "item")]
        items: Vec<Item>,
    },
    /// Cost share of revenue per year
    Metabolism(Common),
    /// Arithmetic growth between the first and last year of the window
    Growth {
        #[command(flatten)]
        common: Common,
        #[arg(long = "item")]
        items: Vec<Item>,
    },
    /// Log-log allometric fit of numerator on denominator
    Allometric(Common),
    /// Years where the numerator share crosses another item's share
    Crossover {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "other_costs")]
        against: Item,
    },
    /// Write figure-data CSV files
    Figures {
        #[command(flatten)]
        common: Common,
        /// Figure id (repeatable); all figures when omitted
        #[arg(long = "figure")]
        figures: Vec<FigureId>,
    },
    /// Data-quality findings
    Validate(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = YearRange::DEFAULT.start)]
    from: i32,
    #[arg(long, default_value_t = YearRange::DEFAULT.end)]
    to: i32,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, default_value = "cost_of_personnel")]
    numerator: Item,
    #[arg(long, default_value = "total_revenue")]
    denominator: Item,
    /// Field delimiter: a single character, or `tab`
    #[arg(long, default_value = ",")]
    delimiter: String,
}

impl Common {
    fn config(&self) -> anyhow::Result<ReportConfig> {
        let delimiter = match self.delimiter.as_str() {
            "tab" | "\\t" => b'\t',
            d if d.len() == 1 => d.as_bytes()[0],
            other => bail!("delimiter must be a single ASCII character, got `{other}`"),
        };
        let config = ReportConfig {
            input_path: self.input.clone(),
            period: YearRange {
                start: self.from,
                end: self.to,
            },
            numerator: self.numerator,
            denominator: self.denominator,
            alpha: self.alpha,
            output_format: self.format,
            output_dir: self.out_dir.clone(),
            delimiter,
        };
        config.validate()?;
        Ok(config)
    }
}

fn items_or_default(items: &[Item]) -> Vec<Item> {
    if items.is_empty() {
        HEADLINE_ITEMS.to_vec()
    } else {
        items.to_vec()
    }
}

fn share_series(points: &[MetabolismPoint]) -> labmetab::Result<Series> {
    Series::new(points.iter().map(|p| (p.year, p.m_percent)).collect())
}

fn run(cli: Cli) -> anyhow::Result<String> {
    let output = match cli.command {
        Command::Report(common) => {
            let config = common.config()?;
            let ledger = config.load_ledger()?;
            let report = build_report(&ledger, &config)?;
            let text = render_report(&report, config.output_format)?;
            if let Some(dir) = &config.output_dir {
                emit_all_figures(&report, dir)?;
            }
            text
        }
        Command::Trend { common, items } => {
            let config = common.config()?;
            let ledger = config.load_ledger()?;
            let period = analysis_window(&ledger, config.period)?;
            let rows = items_or_default(&items)
                .into_iter()
                .map(|item| {
                    trend_fit(&ledger, item, period)
                        .map(|fit| TrendRow { item, fit })
                        .with_context(|| format!("trend of {item}"))
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            render_trend_table(&rows, config.output_format)?
        }
        Command::Metabolism(common) => {
            let config = common.config()?;
            let ledger = config.load_ledger()?;
            let period = analysis_window(&ledger, config.period)?;
            let points = metabolism_index(&ledger, config.numerator, config.denominator, period)?;
            let series = labmetab::report::MetabolismSeries {
                numerator: config.numerator,
                denominator: config.denominator,
                companion: None,
                points: points
                    .iter()
                    .map(|p| labmetab::report::MetabolismRow {
                        year: p.year,
                        m_percent: p.m_percent,
                        m_companion_percent: None,
                    })
                    .collect(),
            };
            render(&series, config.output_format, metabolism_text)?
        }
        Command::Growth { common, items } => {
            let config = common.config()?;
            let ledger = config.load_ledger()?;
            let period = analysis_window(&ledger, config.period)?;
            let rows = items_or_default(&items)
                .into_iter()
                .map(|item| {
                    let series = extract_series(&ledger, item, Some(period))?;
                    let rate = arithmetic_growth(&series, period.start, period.end)?;
                    Ok(GrowthRow { item, rate })
                })
                .collect::<labmetab::Result<Vec<_>>>()?;
            render(&rows, config.output_format, |rows| growth_text(rows))?
        }
        Command::Allometric(common) => {
            let config = common.config()?;
            let ledger = config.load_ledger()?;
            let period = analysis_window(&ledger, config.period)?;
            let fit = allometric_fit(
                &ledger,
                config.numerator,
                config.denominator,
                period,
                config.alpha,
            )?;
            render_allometric_table(&fit, config.output_format)?
        }
        Command::Crossover { common, against } => {
            let config = common.config()?;
            let ledger = config.load_ledger()?;
            let period = analysis_window(&ledger, config.period)?;
            let a = metabolism_index(&ledger, config.numerator, config.denominator, period)?;
            let b = metabolism_index(&ledger, against, config.denominator, period)?;
            let crossings = crossover_years(&share_series(&a)?, &share_series(&b)?)?;
            render(&crossings, config.output_format, |c| crossings_text(c))?
        }
        Command::Figures { common, figures } => {
            let config = common.config()?;
            let dir = config
                .output_dir
                .clone()
                .context("figures requires --out-dir")?;
            let ledger = config.load_ledger()?;
            let report = build_report(&ledger, &config)?;
            let paths = if figures.is_empty() {
                emit_all_figures(&report, &dir)?
            } else {
                figures
                    .iter()
                    .map(|&f| emit_figure_data(&report, f, &dir))
                    .collect::<labmetab::Result<Vec<_>>>()?
            };
            paths.iter().map(|p| format!("{}\n", p.display())).collect()
        }
        Command::Validate(common) => {
            let config = common.config()?;
            let ledger = config.load_ledger()?;
            let findings = validate_ledger(&ledger);
            render(&findings, config.output_format, |f| validation_text(f))?
        }
    };
    Ok(output)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let message = format!("{e:#}").replace('\n', " ");
            eprintln!("labmetab: {message}");
            ExitCode::FAILURE
        }
    }
}
