//! The `boxcast` command line: ingest a borough CSV, fit or select ARIMA
//! models, and emit forecasts, statistics, backtests, reports and plots.

pub mod error;
pub mod plot;
pub mod render;
pub mod synthetic;

use std::io::Write;
use std::path::{Path, PathBuf};

use boxcast_core::diagnostics::{
    backtest, fit_statistics, select_order, ses_accuracy, BacktestReport, FitStatistics, Selection,
    SelectionGrid, DEFAULT_LB_LAGS,
};
use boxcast_core::ingest::{parse_any_csv, select_boroughs};
use boxcast_core::{
    fit, fit_ses, forecast_intervals, FittedModel, ForecastTable, ModelOrder, Month, MonthlySeries,
};
use clap::{Parser, ValueEnum};
use rayon::prelude::*;

pub use error::CliError;
pub use render::{render_table, OutputFormat};

/// Four boroughs × 60 months of synthetic counts, used when `--input` is not
/// given.
pub const BUNDLED_DATASET: &str = include_str!("../data/synthetic_london.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Fit a model per borough and print model statistics.
    Fit,
    /// Rank candidate orders by BIC.
    Select,
    /// Forecast with upper and lower confidence limits.
    Forecast,
    /// Fit on an initial window and score forecasts of the rest.
    Backtest,
    /// Model statistics, exponential smoothing comparison and forecasts.
    Report,
    /// Write one SVG chart per borough.
    Plot,
}

fn parse_order(s: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [p, d, q] = parts.as_slice() else {
        return Err(format!("expected p,d,q, got {s:?}"));
    };
    let num = |x: &str| {
        x.parse::<usize>()
            .map_err(|_| format!("{x:?} is not a non-negative integer"))
    };
    let order = ModelOrder::new(num(p)?, num(d)?, num(q)?);
    order.validate().map_err(|e| e.to_string())?;
    Ok((order.p, order.d, order.q))
}

fn parse_level(s: &str) -> Result<f64, String> {
    let level: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if level > 0.0 && level < 1.0 {
        Ok(level)
    } else {
        Err(format!("confidence level must lie in (0, 1), got {s}"))
    }
}

fn parse_month(s: &str) -> Result<Month, String> {
    Month::parse_label(s).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "boxcast",
    version,
    about = "ARIMA forecasting of monthly borough crime counts"
)]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,

    /// Wide (`month,<borough>…`) or long (`month,borough,count`) CSV; defaults
    /// to the bundled synthetic dataset.
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Borough to process (repeatable); `all` or omitted means every column.
    #[arg(long = "borough", value_name = "NAME")]
    pub boroughs: Vec<String>,

    /// Fixed model order; without it the order is chosen by BIC.
    #[arg(long, value_parser = parse_order, value_name = "p,d,q", conflicts_with = "select")]
    pub order: Option<(usize, usize, usize)>,

    /// Choose the order by BIC over the default grid.
    #[arg(long)]
    pub select: bool,

    /// Lag-12 seasonal differences (0 or 1).
    #[arg(long = "seasonal-d", value_parser = clap::value_parser!(u8).range(0..=1))]
    pub seasonal_d: Option<u8>,

    /// Forecast horizon in months.
    #[arg(long, default_value_t = 24, value_parser = clap::value_parser!(u32).range(1..))]
    pub horizon: u32,

    /// Confidence level of the forecast limits.
    #[arg(long, default_value_t = 0.95, value_parser = parse_level)]
    pub level: f64,

    /// Last training month for `backtest` (YYYY-MM); defaults to 12 months
    /// before the series ends.
    #[arg(long = "train-end", value_parser = parse_month, value_name = "YYYY-MM")]
    pub train_end: Option<Month>,

    /// Ljung-Box lag count.
    #[arg(long, default_value_t = DEFAULT_LB_LAGS as u32, value_parser = clap::value_parser!(u32).range(1..))]
    pub lags: u32,

    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Output file (directory for `plot`); defaults to stdout (`.` for `plot`).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Validated settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input_path: Option<PathBuf>,
    /// Empty means every borough in the input.
    pub boroughs: Vec<String>,
    pub order: Option<ModelOrder>,
    pub seasonal_d: Option<usize>,
    pub horizon: usize,
    pub level: f64,
    pub train_end: Option<Month>,
    pub lags: usize,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

impl TryFrom<Args> for RunConfig {
    type Error = CliError;

    fn try_from(args: Args) -> Result<Self, CliError> {
        if args.train_end.is_some() && args.command != Command::Backtest {
            return Err(CliError::Usage(
                "--train-end only applies to backtest".into(),
            ));
        }
        let seasonal_d = args.seasonal_d.map(usize::from);
        let order = args
            .order
            .map(|(p, d, q)| ModelOrder::seasonal(p, d, q, seasonal_d.unwrap_or(0)));
        let boroughs = if args.boroughs.iter().any(|b| b.eq_ignore_ascii_case("all")) {
            Vec::new()
        } else {
            args.boroughs
        };
        Ok(RunConfig {
            command: args.command,
            input_path: args.input,
            boroughs,
            order,
            seasonal_d,
            horizon: args.horizon as usize,
            level: args.level,
            train_end: args.train_end,
            lags: args.lags as usize,
            output_format: args.format,
            output_path: args.out,
        })
    }
}

impl RunConfig {
    fn load_series(&self) -> Result<Vec<MonthlySeries>, CliError> {
        let bytes = match &self.input_path {
            Some(path) => std::fs::read(path)
                .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?,
            None => BUNDLED_DATASET.as_bytes().to_vec(),
        };
        let raw = parse_any_csv(&bytes)?;
        let labels = if self.boroughs.is_empty() {
            raw.header.clone()
        } else {
            self.boroughs.clone()
        };
        Ok(select_boroughs(&raw, &labels)?)
    }

    fn grid(&self) -> SelectionGrid {
        let mut grid = SelectionGrid::default();
        if let Some(ds) = self.seasonal_d {
            grid.ds_options = vec![ds];
        }
        grid
    }

    /// The fixed order, or the BIC choice on `series`.
    fn choose_order(&self, series: &MonthlySeries) -> Result<ModelOrder, CliError> {
        match self.order {
            Some(order) => Ok(order),
            None => Ok(select_order(series, &self.grid())?.best),
        }
    }
}

fn model_name(series: &MonthlySeries) -> String {
    format!("{}-Model", series.name())
}

struct Fitted {
    series: MonthlySeries,
    model: FittedModel,
    stats: FitStatistics,
}

fn fit_all(config: &RunConfig, all: &[MonthlySeries]) -> Result<Vec<Fitted>, CliError> {
    all.par_iter()
        .map(|series| {
            let order = config.choose_order(series)?;
            let model = fit(series, order)?;
            let stats = fit_statistics(&model, series, config.lags)?;
            Ok(Fitted {
                series: series.clone(),
                model,
                stats,
            })
        })
        .collect()
}

fn join_coefficients(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| render::fmt_fixed(*v, 4))
        .collect::<Vec<_>>()
        .join(" ")
}

fn statistics_table(fits: &[Fitted], lags: usize) -> render::TextTable {
    let mut table = render::TextTable::new([
        "Model".to_string(),
        "Order".into(),
        "Stationary R-squared".into(),
        "R-squared".into(),
        "RMSE".into(),
        "MAPE".into(),
        format!("Ljung-Box Q({lags}) Statistics"),
        "DF".into(),
        "Sig.".into(),
        "mu".into(),
        "phi".into(),
        "theta".into(),
        "sigma2".into(),
        "Converged".into(),
    ]);
    for f in fits {
        let p = &f.model.params;
        table.push(vec![
            model_name(&f.series),
            f.model.order.to_string(),
            render::fmt_stat(f.stats.stationary_r_squared),
            render::fmt_stat(f.stats.r_squared),
            render::fmt_stat(f.stats.rmse),
            render::fmt_stat(f.stats.mape),
            render::fmt_stat(f.stats.ljung_box.q_stat),
            f.stats.ljung_box.df.to_string(),
            render::fmt_stat(f.stats.ljung_box.sig),
            render::fmt_fixed(p.mu, 4),
            join_coefficients(&p.phi),
            join_coefficients(&p.theta),
            render::fmt_stat(p.sigma2),
            f.model.converged.to_string(),
        ]);
    }
    table
}

fn ses_comparison_table(fits: &[Fitted]) -> Result<render::TextTable, CliError> {
    let mut table = render::TextTable::new([
        "Model",
        "ARIMA order",
        "ARIMA R-squared",
        "SES R-squared",
        "ARIMA RMSE",
        "SES RMSE",
        "ARIMA MAPE",
        "SES MAPE",
        "SES alpha",
    ]);
    for f in fits {
        let ses = fit_ses(&f.series)?;
        let acc = ses_accuracy(&f.series, &ses)?;
        table.push(vec![
            model_name(&f.series),
            f.model.order.to_string(),
            render::fmt_stat(f.stats.r_squared),
            render::fmt_stat(acc.r_squared),
            render::fmt_stat(f.stats.rmse),
            render::fmt_stat(acc.rmse),
            render::fmt_stat(f.stats.mape),
            render::fmt_stat(acc.mape),
            render::fmt_fixed(ses.alpha, 2),
        ]);
    }
    Ok(table)
}

fn forecasts(config: &RunConfig, fits: &[Fitted]) -> Result<Vec<ForecastTable>, CliError> {
    fits.iter()
        .map(|f| {
            Ok(forecast_intervals(
                &f.model,
                &f.series,
                config.horizon,
                config.level,
            )?)
        })
        .collect()
}

fn selection_table(selections: &[(MonthlySeries, Selection)]) -> render::TextTable {
    let mut table = render::TextTable::new(["Model", "Rank", "Order", "BIC", "R-squared"]);
    for (series, sel) in selections {
        for (rank, r) in sel.ranked.iter().enumerate() {
            table.push(vec![
                model_name(series),
                (rank + 1).to_string(),
                r.order.to_string(),
                render::fmt_stat(r.bic),
                r.r_squared.map(render::fmt_stat).unwrap_or_default(),
            ]);
        }
    }
    table
}

fn backtest_table(reports: &[(MonthlySeries, BacktestReport)]) -> render::TextTable {
    let mut table = render::TextTable::new([
        "Model",
        "Order",
        "Train end",
        "Holdout months",
        "Coverage %",
        "MAPE %",
        "Within 20% %",
    ]);
    for (series, r) in reports {
        table.push(vec![
            model_name(series),
            r.order.to_string(),
            r.train_end.iso(),
            r.actuals.len().to_string(),
            render::fmt_fixed(r.coverage_pct, 1),
            render::fmt_stat(r.mape),
            render::fmt_fixed(r.within_20pct, 1),
        ]);
    }
    table
}

fn section(title: &str, body: &str, format: OutputFormat) -> String {
    match format {
        OutputFormat::Markdown => format!("## {title}\n\n{body}"),
        OutputFormat::Csv => format!("# {title}\n{body}"),
    }
}

fn slug(name: &str) -> String {
    let mut out = String::new();
    for c in name.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
        } else if !out.ends_with('_') && !out.is_empty() {
            out.push('_');
        }
    }
    out.trim_end_matches('_').to_string()
}

fn emit(config: &RunConfig, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &config.output_path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write output: {e}"))),
    }
}

/// Executes one command, writing its output to `stdout` or `--out`.
pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let all = config.load_series()?;
    let format = config.output_format;
    match config.command {
        Command::Fit => {
            let fits = fit_all(config, &all)?;
            emit(
                config,
                &statistics_table(&fits, config.lags).render(format),
                stdout,
            )
        }
        Command::Select => {
            let selections = all
                .par_iter()
                .map(|s| Ok((s.clone(), select_order(s, &config.grid())?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            emit(config, &selection_table(&selections).render(format), stdout)
        }
        Command::Forecast => {
            let fits = fit_all(config, &all)?;
            emit(
                config,
                &render_table(&forecasts(config, &fits)?, format)?,
                stdout,
            )
        }
        Command::Backtest => {
            let reports = all
                .par_iter()
                .map(|s| {
                    let train_end = config.train_end.unwrap_or_else(|| s.end().offset(-12));
                    let order = match config.order {
                        Some(order) => order,
                        None => {
                            let train = s.truncate_to(train_end).ok_or_else(|| {
                                boxcast_core::Error::InsufficientData(format!(
                                    "{} has no data up to {train_end}",
                                    s.name()
                                ))
                            })?;
                            config.choose_order(&train)?
                        }
                    };
                    Ok((s.clone(), backtest(s, train_end, order, config.level)?))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            emit(config, &backtest_table(&reports).render(format), stdout)
        }
        Command::Report => {
            let fits = fit_all(config, &all)?;
            let parts = [
                section(
                    "Model statistics",
                    &statistics_table(&fits, config.lags).render(format),
                    format,
                ),
                section(
                    "Exponential smoothing comparison",
                    &ses_comparison_table(&fits)?.render(format),
                    format,
                ),
                section(
                    &format!(
                        "Forecasts ({}% limits)",
                        render::fmt_fixed(config.level * 100.0, 1)
                    ),
                    &render_table(&forecasts(config, &fits)?, format)?,
                    format,
                ),
            ];
            emit(config, &parts.join("\n"), stdout)
        }
        Command::Plot => {
            let fits = fit_all(config, &all)?;
            let tables = forecasts(config, &fits)?;
            let dir = config.output_path.as_deref().unwrap_or(Path::new("."));
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
            let mut listing = String::new();
            for (f, table) in fits.iter().zip(&tables) {
                let path = dir.join(format!("{}.svg", slug(f.series.name())));
                plot::write_plot(&f.series, Some(table), &path)?;
                listing.push_str(&format!("{}\n", path.display()));
            }
            stdout
                .write_all(listing.as_bytes())
                .map_err(|e| CliError::Io(format!("cannot write output: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<Args, clap::Error> {
        Args::try_parse_from(std::iter::once("boxcast").chain(args.iter().copied()))
    }

    #[test]
    fn defaults() {
        let cfg = RunConfig::try_from(parse(&["forecast"]).unwrap()).unwrap();
        assert_eq!(cfg.horizon, 24);
        assert_eq!(cfg.level, 0.95);
        assert_eq!(cfg.output_format, OutputFormat::Csv);
        assert!(cfg.order.is_none() && cfg.boroughs.is_empty());
    }

    #[test]
    fn order_and_seasonal_flags() {
        let args = parse(&["fit", "--order", "1,1,0", "--seasonal-d", "1"]).unwrap();
        let cfg = RunConfig::try_from(args).unwrap();
        assert_eq!(cfg.order, Some(ModelOrder::seasonal(1, 1, 0, 1)));
    }

    #[test]
    fn usage_errors() {
        for bad in [
            &["forecast", "--horizon", "0"][..],
            &["forecast", "--level", "1.2"],
            &["forecast", "--order", "1,1"],
            &["forecast", "--order", "9,0,0"],
            &["forecast", "--order", "1,0,0", "--select"],
            &["forecast", "--seasonal-d", "2"],
            &["backtest", "--train-end", "2015-13"],
            &["explode"],
        ] {
            assert!(parse(bad).is_err(), "{bad:?}");
        }
        let err =
            RunConfig::try_from(parse(&["fit", "--train-end", "2015-12"]).unwrap()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn all_means_every_borough() {
        let cfg = RunConfig::try_from(parse(&["fit", "--borough", "all"]).unwrap()).unwrap();
        assert!(cfg.boroughs.is_empty());
    }

    #[test]
    fn slugs() {
        assert_eq!(slug("Barking and Dagenham"), "barking_and_dagenham");
        assert_eq!(slug("  Brent!"), "brent");
    }
}
