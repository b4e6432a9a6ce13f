use crate::error::{Error, Result};
use crate::estimate::{fit, ModelOrder};
use crate::forecast::{forecast_intervals, ForecastTable};
use crate::ingest::MonthlySeries;
use crate::month::Month;

pub const MIN_TRAINING_MONTHS: usize = 24;

/// Holdout scores of a model fit on an initial window.
///
/// Accuracy is reported two ways: the share of holdout months whose actual
/// lies inside the confidence limits, and the share forecast within 20% of
/// the actual.
#[derive(Debug, Clone, PartialEq)]
pub struct BacktestReport {
    pub train_end: Month,
    pub order: ModelOrder,
    pub coverage_pct: f64,
    pub mape: f64,
    pub within_20pct: f64,
    pub actuals: Vec<f64>,
    pub table: ForecastTable,
}

pub fn backtest(
    series: &MonthlySeries,
    train_end: Month,
    order: ModelOrder,
    level: f64,
) -> Result<BacktestReport> {
    let train = series
        .truncate_to(train_end)
        .filter(|t| t.len() >= MIN_TRAINING_MONTHS)
        .ok_or_else(|| {
            Error::InsufficientData(format!(
                "training window {}..{} must hold at least {MIN_TRAINING_MONTHS} months",
                series.start(),
                train_end
            ))
        })?;
    let actuals = series.values()[train.len()..].to_vec();
    if actuals.is_empty() {
        return Err(Error::InsufficientData(format!(
            "no holdout months after {train_end} (series ends {})",
            series.end()
        )));
    }

    let model = fit(&train, order)?;
    let table = forecast_intervals(&model, &train, actuals.len(), level)?;
    let h = actuals.len() as f64;

    let covered = table
        .rows
        .iter()
        .zip(&actuals)
        .filter(|(row, y)| row.lcl <= **y && **y <= row.ucl)
        .count();
    let within = table
        .rows
        .iter()
        .zip(&actuals)
        .filter(|(row, y)| {
            if **y == 0.0 {
                row.forecast == 0.0
            } else {
                ((**y - row.forecast) / **y).abs() <= 0.20
            }
        })
        .count();
    let forecasts: Vec<f64> = table.rows.iter().map(|r| r.forecast).collect();

    Ok(BacktestReport {
        train_end: train.end(),
        order,
        coverage_pct: 100.0 * covered as f64 / h,
        mape: crate::diagnostics::stats::mape(&actuals, &forecasts),
        within_20pct: 100.0 * within as f64 / h,
        actuals,
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn month(y: i32, m: u32) -> Month {
        Month::new(y, m).unwrap()
    }

    #[test]
    fn sixty_months_trained_to_48_leaves_12() {
        let values: Vec<f64> = (0..60).map(|i| 100.0 + ((i * 17) % 11) as f64).collect();
        let s = MonthlySeries::new("A", month(2012, 1), values).unwrap();
        let report = backtest(&s, month(2015, 12), ModelOrder::new(1, 0, 0), 0.95).unwrap();
        assert_eq!(report.table.rows.len(), 12);
        assert_eq!(report.table.rows[0].month, month(2016, 1));
        assert!((0.0..=100.0).contains(&report.coverage_pct));
        assert!((0.0..=100.0).contains(&report.within_20pct));
    }

    #[test]
    fn perfect_holdout() {
        let values = vec![50.0; 36];
        let s = MonthlySeries::new("A", month(2012, 1), values).unwrap();
        let report = backtest(&s, month(2013, 12), ModelOrder::new(0, 0, 0), 0.95).unwrap();
        assert_eq!(report.coverage_pct, 100.0);
        assert_eq!(report.mape, 0.0);
        assert_eq!(report.within_20pct, 100.0);
    }

    #[test]
    fn window_errors() {
        let s = MonthlySeries::new("A", month(2012, 1), vec![1.0; 36]).unwrap();
        assert!(matches!(
            backtest(&s, month(2013, 6), ModelOrder::new(0, 0, 0), 0.95).unwrap_err(),
            Error::InsufficientData(_)
        ));
        assert!(matches!(
            backtest(&s, month(2014, 12), ModelOrder::new(0, 0, 0), 0.95).unwrap_err(),
            Error::InsufficientData(_)
        ));
        assert!(matches!(
            backtest(&s, month(2010, 12), ModelOrder::new(0, 0, 0), 0.95).unwrap_err(),
            Error::InsufficientData(_)
        ));
    }
}
