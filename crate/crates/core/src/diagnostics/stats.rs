use crate::diagnostics::special::chi_square_sf;
use crate::error::{Error, Result};
use crate::estimate::{FittedModel, SesFit};
use crate::ingest::MonthlySeries;
use crate::transform::DifferencedSeries;

pub const DEFAULT_LB_LAGS: usize = 18;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LjungBoxResult {
    pub q_stat: f64,
    pub df: usize,
    /// Upper-tail chi-square probability of `q_stat`.
    pub sig: f64,
    pub lags: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitStatistics {
    pub r_squared: f64,
    pub stationary_r_squared: f64,
    pub ljung_box: LjungBoxResult,
    pub rmse: f64,
    pub mape: f64,
}

/// Goodness of fit of one-step fitted values, used to put a baseline next to
/// an ARIMA fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy {
    pub r_squared: f64,
    pub rmse: f64,
    pub mape: f64,
}

fn centered_sum_squares(x: &[f64]) -> f64 {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter().map(|v| (v - mean).powi(2)).sum()
}

/// Sample autocorrelations `ρ̂₁..ρ̂_max_lag`.
pub fn acf(x: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    if x.len() <= max_lag {
        return Err(Error::InsufficientData(format!(
            "autocorrelation to lag {max_lag} needs more than {max_lag} values, have {}",
            x.len()
        )));
    }
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let centered: Vec<f64> = x.iter().map(|v| v - mean).collect();
    let denom: f64 = centered.iter().map(|v| v * v).sum();
    if !(denom > 0.0) {
        return Err(Error::Degenerate("series has zero variance".into()));
    }
    Ok((1..=max_lag)
        .map(|k| {
            centered
                .iter()
                .skip(k)
                .zip(&centered)
                .map(|(a, b)| a * b)
                .sum::<f64>()
                / denom
        })
        .collect())
}

/// `Q = n(n+2)·Σ ρ̂_k² / (n−k)` for autocorrelations `rho` (lags 1, 2, …) of
/// a series of length `n`.
pub fn ljung_box_statistic(rho: &[f64], n: usize) -> f64 {
    let nf = n as f64;
    nf * (nf + 2.0)
        * rho
            .iter()
            .enumerate()
            .map(|(i, r)| r * r / (nf - (i + 1) as f64))
            .sum::<f64>()
}

/// Ljung-Box portmanteau test with `lags − fitted_param_count` degrees of
/// freedom. Residuals with zero variance give `Q = 0`.
pub fn ljung_box(
    residuals: &[f64],
    lags: usize,
    fitted_param_count: usize,
) -> Result<LjungBoxResult> {
    if lags <= fitted_param_count {
        return Err(Error::Domain(format!(
            "Ljung-Box with {lags} lags and {fitted_param_count} fitted parameters leaves no degrees of freedom"
        )));
    }
    let df = lags - fitted_param_count;
    let n = residuals.len();
    if n <= lags {
        return Err(Error::InsufficientData(format!(
            "Ljung-Box with {lags} lags needs more than {lags} residuals, have {n}"
        )));
    }
    let rho = match acf(residuals, lags) {
        Ok(rho) => rho,
        Err(Error::Degenerate(_)) => vec![0.0; lags],
        Err(e) => return Err(e),
    };
    let q_stat = ljung_box_statistic(&rho, n);
    Ok(LjungBoxResult {
        q_stat,
        df,
        sig: chi_square_sf(q_stat, df)?,
        lags,
    })
}

/// `1 − Σ(Y−Ŷ)² / Σ(Y−Ȳ)²` over aligned slices.
pub fn r_squared(actual: &[f64], fitted: &[f64]) -> Result<f64> {
    if actual.len() != fitted.len() || actual.is_empty() {
        return Err(Error::Contract(format!(
            "R² needs equal non-empty lengths, got {} and {}",
            actual.len(),
            fitted.len()
        )));
    }
    let total = centered_sum_squares(actual);
    if !(total > 0.0) {
        return Err(Error::Degenerate("actual values have zero variance".into()));
    }
    let sse: f64 = actual
        .iter()
        .zip(fitted)
        .map(|(y, f)| (y - f).powi(2))
        .sum();
    Ok(1.0 - sse / total)
}

/// R² against the mean model on the differenced scale, over the residual
/// window.
pub fn stationary_r_squared(diffed: &DifferencedSeries, residuals: &[f64]) -> Result<f64> {
    let n = residuals.len();
    if n == 0 || n > diffed.values.len() {
        return Err(Error::Contract(format!(
            "{n} residuals cannot align with {} differenced values",
            diffed.values.len()
        )));
    }
    let window = &diffed.values[diffed.values.len() - n..];
    let total = centered_sum_squares(window);
    if !(total > 0.0) {
        return Err(Error::Degenerate(
            "differenced series has zero variance".into(),
        ));
    }
    let sse: f64 = residuals.iter().map(|e| e * e).sum();
    Ok(1.0 - sse / total)
}

/// Mean absolute percentage error over the non-zero actuals, in percent.
/// `NaN` when every actual is zero.
pub fn mape(actual: &[f64], fitted: &[f64]) -> f64 {
    let (sum, count) = actual
        .iter()
        .zip(fitted)
        .filter(|(y, _)| **y != 0.0)
        .fold((0.0, 0usize), |(s, c), (y, f)| {
            (s + ((y - f) / y).abs(), c + 1)
        });
    if count == 0 {
        f64::NAN
    } else {
        100.0 * sum / count as f64
    }
}

pub fn rmse(actual: &[f64], fitted: &[f64]) -> f64 {
    let sse: f64 = actual
        .iter()
        .zip(fitted)
        .map(|(y, f)| (y - f).powi(2))
        .sum();
    (sse / actual.len() as f64).sqrt()
}

pub fn accuracy(actual: &[f64], fitted: &[f64]) -> Result<Accuracy> {
    Ok(Accuracy {
        r_squared: r_squared(actual, fitted)?,
        rmse: rmse(actual, fitted),
        mape: mape(actual, fitted),
    })
}

/// Model statistics of a fit, with the Ljung-Box test over `lags` lags and
/// `p + q` fitted parameters.
pub fn fit_statistics(
    model: &FittedModel,
    series: &MonthlySeries,
    lags: usize,
) -> Result<FitStatistics> {
    let values = series.values();
    if values.len() != model.differenced.values.len() + model.order.lag_depth() {
        return Err(Error::Contract(format!(
            "series {:?} is not the one the model was fit on",
            series.name()
        )));
    }
    let fitted = model.fitted_original(values);
    let actual = &values[values.len() - fitted.len()..];
    Ok(FitStatistics {
        r_squared: r_squared(actual, &fitted)?,
        stationary_r_squared: stationary_r_squared(&model.differenced, &model.residuals)?,
        ljung_box: ljung_box(&model.residuals, lags, model.order.arma_param_count())?,
        rmse: rmse(actual, &fitted),
        mape: mape(actual, &fitted),
    })
}

/// Accuracy of the exponential smoothing baseline, skipping the first fitted
/// value (which is the first observation itself).
pub fn ses_accuracy(series: &MonthlySeries, ses: &SesFit) -> Result<Accuracy> {
    let values = series.values();
    if ses.fitted.len() != values.len() || values.len() < 2 {
        return Err(Error::Contract(
            "smoothing fit does not match series".into(),
        ));
    }
    accuracy(&values[1..], &ses.fitted[1..])
}
