//! Point forecasts on the original scale and ψ-weight confidence limits.

use crate::diagnostics::special::normal_quantile;
use crate::error::{Error, Result};
use crate::estimate::{ArimaParams, FittedModel, ModelOrder};
use crate::ingest::MonthlySeries;
use crate::month::Month;
use crate::transform::expand_ar_operator;

#[derive(Debug, Clone, PartialEq)]
pub struct ForecastRow {
    pub month: Month,
    pub forecast: f64,
    pub ucl: f64,
    pub lcl: f64,
}

impl ForecastRow {
    pub fn half_width(&self) -> f64 {
        self.ucl - self.forecast
    }
}

/// Forecasts with symmetric confidence limits. Lower limits are not clamped
/// at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastTable {
    pub model_name: String,
    pub level: f64,
    pub rows: Vec<ForecastRow>,
}

impl ForecastTable {
    pub fn months(&self) -> Vec<Month> {
        self.rows.iter().map(|r| r.month).collect()
    }
}

/// MA(∞) weights ψ₀..ψ_{h−1} of the full (integrated) model.
pub fn psi_weights(params: &ArimaParams, order: &ModelOrder, h: usize) -> Vec<f64> {
    let c = expand_ar_operator(&params.phi, order.d, order.ds);
    let mut psi: Vec<f64> = Vec::with_capacity(h);
    for j in 0..h {
        if j == 0 {
            psi.push(1.0);
            continue;
        }
        let ar: f64 = c
            .iter()
            .take(j)
            .enumerate()
            .map(|(i, ci)| ci * psi[j - 1 - i])
            .sum();
        let ma = params.theta.get(j - 1).copied().unwrap_or(0.0);
        psi.push(ar - ma);
    }
    psi
}

/// Runs the original-scale recursion
/// `Y_t = μ + Σc_i·Y_{t−i} + e_t − Σθ_j·e_{t−j}` forward `h` steps with
/// future innovations set to zero.
///
/// In-sample innovations come from the model's residuals aligned with the
/// end of `history`; earlier ones count as zero.
pub fn forecast_values(model: &FittedModel, history: &[f64], h: usize) -> Vec<f64> {
    let params = &model.params;
    let c = expand_ar_operator(&params.phi, model.order.d, model.order.ds);
    let n = history.len();

    let mut innovations = vec![0.0; n + h];
    let known = model.residuals.len().min(n);
    innovations[n - known..n].copy_from_slice(&model.residuals[model.residuals.len() - known..]);

    let mut path = history.to_vec();
    path.reserve(h);
    for t in n..n + h {
        let mut value = params.mu;
        for (i, ci) in c.iter().enumerate() {
            value += ci * path[t - 1 - i];
        }
        for (j, tj) in params.theta.iter().enumerate() {
            if t > j {
                value -= tj * innovations[t - 1 - j];
            }
        }
        path.push(value);
    }
    path.split_off(n)
}

/// Point forecasts for the `h` months after `series` ends.
pub fn point_forecasts(model: &FittedModel, series: &MonthlySeries, h: usize) -> Result<Vec<f64>> {
    if h == 0 {
        return Err(Error::Domain("forecast horizon must be at least 1".into()));
    }
    let depth = model.order.lag_depth() + model.order.p;
    if series.len() <= depth {
        return Err(Error::Contract(format!(
            "{} needs more than {depth} observations to forecast, series has {}",
            model.order,
            series.len()
        )));
    }
    Ok(forecast_values(model, series.values(), h))
}

/// Forecasts with limits `forecast ± z·σ·sqrt(Σ_{k<j} ψ_k²)` at `level`.
pub fn forecast_intervals(
    model: &FittedModel,
    series: &MonthlySeries,
    h: usize,
    level: f64,
) -> Result<ForecastTable> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain(format!(
            "confidence level must lie in (0, 1), got {level}"
        )));
    }
    let points = point_forecasts(model, series, h)?;
    let z = normal_quantile((1.0 + level) / 2.0)?;
    let sigma = model.params.sigma2.sqrt();
    let psi = psi_weights(&model.params, &model.order, h);

    let mut cumulative = 0.0;
    let mut month = series.end();
    let rows = points
        .iter()
        .zip(&psi)
        .map(|(forecast, weight)| {
            cumulative += weight * weight;
            month = month.succ();
            let half = z * sigma * cumulative.sqrt();
            ForecastRow {
                month,
                forecast: *forecast,
                ucl: forecast + half,
                lcl: forecast - half,
            }
        })
        .collect();
    Ok(ForecastTable {
        model_name: format!("{}-Model", series.name()),
        level,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimate::fit;
    use crate::transform::difference_with_seasonal;

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    fn order(p: usize, d: usize, q: usize) -> ModelOrder {
        ModelOrder::new(p, d, q)
    }

    #[test]
    fn psi_examples() {
        let ar = ArimaParams::new(0.0, vec![0.5], vec![], 1.0);
        assert_close(
            &psi_weights(&ar, &order(1, 0, 0), 3),
            &[1.0, 0.5, 0.25],
            1e-15,
        );

        let ma = ArimaParams::new(0.0, vec![], vec![0.4], 1.0);
        assert_close(
            &psi_weights(&ma, &order(0, 0, 1), 3),
            &[1.0, -0.4, 0.0],
            1e-15,
        );

        let arma = ArimaParams::new(0.0, vec![0.5], vec![0.2], 1.0);
        assert_close(
            &psi_weights(&arma, &order(1, 0, 1), 3),
            &[1.0, 0.3, 0.15],
            1e-15,
        );

        let walk = ArimaParams::new(0.0, vec![], vec![], 1.0);
        assert_close(&psi_weights(&walk, &order(0, 1, 0), 4), &[1.0; 4], 0.0);
    }

    /// Builds a model by hand so forecasts can be checked without fitting.
    fn manual_model(values: &[f64], order: ModelOrder, params: ArimaParams) -> FittedModel {
        let differenced = difference_with_seasonal(values, order.d, order.ds).unwrap();
        let residuals =
            crate::estimate::css_residuals(&differenced.values, &params, &order).unwrap();
        FittedModel {
            order,
            n_effective: residuals.len(),
            loss: residuals.iter().map(|e| e * e).sum(),
            residuals,
            params,
            converged: true,
            iterations: 0,
            differenced,
        }
    }

    fn series(values: &[f64]) -> MonthlySeries {
        MonthlySeries::new("Barnet", Month::new(2012, 1).unwrap(), values.to_vec()).unwrap()
    }

    #[test]
    fn arima_110_hand_evaluation() {
        let values = [5.0, 7.0, 6.0, 10.0, 12.0];
        let m = manual_model(
            &values,
            order(1, 1, 0),
            ArimaParams::new(0.0, vec![0.5], vec![], 1.0),
        );
        let f = point_forecasts(&m, &series(&values), 1).unwrap();
        assert_eq!(f, vec![13.0]);
    }

    #[test]
    fn arima_010_drift() {
        let values = [90.0, 95.0, 97.0, 100.0];
        let m = manual_model(
            &values,
            order(0, 1, 0),
            ArimaParams::new(2.0, vec![], vec![], 1.0),
        );
        let f = point_forecasts(&m, &series(&values), 3).unwrap();
        assert_eq!(f, vec![102.0, 104.0, 106.0]);
    }

    #[test]
    fn mean_model_is_flat() {
        let values = [3.0, 9.0, 4.0, 8.0];
        let m = manual_model(
            &values,
            order(0, 0, 0),
            ArimaParams::new(7.0, vec![], vec![], 1.0),
        );
        assert_eq!(
            point_forecasts(&m, &series(&values), 4).unwrap(),
            vec![7.0; 4]
        );
    }

    #[test]
    fn arima_020_uses_full_second_difference() {
        let values = [1.0, 2.0, 4.0, 7.0, 10.0, 13.0];
        let m = manual_model(
            &values,
            order(0, 2, 0),
            ArimaParams::new(0.5, vec![], vec![], 1.0),
        );
        let f = point_forecasts(&m, &series(&values), 2).unwrap();
        // 0.5 + 2·13 − 10, then 0.5 + 2·16.5 − 13
        assert_eq!(f, vec![16.5, 20.5]);
    }

    #[test]
    fn ma_forecast_uses_last_residual() {
        let values = [0.0, 1.0, 0.0];
        let m = manual_model(
            &values,
            order(0, 0, 1),
            ArimaParams::new(0.0, vec![], vec![0.4], 1.0),
        );
        // e₃ = 0.4, so Ŷ₄ = −0.4·0.4 and later steps revert to μ.
        let f = point_forecasts(&m, &series(&values), 2).unwrap();
        assert_close(&f, &[-0.16, 0.0], 1e-15);
    }

    #[test]
    fn intervals_step_one_is_z_sigma() {
        let values: Vec<f64> = (0..40).map(|i| 100.0 + ((i * 13) % 7) as f64).collect();
        let m = fit(&series(&values), order(1, 0, 0)).unwrap();
        let table = forecast_intervals(&m, &series(&values), 24, 0.95).unwrap();
        let half = table.rows[0].half_width();
        assert!((half - 1.959963984540054 * m.params.sigma2.sqrt()).abs() < 1e-9 * half);
        assert_eq!(table.rows.len(), 24);
        assert_eq!(table.rows[0].month, Month::new(2015, 5).unwrap());
        assert_eq!(table.model_name, "Barnet-Model");
    }

    #[test]
    fn white_noise_widths_are_constant() {
        let values: Vec<f64> = (0..30).map(|i| ((i * 7) % 5) as f64).collect();
        let m = fit(&series(&values), order(0, 0, 0)).unwrap();
        let table = forecast_intervals(&m, &series(&values), 6, 0.9).unwrap();
        let first = table.rows[0].half_width();
        for row in &table.rows {
            assert!((row.half_width() - first).abs() < 1e-12);
        }
    }

    #[test]
    fn level_and_horizon_domain() {
        let values: Vec<f64> = (0..30).map(|i| ((i * 7) % 5) as f64).collect();
        let m = fit(&series(&values), order(0, 0, 0)).unwrap();
        for level in [0.0, 1.0, -0.5, 1.5, f64::NAN] {
            assert!(matches!(
                forecast_intervals(&m, &series(&values), 3, level).unwrap_err(),
                Error::Domain(_)
            ));
        }
        assert!(point_forecasts(&m, &series(&values), 0).is_err());
    }
}
