//! Grid search over model orders ranked by BIC.

use rayon::prelude::*;

use crate::diagnostics::stats::r_squared;
use crate::error::{Error, Result};
use crate::estimate::{fit_values, FittedModel, ModelOrder, SIGMA2_FLOOR};
use crate::ingest::MonthlySeries;

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionGrid {
    pub p_max: usize,
    pub d_max: usize,
    pub q_max: usize,
    pub ds_options: Vec<usize>,
}

impl Default for SelectionGrid {
    fn default() -> Self {
        SelectionGrid {
            p_max: 3,
            d_max: 2,
            q_max: 3,
            ds_options: vec![0, 1],
        }
    }
}

impl SelectionGrid {
    pub fn candidates(&self) -> Vec<ModelOrder> {
        let mut out = Vec::new();
        for &ds in &self.ds_options {
            for d in 0..=self.d_max {
                for p in 0..=self.p_max {
                    for q in 0..=self.q_max {
                        out.push(ModelOrder::seasonal(p, d, q, ds));
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedModel {
    pub order: ModelOrder,
    pub bic: f64,
    /// Original-scale R²; `None` when the fitted window has no variance.
    pub r_squared: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub best: ModelOrder,
    pub ranked: Vec<RankedModel>,
    pub skipped: Vec<(ModelOrder, String)>,
}

/// `n·ln(σ̂²) + k·ln(n)` with `k = p + q + 1` and `n` the model's own
/// residual count.
pub fn bic(model: &FittedModel) -> f64 {
    let n = model.n_effective as f64;
    let k = (model.order.arma_param_count() + 1) as f64;
    n * model.params.sigma2.ln() + k * n.ln()
}

/// Orders candidates by BIC, then fewer parameters, then lower q, then lower p.
/// Remaining ties fall back to d and seasonal d so the result never depends
/// on input order.
fn rank_cmp(a: &RankedModel, b: &RankedModel) -> std::cmp::Ordering {
    a.bic
        .total_cmp(&b.bic)
        .then(a.order.arma_param_count().cmp(&b.order.arma_param_count()))
        .then(a.order.q.cmp(&b.order.q))
        .then(a.order.p.cmp(&b.order.p))
        .then(a.order.d.cmp(&b.order.d))
        .then(a.order.ds.cmp(&b.order.ds))
}

/// BIC over the last `window` residuals only.
pub fn bic_on_window(model: &FittedModel, window: usize) -> f64 {
    let window = window.min(model.n_effective);
    let tail = &model.residuals[model.residuals.len() - window..];
    let n = window as f64;
    let sigma2 = (tail.iter().map(|e| e * e).sum::<f64>() / n).max(SIGMA2_FLOOR);
    let k = (model.order.arma_param_count() + 1) as f64;
    n * sigma2.ln() + k * n.ln()
}

/// Fits every candidate in parallel and ranks the successful fits.
///
/// Every candidate is scored on the same months: the trailing window covered
/// by the shortest residual sequence among the fits. A residual is the
/// one-step error on the original scale whatever the differencing, so
/// candidates with more differencing are not rewarded for scoring fewer
/// months.
pub fn select_order_from(series: &MonthlySeries, candidates: &[ModelOrder]) -> Result<Selection> {
    let values = series.values();
    let fits: Vec<(ModelOrder, Result<FittedModel>)> = candidates
        .par_iter()
        .map(|&order| (order, fit_values(values, order)))
        .collect();

    let window = fits
        .iter()
        .filter_map(|(_, r)| r.as_ref().ok().map(|m| m.n_effective))
        .min()
        .unwrap_or(0);

    let mut ranked = Vec::new();
    let mut skipped = Vec::new();
    for (order, outcome) in fits {
        let scored = outcome.and_then(|model| {
            let bic = bic_on_window(&model, window);
            if !bic.is_finite() {
                return Err(Error::Degenerate(format!("BIC is {bic}")));
            }
            let fitted = model.fitted_original(values);
            let actual = &values[values.len() - fitted.len()..];
            Ok(RankedModel {
                order,
                bic,
                r_squared: r_squared(actual, &fitted).ok(),
            })
        });
        match scored {
            Ok(r) => ranked.push(r),
            Err(e) => skipped.push((order, e.to_string())),
        }
    }
    ranked.sort_by(rank_cmp);
    let best = ranked.first().map(|r| r.order).ok_or_else(|| {
        Error::NoModel(
            skipped
                .first()
                .map(|(o, why)| format!("{} candidates failed, e.g. {o}: {why}", skipped.len()))
                .unwrap_or_else(|| "empty candidate grid".into()),
        )
    })?;
    Ok(Selection {
        best,
        ranked,
        skipped,
    })
}

pub fn select_order(series: &MonthlySeries, grid: &SelectionGrid) -> Result<Selection> {
    select_order_from(series, &grid.candidates())
}
