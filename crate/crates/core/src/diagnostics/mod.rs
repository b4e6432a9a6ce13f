//! Fit statistics, the Ljung-Box test, special functions, order selection and
//! holdout backtesting.

pub mod backtest;
pub mod selection;
pub mod special;
pub mod stats;

pub use backtest::{backtest, BacktestReport};
pub use selection::{
    bic, bic_on_window, select_order, select_order_from, RankedModel, Selection, SelectionGrid,
};
pub use special::{chi_square_sf, normal_cdf, normal_quantile};
pub use stats::{
    accuracy, acf, fit_statistics, ljung_box, ljung_box_statistic, r_squared, ses_accuracy,
    stationary_r_squared, Accuracy, FitStatistics, LjungBoxResult, DEFAULT_LB_LAGS,
};
