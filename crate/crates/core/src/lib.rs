//! Box-Jenkins ARIMA modelling of monthly count series.
//!
//! The pipeline is: [`ingest`] CSV into [`MonthlySeries`], [`transform`] by
//! differencing, [`estimate`] coefficients by conditional sum of squares,
//! [`forecast`] with confidence limits, and check the fit with
//! [`diagnostics`].

pub mod diagnostics;
pub mod error;
pub mod estimate;
pub mod forecast;
pub mod ingest;
pub mod month;
pub mod optimizer;
pub mod polynomial;
pub mod simulate;
pub mod transform;

pub use error::{Error, Result};
pub use estimate::{fit, fit_ses, ArimaParams, FittedModel, ModelOrder, SesFit};
pub use forecast::{forecast_intervals, point_forecasts, psi_weights, ForecastRow, ForecastTable};
pub use ingest::{MonthlySeries, RawTable};
pub use month::Month;
pub use transform::DifferencedSeries;
