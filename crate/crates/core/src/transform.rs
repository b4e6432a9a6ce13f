//! Differencing and its inverse, plus expansion of the combined AR operator.
//!
//! Seasonal differencing (period 12) is applied first, then ordinary
//! differencing. The two commute; the order only fixes which leading values
//! are kept as heads.

use crate::error::{Error, Result};

pub const SEASONAL_PERIOD: usize = 12;
pub const MAX_D: usize = 2;
pub const MAX_SEASONAL_D: usize = 1;

/// A series after `d` ordinary and `ds` seasonal differences.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferencedSeries {
    pub values: Vec<f64>,
    pub d: usize,
    pub ds: usize,
    /// The first `d + 12·ds` original values, needed to undo the differencing.
    pub heads: Vec<f64>,
}

impl DifferencedSeries {
    pub fn lag_depth(&self) -> usize {
        self.d + SEASONAL_PERIOD * self.ds
    }
}

fn first_difference(values: &[f64], lag: usize) -> Vec<f64> {
    values
        .iter()
        .skip(lag)
        .zip(values)
        .map(|(now, before)| now - before)
        .collect()
}

/// Ordinary differencing of order 0, 1 or 2.
pub fn difference(series: &[f64], d: usize) -> Result<DifferencedSeries> {
    difference_with_seasonal(series, d, 0)
}

/// Seasonal (lag-12) differencing of order 0 or 1.
pub fn seasonal_difference(series: &[f64], ds: usize) -> Result<DifferencedSeries> {
    difference_with_seasonal(series, 0, ds)
}

/// Seasonal differencing followed by ordinary differencing.
pub fn difference_with_seasonal(series: &[f64], d: usize, ds: usize) -> Result<DifferencedSeries> {
    if d > MAX_D {
        return Err(Error::InvalidOrder(format!("d = {d} exceeds {MAX_D}")));
    }
    if ds > MAX_SEASONAL_D {
        return Err(Error::InvalidOrder(format!(
            "seasonal d = {ds} exceeds {MAX_SEASONAL_D}"
        )));
    }
    let depth = d + SEASONAL_PERIOD * ds;
    if series.len() <= depth {
        return Err(Error::InsufficientData(format!(
            "differencing (d={d}, ds={ds}) needs more than {depth} values, got {}",
            series.len()
        )));
    }

    let mut values = series.to_vec();
    for _ in 0..ds {
        values = first_difference(&values, SEASONAL_PERIOD);
    }
    for _ in 0..d {
        values = first_difference(&values, 1);
    }
    Ok(DifferencedSeries {
        values,
        d,
        ds,
        heads: series[..depth].to_vec(),
    })
}

/// Rebuilds the original-scale series from `diffed`, continuing with
/// `future_diffs` (values on the differenced scale that follow
/// `diffed.values`).
///
/// The result holds the reconstructed original series followed by one
/// original-scale value per entry of `future_diffs`.
pub fn integrate(diffed: &DifferencedSeries, future_diffs: &[f64]) -> Result<Vec<f64>> {
    if diffed.d > MAX_D || diffed.ds > MAX_SEASONAL_D {
        return Err(Error::Contract(format!(
            "unsupported differencing d={}, ds={}",
            diffed.d, diffed.ds
        )));
    }
    let depth = diffed.lag_depth();
    if diffed.heads.len() != depth {
        return Err(Error::Contract(format!(
            "expected {depth} head values for d={}, ds={}, found {}",
            diffed.d,
            diffed.ds,
            diffed.heads.len()
        )));
    }

    let unit_roots = expand_ar_operator(&[], diffed.d, diffed.ds);
    let total = depth + diffed.values.len() + future_diffs.len();
    let mut out = Vec::with_capacity(total);
    out.extend_from_slice(&diffed.heads);
    for z in diffed.values.iter().chain(future_diffs) {
        let t = out.len();
        let carried: f64 = unit_roots
            .iter()
            .enumerate()
            .map(|(i, c)| c * out[t - 1 - i])
            .sum();
        out.push(carried + z);
    }
    Ok(out)
}

/// Like [`integrate`], but returns only the continuation produced by
/// `future_diffs`.
pub fn integrate_future(diffed: &DifferencedSeries, future_diffs: &[f64]) -> Result<Vec<f64>> {
    let mut full = integrate(diffed, future_diffs)?;
    Ok(full.split_off(full.len() - future_diffs.len()))
}

/// Multiplies polynomials in the backshift operator, coefficients in
/// ascending powers.
pub(crate) fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Expands `φ(B)(1−B)^d(1−B¹²)^ds = 1 − c₁B − … − c_mB^m` and returns
/// `c₁..c_m`, so that the original-scale recursion is
/// `Y_t = Σ c_i·Y_{t−i} + (constant and MA terms)`.
pub fn expand_ar_operator(phi: &[f64], d: usize, ds: usize) -> Vec<f64> {
    let mut poly = Vec::with_capacity(phi.len() + 1);
    poly.push(1.0);
    poly.extend(phi.iter().map(|p| -p));
    for _ in 0..d {
        poly = poly_mul(&poly, &[1.0, -1.0]);
    }
    for _ in 0..ds {
        let mut seasonal = vec![0.0; SEASONAL_PERIOD + 1];
        seasonal[0] = 1.0;
        seasonal[SEASONAL_PERIOD] = -1.0;
        poly = poly_mul(&poly, &seasonal);
    }
    poly.iter().skip(1).map(|c| -c).collect()
}
