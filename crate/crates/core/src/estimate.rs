//! Conditional-sum-of-squares estimation of ARIMA models and the simple
//! exponential smoothing baseline.
//!
//! The stationary part follows
//! `y_t = μ + Σφ_i·y_{t−i} + e_t − Σθ_j·e_{t−j}` on the differenced scale.

use std::fmt;

use crate::error::{Error, Result};
use crate::ingest::MonthlySeries;
use crate::optimizer::NelderMead;
use crate::polynomial::{roots_outside_unit_circle, unit_circle_violation};
use crate::transform::{difference_with_seasonal, DifferencedSeries, MAX_D, MAX_SEASONAL_D};

pub const MAX_AR: usize = 5;
pub const MAX_MA: usize = 5;
/// Fitting needs at least `p + q + MIN_EXTRA_OBS` differenced observations.
pub const MIN_EXTRA_OBS: usize = 10;
pub const SIGMA2_FLOOR: f64 = 1e-12;
const PENALTY: f64 = 1e12;
const SIMPLEX_TOL: f64 = 1e-8;
const ITERATIONS_PER_DIM: usize = 200;

/// The `(p, d, q)` order plus the number of lag-12 seasonal differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModelOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
    pub ds: usize,
}

impl ModelOrder {
    pub fn new(p: usize, d: usize, q: usize) -> Self {
        ModelOrder { p, d, q, ds: 0 }
    }

    pub fn seasonal(p: usize, d: usize, q: usize, ds: usize) -> Self {
        ModelOrder { p, d, q, ds }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p > MAX_AR || self.q > MAX_MA {
            return Err(Error::InvalidOrder(format!(
                "{self}: p and q are capped at {MAX_AR} and {MAX_MA}"
            )));
        }
        if self.d > MAX_D || self.ds > MAX_SEASONAL_D {
            return Err(Error::InvalidOrder(format!(
                "{self}: d is capped at {MAX_D}, seasonal d at {MAX_SEASONAL_D}"
            )));
        }
        Ok(())
    }

    /// AR plus MA coefficients; the constant is not counted.
    pub fn arma_param_count(&self) -> usize {
        self.p + self.q
    }

    /// Original-scale lags consumed by differencing.
    pub fn lag_depth(&self) -> usize {
        self.d + 12 * self.ds
    }
}

impl fmt::Display for ModelOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ARIMA({},{},{})", self.p, self.d, self.q)?;
        if self.ds > 0 {
            write!(f, "(0,{},0)[12]", self.ds)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArimaParams {
    /// Constant term on the differenced scale.
    pub mu: f64,
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
    pub sigma2: f64,
}

impl ArimaParams {
    pub fn new(mu: f64, phi: Vec<f64>, theta: Vec<f64>, sigma2: f64) -> Self {
        ArimaParams {
            mu,
            phi,
            theta,
            sigma2,
        }
    }

    /// Mean of the differenced process, `μ / (1 − Σφ)`.
    pub fn process_mean(&self) -> f64 {
        self.mu / (1.0 - self.phi.iter().sum::<f64>())
    }

    fn check_shape(&self, order: &ModelOrder) -> Result<()> {
        if self.phi.len() != order.p || self.theta.len() != order.q {
            return Err(Error::Contract(format!(
                "{order} needs {} AR and {} MA coefficients, got {} and {}",
                order.p,
                order.q,
                self.phi.len(),
                self.theta.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FittedModel {
    pub order: ModelOrder,
    pub params: ArimaParams,
    /// Innovations `e_{p+1}..e_n` on the differenced scale.
    pub residuals: Vec<f64>,
    pub n_effective: usize,
    /// Conditional sum of squares, `Σ residuals²`.
    pub loss: f64,
    pub converged: bool,
    pub iterations: usize,
    pub differenced: DifferencedSeries,
}

/// One-step innovations with pre-sample errors fixed at zero, starting at
/// `t = p + 1`.
pub fn css_residuals(y: &[f64], params: &ArimaParams, order: &ModelOrder) -> Result<Vec<f64>> {
    params.check_shape(order)?;
    let p = order.p;
    if y.len() <= p {
        return Err(Error::InsufficientData(format!(
            "{} differenced values cannot support {p} AR lags",
            y.len()
        )));
    }
    Ok(residuals_unchecked(
        y,
        params.mu,
        &params.phi,
        &params.theta,
    ))
}

fn residuals_unchecked(y: &[f64], mu: f64, phi: &[f64], theta: &[f64]) -> Vec<f64> {
    let p = phi.len();
    let mut e = vec![0.0; y.len()];
    for t in p..y.len() {
        let mut pred = mu;
        for (i, coef) in phi.iter().enumerate() {
            pred += coef * y[t - 1 - i];
        }
        for (j, coef) in theta.iter().enumerate() {
            if t > j {
                pred -= coef * e[t - 1 - j];
            }
        }
        e[t] = y[t] - pred;
    }
    e.split_off(p)
}

/// Conditional sum of squares. Non-stationary AR or non-invertible MA
/// polynomials return `1e12·(1 + violation)` instead.
pub fn css_loss(y: &[f64], params: &ArimaParams, order: &ModelOrder) -> Result<f64> {
    let residuals = css_residuals(y, params, order)?;
    Ok(
        penalty(&params.phi, &params.theta)
            .unwrap_or_else(|| residuals.iter().map(|e| e * e).sum()),
    )
}

fn penalty(phi: &[f64], theta: &[f64]) -> Option<f64> {
    if roots_outside_unit_circle(phi) && roots_outside_unit_circle(theta) {
        return None;
    }
    let violation = unit_circle_violation(phi) + unit_circle_violation(theta);
    Some(PENALTY * (1.0 + violation))
}

/// Yule-Walker AR estimates via Levinson-Durbin on the sample
/// autocorrelations. Degenerate inputs yield zeros.
pub fn yule_walker_init(y: &[f64], p: usize) -> Vec<f64> {
    let zeros = vec![0.0; p];
    if p == 0 || y.len() <= p {
        return zeros;
    }
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    let autocov: Vec<f64> = (0..=p)
        .map(|k| {
            y.iter()
                .skip(k)
                .zip(y)
                .map(|(a, b)| (a - mean) * (b - mean))
                .sum::<f64>()
                / n
        })
        .collect();
    if autocov[0] <= f64::EPSILON * mean.abs().max(1.0) {
        return zeros;
    }
    let rho: Vec<f64> = autocov.iter().map(|c| c / autocov[0]).collect();

    let mut phi: Vec<f64> = Vec::with_capacity(p);
    let mut err = 1.0;
    for k in 1..=p {
        let acc = rho[k]
            - phi
                .iter()
                .enumerate()
                .map(|(j, a)| a * rho[k - 1 - j])
                .sum::<f64>();
        let kappa = acc / err;
        if !kappa.is_finite() || kappa.abs() >= 1.0 {
            return zeros;
        }
        let prev = phi.clone();
        for j in 0..phi.len() {
            phi[j] = prev[j] - kappa * prev[k - 2 - j];
        }
        phi.push(kappa);
        err *= 1.0 - kappa * kappa;
        if err <= 0.0 {
            return zeros;
        }
    }
    if roots_outside_unit_circle(&phi) {
        phi
    } else {
        zeros
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn std_dev(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64).sqrt()
}

/// Fits `order` to `series` by minimizing the conditional sum of squares with
/// Nelder-Mead. The constant is searched in units of the differenced series'
/// standard deviation so one tolerance suits every parameter.
pub fn fit(series: &MonthlySeries, order: ModelOrder) -> Result<FittedModel> {
    fit_values(series.values(), order)
}

/// [`fit`] on a bare slice of original-scale values.
pub fn fit_values(values: &[f64], order: ModelOrder) -> Result<FittedModel> {
    order.validate()?;
    let differenced = difference_with_seasonal(values, order.d, order.ds)?;
    let y = &differenced.values;
    let (p, q) = (order.p, order.q);
    if y.len() < p + q + MIN_EXTRA_OBS {
        return Err(Error::InsufficientData(format!(
            "{order} needs at least {} differenced observations, have {}",
            p + q + MIN_EXTRA_OBS,
            y.len()
        )));
    }

    let y_mean = mean(y);
    let (params, converged, iterations) = if p == 0 && q == 0 {
        (
            ArimaParams::new(y_mean, Vec::new(), Vec::new(), 0.0),
            true,
            0,
        )
    } else {
        let phi0 = yule_walker_init(y, p);
        let scale = match std_dev(y) {
            s if s > 0.0 && s.is_finite() => s,
            _ => 1.0,
        };
        let mu0 = y_mean * (1.0 - phi0.iter().sum::<f64>());

        let mut start = Vec::with_capacity(1 + p + q);
        start.push(mu0 / scale);
        start.extend(&phi0);
        start.extend(std::iter::repeat_n(0.0, q));
        let steps = vec![0.1; start.len()];

        let objective = |x: &[f64]| {
            let (phi, theta) = x[1..].split_at(p);
            if let Some(pen) = penalty(phi, theta) {
                return pen;
            }
            residuals_unchecked(y, x[0] * scale, phi, theta)
                .iter()
                .map(|e| e * e)
                .sum()
        };
        let nm = NelderMead::new(SIMPLEX_TOL, ITERATIONS_PER_DIM * start.len());
        let first = nm.minimize(objective, &start, &steps);
        // A restart from the best vertex guards against a collapsed simplex.
        let second = nm.minimize(objective, &first.x, &steps);
        let best = if second.value <= first.value {
            second.clone()
        } else {
            first.clone()
        };
        let x = best.x;
        (
            ArimaParams::new(x[0] * scale, x[1..=p].to_vec(), x[1 + p..].to_vec(), 0.0),
            second.converged,
            first.iterations + second.iterations,
        )
    };

    let residuals = residuals_unchecked(y, params.mu, &params.phi, &params.theta);
    let loss: f64 = residuals.iter().map(|e| e * e).sum();
    let n_effective = residuals.len();
    let sigma2 = (loss / n_effective as f64).max(SIGMA2_FLOOR);
    Ok(FittedModel {
        order,
        params: ArimaParams { sigma2, ..params },
        residuals,
        n_effective,
        loss,
        converged,
        iterations,
        differenced,
    })
}

impl FittedModel {
    /// Asymptotic standard errors of `(μ, φ…, θ…)` from a central-difference
    /// Hessian of the sum of squares: `Cov ≈ 2σ²·H⁻¹`.
    pub fn standard_errors(&self) -> Option<Vec<f64>> {
        let (p, q) = (self.order.p, self.order.q);
        let y = &self.differenced.values;
        let mut x = vec![self.params.mu];
        x.extend(&self.params.phi);
        x.extend(&self.params.theta);
        let dim = x.len();
        let sse = |v: &[f64]| -> f64 {
            residuals_unchecked(y, v[0], &v[1..=p], &v[1 + p..1 + p + q])
                .iter()
                .map(|e| e * e)
                .sum()
        };

        let h: Vec<f64> = x.iter().map(|v| 1e-4 * v.abs().max(1.0)).collect();
        let mut hess = vec![vec![0.0; dim]; dim];
        for i in 0..dim {
            for j in i..dim {
                let shifted = |si: f64, sj: f64| {
                    let mut v = x.clone();
                    v[i] += si * h[i];
                    v[j] += sj * h[j];
                    sse(&v)
                };
                let value = (shifted(1.0, 1.0) - shifted(1.0, -1.0) - shifted(-1.0, 1.0)
                    + shifted(-1.0, -1.0))
                    / (4.0 * h[i] * h[j]);
                hess[i][j] = value;
                hess[j][i] = value;
            }
        }
        let inverse = invert(hess)?;
        let ses: Vec<f64> = (0..dim)
            .map(|i| (2.0 * self.params.sigma2 * inverse[i][i]).sqrt())
            .collect();
        ses.iter().all(|s| s.is_finite()).then_some(ses)
    }

    /// One-step in-sample fitted values on the original scale, aligned with
    /// the last `n_effective` observations.
    pub fn fitted_original(&self, series: &[f64]) -> Vec<f64> {
        let offset = series.len() - self.n_effective;
        series[offset..]
            .iter()
            .zip(&self.residuals)
            .map(|(y, e)| y - e)
            .collect()
    }
}

/// Gauss-Jordan inversion with partial pivoting.
fn invert(mut a: Vec<Vec<f64>>) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = a[col][col];
        for j in 0..n {
            a[col][j] /= scale;
            inv[col][j] /= scale;
        }
        for row in 0..n {
            if row != col {
                let factor = a[row][col];
                if factor != 0.0 {
                    for j in 0..n {
                        a[row][j] -= factor * a[col][j];
                        inv[row][j] -= factor * inv[col][j];
                    }
                }
            }
        }
    }
    Some(inv)
}

/// Simple exponential smoothing fit.
#[derive(Debug, Clone, PartialEq)]
pub struct SesFit {
    pub alpha: f64,
    /// One-step-ahead fitted values; the first equals the first observation.
    pub fitted: Vec<f64>,
    pub sse: f64,
    /// Final smoothed level, the flat forecast for every horizon.
    pub level: f64,
}

/// Smooths with `s₁ = Y₁`, `s_t = α·Y_t + (1−α)·s_{t−1}` and returns the
/// one-step fitted values, their SSE and the final level.
pub fn ses_smooth(values: &[f64], alpha: f64) -> (Vec<f64>, f64, f64) {
    let mut fitted = Vec::with_capacity(values.len());
    let mut level = values.first().copied().unwrap_or(0.0);
    let mut sse = 0.0;
    for y in values {
        fitted.push(level);
        sse += (y - level).powi(2);
        level = alpha * y + (1.0 - alpha) * level;
    }
    (fitted, sse, level)
}

/// One-step SSE of simple exponential smoothing at weight `alpha`.
pub fn ses_sse(values: &[f64], alpha: f64) -> f64 {
    ses_smooth(values, alpha).1
}

/// Grid search over α ∈ {0.01, …, 0.99}; ties go to the smaller α.
pub fn fit_ses(series: &MonthlySeries) -> Result<SesFit> {
    let values = series.values();
    if values.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "exponential smoothing needs at least 3 observations, have {}",
            values.len()
        )));
    }
    let mut best: Option<(f64, f64)> = None;
    for k in 1..=99 {
        let alpha = k as f64 / 100.0;
        let sse = ses_sse(values, alpha);
        if best.is_none_or(|(_, b)| sse < b) {
            best = Some((alpha, sse));
        }
    }
    let (alpha, _) = best.expect("grid is non-empty");
    let (fitted, sse, level) = ses_smooth(values, alpha);
    Ok(SesFit {
        alpha,
        fitted,
        sse,
        level,
    })
}
