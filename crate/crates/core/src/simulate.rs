//! Seeded simulation of ARIMA processes, used for the bundled synthetic
//! dataset and for Monte Carlo checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::estimate::{ArimaParams, ModelOrder};
use crate::transform::{integrate, DifferencedSeries};

const BURN_IN: usize = 200;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws `n` values of the stationary ARMA process
/// `y_t = μ + Σφ_i·y_{t−i} + e_t − Σθ_j·e_{t−j}`, `e_t ~ N(0, σ²)`, after a
/// burn-in started at the process mean.
pub fn arma<R: Rng + ?Sized>(rng: &mut R, n: usize, params: &ArimaParams) -> Vec<f64> {
    let sigma = params.sigma2.sqrt();
    let phi_sum: f64 = params.phi.iter().sum();
    let start = if phi_sum < 1.0 {
        params.mu / (1.0 - phi_sum)
    } else {
        0.0
    };
    let total = n + BURN_IN;
    let mut y = Vec::with_capacity(total);
    let mut e = Vec::with_capacity(total);
    for t in 0..total {
        let shock: f64 = StandardNormal.sample(rng);
        let shock = sigma * shock;
        let mut v = params.mu + shock;
        for (i, c) in params.phi.iter().enumerate() {
            v += c * if t > i { y[t - 1 - i] } else { start };
        }
        for (j, c) in params.theta.iter().enumerate() {
            if t > j {
                v -= c * e[t - 1 - j];
            }
        }
        y.push(v);
        e.push(shock);
    }
    y.split_off(BURN_IN)
}

/// Draws an ARIMA path of `n` original-scale values whose first
/// `order.lag_depth()` values are `heads`.
pub fn arima<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    order: ModelOrder,
    params: &ArimaParams,
    heads: &[f64],
) -> Result<Vec<f64>> {
    let depth = order.lag_depth();
    if heads.len() != depth || n < depth {
        return Err(Error::Contract(format!(
            "{order} simulation needs {depth} head values and n ≥ {depth}"
        )));
    }
    let diffed = DifferencedSeries {
        values: arma(rng, n - depth, params),
        d: order.d,
        ds: order.ds,
        heads: heads.to_vec(),
    };
    integrate(&diffed, &[])
}
