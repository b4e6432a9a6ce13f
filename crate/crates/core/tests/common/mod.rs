#![allow(dead_code)]

use boxcast_core::simulate::{arima, arma, seeded_rng};
use boxcast_core::{ArimaParams, ModelOrder, Month, MonthlySeries};

pub fn simulate_arma(
    seed: u64,
    n: usize,
    mu: f64,
    phi: &[f64],
    theta: &[f64],
    sigma: f64,
) -> Vec<f64> {
    let params = ArimaParams::new(mu, phi.to_vec(), theta.to_vec(), sigma * sigma);
    arma(&mut seeded_rng(seed), n, &params)
}

pub fn simulate_arima(
    seed: u64,
    n: usize,
    order: ModelOrder,
    params: ArimaParams,
    heads: &[f64],
) -> Vec<f64> {
    arima(&mut seeded_rng(seed), n, order, &params, heads).unwrap()
}

pub fn white_noise(seed: u64, n: usize) -> Vec<f64> {
    simulate_arma(seed, n, 0.0, &[], &[], 1.0)
}

pub fn series(values: Vec<f64>) -> MonthlySeries {
    MonthlySeries::new("Sim", Month::new(2000, 1).unwrap(), values).unwrap()
}
