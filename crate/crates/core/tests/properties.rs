mod common;

use boxcast_core::estimate::{css_loss, css_residuals, fit_values};
use boxcast_core::forecast::forecast_values;
use boxcast_core::ingest::{clean_series, parse_wide_csv, RawRow, RawTable};
use boxcast_core::transform::{
    difference, difference_with_seasonal, expand_ar_operator, integrate, integrate_future,
};
use boxcast_core::{forecast_intervals, ArimaParams, ModelOrder, Month};
use proptest::prelude::*;

fn values(min_len: usize, max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0e3..1.0e3f64, min_len..=max_len)
}

fn raw_table() -> impl Strategy<Value = RawTable> {
    let names = prop::collection::vec("[A-Za-z][A-Za-z ]{0,8}[A-Za-z]", 1..5);
    names
        .prop_flat_map(|header| {
            let width = header.len();
            let cell = prop::option::of(prop_oneof![
                (0u32..5000).prop_map(f64::from),
                -1.0e6..1.0e6f64,
            ]);
            let rows = prop::collection::vec(prop::collection::vec(cell, width), 0..30);
            (Just(header), rows, 2000i32..2030, 1u32..=12, any::<bool>())
        })
        .prop_map(|(header, cells, year, month, short)| {
            let start = Month::new(year, month).unwrap();
            let rows = cells
                .into_iter()
                .enumerate()
                .map(|(i, cells)| {
                    let month = start.offset(i as i64);
                    let label = if short {
                        format!("{:02}-{}", month.year() % 100, month.abbreviation())
                    } else {
                        month.iso()
                    };
                    RawRow {
                        label,
                        month,
                        cells,
                    }
                })
                .collect();
            RawTable { header, rows }
        })
}

proptest! {
    #[test]
    fn wide_csv_round_trip(table in raw_table()) {
        let text = table.to_wide_csv().unwrap();
        prop_assert_eq!(parse_wide_csv(text.as_bytes()).unwrap(), table);
    }

    #[test]
    fn cleaning_fills_every_month(cells in prop::collection::vec(prop::option::of(0.0..1.0e4f64), 2..60)) {
        prop_assume!(cells.iter().filter(|c| c.is_some()).count() >= 2);
        let start = Month::new(2012, 1).unwrap();
        let table = RawTable {
            header: vec!["X".into()],
            rows: cells.iter().enumerate().map(|(i, c)| {
                let month = start.offset(i as i64);
                RawRow { label: month.iso(), month, cells: vec![*c] }
            }).collect(),
        };
        let series = clean_series(&table, "X").unwrap();
        prop_assert!(series.len() <= cells.len());
        prop_assert!(series.values().iter().all(|v| v.is_finite() && *v >= 0.0));

        let first = cells.iter().position(Option::is_some).unwrap();
        prop_assert_eq!(series.start(), start.offset(first as i64));
        for (k, v) in series.values().iter().enumerate() {
            let i = first + k;
            match cells[i] {
                Some(x) => prop_assert_eq!(*v, x),
                None => {
                    let lo = cells[..i].iter().rev().find_map(|c| *c).unwrap();
                    let hi = cells[i..].iter().find_map(|c| *c).unwrap();
                    let tol = 1e-9 * lo.abs().max(hi.abs()).max(1.0);
                    prop_assert!(*v >= lo.min(hi) - tol && *v <= lo.max(hi) + tol);
                }
            }
        }
    }

    #[test]
    fn second_difference_is_repeated_first(s in values(3, 200)) {
        let twice = difference(&difference(&s, 1).unwrap().values, 1).unwrap().values;
        prop_assert_eq!(difference(&s, 2).unwrap().values, twice);
    }

    #[test]
    fn integrate_inverts_difference(s in values(14, 120), d in 0usize..=2, ds in 0usize..=1) {
        let diffed = difference_with_seasonal(&s, d, ds).unwrap();
        prop_assert_eq!(diffed.values.len(), s.len() - d - 12 * ds);
        prop_assert_eq!(diffed.heads.len(), d + 12 * ds);
        let back = integrate(&diffed, &[]).unwrap();
        prop_assert_eq!(back.len(), s.len());
        for (a, b) in back.iter().zip(&s) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn operator_without_differencing_is_phi(phi in prop::collection::vec(-1.0..1.0f64, 0..6)) {
        prop_assert_eq!(expand_ar_operator(&phi, 0, 0), phi);
    }

    #[test]
    fn operator_matches_explicit_recursion(
        phi in prop::collection::vec(-0.9..0.9f64, 0..3),
        d in 0usize..=2,
        ds in 0usize..=1,
        s in values(30, 60),
    ) {
        // Differencing S, applying φ on the differenced scale, must equal
        // applying the expanded operator on the original scale.
        let c = expand_ar_operator(&phi, d, ds);
        prop_assert_eq!(c.len(), phi.len() + d + 12 * ds);
        let z = difference_with_seasonal(&s, d, ds).unwrap().values;
        let m = c.len();
        let depth = d + 12 * ds;
        for t in m..s.len() {
            let original = s[t] - c.iter().enumerate().map(|(i, ci)| ci * s[t - 1 - i]).sum::<f64>();
            let k = t - depth;
            let differenced = z[k] - phi.iter().enumerate().map(|(i, p)| p * z[k - 1 - i]).sum::<f64>();
            prop_assert!((original - differenced).abs() <= 1e-8 * (1.0 + original.abs()));
        }
    }

    #[test]
    fn loss_is_sum_of_squared_residuals(
        y in values(8, 80),
        mu in -5.0..5.0f64,
        phi in prop::collection::vec(-0.4..0.4f64, 0..3),
        theta in prop::collection::vec(-0.4..0.4f64, 0..3),
    ) {
        let order = ModelOrder::new(phi.len(), 0, theta.len());
        let params = ArimaParams::new(mu, phi, theta, 1.0);
        let residuals = css_residuals(&y, &params, &order).unwrap();
        prop_assert_eq!(residuals.len(), y.len() - order.p);
        let sum: f64 = residuals.iter().map(|e| e * e).sum();
        prop_assert_eq!(css_loss(&y, &params, &order).unwrap(), sum);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn intervals_are_symmetric_and_widening(
        seed in 0u64..10_000,
        p in 0usize..=2,
        d in 0usize..=1,
        q in 0usize..=1,
        ds in 0usize..=1,
    ) {
        let order = ModelOrder::seasonal(p, d, q, ds);
        let values: Vec<f64> = common::simulate_arma(seed, 60, 0.0, &[0.4], &[], 30.0)
            .iter().enumerate().map(|(i, v)| 1500.0 + 3.0 * i as f64 + v).collect();
        let series = common::series(values);
        let model = fit_values(series.values(), order).unwrap();
        let table = forecast_intervals(&model, &series, 24, 0.95).unwrap();
        let mut prev = 0.0;
        for row in &table.rows {
            let up = row.ucl - row.forecast;
            let down = row.forecast - row.lcl;
            prop_assert!(row.lcl <= row.forecast && row.forecast <= row.ucl);
            prop_assert!((up - down).abs() <= 1e-9 * up.abs().max(row.forecast.abs()));
            prop_assert!(up >= prev);
            prev = up;
        }
    }

    #[test]
    fn original_scale_forecast_matches_integrated_differenced_forecast(
        seed in 0u64..10_000,
        p in 0usize..=2,
        d in 0usize..=2,
        q in 0usize..=2,
        ds in 0usize..=1,
    ) {
        let order = ModelOrder::seasonal(p, d, q, ds);
        let values: Vec<f64> = common::simulate_arma(seed, 72, 1.0, &[0.5], &[], 5.0)
            .iter().map(|v| v + 500.0).collect();
        let model = fit_values(&values, order).unwrap();
        let h = 15;
        let direct = forecast_values(&model, &values, h);

        // Route 2: forecast the stationary ARMA on the differenced scale, then
        // undo the differencing.
        let y = &model.differenced.values;
        let n = y.len();
        let mut e = vec![0.0; n + h];
        e[n - model.residuals.len()..n].copy_from_slice(&model.residuals);
        let mut z = y.clone();
        for t in n..n + h {
            let mut v = model.params.mu;
            for (i, phi) in model.params.phi.iter().enumerate() {
                v += phi * z[t - 1 - i];
            }
            for (j, theta) in model.params.theta.iter().enumerate() {
                v -= theta * e[t - 1 - j];
            }
            z.push(v);
        }
        let via_integration = integrate_future(&model.differenced, &z[n..]).unwrap();
        for (a, b) in direct.iter().zip(&via_integration) {
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{} vs {}", a, b);
        }
    }

    #[test]
    fn two_step_forecast_is_chained_one_step(seed in 0u64..10_000, d in 0usize..=2, q in 0usize..=2) {
        let order = ModelOrder::new(1, d, q);
        let values: Vec<f64> = common::simulate_arma(seed, 60, 2.0, &[0.3], &[], 4.0)
            .iter().map(|v| v + 300.0).collect();
        let model = fit_values(&values, order).unwrap();
        let direct = forecast_values(&model, &values, 2);

        let mut extended_values = values.clone();
        extended_values.push(direct[0]);
        let mut extended = model.clone();
        extended.residuals.push(0.0);
        extended.n_effective += 1;
        let chained = forecast_values(&extended, &extended_values, 1);
        prop_assert!((direct[1] - chained[0]).abs() <= 1e-9 * direct[1].abs().max(1.0));
    }

    #[test]
    fn stationary_forecasts_approach_process_mean(seed in 0u64..10_000, phi in -0.9..0.9f64) {
        let values: Vec<f64> = common::simulate_arma(seed, 120, 100.0 * (1.0 - phi), &[phi], &[], 5.0)
            .into_iter().map(|v| v.max(0.0)).collect();
        let model = fit_values(&values, ModelOrder::new(1, 0, 0)).unwrap();
        prop_assume!(model.params.phi[0].abs() <= 0.9);
        let limit = model.params.process_mean();
        let f = forecast_values(&model, &values, 48);
        prop_assert!((f[47] - limit).abs() <= 0.01 * limit.abs(), "{} vs {}", f[47], limit);
    }
}
