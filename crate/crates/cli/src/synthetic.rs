//! The bundled synthetic dataset: four boroughs, January 2012 to December
//! 2016.
//!
//! Each borough is `level + trend·t + level·season[month] + a_t`, where `a_t`
//! is a seeded AR(2) process with φ = (0.5, 0.2). Values are rounded to whole
//! counts and written in the wide layout with `YY-MMM` month labels.

use boxcast_core::simulate::{arma, seeded_rng};
use boxcast_core::{ArimaParams, Month};

pub const START_YEAR: i32 = 2012;
pub const MONTHS: usize = 60;

/// Relative monthly deviations from the annual level, January first.
const SEASON: [f64; 12] = [
    -0.019, -0.058, 0.046, -0.025, 0.002, -0.005, 0.027, -0.043, -0.037, 0.050, 0.062, 0.000,
];

struct BoroughSpec {
    name: &'static str,
    level: f64,
    trend: f64,
    sigma: f64,
    seed: u64,
}

const BOROUGHS: [BoroughSpec; 4] = [
    BoroughSpec {
        name: "Barking and Dagenham",
        level: 1420.0,
        trend: 0.8,
        sigma: 55.0,
        seed: 2012,
    },
    BoroughSpec {
        name: "Barnet",
        level: 2080.0,
        trend: 1.5,
        sigma: 80.0,
        seed: 2013,
    },
    BoroughSpec {
        name: "Bexley",
        level: 1120.0,
        trend: -0.6,
        sigma: 45.0,
        seed: 2014,
    },
    BoroughSpec {
        name: "Brent",
        level: 2330.0,
        trend: 2.0,
        sigma: 95.0,
        seed: 2015,
    },
];

pub fn borough_names() -> Vec<&'static str> {
    BOROUGHS.iter().map(|b| b.name).collect()
}

fn borough_values(spec: &BoroughSpec) -> Vec<f64> {
    let params = ArimaParams::new(0.0, vec![0.5, 0.2], vec![], spec.sigma * spec.sigma);
    let noise = arma(&mut seeded_rng(spec.seed), MONTHS, &params);
    noise
        .iter()
        .enumerate()
        .map(|(t, a)| {
            let seasonal = spec.level * SEASON[t % 12];
            (spec.level + spec.trend * t as f64 + seasonal + a)
                .round()
                .max(0.0)
        })
        .collect()
}

/// Renders the dataset as wide CSV.
pub fn london_csv() -> String {
    let columns: Vec<Vec<f64>> = BOROUGHS.iter().map(borough_values).collect();
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["month".to_string()];
    header.extend(BOROUGHS.iter().map(|b| b.name.to_string()));
    writer.write_record(&header).expect("in-memory write");
    let start = Month::new(START_YEAR, 1).expect("valid month");
    for t in 0..MONTHS {
        let month = start.offset(t as i64);
        let mut record = vec![format!(
            "{:02}-{}",
            month.year() % 100,
            month.abbreviation()
        )];
        record.extend(columns.iter().map(|c| format!("{}", c[t])));
        writer.write_record(&record).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("ASCII output")
}
