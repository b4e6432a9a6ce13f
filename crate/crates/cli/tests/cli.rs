use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use boxcast_core::ingest::parse_wide_csv;

fn boxcast(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boxcast"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn forecast_table_has_three_columns_per_borough() {
    let out = boxcast(&["forecast", "--order", "1,1,0"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 25);
    assert!(lines[0].starts_with("month,Barking and Dagenham-Model Forecast,"));
    assert_eq!(lines[0].split(',').count(), 1 + 3 * 4);
    assert!(lines[1].starts_with("Jan-17,"));
    assert!(lines[24].starts_with("Dec-18,"));
}

#[test]
fn forecast_csv_reparses_as_wide_table() {
    let out = boxcast(&[
        "forecast",
        "--order",
        "2,0,0",
        "--borough",
        "Bexley",
        "--horizon",
        "6",
    ]);
    assert!(out.status.success());
    let table = parse_wide_csv(out.stdout.as_slice()).unwrap();
    assert_eq!(table.header.len(), 3);
    assert_eq!(table.rows.len(), 6);
    for row in &table.rows {
        let cells: Vec<f64> = row.cells.iter().map(|c| c.unwrap()).collect();
        assert!(cells[2] <= cells[0] && cells[0] <= cells[1]);
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let first = boxcast(&["report"]);
    let second = boxcast(&["report"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn usage_errors_exit_two_with_one_line() {
    for args in [
        vec!["forecast", "--horizon", "0"],
        vec!["forecast", "--level", "1.5"],
        vec!["forecast", "--order", "1,1"],
        vec!["forecast", "--train-end", "2015-12"],
        vec!["predict"],
    ] {
        let out = boxcast(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        let err = stderr(&out);
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("error:"), "{args:?}: {err}");
    }
}

#[test]
fn data_errors_exit_one() {
    let out = boxcast(&["fit", "--input", "/definitely/not/here.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr(&out).lines().count(), 1);

    let out = boxcast(&[
        "fit",
        "--order",
        "1,0,0",
        "--borough",
        "Camden",
        "--borough",
        "Hackney",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("Camden") && err.contains("Hackney"), "{err}");
}

#[test]
fn malformed_cell_reports_row_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    fs::write(&path, "month,A\n2020-01,10\n2020-02,ten\n").unwrap();
    let out = boxcast(&["fit", "--order", "0,0,0", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("row 2") && err.contains("column 2"), "{err}");
}

#[test]
fn long_format_input_matches_wide() {
    let dir = tempfile::tempdir().unwrap();
    let wide = dir.path().join("wide.csv");
    let long = dir.path().join("long.csv");
    let mut w = String::from("month,North,South\n");
    let mut l = String::from("month,borough,count\n");
    for i in 0..48 {
        let month = format!("{}-{:02}", 2013 + i / 12, i % 12 + 1);
        let north = 500 + (i * 37) % 61;
        let south = 800 + (i * 53) % 47;
        w.push_str(&format!("{month},{north},{south}\n"));
        l.push_str(&format!("{month},North,{north}\n{month},South,{south}\n"));
    }
    fs::write(&wide, w).unwrap();
    fs::write(&long, l).unwrap();
    let a = boxcast(&[
        "forecast",
        "--order",
        "1,0,0",
        "--input",
        wide.to_str().unwrap(),
    ]);
    let b = boxcast(&[
        "forecast",
        "--order",
        "1,0,0",
        "--input",
        long.to_str().unwrap(),
    ]);
    assert!(a.status.success(), "{}", stderr(&a));
    assert!(b.status.success(), "{}", stderr(&b));
    assert!(stdout(&a).starts_with("month,North-Model Forecast"));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn out_flag_writes_file_instead_of_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fit.md");
    let out = boxcast(&[
        "fit",
        "--order",
        "2,0,0",
        "--format",
        "markdown",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("| Model |"));
    assert!(text.contains("| Barnet-Model |"));
}

#[test]
fn plot_writes_one_svg_per_borough() {
    let dir = tempfile::tempdir().unwrap();
    let out = boxcast(&[
        "plot",
        "--order",
        "1,1,1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let listed = stdout(&out);
    assert_eq!(listed.lines().count(), 4);
    for line in listed.lines() {
        let svg = fs::read_to_string(Path::new(line)).unwrap();
        assert!(
            svg.starts_with("<svg") || svg.starts_with("<?xml"),
            "{line}"
        );
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}

#[test]
fn select_ranks_candidates_by_bic() {
    let out = boxcast(&["select", "--borough", "Bexley"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let bics: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(bics.len() > 50);
    assert!(bics.windows(2).all(|w| w[0] <= w[1]));
}
