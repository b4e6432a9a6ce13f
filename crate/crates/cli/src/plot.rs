//! Self-contained SVG line charts of observed counts and forecasts.

use std::fmt::Write as _;
use std::path::Path;

use boxcast_core::{ForecastTable, MonthlySeries};

use crate::error::CliError;

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 72.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 48.0;
const BOTTOM: f64 = 64.0;

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn nice_step(range: f64, target_ticks: f64) -> f64 {
    let raw = (range / target_ticks).max(f64::MIN_POSITIVE);
    let magnitude = 10f64.powf(raw.log10().floor());
    let residual = raw / magnitude;
    let nice = if residual <= 1.0 {
        1.0
    } else if residual <= 2.0 {
        2.0
    } else if residual <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * magnitude
}

struct Frame {
    months: usize,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, index: usize) -> f64 {
        let plot_w = WIDTH - LEFT - RIGHT;
        if self.months <= 1 {
            LEFT + plot_w / 2.0
        } else {
            LEFT + plot_w * index as f64 / (self.months - 1) as f64
        }
    }

    fn y(&self, value: f64) -> f64 {
        let plot_h = HEIGHT - TOP - BOTTOM;
        TOP + plot_h * (self.y_max - value) / (self.y_max - self.y_min)
    }
}

fn points(frame: &Frame, offset: usize, values: impl Iterator<Item = f64>) -> String {
    values
        .enumerate()
        .map(|(i, v)| format!("{:.2},{:.2}", frame.x(offset + i), frame.y(v)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Draws the observed series, and when given, the forecast line with its
/// confidence band shaded.
pub fn render_plot(series: &MonthlySeries, table: Option<&ForecastTable>) -> String {
    let observed = series.values();
    let rows = table.map(|t| t.rows.as_slice()).unwrap_or_default();
    let months = observed.len() + rows.len();

    let mut lo = observed.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = observed.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for r in rows {
        lo = lo.min(r.lcl);
        hi = hi.max(r.ucl);
    }
    if hi - lo < 1e-9 {
        lo -= 1.0;
        hi += 1.0;
    }
    let step = nice_step(hi - lo, 5.0);
    let frame = Frame {
        months,
        y_min: (lo / step).floor() * step,
        y_max: (hi / step).ceil() * step,
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let title = match table {
        Some(_) => format!("{}: observed and forecast crimes per month", series.name()),
        None => format!("{}: crimes per month", series.name()),
    };
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        escape(&title)
    );

    // Count axis.
    let x0 = LEFT;
    let x1 = WIDTH - RIGHT;
    let mut tick = frame.y_min;
    while tick <= frame.y_max + step * 1e-9 {
        let y = frame.y(tick);
        let _ = writeln!(
            svg,
            r##"<line x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="#dddddd"/>"##
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 6.0,
            y + 4.0,
            crate::render::fmt_count(tick)
        );
        tick += step;
    }
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">Number of crimes</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );

    // Month axis: January of each year, or every third month for short spans.
    let axis_y = HEIGHT - BOTTOM;
    let _ = writeln!(
        svg,
        r#"<line x1="{x0:.2}" y1="{axis_y:.2}" x2="{x1:.2}" y2="{axis_y:.2}" stroke="black"/>"#
    );
    for i in 0..months {
        let month = series.month_at(i);
        let label = if months > 24 {
            (month.month() == 1).then(|| month.year().to_string())
        } else {
            (i % 3 == 0).then(|| month.short_label())
        };
        if let Some(label) = label {
            let x = frame.x(i);
            let _ = writeln!(
                svg,
                r#"<line x1="{x:.2}" y1="{axis_y:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
                axis_y + 5.0
            );
            let _ = writeln!(
                svg,
                r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#,
                axis_y + 20.0
            );
        }
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">Month</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 16.0
    );

    if !rows.is_empty() {
        let n = observed.len();
        let upper = points(&frame, n, rows.iter().map(|r| r.ucl));
        let lower: Vec<String> = rows
            .iter()
            .enumerate()
            .rev()
            .map(|(i, r)| format!("{:.2},{:.2}", frame.x(n + i), frame.y(r.lcl)))
            .collect();
        let _ = writeln!(
            svg,
            r##"<polygon class="band" points="{upper} {}" fill="#f4a582" fill-opacity="0.4" stroke="none"/>"##,
            lower.join(" ")
        );
    }

    if observed.len() == 1 {
        let _ = writeln!(
            svg,
            r##"<circle class="observed" cx="{:.2}" cy="{:.2}" r="3" fill="#2166ac"/>"##,
            frame.x(0),
            frame.y(observed[0])
        );
    } else {
        let _ = writeln!(
            svg,
            r##"<polyline class="observed" points="{}" fill="none" stroke="#2166ac" stroke-width="1.5"/>"##,
            points(&frame, 0, observed.iter().copied())
        );
    }

    if !rows.is_empty() {
        // Join the forecast to the last observation.
        let n = observed.len();
        let joined = format!(
            "{:.2},{:.2} {}",
            frame.x(n - 1),
            frame.y(observed[n - 1]),
            points(&frame, n, rows.iter().map(|r| r.forecast))
        );
        let _ = writeln!(
            svg,
            r##"<polyline class="forecast" points="{joined}" fill="none" stroke="#b2182b" stroke-width="1.5" stroke-dasharray="6 3"/>"##
        );
        let level = table.map(|t| t.level * 100.0).unwrap_or_default();
        let _ = writeln!(
            svg,
            r##"<text x="{:.2}" y="{:.2}" text-anchor="end" fill="#b2182b">forecast with {}% limits</text>"##,
            x1,
            TOP - 8.0,
            crate::render::fmt_fixed(level, 0)
        );
    }

    svg.push_str("</svg>\n");
    svg
}

pub fn write_plot(
    series: &MonthlySeries,
    table: Option<&ForecastTable>,
    out: &Path,
) -> Result<(), CliError> {
    std::fs::write(out, render_plot(series, table))
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", out.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use boxcast_core::{ForecastRow, Month};

    fn series(values: Vec<f64>) -> MonthlySeries {
        MonthlySeries::new("Brent", Month::new(2012, 1).unwrap(), values).unwrap()
    }

    fn forecast(after: &MonthlySeries, h: usize) -> ForecastTable {
        ForecastTable {
            model_name: "Brent-Model".into(),
            level: 0.95,
            rows: (0..h)
                .map(|i| ForecastRow {
                    month: after.end().offset(i as i64 + 1),
                    forecast: 100.0,
                    ucl: 110.0 + i as f64,
                    lcl: 90.0 - i as f64,
                })
                .collect(),
        }
    }

    #[test]
    fn series_only_has_one_polyline() {
        let svg = render_plot(&series(vec![1.0, 5.0, 3.0]), None);
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(!svg.contains("<polygon"));
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn forecast_adds_line_and_band() {
        let s = series((0..60).map(|i| 100.0 + i as f64).collect());
        let svg = render_plot(&s, Some(&forecast(&s, 24)));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert!(svg.contains(">2016<") && svg.contains(">2018<"));
    }

    #[test]
    fn single_point_is_a_marker() {
        let svg = render_plot(&series(vec![7.0]), None);
        assert!(svg.contains("<circle"));
        assert!(!svg.contains("<polyline"));
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }

    #[test]
    fn output_is_deterministic() {
        let s = series((0..30).map(|i| (i * 7 % 13) as f64).collect());
        let t = forecast(&s, 6);
        assert_eq!(render_plot(&s, Some(&t)), render_plot(&s, Some(&t)));
    }

    #[test]
    fn names_are_escaped() {
        let s =
            MonthlySeries::new("A & <B>", Month::new(2012, 1).unwrap(), vec![1.0, 2.0]).unwrap();
        assert!(render_plot(&s, None).contains("A &amp; &lt;B&gt;"));
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let s = series(vec![1.0, 2.0]);
        let err = write_plot(&s, None, Path::new("/nonexistent-dir/x.svg")).unwrap_err();
        assert!(matches!(err, CliError::Io(_)));
    }
}
