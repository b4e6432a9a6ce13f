//! Text rendering of tables as CSV or markdown.

use boxcast_core::ForecastTable;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Markdown,
}

/// A header plus rows of already-formatted cells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TextTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl TextTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        TextTable {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Markdown => self.to_markdown(),
        }
    }

    fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new()
            .flexible(true)
            .from_writer(Vec::new());
        writer.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            writer.write_record(row).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("cells are UTF-8")
    }

    fn to_markdown(&self) -> String {
        let escape = |s: &String| s.replace('|', "\\|");
        let line = |cells: &[String]| {
            let inner: Vec<String> = cells.iter().map(escape).collect();
            format!("| {} |\n", inner.join(" | "))
        };
        let mut out = line(&self.header);
        out.push('|');
        for _ in &self.header {
            out.push_str(" --- |");
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
        }
        out
    }
}

/// Whole-number rendering used for counts and forecasts.
pub fn fmt_count(x: f64) -> String {
    let r = x.round();
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r:.0}")
    }
}

/// Fixed-point rendering with `digits` decimals, without a negative zero.
pub fn fmt_fixed(x: f64, digits: usize) -> String {
    let s = format!("{x:.digits$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Statistics are printed to three decimals.
pub fn fmt_stat(x: f64) -> String {
    fmt_fixed(x, 3)
}

/// Lays forecast tables side by side: the month label, then forecast, UCL and
/// LCL for each model. Every table must cover the same months.
pub fn forecast_text_table(tables: &[ForecastTable]) -> Result<TextTable, CliError> {
    let mut header = vec!["month".to_string()];
    for t in tables {
        header.push(format!("{} Forecast", t.model_name));
        header.push(format!("{} UCL", t.model_name));
        header.push(format!("{} LCL", t.model_name));
    }
    let mut text = TextTable::new(header);
    let Some(first) = tables.first() else {
        return Ok(text);
    };
    let axis = first.months();
    if let Some(other) = tables.iter().find(|t| t.months() != axis) {
        return Err(CliError::Data(boxcast_core::Error::Contract(format!(
            "forecast months of {} differ from {}",
            other.model_name, first.model_name
        ))));
    }
    for (i, month) in axis.iter().enumerate() {
        let mut row = vec![month.short_label()];
        for t in tables {
            let r = &t.rows[i];
            row.push(fmt_count(r.forecast));
            row.push(fmt_count(r.ucl));
            row.push(fmt_count(r.lcl));
        }
        text.push(row);
    }
    Ok(text)
}

pub fn render_table(tables: &[ForecastTable], format: OutputFormat) -> Result<String, CliError> {
    Ok(forecast_text_table(tables)?.render(format))
}
