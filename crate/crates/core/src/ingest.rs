//! CSV ingestion and cleaning of monthly borough counts.
//!
//! Two layouts are accepted. The wide layout has a `month` column followed by
//! one column per borough; the long layout has exactly `month,borough,count`.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::month::Month;

/// A named, contiguous run of monthly counts.
#[derive(Debug, Clone, PartialEq)]
pub struct MonthlySeries {
    name: String,
    start: Month,
    values: Vec<f64>,
}

impl MonthlySeries {
    pub fn new(name: impl Into<String>, start: Month, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if values.is_empty() {
            return Err(Error::InsufficientData(format!("series {name:?} is empty")));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Domain(format!(
                "series {name:?} has invalid count {} at {}",
                values[i],
                start.offset(i as i64)
            )));
        }
        Ok(MonthlySeries {
            name,
            start,
            values,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start(&self) -> Month {
        self.start
    }

    /// The last observed month.
    pub fn end(&self) -> Month {
        self.start.offset(self.values.len() as i64 - 1)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn month_at(&self, index: usize) -> Month {
        self.start.offset(index as i64)
    }

    /// The months up to and including `end`, or `None` if that leaves nothing.
    pub fn truncate_to(&self, end: Month) -> Option<MonthlySeries> {
        let keep = self.start.months_until(end) + 1;
        if keep < 1 {
            return None;
        }
        let keep = (keep as usize).min(self.values.len());
        Some(MonthlySeries {
            name: self.name.clone(),
            start: self.start,
            values: self.values[..keep].to_vec(),
        })
    }
}

/// One data row of a wide table.
#[derive(Debug, Clone, PartialEq)]
pub struct RawRow {
    pub label: String,
    pub month: Month,
    pub cells: Vec<Option<f64>>,
}

/// Wide-layout table as read from disk, before cleaning.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawTable {
    /// Borough column labels, excluding the leading `month` column.
    pub header: Vec<String>,
    pub rows: Vec<RawRow>,
}

impl RawTable {
    pub fn column_index(&self, borough: &str) -> Option<usize> {
        self.header.iter().position(|h| h == borough)
    }

    /// Writes the table back out in the wide layout.
    pub fn to_wide_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["month".to_string()];
        header.extend(self.header.iter().cloned());
        writer.write_record(&header)?;
        for row in &self.rows {
            let mut record = vec![row.label.clone()];
            record.extend(
                row.cells
                    .iter()
                    .map(|c| c.map(|v| v.to_string()).unwrap_or_default()),
            );
            writer.write_record(&record)?;
        }
        let bytes = writer.into_inner().map_err(|e| Error::Csv(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Csv(e.to_string()))
    }
}

/// A single observation from the long layout.
#[derive(Debug, Clone, PartialEq)]
pub struct LongRecord {
    pub month: Month,
    pub borough: String,
    pub count: f64,
}

fn csv_reader(bytes: &[u8]) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes)
}

fn parse_count(cell: &str, row: usize, column: usize) -> Result<f64> {
    let value: f64 = cell.parse().map_err(|_| Error::Parse {
        row,
        column,
        message: format!("{cell:?} is not a number"),
    })?;
    if !value.is_finite() {
        return Err(Error::Parse {
            row,
            column,
            message: format!("{cell:?} is not finite"),
        });
    }
    Ok(value)
}

/// Parses the wide layout. Rows keep file order; empty cells become `None`.
///
/// Row numbers in errors count data rows from 1; column numbers count from 1
/// including the month column.
pub fn parse_wide_csv(bytes: &[u8]) -> Result<RawTable> {
    let mut records = csv_reader(bytes).into_records();
    let header = match records.next() {
        Some(record) => record?,
        None => return Err(Error::Structure("missing header row".into())),
    };
    let first = header
        .get(0)
        .unwrap_or_default()
        .trim_start_matches('\u{feff}');
    if !first.eq_ignore_ascii_case("month") {
        return Err(Error::Structure(format!(
            "first header cell must be `month`, found {first:?}"
        )));
    }
    let boroughs: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    if boroughs.is_empty() {
        return Err(Error::Structure("header names no borough columns".into()));
    }

    let mut rows = Vec::new();
    for (i, record) in records.enumerate() {
        let record = record?;
        let row_no = i + 1;
        // A blank trailing line reads as one empty field.
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != header.len() {
            return Err(Error::Structure(format!(
                "row {row_no} has {} cells, header has {}",
                record.len(),
                header.len()
            )));
        }
        let label = record[0].to_string();
        let month = Month::parse_label(&label)?;
        let cells = record
            .iter()
            .enumerate()
            .skip(1)
            .map(|(col, cell)| {
                if cell.is_empty() {
                    Ok(None)
                } else {
                    parse_count(cell, row_no, col + 1).map(Some)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(RawRow {
            label,
            month,
            cells,
        });
    }
    Ok(RawTable {
        header: boroughs,
        rows,
    })
}

/// Parses the long layout (`month,borough,count`), rejecting duplicate keys.
pub fn parse_long_csv(bytes: &[u8]) -> Result<Vec<LongRecord>> {
    let mut records = csv_reader(bytes).into_records();
    let header = match records.next() {
        Some(record) => record?,
        None => return Err(Error::Structure("missing header row".into())),
    };
    let names: Vec<&str> = header.iter().collect();
    let expected = ["month", "borough", "count"];
    let normalized: Vec<String> = names
        .iter()
        .map(|n| n.trim_start_matches('\u{feff}').to_ascii_lowercase())
        .collect();
    if normalized != expected {
        return Err(Error::Structure(format!(
            "long layout needs columns month,borough,count; found {}",
            names.join(",")
        )));
    }

    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, record) in records.enumerate() {
        let record = record?;
        let row_no = i + 1;
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != 3 {
            return Err(Error::Structure(format!(
                "row {row_no} has {} cells, expected 3",
                record.len()
            )));
        }
        let month = Month::parse_label(&record[0])?;
        let borough = record[1].to_string();
        let count = parse_count(&record[2], row_no, 3)?;
        if !seen.insert((month, borough.clone())) {
            return Err(Error::Duplicate {
                month: month.iso(),
                borough,
            });
        }
        out.push(LongRecord {
            month,
            borough,
            count,
        });
    }
    Ok(out)
}

/// Pivots long records into a wide table spanning every month from the
/// earliest to the latest record. Boroughs keep first-appearance order.
pub fn pivot_long(records: &[LongRecord]) -> RawTable {
    let Some(first) = records.iter().map(|r| r.month).min() else {
        return RawTable::default();
    };
    let last = records.iter().map(|r| r.month).max().unwrap_or(first);

    let mut header: Vec<String> = Vec::new();
    let mut column: HashMap<&str, usize> = HashMap::new();
    for r in records {
        if !column.contains_key(r.borough.as_str()) {
            column.insert(&r.borough, header.len());
            header.push(r.borough.clone());
        }
    }

    let span = first.months_until(last) as usize + 1;
    let mut rows: Vec<RawRow> = (0..span)
        .map(|i| {
            let month = first.offset(i as i64);
            RawRow {
                label: month.iso(),
                month,
                cells: vec![None; header.len()],
            }
        })
        .collect();
    for r in records {
        let i = first.months_until(r.month) as usize;
        rows[i].cells[column[r.borough.as_str()]] = Some(r.count);
    }
    RawTable { header, rows }
}

/// Parses either layout, choosing by the header.
pub fn parse_any_csv(bytes: &[u8]) -> Result<RawTable> {
    let first_line = bytes.split(|b| *b == b'\n').next().unwrap_or_default();
    let first_line = String::from_utf8_lossy(first_line);
    let normalized: String = first_line
        .trim()
        .trim_start_matches('\u{feff}')
        .to_ascii_lowercase()
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    if normalized == "month,borough,count" {
        Ok(pivot_long(&parse_long_csv(bytes)?))
    } else {
        parse_wide_csv(bytes)
    }
}

/// Extracts one borough as a contiguous series.
///
/// Leading and trailing missing months are dropped; interior gaps are filled
/// by linear interpolation between the nearest observed neighbours.
pub fn clean_series(raw: &RawTable, borough: &str) -> Result<MonthlySeries> {
    let col = raw
        .column_index(borough)
        .ok_or_else(|| Error::UnknownBorough(vec![borough.to_string()]))?;

    for pair in raw.rows.windows(2) {
        if pair[0].month.succ() != pair[1].month {
            return Err(Error::Structure(format!(
                "months are not consecutive: {} followed by {}",
                pair[0].label, pair[1].label
            )));
        }
    }

    let column: Vec<Option<f64>> = raw.rows.iter().map(|r| r.cells[col]).collect();
    let observed: Vec<usize> = column
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.map(|_| i))
        .collect();
    if observed.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "borough {borough:?} has {} observed month(s), need at least 2",
            observed.len()
        )));
    }

    let first = observed[0];
    let last = observed[observed.len() - 1];
    let mut values = Vec::with_capacity(last - first + 1);
    for anchors in observed.windows(2) {
        let (lo, hi) = (anchors[0], anchors[1]);
        let (a, b) = (column[lo].unwrap_or(0.0), column[hi].unwrap_or(0.0));
        let span = (hi - lo) as f64;
        for i in lo..hi {
            let w = (i - lo) as f64 / span;
            values.push(a + (b - a) * w);
        }
    }
    values.push(column[last].unwrap_or(0.0));

    MonthlySeries::new(borough, raw.rows[first].month, values)
}

/// Cleans each requested borough, in the order given.
pub fn select_boroughs<S: AsRef<str>>(raw: &RawTable, labels: &[S]) -> Result<Vec<MonthlySeries>> {
    let missing: Vec<String> = labels
        .iter()
        .map(AsRef::as_ref)
        .filter(|l| raw.column_index(l).is_none())
        .map(str::to_string)
        .collect();
    if !missing.is_empty() {
        return Err(Error::UnknownBorough(missing));
    }
    labels
        .iter()
        .map(|l| clean_series(raw, l.as_ref()))
        .collect()
}
