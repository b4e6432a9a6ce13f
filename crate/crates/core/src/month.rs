//! Calendar months and the label formats used by the input and report files.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

const ABBREVIATIONS: [&str; 12] = [
    "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec",
];

/// A year and month-of-year (1-12).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Month {
    year: i32,
    month: u32,
}

impl Month {
    pub fn new(year: i32, month: u32) -> Result<Self, Error> {
        if !(1..=12).contains(&month) {
            return Err(Error::MonthFormat(format!("{year}-{month}")));
        }
        Ok(Month { year, month })
    }

    pub fn year(self) -> i32 {
        self.year
    }

    /// Month of year, 1 = January.
    pub fn month(self) -> u32 {
        self.month
    }

    fn ordinal(self) -> i64 {
        self.year as i64 * 12 + (self.month as i64 - 1)
    }

    fn from_ordinal(ord: i64) -> Self {
        Month {
            year: ord.div_euclid(12) as i32,
            month: ord.rem_euclid(12) as u32 + 1,
        }
    }

    /// The month `n` months after this one (negative `n` goes back).
    pub fn offset(self, n: i64) -> Self {
        Month::from_ordinal(self.ordinal() + n)
    }

    pub fn succ(self) -> Self {
        self.offset(1)
    }

    /// Number of months from `self` to `other` (positive when `other` is later).
    pub fn months_until(self, other: Month) -> i64 {
        other.ordinal() - self.ordinal()
    }

    pub fn abbreviation(self) -> &'static str {
        ABBREVIATIONS[(self.month - 1) as usize]
    }

    /// `YYYY-MM`.
    pub fn iso(self) -> String {
        format!("{:04}-{:02}", self.year, self.month)
    }

    /// `MMM-YY`, the row label style of forecast tables (e.g. `Jan-17`).
    pub fn short_label(self) -> String {
        format!("{}-{:02}", self.abbreviation(), self.year.rem_euclid(100))
    }

    /// Parses `YY-MMM` (`12-Jan`, century 2000), `MMM-YY` (`Jan-17`) or `YYYY-MM`.
    pub fn parse_label(label: &str) -> Result<Self, Error> {
        let bad = || Error::MonthFormat(label.to_string());
        let trimmed = label.trim();
        let (left, right) = trimmed.split_once('-').ok_or_else(bad)?;

        if let Some(m) = month_from_abbreviation(right) {
            let yy = parse_two_digit_year(left).ok_or_else(bad)?;
            return Month::new(2000 + yy, m).map_err(|_| bad());
        }
        if let Some(m) = month_from_abbreviation(left) {
            let yy = parse_two_digit_year(right).ok_or_else(bad)?;
            return Month::new(2000 + yy, m).map_err(|_| bad());
        }
        if left.len() == 4 && right.len() == 2 && is_digits(left) && is_digits(right) {
            let year: i32 = left.parse().map_err(|_| bad())?;
            let month: u32 = right.parse().map_err(|_| bad())?;
            return Month::new(year, month).map_err(|_| bad());
        }
        Err(bad())
    }
}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn parse_two_digit_year(s: &str) -> Option<i32> {
    if s.len() == 2 && is_digits(s) {
        s.parse().ok()
    } else {
        None
    }
}

fn month_from_abbreviation(s: &str) -> Option<u32> {
    ABBREVIATIONS
        .iter()
        .position(|abbr| abbr.eq_ignore_ascii_case(s))
        .map(|i| i as u32 + 1)
}

impl fmt::Display for Month {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.iso())
    }
}

impl FromStr for Month {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Month::parse_label(s)
    }
}
