//! Monthly series: regional capacity factor, peak-hour system load and
//! regional gas price.
//!
//! Every computation walks its inputs in a fixed order (month, then plant id,
//! then fuel, or the configured state order), so results are bit-identical
//! regardless of how the input records were ordered.

mod gas;
mod load;
mod rcf;

use std::fmt;

use serde::Serialize;

use crate::regions::{MonthWindow, Region, YearMonth};

pub use gas::compute_regional_gas_price;
pub use load::compute_monthly_load;
pub use rcf::{compute_rcf, RcfQuery, RCF_SANE_RANGE};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum MetricsError {
    #[error("selection for {0} is empty")]
    EmptySelection(Region),
    #[error("query is for {query} but the selection is for {selection}")]
    RegionMismatch { query: Region, selection: Region },
    #[error("window {window} is not inside the study window {study}")]
    WindowOutsideStudy { window: MonthWindow, study: MonthWindow },
    #[error("no gas-price states configured for {0}")]
    NoGasStates(Region),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    Dimensionless,
    #[serde(rename = "MW")]
    Mw,
    #[serde(rename = "USD_per_MMBtu")]
    UsdPerMmbtu,
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unit::Dimensionless => "dimensionless",
            Unit::Mw => "MW",
            Unit::UsdPerMmbtu => "USD/MMBtu",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesPoint {
    pub month: YearMonth,
    pub value: f64,
    /// Number of records that contributed to `value`.
    pub coverage: usize,
}

/// A data-quality note; `month` is `None` for series-wide notes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub month: Option<YearMonth>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.month {
            Some(m) => write!(f, "{m}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonthlySeries {
    pub label: String,
    pub unit: Unit,
    /// Strictly increasing months.
    pub points: Vec<SeriesPoint>,
    pub diagnostics: Vec<Diagnostic>,
}

impl MonthlySeries {
    pub fn new(label: impl Into<String>, unit: Unit) -> Self {
        MonthlySeries {
            label: label.into(),
            unit,
            points: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn get(&self, month: YearMonth) -> Option<f64> {
        self.points
            .binary_search_by_key(&month, |p| p.month)
            .ok()
            .map(|i| self.points[i].value)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.value)
    }

    pub fn warnings_for(&self, month: YearMonth) -> usize {
        self.diagnostics.iter().filter(|d| d.month == Some(month)).count()
    }

    pub(crate) fn push(&mut self, month: YearMonth, value: f64, coverage: usize) {
        debug_assert!(self.points.last().is_none_or(|p| p.month < month));
        self.points.push(SeriesPoint {
            month,
            value,
            coverage,
        });
    }

    pub(crate) fn note(&mut self, month: Option<YearMonth>, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic {
            month,
            message: message.into(),
        });
    }

    /// `month,value,coverage_count,warnings_count` at full precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("month,value,coverage_count,warnings_count\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{}\n",
                p.month,
                p.value,
                p.coverage,
                self.warnings_for(p.month)
            ));
        }
        out
    }
}
