//! Readers for the four canonical input tables.
//!
//! All tables are UTF-8, comma-delimited, with a header row. Lines starting
//! with `#` are comments. Columns are located by header name, so extra
//! columns and reordering are tolerated. A row that cannot be parsed, or that
//! breaks a record invariant, is dropped and reported as an [`IngestWarning`];
//! only structural problems (no header, missing column, duplicate keys in
//! non-additive tables) abort the parse.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;

use chrono::NaiveDate;

use crate::regions::{Fuel, RegionConfig, StateCode, YearMonth};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dataset {
    Generation,
    Capacity,
    GasPrices,
    HourlyLoad,
}

impl Dataset {
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Dataset::Generation => &["month", "plant_id", "state", "fuel_raw", "net_generation_mwh"],
            Dataset::Capacity => &["month", "plant_id", "state", "fuel_raw", "capacity_mw"],
            Dataset::GasPrices => &["month", "state", "price_usd_per_mmbtu"],
            Dataset::HourlyLoad => &["date", "hour", "load_mw"],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Dataset::Generation => "generation",
            Dataset::Capacity => "capacity",
            Dataset::GasPrices => "gas_prices",
            Dataset::HourlyLoad => "hourly_load",
        }
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("{dataset}: file is empty")]
    Empty { dataset: Dataset },
    #[error("{dataset}: header is missing column {column:?}")]
    MissingColumn {
        dataset: Dataset,
        column: &'static str,
    },
    #[error("{dataset}: duplicate key {key} on line {line} (first seen on line {first_line})")]
    DuplicateKey {
        dataset: Dataset,
        key: String,
        line: u64,
        first_line: u64,
    },
    #[error("{dataset}: {source}")]
    Read {
        dataset: Dataset,
        #[source]
        source: csv::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestWarning {
    pub dataset: Dataset,
    pub line: u64,
    pub message: String,
}

impl fmt::Display for IngestWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} line {}: {}", self.dataset, self.line, self.message)
    }
}

/// Records plus the bookkeeping needed to account for every data row:
/// `warnings.len() + rows_accepted == rows_read`.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed<T> {
    pub records: Vec<T>,
    pub warnings: Vec<IngestWarning>,
    pub rows_read: usize,
    pub rows_accepted: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord {
    pub month: YearMonth,
    pub plant_id: u32,
    pub state: StateCode,
    pub fuel: Fuel,
    /// MWh; negative values are legitimate (pumped storage, station service).
    pub net_generation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityRecord {
    pub month: YearMonth,
    pub plant_id: u32,
    pub state: StateCode,
    pub fuel: Fuel,
    /// MW, never negative.
    pub capacity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GasPriceRecord {
    pub month: YearMonth,
    pub state: StateCode,
    /// USD/MMBtu, strictly positive.
    pub price: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HourlyLoadRecord {
    pub date: NaiveDate,
    /// Hour-beginning, 0..=23.
    pub hour: u8,
    pub load: f64,
}

struct Table {
    dataset: Dataset,
    reader: csv::Reader<std::io::Cursor<Vec<u8>>>,
    line_starts: Vec<u64>,
    index: Vec<usize>,
}

struct Row {
    line: u64,
    fields: Vec<String>,
}

impl Table {
    /// Comment lines are overwritten with spaces rather than removed so that
    /// byte offsets, and therefore reported line numbers, stay physical.
    fn open<R: Read>(dataset: Dataset, mut input: R) -> Result<Self, IngestError> {
        let mut bytes = Vec::new();
        input
            .read_to_end(&mut bytes)
            .map_err(|e| IngestError::Read {
                dataset,
                source: e.into(),
            })?;
        let mut line_starts = vec![0u64];
        let mut start = 0;
        while start < bytes.len() {
            let end = bytes[start..]
                .iter()
                .position(|b| *b == b'\n')
                .map_or(bytes.len(), |i| start + i);
            let line = &mut bytes[start..end];
            if line.iter().find(|b| !b.is_ascii_whitespace()) == Some(&b'#') {
                line.fill(b' ');
            }
            start = end + 1;
            if start <= bytes.len() {
                line_starts.push(start as u64);
            }
        }

        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(std::io::Cursor::new(bytes));
        let mut headers = csv::StringRecord::new();
        loop {
            match reader.read_record(&mut headers) {
                Ok(true) if headers.iter().all(str::is_empty) => continue,
                Ok(true) => break,
                Ok(false) => return Err(IngestError::Empty { dataset }),
                Err(source) => return Err(IngestError::Read { dataset, source }),
            }
        }
        let index = dataset
            .columns()
            .iter()
            .map(|column| {
                headers
                    .iter()
                    .position(|h| h.eq_ignore_ascii_case(column))
                    .ok_or(IngestError::MissingColumn { dataset, column })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Table {
            dataset,
            reader,
            line_starts,
            index,
        })
    }

    fn line_of(line_starts: &[u64], pos: Option<&csv::Position>) -> u64 {
        pos.map_or(0, |p| line_starts.partition_point(|s| *s <= p.byte()) as u64)
    }

    /// Data rows in file order. Rows too short to hold every schema column,
    /// and rows the CSV reader rejects, come back as `Err(warning)`.
    fn rows(&mut self) -> impl Iterator<Item = Result<Result<Row, IngestWarning>, IngestError>> + '_ {
        let dataset = self.dataset;
        let index = self.index.clone();
        let line_starts = &self.line_starts;
        self.reader.records().filter_map(move |result| match result {
            Ok(record) => {
                if record.iter().all(str::is_empty) {
                    return None;
                }
                let line = Self::line_of(line_starts, record.position());
                let fields: Option<Vec<String>> = index
                    .iter()
                    .map(|&i| record.get(i).map(str::to_string))
                    .collect();
                Some(Ok(match fields {
                    Some(fields) => Ok(Row { line, fields }),
                    None => Err(IngestWarning {
                        dataset,
                        line,
                        message: format!(
                            "expected {} fields, found {}",
                            index.iter().max().map_or(0, |m| m + 1),
                            record.len()
                        ),
                    }),
                }))
            }
            Err(err) => match err.kind() {
                csv::ErrorKind::Utf8 { pos, .. } => Some(Ok(Err(IngestWarning {
                    dataset,
                    line: Self::line_of(line_starts, pos.as_ref()),
                    message: "row is not valid UTF-8".to_string(),
                }))),
                _ => Some(Err(IngestError::Read {
                    dataset,
                    source: err,
                })),
            },
        })
    }
}

fn field<T, F>(row: &Row, col: usize, name: &str, parse: F) -> Result<T, String>
where
    F: FnOnce(&str) -> Option<T>,
{
    let raw = row.fields[col].as_str();
    parse(raw).ok_or_else(|| format!("unparseable {name} {raw:?}"))
}

fn parse_month(s: &str) -> Option<YearMonth> {
    s.parse().ok()
}

fn parse_plant(s: &str) -> Option<u32> {
    s.parse::<u32>().ok().filter(|id| *id > 0)
}

fn parse_state(s: &str) -> Option<StateCode> {
    s.parse().ok()
}

fn parse_number(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Accepted rows tagged with their line number, the warnings, and rows read.
type Driven<T> = (Vec<(u64, T)>, Vec<IngestWarning>, usize);

/// Shared driver: parse every row, turning row-level failures into warnings.
fn drive<T, F>(table: &mut Table, mut parse_row: F) -> Result<Driven<T>, IngestError>
where
    F: FnMut(&Row) -> Result<T, String>,
{
    let dataset = table.dataset;
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    let mut read = 0;
    for row in table.rows() {
        read += 1;
        match row? {
            Ok(row) => match parse_row(&row) {
                Ok(value) => rows.push((row.line, value)),
                Err(message) => warnings.push(IngestWarning {
                    dataset,
                    line: row.line,
                    message,
                }),
            },
            Err(warning) => warnings.push(warning),
        }
    }
    Ok((rows, warnings, read))
}

type PlantKey = (YearMonth, u32, Fuel);

/// Sum rows sharing a (month, plant, fuel) key. A plant whose rows disagree
/// on state keeps the first state seen and the later row is rejected.
fn aggregate_plant_rows(
    dataset: Dataset,
    rows: Vec<(u64, (PlantKey, StateCode, f64))>,
    warnings: &mut Vec<IngestWarning>,
) -> (BTreeMap<PlantKey, (StateCode, f64)>, usize) {
    let mut totals: BTreeMap<PlantKey, (StateCode, f64)> = BTreeMap::new();
    let mut accepted = 0;
    for (line, (key, state, value)) in rows {
        match totals.get_mut(&key) {
            Some((seen, total)) if *seen == state => {
                *total += value;
                accepted += 1;
            }
            Some((seen, _)) => warnings.push(IngestWarning {
                dataset,
                line,
                message: format!(
                    "plant {} listed in {state} but earlier rows say {seen}",
                    key.1
                ),
            }),
            None => {
                totals.insert(key, (state, value));
                accepted += 1;
            }
        }
    }
    (totals, accepted)
}

fn plant_row(
    row: &Row,
    config: &RegionConfig,
    value_name: &str,
    check: impl FnOnce(f64) -> Result<(), String>,
) -> Result<(PlantKey, StateCode, f64), String> {
    let month = field(row, 0, "month", parse_month)?;
    if !config.study_window().contains(month) {
        return Err(format!(
            "month {month} outside study window {}",
            config.study_window()
        ));
    }
    let plant_id = field(row, 1, "plant_id", parse_plant)?;
    let state = field(row, 2, "state", parse_state)?;
    let fuel = config.normalize_fuel(&row.fields[3]);
    let value = field(row, 4, value_name, parse_number)?;
    check(value)?;
    Ok(((month, plant_id, fuel), state, value))
}

fn sort_warnings(warnings: &mut [IngestWarning]) {
    warnings.sort_by_key(|w| w.line);
}

/// Parse the generation table, summing duplicate plant-fuel-month rows.
pub fn parse_generation<R: Read>(
    input: R,
    config: &RegionConfig,
) -> Result<Parsed<GenerationRecord>, IngestError> {
    let dataset = Dataset::Generation;
    let mut table = Table::open(dataset, input)?;
    let (rows, mut warnings, rows_read) =
        drive(&mut table, |row| plant_row(row, config, "net_generation_mwh", |_| Ok(())))?;
    let (totals, rows_accepted) = aggregate_plant_rows(dataset, rows, &mut warnings);
    sort_warnings(&mut warnings);
    let records = totals
        .into_iter()
        .map(|((month, plant_id, fuel), (state, net_generation))| GenerationRecord {
            month,
            plant_id,
            state,
            fuel,
            net_generation,
        })
        .collect();
    Ok(Parsed {
        records,
        warnings,
        rows_read,
        rows_accepted,
    })
}

/// Parse the capacity table, summing unit-level rows to plant-fuel-month.
pub fn parse_capacity<R: Read>(
    input: R,
    config: &RegionConfig,
) -> Result<Parsed<CapacityRecord>, IngestError> {
    let dataset = Dataset::Capacity;
    let mut table = Table::open(dataset, input)?;
    let (rows, mut warnings, rows_read) = drive(&mut table, |row| {
        plant_row(row, config, "capacity_mw", |v| {
            if v < 0.0 {
                Err(format!("negative capacity {v}"))
            } else {
                Ok(())
            }
        })
    })?;
    let (totals, rows_accepted) = aggregate_plant_rows(dataset, rows, &mut warnings);
    sort_warnings(&mut warnings);
    let records = totals
        .into_iter()
        .map(|((month, plant_id, fuel), (state, capacity))| CapacityRecord {
            month,
            plant_id,
            state,
            fuel,
            capacity,
        })
        .collect();
    Ok(Parsed {
        records,
        warnings,
        rows_read,
        rows_accepted,
    })
}

/// Parse state-level gas prices. Prices are not additive, so a repeated
/// (month, state) key is fatal.
pub fn parse_gas_prices<R: Read>(input: R) -> Result<Parsed<GasPriceRecord>, IngestError> {
    let dataset = Dataset::GasPrices;
    let mut table = Table::open(dataset, input)?;
    let (rows, mut warnings, rows_read) = drive(&mut table, |row| {
        let month = field(row, 0, "month", parse_month)?;
        let state = field(row, 1, "state", parse_state)?;
        let price = field(row, 2, "price_usd_per_mmbtu", parse_number)?;
        if price <= 0.0 {
            return Err(format!("non-positive price {price}"));
        }
        Ok(GasPriceRecord {
            month,
            state,
            price,
        })
    })?;
    let mut keyed: BTreeMap<(YearMonth, StateCode), (u64, GasPriceRecord)> = BTreeMap::new();
    let rows_accepted = rows.len();
    for (line, record) in rows {
        let key = (record.month, record.state);
        if let Some((first_line, _)) = keyed.get(&key) {
            return Err(IngestError::DuplicateKey {
                dataset,
                key: format!("({}, {})", key.0, key.1),
                line,
                first_line: *first_line,
            });
        }
        keyed.insert(key, (line, record));
    }
    sort_warnings(&mut warnings);
    Ok(Parsed {
        records: keyed.into_values().map(|(_, r)| r).collect(),
        warnings,
        rows_read,
        rows_accepted,
    })
}

/// Parse the hourly system load table; a repeated (date, hour) is fatal.
pub fn parse_hourly_load<R: Read>(input: R) -> Result<Parsed<HourlyLoadRecord>, IngestError> {
    let dataset = Dataset::HourlyLoad;
    let mut table = Table::open(dataset, input)?;
    let (rows, mut warnings, rows_read) = drive(&mut table, |row| {
        let date = field(row, 0, "date", |s| NaiveDate::parse_from_str(s, "%Y-%m-%d").ok())?;
        let hour = field(row, 1, "hour", |s| s.parse::<i64>().ok())?;
        if !(0..=23).contains(&hour) {
            return Err(format!("hour {hour} outside 0..=23"));
        }
        let load = field(row, 2, "load_mw", parse_number)?;
        if load < 0.0 {
            return Err(format!("negative load {load}"));
        }
        Ok(HourlyLoadRecord {
            date,
            hour: hour as u8,
            load,
        })
    })?;
    let mut keyed: BTreeMap<(NaiveDate, u8), (u64, HourlyLoadRecord)> = BTreeMap::new();
    let rows_accepted = rows.len();
    for (line, record) in rows {
        let key = (record.date, record.hour);
        if let Some((first_line, _)) = keyed.get(&key) {
            return Err(IngestError::DuplicateKey {
                dataset,
                key: format!("({}, {})", key.0, key.1),
                line,
                first_line: *first_line,
            });
        }
        keyed.insert(key, (line, record));
    }
    sort_warnings(&mut warnings);
    Ok(Parsed {
        records: keyed.into_values().map(|(_, r)| r).collect(),
        warnings,
        rows_read,
        rows_accepted,
    })
}

fn write_table<I>(dataset: Dataset, rows: I) -> String
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(dataset.columns()).expect("in-memory write");
    for row in rows {
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf8 output")
}

/// Canonical text for generation records; fuels are written as their
/// normalized labels, which re-parse to the same bucket.
pub fn write_generation(records: &[GenerationRecord]) -> String {
    write_table(
        Dataset::Generation,
        records.iter().map(|r| {
            vec![
                r.month.to_string(),
                r.plant_id.to_string(),
                r.state.to_string(),
                r.fuel.to_string(),
                r.net_generation.to_string(),
            ]
        }),
    )
}

pub fn write_capacity(records: &[CapacityRecord]) -> String {
    write_table(
        Dataset::Capacity,
        records.iter().map(|r| {
            vec![
                r.month.to_string(),
                r.plant_id.to_string(),
                r.state.to_string(),
                r.fuel.to_string(),
                r.capacity.to_string(),
            ]
        }),
    )
}

pub fn write_gas_prices(records: &[GasPriceRecord]) -> String {
    write_table(
        Dataset::GasPrices,
        records
            .iter()
            .map(|r| vec![r.month.to_string(), r.state.to_string(), r.price.to_string()]),
    )
}

pub fn write_hourly_load(records: &[HourlyLoadRecord]) -> String {
    write_table(
        Dataset::HourlyLoad,
        records.iter().map(|r| {
            vec![
                r.date.format("%Y-%m-%d").to_string(),
                r.hour.to_string(),
                r.load.to_string(),
            ]
        }),
    )
}
