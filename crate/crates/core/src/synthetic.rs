//! Seeded demonstration dataset in the canonical input formats.
//!
//! The generated fleet has a known seasonal structure: outside winter the
//! mid-Atlantic fossil fleet tracks load more steeply than the western one,
//! while in winter mid-Atlantic gas prices spike, western fossil plants run
//! harder and the slope ordering flips. Running the pipeline on it should
//! recover exactly that pattern.

use std::fs;
use std::io;
use std::path::Path;

use chrono::NaiveDate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ingest::{
    write_capacity, write_gas_prices, write_generation, write_hourly_load, CapacityRecord, GasPriceRecord,
    GenerationRecord, HourlyLoadRecord,
};
use crate::regions::{default_config, hours_in_month, Fuel, Region, Season, StateCode};

#[derive(Debug, Clone)]
pub struct SyntheticOptions {
    pub seed: u64,
    /// Probability that any single plant-fuel-month generation or capacity
    /// row is left out.
    pub missing_rate: f64,
}

impl Default for SyntheticOptions {
    fn default() -> Self {
        SyntheticOptions {
            seed: 2015,
            missing_rate: 0.0,
        }
    }
}

/// Canonical CSV text for the four input tables.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDataset {
    pub generation: String,
    pub capacity: String,
    pub gas_prices: String,
    pub hourly_load: String,
}

struct Plant {
    id: u32,
    state: &'static str,
    region: Region,
    units: Vec<(&'static str, Fuel, f64)>,
}

/// Fossil capacity factor as intercept + slope x (load - 100 GW) / 10 GW.
fn fossil_response(region: Region, season: Season) -> (f64, f64) {
    match (region, season) {
        (Region::Western, Season::NonWinter) => (0.45, 0.05),
        (Region::MidAtlantic, Season::NonWinter) => (0.45, 0.09),
        (Region::Western, Season::Winter) => (0.62, 0.08),
        (Region::MidAtlantic, Season::Winter) => (0.42, 0.03),
        _ => (0.40, 0.04),
    }
}

/// Typical peak-hour load by calendar month, MW.
fn seasonal_load(month: u32) -> f64 {
    [
        112_000.0, 108_000.0, 95_000.0, 88_000.0, 92_000.0, 110_000.0, 125_000.0, 122_000.0, 105_000.0,
        90_000.0, 94_000.0, 106_000.0,
    ][month as usize - 1]
}

fn fleet(rng: &mut ChaCha8Rng) -> Vec<Plant> {
    let mut plants = Vec::new();
    let mut next_id = 1000;
    let layout: [(Region, &[&'static str]); 3] = [
        (Region::Western, &["IL", "IN", "MI", "OH", "KY", "WV"]),
        (Region::MidAtlantic, &["PA", "NJ", "MD", "DE"]),
        (Region::Southern, &["VA", "NC"]),
    ];
    for (region, states) in layout {
        let count = if region == Region::Southern { 3 } else { 12 };
        for i in 0..count {
            next_id += 1 + rng.gen_range(0..7);
            let state = states[i % states.len()];
            let units = match i % 6 {
                0 | 1 => vec![
                    ("BIT", Fuel::Coal, rng.gen_range(300.0..700.0f64).round()),
                    ("SUB", Fuel::Coal, rng.gen_range(200.0..600.0f64).round()),
                ],
                2 => vec![
                    ("BIT", Fuel::Coal, rng.gen_range(400.0..900.0f64).round()),
                    ("NG", Fuel::NaturalGas, rng.gen_range(100.0..200.0f64).round()),
                ],
                3 | 4 => vec![("NG", Fuel::NaturalGas, rng.gen_range(300.0..1100.0f64).round())],
                _ if i == 5 => vec![("NUC", Fuel::Nuclear, rng.gen_range(1000.0..1800.0f64).round())],
                _ => vec![("NG", Fuel::NaturalGas, rng.gen_range(60.0..180.0f64).round())],
            };
            plants.push(Plant {
                id: next_id,
                state,
                region,
                units,
            });
        }
        // a wind farm per region
        next_id += 3;
        plants.push(Plant {
            id: next_id,
            state: states[0],
            region,
            units: vec![("WND", Fuel::Other, rng.gen_range(220.0..400.0f64).round())],
        });
    }
    plants
}

pub fn generate(options: &SyntheticOptions) -> SyntheticDataset {
    let config = default_config();
    let window = config.study_window();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let plants = fleet(&mut rng);

    let mut loads = Vec::new();
    let mut hourly = Vec::new();
    for month in window.months() {
        let year_shift = match month.year() {
            2015 => -2_000.0,
            2016 => 4_000.0,
            _ => 0.0,
        };
        let level = seasonal_load(month.month()) + year_shift + rng.gen_range(-3_000.0..3_000.0);
        loads.push((month, level));
        for day in 1..=month.days() {
            let date = NaiveDate::from_ymd_opt(month.year(), month.month(), day).expect("valid day");
            let daily = rng.gen_range(-0.04..0.04);
            for hour in 0..24u8 {
                let shape = if config.peak_hours().contains(hour) { 1.0 } else { 0.72 };
                let load = (level * shape * (1.0 + daily + rng.gen_range(-0.01..0.01))).round();
                hourly.push(HourlyLoadRecord { date, hour, load });
            }
        }
    }

    let mut generation = Vec::new();
    let mut capacity = Vec::new();
    for (month, level) in &loads {
        let season = config.season_of(*month);
        let hours = f64::from(hours_in_month(*month));
        let x = (level - 100_000.0) / 10_000.0;
        for plant in &plants {
            let state: StateCode = plant.state.parse().expect("fixture state");
            let (a, b) = fossil_response(plant.region, season);
            for (_, fuel, mw) in &plant.units {
                let cf: f64 = match fuel {
                    Fuel::Nuclear => 0.93 + rng.gen_range(-0.03..0.03),
                    Fuel::Other => 0.30 + rng.gen_range(-0.08..0.08),
                    Fuel::Coal => a + 0.04 + b * x + rng.gen_range(-0.02..0.02),
                    Fuel::NaturalGas => a - 0.04 + b * x + rng.gen_range(-0.02..0.02),
                };
                let cf = cf.clamp(0.0, 1.0);
                if !rng.gen_bool(options.missing_rate) {
                    generation.push(GenerationRecord {
                        month: *month,
                        plant_id: plant.id,
                        state,
                        fuel: *fuel,
                        net_generation: (cf * mw * hours).round(),
                    });
                }
                if !rng.gen_bool(options.missing_rate) {
                    capacity.push(CapacityRecord {
                        month: *month,
                        plant_id: plant.id,
                        state,
                        fuel: *fuel,
                        capacity: *mw,
                    });
                }
            }
        }
    }

    let mut prices = Vec::new();
    for (month, _) in &loads {
        let winter = config.season_of(*month) == Season::Winter;
        for (state, base, spike) in [
            ("IL", 3.3, 0.4),
            ("MI", 3.1, 0.3),
            ("OH", 3.0, 0.4),
            ("PA", 2.4, 2.2),
            ("NJ", 2.7, 3.0),
            ("NY", 2.9, 4.0),
            ("MD", 3.2, 1.5),
        ] {
            let price: f64 = base + if winter { spike } else { 0.0 } + rng.gen_range(-0.25..0.25);
            prices.push(GasPriceRecord {
                month: *month,
                state: state.parse().expect("fixture state"),
                price: (price * 100.0).round() / 100.0,
            });
        }
    }

    SyntheticDataset {
        generation: raw_fuel_codes(&write_generation(&generation), &plants),
        capacity: raw_fuel_codes(&write_capacity(&capacity), &plants),
        gas_prices: write_gas_prices(&prices),
        hourly_load: write_hourly_load(&hourly),
    }
}

/// Swap normalized fuel labels back to raw codes so the fixture exercises
/// fuel normalization. Units sharing a bucket keep the first unit's code.
fn raw_fuel_codes(table: &str, plants: &[Plant]) -> String {
    let mut out = String::with_capacity(table.len());
    for (i, line) in table.lines().enumerate() {
        if i > 0 {
            let fields: Vec<&str> = line.split(',').collect();
            let id: u32 = fields[1].parse().expect("plant id");
            let plant = plants.iter().find(|p| p.id == id).expect("known plant");
            let fuel: Fuel = fields[3].parse().expect("fuel label");
            let code = plant
                .units
                .iter()
                .find(|(_, f, _)| *f == fuel)
                .map_or(fields[3], |(c, _, _)| c);
            out.push_str(&[fields[0], fields[1], fields[2], code, fields[4]].join(","));
        } else {
            out.push_str(line);
        }
        out.push('\n');
    }
    out
}

impl SyntheticDataset {
    /// Write the four tables plus a `manifest.toml` pointing at them.
    pub fn write_to(&self, dir: &Path) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("generation.csv"), &self.generation)?;
        fs::write(dir.join("capacity.csv"), &self.capacity)?;
        fs::write(dir.join("gas_prices.csv"), &self.gas_prices)?;
        fs::write(dir.join("hourly_load.csv"), &self.hourly_load)?;
        fs::write(
            dir.join("manifest.toml"),
            "generation = \"generation.csv\"\ncapacity = \"capacity.csv\"\ngas_prices = \"gas_prices.csv\"\nhourly_load = \"hourly_load.csv\"\nout = \"out\"\n",
        )?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{parse_capacity, parse_gas_prices, parse_generation, parse_hourly_load};

    #[test]
    fn deterministic_and_parseable() {
        let a = generate(&SyntheticOptions::default());
        assert_eq!(a, generate(&SyntheticOptions::default()));
        assert_ne!(a, generate(&SyntheticOptions { seed: 7, ..Default::default() }));

        let config = default_config();
        let gen = parse_generation(a.generation.as_bytes(), &config).unwrap();
        let cap = parse_capacity(a.capacity.as_bytes(), &config).unwrap();
        let gas = parse_gas_prices(a.gas_prices.as_bytes()).unwrap();
        let load = parse_hourly_load(a.hourly_load.as_bytes()).unwrap();
        assert!(gen.warnings.is_empty() && cap.warnings.is_empty());
        assert!(gas.warnings.is_empty() && load.warnings.is_empty());
        // 30 months of full days
        assert_eq!(load.records.len(), (365 + 366 + 184) * 24);
        assert!(a.generation.contains(",BIT,") && a.capacity.contains(",NUC,"));
    }

    #[test]
    fn missing_rate_drops_rows() {
        let full = generate(&SyntheticOptions::default());
        let sparse = generate(&SyntheticOptions {
            missing_rate: 0.1,
            ..Default::default()
        });
        assert!(sparse.generation.lines().count() < full.generation.lines().count());
    }
}
