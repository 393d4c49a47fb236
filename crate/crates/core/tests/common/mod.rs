//! Random fleets and brute-force oracles shared by the integration suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use chrono::{Datelike, NaiveDate};
use rand::seq::SliceRandom;
use rand::Rng;

use rcf::ingest::{CapacityRecord, GenerationRecord};
use rcf::regions::{Fuel, Region, RegionConfig, StateCode, YearMonth};

pub const STATES: [&str; 8] = ["OH", "IL", "WV", "PA", "NJ", "MD", "VA", "CA"];

#[derive(Debug, Clone)]
pub struct Fleet {
    pub months: Vec<YearMonth>,
    pub generation: Vec<GenerationRecord>,
    pub capacity: Vec<CapacityRecord>,
}

pub fn ym(s: &str) -> YearMonth {
    s.parse().unwrap()
}

/// Up to `max_plants` plants over up to `max_months` consecutive months of
/// the default study window, with roughly a fifth of plant-fuel-months
/// missing generation or capacity.
pub fn random_fleet(rng: &mut impl Rng, max_plants: usize, max_months: usize) -> Fleet {
    let mut start = ym("2015-07");
    for _ in 0..rng.gen_range(0..24) {
        start = start.succ();
    }
    let mut months = vec![start];
    for _ in 1..rng.gen_range(1..=max_months) {
        months.push(months.last().unwrap().succ());
    }

    let mut ids: Vec<u32> = (1..=60).collect();
    ids.shuffle(rng);
    let mut generation = Vec::new();
    let mut capacity = Vec::new();
    for &plant_id in ids.iter().take(rng.gen_range(1..=max_plants)) {
        let state: StateCode = STATES[rng.gen_range(0..STATES.len())].parse().unwrap();
        let fuels: Vec<Fuel> = Fuel::ALL.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let fuels = if fuels.is_empty() { vec![Fuel::Coal] } else { fuels };
        let sizes: Vec<f64> = fuels.iter().map(|_| rng.gen_range(20.0..900.0)).collect();
        for month in &months {
            for (fuel, size) in fuels.iter().zip(&sizes) {
                let mw = if rng.gen_bool(0.05) { 0.0 } else { *size };
                if !rng.gen_bool(0.2) {
                    capacity.push(CapacityRecord {
                        month: *month,
                        plant_id,
                        state,
                        fuel: *fuel,
                        capacity: mw,
                    });
                }
                if !rng.gen_bool(0.2) {
                    let cf: f64 = if rng.gen_bool(0.05) { 0.0 } else { rng.gen_range(0.0..1.0) };
                    generation.push(GenerationRecord {
                        month: *month,
                        plant_id,
                        state,
                        fuel: *fuel,
                        net_generation: (cf * mw.max(*size) * 720.0).round() + rng.gen_range(0.0..1.0),
                    });
                }
            }
        }
    }
    Fleet {
        months,
        generation,
        capacity,
    }
}

/// Hours in a month from calendar dates alone.
pub fn oracle_hours(month: YearMonth) -> f64 {
    let first = NaiveDate::from_ymd_opt(month.year(), month.month(), 1).unwrap();
    let next = if month.month() == 12 {
        NaiveDate::from_ymd_opt(month.year() + 1, 1, 1).unwrap()
    } else {
        NaiveDate::from_ymd_opt(month.year(), month.month() + 1, 1).unwrap()
    };
    assert_eq!(first.month(), month.month());
    ((next - first).num_days() * 24) as f64
}

/// Plants meeting the three selection criteria, evaluated straight from the
/// records: in `region`, mean reported monthly capacity above the threshold,
/// and any generation record at all.
pub fn oracle_selection(fleet: &Fleet, region: Region, config: &RegionConfig) -> BTreeSet<u32> {
    let mut state_of: BTreeMap<u32, StateCode> = BTreeMap::new();
    for r in &fleet.capacity {
        state_of.insert(r.plant_id, r.state);
    }
    for r in &fleet.generation {
        state_of.insert(r.plant_id, r.state);
    }
    let mut chosen = BTreeSet::new();
    for (plant, state) in state_of {
        if config.region_of_state(state) != region {
            continue;
        }
        let rows: Vec<&CapacityRecord> = fleet.capacity.iter().filter(|r| r.plant_id == plant).collect();
        let months: BTreeSet<YearMonth> = rows.iter().map(|r| r.month).collect();
        if months.is_empty() {
            continue;
        }
        let mean = rows.iter().map(|r| r.capacity).sum::<f64>() / months.len() as f64;
        let generates = fleet.generation.iter().any(|r| r.plant_id == plant);
        if mean > config.capacity_threshold_mw() && generates {
            chosen.insert(plant);
        }
    }
    chosen
}

/// Capacity factor of `plants` in `month`, counting a plant-fuel only when it
/// has both a generation and a capacity record that month.
pub fn oracle_rcf(fleet: &Fleet, plants: &BTreeSet<u32>, fuels: Option<&[Fuel]>, month: YearMonth) -> Option<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for plant in plants {
        for fuel in Fuel::ALL {
            if fuels.is_some_and(|f| !f.contains(fuel)) {
                continue;
            }
            let hit = |p: u32, f: Fuel, m: YearMonth| p == *plant && f == *fuel && m == month;
            let g: Vec<f64> = fleet
                .generation
                .iter()
                .filter(|r| hit(r.plant_id, r.fuel, r.month))
                .map(|r| r.net_generation)
                .collect();
            let c: Vec<f64> = fleet
                .capacity
                .iter()
                .filter(|r| hit(r.plant_id, r.fuel, r.month))
                .map(|r| r.capacity)
                .collect();
            if !g.is_empty() && !c.is_empty() {
                num += g.iter().sum::<f64>();
                den += c.iter().sum::<f64>();
            }
        }
    }
    (den != 0.0).then(|| num / (den * oracle_hours(month)))
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}
