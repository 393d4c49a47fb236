//! Plant profiles and the objective-plant selection.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::ingest::{CapacityRecord, GenerationRecord};
use crate::regions::{Fuel, Region, RegionConfig, StateCode, YearMonth};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SelectionError {
    #[error("plant {plant_id} is reported in both {first} and {second}")]
    ConflictingState {
        plant_id: u32,
        first: StateCode,
        second: StateCode,
    },
}

/// Everything the selection criteria need to know about one plant.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantProfile {
    pub plant_id: u32,
    pub state: StateCode,
    pub region: Region,
    /// Capacity summed across fuels, MW.
    pub monthly_total_capacity: BTreeMap<YearMonth, f64>,
    pub capacity_by_fuel: BTreeMap<(YearMonth, Fuel), f64>,
    pub fuels_present: BTreeSet<Fuel>,
    pub months_with_generation: BTreeSet<YearMonth>,
    /// Set when the plant reports generation but never reports capacity.
    pub missing_capacity: bool,
}

impl PlantProfile {
    /// Mean of the reported monthly totals, `None` when nothing was reported.
    pub fn mean_capacity(&self) -> Option<f64> {
        if self.monthly_total_capacity.is_empty() {
            return None;
        }
        let sum: f64 = self.monthly_total_capacity.values().sum();
        Some(sum / self.monthly_total_capacity.len() as f64)
    }
}

fn profile_for<'a>(
    profiles: &'a mut BTreeMap<u32, PlantProfile>,
    config: &RegionConfig,
    plant_id: u32,
    state: StateCode,
) -> Result<&'a mut PlantProfile, SelectionError> {
    let profile = profiles.entry(plant_id).or_insert_with(|| PlantProfile {
        plant_id,
        state,
        region: config.region_of_plant(plant_id, state),
        monthly_total_capacity: BTreeMap::new(),
        capacity_by_fuel: BTreeMap::new(),
        fuels_present: BTreeSet::new(),
        months_with_generation: BTreeSet::new(),
        missing_capacity: false,
    });
    if profile.state != state {
        return Err(SelectionError::ConflictingState {
            plant_id,
            first: profile.state,
            second: state,
        });
    }
    Ok(profile)
}

/// One profile per plant id in either input, ordered by plant id.
pub fn build_profiles(
    gen: &[GenerationRecord],
    cap: &[CapacityRecord],
    config: &RegionConfig,
) -> Result<Vec<PlantProfile>, SelectionError> {
    let mut profiles: BTreeMap<u32, PlantProfile> = BTreeMap::new();

    for r in cap {
        let p = profile_for(&mut profiles, config, r.plant_id, r.state)?;
        *p.monthly_total_capacity.entry(r.month).or_insert(0.0) += r.capacity;
        *p.capacity_by_fuel.entry((r.month, r.fuel)).or_insert(0.0) += r.capacity;
        p.fuels_present.insert(r.fuel);
    }
    for r in gen {
        let p = profile_for(&mut profiles, config, r.plant_id, r.state)?;
        p.months_with_generation.insert(r.month);
        p.fuels_present.insert(r.fuel);
    }

    Ok(profiles
        .into_values()
        .map(|mut p| {
            p.missing_capacity = p.monthly_total_capacity.is_empty() && !p.months_with_generation.is_empty();
            p
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectedPlant {
    pub plant_id: u32,
    pub state: StateCode,
    pub region: Region,
    pub mean_capacity_mw: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    pub region: Region,
    pub plant_ids: BTreeSet<u32>,
    pub plants: Vec<SelectedPlant>,
    /// GW per fuel at `summary_month`.
    pub total_capacity_by_fuel: BTreeMap<Fuel, f64>,
    /// GW across all fuels at `summary_month`.
    pub total_capacity: f64,
    pub summary_month: YearMonth,
    pub plant_count: usize,
    /// Explains an empty result.
    pub note: Option<String>,
}

impl SelectionResult {
    pub fn is_empty(&self) -> bool {
        self.plant_ids.is_empty()
    }

    pub fn contains(&self, plant_id: u32) -> bool {
        self.plant_ids.contains(&plant_id)
    }
}

/// Apply the three selection criteria for `region`:
/// the plant is in the region, its mean reported monthly capacity is strictly
/// above the configured threshold, and it reports generation at least once.
pub fn select_plants(profiles: &[PlantProfile], region: Region, config: &RegionConfig) -> SelectionResult {
    let threshold = config.capacity_threshold_mw();
    let summary_month = config.summary_month();

    let mut plants = Vec::new();
    let mut by_fuel: BTreeMap<Fuel, f64> = Fuel::ALL.iter().map(|f| (*f, 0.0)).collect();
    let mut total_mw = 0.0;
    let mut in_region = 0;

    for p in profiles.iter().filter(|p| p.region == region) {
        in_region += 1;
        let Some(mean) = p.mean_capacity() else { continue };
        if mean <= threshold || p.months_with_generation.is_empty() {
            continue;
        }
        plants.push(SelectedPlant {
            plant_id: p.plant_id,
            state: p.state,
            region,
            mean_capacity_mw: mean,
        });
        for fuel in Fuel::ALL {
            if let Some(mw) = p.capacity_by_fuel.get(&(summary_month, *fuel)) {
                *by_fuel.get_mut(fuel).expect("all fuels seeded") += mw;
            }
        }
        total_mw += p.monthly_total_capacity.get(&summary_month).copied().unwrap_or(0.0);
    }

    let note = plants.is_empty().then(|| {
        if in_region == 0 {
            format!("no plants located in {region}")
        } else {
            format!(
                "none of the {in_region} plants in {region} exceed {threshold} MW on average while reporting generation"
            )
        }
    });

    SelectionResult {
        region,
        plant_ids: plants.iter().map(|p| p.plant_id).collect(),
        plant_count: plants.len(),
        plants,
        total_capacity_by_fuel: by_fuel.into_iter().map(|(f, mw)| (f, mw / 1000.0)).collect(),
        total_capacity: total_mw / 1000.0,
        summary_month,
        note,
    }
}
