use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{default_config, Fuel, MonthWindow, PeakHours, Region, RegionConfig, StateCode, YearMonth};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("config syntax: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("state {state} assigned to both {first} and {second}")]
    StateInTwoRegions {
        state: StateCode,
        first: Region,
        second: Region,
    },
}

/// On-disk configuration. Every field is optional and overrides the
/// corresponding default.
///
/// `regions` replaces the whole state mapping when present, so a state can be
/// moved between regions without also editing the region it came from.
/// `gas_states`, `fuel_map` and `plant_regions` merge entry by entry.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub capacity_threshold_mw: Option<f64>,
    /// Inclusive hour-beginning pair, e.g. `[7, 22]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peak_hours: Option<[u8; 2]>,
    /// `"YYYY-MM..YYYY-MM"`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub study_window: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary_month: Option<YearMonth>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winter_months: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regions: Option<BTreeMap<Region, Vec<StateCode>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gas_states: Option<BTreeMap<Region, Vec<StateCode>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fuel_map: Option<BTreeMap<String, Fuel>>,
    /// Plant id (as a string key) to region.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plant_regions: Option<BTreeMap<String, Region>>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    /// Overlay this file on the defaults and validate the result.
    pub fn resolve(&self) -> Result<RegionConfig, ConfigError> {
        let mut config = default_config();

        if let Some(mw) = self.capacity_threshold_mw {
            config.capacity_threshold_mw = mw;
        }
        if let Some([first, last]) = self.peak_hours {
            config.peak_hours = PeakHours::new(first, last)?;
        }
        if let Some(window) = &self.study_window {
            config.study_window = window
                .parse::<MonthWindow>()
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        if let Some(month) = self.summary_month {
            config.summary_month = Some(month);
        }
        if let Some(months) = &self.winter_months {
            config.winter_months = months.iter().copied().collect();
        }
        if let Some(regions) = &self.regions {
            let mut mapping: BTreeMap<StateCode, Region> = BTreeMap::new();
            for (region, states) in regions {
                for state in states {
                    if let Some(first) = mapping.insert(*state, *region) {
                        if first != *region {
                            return Err(ConfigError::StateInTwoRegions {
                                state: *state,
                                first,
                                second: *region,
                            });
                        }
                    }
                }
            }
            config.region_of_state = mapping;
        }
        if let Some(gas) = &self.gas_states {
            for (region, states) in gas {
                config.gas_states.insert(*region, states.clone());
            }
        }
        if let Some(fuels) = &self.fuel_map {
            for (code, fuel) in fuels {
                config.fuel_map.insert(code.trim().to_ascii_uppercase(), *fuel);
            }
        }
        if let Some(plants) = &self.plant_regions {
            for (id, region) in plants {
                let plant_id = id
                    .trim()
                    .parse::<u32>()
                    .ok()
                    .filter(|id| *id > 0)
                    .ok_or_else(|| ConfigError::Invalid(format!("bad plant id {id:?}")))?;
                config.plant_regions.insert(plant_id, *region);
            }
        }

        config.validate()?;
        Ok(config)
    }

    /// A fully populated file describing `config`.
    pub fn from_config(config: &RegionConfig) -> Self {
        let mut regions: BTreeMap<Region, Vec<StateCode>> = BTreeMap::new();
        for (state, region) in &config.region_of_state {
            regions.entry(*region).or_default().push(*state);
        }
        ConfigFile {
            capacity_threshold_mw: Some(config.capacity_threshold_mw),
            peak_hours: Some([config.peak_hours.first(), config.peak_hours.last()]),
            study_window: Some(config.study_window.to_string()),
            summary_month: config.summary_month,
            winter_months: Some(sorted_winter(&config.winter_months)),
            regions: Some(regions),
            gas_states: Some(config.gas_states.clone()),
            fuel_map: Some(config.fuel_map.clone()),
            plant_regions: Some(
                config
                    .plant_regions
                    .iter()
                    .map(|(id, r)| (id.to_string(), *r))
                    .collect(),
            ),
        }
    }

    pub fn render(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

fn sorted_winter(months: &BTreeSet<u32>) -> Vec<u32> {
    months.iter().copied().collect()
}

impl RegionConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        ConfigFile::parse(text)?.resolve()
    }

    /// The effective configuration as a config file that re-parses to itself.
    pub fn to_toml(&self) -> String {
        ConfigFile::from_config(self).render()
    }
}
