//! Geography, fuel vocabulary, seasons and calendar arithmetic.
//!
//! Everything the metrics need to know about "where" and "when" lives in a
//! [`RegionConfig`]. The shipped default assigns whole states to market
//! regions, which only approximates the zone-based boundaries a market
//! operator publishes; users with a plant list can pin individual plants
//! through `plant_regions` overrides.

mod calendar;
mod config_file;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use calendar::{hours_in_month, CalendarError, MonthWindow, YearMonth};
pub use config_file::{ConfigError, ConfigFile};

const KNOWN_STATES: [&str; 51] = [
    "AK", "AL", "AR", "AZ", "CA", "CO", "CT", "DC", "DE", "FL", "GA", "HI", "IA", "ID", "IL", "IN",
    "KS", "KY", "LA", "MA", "MD", "ME", "MI", "MN", "MO", "MS", "MT", "NC", "ND", "NE", "NH", "NJ",
    "NM", "NV", "NY", "OH", "OK", "OR", "PA", "RI", "SC", "SD", "TN", "TX", "UT", "VA", "VT", "WA",
    "WI", "WV", "WY",
];

/// Two-letter U.S. state or district postal code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateCode([u8; 2]);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unrecognized state code {0:?}")]
pub struct UnknownState(pub String);

impl StateCode {
    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).expect("ascii state code")
    }

    pub fn all() -> impl Iterator<Item = StateCode> {
        KNOWN_STATES.iter().map(|s| s.parse().expect("known state"))
    }
}

impl FromStr for StateCode {
    type Err = UnknownState;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.trim().to_ascii_uppercase();
        if KNOWN_STATES.binary_search(&upper.as_str()).is_ok() {
            let b = upper.as_bytes();
            Ok(StateCode([b[0], b[1]]))
        } else {
            Err(UnknownState(s.to_string()))
        }
    }
}

impl fmt::Display for StateCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for StateCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for StateCode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! labelled_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $label:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn label(self) -> &'static str {
                match self {
                    $($name::$variant => $label),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.pad(self.label())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                let t = s.trim();
                $name::ALL
                    .iter()
                    .copied()
                    .find(|v| v.label().eq_ignore_ascii_case(t))
                    .ok_or_else(|| format!("unknown {} {:?}", stringify!($name).to_lowercase(), s))
            }
        }
    };
}

labelled_enum!(
    /// Market region a plant is assigned to.
    Region {
        Western => "western",
        MidAtlantic => "mid_atlantic",
        Southern => "southern",
        External => "external",
    }
);

labelled_enum!(
    /// Normalized fuel bucket.
    Fuel {
        Coal => "coal",
        NaturalGas => "natural_gas",
        Nuclear => "nuclear",
        Other => "other",
    }
);

labelled_enum!(
    Season {
        Winter => "winter",
        NonWinter => "non_winter",
    }
);

/// Inclusive hour-beginning range used for peak-hour load averaging.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeakHours {
    first: u8,
    last: u8,
}

impl PeakHours {
    pub fn new(first: u8, last: u8) -> Result<Self, ConfigError> {
        if first > last || last > 23 {
            return Err(ConfigError::Invalid(format!(
                "peak hours {first}..{last} must satisfy first <= last <= 23"
            )));
        }
        Ok(Self { first, last })
    }

    pub fn first(&self) -> u8 {
        self.first
    }

    pub fn last(&self) -> u8 {
        self.last
    }

    pub fn contains(&self, hour: u8) -> bool {
        self.first <= hour && hour <= self.last
    }

    pub fn hours_per_day(&self) -> u32 {
        u32::from(self.last - self.first) + 1
    }
}

/// Immutable analysis configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionConfig {
    region_of_state: BTreeMap<StateCode, Region>,
    plant_regions: BTreeMap<u32, Region>,
    gas_states: BTreeMap<Region, Vec<StateCode>>,
    fuel_map: BTreeMap<String, Fuel>,
    winter_months: BTreeSet<u32>,
    capacity_threshold_mw: f64,
    peak_hours: PeakHours,
    study_window: MonthWindow,
    summary_month: Option<YearMonth>,
}

fn states(codes: &[&str]) -> Vec<StateCode> {
    codes.iter().map(|c| c.parse().expect("known state")).collect()
}

/// The shipped defaults.
pub fn default_config() -> RegionConfig {
    let mut region_of_state = BTreeMap::new();
    for (region, codes) in [
        (Region::Western, &["IL", "IN", "MI", "OH", "KY", "WV", "TN"][..]),
        (Region::MidAtlantic, &["PA", "NJ", "MD", "DE", "DC"][..]),
        (Region::Southern, &["VA", "NC"][..]),
    ] {
        for s in states(codes) {
            region_of_state.insert(s, region);
        }
    }

    let gas_states = BTreeMap::from([
        (Region::Western, states(&["IL", "MI", "OH"])),
        (Region::MidAtlantic, states(&["PA", "NJ", "NY"])),
    ]);

    let fuel_map = [
        ("COL", Fuel::Coal),
        ("BIT", Fuel::Coal),
        ("SUB", Fuel::Coal),
        ("LIG", Fuel::Coal),
        ("NG", Fuel::NaturalGas),
        ("NUC", Fuel::Nuclear),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();

    let window = MonthWindow::new(
        YearMonth::new(2015, 7).unwrap(),
        YearMonth::new(2017, 12).unwrap(),
    )
    .unwrap();

    RegionConfig {
        region_of_state,
        plant_regions: BTreeMap::new(),
        gas_states,
        fuel_map,
        winter_months: BTreeSet::from([12, 1, 2]),
        capacity_threshold_mw: 200.0,
        peak_hours: PeakHours { first: 7, last: 22 },
        study_window: window,
        summary_month: None,
    }
}

impl Default for RegionConfig {
    fn default() -> Self {
        default_config()
    }
}

impl RegionConfig {
    /// States not listed in the mapping belong to [`Region::External`].
    pub fn region_of_state(&self, state: StateCode) -> Region {
        self.region_of_state
            .get(&state)
            .copied()
            .unwrap_or(Region::External)
    }

    /// Region of a plant, honouring per-plant overrides.
    pub fn region_of_plant(&self, plant_id: u32, state: StateCode) -> Region {
        self.plant_regions
            .get(&plant_id)
            .copied()
            .unwrap_or_else(|| self.region_of_state(state))
    }

    pub fn state_regions(&self) -> &BTreeMap<StateCode, Region> {
        &self.region_of_state
    }

    pub fn plant_regions(&self) -> &BTreeMap<u32, Region> {
        &self.plant_regions
    }

    pub fn gas_states(&self, region: Region) -> &[StateCode] {
        self.gas_states.get(&region).map_or(&[], Vec::as_slice)
    }

    pub fn gas_state_map(&self) -> &BTreeMap<Region, Vec<StateCode>> {
        &self.gas_states
    }

    pub fn fuel_map(&self) -> &BTreeMap<String, Fuel> {
        &self.fuel_map
    }

    /// Map a raw fuel code to its bucket. Codes are matched case-insensitively
    /// against the fuel map first, then against the normalized labels
    /// themselves; anything else is [`Fuel::Other`].
    pub fn normalize_fuel(&self, raw: &str) -> Fuel {
        let code = raw.trim().to_ascii_uppercase();
        if let Some(fuel) = self.fuel_map.get(&code) {
            return *fuel;
        }
        code.parse().unwrap_or(Fuel::Other)
    }

    pub fn winter_months(&self) -> &BTreeSet<u32> {
        &self.winter_months
    }

    pub fn capacity_threshold_mw(&self) -> f64 {
        self.capacity_threshold_mw
    }

    pub fn peak_hours(&self) -> PeakHours {
        self.peak_hours
    }

    pub fn study_window(&self) -> MonthWindow {
        self.study_window
    }

    /// Month at which fuel-capacity summaries are evaluated; defaults to the
    /// final month of the study window.
    pub fn summary_month(&self) -> YearMonth {
        self.summary_month.unwrap_or(self.study_window.end())
    }

    pub fn season_of(&self, month: YearMonth) -> Season {
        season_of(month, self)
    }

    pub fn with_study_window(mut self, window: MonthWindow) -> Result<Self, ConfigError> {
        self.study_window = window;
        self.validate()?;
        Ok(self)
    }

    pub fn with_capacity_threshold(mut self, mw: f64) -> Result<Self, ConfigError> {
        self.capacity_threshold_mw = mw;
        self.validate()?;
        Ok(self)
    }

    pub fn with_plant_region(mut self, plant_id: u32, region: Region) -> Self {
        self.plant_regions.insert(plant_id, region);
        self
    }

    pub fn with_gas_states(mut self, region: Region, states: Vec<StateCode>) -> Result<Self, ConfigError> {
        self.gas_states.insert(region, states);
        self.validate()?;
        Ok(self)
    }

    pub(crate) fn validate(&self) -> Result<(), ConfigError> {
        for region in [Region::Western, Region::MidAtlantic] {
            if self.gas_states(region).is_empty() {
                return Err(ConfigError::Invalid(format!(
                    "gas_states.{region} must list at least one state"
                )));
            }
        }
        if let Some(m) = self.winter_months.iter().find(|m| !(1..=12).contains(*m)) {
            return Err(ConfigError::Invalid(format!(
                "winter month {m} outside 1..=12"
            )));
        }
        if !(self.capacity_threshold_mw.is_finite() && self.capacity_threshold_mw > 0.0) {
            return Err(ConfigError::Invalid(format!(
                "capacity threshold {} must be a positive number",
                self.capacity_threshold_mw
            )));
        }
        if let Some(m) = self.summary_month {
            if !self.study_window.contains(m) {
                return Err(ConfigError::Invalid(format!(
                    "summary month {m} outside study window {}",
                    self.study_window
                )));
            }
        }
        Ok(())
    }
}

/// Winter iff the month number is one of the configured winter months.
pub fn season_of(month: YearMonth, config: &RegionConfig) -> Season {
    if config.winter_months.contains(&month.month()) {
        Season::Winter
    } else {
        Season::NonWinter
    }
}
