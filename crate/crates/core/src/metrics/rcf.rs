use std::collections::{BTreeMap, BTreeSet};

use super::{MetricsError, MonthlySeries, Unit};
use crate::ingest::{CapacityRecord, GenerationRecord};
use crate::regions::{hours_in_month, Fuel, MonthWindow, Region, RegionConfig, YearMonth};
use crate::selection::SelectionResult;

/// Values outside this range get a data-quality diagnostic.
pub const RCF_SANE_RANGE: (f64, f64) = (-0.05, 1.05);

#[derive(Debug, Clone, PartialEq)]
pub struct RcfQuery {
    pub region: Region,
    /// `None` means every fuel.
    pub fuels: Option<BTreeSet<Fuel>>,
    pub window: MonthWindow,
}

impl RcfQuery {
    pub fn all_fuels(region: Region, window: MonthWindow) -> Self {
        RcfQuery {
            region,
            fuels: None,
            window,
        }
    }

    pub fn fuel(region: Region, fuel: Fuel, window: MonthWindow) -> Self {
        Self::fuels(region, [fuel], window)
    }

    pub fn fuels(region: Region, fuels: impl IntoIterator<Item = Fuel>, window: MonthWindow) -> Self {
        RcfQuery {
            region,
            fuels: Some(fuels.into_iter().collect()),
            window,
        }
    }

    fn admits(&self, fuel: Fuel) -> bool {
        self.fuels.as_ref().is_none_or(|f| f.contains(&fuel))
    }

    /// `western`, `western_coal`, `western_coal+natural_gas`.
    pub fn label(&self) -> String {
        match &self.fuels {
            None => self.region.to_string(),
            Some(f) => {
                let names: Vec<&str> = f.iter().map(|f| f.label()).collect();
                format!("{}_{}", self.region, names.join("+"))
            }
        }
    }
}

#[derive(Default)]
struct Pair {
    generation: Option<f64>,
    capacity: Option<f64>,
}

/// Regional capacity factor per month:
/// total net generation over (total capacity x hours in the month), across
/// the selected plants and admitted fuels.
///
/// A plant-fuel enters month M only when both its generation and capacity
/// are reported for M; otherwise it is left out of numerator and denominator
/// alike and counted in that month's diagnostics.
pub fn compute_rcf(
    selection: &SelectionResult,
    gen: &[GenerationRecord],
    cap: &[CapacityRecord],
    query: &RcfQuery,
    config: &RegionConfig,
) -> Result<MonthlySeries, MetricsError> {
    if selection.region != query.region {
        return Err(MetricsError::RegionMismatch {
            query: query.region,
            selection: selection.region,
        });
    }
    if selection.is_empty() {
        return Err(MetricsError::EmptySelection(selection.region));
    }
    let study = config.study_window();
    if !study.contains_window(&query.window) {
        return Err(MetricsError::WindowOutsideStudy {
            window: query.window,
            study,
        });
    }

    let keep = |month: YearMonth, plant_id: u32, fuel: Fuel| {
        query.window.contains(month) && selection.contains(plant_id) && query.admits(fuel)
    };
    let mut table: BTreeMap<YearMonth, BTreeMap<(u32, Fuel), Pair>> = BTreeMap::new();
    for r in gen.iter().filter(|r| keep(r.month, r.plant_id, r.fuel)) {
        let slot = table.entry(r.month).or_default().entry((r.plant_id, r.fuel)).or_default();
        *slot.generation.get_or_insert(0.0) += r.net_generation;
    }
    for r in cap.iter().filter(|r| keep(r.month, r.plant_id, r.fuel)) {
        let slot = table.entry(r.month).or_default().entry((r.plant_id, r.fuel)).or_default();
        *slot.capacity.get_or_insert(0.0) += r.capacity;
    }

    let mut series = MonthlySeries::new(format!("rcf_{}", query.label()), Unit::Dimensionless);
    if table.is_empty() {
        series.note(
            None,
            format!("no selected-plant records fall inside {}", query.window),
        );
        return Ok(series);
    }

    for month in query.window.months() {
        let Some(entries) = table.get(&month) else {
            series.note(Some(month), "no generation or capacity records");
            continue;
        };
        let mut generation = 0.0;
        let mut capacity = 0.0;
        let mut paired = 0;
        let mut unpaired = 0;
        for pair in entries.values() {
            match (pair.generation, pair.capacity) {
                (Some(g), Some(c)) => {
                    generation += g;
                    capacity += c;
                    paired += 1;
                }
                _ => unpaired += 1,
            }
        }
        if unpaired > 0 {
            series.note(
                Some(month),
                format!("{unpaired} plant-fuel records excluded for lacking a generation or capacity match"),
            );
        }
        let denominator = capacity * f64::from(hours_in_month(month));
        if denominator == 0.0 {
            series.note(Some(month), "zero capacity; month omitted");
            continue;
        }
        let value = generation / denominator;
        let (lo, hi) = RCF_SANE_RANGE;
        if !(lo..=hi).contains(&value) {
            series.note(
                Some(month),
                format!("capacity factor {value:.4} outside [{lo}, {hi}]"),
            );
        }
        series.push(month, value, paired);
    }
    Ok(series)
}
