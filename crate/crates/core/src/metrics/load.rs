use std::collections::BTreeMap;

use super::{MonthlySeries, Unit};
use crate::ingest::HourlyLoadRecord;
use crate::regions::{MonthWindow, RegionConfig, YearMonth};

#[derive(Default)]
struct MonthAccumulator {
    /// First load seen; the mean is accumulated as offsets from it so a
    /// constant series comes back exactly.
    origin: Option<f64>,
    offset_sum: f64,
    count: usize,
    per_day: BTreeMap<u32, u32>,
}

/// Monthly system load: the mean of hourly loads over the configured peak
/// hours of every day in the month.
///
/// With complete data this is the peak-hour sum divided by
/// (peak hours per day x days in month). Missing peak-hour records are not
/// imputed; the mean is taken over the records present and the shortfall is
/// reported through coverage and a diagnostic.
pub fn compute_monthly_load(
    load: &[HourlyLoadRecord],
    window: MonthWindow,
    config: &RegionConfig,
) -> MonthlySeries {
    let peak = config.peak_hours();
    let mut months: BTreeMap<YearMonth, MonthAccumulator> = BTreeMap::new();
    let mut sorted: Vec<&HourlyLoadRecord> = load
        .iter()
        .filter(|r| peak.contains(r.hour) && window.contains(YearMonth::of_date(r.date)))
        .collect();
    sorted.sort_by_key(|r| (r.date, r.hour));
    for r in sorted {
        let acc = months.entry(YearMonth::of_date(r.date)).or_default();
        let origin = *acc.origin.get_or_insert(r.load);
        acc.offset_sum += r.load - origin;
        acc.count += 1;
        *acc.per_day.entry(chrono::Datelike::day(&r.date)).or_default() += 1;
    }

    let mut series = MonthlySeries::new("system_load", Unit::Mw);
    let per_day = peak.hours_per_day();
    for month in window.months() {
        let Some(acc) = months.get(&month) else {
            series.note(Some(month), "no peak-hour load records; month omitted");
            continue;
        };
        let short_days = (1..=month.days())
            .filter(|d| acc.per_day.get(d).copied().unwrap_or(0) < per_day)
            .count();
        if short_days > 0 {
            let expected = per_day as usize * month.days() as usize;
            series.note(
                Some(month),
                format!(
                    "{short_days} days missing peak-hour records ({} of {expected} present)",
                    acc.count
                ),
            );
        }
        let origin = acc.origin.unwrap_or(0.0);
        series.push(month, origin + acc.offset_sum / acc.count as f64, acc.count);
    }
    series
}
