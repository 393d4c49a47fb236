use std::collections::BTreeMap;

use super::{MetricsError, MonthlySeries, Unit};
use crate::ingest::GasPriceRecord;
use crate::regions::{MonthWindow, Region, RegionConfig, StateCode, YearMonth};

/// Unweighted mean of the region's configured state prices per month.
pub fn compute_regional_gas_price(
    prices: &[GasPriceRecord],
    region: Region,
    window: MonthWindow,
    config: &RegionConfig,
) -> Result<MonthlySeries, MetricsError> {
    let states = config.gas_states(region);
    if states.is_empty() {
        return Err(MetricsError::NoGasStates(region));
    }
    let lookup: BTreeMap<(YearMonth, StateCode), f64> = prices
        .iter()
        .map(|r| ((r.month, r.state), r.price))
        .collect();

    let mut series = MonthlySeries::new(format!("gas_price_{region}"), Unit::UsdPerMmbtu);
    for month in window.months() {
        let mut sum = 0.0;
        let mut present = 0;
        let mut missing = Vec::new();
        for state in states {
            match lookup.get(&(month, *state)) {
                Some(p) => {
                    sum += p;
                    present += 1;
                }
                None => missing.push(state.as_str()),
            }
        }
        if present == 0 {
            series.note(Some(month), "no prices for any configured state; month omitted");
            continue;
        }
        if !missing.is_empty() {
            series.note(
                Some(month),
                format!("missing prices for {}", missing.join(", ")),
            );
        }
        series.push(month, sum / present as f64, present);
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::default_config;

    fn rec(month: &str, state: &str, price: f64) -> GasPriceRecord {
        GasPriceRecord {
            month: month.parse().unwrap(),
            state: state.parse().unwrap(),
            price,
        }
    }

    fn jan() -> MonthWindow {
        "2017-01..2017-01".parse().unwrap()
    }

    #[test]
    fn western_january() {
        let prices = [rec("2017-01", "IL", 3.95), rec("2017-01", "MI", 3.63), rec("2017-01", "OH", 3.84), rec("2017-01", "PA", 9.0)];
        let s = compute_regional_gas_price(&prices, Region::Western, jan(), &default_config()).unwrap();
        assert!((s.points[0].value - 11.42 / 3.0).abs() < 1e-12);
        assert!((s.points[0].value - 3.8067).abs() < 1e-4);
        assert_eq!(s.points[0].coverage, 3);
    }

    #[test]
    fn mid_atlantic_january() {
        let prices = [rec("2017-01", "PA", 4.12), rec("2017-01", "NJ", 4.06), rec("2017-01", "NY", 5.41)];
        let s = compute_regional_gas_price(&prices, Region::MidAtlantic, jan(), &default_config()).unwrap();
        assert!((s.points[0].value - 4.53).abs() < 1e-12);
    }

    #[test]
    fn single_state_region() {
        let config = default_config()
            .with_gas_states(Region::Southern, vec!["VA".parse().unwrap()])
            .unwrap();
        let s = compute_regional_gas_price(&[rec("2017-01", "VA", 2.5)], Region::Southern, jan(), &config).unwrap();
        assert_eq!(s.points[0].value, 2.5);
    }

    #[test]
    fn partial_and_missing_months() {
        let prices = [rec("2017-01", "IL", 3.0), rec("2017-01", "OH", 4.0)];
        let window = "2017-01..2017-02".parse().unwrap();
        let s = compute_regional_gas_price(&prices, Region::Western, window, &default_config()).unwrap();
        assert_eq!(s.points.len(), 1);
        assert_eq!(s.points[0].value, 3.5);
        assert_eq!(s.points[0].coverage, 2);
        assert!(s.diagnostics[0].message.contains("MI"));
        assert_eq!(s.warnings_for("2017-02".parse().unwrap()), 1);
    }

    #[test]
    fn unconfigured_region() {
        let err = compute_regional_gas_price(&[], Region::Southern, jan(), &default_config()).unwrap_err();
        assert_eq!(err, MetricsError::NoGasStates(Region::Southern));
    }
}
