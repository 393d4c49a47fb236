mod common;

use std::collections::BTreeMap;

use chrono::NaiveDate;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{oracle_rcf, oracle_selection, random_fleet, rel_close, ym, Fleet};
use rcf::analysis::{ols_fit, pearson, seasonal_split, AlignedPairs, PairPoint};
use rcf::ingest::{
    parse_capacity, parse_gas_prices, parse_generation, parse_hourly_load, write_capacity, write_generation,
    GasPriceRecord, HourlyLoadRecord,
};
use rcf::metrics::{compute_monthly_load, compute_rcf, compute_regional_gas_price, RcfQuery};
use rcf::regions::{
    default_config, hours_in_month, Fuel, MonthWindow, Region, RegionConfig, Season, YearMonth,
};
use rcf::selection::{build_profiles, select_plants};

fn fleet(seed: u64) -> Fleet {
    random_fleet(&mut ChaCha8Rng::seed_from_u64(seed), 10, 6)
}

fn window_of(fleet: &Fleet) -> MonthWindow {
    MonthWindow::new(fleet.months[0], *fleet.months.last().unwrap()).unwrap()
}

fn rcf_values(fleet: &Fleet, region: Region, config: &RegionConfig) -> Option<Vec<(YearMonth, f64)>> {
    let profiles = build_profiles(&fleet.generation, &fleet.capacity, config).unwrap();
    let sel = select_plants(&profiles, region, config);
    if sel.is_empty() {
        return None;
    }
    let query = RcfQuery::all_fuels(region, window_of(fleet));
    let s = compute_rcf(&sel, &fleet.generation, &fleet.capacity, &query, config).unwrap();
    Some(s.points.iter().map(|p| (p.month, p.value)).collect())
}

fn month_strategy() -> impl Strategy<Value = YearMonth> {
    (0u32..30).prop_map(|i| {
        let mut m = ym("2015-07");
        for _ in 0..i {
            m = m.succ();
        }
        m
    })
}

fn pairs_from(xy: &[(f64, f64)]) -> AlignedPairs {
    let mut m = ym("2015-07");
    let mut pairs = Vec::new();
    for (x, y) in xy {
        pairs.push(PairPoint { month: m, x: *x, y: *y });
        m = m.succ();
    }
    AlignedPairs {
        x_label: "load".into(),
        y_label: "rcf".into(),
        pairs,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parsing_is_deterministic_and_round_trips(seed in any::<u64>()) {
        let config = default_config();
        let f = fleet(seed);
        let gen_text = write_generation(&f.generation);
        let cap_text = write_capacity(&f.capacity);

        let a = parse_generation(gen_text.as_bytes(), &config).unwrap();
        let b = parse_generation(gen_text.as_bytes(), &config).unwrap();
        prop_assert_eq!(&a, &b);
        let again = parse_generation(write_generation(&a.records).as_bytes(), &config).unwrap();
        prop_assert_eq!(&again.records, &a.records);

        let c = parse_capacity(cap_text.as_bytes(), &config).unwrap();
        let again = parse_capacity(write_capacity(&c.records).as_bytes(), &config).unwrap();
        prop_assert_eq!(&again.records, &c.records);
    }

    #[test]
    fn aggregation_matches_row_sums(
        rows in prop::collection::vec((0u32..3, 1u32..4, 0usize..3, -50.0f64..5000.0), 1..40),
        junk in prop::collection::vec(0usize..4, 0..6),
    ) {
        let config = default_config();
        let codes = ["BIT", "SUB", "NG"];
        let mut text = String::from("month,plant_id,state,fuel_raw,net_generation_mwh\n");
        let mut expected: BTreeMap<(YearMonth, u32, Fuel), f64> = BTreeMap::new();
        for (m, plant, code, mwh) in &rows {
            let month = ym(["2016-01", "2016-02", "2016-03"][*m as usize]);
            text.push_str(&format!("{month},{plant},OH,{},{mwh}\n", codes[*code]));
            let fuel = config.normalize_fuel(codes[*code]);
            *expected.entry((month, *plant, fuel)).or_insert(0.0) += mwh;
        }
        let bad = ["2016-01,x,OH,NG,1", "2016-13,1,OH,NG,1", "2016-01,1,ZZ,NG,1", "2016-01,1,OH,NG,abc"];
        for j in &junk {
            text.push_str(bad[*j]);
            text.push('\n');
        }

        let parsed = parse_generation(text.as_bytes(), &config).unwrap();
        prop_assert_eq!(parsed.rows_read, rows.len() + junk.len());
        prop_assert_eq!(parsed.warnings.len() + parsed.rows_accepted, parsed.rows_read);
        prop_assert_eq!(parsed.warnings.len(), junk.len());
        prop_assert_eq!(parsed.records.len(), expected.len());
        for r in &parsed.records {
            let want = expected[&(r.month, r.plant_id, r.fuel)];
            prop_assert!((r.net_generation - want).abs() <= 1e-9 * want.abs().max(1.0));
        }
    }

    #[test]
    fn selection_is_monotone_disjoint_and_closed(seed in any::<u64>(), raise in 1.0f64..400.0) {
        let f = fleet(seed);
        let config = default_config().with_study_window(window_of(&f)).unwrap();
        let profiles = build_profiles(&f.generation, &f.capacity, &config).unwrap();
        let west = select_plants(&profiles, Region::Western, &config);
        let mid = select_plants(&profiles, Region::MidAtlantic, &config);
        prop_assert!(west.plant_ids.is_disjoint(&mid.plant_ids));

        let stricter = config.clone().with_capacity_threshold(200.0 + raise).unwrap();
        for region in [Region::Western, Region::MidAtlantic] {
            let base = select_plants(&profiles, region, &config);
            let fewer = select_plants(&profiles, region, &stricter);
            prop_assert!(fewer.plant_ids.is_subset(&base.plant_ids));
            let sum: f64 = base.total_capacity_by_fuel.values().sum();
            prop_assert!((sum - base.total_capacity).abs() <= 1e-9 * base.total_capacity.max(1.0));
            prop_assert_eq!(&base.plant_ids, &oracle_selection(&f, region, &config));
        }
    }

    #[test]
    fn rcf_matches_oracle(seed in any::<u64>()) {
        let f = fleet(seed);
        let config = default_config();
        for region in [Region::Western, Region::MidAtlantic] {
            let selected = oracle_selection(&f, region, &config);
            let Some(values) = rcf_values(&f, region, &config) else {
                prop_assert!(selected.is_empty());
                continue;
            };
            let got: BTreeMap<YearMonth, f64> = values.into_iter().collect();
            for month in &f.months {
                let want = oracle_rcf(&f, &selected, None, *month);
                match (got.get(month), want) {
                    (Some(a), Some(b)) => prop_assert!(rel_close(*a, b, 1e-12), "{month}: {a} vs {b}"),
                    (None, None) => {}
                    (a, b) => prop_assert!(false, "{month}: {a:?} vs {b:?}"),
                }
            }
        }
    }

    #[test]
    fn rcf_scales_with_generation_and_capacity(seed in any::<u64>(), k in 0.01f64..100.0) {
        let f = fleet(seed);
        // a near-zero threshold keeps the selection fixed when capacity scales
        let config = default_config().with_capacity_threshold(1e-9).unwrap();
        let Some(base) = rcf_values(&f, Region::Western, &config) else { return Ok(()) };

        let mut g = f.clone();
        g.generation.iter_mut().for_each(|r| r.net_generation *= k);
        let scaled = rcf_values(&g, Region::Western, &config).unwrap();
        for ((m1, a), (m2, b)) in base.iter().zip(&scaled) {
            prop_assert_eq!(m1, m2);
            prop_assert!(rel_close(a * k, *b, 1e-12));
        }

        let mut c = f.clone();
        c.capacity.iter_mut().for_each(|r| r.capacity *= k);
        let scaled = rcf_values(&c, Region::Western, &config).unwrap();
        for ((_, a), (_, b)) in base.iter().zip(&scaled) {
            prop_assert!(rel_close(a / k, *b, 1e-12));
        }
    }

    #[test]
    fn rcf_ignores_record_order(seed in any::<u64>()) {
        let f = fleet(seed);
        let config = default_config();
        let Some(base) = rcf_values(&f, Region::MidAtlantic, &config) else { return Ok(()) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut g = f.clone();
        g.generation.shuffle(&mut rng);
        g.capacity.shuffle(&mut rng);
        let shuffled = rcf_values(&g, Region::MidAtlantic, &config).unwrap();
        for ((_, a), (_, b)) in base.iter().zip(&shuffled) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn gas_mean_lies_within_state_prices(
        prices in prop::collection::vec((month_strategy(), 0usize..6, 0.5f64..20.0), 1..60),
    ) {
        let config = default_config();
        let states = ["IL", "MI", "OH", "PA", "NJ", "NY"];
        let mut seen = BTreeMap::new();
        for (m, s, p) in prices {
            seen.entry((m, s)).or_insert(p);
        }
        let records: Vec<GasPriceRecord> = seen
            .iter()
            .map(|((m, s), p)| GasPriceRecord { month: *m, state: states[*s].parse().unwrap(), price: *p })
            .collect();
        for region in [Region::Western, Region::MidAtlantic] {
            let series = compute_regional_gas_price(&records, region, config.study_window(), &config).unwrap();
            let members = config.gas_states(region);
            for p in &series.points {
                let contributing: Vec<f64> = records
                    .iter()
                    .filter(|r| r.month == p.month && members.contains(&r.state))
                    .map(|r| r.price)
                    .collect();
                let lo = contributing.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = contributing.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                prop_assert!(lo - 1e-12 <= p.value && p.value <= hi + 1e-12);
                prop_assert_eq!(p.coverage, contributing.len());
            }
        }
    }

    #[test]
    fn constant_load_is_preserved(
        month in month_strategy(),
        level in 1.0f64..200_000.0,
        dropped in prop::collection::vec((1u32..29, 0u8..7), 0..40),
    ) {
        let config = default_config();
        let mut records = Vec::new();
        for day in 1..=month.days() {
            for hour in 0..24u8 {
                let off_peak = !config.peak_hours().contains(hour);
                if off_peak && dropped.contains(&(day, hour)) {
                    continue;
                }
                let load = if off_peak { level * 0.3 } else { level };
                let date = NaiveDate::from_ymd_opt(month.year(), month.month(), day).unwrap();
                records.push(HourlyLoadRecord { date, hour, load });
            }
        }
        let window = MonthWindow::new(month, month).unwrap();
        let series = compute_monthly_load(&records, window, &config);
        prop_assert_eq!(series.points.len(), 1);
        prop_assert_eq!(series.points[0].value, level);
        prop_assert_eq!(series.points[0].coverage, 16 * month.days() as usize);
    }

    #[test]
    fn ols_residuals_are_orthogonal(
        xy in prop::collection::vec((50_000.0f64..150_000.0, -0.1f64..1.1), 3..40),
    ) {
        let pairs = pairs_from(&xy);
        let Ok(fit) = ols_fit(&pairs) else { return Ok(()) };
        let scale_r: f64 = xy.iter().map(|(_, y)| y.abs()).sum::<f64>().max(1.0);
        let scale_rx: f64 = xy.iter().map(|(x, y)| (x * y).abs()).sum::<f64>().max(1.0);
        let sum_r: f64 = xy.iter().map(|(x, y)| y - fit.predict(*x)).sum();
        let sum_rx: f64 = xy.iter().map(|(x, y)| (y - fit.predict(*x)) * x).sum();
        prop_assert!(sum_r.abs() < 1e-9 * scale_r);
        prop_assert!(sum_rx.abs() < 1e-9 * scale_rx);
        prop_assert!((0.0..=1.0).contains(&fit.r_squared));
    }

    #[test]
    fn r_squared_is_pearson_squared(
        xy in prop::collection::vec((50_000.0f64..150_000.0, -0.1f64..1.1), 3..40),
    ) {
        let pairs = pairs_from(&xy);
        if let (Ok(fit), Ok(r)) = (ols_fit(&pairs), pearson(&pairs)) {
            prop_assert!((fit.r_squared - r * r).abs() < 1e-12, "{} vs {}", fit.r_squared, r * r);
        }
    }

    #[test]
    fn slope_is_shift_invariant(
        xy in prop::collection::vec((50_000.0f64..150_000.0, -0.1f64..1.1), 3..40),
        c in -5.0f64..5.0,
    ) {
        let base = pairs_from(&xy);
        let shifted: Vec<(f64, f64)> = xy.iter().map(|(x, y)| (*x, y + c)).collect();
        if let (Ok(a), Ok(b)) = (ols_fit(&base), ols_fit(&pairs_from(&shifted))) {
            prop_assert!((a.slope - b.slope).abs() <= 1e-9 * a.slope.abs().max(1e-9));
            prop_assert!((b.intercept - a.intercept - c).abs() < 1e-6);
        }
    }

    #[test]
    fn two_points_are_interpolated(x1 in -1e5f64..1e5, dx in 1.0f64..1e5, y1 in -2.0f64..2.0, y2 in -2.0f64..2.0) {
        let x2 = x1 + dx;
        let fit = ols_fit(&pairs_from(&[(x1, y1), (x2, y2)])).unwrap();
        prop_assert!((fit.predict(x1) - y1).abs() < 1e-9);
        prop_assert!((fit.predict(x2) - y2).abs() < 1e-9);
        prop_assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn seasonal_split_partitions(n in 0usize..30) {
        let config = default_config();
        let pairs = pairs_from(&vec![(1.0, 1.0); n]);
        let (winter, rest) = seasonal_split(&pairs, &config);
        prop_assert_eq!(winter.len() + rest.len(), n);
        prop_assert!(winter.pairs.iter().all(|p| config.season_of(p.month) == Season::Winter));
        prop_assert!(rest.pairs.iter().all(|p| config.season_of(p.month) == Season::NonWinter));
        let mut merged: Vec<PairPoint> = winter.pairs.into_iter().chain(rest.pairs).collect();
        merged.sort_by_key(|p| p.month);
        prop_assert_eq!(merged, pairs.pairs);
    }

    #[test]
    fn calendar_years_sum_to_whole_years(year in 1900i32..2200) {
        let total: u32 = (1..=12).map(|m| hours_in_month(YearMonth::new(year, m).unwrap())).sum();
        prop_assert!(total == 8760 || total == 8784);
        let winter = (1..=12)
            .filter(|m| default_config().season_of(YearMonth::new(year, *m).unwrap()) == Season::Winter)
            .count();
        prop_assert_eq!(winter, 3);
    }

    #[test]
    fn config_rejects_state_in_two_regions(i in 0usize..7) {
        let state = ["OH", "IL", "PA", "NJ", "VA", "MD", "KY"][i];
        let text = format!("[regions]\nwestern = [\"{state}\"]\nmid_atlantic = [\"{state}\"]\n");
        prop_assert!(RegionConfig::from_toml(&text).is_err());
    }

    #[test]
    fn load_parse_accounts_for_every_row(hours in prop::collection::vec(0u8..30, 1..50)) {
        let mut text = String::from("date,hour,load_mw\n");
        let mut seen = std::collections::BTreeSet::new();
        let mut expected_ok = 0;
        for (i, h) in hours.iter().enumerate() {
            let day = 1 + i % 28;
            if !seen.insert((day, *h)) {
                continue;
            }
            if *h < 24 {
                expected_ok += 1;
            }
            text.push_str(&format!("2016-03-{day:02},{h},1000\n"));
        }
        let parsed = parse_hourly_load(text.as_bytes()).unwrap();
        prop_assert_eq!(parsed.rows_accepted, expected_ok);
        prop_assert_eq!(parsed.warnings.len() + parsed.rows_accepted, parsed.rows_read);
    }
}

#[test]
fn gas_prices_parse_is_deterministic() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/state_gas/gas_prices.csv")).unwrap();
    let a = parse_gas_prices(text.as_bytes()).unwrap();
    let b = parse_gas_prices(text.as_bytes()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.records.len(), 18);
}
