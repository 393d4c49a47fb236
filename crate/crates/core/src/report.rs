//! Findings: the numbers a run reports, plus their CSV, text and JSON forms.
//!
//! Each value in `report.txt` comes from one of the CSVs rendered here or
//! from a series CSV; the text form only rounds.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::analysis::{align, compare_slopes, ols_fit, pearson, seasonal_split, RegressionFit, SlopeOrdering};
use crate::metrics::MonthlySeries;
use crate::pipeline::{FuelSet, RegionSeries};
use crate::regions::{Fuel, MonthWindow, Region, RegionConfig, Season, YearMonth};
use crate::selection::SelectionResult;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionSummary {
    pub region: Region,
    pub summary_month: YearMonth,
    pub plant_count: usize,
    pub total_capacity_gw: f64,
    pub capacity_gw: BTreeMap<Fuel, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeasonalMean {
    pub series: String,
    pub unit: String,
    pub season: Season,
    pub n: usize,
    pub mean: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Correlation {
    pub region: Region,
    pub fuels: String,
    pub n: usize,
    pub r: Option<f64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fit {
    pub region: Region,
    pub fuels: String,
    pub season: Season,
    pub n: usize,
    pub slope_per_mw: Option<f64>,
    pub slope_per_gw: Option<f64>,
    pub intercept: Option<f64>,
    pub r_squared: Option<f64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub fuels: String,
    pub season: Season,
    pub first: Region,
    pub second: Region,
    /// Region with the larger slope, or `equal`.
    pub steeper: String,
    pub difference_per_mw: f64,
    pub difference_per_gw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WinterLevel {
    pub fuels: String,
    pub month: YearMonth,
    pub first: Region,
    pub first_value: f64,
    pub second: Region,
    pub second_value: f64,
    pub first_higher: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Findings {
    pub window: String,
    pub selection: Vec<SelectionSummary>,
    pub seasonal_means: Vec<SeasonalMean>,
    pub correlations: Vec<Correlation>,
    pub fits: Vec<Fit>,
    pub comparisons: Vec<Comparison>,
    pub winter_levels: Vec<WinterLevel>,
}

impl Findings {
    pub fn fit(&self, region: Region, fuels: &str, season: Season) -> Option<&Fit> {
        self.fits
            .iter()
            .find(|f| f.region == region && f.fuels == fuels && f.season == season)
    }

    pub fn comparison(&self, fuels: &str, season: Season) -> Option<&Comparison> {
        self.comparisons.iter().find(|c| c.fuels == fuels && c.season == season)
    }
}

fn seasonal_mean(series: &MonthlySeries, season: Season, config: &RegionConfig) -> SeasonalMean {
    let values: Vec<f64> = series
        .points
        .iter()
        .filter(|p| config.season_of(p.month) == season)
        .map(|p| p.value)
        .collect();
    SeasonalMean {
        series: series.label.clone(),
        unit: series.unit.to_string(),
        season,
        n: values.len(),
        mean: (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64),
    }
}

pub(crate) fn findings(
    config: &RegionConfig,
    window: MonthWindow,
    regions: &[Region],
    selections: &[SelectionResult],
    rcf: &[RegionSeries],
    load: &MonthlySeries,
    gas: &[(Region, MonthlySeries)],
) -> Findings {
    let selection = selections
        .iter()
        .map(|s| SelectionSummary {
            region: s.region,
            summary_month: s.summary_month,
            plant_count: s.plant_count,
            total_capacity_gw: s.total_capacity,
            capacity_gw: s.total_capacity_by_fuel.clone(),
        })
        .collect();

    let mut seasonal_means = Vec::new();
    let series = rcf
        .iter()
        .map(|s| &s.series)
        .chain(std::iter::once(load))
        .chain(gas.iter().map(|(_, s)| s));
    for s in series {
        for season in [Season::Winter, Season::NonWinter] {
            seasonal_means.push(seasonal_mean(s, season, config));
        }
    }

    let mut correlations = Vec::new();
    let mut fits = Vec::new();
    let mut fitted: Vec<(Region, FuelSet, Season, RegressionFit)> = Vec::new();
    for s in rcf {
        let pairs = align(load, &s.series);
        let r = pearson(&pairs);
        correlations.push(Correlation {
            region: s.region,
            fuels: s.fuels.label().to_string(),
            n: pairs.len(),
            r: r.as_ref().ok().copied(),
            note: r.err().map(|e| e.to_string()),
        });
        let (winter, non_winter) = seasonal_split(&pairs, config);
        for (season, part) in [(Season::NonWinter, non_winter), (Season::Winter, winter)] {
            let fit = ols_fit(&part);
            if let Ok(f) = &fit {
                fitted.push((s.region, s.fuels, season, *f));
            }
            let ok = fit.as_ref().ok();
            fits.push(Fit {
                region: s.region,
                fuels: s.fuels.label().to_string(),
                season,
                n: part.len(),
                slope_per_mw: ok.map(|f| f.slope),
                slope_per_gw: ok.map(|f| f.slope * 1000.0),
                intercept: ok.map(|f| f.intercept),
                r_squared: ok.map(|f| f.r_squared),
                note: fit.err().map(|e| e.to_string()),
            });
        }
    }

    let mut comparisons = Vec::new();
    let mut winter_levels = Vec::new();
    if let [first, second, ..] = regions {
        let fuel_sets: Vec<FuelSet> = rcf.iter().filter(|s| s.region == *first).map(|s| s.fuels).collect();
        for set in &fuel_sets {
            let label = set.label();
            for season in [Season::NonWinter, Season::Winter] {
                let fit = |region: Region| {
                    fitted
                        .iter()
                        .find(|(r, f, s, _)| *r == region && f == set && *s == season)
                        .map(|(_, _, _, fit)| fit)
                };
                let (Some(a), Some(b)) = (fit(*first), fit(*second)) else { continue };
                let c = compare_slopes(a, b);
                comparisons.push(Comparison {
                    fuels: label.to_string(),
                    season,
                    first: *first,
                    second: *second,
                    steeper: match c.ordering {
                        SlopeOrdering::FirstLarger => first.to_string(),
                        SlopeOrdering::SecondLarger => second.to_string(),
                        SlopeOrdering::Equal => "equal".into(),
                    },
                    difference_per_mw: c.difference,
                    difference_per_gw: c.difference * 1000.0,
                });
            }
            let find = |region: Region| rcf.iter().find(|s| s.region == region && s.fuels == *set);
            let (Some(a), Some(b)) = (find(*first), find(*second)) else { continue };
            if !matches!(set, FuelSet::All | FuelSet::Fossil) {
                continue;
            }
            for pair in align(&a.series, &b.series).pairs {
                if config.season_of(pair.month) == Season::Winter {
                    winter_levels.push(WinterLevel {
                        fuels: label.to_string(),
                        month: pair.month,
                        first: *first,
                        first_value: pair.x,
                        second: *second,
                        second_value: pair.y,
                        first_higher: pair.x > pair.y,
                    });
                }
            }
        }
    }

    Findings {
        window: window.to_string(),
        selection,
        seasonal_means,
        correlations,
        fits,
        comparisons,
        winter_levels,
    }
}

fn to_csv<T: Serialize>(rows: &[T], header: &[&str]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.serialize(row).expect("flat row");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

/// `selection_summary.csv` plus one `selection_<region>.csv` plant list per region.
pub fn selection_csvs(selections: &[SelectionResult]) -> Vec<(String, String)> {
    let mut summary = String::from("region,summary_month,plant_count,fuel,capacity_gw\n");
    let mut out = Vec::new();
    for s in selections {
        for (fuel, gw) in &s.total_capacity_by_fuel {
            let _ = writeln!(summary, "{},{},{},{},{}", s.region, s.summary_month, s.plant_count, fuel, gw);
        }
        let _ = writeln!(
            summary,
            "{},{},{},all,{}",
            s.region, s.summary_month, s.plant_count, s.total_capacity
        );
        out.push((
            format!("selection_{}.csv", s.region),
            to_csv(&s.plants, &["plant_id", "state", "region", "mean_capacity_mw"]),
        ));
    }
    out.insert(0, ("selection_summary.csv".into(), summary));
    out
}

fn fixed(v: Option<f64>, decimals: usize) -> String {
    v.map_or_else(|| "n/a".into(), |v| format!("{v:.decimals$}"))
}

impl Findings {
    pub fn csvs(&self) -> Vec<(String, String)> {
        vec![
            (
                "seasonal_means.csv".into(),
                to_csv(&self.seasonal_means, &["series", "unit", "season", "n", "mean"]),
            ),
            (
                "correlations.csv".into(),
                to_csv(&self.correlations, &["region", "fuels", "n", "r", "note"]),
            ),
            (
                "fits.csv".into(),
                to_csv(
                    &self.fits,
                    &[
                        "region",
                        "fuels",
                        "season",
                        "n",
                        "slope_per_mw",
                        "slope_per_gw",
                        "intercept",
                        "r_squared",
                        "note",
                    ],
                ),
            ),
            (
                "slope_comparisons.csv".into(),
                to_csv(
                    &self.comparisons,
                    &[
                        "fuels",
                        "season",
                        "first",
                        "second",
                        "steeper",
                        "difference_per_mw",
                        "difference_per_gw",
                    ],
                ),
            ),
            (
                "winter_levels.csv".into(),
                to_csv(
                    &self.winter_levels,
                    &["fuels", "month", "first", "first_value", "second", "second_value", "first_higher"],
                ),
            ),
        ]
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("findings serialize");
        s.push('\n');
        s
    }

    /// Human-readable summary. RCFs to 4 decimals, prices to 2, loads to
    /// whole MW, slopes per GW.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "Regional capacity factor findings");
        let _ = writeln!(out, "window: {}", self.window);

        let _ = writeln!(out, "\nSelected plants");
        for s in &self.selection {
            let fuels: Vec<String> = s
                .capacity_gw
                .iter()
                .map(|(f, gw)| format!("{f} {gw:.3}"))
                .collect();
            let _ = writeln!(
                out,
                "  {}: {} plants, {:.3} GW at {} ({})",
                s.region,
                s.plant_count,
                s.total_capacity_gw,
                s.summary_month,
                fuels.join(", ")
            );
        }

        let _ = writeln!(out, "\nSeasonal means");
        for m in &self.seasonal_means {
            let value = match m.unit.as_str() {
                "MW" => m.mean.map_or_else(|| "n/a".into(), |v| format!("{v:.0} MW")),
                "USD/MMBtu" => m.mean.map_or_else(|| "n/a".into(), |v| format!("{v:.2} USD/MMBtu")),
                _ => fixed(m.mean, 4),
            };
            let _ = writeln!(out, "  {:<36} {:<10} n={:<3} {}", m.series, m.season, m.n, value);
        }

        let _ = writeln!(out, "\nCorrelation of RCF with system load");
        for c in &self.correlations {
            let name = format!("{} {}", c.region, c.fuels);
            let _ = match &c.note {
                Some(note) => writeln!(out, "  {name:<28} n={:<3} {note}", c.n),
                None => writeln!(out, "  {name:<28} n={:<3} r={}", c.n, fixed(c.r, 4)),
            };
        }

        let _ = writeln!(out, "\nRCF versus system load regressions (slope per GW)");
        for f in &self.fits {
            let name = format!("{} {} {}", f.region, f.fuels, f.season);
            let _ = match &f.note {
                Some(note) => writeln!(out, "  {name:<40} n={:<3} {note}", f.n),
                None => writeln!(
                    out,
                    "  {name:<40} n={:<3} slope={:.5} intercept={} r2={}",
                    f.n,
                    f.slope_per_gw.unwrap_or(f64::NAN),
                    fixed(f.intercept, 4),
                    fixed(f.r_squared, 4)
                ),
            };
        }

        if !self.comparisons.is_empty() {
            let _ = writeln!(out, "\nSlope comparisons");
            for c in &self.comparisons {
                let _ = if c.steeper == "equal" {
                    writeln!(out, "  {} {}: {} and {} slopes are equal", c.fuels, c.season, c.first, c.second)
                } else {
                    writeln!(
                        out,
                        "  {} {}: {} steeper by {:.5} per GW",
                        c.fuels, c.season, c.steeper, c.difference_per_gw
                    )
                };
            }
        }

        let mut by_fuels: BTreeMap<&str, Vec<&WinterLevel>> = BTreeMap::new();
        for w in &self.winter_levels {
            by_fuels.entry(&w.fuels).or_default().push(w);
        }
        if !by_fuels.is_empty() {
            let _ = writeln!(out, "\nWinter RCF levels");
        }
        for (fuels, rows) in by_fuels {
            let higher = rows.iter().filter(|w| w.first_higher).count();
            let _ = writeln!(
                out,
                "  {fuels}: {} above {} in {higher} of {} winter months",
                rows[0].first,
                rows[0].second,
                rows.len()
            );
            for w in rows {
                let _ = writeln!(
                    out,
                    "    {}  {} {:.4}  {} {:.4}",
                    w.month, w.first, w.first_value, w.second, w.second_value
                );
            }
        }
        out
    }
}
