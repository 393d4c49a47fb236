//! Static SVG charts.
//!
//! Output is a pure function of the inputs: coordinates are written with a
//! fixed number of decimals and elements are emitted in input order, so the
//! same series always produce the same bytes.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::analysis::{ols_fit, AlignedPairs};
use crate::metrics::{MonthlySeries, Unit};
use crate::regions::YearMonth;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ChartError {
    #[error("series {0:?} has no points")]
    EmptySeries(String),
    #[error("chart {0:?} has nothing to plot")]
    NothingToPlot(String),
    #[error("{0}")]
    UnitMismatch(String),
}

const PALETTE: [&str; 8] = [
    "#ff7f0e", "#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Time series against two y axes: dimensionless series on the left, one
/// physical unit on the right.
#[derive(Debug, Clone)]
pub struct DualAxisChart<'a> {
    pub title: String,
    pub left_label: String,
    pub right_label: String,
    pub left: Vec<&'a MonthlySeries>,
    pub right: Vec<&'a MonthlySeries>,
}

#[derive(Debug, Clone)]
pub struct ScatterSeries<'a> {
    pub label: String,
    pub pairs: &'a AlignedPairs,
}

#[derive(Debug, Clone)]
pub struct ScatterPanel<'a> {
    pub title: String,
    pub series: Vec<ScatterSeries<'a>>,
}

/// Side-by-side scatter panels, each series with its least-squares line.
#[derive(Debug, Clone)]
pub struct ScatterChart<'a> {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub panels: Vec<ScatterPanel<'a>>,
}

#[derive(Debug, Clone)]
pub enum ChartSpec<'a> {
    DualAxis(DualAxisChart<'a>),
    Scatter(ScatterChart<'a>),
}

pub fn emit_chart(spec: &ChartSpec<'_>) -> Result<String, ChartError> {
    match spec {
        ChartSpec::DualAxis(c) => dual_axis(c),
        ChartSpec::Scatter(c) => scatter(c),
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Axis range with "nice" tick spacing covering `[lo, hi]`.
#[derive(Debug, Clone, Copy)]
struct Scale {
    lo: f64,
    hi: f64,
    step: f64,
}

impl Scale {
    fn covering(lo: f64, hi: f64) -> Self {
        let (lo, hi) = if lo == hi {
            let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
            (lo - pad, hi + pad)
        } else {
            (lo, hi)
        };
        let raw = (hi - lo) / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 2.5, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|s| *s >= raw)
            .unwrap_or(10.0 * mag);
        Scale {
            lo: (lo / step).floor() * step,
            hi: (hi / step).ceil() * step,
            step,
        }
    }

    fn ticks(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step).round() as i64;
        (0..=n).map(|i| self.lo + i as f64 * self.step).collect()
    }

    fn decimals(&self) -> usize {
        (0..6)
            .find(|d| {
                let s = self.step * 10f64.powi(*d as i32);
                (s - s.round()).abs() < 1e-9
            })
            .unwrap_or(6)
    }

    fn map(&self, v: f64, from: f64, to: f64) -> f64 {
        from + (v - self.lo) / (self.hi - self.lo) * (to - from)
    }
}

fn value_range<I: Iterator<Item = f64>>(values: I) -> Option<(f64, f64)> {
    values.fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
}

fn open_svg(out: &mut String, width: f64, height: f64, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        width / 2.0,
        escape(title)
    );
}

fn y_axis(out: &mut String, scale: &Scale, x: f64, top: f64, bottom: f64, left_side: bool, label: &str) {
    let _ = writeln!(out, r#"<line x1="{x:.2}" y1="{top:.2}" x2="{x:.2}" y2="{bottom:.2}" stroke="black"/>"#);
    let (tick, anchor, text_dx) = if left_side { (-5.0, "end", -8.0) } else { (5.0, "start", 8.0) };
    for v in scale.ticks() {
        let y = scale.map(v, bottom, top);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="black"/>"#,
            x + tick
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="{anchor}">{:.*}</text>"#,
            x + text_dx,
            y + 4.0,
            scale.decimals(),
            v
        );
    }
    let lx = if left_side { x - 55.0 } else { x + 60.0 };
    let ly = (top + bottom) / 2.0;
    let _ = writeln!(
        out,
        r#"<text x="{lx:.2}" y="{ly:.2}" text-anchor="middle" transform="rotate(-90 {lx:.2} {ly:.2})">{}</text>"#,
        escape(label)
    );
}

fn legend(out: &mut String, entries: &[(String, &str)], x: f64, y: f64) {
    for (i, (label, color)) in entries.iter().enumerate() {
        let ey = y + i as f64 * 16.0;
        let _ = writeln!(
            out,
            r#"<rect x="{x:.2}" y="{:.2}" width="12" height="12" fill="{color}"/>"#,
            ey - 10.0
        );
        let _ = writeln!(out, r#"<text x="{:.2}" y="{ey:.2}">{}</text>"#, x + 18.0, escape(label));
    }
}

fn dual_axis(chart: &DualAxisChart<'_>) -> Result<String, ChartError> {
    if chart.left.is_empty() || chart.right.is_empty() {
        return Err(ChartError::NothingToPlot(chart.title.clone()));
    }
    for s in chart.left.iter().chain(&chart.right) {
        if s.is_empty() {
            return Err(ChartError::EmptySeries(s.label.clone()));
        }
    }
    if let Some(s) = chart.left.iter().find(|s| s.unit != Unit::Dimensionless) {
        return Err(ChartError::UnitMismatch(format!(
            "left axis is dimensionless but {} is in {}",
            s.label, s.unit
        )));
    }
    let right_unit = chart.right[0].unit;
    if let Some(s) = chart.right.iter().find(|s| s.unit != right_unit || s.unit == Unit::Dimensionless) {
        return Err(ChartError::UnitMismatch(format!(
            "right axis must carry one physical unit; {} is in {}",
            s.label, s.unit
        )));
    }

    let months: BTreeSet<YearMonth> = chart
        .left
        .iter()
        .chain(&chart.right)
        .flat_map(|s| s.points.iter().map(|p| p.month))
        .collect();
    let months: Vec<YearMonth> = months.into_iter().collect();
    let index_of = |m: YearMonth| months.binary_search(&m).expect("collected month") as f64;

    let (width, height) = (960.0, 520.0);
    let (left, right, top, bottom) = (80.0, width - 90.0, 45.0, height - 120.0);
    let span = (months.len().max(2) - 1) as f64;
    let x_of = |m: YearMonth| {
        if months.len() == 1 {
            (left + right) / 2.0
        } else {
            left + index_of(m) / span * (right - left)
        }
    };

    let lrange = value_range(chart.left.iter().flat_map(|s| s.values())).expect("non-empty");
    let rrange = value_range(chart.right.iter().flat_map(|s| s.values())).expect("non-empty");
    let lscale = Scale::covering(lrange.0, lrange.1);
    let rscale = Scale::covering(rrange.0, rrange.1);

    let mut out = String::new();
    open_svg(&mut out, width, height, &chart.title);
    let _ = writeln!(out, r#"<line x1="{left:.2}" y1="{bottom:.2}" x2="{right:.2}" y2="{bottom:.2}" stroke="black"/>"#);
    let label_every = months.len().div_ceil(15).max(1);
    for (i, m) in months.iter().enumerate() {
        let x = x_of(*m);
        let _ = writeln!(out, r#"<line x1="{x:.2}" y1="{bottom:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, bottom + 5.0);
        if i % label_every == 0 {
            let ty = bottom + 18.0;
            let _ = writeln!(
                out,
                r#"<text x="{x:.2}" y="{ty:.2}" text-anchor="end" transform="rotate(-45 {x:.2} {ty:.2})">{m}</text>"#
            );
        }
    }
    y_axis(&mut out, &lscale, left, top, bottom, true, &chart.left_label);
    y_axis(&mut out, &rscale, right, top, bottom, false, &chart.right_label);

    let mut entries = Vec::new();
    let sides = chart.left.iter().map(|s| (s, &lscale)).chain(chart.right.iter().map(|s| (s, &rscale)));
    for (i, (series, scale)) in sides.enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = series
            .points
            .iter()
            .map(|p| format!("{:.2},{:.2}", x_of(p.month), scale.map(p.value, bottom, top)))
            .collect();
        if coords.len() > 1 {
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
                coords.join(" ")
            );
        }
        for c in &coords {
            let (cx, cy) = c.split_once(',').expect("formatted pair");
            let _ = writeln!(out, r#"<circle cx="{cx}" cy="{cy}" r="3" fill="{color}"/>"#);
        }
        entries.push((series.label.clone(), color));
    }
    legend(&mut out, &entries, left, height - 40.0 - 16.0 * (entries.len() as f64 - 1.0).max(0.0) + 20.0);
    out.push_str("</svg>\n");
    Ok(out)
}

fn scatter(chart: &ScatterChart<'_>) -> Result<String, ChartError> {
    if chart.panels.is_empty() || chart.panels.iter().all(|p| p.series.is_empty()) {
        return Err(ChartError::NothingToPlot(chart.title.clone()));
    }
    for s in chart.panels.iter().flat_map(|p| &p.series) {
        if s.pairs.is_empty() {
            return Err(ChartError::EmptySeries(s.label.clone()));
        }
    }

    let panel_w = 460.0;
    let n_series = chart.panels.iter().map(|p| p.series.len()).max().unwrap_or(0) as f64;
    let width = 40.0 + panel_w * chart.panels.len() as f64;
    let height = 460.0 + 16.0 * n_series;
    let (top, bottom) = (60.0, 400.0);

    let mut out = String::new();
    open_svg(&mut out, width, height, &chart.title);

    for (pi, panel) in chart.panels.iter().enumerate() {
        let left = 40.0 + pi as f64 * panel_w + 70.0;
        let right = left + panel_w - 100.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="45" text-anchor="middle" font-size="13">{}</text>"#,
            (left + right) / 2.0,
            escape(&panel.title)
        );
        let points = || panel.series.iter().flat_map(|s| s.pairs.pairs.iter());
        let (Some(xr), Some(yr)) = (value_range(points().map(|p| p.x)), value_range(points().map(|p| p.y))) else {
            continue;
        };
        let xs = Scale::covering(xr.0, xr.1);
        let ys = Scale::covering(yr.0, yr.1);

        let _ = writeln!(out, r#"<line x1="{left:.2}" y1="{bottom:.2}" x2="{right:.2}" y2="{bottom:.2}" stroke="black"/>"#);
        for v in xs.ticks() {
            let x = xs.map(v, left, right);
            let _ = writeln!(out, r#"<line x1="{x:.2}" y1="{bottom:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, bottom + 5.0);
            let _ = writeln!(
                out,
                r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{:.*}</text>"#,
                bottom + 18.0,
                xs.decimals(),
                v
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            (left + right) / 2.0,
            bottom + 38.0,
            escape(&chart.x_label)
        );
        y_axis(&mut out, &ys, left, top, bottom, true, &chart.y_label);

        let mut entries = Vec::new();
        for (si, s) in panel.series.iter().enumerate() {
            let color = PALETTE[si % PALETTE.len()];
            for p in &s.pairs.pairs {
                let _ = writeln!(
                    out,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{color}" fill-opacity="0.8"/>"#,
                    xs.map(p.x, left, right),
                    ys.map(p.y, bottom, top)
                );
            }
            let mut label = s.label.clone();
            if let Ok(fit) = ols_fit(s.pairs) {
                let (x0, x1) = value_range(s.pairs.pairs.iter().map(|p| p.x)).expect("non-empty");
                let _ = writeln!(
                    out,
                    r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="2"/>"#,
                    xs.map(x0, left, right),
                    ys.map(fit.predict(x0), bottom, top),
                    xs.map(x1, left, right),
                    ys.map(fit.predict(x1), bottom, top)
                );
                let _ = write!(label, " (fit n={})", fit.n);
            }
            entries.push((label, color));
        }
        legend(&mut out, &entries, left, bottom + 62.0);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::PairPoint;

    fn series(label: &str, unit: Unit, values: &[f64]) -> MonthlySeries {
        let mut s = MonthlySeries::new(label, unit);
        let mut m = YearMonth::new(2015, 7).unwrap();
        for v in values {
            s.push(m, *v, 1);
            m = m.succ();
        }
        s
    }

    fn pairs(xy: &[(f64, f64)]) -> AlignedPairs {
        let mut m = YearMonth::new(2015, 7).unwrap();
        AlignedPairs {
            x_label: "load".into(),
            y_label: "rcf".into(),
            pairs: xy
                .iter()
                .map(|(x, y)| {
                    let p = PairPoint { month: m, x: *x, y: *y };
                    m = m.succ();
                    p
                })
                .collect(),
        }
    }

    #[test]
    fn dual_axis_chart() {
        let west: Vec<f64> = (0..30).map(|i| 0.4 + 0.01 * f64::from(i % 7)).collect();
        let mid: Vec<f64> = (0..30).map(|i| 0.35 + 0.01 * f64::from(i % 5)).collect();
        let load: Vec<f64> = (0..30).map(|i| 90000.0 + 1000.0 * f64::from(i % 6)).collect();
        let (w, m, l) = (
            series("rcf_western", Unit::Dimensionless, &west),
            series("rcf_mid_atlantic", Unit::Dimensionless, &mid),
            series("system_load", Unit::Mw, &load),
        );
        let spec = ChartSpec::DualAxis(DualAxisChart {
            title: "RCF & load".into(),
            left_label: "RCF".into(),
            right_label: "Load (MW)".into(),
            left: vec![&w, &m],
            right: vec![&l],
        });
        let svg = emit_chart(&spec).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert_eq!(svg.matches("<circle").count(), 90);
        assert!(svg.contains("RCF &amp; load"));
        assert_eq!(svg, emit_chart(&spec).unwrap());
    }

    #[test]
    fn single_point_series() {
        let (w, l) = (
            series("rcf", Unit::Dimensionless, &[0.5]),
            series("load", Unit::Mw, &[90000.0]),
        );
        let svg = emit_chart(&ChartSpec::DualAxis(DualAxisChart {
            title: "t".into(),
            left_label: "RCF".into(),
            right_label: "MW".into(),
            left: vec![&w],
            right: vec![&l],
        }))
        .unwrap();
        assert_eq!(svg.matches("<circle").count(), 2);
        assert_eq!(svg.matches("<polyline").count(), 0);
    }

    #[test]
    fn dual_axis_errors() {
        let (w, l, p, e) = (
            series("rcf", Unit::Dimensionless, &[0.5]),
            series("load", Unit::Mw, &[90000.0]),
            series("price", Unit::UsdPerMmbtu, &[3.0]),
            series("empty", Unit::Mw, &[]),
        );
        let chart = |left: Vec<&'static MonthlySeries>, right| {
            emit_chart(&ChartSpec::DualAxis(DualAxisChart {
                title: "t".into(),
                left_label: "l".into(),
                right_label: "r".into(),
                left,
                right,
            }))
        };
        let leak = |s: MonthlySeries| -> &'static MonthlySeries { Box::leak(Box::new(s)) };
        let (w, l, p, e) = (leak(w), leak(l), leak(p), leak(e));
        assert_eq!(chart(vec![w], vec![e]), Err(ChartError::EmptySeries("empty".into())));
        assert!(matches!(chart(vec![w], vec![l, p]), Err(ChartError::UnitMismatch(_))));
        assert!(matches!(chart(vec![l], vec![p]), Err(ChartError::UnitMismatch(_))));
        assert!(matches!(chart(vec![w], vec![w]), Err(ChartError::UnitMismatch(_))));
        assert!(matches!(chart(vec![w], vec![]), Err(ChartError::NothingToPlot(_))));
    }

    #[test]
    fn scatter_two_panels() {
        let a = pairs(&[(90000.0, 0.4), (100000.0, 0.5), (110000.0, 0.55)]);
        let b = pairs(&[(95000.0, 0.3), (105000.0, 0.45)]);
        let c = pairs(&[(120000.0, 0.6)]);
        let spec = ChartSpec::Scatter(ScatterChart {
            title: "RCF vs load".into(),
            x_label: "Load (MW)".into(),
            y_label: "RCF".into(),
            panels: vec![
                ScatterPanel {
                    title: "non-winter".into(),
                    series: vec![
                        ScatterSeries { label: "western".into(), pairs: &a },
                        ScatterSeries { label: "mid_atlantic".into(), pairs: &b },
                    ],
                },
                ScatterPanel {
                    title: "winter".into(),
                    series: vec![ScatterSeries { label: "western".into(), pairs: &c }],
                },
            ],
        });
        let svg = emit_chart(&spec).unwrap();
        assert!(svg.contains(">non-winter<") && svg.contains(">winter<"));
        assert_eq!(svg.matches("<circle").count(), 6);
        // one fit line per series that can be fitted; the single winter point cannot
        assert_eq!(svg.matches("stroke-width=\"2\"").count(), 2);
        assert_eq!(svg, emit_chart(&spec).unwrap());

        let empty = pairs(&[]);
        let bad = ChartSpec::Scatter(ScatterChart {
            title: "x".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            panels: vec![ScatterPanel {
                title: "p".into(),
                series: vec![ScatterSeries { label: "none".into(), pairs: &empty }],
            }],
        });
        assert_eq!(emit_chart(&bad), Err(ChartError::EmptySeries("none".into())));
    }

    #[test]
    fn scale_ticks() {
        let s = Scale::covering(0.31, 0.78);
        assert!(s.lo <= 0.31 && s.hi >= 0.78);
        assert_eq!(s.step, 0.1);
        assert_eq!(s.decimals(), 1);
        let s = Scale::covering(82000.0, 131000.0);
        assert_eq!(s.step, 10000.0);
        assert_eq!(s.decimals(), 0);
        assert_eq!(Scale::covering(0.0, 0.25).decimals(), 2);
        let flat = Scale::covering(5.0, 5.0);
        assert!(flat.lo < 5.0 && flat.hi > 5.0);
    }
}
