//! Correlation, seasonal partitioning and simple linear regression of
//! capacity factor against system load.

use std::cmp::Ordering;

use serde::Serialize;

use crate::metrics::MonthlySeries;
use crate::regions::{season_of, RegionConfig, Season, YearMonth};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum AnalysisError {
    #[error("need at least 2 points, have {0}")]
    InsufficientData(usize),
    #[error("correlation undefined: {0} has zero variance")]
    UndefinedCorrelation(&'static str),
    #[error("regression undefined: x has zero variance")]
    DegenerateFit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairPoint {
    pub month: YearMonth,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlignedPairs {
    pub x_label: String,
    pub y_label: String,
    pub pairs: Vec<PairPoint>,
}

impl AlignedPairs {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn with_pairs(&self, pairs: Vec<PairPoint>) -> Self {
        AlignedPairs {
            x_label: self.x_label.clone(),
            y_label: self.y_label.clone(),
            pairs,
        }
    }
}

/// Inner join on month.
pub fn align(x: &MonthlySeries, y: &MonthlySeries) -> AlignedPairs {
    let mut pairs = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < x.points.len() && j < y.points.len() {
        let (a, b) = (&x.points[i], &y.points[j]);
        match a.month.cmp(&b.month) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                pairs.push(PairPoint {
                    month: a.month,
                    x: a.value,
                    y: b.value,
                });
                i += 1;
                j += 1;
            }
        }
    }
    AlignedPairs {
        x_label: x.label.clone(),
        y_label: y.label.clone(),
        pairs,
    }
}

struct Moments {
    n: usize,
    mean_x: f64,
    mean_y: f64,
    sxx: f64,
    syy: f64,
    sxy: f64,
}

/// Centered second moments, two-pass for stability at load-scale x values.
fn moments(pairs: &AlignedPairs) -> Result<Moments, AnalysisError> {
    let n = pairs.len();
    if n < 2 {
        return Err(AnalysisError::InsufficientData(n));
    }
    let nf = n as f64;
    let mean_x = pairs.pairs.iter().map(|p| p.x).sum::<f64>() / nf;
    let mean_y = pairs.pairs.iter().map(|p| p.y).sum::<f64>() / nf;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for p in &pairs.pairs {
        let dx = p.x - mean_x;
        let dy = p.y - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    Ok(Moments {
        n,
        mean_x,
        mean_y,
        sxx,
        syy,
        sxy,
    })
}

/// Pearson product-moment correlation.
pub fn pearson(pairs: &AlignedPairs) -> Result<f64, AnalysisError> {
    let m = moments(pairs)?;
    if m.sxx == 0.0 {
        return Err(AnalysisError::UndefinedCorrelation("x"));
    }
    if m.syy == 0.0 {
        return Err(AnalysisError::UndefinedCorrelation("y"));
    }
    Ok((m.sxy / (m.sxx * m.syy).sqrt()).clamp(-1.0, 1.0))
}

/// Partition by season; order within each half follows the input.
pub fn seasonal_split(pairs: &AlignedPairs, config: &RegionConfig) -> (AlignedPairs, AlignedPairs) {
    let (winter, non_winter): (Vec<PairPoint>, Vec<PairPoint>) = pairs
        .pairs
        .iter()
        .partition(|p| season_of(p.month, config) == Season::Winter);
    (pairs.with_pairs(winter), pairs.with_pairs(non_winter))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegressionFit {
    /// Change in y per unit x (per MW for load regressions).
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n: usize,
}

impl RegressionFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Ordinary least squares line through `pairs`.
///
/// R² is `1 - SS_res / SS_tot`, taken as 1 when y is constant (the fit is
/// then exact).
pub fn ols_fit(pairs: &AlignedPairs) -> Result<RegressionFit, AnalysisError> {
    let m = moments(pairs)?;
    if m.sxx == 0.0 {
        return Err(AnalysisError::DegenerateFit);
    }
    let slope = m.sxy / m.sxx;
    let intercept = m.mean_y - slope * m.mean_x;
    let ss_res: f64 = pairs
        .pairs
        .iter()
        .map(|p| {
            let r = (p.y - m.mean_y) - slope * (p.x - m.mean_x);
            r * r
        })
        .sum();
    let r_squared = if m.syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / m.syy).clamp(0.0, 1.0)
    };
    Ok(RegressionFit {
        slope,
        intercept,
        r_squared,
        n: m.n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeOrdering {
    FirstLarger,
    SecondLarger,
    Equal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeComparison {
    pub ordering: SlopeOrdering,
    /// `|slope_a - slope_b|`.
    pub difference: f64,
}

/// Exact float equality counts as a tie.
pub fn compare_slopes(a: &RegressionFit, b: &RegressionFit) -> SlopeComparison {
    let ordering = if a.slope > b.slope {
        SlopeOrdering::FirstLarger
    } else if a.slope < b.slope {
        SlopeOrdering::SecondLarger
    } else {
        SlopeOrdering::Equal
    };
    SlopeComparison {
        ordering,
        difference: (a.slope - b.slope).abs(),
    }
}
