//! Regional capacity factor analytics for wholesale power markets.
//!
//! Plant-level monthly generation and capacity are aggregated into regional
//! capacity factors, set against peak-hour system load and regional natural
//! gas prices, and summarized by season with simple linear regressions.

pub mod analysis;
pub mod chart;
pub mod ingest;
pub mod metrics;
pub mod pipeline;
pub mod regions;
pub mod report;
pub mod selection;
pub mod synthetic;
