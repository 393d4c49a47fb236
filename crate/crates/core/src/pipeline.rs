//! Full run: ingest, select, build series, analyze, render, write.
//!
//! Every input is checked and every output rendered in memory before the
//! first file is written, so a fatal error never leaves partial output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{self, BufReader};
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::analysis::{align, AlignedPairs};
use crate::chart::{emit_chart, ChartError, ChartSpec, DualAxisChart, ScatterChart, ScatterPanel, ScatterSeries};
use crate::ingest::{
    parse_capacity, parse_gas_prices, parse_generation, parse_hourly_load, CapacityRecord, Dataset,
    GasPriceRecord, GenerationRecord, HourlyLoadRecord, IngestError, IngestWarning, Parsed,
};
use crate::metrics::{
    compute_monthly_load, compute_rcf, compute_regional_gas_price, MetricsError, MonthlySeries, RcfQuery,
};
use crate::regions::{CalendarError, ConfigError, Fuel, MonthWindow, Region, RegionConfig, Season};
use crate::report::{self, Findings};
use crate::selection::{build_profiles, select_plants, SelectionError, SelectionResult};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("manifest {path}: {message}")]
    Manifest { path: PathBuf, message: String },
    #[error("manifest does not name the {0} input")]
    MissingInput(Dataset),
    #[error("{dataset} input not found: {path}")]
    InputNotFound { dataset: Dataset, path: PathBuf },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("config {path}: {source}")]
    ConfigFile {
        path: PathBuf,
        #[source]
        source: ConfigError,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Window(#[from] CalendarError),
    #[error("{path}: {source}")]
    Ingest {
        path: PathBuf,
        #[source]
        source: IngestError,
    },
    #[error(transparent)]
    Selection(#[from] SelectionError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Chart(#[from] ChartError),
}

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io {
        path: path.to_owned(),
        source,
    }
}

/// Which plant-fuel buckets an RCF series covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FuelSet {
    All,
    /// Coal and natural gas together.
    Fossil,
    Only(Fuel),
}

impl FuelSet {
    pub fn label(self) -> &'static str {
        match self {
            FuelSet::All => "all",
            FuelSet::Fossil => "fossil",
            FuelSet::Only(f) => f.label(),
        }
    }

    pub fn query(self, region: Region, window: MonthWindow) -> RcfQuery {
        match self {
            FuelSet::All => RcfQuery::all_fuels(region, window),
            FuelSet::Fossil => RcfQuery::fuels(region, [Fuel::Coal, Fuel::NaturalGas], window),
            FuelSet::Only(f) => RcfQuery::fuel(region, f, window),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineManifest {
    pub generation: Option<PathBuf>,
    pub capacity: Option<PathBuf>,
    pub gas_prices: Option<PathBuf>,
    pub hourly_load: Option<PathBuf>,
    pub config: Option<PathBuf>,
    pub out: PathBuf,
    pub window: Option<MonthWindow>,
    pub regions: Vec<Region>,
    /// Fuels that get their own RCF series next to the all-fuel and fossil ones.
    pub fuels: Vec<Fuel>,
}

impl Default for PipelineManifest {
    fn default() -> Self {
        PipelineManifest {
            generation: None,
            capacity: None,
            gas_prices: None,
            hourly_load: None,
            config: None,
            out: PathBuf::from("out"),
            window: None,
            regions: vec![Region::Western, Region::MidAtlantic],
            fuels: vec![Fuel::Coal, Fuel::NaturalGas],
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestFile {
    generation: Option<PathBuf>,
    capacity: Option<PathBuf>,
    gas_prices: Option<PathBuf>,
    hourly_load: Option<PathBuf>,
    config: Option<PathBuf>,
    out: Option<PathBuf>,
    window: Option<String>,
    regions: Option<Vec<Region>>,
    fuels: Option<Vec<Fuel>>,
}

impl PipelineManifest {
    /// Read a TOML manifest. Relative paths are taken from the manifest's
    /// directory.
    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = fs::read_to_string(path).map_err(io_error(path))?;
        let bad = |message: String| PipelineError::Manifest {
            path: path.to_owned(),
            message,
        };
        let file: ManifestFile = toml::from_str(&text).map_err(|e| bad(e.to_string()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let resolve = |p: Option<PathBuf>| p.map(|p| base.join(p));
        let defaults = PipelineManifest::default();
        let window = file
            .window
            .map(|w| w.parse::<MonthWindow>())
            .transpose()
            .map_err(|e| bad(e.to_string()))?;
        let regions = file.regions.unwrap_or(defaults.regions);
        if regions.is_empty() {
            return Err(bad("regions must not be empty".into()));
        }
        Ok(PipelineManifest {
            generation: resolve(file.generation),
            capacity: resolve(file.capacity),
            gas_prices: resolve(file.gas_prices),
            hourly_load: resolve(file.hourly_load),
            config: resolve(file.config),
            out: base.join(file.out.unwrap_or(defaults.out)),
            window,
            regions,
            fuels: file.fuels.unwrap_or(defaults.fuels),
        })
    }

    /// All four inputs, each confirmed to exist.
    pub fn input_paths(&self) -> Result<InputPaths, PipelineError> {
        let check = |dataset: Dataset, p: &Option<PathBuf>| -> Result<PathBuf, PipelineError> {
            let p = p.clone().ok_or(PipelineError::MissingInput(dataset))?;
            if !p.is_file() {
                return Err(PipelineError::InputNotFound { dataset, path: p });
            }
            Ok(p)
        };
        Ok(InputPaths {
            generation: check(Dataset::Generation, &self.generation)?,
            capacity: check(Dataset::Capacity, &self.capacity)?,
            gas_prices: check(Dataset::GasPrices, &self.gas_prices)?,
            hourly_load: check(Dataset::HourlyLoad, &self.hourly_load)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputPaths {
    pub generation: PathBuf,
    pub capacity: PathBuf,
    pub gas_prices: PathBuf,
    pub hourly_load: PathBuf,
}

/// Default config, or the one in `path`, with an optional window override.
pub fn load_config(path: Option<&Path>, window: Option<MonthWindow>) -> Result<RegionConfig, PipelineError> {
    let config = match path {
        None => RegionConfig::default(),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(io_error(p))?;
            RegionConfig::from_toml(&text).map_err(|source| PipelineError::ConfigFile {
                path: p.to_owned(),
                source,
            })?
        }
    };
    match window {
        None => Ok(config),
        Some(w) => Ok(config.with_study_window(w)?),
    }
}

fn open(dataset: Dataset, path: &Path) -> Result<BufReader<File>, PipelineError> {
    File::open(path).map(BufReader::new).map_err(|source| {
        if source.kind() == io::ErrorKind::NotFound {
            PipelineError::InputNotFound {
                dataset,
                path: path.to_owned(),
            }
        } else {
            PipelineError::Io {
                path: path.to_owned(),
                source,
            }
        }
    })
}

fn ingest_error(path: &Path) -> impl FnOnce(IngestError) -> PipelineError + '_ {
    move |source| PipelineError::Ingest {
        path: path.to_owned(),
        source,
    }
}

pub fn read_generation(path: &Path, config: &RegionConfig) -> Result<Parsed<GenerationRecord>, PipelineError> {
    parse_generation(open(Dataset::Generation, path)?, config).map_err(ingest_error(path))
}

pub fn read_capacity(path: &Path, config: &RegionConfig) -> Result<Parsed<CapacityRecord>, PipelineError> {
    parse_capacity(open(Dataset::Capacity, path)?, config).map_err(ingest_error(path))
}

pub fn read_gas_prices(path: &Path) -> Result<Parsed<GasPriceRecord>, PipelineError> {
    parse_gas_prices(open(Dataset::GasPrices, path)?).map_err(ingest_error(path))
}

pub fn read_hourly_load(path: &Path) -> Result<Parsed<HourlyLoadRecord>, PipelineError> {
    parse_hourly_load(open(Dataset::HourlyLoad, path)?).map_err(ingest_error(path))
}

#[derive(Debug, Clone)]
pub struct Inputs {
    pub generation: Parsed<GenerationRecord>,
    pub capacity: Parsed<CapacityRecord>,
    pub gas_prices: Parsed<GasPriceRecord>,
    pub hourly_load: Parsed<HourlyLoadRecord>,
}

impl Inputs {
    pub fn read(paths: &InputPaths, config: &RegionConfig) -> Result<Self, PipelineError> {
        Ok(Inputs {
            generation: read_generation(&paths.generation, config)?,
            capacity: read_capacity(&paths.capacity, config)?,
            gas_prices: read_gas_prices(&paths.gas_prices)?,
            hourly_load: read_hourly_load(&paths.hourly_load)?,
        })
    }

    fn summaries(&self) -> Vec<DatasetSummary> {
        fn summary<T>(dataset: Dataset, p: &Parsed<T>) -> DatasetSummary {
            DatasetSummary {
                dataset,
                rows_read: p.rows_read,
                rows_accepted: p.rows_accepted,
                warnings: p.warnings.clone(),
            }
        }
        vec![
            summary(Dataset::Generation, &self.generation),
            summary(Dataset::Capacity, &self.capacity),
            summary(Dataset::GasPrices, &self.gas_prices),
            summary(Dataset::HourlyLoad, &self.hourly_load),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionSeries {
    pub region: Region,
    pub fuels: FuelSet,
    pub series: MonthlySeries,
}

impl RegionSeries {
    pub fn file_stem(&self) -> String {
        format!("rcf_{}_{}", self.region, self.fuels.label())
    }
}

/// Everything one run computes, held in memory.
#[derive(Debug, Clone)]
pub struct Study {
    pub window: MonthWindow,
    pub regions: Vec<Region>,
    pub fuel_sets: Vec<FuelSet>,
    pub selections: Vec<SelectionResult>,
    pub rcf: Vec<RegionSeries>,
    pub load: MonthlySeries,
    pub gas: Vec<(Region, MonthlySeries)>,
    pub findings: Findings,
    /// Notes that belong to no single series.
    pub notes: Vec<String>,
    config: RegionConfig,
}

impl Study {
    pub fn compute(
        inputs: &Inputs,
        config: &RegionConfig,
        regions: &[Region],
        fuels: &[Fuel],
    ) -> Result<Self, PipelineError> {
        let window = config.study_window();
        let mut fuel_sets = vec![FuelSet::All, FuelSet::Fossil];
        fuel_sets.extend(fuels.iter().map(|f| FuelSet::Only(*f)));
        fuel_sets.dedup();

        let gen = &inputs.generation.records;
        let cap = &inputs.capacity.records;
        let profiles = build_profiles(gen, cap, config)?;
        let mut notes: Vec<String> = profiles
            .iter()
            .filter(|p| p.missing_capacity && regions.contains(&p.region))
            .map(|p| format!("plant {} reports generation but no capacity", p.plant_id))
            .collect();

        let mut selections = Vec::new();
        let mut rcf = Vec::new();
        let mut gas = Vec::new();
        for region in regions {
            let selection = select_plants(&profiles, *region, config);
            if let Some(note) = &selection.note {
                notes.push(format!("selection {region}: {note}"));
            }
            for set in &fuel_sets {
                let series = compute_rcf(&selection, gen, cap, &set.query(*region, window), config)?;
                rcf.push(RegionSeries {
                    region: *region,
                    fuels: *set,
                    series,
                });
            }
            selections.push(selection);
            if config.gas_states(*region).is_empty() {
                notes.push(format!("no gas-price states configured for {region}; gas series skipped"));
            } else {
                gas.push((
                    *region,
                    compute_regional_gas_price(&inputs.gas_prices.records, *region, window, config)?,
                ));
            }
        }
        let load = compute_monthly_load(&inputs.hourly_load.records, window, config);
        let findings = report::findings(config, window, regions, &selections, &rcf, &load, &gas);

        Ok(Study {
            window,
            regions: regions.to_vec(),
            fuel_sets,
            selections,
            rcf,
            load,
            gas,
            findings,
            notes,
            config: config.clone(),
        })
    }

    pub fn rcf_series(&self, region: Region, fuels: FuelSet) -> Option<&MonthlySeries> {
        self.rcf
            .iter()
            .find(|s| s.region == region && s.fuels == fuels)
            .map(|s| &s.series)
    }

    /// Series CSVs plus `report.txt` and `report.json`, keyed by path
    /// relative to the output directory.
    pub fn render_reports(&self) -> BTreeMap<String, String> {
        let mut files = BTreeMap::new();
        for s in &self.rcf {
            files.insert(format!("series/{}.csv", s.file_stem()), s.series.to_csv());
        }
        files.insert(format!("series/{}.csv", self.load.label), self.load.to_csv());
        for (_, s) in &self.gas {
            files.insert(format!("series/{}.csv", s.label), s.to_csv());
        }
        for (name, text) in report::selection_csvs(&self.selections) {
            files.insert(format!("series/{name}"), text);
        }
        for (name, text) in self.findings.csvs() {
            files.insert(format!("series/{name}"), text);
        }
        files.insert("report.txt".into(), self.findings.render_text());
        files.insert("report.json".into(), self.findings.render_json());
        files
    }

    /// The four charts, keyed by path relative to the output directory.
    pub fn render_charts(&self) -> Result<BTreeMap<String, String>, PipelineError> {
        let nonempty = |set: FuelSet| -> Vec<&MonthlySeries> {
            self.regions
                .iter()
                .filter_map(|r| self.rcf_series(*r, set))
                .filter(|s| !s.is_empty())
                .collect()
        };
        let gas: Vec<&MonthlySeries> = self.gas.iter().map(|(_, s)| s).filter(|s| !s.is_empty()).collect();
        let per_fuel: Vec<&MonthlySeries> = self
            .rcf
            .iter()
            .filter(|s| matches!(s.fuels, FuelSet::Only(_)) && !s.series.is_empty())
            .map(|s| &s.series)
            .collect();
        let load: Vec<&MonthlySeries> = if self.load.is_empty() { vec![] } else { vec![&self.load] };

        let mut files = BTreeMap::new();
        let charts = [
            (
                "charts/rcf_load.svg",
                ChartSpec::DualAxis(DualAxisChart {
                    title: "Regional capacity factors and system load".into(),
                    left_label: "RCF".into(),
                    right_label: "Load (MW)".into(),
                    left: nonempty(FuelSet::All),
                    right: load,
                }),
            ),
            (
                "charts/rcf_gas_price.svg",
                ChartSpec::DualAxis(DualAxisChart {
                    title: "Regional capacity factors and natural gas prices".into(),
                    left_label: "RCF".into(),
                    right_label: "NG price (USD/MMBtu)".into(),
                    left: nonempty(FuelSet::All),
                    right: gas.clone(),
                }),
            ),
            (
                "charts/fuel_rcf_gas_price.svg",
                ChartSpec::DualAxis(DualAxisChart {
                    title: "Capacity factors by fuel and natural gas prices".into(),
                    left_label: "RCF".into(),
                    right_label: "NG price (USD/MMBtu)".into(),
                    left: per_fuel,
                    right: gas,
                }),
            ),
        ];
        for (name, spec) in charts {
            files.insert(name.to_string(), emit_chart(&spec)?);
        }

        let mut panels: Vec<(Season, Vec<(String, AlignedPairs)>)> =
            vec![(Season::NonWinter, Vec::new()), (Season::Winter, Vec::new())];
        for region in &self.regions {
            let Some(fossil) = self.rcf_series(*region, FuelSet::Fossil) else { continue };
            let pairs = align(&self.load, fossil);
            let (winter, non_winter) = crate::analysis::seasonal_split(&pairs, &self.config);
            for (season, part) in [(Season::NonWinter, non_winter), (Season::Winter, winter)] {
                if !part.is_empty() {
                    let slot = panels.iter_mut().find(|(s, _)| *s == season).expect("both seasons");
                    slot.1.push((region.to_string(), part));
                }
            }
        }
        let scatter = ChartSpec::Scatter(ScatterChart {
            title: "Fossil capacity factors versus system load".into(),
            x_label: "Load (MW)".into(),
            y_label: "RCF (coal + natural gas)".into(),
            panels: panels
                .iter()
                .map(|(season, series)| ScatterPanel {
                    title: season.to_string().replace('_', "-"),
                    series: series
                        .iter()
                        .map(|(label, pairs)| ScatterSeries {
                            label: label.clone(),
                            pairs,
                        })
                        .collect(),
                })
                .collect(),
        });
        files.insert("charts/rcf_load_scatter.svg".into(), emit_chart(&scatter)?);
        Ok(files)
    }

    fn diagnostics(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = self.notes.iter().map(|n| ("run".to_string(), n.clone())).collect();
        let all = self
            .rcf
            .iter()
            .map(|s| &s.series)
            .chain(std::iter::once(&self.load))
            .chain(self.gas.iter().map(|(_, s)| s));
        for s in all {
            out.extend(s.diagnostics.iter().map(|d| (s.label.clone(), d.to_string())));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSummary {
    pub dataset: Dataset,
    pub rows_read: usize,
    pub rows_accepted: usize,
    pub warnings: Vec<IngestWarning>,
}

/// What a run read, warned about and wrote.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub datasets: Vec<DatasetSummary>,
    /// `(source, message)` for data-quality notes raised after ingest.
    pub diagnostics: Vec<(String, String)>,
    pub files: Vec<String>,
}

impl RunReport {
    /// Rows dropped during ingest.
    pub fn warning_count(&self) -> usize {
        self.datasets.iter().map(|d| d.warnings.len()).sum()
    }

    pub fn render(&self) -> String {
        let mut out = String::from("run report\n\ninputs\n");
        for d in &self.datasets {
            let _ = writeln!(
                out,
                "  {}: {} rows read, {} accepted, {} warnings",
                d.dataset,
                d.rows_read,
                d.rows_accepted,
                d.warnings.len()
            );
        }
        let _ = writeln!(out, "\nwarnings: {}", self.warning_count());
        for w in self.datasets.iter().flat_map(|d| &d.warnings) {
            let _ = writeln!(out, "  {w}");
        }
        let mut by_source: BTreeMap<&str, usize> = BTreeMap::new();
        for (source, _) in &self.diagnostics {
            *by_source.entry(source).or_default() += 1;
        }
        let _ = writeln!(out, "\ndiagnostics: {}", self.diagnostics.len());
        for (source, n) in &by_source {
            let _ = writeln!(out, "  {source}: {n}");
        }
        for (source, message) in &self.diagnostics {
            let _ = writeln!(out, "  {source}: {message}");
        }
        let _ = writeln!(out, "\noutputs: {}", self.files.len());
        for f in &self.files {
            let _ = writeln!(out, "  {f}");
        }
        out
    }
}

/// Write `files` under `out`, creating directories as needed.
pub fn write_outputs(out: &Path, files: &BTreeMap<String, String>) -> Result<(), PipelineError> {
    for (name, text) in files {
        let path = out.join(name);
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(io_error(dir))?;
        }
        fs::write(&path, text).map_err(io_error(&path))?;
    }
    Ok(())
}

/// Execute the whole pipeline described by `manifest`.
pub fn run_pipeline(manifest: &PipelineManifest) -> Result<RunReport, PipelineError> {
    let config = load_config(manifest.config.as_deref(), manifest.window)?;
    let paths = manifest.input_paths()?;
    let inputs = Inputs::read(&paths, &config)?;
    let study = Study::compute(&inputs, &config, &manifest.regions, &manifest.fuels)?;
    let mut files = study.render_reports();
    files.extend(study.render_charts()?);

    let mut listed: Vec<String> = files.keys().cloned().collect();
    listed.push("run_report.txt".into());
    listed.sort();
    let report = RunReport {
        datasets: inputs.summaries(),
        diagnostics: study.diagnostics(),
        files: listed,
    };
    files.insert("run_report.txt".into(), report.render());
    write_outputs(&manifest.out, &files)?;
    Ok(report)
}

/// Like [`run_pipeline`] without charts.
pub fn run_analysis(manifest: &PipelineManifest) -> Result<Study, PipelineError> {
    let config = load_config(manifest.config.as_deref(), manifest.window)?;
    let inputs = Inputs::read(&manifest.input_paths()?, &config)?;
    let study = Study::compute(&inputs, &config, &manifest.regions, &manifest.fuels)?;
    write_outputs(&manifest.out, &study.render_reports())?;
    Ok(study)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{generate, SyntheticOptions};

    fn fixture() -> (tempfile::TempDir, PipelineManifest) {
        let dir = tempfile::tempdir().unwrap();
        generate(&SyntheticOptions::default()).write_to(dir.path()).unwrap();
        let manifest = PipelineManifest::load(&dir.path().join("manifest.toml")).unwrap();
        (dir, manifest)
    }

    #[test]
    fn manifest_paths_are_relative_to_manifest() {
        let (dir, m) = fixture();
        assert_eq!(m.generation.as_deref(), Some(dir.path().join("generation.csv").as_path()));
        assert_eq!(m.out, dir.path().join("out"));
        assert_eq!(m.regions, vec![Region::Western, Region::MidAtlantic]);
        assert!(m.input_paths().is_ok());
    }

    #[test]
    fn manifest_rejects_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.toml");
        fs::write(&path, "generatoin = \"g.csv\"\n").unwrap();
        assert!(matches!(PipelineManifest::load(&path), Err(PipelineError::Manifest { .. })));
    }

    #[test]
    fn full_run_writes_everything() {
        let (_dir, m) = fixture();
        let report = run_pipeline(&m).unwrap();
        assert_eq!(report.warning_count(), 0);
        let charts: Vec<_> = fs::read_dir(m.out.join("charts")).unwrap().collect();
        assert_eq!(charts.len(), 4);
        let csvs = fs::read_dir(m.out.join("series")).unwrap().count();
        assert!(csvs >= 6);
        for f in ["report.txt", "report.json", "run_report.txt"] {
            assert!(m.out.join(f).is_file());
        }
    }

    #[test]
    fn missing_input_writes_nothing() {
        let (_dir, mut m) = fixture();
        m.hourly_load = None;
        assert!(matches!(
            run_pipeline(&m),
            Err(PipelineError::MissingInput(Dataset::HourlyLoad))
        ));
        assert!(!m.out.exists());

        m.hourly_load = Some(m.out.join("nope.csv"));
        let err = run_pipeline(&m).unwrap_err();
        assert!(err.to_string().contains("nope.csv"));
        assert!(!m.out.exists());
    }

    #[test]
    fn schema_error_names_column() {
        let (dir, m) = fixture();
        fs::write(dir.path().join("gas_prices.csv"), "month,state,price\n2016-01,OH,3.0\n").unwrap();
        let err = run_pipeline(&m).unwrap_err();
        assert!(err.to_string().contains("price_usd_per_mmbtu"), "{err}");
        assert!(!m.out.exists());
    }

    #[test]
    fn window_override() {
        let (_dir, mut m) = fixture();
        m.window = Some("2016-01..2016-06".parse().unwrap());
        let config = load_config(None, m.window).unwrap();
        let inputs = Inputs::read(&m.input_paths().unwrap(), &config).unwrap();
        let study = Study::compute(&inputs, &config, &m.regions, &m.fuels).unwrap();
        assert_eq!(study.load.len(), 6);
        assert_eq!(study.rcf_series(Region::Western, FuelSet::All).unwrap().len(), 6);
    }
}
