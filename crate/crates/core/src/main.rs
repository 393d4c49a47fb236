use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use rcf::ingest::{write_capacity, write_gas_prices, write_generation, write_hourly_load, Parsed};
use rcf::metrics::{compute_monthly_load, compute_rcf, compute_regional_gas_price, MonthlySeries, RcfQuery};
use rcf::pipeline::{self, load_config, run_analysis, run_pipeline, PipelineManifest};
use rcf::regions::{Fuel, MonthWindow, Region, RegionConfig};
use rcf::report::selection_csvs;
use rcf::selection::{build_profiles, select_plants};
use rcf::synthetic::{generate, SyntheticOptions};

#[derive(Parser)]
#[command(name = "rcf", version, about = "Regional capacity factor analytics")]
struct Cli {
    /// Region/fuel/season configuration (TOML).
    #[arg(long, global = true, env = "RCF_CONFIG")]
    config: Option<PathBuf>,
    /// Study window override, e.g. 2016-01..2016-12.
    #[arg(long, global = true)]
    window: Option<MonthWindow>,
    /// Output directory; commands print to stdout when it is omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Inputs {
    #[arg(long)]
    generation: Option<PathBuf>,
    #[arg(long)]
    capacity: Option<PathBuf>,
    #[arg(long)]
    gas_prices: Option<PathBuf>,
    #[arg(long)]
    hourly_load: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect the effective configuration.
    Config {
        #[command(subcommand)]
        action: ConfigAction,
    },
    /// Parse input tables and report accepted rows and warnings.
    Ingest(Inputs),
    /// Select plants per region.
    Select {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long = "region")]
        regions: Vec<Region>,
    },
    /// Monthly regional capacity factor.
    Rcf {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        region: Region,
        /// Restrict to these fuels; all fuels when omitted.
        #[arg(long = "fuel")]
        fuels: Vec<Fuel>,
    },
    /// Monthly peak-hour system load.
    Load(Inputs),
    /// Monthly regional natural gas price.
    Gasprice {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        region: Region,
    },
    /// Correlations, seasonal regressions and slope comparisons.
    Analyze(RunArgs),
    /// Full pipeline: series, reports and charts.
    Run(RunArgs),
    /// Write a seeded synthetic dataset and manifest.
    Synth {
        #[arg(long, default_value_t = 2015)]
        seed: u64,
        #[arg(long, default_value_t = 0.0)]
        missing_rate: f64,
    },
}

#[derive(Subcommand)]
enum ConfigAction {
    Show,
}

#[derive(Args)]
struct RunArgs {
    /// Pipeline manifest (TOML); flags override its entries.
    manifest: Option<PathBuf>,
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long = "region")]
    regions: Vec<Region>,
    #[arg(long = "fuel")]
    fuels: Vec<Fuel>,
}

fn required<'a>(path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    path.as_deref()
        .with_context(|| format!("--{flag} is required for this command"))
}

fn report_warnings<T>(name: &str, parsed: &Parsed<T>) {
    eprintln!(
        "{name}: {} rows read, {} accepted, {} warnings",
        parsed.rows_read,
        parsed.rows_accepted,
        parsed.warnings.len()
    );
    for w in &parsed.warnings {
        eprintln!("  warning: {w}");
    }
}

/// Write `text` to `<out>/<name>`, or stdout without `--out`.
fn emit(out: Option<&Path>, name: &str, text: &str) -> Result<()> {
    match out {
        Some(dir) => {
            let files = [(name.to_string(), text.to_string())].into_iter().collect();
            pipeline::write_outputs(dir, &files)?;
            eprintln!("wrote {}", dir.join(name).display());
        }
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_series(out: Option<&Path>, series: &MonthlySeries) -> Result<()> {
    for d in &series.diagnostics {
        eprintln!("  note: {}: {d}", series.label);
    }
    emit(out, &format!("series/{}.csv", series.label), &series.to_csv())
}

fn manifest(cli: &Cli, args: &RunArgs) -> Result<PipelineManifest> {
    let mut m = match &args.manifest {
        Some(path) => PipelineManifest::load(path)?,
        None => PipelineManifest::default(),
    };
    let i = &args.inputs;
    for (slot, flag) in [
        (&mut m.generation, &i.generation),
        (&mut m.capacity, &i.capacity),
        (&mut m.gas_prices, &i.gas_prices),
        (&mut m.hourly_load, &i.hourly_load),
        (&mut m.config, &cli.config),
    ] {
        if flag.is_some() {
            slot.clone_from(flag);
        }
    }
    if let Some(out) = &cli.out {
        m.out.clone_from(out);
    }
    if cli.window.is_some() {
        m.window = cli.window;
    }
    if !args.regions.is_empty() {
        m.regions.clone_from(&args.regions);
    }
    if !args.fuels.is_empty() {
        m.fuels.clone_from(&args.fuels);
    }
    Ok(m)
}

fn run(cli: &Cli) -> Result<()> {
    let config = || -> Result<RegionConfig> { Ok(load_config(cli.config.as_deref(), cli.window)?) };
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Config { action: ConfigAction::Show } => emit(out, "config.toml", &config()?.to_toml()),
        Command::Ingest(inputs) => {
            let config = config()?;
            let mut any = false;
            if let Some(p) = &inputs.generation {
                let parsed = pipeline::read_generation(p, &config)?;
                report_warnings("generation", &parsed);
                if out.is_some() {
                    emit(out, "generation.csv", &write_generation(&parsed.records))?;
                }
                any = true;
            }
            if let Some(p) = &inputs.capacity {
                let parsed = pipeline::read_capacity(p, &config)?;
                report_warnings("capacity", &parsed);
                if out.is_some() {
                    emit(out, "capacity.csv", &write_capacity(&parsed.records))?;
                }
                any = true;
            }
            if let Some(p) = &inputs.gas_prices {
                let parsed = pipeline::read_gas_prices(p)?;
                report_warnings("gas_prices", &parsed);
                if out.is_some() {
                    emit(out, "gas_prices.csv", &write_gas_prices(&parsed.records))?;
                }
                any = true;
            }
            if let Some(p) = &inputs.hourly_load {
                let parsed = pipeline::read_hourly_load(p)?;
                report_warnings("hourly_load", &parsed);
                if out.is_some() {
                    emit(out, "hourly_load.csv", &write_hourly_load(&parsed.records))?;
                }
                any = true;
            }
            if !any {
                bail!("give at least one of --generation, --capacity, --gas-prices, --hourly-load");
            }
            Ok(())
        }
        Command::Select { inputs, regions } => {
            let config = config()?;
            let gen = pipeline::read_generation(required(&inputs.generation, "generation")?, &config)?;
            let cap = pipeline::read_capacity(required(&inputs.capacity, "capacity")?, &config)?;
            report_warnings("generation", &gen);
            report_warnings("capacity", &cap);
            let profiles = build_profiles(&gen.records, &cap.records, &config)?;
            let regions = if regions.is_empty() {
                vec![Region::Western, Region::MidAtlantic]
            } else {
                regions.clone()
            };
            let selections: Vec<_> = regions.iter().map(|r| select_plants(&profiles, *r, &config)).collect();
            for s in &selections {
                if let Some(note) = &s.note {
                    eprintln!("  note: {}: {note}", s.region);
                }
            }
            for (name, text) in selection_csvs(&selections) {
                if out.is_some() || name == "selection_summary.csv" {
                    emit(out, &format!("series/{name}"), &text)?;
                }
            }
            Ok(())
        }
        Command::Rcf { inputs, region, fuels } => {
            let config = config()?;
            let gen = pipeline::read_generation(required(&inputs.generation, "generation")?, &config)?;
            let cap = pipeline::read_capacity(required(&inputs.capacity, "capacity")?, &config)?;
            report_warnings("generation", &gen);
            report_warnings("capacity", &cap);
            let profiles = build_profiles(&gen.records, &cap.records, &config)?;
            let selection = select_plants(&profiles, *region, &config);
            let window = config.study_window();
            let query = if fuels.is_empty() {
                RcfQuery::all_fuels(*region, window)
            } else {
                RcfQuery::fuels(*region, fuels.iter().copied(), window)
            };
            let series = compute_rcf(&selection, &gen.records, &cap.records, &query, &config)?;
            emit_series(out, &series)
        }
        Command::Load(inputs) => {
            let config = config()?;
            let load = pipeline::read_hourly_load(required(&inputs.hourly_load, "hourly-load")?)?;
            report_warnings("hourly_load", &load);
            emit_series(out, &compute_monthly_load(&load.records, config.study_window(), &config))
        }
        Command::Gasprice { inputs, region } => {
            let config = config()?;
            let gas = pipeline::read_gas_prices(required(&inputs.gas_prices, "gas-prices")?)?;
            report_warnings("gas_prices", &gas);
            let series = compute_regional_gas_price(&gas.records, *region, config.study_window(), &config)?;
            emit_series(out, &series)
        }
        Command::Analyze(args) => {
            let m = manifest(cli, args)?;
            let study = run_analysis(&m)?;
            io::stdout().write_all(study.findings.render_text().as_bytes())?;
            eprintln!("wrote {}", m.out.display());
            Ok(())
        }
        Command::Run(args) => {
            let m = manifest(cli, args)?;
            let report = run_pipeline(&m)?;
            eprintln!(
                "wrote {} files to {} ({} warnings, {} diagnostics)",
                report.files.len(),
                m.out.display(),
                report.warning_count(),
                report.diagnostics.len()
            );
            Ok(())
        }
        Command::Synth { seed, missing_rate } => {
            if !(0.0..=1.0).contains(missing_rate) {
                bail!("--missing-rate must lie in [0, 1]");
            }
            let dir = out.context("--out is required for synth")?;
            let options = SyntheticOptions {
                seed: *seed,
                missing_rate: *missing_rate,
            };
            generate(&options)
                .write_to(dir)
                .with_context(|| format!("writing {}", dir.display()))?;
            eprintln!("wrote synthetic dataset to {}", dir.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
