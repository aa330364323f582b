//! Command-line front end. Commands render to a `String` so they can be
//! driven in-process; the binary only prints and maps exit codes.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::costing::{load_cost_model, CostModel};
use crate::dimensioning::{dimension, ArchitectureKind, DimensioningResult, Mode, PtmpCountMode};
use crate::error::{Error, SpectrumError};
use crate::parallel::Execution;
use crate::report::{build_comparison, CompareOptions, ComparisonReport};
use crate::scenario::{generate_topology, load_scenario, NetworkScenario};
use crate::spectrum::{feasibility_report, load_plan, BandName, FeasibilityReport, SpectrumPlan};
use crate::sweep::{run_sweep, SweepOptions, SweepRow, SweepSpec};

pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            // structural routing failures mean the generated topology is broken
            Error::Spectrum(SpectrumError::Unreachable { .. } | SpectrumError::UnknownNode(_)) => {
                CliError::Internal(e.to_string())
            }
            other => CliError::Config(other.to_string()),
        }
    }
}

fn config<E: Into<Error>>(e: E) -> CliError {
    CliError::from(e.into())
}

#[derive(Debug, Parser)]
#[command(name = "mbplan", version, about = "Dimension, cost and spectrum-check metro transport architectures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transceiver counts per hierarchy level.
    Dimension(DimensionArgs),
    /// All architectures side by side with CAPEX and spectrum feasibility.
    Compare(CompareArgs),
    /// Vary one scenario field and emit CSV.
    Sweep(SweepArgs),
    /// Routing and spectrum assignment feasibility for one architecture.
    SpectrumCheck(SpectrumCheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ArchArg {
    Grooming,
    Continuum,
    Ptmp,
}

impl From<ArchArg> for ArchitectureKind {
    fn from(a: ArchArg) -> Self {
        match a {
            ArchArg::Grooming => ArchitectureKind::GroomingHierarchical,
            ArchArg::Continuum => ArchitectureKind::OpticalContinuum,
            ArchArg::Ptmp => ArchitectureKind::PtmpPluggable,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    #[value(alias = "approximate")]
    Approx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PtmpModeArg {
    #[value(alias = "pooled-hub")]
    WorkedExample,
    #[value(alias = "formula")]
    PerSlice,
}

impl From<PtmpModeArg> for PtmpCountMode {
    fn from(m: PtmpModeArg) -> Self {
        match m {
            PtmpModeArg::WorkedExample => PtmpCountMode::WorkedExample,
            PtmpModeArg::PerSlice => PtmpCountMode::PerSlice,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct DimensionArgs {
    /// Scenario JSON file.
    pub scenario: PathBuf,
    /// Architectures to dimension (comma separated); all when omitted.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub arch: Vec<ArchArg>,
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "worked-example")]
    pub ptmp_count_mode: PtmpModeArg,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub scenario: PathBuf,
    /// Spectrum plan JSON; the built-in multi-band plan when omitted.
    #[arg(long)]
    pub plan: Option<PathBuf>,
    /// Cost model JSON; built-in unit prices when omitted.
    #[arg(long)]
    pub costs: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "worked-example")]
    pub ptmp_count_mode: PtmpModeArg,
    /// Architecture savings are reported against.
    #[arg(long, value_enum, default_value = "grooming")]
    pub baseline: ArchArg,
    #[arg(long)]
    pub no_footnotes: bool,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub scenario: PathBuf,
    /// field=start:stop:step with field one of a4_gbps, eta, h4, fanout_m.
    #[arg(long)]
    pub vary: String,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub arch: Vec<ArchArg>,
    #[arg(long, value_enum, default_value = "worked-example")]
    pub ptmp_count_mode: PtmpModeArg,
    #[arg(long)]
    pub costs: Option<PathBuf>,
    /// Adds a `<arch>_feasible` column per architecture.
    #[arg(long)]
    pub plan: Option<PathBuf>,
    /// Evaluate sweep points one after another.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct SpectrumCheckArgs {
    pub scenario: PathBuf,
    #[arg(long)]
    pub plan: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "continuum")]
    pub arch: ArchArg,
    /// Restrict the plan to these bands (comma separated, e.g. C,L).
    #[arg(long, value_delimiter = ',')]
    pub bands: Vec<String>,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Dimension(a) => cmd_dimension(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::SpectrumCheck(a) => cmd_spectrum_check(a),
    }
}

fn scenario_from(path: &PathBuf) -> Result<NetworkScenario, CliError> {
    let s = load_scenario(path).map_err(config)?;
    s.validate().map_err(config)?;
    Ok(s)
}

fn plan_from(path: Option<&PathBuf>) -> Result<SpectrumPlan, CliError> {
    match path {
        Some(p) => load_plan(p).map_err(config),
        None => Ok(SpectrumPlan::default()),
    }
}

fn costs_from(path: Option<&PathBuf>) -> Result<CostModel, CliError> {
    match path {
        Some(p) => load_cost_model(p).map_err(config),
        None => Ok(CostModel::default()),
    }
}

fn architectures(list: &[ArchArg]) -> Vec<ArchitectureKind> {
    if list.is_empty() {
        return ArchitectureKind::ALL.to_vec();
    }
    let mut out: Vec<ArchitectureKind> = Vec::new();
    for &a in list {
        let k = a.into();
        if !out.contains(&k) {
            out.push(k);
        }
    }
    out
}

fn json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Internal(e.to_string()))
}

fn csv_string(header: &[String], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let internal = |e: csv::Error| CliError::Internal(e.to_string());
    w.write_record(header).map_err(internal)?;
    for r in rows {
        w.write_record(r).map_err(internal)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

/// Left-aligned, space-padded columns.
fn table_string(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, cell) in r.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[String]| {
        let parts: Vec<String> = cells.iter().enumerate().map(|(i, c)| format!("{c:<w$}", w = widths[i])).collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(header);
    line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>());
    for r in rows {
        line(r);
    }
    out
}

fn pct(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".to_string(), |v| format!("{v:.2}"))
}

fn cu(x: f64) -> String {
    format!("{x:.2}")
}

pub const DIMENSION_COLUMNS: [&str; 9] = [
    "architecture",
    "mode",
    "ptmp_count_mode",
    "hl4",
    "hl3",
    "hl12",
    "total",
    "electronic_hops_per_demand",
    "oeo_terminations_per_demand",
];

fn dimension_row(r: &DimensioningResult) -> Vec<String> {
    let level = |f: fn(&crate::dimensioning::LevelCounts) -> u64| {
        r.per_level.as_ref().map_or_else(|| "-".to_string(), |c| f(c).to_string())
    };
    vec![
        r.architecture.to_string(),
        match r.mode {
            Mode::Exact => "exact".into(),
            Mode::Approximate => "approx".into(),
        },
        match r.ptmp_count_mode {
            Some(PtmpCountMode::WorkedExample) => "worked-example".into(),
            Some(PtmpCountMode::PerSlice) => "per-slice".into(),
            None => String::new(),
        },
        level(|c| c.hl4),
        level(|c| c.hl3),
        level(|c| c.hl12),
        r.total.to_string(),
        r.electronic_hops_per_demand.to_string(),
        r.oeo_terminations_per_demand.to_string(),
    ]
}

pub fn dimension_results(
    scenario: &NetworkScenario,
    archs: &[ArchitectureKind],
    mode: Mode,
    ptmp_mode: PtmpCountMode,
) -> Result<Vec<DimensioningResult>, CliError> {
    let topology = generate_topology(scenario).map_err(config)?;
    archs
        .iter()
        .map(|&k| dimension(scenario, k, mode, ptmp_mode, Some(&topology)).map_err(config))
        .collect()
}

pub fn cmd_dimension(args: &DimensionArgs) -> Result<String, CliError> {
    let scenario = scenario_from(&args.scenario)?;
    let mode = match args.mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Approx => Mode::Approximate,
    };
    let results = dimension_results(&scenario, &architectures(&args.arch), mode, args.ptmp_count_mode.into())?;
    let header: Vec<String> = DIMENSION_COLUMNS.iter().map(|s| s.to_string()).collect();
    let rows: Vec<Vec<String>> = results.iter().map(dimension_row).collect();
    match args.format {
        Format::Json => json(&results),
        Format::Csv => csv_string(&header, &rows),
        Format::Table => Ok(table_string(&header, &rows)),
    }
}

fn feasibility_cell(report: &ComparisonReport, arch: ArchitectureKind, label: &str) -> String {
    match report.feasibility(arch, label) {
        Some(f) if f.feasible => format!("feasible (peak {})", f.peak_link_occupancy),
        Some(f) => format!("infeasible ({} blocked)", f.blocked_count),
        None => "-".into(),
    }
}

pub const COMPARE_COLUMNS: [&str; 14] = [
    "architecture",
    "hl4",
    "hl3",
    "hl12",
    "transceivers",
    "transceiver_cost_cu",
    "router_cost_cu",
    "total_cu",
    "transponder_savings_pct",
    "total_cost_savings_pct",
    "electronic_hops_per_demand",
    "oeo_terminations_per_demand",
    "c_only_spectrum",
    "full_plan_spectrum",
];

pub fn render_comparison(report: &ComparisonReport, format: Format) -> Result<String, CliError> {
    if format == Format::Json {
        return json(report);
    }
    let rows: Vec<Vec<String>> = report
        .architectures()
        .map(|arch| {
            let r = &report.results[&arch];
            let c = &report.costs.costs[&arch];
            let counts = r.per_level.unwrap_or_default();
            let savings = report.costs.savings_between(report.baseline, arch);
            let (tx_pct, cost_pct) = if arch == report.baseline {
                (Some(0.0), Some(0.0))
            } else {
                (
                    savings.and_then(|s| s.transponder_savings_pct),
                    savings.and_then(|s| s.total_cost_savings_pct),
                )
            };
            vec![
                arch.to_string(),
                counts.hl4.to_string(),
                counts.hl3.to_string(),
                counts.hl12.to_string(),
                c.transceiver_count.to_string(),
                cu(c.transceiver_cost_cu),
                cu(c.router_cost_cu),
                cu(c.total_cu),
                pct(tx_pct),
                pct(cost_pct),
                r.electronic_hops_per_demand.to_string(),
                r.oeo_terminations_per_demand.to_string(),
                feasibility_cell(report, arch, crate::report::PLAN_C_ONLY),
                feasibility_cell(report, arch, crate::report::PLAN_FULL),
            ]
        })
        .collect();
    let header: Vec<String> = COMPARE_COLUMNS.iter().map(|s| s.to_string()).collect();
    if format == Format::Csv {
        return csv_string(&header, &rows);
    }
    let s = &report.scenario;
    let mut out = format!(
        "scenario: h4={} h3={} h12={} a4={} Gb/s eta={} C={} Gb/s m={} {} {} km/link\nsavings vs {}\n\n",
        s.h4,
        s.h3,
        s.h12,
        s.a4_gbps,
        s.eta,
        s.channel_rate_gbps,
        s.fanout_m,
        s.topology_kind,
        s.link_length_km,
        report.baseline
    );
    out.push_str(&table_string(&header, &rows));
    if !report.footnotes.is_empty() {
        out.push_str("\nNotes:\n");
        for (i, f) in report.footnotes.iter().enumerate() {
            let _ = writeln!(out, "[{}] {}", i + 1, f.text);
        }
    }
    Ok(out)
}

pub fn cmd_compare(args: &CompareArgs) -> Result<String, CliError> {
    let scenario = scenario_from(&args.scenario)?;
    let plan = plan_from(args.plan.as_ref())?;
    let model = costs_from(args.costs.as_ref())?;
    let options = CompareOptions {
        ptmp_count_mode: args.ptmp_count_mode.into(),
        baseline: args.baseline.into(),
        footnotes: !args.no_footnotes,
        ..CompareOptions::default()
    };
    let report = build_comparison(&scenario, &plan, &model, &options)?;
    render_comparison(&report, args.format)
}

/// Header of the sweep CSV: `field,value` then `<arch>_total` and
/// `<arch>_cost_cu` per architecture, plus `<arch>_feasible` with a plan.
pub fn sweep_header(archs: &[ArchitectureKind], with_plan: bool) -> Vec<String> {
    let mut h = vec!["field".to_string(), "value".to_string()];
    for a in archs {
        h.push(format!("{a}_total"));
        h.push(format!("{a}_cost_cu"));
        if with_plan {
            h.push(format!("{a}_feasible"));
        }
    }
    h
}

pub fn render_sweep(spec: &SweepSpec, archs: &[ArchitectureKind], rows: &[SweepRow], with_plan: bool) -> Result<String, CliError> {
    let header = sweep_header(archs, with_plan);
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut cells = vec![spec.field.name().to_string(), format!("{}", r.value)];
            for e in &r.entries {
                cells.push(e.total.to_string());
                cells.push(cu(e.total_cu));
                if with_plan {
                    cells.push(e.feasible.map_or(String::new(), |f| f.to_string()));
                }
            }
            cells
        })
        .collect();
    csv_string(&header, &body)
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<String, CliError> {
    let scenario = scenario_from(&args.scenario)?;
    let spec: SweepSpec = args.vary.parse().map_err(config)?;
    let archs = architectures(&args.arch);
    let plan = match &args.plan {
        Some(p) => Some(load_plan(p).map_err(config)?),
        None => None,
    };
    let with_plan = plan.is_some();
    let options = SweepOptions {
        architectures: archs.clone(),
        ptmp_count_mode: args.ptmp_count_mode.into(),
        cost_model: costs_from(args.costs.as_ref())?,
        plan,
        execution: if args.sequential { Execution::Sequential } else { Execution::Parallel },
    };
    let rows = run_sweep(&scenario, &spec, &options)?;
    render_sweep(&spec, &archs, &rows, with_plan)
}

pub fn render_feasibility(report: &FeasibilityReport, format: Format) -> Result<String, CliError> {
    let header: Vec<String> =
        ["band", "assigned_slots", "available_slots", "utilization"].iter().map(|s| s.to_string()).collect();
    let rows: Vec<Vec<String>> = report
        .band_utilization
        .iter()
        .map(|b| vec![b.band.to_string(), b.assigned.to_string(), b.available.to_string(), format!("{:.4}", b.utilization)])
        .collect();
    match format {
        Format::Json => json(report),
        Format::Csv => {
            let mut h = vec!["architecture".to_string(), "feasible".into(), "peak_link_occupancy".into(), "blocked".into()];
            h.extend(header);
            let body: Vec<Vec<String>> = rows
                .into_iter()
                .map(|r| {
                    let mut cells = vec![
                        report.architecture.to_string(),
                        report.feasible.to_string(),
                        report.peak_link_occupancy.to_string(),
                        report.blocked_count.to_string(),
                    ];
                    cells.extend(r);
                    cells
                })
                .collect();
            csv_string(&h, &body)
        }
        Format::Table => {
            let mut out = format!(
                "architecture: {}\nfeasible: {}\npeak link occupancy: {}\nlightpaths: {}\nblocked: {}\n\n",
                report.architecture, report.feasible, report.peak_link_occupancy, report.lightpath_count, report.blocked_count
            );
            out.push_str(&table_string(&header, &rows));
            Ok(out)
        }
    }
}

pub fn cmd_spectrum_check(args: &SpectrumCheckArgs) -> Result<String, CliError> {
    let scenario = scenario_from(&args.scenario)?;
    let mut plan = plan_from(args.plan.as_ref())?;
    if !args.bands.is_empty() {
        let names = args.bands.iter().map(|b| b.parse::<BandName>()).collect::<Result<Vec<_>, _>>().map_err(config)?;
        plan = plan.restricted_to(&names).map_err(config)?;
    }
    let topology = generate_topology(&scenario).map_err(config)?;
    let report = feasibility_report(&plan, &topology, args.arch.into(), &scenario).map_err(config)?;
    render_feasibility(&report, args.format)
}
