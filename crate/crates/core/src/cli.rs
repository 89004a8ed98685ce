//! Command-line interface: argument definitions, parsers for the small
//! flag languages (`--nc 1..8`, `--nodes logic=7,10`), report rendering,
//! and atomic output writing.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::packaging::Architecture;
use crate::system::{
    evaluate_with, load_system, plan_floorplan, resolve_params, split_logic, sweep, CarbonReport,
    Overrides, SweepEntry, SweepSpec,
};
use crate::techdb::{DesignType, TechDatabase};
use crate::{Error, Result};

/// The calibrated parameter database compiled into the binary.
pub const DEFAULT_DB_JSON: &str = include_str!("../data/default_db.json");

#[derive(Debug, Parser)]
#[command(
    name = "hicarbon",
    version,
    about = "Embodied-carbon estimator for monolithic and chiplet-based VLSI systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the carbon footprint of one system configuration.
    Estimate(EstimateArgs),
    /// Evaluate a design-space cross product and emit a result table.
    Sweep(SweepArgs),
    /// Plan a system's floorplan and emit it as JSON.
    Floorplan(FloorplanArgs),
    /// Check a database (and optionally a system description) for validity.
    Validate(ValidateArgs),
}

/// Database selection, shared by all subcommands.
#[derive(Debug, Args)]
pub struct DbArgs {
    /// Parameter database (JSON); the built-in calibrated set when omitted.
    #[arg(long, env = "HICARBON_DB", value_name = "FILE")]
    pub db: Option<PathBuf>,
    /// Accept parameter values outside their documented ranges.
    #[arg(long)]
    pub allow_out_of_range: bool,
}

impl DbArgs {
    /// Load the selected (or built-in) database.
    pub fn load(&self) -> Result<TechDatabase> {
        match &self.db {
            Some(path) => TechDatabase::load(path, self.allow_out_of_range),
            None => {
                TechDatabase::from_json(DEFAULT_DB_JSON, "built-in database", self.allow_out_of_range)
            }
        }
    }
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub db: DbArgs,
    /// System description (JSON).
    #[arg(long, value_name = "FILE")]
    pub system: PathBuf,
    /// Packaging architecture override: rdl, emib, passive, active, or mono.
    #[arg(long, value_parser = parse_architecture)]
    pub package: Option<Architecture>,
    /// Split the logic chiplet into this many parts before estimating.
    #[arg(long, default_value_t = 1)]
    pub nc: usize,
    /// Production-volume override (parts amortizing the design carbon).
    #[arg(long)]
    pub n_parts: Option<f64>,
    /// Design-iteration-count override.
    #[arg(long)]
    pub n_des: Option<f64>,
    /// Chiplet names whose designs are reused as-is, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub reuse: Vec<String>,
    /// Output file (written atomically); stdout when omitted.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub db: DbArgs,
    /// System description (JSON).
    #[arg(long, value_name = "FILE")]
    pub system: PathBuf,
    /// Node choices per design type, e.g. `--nodes logic=7,10 memory=10,14`.
    /// Types the system does not contain are ignored.
    #[arg(long, value_name = "TYPE=NODE[,NODE...]", num_args = 1.., value_parser = parse_node_choice)]
    pub nodes: Vec<NodeChoice>,
    /// Split counts for the logic chiplet: `4`, `2,4,8`, or `1..8`
    /// (inclusive range).
    #[arg(long, default_value = "1", value_parser = parse_nc_values)]
    pub nc: NcValues,
    /// Architectures to sweep, comma-separated: rdl, emib, passive,
    /// active, mono. Defaults to the configured architecture.
    #[arg(long, value_delimiter = ',', value_parser = parse_architecture)]
    pub package: Vec<Architecture>,
    /// Production-volume override.
    #[arg(long)]
    pub n_parts: Option<f64>,
    /// Design-iteration-count override.
    #[arg(long)]
    pub n_des: Option<f64>,
    /// Chiplet names whose designs are reused as-is, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub reuse: Vec<String>,
    /// Output file (written atomically); stdout when omitted.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct FloorplanArgs {
    #[command(flatten)]
    pub db: DbArgs,
    /// System description (JSON).
    #[arg(long, value_name = "FILE")]
    pub system: PathBuf,
    /// Packaging architecture override (affects communication silicon and
    /// die spacing).
    #[arg(long, value_parser = parse_architecture)]
    pub package: Option<Architecture>,
    /// Split the logic chiplet into this many parts before planning.
    #[arg(long, default_value_t = 1)]
    pub nc: usize,
    /// Output file (written atomically); stdout when omitted.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub db: DbArgs,
    /// System description to validate against the database.
    #[arg(long, value_name = "FILE")]
    pub system: Option<PathBuf>,
}

/// Output table format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Parsed `--nodes` token: choices for one design type.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeChoice {
    pub design_type: DesignType,
    pub nodes: Vec<String>,
}

fn parse_node_choice(s: &str) -> std::result::Result<NodeChoice, String> {
    let (ty, list) = s
        .split_once('=')
        .ok_or_else(|| format!("expected TYPE=NODE[,NODE...], got \"{s}\""))?;
    let design_type = match ty.trim() {
        "logic" => DesignType::Logic,
        "memory" => DesignType::Memory,
        "analog" => DesignType::Analog,
        other => {
            return Err(format!(
                "unknown design type \"{other}\" (expected logic, memory, or analog)"
            ))
        }
    };
    let nodes: Vec<String> = list
        .split(',')
        .map(|t| t.trim().to_string())
        .filter(|t| !t.is_empty())
        .collect();
    if nodes.is_empty() {
        return Err(format!("no nodes given for {}", ty.trim()));
    }
    Ok(NodeChoice { design_type, nodes })
}

/// Parsed `--nc` flag: one or more split counts.
#[derive(Debug, Clone, PartialEq)]
pub struct NcValues(pub Vec<usize>);

fn parse_nc_values(s: &str) -> std::result::Result<NcValues, String> {
    let mut out = Vec::new();
    for seg in s.split(',') {
        let seg = seg.trim();
        if let Some((lo, hi)) = seg.split_once("..") {
            let lo: usize = lo
                .trim()
                .parse()
                .map_err(|_| format!("bad split-count range \"{seg}\""))?;
            let hi: usize = hi
                .trim()
                .parse()
                .map_err(|_| format!("bad split-count range \"{seg}\""))?;
            if lo == 0 || hi < lo {
                return Err(format!("bad split-count range \"{seg}\""));
            }
            out.extend(lo..=hi);
        } else {
            let v: usize = seg
                .parse()
                .map_err(|_| format!("bad split count \"{seg}\""))?;
            if v == 0 {
                return Err("split count must be at least 1".into());
            }
            out.push(v);
        }
    }
    Ok(NcValues(out))
}

fn parse_architecture(s: &str) -> std::result::Result<Architecture, String> {
    s.parse::<Architecture>().map_err(|e| e.to_string())
}

/// Resolve a node given on the command line against database keys: `7`
/// means `7nm` when the database spells it that way.
fn normalize_node(db: &TechDatabase, raw: &str) -> String {
    if db.nodes.contains_key(raw) {
        return raw.to_string();
    }
    let suffixed = format!("{raw}nm");
    if db.nodes.contains_key(&suffixed) {
        return suffixed;
    }
    raw.to_string()
}

fn reuse_override(reuse: &[String]) -> Option<BTreeSet<String>> {
    if reuse.is_empty() {
        None
    } else {
        Some(reuse.iter().cloned().collect())
    }
}

/// Render entries as a CSV table. Manufacturing columns are the sorted
/// union of chiplet names over all successful entries; failed entries keep
/// their label and status but leave numeric cells empty.
pub fn render_csv(entries: &[SweepEntry]) -> Result<String> {
    let mut chiplet_names: BTreeSet<&str> = BTreeSet::new();
    for e in entries {
        if let Ok(r) = &e.result {
            chiplet_names.extend(r.per_chiplet_mfg.keys().map(|s| s.as_str()));
        }
    }

    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = vec![
        "config_label".into(),
        "architecture".into(),
        "status".into(),
    ];
    header.extend(chiplet_names.iter().map(|n| format!("c_mfg.{n}")));
    header.extend(
        [
            "c_package",
            "c_comm",
            "c_des",
            "c_total",
            "package_area_mm2",
            "whitespace_mm2",
            "bridge_count",
        ]
        .map(String::from),
    );
    writer
        .write_record(&header)
        .map_err(|e| Error::Validation(format!("csv encoding failed: {e}")))?;

    for e in entries {
        let mut row: Vec<String> = vec![e.label.clone(), e.architecture.name().to_string()];
        match &e.result {
            Ok(r) => {
                row.push("ok".into());
                for name in &chiplet_names {
                    row.push(
                        r.per_chiplet_mfg
                            .get(*name)
                            .map(|v| v.to_string())
                            .unwrap_or_default(),
                    );
                }
                row.push(r.c_package.to_string());
                row.push(r.c_comm.to_string());
                row.push(r.c_des.to_string());
                row.push(r.c_total.to_string());
                row.push(r.package_area_mm2.to_string());
                row.push(r.whitespace_mm2.to_string());
                row.push(r.bridge_count.map(|n| n.to_string()).unwrap_or_default());
            }
            Err(err) => {
                row.push(if err.is_infeasible() { "infeasible" } else { "error" }.into());
                row.extend(std::iter::repeat(String::new()).take(chiplet_names.len() + 7));
            }
        }
        writer
            .write_record(&row)
            .map_err(|e| Error::Validation(format!("csv encoding failed: {e}")))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Validation(format!("csv encoding failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Validation(format!("csv encoding failed: {e}")))
}

#[derive(Serialize)]
struct JsonRow<'a> {
    label: &'a str,
    architecture: &'a str,
    nc: usize,
    status: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<&'a CarbonReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

/// Render entries as a JSON array of row objects.
pub fn render_json(entries: &[SweepEntry]) -> Result<String> {
    let rows: Vec<JsonRow> = entries
        .iter()
        .map(|e| match &e.result {
            Ok(r) => JsonRow {
                label: &e.label,
                architecture: e.architecture.name(),
                nc: e.nc,
                status: "ok",
                report: Some(r),
                reason: None,
            },
            Err(err) => JsonRow {
                label: &e.label,
                architecture: e.architecture.name(),
                nc: e.nc,
                status: if err.is_infeasible() { "infeasible" } else { "error" },
                report: None,
                reason: Some(err.to_string()),
            },
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&rows)
        .map_err(|e| Error::Validation(format!("json encoding failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Write `content` to `path`, or to stdout when no path is given. File
/// writes go through a sibling temporary file and a rename, so a crashed
/// or interrupted run never leaves a half-written output behind.
pub fn write_output(path: &Option<PathBuf>, content: &str) -> Result<()> {
    match path {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
        Some(path) => {
            let file_name = path
                .file_name()
                .ok_or_else(|| {
                    Error::Validation(format!("output path {} has no file name", path.display()))
                })?
                .to_string_lossy()
                .into_owned();
            let tmp = path.with_file_name(format!("{file_name}.tmp"));
            std::fs::write(&tmp, content).map_err(|source| Error::Io {
                path: tmp.clone(),
                source,
            })?;
            std::fs::rename(&tmp, path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })
        }
    }
}

/// Entry point for the binary: parse, run, report.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => crate::error::EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Execute one subcommand.
pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Estimate(args) => run_estimate(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Floorplan(args) => run_floorplan(args),
        Command::Validate(args) => run_validate(args),
    }
}

fn run_estimate(args: EstimateArgs) -> Result<()> {
    let db = args.db.load()?;
    let spec = load_system(&args.system)?;
    let split = split_logic(&spec, args.nc)?;
    let ov = Overrides {
        architecture: args.package,
        n_parts: args.n_parts,
        n_des: args.n_des,
        reuse: reuse_override(&args.reuse),
        allow_out_of_range: args.db.allow_out_of_range,
    };
    let report = evaluate_with(&split, &db, &ov)?;
    let content = match args.format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&report)
                .map_err(|e| Error::Validation(format!("json encoding failed: {e}")))?;
            text.push('\n');
            text
        }
        Format::Csv => {
            let entry = SweepEntry {
                label: spec.name.clone(),
                architecture: report.architecture,
                nc: args.nc,
                result: Ok(report),
            };
            render_csv(&[entry])?
        }
    };
    write_output(&args.out, &content)
}

fn run_sweep(args: SweepArgs) -> Result<()> {
    let db = args.db.load()?;
    let spec = load_system(&args.system)?;

    let mut node_choices: BTreeMap<DesignType, Vec<String>> = BTreeMap::new();
    for choice in &args.nodes {
        if node_choices.contains_key(&choice.design_type) {
            return Err(Error::Validation(format!(
                "--nodes lists {:?} more than once",
                choice.design_type
            )));
        }
        let normalized = choice
            .nodes
            .iter()
            .map(|raw| normalize_node(&db, raw))
            .collect();
        node_choices.insert(choice.design_type, normalized);
    }

    let sw = SweepSpec {
        node_choices,
        nc_values: args.nc.0.clone(),
        architectures: args.package.clone(),
    };
    let base = Overrides {
        architecture: None,
        n_parts: args.n_parts,
        n_des: args.n_des,
        reuse: reuse_override(&args.reuse),
        allow_out_of_range: args.db.allow_out_of_range,
    };
    let entries = sweep(&spec, &sw, &db, &base);
    for e in &entries {
        if let Err(err) = &e.result {
            eprintln!("{} [{}]: {err}", e.label, e.architecture.name());
        }
    }
    let content = match args.format {
        Format::Csv => render_csv(&entries)?,
        Format::Json => render_json(&entries)?,
    };
    write_output(&args.out, &content)
}

fn run_floorplan(args: FloorplanArgs) -> Result<()> {
    let db = args.db.load()?;
    let spec = load_system(&args.system)?;
    let split = split_logic(&spec, args.nc)?;
    let ov = Overrides {
        architecture: args.package,
        allow_out_of_range: args.db.allow_out_of_range,
        ..Default::default()
    };
    let fp = plan_floorplan(&split, &db, &ov)?;
    let mut text = serde_json::to_string_pretty(&fp)
        .map_err(|e| Error::Validation(format!("json encoding failed: {e}")))?;
    text.push('\n');
    write_output(&args.out, &text)
}

fn run_validate(args: ValidateArgs) -> Result<()> {
    let db = args.db.load()?;
    for warning in db.consistency_warnings() {
        eprintln!("warning: {warning}");
    }
    if let Some(path) = &args.system {
        let spec = load_system(path)?;
        spec.validate(&db)?;
        let ov = Overrides {
            allow_out_of_range: args.db.allow_out_of_range,
            ..Default::default()
        };
        resolve_params(&spec, &db, &ov)?;
        println!("ok: {} and {}", "database", path.display());
    } else {
        println!("ok: database");
    }
    Ok(())
}
