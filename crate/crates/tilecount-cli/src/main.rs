//! `tilecount`: tiling counts, Hurwitz series, brackets, quasimodular fits
//! and volumes from the command line.

mod commands;
mod config;

use clap::{Args, Parser, Subcommand};
use config::{parse_list, parse_slots, JobConfig};
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use tilecount::Error;

/// Exit codes besides 0 (success) and 2 (usage error, from clap). A fit
/// whose residual check fails exits with `EXIT_NOT_REPRESENTABLE`.
const EXIT_FAILED: u8 = 1;
const EXIT_INVALID: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_NOT_REPRESENTABLE: u8 = 5;
const EXIT_IO: u8 = 6;

const CACHE_ENV: &str = "TILECOUNT_CACHE_DIR";

#[derive(Parser)]
#[command(name = "tilecount", version, about = "Exact counts of tiled surfaces and branched covers of elliptic orbifolds")]
struct Cli {
    /// JSON job file; flags given here override its fields
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// output format
    #[arg(long, global = true, value_parser = ["json", "csv"])]
    format: Option<String>,
    /// write the output here instead of standard output
    #[arg(long, global = true)]
    output: Option<String>,
    /// largest series order accepted
    #[arg(long, global = true)]
    max_order: Option<usize>,
    /// largest number of permutation tuples enumerated by brute force
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Generating function of tilings with prescribed cone curvatures
    Tilings(TilingsArgs),
    /// Hurwitz numbers, or series of covers of an elliptic orbifold
    Hurwitz(HurwitzArgs),
    /// Bracket of an element of the shifted-symmetric algebra
    Bracket(BracketArgs),
    /// Fit a q-series into a quasimodular basis
    Fit(FitArgs),
    /// Masur-Veech volume of a stratum from its tiling counts
    Volume(VolumeArgs),
    /// Run the acceptance suite
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct FitFlags {
    /// fit the series into a quasimodular basis
    #[arg(long)]
    fit: bool,
    /// named basis (`appendix`) instead of the default basis
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    weight_bound: Option<u32>,
    /// coefficients checked beyond the solving window
    #[arg(long)]
    margin: Option<usize>,
}

#[derive(Args)]
struct TilingsArgs {
    /// quad, biquad, bihex, square, hexagon or triangle
    #[arg(long)]
    tile: Option<String>,
    /// comma-separated cone curvatures, e.g. 2,2,1,1
    #[arg(long, allow_hyphen_values = true)]
    curvatures: Option<String>,
    #[arg(long)]
    order: Option<usize>,
    /// disconnected, ramified-components or connected
    #[arg(long)]
    connectivity: Option<String>,
    #[command(flatten)]
    fit: FitFlags,
}

#[derive(Args)]
struct HurwitzArgs {
    /// degree of a cover of the sphere (classical Hurwitz number mode)
    #[arg(long)]
    degree: Option<usize>,
    /// `;`-separated branch profiles for the classical mode, e.g. "2,1;3"
    #[arg(long)]
    profiles: Option<String>,
    /// also count monodromy tuples by brute force
    #[arg(long)]
    brute_force: bool,
    #[arg(long = "N")]
    n: Option<u32>,
    /// `;`-separated profiles at the orbifold points, e.g. "2,2,1,1;;"
    #[arg(long)]
    mu: Option<String>,
    /// `;`-separated profiles at additional branch points
    #[arg(long)]
    extra: Option<String>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    connectivity: Option<String>,
    /// auto, direct, cores or transfer
    #[arg(long)]
    method: Option<String>,
}

#[derive(Args)]
struct BracketArgs {
    #[arg(long = "N")]
    n: Option<u32>,
    /// JSON file with the element
    #[arg(long)]
    element: Option<String>,
    /// a single monomial such as p1^1*p2^0
    #[arg(long)]
    monomial: Option<String>,
    #[arg(long)]
    order: Option<usize>,
    #[command(flatten)]
    fit: FitFlags,
}

#[derive(Args)]
struct FitArgs {
    #[arg(long = "N")]
    n: Option<u32>,
    /// JSON file with the series
    #[arg(long)]
    series: Option<String>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    weight_bound: Option<u32>,
    #[arg(long)]
    margin: Option<usize>,
}

#[derive(Args)]
struct VolumeArgs {
    #[arg(long = "N")]
    n: Option<u32>,
    /// cone curvatures of the stratum label, e.g. 2,2,1,1
    #[arg(long = "mu", alias = "curvatures", allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    weight_bound: Option<u32>,
    /// rational factor applied to the mechanical value
    #[arg(long)]
    normalization: Option<String>,
    /// index of hexagon-tiled surfaces among triangulated ones
    #[arg(long)]
    hexagon_index: Option<String>,
    /// override the derived dimension 2g - 2 + n
    #[arg(long)]
    dim: Option<u32>,
}

#[derive(Args)]
struct SelftestArgs {
    /// comma-separated criterion numbers (default: all)
    #[arg(long)]
    criteria: Option<String>,
}

fn flag_config(cli: &Cli) -> tilecount::Result<JobConfig> {
    let mut c = JobConfig {
        format: cli.format.clone(),
        output: cli.output.clone(),
        max_order: cli.max_order,
        budget: cli.budget,
        ..Default::default()
    };
    let fit_flags = |c: &mut JobConfig, f: &FitFlags| {
        c.fit = f.fit.then_some(true);
        c.preset = f.preset.clone();
        c.weight_bound = f.weight_bound;
        c.margin = f.margin;
    };
    match &cli.command {
        None => {}
        Some(Command::Tilings(a)) => {
            c.command = Some("tilings".into());
            c.tile = a.tile.clone();
            c.curvatures = a.curvatures.as_deref().map(parse_list).transpose()?;
            c.order = a.order;
            c.connectivity = a.connectivity.clone();
            fit_flags(&mut c, &a.fit);
        }
        Some(Command::Hurwitz(a)) => {
            c.command = Some("hurwitz".into());
            c.degree = a.degree;
            c.profiles = a.profiles.as_deref().map(parse_slots).transpose()?;
            c.brute_force = a.brute_force.then_some(true);
            c.n = a.n;
            c.mu = a.mu.as_deref().map(parse_slots).transpose()?;
            c.extra = a.extra.as_deref().map(parse_slots).transpose()?;
            c.order = a.order;
            c.connectivity = a.connectivity.clone();
            c.method = a.method.clone();
        }
        Some(Command::Bracket(a)) => {
            c.command = Some("bracket".into());
            c.n = a.n;
            c.element = a.element.clone();
            c.monomial = a.monomial.clone();
            c.order = a.order;
            fit_flags(&mut c, &a.fit);
        }
        Some(Command::Fit(a)) => {
            c.command = Some("fit".into());
            c.n = a.n;
            c.series = a.series.clone();
            c.preset = a.preset.clone();
            c.weight_bound = a.weight_bound;
            c.margin = a.margin;
        }
        Some(Command::Volume(a)) => {
            c.command = Some("volume".into());
            c.n = a.n;
            c.curvatures = a.mu.as_deref().map(parse_list).transpose()?;
            c.order = a.order;
            c.weight_bound = a.weight_bound;
            c.normalization = a.normalization.clone();
            c.hexagon_index = a.hexagon_index.clone();
            c.dim = a.dim;
        }
        Some(Command::Selftest(a)) => {
            c.command = Some("selftest".into());
            c.criteria = a.criteria.as_deref().map(parse_list).transpose()?;
        }
    }
    Ok(c)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Budget(_) => EXIT_BUDGET,
        Error::NotRepresentable(_) | Error::NoSolution => EXIT_NOT_REPRESENTABLE,
        Error::Invalid(_) | Error::Parse(_) | Error::Domain(_) | Error::OrderMismatch(..) => EXIT_INVALID,
        _ => EXIT_FAILED,
    }
}

fn render(c: &JobConfig, report: &commands::Report) -> tilecount::Result<String> {
    let hash = c.hash();
    let inputs: serde_json::Map<String, serde_json::Value> =
        report.inputs.iter().map(|(p, h)| (p.clone(), json!(h))).collect();
    if c.format() == "csv" {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| Error::Invalid(e.to_string());
        w.write_record(&report.header).map_err(fail)?;
        for row in &report.rows {
            w.write_record(row).map_err(fail)?;
        }
        let body = String::from_utf8(w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?)
            .map_err(|e| Error::Invalid(e.to_string()))?;
        let mut head = format!("# tilecount {} config_hash {hash}\n", tilecount::VERSION);
        for (p, h) in &report.inputs {
            head.push_str(&format!("# input {p} sha256 {h}\n"));
        }
        return Ok(head + &body);
    }
    let doc = json!({
        "meta": {
            "tool": "tilecount",
            "version": tilecount::VERSION,
            "config_hash": hash,
            "config": c,
            "inputs": inputs,
        },
        "result": report.result,
    });
    Ok(serde_json::to_string_pretty(&doc).expect("json") + "\n")
}

fn emit(c: &JobConfig, text: &str) -> Result<(), u8> {
    match &c.output {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            eprintln!("error: {path}: {e}");
            EXIT_IO
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|_| EXIT_IO)
        }
    }
}

fn cache_path(c: &JobConfig) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    if c.command.as_deref() == Some("selftest") || c.series.is_some() || c.element.is_some() {
        return None;
    }
    Some(PathBuf::from(dir).join(format!("{}.{}", c.hash(), c.format())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = (|| -> Result<(), u8> {
        let flags = flag_config(&cli).map_err(|e| {
            eprintln!("error: {e}");
            exit_code(&e)
        })?;
        let base = match &cli.config {
            Some(p) => JobConfig::load(p).map_err(|e| {
                eprintln!("error: {e}");
                exit_code(&e)
            })?,
            None => JobConfig::default(),
        };
        let c = base.overlay(&flags);
        if let Some(path) = cache_path(&c) {
            if let Ok(text) = std::fs::read_to_string(&path) {
                return emit(&c, &text);
            }
        }
        let report = commands::run(&c).map_err(|e| {
            eprintln!("error: {e}");
            exit_code(&e)
        })?;
        for n in &report.notices {
            eprintln!("{n}");
        }
        let text = render(&c, &report).map_err(|e| {
            eprintln!("error: {e}");
            exit_code(&e)
        })?;
        if let Some(path) = cache_path(&c) {
            if report.success {
                let _ = std::fs::create_dir_all(path.parent().expect("cache file has a parent"));
                let _ = std::fs::write(&path, &text);
            }
        }
        emit(&c, &text)?;
        match (report.success, c.command.as_deref()) {
            (true, _) => Ok(()),
            (false, Some("fit")) => Err(EXIT_NOT_REPRESENTABLE),
            (false, _) => Err(EXIT_FAILED),
        }
    })();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}
