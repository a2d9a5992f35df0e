use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use semicert_core::{
    certify_with, chaos_game, compute_thresholds, enumerate_with, tol, uniform_hyperbolicity, Certificate,
    CertifyOptions, EnumerateOptions,
};
use serde::Serialize;

use crate::input::InputSpec;
use crate::render::{render_svg, union_from_certificate, RenderOptions};
use crate::report::{certificate_report, classify_report, cocycle_report, oracle_report, oracle_summary, pairs_report};
use crate::{CliError, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "semicert", version, about = "Semidiscreteness certificates for hyperbolic semigroups")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct InputArg {
    /// Input JSON file, or `-` for stdin.
    #[arg(long, short, default_value = "-")]
    pub input: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify each generator and print its fixed points and translation length.
    Classify(InputArg),
    /// Cross ratio and configuration of every pair of axes.
    Pairs(InputArg),
    /// Decide semidiscreteness where a sufficient criterion applies.
    Certify(CertifyArgs),
    /// Search for a multicone for a tuple of 2x2 matrices.
    Cocycle(InputArg),
    /// Enumerate words and sample the limit set (empirical, not a proof).
    Oracle(OracleArgs),
    /// Draw the axes, and optionally a certified union of arcs, as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub input: InputArg,
    /// Clearance required of interval certificates (disc radians).
    #[arg(long, default_value_t = tol::DEFAULT_MARGIN)]
    pub margin: f64,
    /// Also run the word enumeration and attach its summary.
    #[arg(long)]
    pub cross_check: bool,
    /// Word length for --cross-check.
    #[arg(long, default_value_t = 8)]
    pub max_len: usize,
    /// Element budget for --cross-check.
    #[arg(long, default_value_t = tol::MAX_WORDS)]
    pub max_words: usize,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub input: InputArg,
    #[arg(long, default_value_t = 10)]
    pub max_len: usize,
    #[arg(long, default_value_t = tol::MAX_WORDS)]
    pub max_words: usize,
    #[arg(long, default_value_t = tol::DEDUP_TOL)]
    pub dedup_tol: f64,
    /// Seed for the limit set sampler.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub input: InputArg,
    /// Certificate JSON from `certify`; its union of arcs is drawn.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
    #[arg(long, default_value_t = 600)]
    pub size: u32,
    #[arg(long)]
    pub no_labels: bool,
}

pub struct Outcome {
    pub body: String,
    pub status: Status,
}

fn read_source(src: &str) -> Result<String, CliError> {
    if src == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        read_path(Path::new(src))
    }
}

fn read_path(p: &Path) -> Result<String, CliError> {
    fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
}

fn load(arg: &InputArg) -> Result<InputSpec, CliError> {
    InputSpec::parse(&read_source(&arg.input)?)
}

fn emit<T: Serialize>(value: &T, format: Format) -> String {
    let v = serde_json::to_value(value).expect("reports serialize");
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&v).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            flatten("", &v, &mut out);
            out
        }
    }
}

/// One `path: value` line per leaf.
fn flatten(prefix: &str, v: &serde_json::Value, out: &mut String) {
    use serde_json::Value;
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&join(k), x, out)),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("{prefix}: [{}]\n", items.join(", ")));
        }
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| flatten(&join(&i.to_string()), x, out)),
        Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let format = cli.format;
    let definitive = |body| Outcome { body, status: Status::Definitive };
    match &cli.command {
        Command::Classify(a) => {
            let maps = load(a)?.maps()?;
            Ok(definitive(emit(&classify_report(&maps), format)))
        }
        Command::Pairs(a) => {
            let maps = load(a)?.maps()?;
            let r = pairs_report(&maps).map_err(|(i, j, e)| CliError::Input(format!("pair ({i}, {j}): {e}")))?;
            Ok(definitive(emit(&r, format)))
        }
        Command::Certify(a) => {
            let maps = load(&a.input)?.maps()?;
            if !(a.margin >= 0.0) {
                return Err(CliError::Input(format!("margin {} must be non-negative", a.margin)));
            }
            let cert = certify_with(&maps, &CertifyOptions { margin: a.margin })?;
            let thresholds = match &cert {
                Certificate::RankOneSchottky { .. } => None,
                _ => compute_thresholds(&maps).ok(),
            };
            let mut report = certificate_report(&maps, &cert, thresholds.as_ref(), a.margin);
            if a.cross_check {
                let opts = EnumerateOptions { max_len: a.max_len, max_words: a.max_words, ..Default::default() };
                let r = enumerate_with(&maps, &opts).map_err(|e| e.to_string());
                report.oracle = Some(oracle_summary(a.max_len, a.max_words, r.as_ref().map_err(|e| e.clone())));
            }
            let status = if cert.is_definitive() { Status::Definitive } else { Status::Inconclusive };
            Ok(Outcome { body: emit(&report, format), status })
        }
        Command::Cocycle(a) => {
            let mats = load(a)?.raw_matrices()?;
            let union = uniform_hyperbolicity(&mats)?;
            let status = if union.is_some() { Status::Definitive } else { Status::Inconclusive };
            Ok(Outcome { body: emit(&cocycle_report(&mats, union.as_ref()), format), status })
        }
        Command::Oracle(a) => {
            let maps = load(&a.input)?.maps()?;
            let opts = EnumerateOptions {
                max_len: a.max_len,
                dedup_tol: a.dedup_tol,
                max_words: a.max_words,
                stop_at_first_elliptic: false,
            };
            let r = enumerate_with(&maps, &opts)?;
            let samples = chaos_game(&maps, a.samples, a.seed);
            Ok(definitive(emit(&oracle_report(&r, &samples, a.seed), format)))
        }
        Command::Render(a) => {
            let maps = load(&a.input)?.maps()?;
            let union = match &a.certificate {
                Some(p) => {
                    let text = read_path(p)?;
                    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::Parse {
                        line: e.line(),
                        column: e.column(),
                        message: e.to_string(),
                    })?;
                    union_from_certificate(&v).map_err(CliError::Input)?
                }
                None => Vec::new(),
            };
            if a.size < 16 {
                return Err(CliError::Input("size must be at least 16".into()));
            }
            let opts = RenderOptions { size: a.size, labels: !a.no_labels };
            Ok(definitive(render_svg(&maps, &union, &opts)))
        }
    }
}
