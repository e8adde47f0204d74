use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use phylonorm::classify::{classify_with, DEFAULT_MAX_ORDER};
use phylonorm::config::{RunConfig, SearchMode, SCHEMA_VERSION};
use phylonorm::graphs::{search_h, SearchOutcome};
use phylonorm::normality::{
    check_normality, find_witness, verify_certificate, CheckOptions, NonNormalityCertificate, NormalityReport,
    Strategy, Verdict,
};
use phylonorm::{GroupSpec, PolytopeModel};

const EXIT_NON_NORMAL: u8 = 10;
const EXIT_INCONCLUSIVE: u8 = 20;
const EXIT_NONE_FOUND: u8 = 30;
const EXIT_ERROR: u8 = 2;

/// Normality checks and certificates for group-based phylogenetic polytopes.
#[derive(Parser)]
#[command(name = "phylonorm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the vertices, the lattice basis and the dimension.
    Vertices(Common),
    /// Decide normality. Exit 0 normal, 10 non-normal, 20 inconclusive.
    Normality(NormalityArgs),
    /// Re-check a certificate (or a report or search result holding one).
    /// Exit 0 valid, 1 invalid.
    Verify {
        path: String,
    },
    /// Look for a non-normality witness. Exit 30 if none is found.
    Search(SearchArgs),
    /// Classify every abelian group up to an order.
    Classify(ClassifyArgs),
}

#[derive(Args, Clone)]
struct Common {
    /// Factor orders, e.g. `9,3` for Z9 x Z3.
    #[arg(long, value_delimiter = ',', required = true)]
    group: Vec<u64>,
    #[arg(long, default_value_t = 3)]
    leaves: usize,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct NormalityArgs {
    #[command(flatten)]
    common: Common,
    /// Highest degree to check; defaults to a complete check.
    #[arg(long)]
    max_degree: Option<u64>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Also quotient by group automorphisms.
    #[arg(long)]
    automorphisms: bool,
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    strategy: StrategyArg,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    common: Common,
    /// Highest degree for the direct search.
    #[arg(long, default_value_t = 4)]
    max_degree: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    automorphisms: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
    max_order: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    automorphisms: bool,
    /// Output format; `.csv` output files default to csv.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Enumerate,
    Cover,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Serialize)]
struct VerticesOutput {
    schema_version: u32,
    config: RunConfig,
    #[serde(flatten)]
    export: phylonorm::polytope::VertexExport,
}

#[derive(Serialize, Deserialize)]
struct SearchReport {
    schema_version: u32,
    config: RunConfig,
    found: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    graph_search: Option<SearchOutcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    certificate: Option<NonNormalityCertificate>,
}

#[derive(Serialize)]
struct VerifyOutput {
    schema_version: u32,
    path: String,
    valid: bool,
}

fn group_of(c: &Common) -> anyhow::Result<GroupSpec> {
    Ok(GroupSpec::new(&c.group)?)
}

fn base_config(command: &str, c: &Common) -> anyhow::Result<RunConfig> {
    let mut cfg = RunConfig::new(command, Some(group_of(c)?));
    cfg.leaves = c.leaves;
    cfg.out = c.out.clone();
    Ok(cfg)
}

fn emit(out: Option<&str>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {p}")),
        None => print_stdout(text),
    }
}

fn print_stdout(text: &str) -> anyhow::Result<()> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn to_json<T: Serialize>(v: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn cmd_vertices(c: Common) -> anyhow::Result<u8> {
    if c.leaves < 3 {
        bail!("--leaves must be at least 3");
    }
    let cfg = base_config("vertices", &c)?;
    let model = PolytopeModel::new(cfg.group.as_ref().unwrap(), c.leaves)?;
    let out = VerticesOutput { schema_version: SCHEMA_VERSION, config: cfg, export: model.export() };
    emit(c.out.as_deref(), &to_json(&out)?)?;
    Ok(0)
}

fn cmd_normality(a: NormalityArgs) -> anyhow::Result<u8> {
    let mut cfg = base_config("normality", &a.common)?;
    let model = PolytopeModel::new(cfg.group.as_ref().unwrap(), a.common.leaves)?;
    let max_degree = a.max_degree.unwrap_or((model.dim() as u64).saturating_sub(1).max(2));
    cfg.max_degree = Some(max_degree);
    cfg.automorphisms = a.automorphisms;
    cfg.workers = a.workers;
    let options = CheckOptions {
        strategy: match a.strategy {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Enumerate => Strategy::Enumerate,
            StrategyArg::Cover => Strategy::Cover,
        },
        automorphisms: a.automorphisms,
        workers: a.workers,
        ..CheckOptions::default()
    };
    let mut report = check_normality(&model, max_degree, &options)?;
    if let Verdict::NonNormal { certificate } = &mut report.verdict {
        certificate.config = Some(cfg.clone());
    }
    report.config = Some(cfg);
    emit(a.common.out.as_deref(), &to_json(&report)?)?;
    Ok(match report.verdict {
        Verdict::Normal => 0,
        Verdict::NonNormal { .. } => EXIT_NON_NORMAL,
        Verdict::Inconclusive { .. } => EXIT_INCONCLUSIVE,
    })
}

/// Finds the certificate in a certificate, report or search result file.
fn load_certificate(text: &str) -> anyhow::Result<NonNormalityCertificate> {
    if let Ok(c) = NonNormalityCertificate::from_json(text) {
        return Ok(c);
    }
    if let Ok(r) = serde_json::from_str::<NormalityReport>(text) {
        return r.certificate().cloned().context("the report has no certificate");
    }
    if let Ok(s) = serde_json::from_str::<SearchReport>(text) {
        return s.certificate.context("the search result has no certificate");
    }
    bail!("not a certificate, normality report or search result")
}

fn cmd_verify(path: String) -> anyhow::Result<u8> {
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {path}"))?;
    let cert = load_certificate(&text)?;
    let valid = verify_certificate(&cert)?;
    print_stdout(&to_json(&VerifyOutput { schema_version: SCHEMA_VERSION, path, valid })?)?;
    Ok(if valid { 0 } else { 1 })
}

fn cmd_search(a: SearchArgs) -> anyhow::Result<u8> {
    let mut cfg = base_config("search", &a.common)?;
    let group = cfg.group.clone().unwrap();
    cfg.max_degree = Some(a.max_degree);
    cfg.mode = match a.mode {
        ModeArg::Exhaustive => SearchMode::Exhaustive,
        ModeArg::Random => SearchMode::Random,
    };
    cfg.seed = a.seed;
    cfg.workers = a.workers;
    cfg.automorphisms = a.automorphisms;

    let mut graph_search = None;
    let mut certificate = None;
    if group.is_odd() && a.common.leaves == 3 {
        let outcome = search_h(&group, cfg.mode, cfg.seed, None, a.workers)?;
        if let Some(w) = &outcome.witness {
            let model = PolytopeModel::tripod(&group)?;
            certificate = Some(NonNormalityCertificate::for_point(&model, &w.point)?);
        }
        graph_search = Some(outcome);
    }
    if certificate.is_none() && a.max_degree >= 2 {
        let model = PolytopeModel::new(&group, a.common.leaves)?;
        let options = CheckOptions { automorphisms: a.automorphisms, workers: a.workers, ..CheckOptions::default() };
        certificate = find_witness(&model, 2, a.max_degree, &options)?;
    }
    if let Some(c) = &mut certificate {
        c.config = Some(cfg.clone());
    }
    let found = certificate.is_some();
    let report = SearchReport { schema_version: SCHEMA_VERSION, config: cfg, found, graph_search, certificate };
    emit(a.common.out.as_deref(), &to_json(&report)?)?;
    Ok(if found { 0 } else { EXIT_NONE_FOUND })
}

fn cmd_classify(a: ClassifyArgs) -> anyhow::Result<u8> {
    let mut cfg = RunConfig::new("classify", None);
    cfg.out = a.out.clone();
    cfg.workers = a.workers;
    cfg.automorphisms = a.automorphisms;
    cfg.max_degree = None;
    let format = a.format.unwrap_or_else(|| match &a.out {
        Some(p) if Path::new(p).extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) => Format::Csv,
        _ => Format::Json,
    });
    let options = CheckOptions { automorphisms: a.automorphisms, workers: a.workers, ..CheckOptions::default() };
    let mut table = classify_with(a.max_order, &options, |row| {
        eprintln!("{}: {:?}", row.group, row.verdict);
    })?;
    table.config = Some(cfg);
    let text = match format {
        Format::Json => table.to_json()? + "\n",
        Format::Csv => table.to_csv(),
    };
    match a.out.as_deref() {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {p}"))?,
        None => print_stdout(&text)?,
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Vertices(c) => cmd_vertices(c),
        Command::Normality(a) => cmd_normality(a),
        Command::Verify { path } => cmd_verify(path),
        Command::Search(a) => cmd_search(a),
        Command::Classify(a) => cmd_classify(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
