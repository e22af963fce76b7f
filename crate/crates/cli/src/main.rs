use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use rankgeo::classify;
use rankgeo::constructions::{self, SearchBudget, SearchMode, SearchOutcome};
use rankgeo::io::{self, CodeDocument, FieldSpec, SystemDocument, WitnessDocument};
use rankgeo::verify::{self, Source};
use rankgeo::{Budget, Error, ErrorKind, FieldTower, QSystem, RankMetricCode};

#[derive(Parser)]
#[command(name = "rankgeo", version, about = "Rank-metric codes and q-systems: weights, evasiveness, classification")]
struct Cli {
    /// Largest number of subspaces any single enumeration may visit.
    #[arg(long, global = true, env = "RANKGEO_BUDGET", default_value_t = rankgeo::linalg::DEFAULT_BUDGET)]
    budget: u64,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Code document: {"field": ..., "generator": [[...]]}.
    #[arg(long)]
    code: Option<PathBuf>,
    /// System document: {"field": ..., "basis": [[...]]}.
    #[arg(long)]
    system: Option<PathBuf>,
}

#[derive(Args)]
struct FieldArgs {
    /// Field document; overrides --q and --m.
    #[arg(long)]
    field: Option<PathBuf>,
    /// Order of the base field F_q.
    #[arg(long, default_value_t = 2)]
    q: u32,
    /// Extension degree m of F_{q^m} over F_q.
    #[arg(long)]
    m: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum distance and generalized rank weights of a code.
    Weights {
        #[arg(long)]
        code: PathBuf,
    },
    /// Bounds and MRD / near-MRD / quasi-MRD flags of a code.
    Classify {
        #[command(flatten)]
        input: Input,
    },
    /// Whether every h-dimensional subspace meets the system in dimension at most r.
    Evasive {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        r: usize,
        /// Scan every subspace and report one with the largest intersection.
        #[arg(long)]
        witness: bool,
    },
    /// Dual code, or rank-metric dual of a system.
    Dual {
        #[command(flatten)]
        input: Input,
    },
    /// Intersection dimensions with every hyperplane.
    Spectrum {
        #[command(flatten)]
        input: Input,
    },
    /// Build a code or system.
    #[command(subcommand)]
    Construct(Construct),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum Construct {
    /// Gabidulin [n,k] code evaluated at 1, γ, …, γ^{n-1}.
    Gabidulin {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// The [m,k] system {(x, x^q, …, x^{q^{k-1}})}.
    Pseudoregulus {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: usize,
    },
    /// The [m+1,k] system whose codes are near MRD.
    NearMrd {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: usize,
    },
    /// Block-diagonal sum of codes over one field.
    DirectSum {
        #[arg(long = "code", required = true)]
        codes: Vec<PathBuf>,
    },
    /// Look for an h-scattered [n,k] system.
    Search {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        h: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = 10_000_000)]
        max_candidates: u64,
        #[arg(long, default_value_t = 120)]
        max_seconds: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceArg {
    Generators,
    Gabidulin,
    NearMrdSystems,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name; see --list.
    #[arg(required_unless_present = "list")]
    suite: Option<String>,
    /// List the suites with their default ranges.
    #[arg(long)]
    list: bool,
    /// Base field orders (repeatable).
    #[arg(long)]
    q: Vec<u32>,
    /// Smallest extension degree, or the only one without --m-max.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    m_max: Option<usize>,
    /// Smallest dimension, or the only one without --k-max.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    k_max: Option<usize>,
    /// Length range.
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    /// Sample this many random codes instead of enumerating all generators.
    #[arg(long)]
    random: Option<usize>,
    /// Where instances come from.
    #[arg(long, value_enum)]
    source: Option<SourceArg>,
    /// Tightens the scattered-bound suite's bound; for exercising the failure path.
    #[arg(long, hide = true, default_value_t = 0, allow_negative_numbers = true)]
    bound_offset: i64,
}

/// What a command produced: the document, plus the exit code it implies.
struct Outcome {
    value: Value,
    table: Option<String>,
    code: u8,
}

impl Outcome {
    fn ok<T: Serialize>(v: &T) -> Self {
        Outcome { value: serde_json::to_value(v).expect("documents serialize"), table: None, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            let text = match (cli.format, out.table) {
                (Format::Table, Some(t)) => t,
                (Format::Table, None) => render_table(&out.value),
                (Format::Json, _) => io::to_pretty(&out.value) + "\n",
            };
            if let Err(e) = emit(cli.output.as_deref(), &text) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Domain => 1,
                ErrorKind::Resource => 2,
                ErrorKind::Consistency => 3,
            })
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> rankgeo::Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Document(format!("{}: {e}", path.display())))
}

fn load_code(path: &Path) -> rankgeo::Result<RankMetricCode> {
    io::parse::<CodeDocument>(&read(path)?)?.to_code()
}

fn load_system(path: &Path) -> rankgeo::Result<QSystem> {
    io::parse::<SystemDocument>(&read(path)?)?.to_system()
}

fn system_of(input: &Input) -> rankgeo::Result<QSystem> {
    match (&input.code, &input.system) {
        (Some(c), _) => load_code(c)?.system(),
        (_, Some(s)) => load_system(s),
        _ => unreachable!("clap enforces one input"),
    }
}

fn code_of(input: &Input) -> rankgeo::Result<RankMetricCode> {
    match (&input.code, &input.system) {
        (Some(c), _) => load_code(c),
        (_, Some(s)) => Ok(load_system(s)?.code()),
        _ => unreachable!("clap enforces one input"),
    }
}

fn tower_of(f: &FieldArgs) -> rankgeo::Result<Arc<FieldTower>> {
    if let Some(path) = &f.field {
        return Ok(Arc::new(io::parse::<FieldSpec>(&read(path)?)?.build()?));
    }
    let m = f.m.ok_or_else(|| Error::Precondition("give --m or --field".into()))?;
    Ok(Arc::new(FieldTower::for_order(f.q, m)?))
}

fn run(cli: &Cli) -> rankgeo::Result<Outcome> {
    let budget = Budget(cli.budget);
    match &cli.command {
        Command::Weights { code } => {
            let c = load_code(code)?;
            let profile = c.weights(budget)?;
            Ok(Outcome::ok(&json!({"d": profile.0[0], "profile": profile.0})))
        }
        Command::Classify { input } => {
            let report = classify::classify_report(&code_of(input)?, budget)?;
            let table = report.to_table();
            Ok(Outcome { table: Some(table), ..Outcome::ok(&report) })
        }
        Command::Evasive { input, h, r, witness } => {
            let u = system_of(input)?;
            if *witness {
                let (evasive, w) = u.evasive_with_witness(*h, *r, budget)?;
                Ok(Outcome::ok(&WitnessDocument::new(u.tower(), *h, *r, evasive, &w)))
            } else {
                let evasive = u.is_evasive(*h, *r, budget)?;
                Ok(Outcome::ok(&json!({"h": h, "r": r, "evasive": evasive})))
            }
        }
        Command::Dual { input } => match (&input.code, &input.system) {
            (Some(c), _) => {
                let c = load_code(c)?;
                Ok(Outcome::ok(&io::dual_document(c.tower(), &c.dual())))
            }
            _ => {
                let u = system_of(input)?;
                Ok(Outcome::ok(&SystemDocument::from_system(&u.rank_metric_dual(budget)?)))
            }
        },
        Command::Spectrum { input } => {
            let u = system_of(input)?;
            let s = u.hyperplane_spectrum(budget)?;
            Ok(Outcome::ok(&json!({"n": u.n(), "max": s.max(), "min": s.min(), "histogram": s.histogram, "values": s.values})))
        }
        Command::Construct(c) => construct(c, cli.seed, budget),
        Command::Verify(v) => verify_command(v, cli.seed, budget),
    }
}

fn construct(c: &Construct, seed: u64, budget: Budget) -> rankgeo::Result<Outcome> {
    match c {
        Construct::Gabidulin { field, n, k } => Ok(Outcome::ok(&CodeDocument::from_code(&constructions::gabidulin(tower_of(field)?, *n, *k, None)?))),
        Construct::Pseudoregulus { field, k } => {
            Ok(Outcome::ok(&SystemDocument::from_system(&constructions::pseudoregulus_system(tower_of(field)?, *k, budget)?)))
        }
        Construct::NearMrd { field, k } => Ok(Outcome::ok(&SystemDocument::from_system(&constructions::near_mrd_system(tower_of(field)?, *k, budget)?))),
        Construct::DirectSum { codes } => {
            let codes = codes.iter().map(|p| load_code(p)).collect::<rankgeo::Result<Vec<_>>>()?;
            Ok(Outcome::ok(&CodeDocument::from_code(&constructions::direct_sum(&codes)?)))
        }
        Construct::Search { field, k, h, n, mode, max_candidates, max_seconds } => {
            let limits = SearchBudget {
                max_candidates: *max_candidates,
                max_seconds: *max_seconds,
                mode: match mode {
                    Mode::Exhaustive => SearchMode::Exhaustive,
                    Mode::Random => SearchMode::Random,
                },
                seed,
            };
            let out = constructions::search_scattered(tower_of(field)?, *k, *h, *n, &limits, budget)?;
            let (value, code) = match &out {
                SearchOutcome::Found { system, candidates } => {
                    (json!({"outcome": "found", "candidates": candidates, "system": SystemDocument::from_system(system)}), 0)
                }
                SearchOutcome::NotFound { candidates } => (json!({"outcome": "none", "complete": true, "candidates": candidates}), 0),
                SearchOutcome::Exhausted { candidates } => (json!({"outcome": "none", "complete": false, "candidates": candidates}), 2),
                SearchOutcome::Excluded(reason) => (json!({"outcome": "none", "complete": true, "excluded": reason}), 0),
            };
            Ok(Outcome { value, table: None, code })
        }
    }
}

fn verify_command(v: &VerifyArgs, seed: u64, budget: Budget) -> rankgeo::Result<Outcome> {
    if v.list {
        let list: Vec<Value> = verify::SUITES
            .iter()
            .map(|s| json!({"name": s.name, "aliases": s.aliases, "description": s.description, "defaults": s.default_params()}))
            .collect();
        return Ok(Outcome::ok(&list));
    }
    let name = v.suite.as_deref().expect("clap requires a suite");
    let suite = verify::find_suite(name).ok_or_else(|| Error::Precondition(format!("unknown suite {name:?}; see verify --list")))?;
    let mut p = suite.default_params();
    if !v.q.is_empty() {
        p.q = v.q.clone();
    }
    if let Some(m) = v.m {
        p.m_min = m;
        p.m_max = m;
    }
    if let Some(m) = v.m_max {
        p.m_max = m;
    }
    if let Some(k) = v.k {
        p.k_min = k;
        p.k_max = k;
    }
    if let Some(k) = v.k_max {
        p.k_max = k;
    }
    if let Some(n) = v.n_min {
        p.n_min = n;
    }
    if let Some(n) = v.n_max {
        p.n_max = n;
    }
    if v.random.is_some() {
        p.random = v.random;
    }
    if let Some(s) = v.source {
        p.source = match s {
            SourceArg::Generators => Source::Generators,
            SourceArg::Gabidulin => Source::Gabidulin,
            SourceArg::NearMrdSystems => Source::NearMrdSystems,
        };
    }
    p.seed = seed;
    p.budget = budget.0;
    p.bound_offset = v.bound_offset;
    let report = suite.run(&p)?;
    for line in summary(&report) {
        eprintln!("{line}");
    }
    let code = if report.failures > 0 {
        3
    } else if !report.complete {
        2
    } else {
        0
    };
    Ok(Outcome { code, ..Outcome::ok(&report) })
}

fn summary(r: &verify::SuiteReport) -> Vec<String> {
    let mut out = vec![format!(
        "{}: {} instances ({} not applicable), {} checks, {} failures{}",
        r.suite,
        r.instances,
        r.skipped,
        r.checks,
        r.failures,
        if r.complete { "" } else { ", incomplete" }
    )];
    if let Some(c) = &r.first_counterexample {
        out.push(format!("first counterexample: {} (lhs {}, rhs {})", c.check, c.lhs, c.rhs));
    }
    out
}

/// Flattens a JSON value into "path  value" lines.
fn render_table(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) if !map.is_empty() => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, rows);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, rows);
            }
        }
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}
