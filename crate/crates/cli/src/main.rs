use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use diffbase::bounds::{self, characteristic_bound_catalog, Effort};
use diffbase::certify::{check_interval, IntervalCertificate};
use diffbase::constructions as cons;
use diffbase::galois::{ring_check, DEFAULT_CENSUS_MAX};
use diffbase::interval::interval_basis;
use diffbase::table::{self, paper_style, truncate4, Family, RowStatus};
use diffbase::{
    check_certificate, data, lower_bound, min_difference_basis, parse_group_spec, Certificate, Error, GaloisRingSpec,
    GroupSpec, SearchConfig, SearchStatus, SymmetryLevel, Target,
};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_FAILED: u8 = 3;

/// Largest non-cyclic order tabulated without `--extended`.
const NONCYCLIC_MAX: u64 = 48;
/// Largest cyclic order tabulated without `--extended`.
const CYCLIC_MAX: u64 = 64;

#[derive(Parser)]
#[command(name = "diffbase", version, about = "Difference bases of finite groups")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Solver budget in milliseconds (per group for `table`).
    #[arg(long, global = true, default_value_t = 60_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget_ms: u64,
    /// Solver worker threads.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    threads: u64,
    /// Bounds cache file.
    #[arg(long, global = true, env = "DIFFBASE_CACHE")]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Exact difference size of a group.
    Delta(DeltaArgs),
    /// Lower and upper bounds with their provenance.
    Bounds(BoundsArgs),
    /// Build a certificate with one of the explicit constructions.
    Construct(ConstructArgs),
    /// Check a certificate file.
    Verify(VerifyArgs),
    /// Difference sizes over a family of groups.
    Table(TableArgs),
    /// Compare claimed and observed structures of U(R) and R⋆R.
    RingCheck(RingArgs),
}

#[derive(Args)]
struct DeltaArgs {
    /// Group descriptor such as `C4xC2^2`, or a bundled name such as `Q8`.
    #[arg(long)]
    group: String,
    #[arg(long, default_value = "translation-multiplier")]
    symmetry: String,
    /// Write the witness certificate to this file.
    #[arg(long)]
    emit_cert: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    group: String,
    #[arg(long, default_value = "with-constructions")]
    effort: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Quadratic,
    StarQuadratic,
    DiagonalUnit,
    Singer,
    BoseChowla,
    Interval,
    CyclicInterval,
    RecursiveP,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(value_enum)]
    method: Method,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    group: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    path: PathBuf,
}

#[derive(Args)]
#[command(group(ArgGroup::new("family").required(true).args(["cyclic", "noncyclic_abelian", "abelian", "all"])))]
struct TableArgs {
    #[arg(long)]
    cyclic: bool,
    #[arg(long)]
    noncyclic_abelian: bool,
    #[arg(long)]
    abelian: bool,
    /// Abelian groups and the bundled non-abelian groups.
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = 1)]
    min: u64,
    #[arg(long)]
    max: u64,
    /// Decimal commas and `...` for truncated characteristics (text format).
    #[arg(long)]
    paper_style: bool,
    /// Allow orders beyond the quick tiers.
    #[arg(long, env = "DIFFBASE_EXTENDED")]
    extended: bool,
}

#[derive(Args)]
struct RingArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    r: u32,
    #[arg(long, default_value_t = DEFAULT_CENSUS_MAX)]
    census_max: u64,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Uncovered(_) | Error::CensusMismatch(_) | Error::KernelNotCovered | Error::NotInGroup(_) => {
                EXIT_FAILED
            }
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Delta(a) => cmd_delta(&cli, a),
        Command::Bounds(a) => cmd_bounds(&cli, a),
        Command::Construct(a) => cmd_construct(&cli, a),
        Command::Verify(a) => cmd_verify(&cli, a),
        Command::Table(a) => cmd_table(&cli, a),
        Command::RingCheck(a) => cmd_ring_check(&cli, a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn resolve_group(text: &str) -> Result<(String, GroupSpec), Failure> {
    if let Some(g) = data::nonabelian_fixture(text) {
        return Ok((text.to_string(), g.clone()));
    }
    let g = parse_group_spec(text)?;
    Ok((g.name(), g))
}

fn search_config(cli: &Cli) -> SearchConfig {
    SearchConfig {
        time_budget_ms: cli.budget_ms,
        worker_count: cli.threads as usize,
        ..SearchConfig::default()
    }
}

fn default_cache() -> Option<PathBuf> {
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("diffbase").join("bounds.json"))
}

fn with_cache<T>(cli: &Cli, f: impl FnOnce() -> T) -> Result<T, Failure> {
    let path = cli.cache.clone().or_else(default_cache);
    if let Some(p) = &path {
        bounds::load_cache(p)?;
    }
    let out = f();
    if let Some(p) = &path {
        if let Some(dir) = p.parent() {
            fs::create_dir_all(dir).map_err(Error::from)?;
        }
        bounds::save_cache(p)?;
    }
    Ok(out)
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn cmd_delta(cli: &Cli, a: &DeltaArgs) -> Outcome {
    let (name, g) = resolve_group(&a.group)?;
    let symmetry: SymmetryLevel = a.symmetry.parse()?;
    let mut cfg = search_config(cli);
    cfg.symmetry = symmetry;
    let rec = with_cache(cli, || bounds::best_bounds(&g, Effort::WithConstructions))?;
    cfg.initial_upper = Some(rec.upper);
    let r = min_difference_basis(&g, &Target::Full, &cfg)?;
    let proved = r.status == SearchStatus::ProvedOptimal;
    let lb = lower_bound(&g);
    let ch = r.delta as f64 / (g.order() as f64).sqrt();
    let status = if proved { "proved-optimal" } else { "upper-only" };
    if let Some(path) = &a.emit_cert {
        fs::write(path, r.certificate.to_json()?).map_err(Error::from)?;
    }
    let witness: Vec<&Vec<u64>> = r.certificate.basis.iter().map(|x| &x.coords).collect();
    match cli.format {
        Format::Json => print_json(&json!({
            "group": name,
            "order": g.order(),
            "lb": lb,
            "delta": r.delta,
            "lower": r.lower,
            "characteristic": ch,
            "status": status,
            "method": r.certificate.method,
            "witness": witness,
        })),
        Format::Csv => {
            println!("group,order,lb,delta,characteristic,method,status");
            let delta = if proved { r.delta.to_string() } else { format!("{}..{}", r.lower, r.delta) };
            println!("{name},{},{lb},{delta},{},{},{status}", g.order(), truncate4(ch), r.certificate.method);
        }
        Format::Text => {
            println!("group: {name}");
            println!("order: {}", g.order());
            println!("lb: {lb}");
            if proved {
                println!("delta: {}", r.delta);
            } else {
                println!("delta: {}..{}", r.lower, r.delta);
            }
            println!("characteristic: {}", truncate4(ch));
            println!("status: {status}");
            println!("witness: {}", serde_json::to_string(&witness).expect("serializable"));
        }
    }
    Ok(if proved { EXIT_OK } else { EXIT_BUDGET })
}

fn cmd_bounds(cli: &Cli, a: &BoundsArgs) -> Outcome {
    let (name, g) = resolve_group(&a.group)?;
    let effort: Effort = a.effort.parse()?;
    let cfg = search_config(cli);
    let rec = with_cache(cli, || bounds::best_bounds_with(&g, effort, &cfg))?;
    let catalog = characteristic_bound_catalog(&g);
    match cli.format {
        Format::Json => print_json(&json!({
            "group": name,
            "effort": effort,
            "record": rec,
            "catalog": catalog,
        })),
        Format::Csv => {
            println!("side,method,value,note");
            for e in &rec.trace {
                let side = serde_json::to_value(e.side).expect("serializable");
                println!(
                    "{},{},{},\"{}\"",
                    side.as_str().unwrap_or_default(),
                    e.method,
                    e.value,
                    e.note.clone().unwrap_or_default().replace('"', "\"\"")
                );
            }
        }
        Format::Text => {
            println!("group: {name}");
            println!("order: {}", g.order());
            println!("lower: {} ({})", rec.lower, rec.lower_method);
            println!("upper: {} ({})", rec.upper, rec.upper_method);
            println!("characteristic upper: {}", truncate4(rec.characteristic_upper));
            for c in catalog.iter().filter(|c| c.applies()) {
                println!(
                    "  {:<20} ð {} Δ {}",
                    c.method,
                    truncate4(c.characteristic.unwrap_or_default()),
                    c.upper.unwrap_or_default()
                );
            }
        }
    }
    Ok(EXIT_OK)
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| usage(format!("missing --{flag}")))
}

fn ring_arg(a: &ConstructArgs) -> Result<GaloisRingSpec, Failure> {
    Ok(GaloisRingSpec::new(need(a.p, "p")?, need(a.k, "k")?, need(a.r, "r")?)?)
}

fn cmd_construct(cli: &Cli, a: &ConstructArgs) -> Outcome {
    let text = match a.method {
        Method::Interval => {
            let r = interval_basis(need(a.n, "n")?, cli.budget_ms)?;
            r.certificate.verify()?;
            serde_json::to_string_pretty(&r.certificate).map_err(Error::from)?
        }
        m => {
            let c = match m {
                Method::Quadratic => cons::quadratic_base(&ring_arg(a)?)?,
                Method::StarQuadratic => cons::star_quadratic_base(&ring_arg(a)?)?,
                Method::DiagonalUnit => cons::diagonal_unit_base(&ring_arg(a)?)?,
                Method::Singer => cons::singer_basis(need(a.q, "q")?)?,
                Method::BoseChowla => cons::bose_chowla_basis(need(a.q, "q")?)?,
                Method::CyclicInterval => cons::cyclic_from_interval(need(a.n, "n")?)?,
                Method::RecursiveP => {
                    let spec = a.group.as_deref().ok_or_else(|| usage("missing --group"))?;
                    cons::recursive_p_basis(&parse_group_spec(spec)?)?
                }
                Method::Interval => unreachable!(),
            };
            c.verify()?;
            c.to_json()?
        }
    };
    match &a.out {
        Some(path) => {
            fs::write(path, text + "\n").map_err(Error::from)?;
            eprintln!("wrote {}", path.display());
        }
        None => println!("{text}"),
    }
    Ok(EXIT_OK)
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> Outcome {
    let text = read(&a.path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", a.path.display())))?;
    let (valid, missed, size) = if value.get("group").and_then(|g| g.as_str()) == Some("Z") {
        let c: IntervalCertificate =
            serde_json::from_value(value).map_err(|e| usage(format!("{}: {e}", a.path.display())))?;
        let missed: Vec<serde_json::Value> = check_interval(&c).into_iter().map(|d| json!(d)).collect();
        (missed.is_empty(), missed, c.size())
    } else {
        let c: Certificate =
            serde_json::from_value(value).map_err(|e| usage(format!("{}: {e}", a.path.display())))?;
        let report = check_certificate(&c)?;
        let missed = report.missed.iter().map(|x| json!(x.coords)).collect();
        (report.valid, missed, c.size())
    };
    match cli.format {
        Format::Json => print_json(&json!({"valid": valid, "basis_size": size, "missed": missed})),
        _ => {
            println!("{}", if valid { "valid" } else { "invalid" });
            println!("basis size: {size}");
            if !valid {
                println!("missed: {}", serde_json::to_string(&missed).expect("serializable"));
            }
        }
    }
    Ok(if valid { EXIT_OK } else { EXIT_FAILED })
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn cmd_table(cli: &Cli, a: &TableArgs) -> Outcome {
    let family = if a.cyclic {
        Family::Cyclic
    } else if a.noncyclic_abelian {
        Family::NoncyclicAbelian
    } else if a.abelian {
        Family::Abelian
    } else {
        Family::All
    };
    if a.min > a.max {
        return Err(usage("--min exceeds --max"));
    }
    let limit = if family == Family::Cyclic { CYCLIC_MAX } else { NONCYCLIC_MAX };
    if a.max > limit && !a.extended {
        return Err(usage(format!("orders above {limit} need --extended")));
    }
    let cfg = search_config(cli);
    let rows = with_cache(cli, || table::solve_table(family, a.min, a.max, &cfg))??;
    match cli.format {
        Format::Csv => print!("{}", table::to_csv(&rows)),
        Format::Json => print_json(&serde_json::to_value(&rows).map_err(Error::from)?),
        Format::Text => {
            println!("{:<16} {:>5} {:>4} {:>7} {:>10}  {}", "group", "order", "lb", "delta", "ð", "status");
            for r in &rows {
                let ch = if a.paper_style { paper_style(r.characteristic) } else { truncate4(r.characteristic) };
                let delta = if r.is_exact() { r.delta.to_string() } else { format!("{}..{}", r.lower, r.delta) };
                println!("{:<16} {:>5} {:>4} {:>7} {:>10}  {}", r.group, r.order, r.lb, delta, ch, r.status);
            }
        }
    }
    Ok(if rows.iter().any(|r| r.status == RowStatus::UpperOnly) { EXIT_BUDGET } else { EXIT_OK })
}

fn cmd_ring_check(cli: &Cli, a: &RingArgs) -> Outcome {
    let ring = GaloisRingSpec::new(a.p, a.k, a.r)?;
    let report = ring_check(&ring, a.census_max)?;
    let ok = report.all_match();
    match cli.format {
        Format::Json => print_json(&serde_json::to_value(&report).map_err(Error::from)?),
        _ => {
            let show = |o: &Option<String>, m: Option<bool>| match (o, m) {
                (Some(o), Some(true)) => format!("{o}, match"),
                (Some(o), _) => format!("{o}, MISMATCH"),
                (None, _) => "not computed".to_string(),
            };
            println!("ring: GR({}^{},{})", a.p, a.k, a.r);
            println!("U(R) claimed: {}", report.unit_claimed);
            println!("U(R) observed: {}", show(&report.unit_observed, report.unit_match));
            println!("R*R claimed: {}", report.star_claimed);
            println!("R*R observed: {}", show(&report.star_observed, report.star_match));
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}
