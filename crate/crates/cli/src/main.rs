//! fermibundle: build, validate, suspend and measure free-fermion bundles.

use clap::{Args, Parser, Subcommand, ValueEnum};
use fermibundle::bundle::{diagnostics_csv, validate_bundle_with, ValidateOptions};
use fermibundle::invariants::{component_index_result, flux_rows, pfaffian_rows, rows_to_csv};
use fermibundle::*;
use serde::Deserialize;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const TOL_ENV: &str = "FERMIBUNDLE_TOL";

const CSV_HELP: &str = "CSV columns:
  validate --csv:            index,k,t,antipode,pseudo_max,fermi_max,continuity_max
  invariant --csv (Pfaffian): index,k,t,abs_pf,arg_pf
  invariant --csv (Chern):    plaquette,flux

Exit codes: 0 ok, 1 validation failure, 2 input error, 3 numeric failure.";

#[derive(Parser, Debug)]
#[command(name = "fermibundle", version, about = "Symmetry-protected free-fermion bundles over momentum spheres", after_help = CSV_HELP)]
struct Cli {
    /// JSON file with default option values (keys as the long flag names); flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Algebraic tolerance for checks, in (0, 1e-3].
    #[arg(long, global = true, env = TOL_ENV)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write one of the built-in example bundles.
    Example(ExampleArgs),
    /// Check pseudo-symmetries, the Fermi constraint and continuity.
    Validate(ValidateArgs),
    /// Apply the diagonal map, consuming an imaginary generator.
    Suspend(SuspendArgs),
    /// Compute a topological index.
    Invariant(InvariantArgs),
    /// Print the class table row for a label.
    Classinfo(ClassinfoArgs),
    /// Apply (1,1) doubling to every fiber.
    Doubling(DoublingArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
enum ExampleName {
    #[serde(rename = "majorana")]
    Majorana,
    #[value(name = "dIII", alias = "diii")]
    #[serde(rename = "dIII", alias = "diii")]
    DIII,
    #[value(name = "kitaev_chain")]
    #[serde(rename = "kitaev_chain")]
    KitaevChain,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
enum Kind {
    Parity,
    #[value(name = "class_d_z2")]
    #[serde(rename = "class_d_z2")]
    ClassDZ2,
    KaneMeleZ2,
    ChiralWinding,
    Chern,
    ComponentIndex,
}

#[derive(Args, Debug)]
struct ExampleArgs {
    #[arg(long)]
    name: Option<ExampleName>,
    /// Equator resolution (even).
    #[arg(long = "N")]
    big_n: Option<usize>,
    /// Polar resolution (odd), dIII only.
    #[arg(long = "M")]
    big_m: Option<usize>,
    /// Band count, kitaev_chain only.
    #[arg(long)]
    n: Option<usize>,
    /// Occupied bands at k = 0, kitaev_chain only.
    #[arg(long = "n-plus")]
    n_plus: Option<usize>,
    /// Majorana only: vacuum at both momenta.
    #[arg(long)]
    trivial: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(short, long)]
    input: Option<PathBuf>,
    /// Write per-point diagnostics as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SuspendArgs {
    #[arg(short, long)]
    input: Option<PathBuf>,
    /// Index of the imaginary generator K to consume.
    #[arg(long)]
    k: Option<usize>,
    /// Index of the real generator I moved to the end of the output set.
    #[arg(long)]
    i: Option<usize>,
    /// Output equator resolution for S⁰ inputs.
    #[arg(long = "N")]
    big_n: Option<usize>,
    /// Output polar resolution for S¹ inputs (odd).
    #[arg(long = "M")]
    big_m: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct InvariantArgs {
    #[arg(short, long)]
    input: Option<PathBuf>,
    #[arg(long)]
    kind: Option<Kind>,
    /// Generator index (J₁ for kane_mele_z2, K for chiral_winding).
    #[arg(long)]
    generator: Option<usize>,
    /// Grid point for parity and component_index.
    #[arg(long)]
    point: Option<usize>,
    /// Write per-point Pfaffians or plaquette fluxes as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ClassinfoArgs {
    #[arg(long)]
    label: Option<String>,
}

#[derive(Args, Debug)]
struct DoublingArgs {
    #[arg(short, long)]
    input: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Values read from --config.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    tol: Option<f64>,
    input: Option<PathBuf>,
    output: Option<PathBuf>,
    csv: Option<PathBuf>,
    name: Option<ExampleName>,
    #[serde(rename = "N")]
    big_n: Option<usize>,
    #[serde(rename = "M")]
    big_m: Option<usize>,
    n: Option<usize>,
    n_plus: Option<usize>,
    trivial: Option<bool>,
    k: Option<usize>,
    i: Option<usize>,
    kind: Option<Kind>,
    generator: Option<usize>,
    point: Option<usize>,
    label: Option<String>,
}

enum Failure {
    Validation(String),
    Input(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Input(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Input(m) | Failure::Numeric(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::RankDeficient { .. }
            | Error::DegenerateGrid { .. }
            | Error::UnpairedZero { .. }
            | Error::ZeroAtTrim { .. }
            | Error::Resolution(_)
            | Error::Numeric(_) => Failure::Numeric(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn input_err(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn require<T>(v: Option<T>, flag: &str) -> Outcome<T> {
    v.ok_or_else(|| input_err(format!("missing --{flag}")))
}

fn read_bundle(path: &Path) -> Outcome<Bundle64> {
    let text = std::fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    deserialize_bundle(&text).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Outcome<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| input_err(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn write_bundle(path: Option<&Path>, b: &Bundle64) -> Outcome<()> {
    emit(path, &serialize_bundle(b))
}

fn load_config(path: Option<&Path>) -> Outcome<FileConfig> {
    let Some(p) = path else { return Ok(FileConfig::default()) };
    let text = std::fs::read_to_string(p).map_err(|e| input_err(format!("{}: {e}", p.display())))?;
    serde_json::from_str(&text).map_err(|e| input_err(format!("{}: {e}", p.display())))
}

fn tolerance(flag: Option<f64>, file: Option<f64>) -> Outcome<f64> {
    let tol = flag.or(file).unwrap_or(1e-10);
    if tol > 0.0 && tol <= 1e-3 {
        Ok(tol)
    } else {
        Err(input_err(format!("tolerance {tol} outside (0, 1e-3]")))
    }
}

fn example(a: ExampleArgs, cfg: &FileConfig) -> Outcome<()> {
    let name = require(a.name.or(cfg.name), "name")?;
    let big_n = a.big_n.or(cfg.big_n).unwrap_or(64);
    let b = match name {
        ExampleName::Majorana => example_majorana::<f64>(!(a.trivial || cfg.trivial.unwrap_or(false)), big_n)?,
        ExampleName::DIII => example_dIII::<f64>(big_n, a.big_m.or(cfg.big_m).unwrap_or(33))?,
        ExampleName::KitaevChain => {
            let n = a.n.or(cfg.n).unwrap_or(1);
            example_kitaev_chain::<f64>(n, a.n_plus.or(cfg.n_plus).unwrap_or(n), big_n)?
        }
    };
    write_bundle(a.output.or(cfg.output.clone()).as_deref(), &b)
}

fn validate(a: ValidateArgs, cfg: &FileConfig, tol: f64) -> Outcome<()> {
    let b = read_bundle(&require(a.input.or(cfg.input.clone()), "input")?)?;
    let opts = ValidateOptions { tol, ..ValidateOptions::for_scalar::<f64>() };
    let report = validate_bundle_with(&b, opts);
    if let Some(p) = a.csv.or(cfg.csv.clone()) {
        emit(Some(&p), &diagnostics_csv(&b)?)?;
    }
    let doc = json!({ "class": b.class(), "valid": report.is_empty(), "report": report });
    println!("{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
    if report.is_empty() {
        return Ok(());
    }
    let mut parts = Vec::new();
    if let Some(v) = report.pseudo.first() {
        parts.push(format!("pseudo-symmetry violated at index {}", v.index));
    }
    if let Some(v) = report.fermi.first() {
        parts.push(format!("Fermi constraint violated at index {}", v.index));
    }
    if let Some(v) = report.continuity.first() {
        parts.push(format!("discontinuity between {} and {}", v.a, v.b));
    }
    Err(Failure::Validation(parts.join("; ")))
}

fn suspend_cmd(a: SuspendArgs, cfg: &FileConfig) -> Outcome<()> {
    let b = read_bundle(&require(a.input.or(cfg.input.clone()), "input")?)?;
    let k = require(a.k.or(cfg.k), "k")?;
    let resolution = match b.grid().d() {
        0 => a.big_n.or(cfg.big_n).unwrap_or(64),
        _ => a.big_m.or(cfg.big_m).unwrap_or(33),
    };
    let input = SuspensionInput::new(b, k, a.i.or(cfg.i));
    let out = suspend(&input, resolution)?;
    write_bundle(a.output.or(cfg.output.clone()).as_deref(), &out)
}

fn invariant(a: InvariantArgs, cfg: &FileConfig) -> Outcome<()> {
    let b = read_bundle(&require(a.input.or(cfg.input.clone()), "input")?)?;
    let kind = require(a.kind.or(cfg.kind), "kind")?;
    let generator = a.generator.or(cfg.generator).unwrap_or(0);
    let point = a.point.or(cfg.point).unwrap_or(0);
    let csv_path = a.csv.or(cfg.csv.clone());
    if point >= b.grid().len() {
        return Err(input_err(format!("point {point} outside grid of {} points", b.grid().len())));
    }
    if matches!(kind, Kind::KaneMeleZ2 | Kind::ChiralWinding) && generator >= b.clifford().len() {
        return Err(input_err(format!("generator {generator} outside set of {}", b.clifford().len())));
    }
    let result = match kind {
        Kind::Parity => {
            let p = fermion_parity(b.space(), b.fiber(point))?;
            InvariantResult {
                kind: InvariantKind::ParityBit,
                value: p as i64,
                diagnostics: json!({ "point": point, "k": b.grid().points()[point].k }),
            }
        }
        Kind::ClassDZ2 => class_d_z2(&b)?,
        Kind::KaneMeleZ2 => {
            if let Some(p) = &csv_path {
                let rows = pfaffian_rows(&b, &b.clifford().generators()[generator])?;
                emit(Some(p), &rows_to_csv(&rows)?)?;
            }
            kane_mele_z2(&b, generator)?
        }
        Kind::ChiralWinding => chiral_winding(&b, generator)?,
        Kind::Chern => {
            if let Some(p) = &csv_path {
                emit(Some(p), &rows_to_csv(&flux_rows(&b)?)?)?;
            }
            chern_number(&b)?
        }
        Kind::ComponentIndex => component_index_result(b.space(), b.fiber(point))?,
    };
    println!("{}", serde_json::to_string_pretty(&result).expect("result serializes"));
    Ok(())
}

fn classinfo(a: ClassinfoArgs, cfg: &FileConfig) -> Outcome<()> {
    let label = require(a.label.or(cfg.label.clone()), "label")?;
    let label: ClassLabel = label.parse().map_err(|e: Error| input_err(e.to_string()))?;
    println!("{}", serde_json::to_string_pretty(&class_info(label)).expect("info serializes"));
    Ok(())
}

fn doubling(a: DoublingArgs, cfg: &FileConfig) -> Outcome<()> {
    let b = read_bundle(&require(a.input.or(cfg.input.clone()), "input")?)?;
    let (_, set) = double_one_one(b.space(), b.clifford())?;
    let fibers = b
        .fibers()
        .iter()
        .enumerate()
        .map(|(i, f)| lift_plane(b.space(), f).map_err(|e| Failure::from(e).with_context(i)))
        .collect::<Outcome<Vec<_>>>()?;
    let out = Bundle::new(b.grid().clone(), set, fibers)?;
    write_bundle(a.output.or(cfg.output.clone()).as_deref(), &out)
}

impl Failure {
    fn with_context(self, fiber: usize) -> Self {
        match self {
            Failure::Validation(m) => Failure::Validation(format!("fiber {fiber}: {m}")),
            Failure::Input(m) => Failure::Input(format!("fiber {fiber}: {m}")),
            Failure::Numeric(m) => Failure::Numeric(format!("fiber {fiber}: {m}")),
        }
    }
}

fn run(cli: Cli) -> Outcome<()> {
    let cfg = load_config(cli.config.as_deref())?;
    let tol = tolerance(cli.tol, cfg.tol)?;
    match cli.command {
        Command::Example(a) => example(a, &cfg),
        Command::Validate(a) => validate(a, &cfg, tol),
        Command::Suspend(a) => suspend_cmd(a, &cfg),
        Command::Invariant(a) => invariant(a, &cfg),
        Command::Classinfo(a) => classinfo(a, &cfg),
        Command::Doubling(a) => doubling(a, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
