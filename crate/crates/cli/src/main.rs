use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sl3coh::harness::{self, CrosscheckOptions, Engine, QueryRecord, Route, WeightInput};
use sl3coh::{Errata, Prime, Tables, Weight};

#[derive(Parser)]
#[command(name = "sl3coh", version, about = "Second cohomology of simple SL3-modules")]
struct Cli {
    /// Apply the errata overlay to the Ext^1 tables.
    #[arg(long, global = true, value_enum, default_value_t = Switch::On)]
    errata: Switch,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Pipeline,
    Theorem,
    Both,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Pipeline => Route::Pipeline,
            RouteArg::Theorem => Route::Theorem,
            RouteArg::Both => Route::Both,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Dimension of H^2(G, L(w)) for one or more weights.
    H2(H2Args),
    /// CSV over every weight (a,b) with a,b < max.
    Table(TableArgs),
    /// JSON report of weights where the two routes disagree.
    Crosscheck(CrosscheckArgs),
    /// G- and G1-linkage of weights to zero.
    Linkage(LinkageArgs),
    /// Ext^1_G(L(row), L(mu)) from the tables.
    Ext1(Ext1Args),
}

#[derive(Args)]
struct H2Args {
    #[arg(long, value_parser = parse_prime)]
    p: Prime,
    /// `a,b`, or restricted factors `a0,b0;a1,b1;...`.
    #[arg(long, required = true, value_parser = WeightInput::parse)]
    weight: Vec<WeightInput>,
    /// Extra Frobenius twist applied to every weight.
    #[arg(long, default_value_t = 0)]
    twist: usize,
    #[arg(long, value_enum, default_value_t = RouteArg::Both)]
    route: RouteArg,
    /// Include the pipeline trace.
    #[arg(long)]
    explain: bool,
    /// Exit with status 2 if the routes disagree on any weight.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, value_parser = parse_prime)]
    p: Prime,
    #[arg(long)]
    max: i64,
    #[arg(long)]
    discrepancies_only: bool,
    /// Write to a file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CrosscheckArgs {
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_prime)]
    p: Vec<Prime>,
    #[arg(long, default_value_t = 3)]
    max_len: u32,
    #[arg(long, default_value_t = 4)]
    max_r: usize,
    #[arg(long, default_value_t = 2)]
    max_d: usize,
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Exit with status 2 if any discrepancy is found.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct LinkageArgs {
    #[arg(long, value_parser = parse_prime)]
    p: Prime,
    #[arg(long, required = true, value_parser = parse_pair)]
    weight: Vec<Weight>,
}

#[derive(Args)]
struct Ext1Args {
    #[arg(long, value_parser = parse_prime)]
    p: Prime,
    #[arg(long, value_parser = parse_pair)]
    row: Weight,
    #[arg(long, value_parser = parse_pair)]
    mu: Weight,
}

fn parse_prime(s: &str) -> Result<Prime, String> {
    let n: u32 = s.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
    Prime::new(n).map_err(|e| e.to_string())
}

fn parse_pair(s: &str) -> Result<Weight, String> {
    match WeightInput::parse(s)? {
        WeightInput::Pair(w) => Ok(w),
        WeightInput::Factors(_) => Err(format!("expected a single pair a,b, got {s:?}")),
    }
}

enum Failure {
    Usage(String),
    Disagree,
}

impl From<sl3coh::Error> for Failure {
    fn from(e: sl3coh::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Disagree) => ExitCode::from(2),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(out: &mut impl Write, rec: &QueryRecord) -> Result<(), Failure> {
    writeln!(out, "{}", serde_json::to_string(rec).expect("records serialize"))?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let errata = match cli.errata {
        Switch::On => Errata::On,
        Switch::Off => Errata::Off,
    };
    let tables = Tables::from_env(errata)?;
    let mut stdout = BufWriter::new(io::stdout().lock());
    match cli.command {
        Command::H2(a) => {
            let engine = Engine::new(&tables, a.p);
            let mut disagree = false;
            for w in &a.weight {
                let rec = engine.h2_record(w, a.twist, a.route.into(), a.explain)?;
                disagree |= rec.agree == Some(false);
                emit(&mut stdout, &QueryRecord::H2(rec))?;
            }
            stdout.flush()?;
            if a.strict && disagree {
                return Err(Failure::Disagree);
            }
        }
        Command::Table(a) => {
            let rows = Engine::new(&tables, a.p).table(a.max, a.discrepancies_only)?;
            let mut out = open_output(&a.output)?;
            harness::write_csv(&mut out, &rows)?;
            out.flush()?;
        }
        Command::Crosscheck(a) => {
            let opts = CrosscheckOptions {
                max_len: a.max_len,
                max_r: a.max_r,
                max_d: a.max_d,
            };
            let report = harness::crosscheck(&tables, &a.p, &opts)?;
            let mut out = open_output(&a.output)?;
            out.write_all(harness::crosscheck_json(&report).as_bytes())?;
            out.flush()?;
            if a.strict && report.primes.iter().any(|r| !r.discrepancies.is_empty()) {
                return Err(Failure::Disagree);
            }
        }
        Command::Linkage(a) => {
            for w in &a.weight {
                emit(&mut stdout, &QueryRecord::Linkage(harness::linkage_record(a.p, w)?))?;
            }
        }
        Command::Ext1(a) => {
            emit(&mut stdout, &QueryRecord::Ext1(harness::ext1_record(&tables, a.p, &a.row, &a.mu)?))?;
        }
    }
    stdout.flush()?;
    Ok(())
}
