//! `nyman`: distance sweeps, Gram cache management, Moebius residuals and
//! verification suites.
//!
//! Exit codes: 0 success, 1 error, 2 ridge regularization was needed,
//! 64 usage, 65 bad cache data.

use std::env;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nyman_core::arith::sieve_moebius;
use nyman_core::criterion::{
    assemble_gram, distance, moebius_residual, BasisSelection, DistanceMethod, DistanceReport, GramMethod,
    GramStore,
};
use nyman_core::seqspace::WeightScheme;
use nyman_core::suites::Suite;
use nyman_core::Error;

/// Largest `L` accepted on the command line.
const L_CAP: u64 = 5000;
const CACHE_ENV: &str = "NYMAN_CACHE_DIR";

const EXIT_ERROR: u8 = 1;
const EXIT_DEGRADED: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;

#[derive(Parser)]
#[command(name = "nyman", version, about = "Distances to the span of dilated fractional parts")]
struct Cli {
    /// Worker threads (default: available parallelism); 1 gives the serial reference order.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute D^2(L) for each requested L.
    Distance(DistanceArgs),
    /// Fill the Gram cache and optionally export it.
    Gram(GramArgs),
    /// Run a fixed verification suite and print its JSON report.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
    },
    /// Residual of the Moebius candidate vector for each L and eps.
    Residual(ResidualArgs),
}

#[derive(Args)]
struct StoreArgs {
    /// Truncate inner products at N terms instead of the closed form.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    truncation: Option<u64>,

    /// Cache file; defaults to a file in $NYMAN_CACHE_DIR when that is set.
    #[arg(long, value_name = "PATH")]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct DistanceArgs {
    /// L values: comma-separated integers or inclusive ranges, e.g. 2,10..20.
    #[arg(long = "L", value_name = "LIST", value_parser = parse_l_list)]
    l: LList,

    #[arg(long, default_value = "exclude-one", value_parser = parse_basis)]
    basis: BasisSelection,

    #[arg(long, value_enum, default_value_t = MethodArg::Ls)]
    method: MethodArg,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(flatten)]
    store: StoreArgs,
}

#[derive(Args)]
struct GramArgs {
    /// Largest basis index.
    #[arg(long = "L", value_name = "N", value_parser = parse_l)]
    l: u64,

    #[arg(long, default_value = "exclude-one", value_parser = parse_basis)]
    basis: BasisSelection,

    /// Write the cached entries to standard output.
    #[arg(long, value_enum)]
    export: Option<Export>,

    #[command(flatten)]
    store: StoreArgs,
}

#[derive(Args)]
struct ResidualArgs {
    #[arg(long = "L", value_name = "LIST", value_parser = parse_l_list)]
    l: LList,

    /// Comma-separated nonnegative exponents.
    #[arg(long, value_name = "LIST", default_value = "0", value_parser = parse_eps_list)]
    eps: EpsList,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(flatten)]
    store: StoreArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Ls,
    Det,
    Both,
}

impl MethodArg {
    fn methods(self) -> &'static [DistanceMethod] {
        match self {
            MethodArg::Ls => &[DistanceMethod::LeastSquares],
            MethodArg::Det => &[DistanceMethod::GramDetRatio],
            MethodArg::Both => &[DistanceMethod::LeastSquares, DistanceMethod::GramDetRatio],
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Export {
    Csv,
}

#[derive(Clone)]
struct LList(Vec<u64>);

#[derive(Clone)]
struct EpsList(Vec<f64>);

fn parse_l(s: &str) -> Result<u64, String> {
    let l: u64 = s.trim().parse().map_err(|_| format!("not a positive integer: {s:?}"))?;
    if l == 0 || l > L_CAP {
        return Err(format!("L must lie in 1..={L_CAP}, got {l}"));
    }
    Ok(l)
}

/// Sorted, deduplicated union of the listed values and ranges.
fn parse_l_list(s: &str) -> Result<LList, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (parse_l(a)?, parse_l(b)?);
                if a > b {
                    return Err(format!("empty range {part:?}"));
                }
                out.extend(a..=b);
            }
            None => out.push(parse_l(part)?),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(LList(out))
}

fn parse_eps_list(s: &str) -> Result<EpsList, String> {
    s.split(',')
        .map(|p| match p.trim().parse::<f64>() {
            Ok(e) if e >= 0.0 && e.is_finite() => Ok(e),
            _ => Err(format!("not a finite nonnegative number: {p:?}")),
        })
        .collect::<Result<_, _>>()
        .map(EpsList)
}

fn parse_basis(s: &str) -> Result<BasisSelection, String> {
    s.parse().map_err(|_| format!("expected all, exclude-one or square-free, got {s:?}"))
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|_| {
        let names: Vec<_> = Suite::ALL.iter().map(|x| x.label()).collect();
        format!("expected one of {}, got {s:?}", names.join(", "))
    })
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Cache(_)) { EXIT_DATA } else { EXIT_ERROR };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: EXIT_ERROR, message: e.to_string() }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure { code: EXIT_ERROR, message: e.to_string() }
    }
}

type CmdResult = Result<u8, Failure>;

impl StoreArgs {
    fn method(&self) -> GramMethod {
        match self.truncation {
            Some(cutoff) => GramMethod::Truncated { cutoff },
            None => GramMethod::ClosedForm,
        }
    }

    /// Explicit `--cache`, else a per-method file under the cache directory.
    fn path(&self) -> Option<PathBuf> {
        self.cache.clone().or_else(|| {
            let dir = env::var_os(CACHE_ENV).filter(|d| !d.is_empty())?;
            let name = match self.truncation {
                Some(n) => format!("gram-harmonic-truncated-{n}.nbbg"),
                None => "gram-harmonic-closed.nbbg".to_string(),
            };
            Some(PathBuf::from(dir).join(name))
        })
    }

    fn open(&self) -> Result<(GramStore, Option<PathBuf>), Error> {
        let path = self.path();
        let store = match &path {
            Some(p) => GramStore::open(p, WeightScheme::harmonic(), self.method())?,
            None => GramStore::new(WeightScheme::harmonic(), self.method())?,
        };
        Ok((store, path))
    }

    /// Fills `store` up to `l_max` and saves it when a cache path is in use.
    /// Returns the number of newly computed entries.
    fn fill(&self, store: &mut GramStore, path: Option<&PathBuf>, l_max: u64, basis: BasisSelection) -> Result<usize, Error> {
        let added = assemble_gram(l_max, basis, store)?;
        if let Some(p) = path {
            if added > 0 || !p.exists() {
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir)?;
                }
                store.save(p)?;
            }
        }
        Ok(added)
    }
}

fn cmd_distance(args: &DistanceArgs) -> CmdResult {
    let ls = &args.l.0;
    let (mut store, path) = args.store.open()?;
    let top = *ls.last().expect("nonempty L list");
    args.store.fill(&mut store, path.as_ref(), top, args.basis)?;

    let mut rows: Vec<DistanceReport> = Vec::new();
    let mut code = 0;
    for &l in ls {
        for &method in args.method.methods() {
            match distance(&store, l, args.basis, method) {
                Ok(r) => {
                    if r.ridge_used > 0.0 {
                        code = code.max(EXIT_DEGRADED);
                    }
                    if r.degenerate {
                        eprintln!("L={l}: degenerate, the basis spans only the zero vector");
                    }
                    rows.push(r);
                }
                Err(e) => {
                    eprintln!("L={l} ({}): {e}", method.label());
                    code = EXIT_ERROR;
                }
            }
        }
    }

    let stdout = io::stdout();
    let mut out = stdout.lock();
    match args.format {
        Format::Csv => {
            writeln!(out, "L,basis,d2,a_est,cond,ridge,method")?;
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{:e},{:e},{}",
                    r.l,
                    r.basis,
                    r.d2,
                    r.a_est,
                    r.cond_estimate,
                    r.ridge_used,
                    r.method.label()
                )?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &rows)?;
            writeln!(out)?;
        }
    }
    Ok(code)
}

fn cmd_gram(args: &GramArgs) -> CmdResult {
    let (mut store, path) = args.store.open()?;
    let added = args.store.fill(&mut store, path.as_ref(), args.l, args.basis)?;
    let summary = format!("{added} newly computed entries, {} cached", store.len());
    match args.export {
        Some(Export::Csv) => {
            store.write_csv(io::stdout().lock())?;
            eprintln!("{summary}");
        }
        None => println!("{summary}"),
    }
    Ok(0)
}

fn cmd_verify(suite: Suite) -> CmdResult {
    let reports = suite.run()?;
    let pass = reports.iter().all(|r| r.pass);
    let doc = serde_json::json!({ "suite": suite.label(), "pass": pass, "checks": reports });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(if pass { 0 } else { EXIT_ERROR })
}

fn cmd_residual(args: &ResidualArgs) -> CmdResult {
    let ls = &args.l.0;
    let top = *ls.last().expect("nonempty L list");
    let table = sieve_moebius(top as usize)?;
    let (mut store, path) = args.store.open()?;
    args.store.fill(&mut store, path.as_ref(), top, BasisSelection::SquareFree)?;

    let mut rows = Vec::new();
    for &l in ls {
        for &eps in &args.eps.0 {
            rows.push((l, eps, moebius_residual(&store, l, eps, &table)?));
        }
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match args.format {
        Format::Csv => {
            writeln!(out, "L,eps,residual")?;
            for (l, eps, r) in &rows {
                writeln!(out, "{l},{eps},{r}")?;
            }
        }
        Format::Json => {
            let doc: Vec<_> = rows
                .iter()
                .map(|(l, eps, r)| serde_json::json!({ "L": l, "eps": eps, "residual": r }))
                .collect();
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global() {
            eprintln!("nyman: {e}");
            return ExitCode::from(EXIT_ERROR);
        }
    }

    let result = match &cli.command {
        Command::Distance(a) => cmd_distance(a),
        Command::Gram(a) => cmd_gram(a),
        Command::Verify { suite } => cmd_verify(*suite),
        Command::Residual(a) => cmd_residual(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("nyman: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
