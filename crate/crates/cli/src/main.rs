mod cache;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand, ValueEnum};
use fockdec::hecke::{GramOracle, DEFAULT_SIZE_CAP};
use fockdec::schaper::{schaper_det_rhs, theorem1_check};
use fockdec::verify::{self, Fault, Suite, VerifyConfig};
use fockdec::{BarMatrix, DecompositionMatrix, Error, Partition, PolyMatrix};
use serde_json::json;

use cache::Cache;

/// q-decomposition numbers of Hecke algebras at roots of unity, via the
/// canonical basis of the level-1 Fock space.
#[derive(Parser, Debug)]
#[command(name = "fockdec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the decomposition matrix D(q) for partitions of m.
    Decomp(MatrixArgs),
    /// Print the bar-involution matrix A(q) for partitions of m.
    Bar(MatrixArgs),
    /// Sum formula, determinant valuation and compatibility check for one partition.
    Schaper(SchaperArgs),
    /// Run the verification suites over a range of m and a set of n.
    Verify(VerifyArgs),
    /// Gram determinant of a Specht module and its behaviour at roots of unity.
    Gram(GramArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Latex,
}

#[derive(Args, Debug)]
struct CacheArgs {
    /// Cache directory (default: $FOCKDEC_CACHE, else ./.fockdec-cache).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long)]
    no_cache: bool,
}

impl CacheArgs {
    fn cache(&self) -> Cache {
        if self.no_cache {
            Cache::disabled()
        } else {
            Cache::new(cache::resolve_dir(self.cache_dir.as_deref()))
        }
    }
}

#[derive(Args, Debug)]
struct MatrixArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(flatten)]
    cache: CacheArgs,
}

#[derive(Args, Debug)]
struct SchaperArgs {
    #[arg(long)]
    lambda: String,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(flatten)]
    cache: CacheArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Check a single m (overrides --min-m/--max-m).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    min_m: usize,
    #[arg(long, default_value_t = 8)]
    max_m: usize,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
    n_set: Vec<usize>,
    /// Restrict to the named suites (comma separated); default all.
    #[arg(long, value_delimiter = ',')]
    suite: Vec<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Also write the JSON report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Args, Debug)]
struct GramArgs {
    #[arg(long)]
    lambda: String,
    /// Moduli at which to report valuations and ranks.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    n: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
    cap: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidPartition(_)
            | Error::InvalidModulus(..)
            | Error::Parse(_)
            | Error::SizeCapExceeded { .. }
            | Error::SizeMismatch(..) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

type CmdResult = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Decomp(a) => cmd_matrix(a, true),
        Command::Bar(a) => cmd_matrix(a, false),
        Command::Schaper(a) => cmd_schaper(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Gram(a) => cmd_gram(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn check_modulus(n: usize) -> Result<(), Failure> {
    if n < 2 {
        return Err(Failure::Usage(format!("--n must be at least 2, got {n}")));
    }
    Ok(())
}

fn parse_lambda(s: &str) -> Result<Partition, Failure> {
    s.parse()
        .map_err(|e: Error| Failure::Usage(format!("bad --lambda '{s}': {e}")))
}

fn bar_matrix(cache: &Cache, n: usize, m: usize) -> Result<BarMatrix, Error> {
    let matrix =
        cache.get_or_compute("bar", n, m, || BarMatrix::compute(n, m).map(|b| b.matrix))?;
    Ok(BarMatrix { n, m, matrix })
}

fn decomposition_matrix(cache: &Cache, bar: &BarMatrix) -> Result<DecompositionMatrix, Error> {
    let (n, m) = (bar.n, bar.m);
    let matrix = cache.get_or_compute("decomp", n, m, || {
        DecompositionMatrix::compute(bar).map(|d| d.matrix)
    })?;
    Ok(DecompositionMatrix { n, m, matrix })
}

fn render_matrix(matrix: &PolyMatrix, n: usize, m: usize, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", matrix.to_json(n, m)),
        Format::Csv => matrix.to_csv(n),
        Format::Latex => matrix.to_latex(),
        Format::Text => {
            let label = |p: &Partition| {
                if p.is_empty() {
                    "()".to_string()
                } else {
                    format!("({p})")
                }
            };
            let mut cells: Vec<Vec<String>> = vec![std::iter::once(String::new())
                .chain(matrix.order().iter().map(label))
                .collect()];
            for (p, row) in matrix.order().iter().zip(matrix.rows()) {
                cells.push(
                    std::iter::once(label(p))
                        .chain(row.iter().map(|x| {
                            if x.is_zero() {
                                ".".to_string()
                            } else {
                                x.to_string()
                            }
                        }))
                        .collect(),
                );
            }
            let cols = cells[0].len();
            let widths: Vec<usize> = (0..cols)
                .map(|c| {
                    cells
                        .iter()
                        .map(|r| r[c].chars().count())
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let mut out = format!("n={n} m={m}\n");
            for row in cells {
                let line: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{s:>w$}"))
                    .collect();
                out.push_str(line.join("  ").trim_end());
                out.push('\n');
            }
            out
        }
    }
}

fn cmd_matrix(a: &MatrixArgs, decomp: bool) -> CmdResult {
    check_modulus(a.n)?;
    let cache = a.cache.cache();
    let bar = bar_matrix(&cache, a.n, a.m)?;
    let matrix = if decomp {
        decomposition_matrix(&cache, &bar)?.matrix
    } else {
        bar.matrix
    };
    print!("{}", render_matrix(&matrix, a.n, a.m, a.format));
    Ok(true)
}

fn cmd_schaper(a: &SchaperArgs) -> CmdResult {
    check_modulus(a.n)?;
    let lambda = parse_lambda(&a.lambda)?;
    let cache = a.cache.cache();
    let bar = bar_matrix(&cache, a.n, lambda.size())?;
    let dec = decomposition_matrix(&cache, &bar)?;
    let report = theorem1_check(&lambda, &bar, &dec)?;
    let nu = schaper_det_rhs(&lambda, a.n)?;
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    match a.format {
        Format::Json => {
            let v = json!({
                "lambda": lambda.parts(),
                "n": a.n,
                "sum_formula": report.sum_formula.to_json(),
                "gabber_joseph": report.gabber_joseph.to_json(),
                "prediction": report.prediction.to_json(),
                "nu": nu.to_string(),
                "theorem1": report.passed(),
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&v).expect("serializable")
            );
        }
        Format::Text => {
            println!("{}, nu={nu}, theorem1: {verdict}", report.sum_formula);
            if !report.passed() {
                println!("gabber-joseph side: {}", report.gabber_joseph);
                println!("jantzen prediction: {}", report.prediction);
            }
        }
        other => {
            return Err(Failure::Usage(format!(
                "schaper does not support --format {other:?}"
            )))
        }
    }
    Ok(report.passed())
}

fn cmd_verify(a: &VerifyArgs) -> CmdResult {
    for &n in &a.n_set {
        check_modulus(n)?;
    }
    let m_values: Vec<usize> = match a.m {
        Some(m) => vec![m],
        None => (a.min_m..=a.max_m).collect(),
    };
    let mut config = VerifyConfig::new(a.n_set.clone(), m_values);
    if !a.suite.is_empty() {
        config.suites = a
            .suite
            .iter()
            .map(|s| s.parse::<Suite>())
            .collect::<Result<_, _>>()?;
    }
    if a.inject_fault {
        config.fault = Some(Fault::FlipBarSign);
    }
    let report = verify::run(&config)?;
    if let Some(path) = &a.report {
        std::fs::write(path, report.to_json() + "\n")
            .map_err(|e| anyhow!("writing {}: {e}", path.display()))?;
    }
    match a.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => {
            print!("{}", report.to_table());
            if report.passed() {
                println!("all {} checks passed", report.records.len());
            } else {
                println!("failing checks: {}", report.failing_checks().join(", "));
            }
        }
        other => {
            return Err(Failure::Usage(format!(
                "verify does not support --format {other:?}"
            )))
        }
    }
    Ok(report.passed())
}

fn cmd_gram(a: &GramArgs) -> CmdResult {
    for &n in &a.n {
        check_modulus(n)?;
    }
    let lambda = parse_lambda(&a.lambda)?;
    let oracle = GramOracle::with_cap(lambda.size(), a.cap)?;
    let gram = oracle.gram_matrix(&lambda)?;
    let det = gram.determinant()?;
    let mut rows = Vec::new();
    for &n in &a.n {
        let nu = fockdec::laurent::cyclotomic_valuation(&det, n as u64)?;
        let rank = fockdec::hecke::rank_at_root(&gram.entries, n)?;
        let expected = schaper_det_rhs(&lambda, n)?;
        rows.push((n, nu, rank, expected));
    }
    let agree = rows.iter().all(|(_, nu, _, e)| *e == (*nu).into());
    match a.format {
        Format::Json => {
            let v = json!({
                "lambda": lambda.parts(),
                "dimension": gram.dim(),
                "determinant": det.to_string(),
                "valuations": rows.iter().map(|(n, nu, rank, e)| json!({
                    "n": n, "nu": nu, "rank": rank, "schaper": e.to_string(),
                })).collect::<Vec<_>>(),
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&v).expect("serializable")
            );
        }
        Format::Text => {
            println!("lambda=({lambda}) dim={} det={det}", gram.dim());
            for (n, nu, rank, e) in &rows {
                println!("n={n}: nu(det)={nu} rank={rank} schaper={e}");
            }
        }
        other => {
            return Err(Failure::Usage(format!(
                "gram does not support --format {other:?}"
            )))
        }
    }
    Ok(agree)
}
