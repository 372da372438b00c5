//! Command-line front end: chain/flower reports, verification sweeps, and
//! the Smith-normal-form engine.
//!
//! Exit codes: 0 success, 2 input error, 3 verification mismatch,
//! 4 invalid partition.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use sandflower::error::Error;
use sandflower::matrix::IntMatrix;
use sandflower::report::{
    chain_report, flower_report, ChainOptions, FlowerOptions, Report, SpecFile,
};
use sandflower::sweep::{run_sweep, summarize, SweepLimits};
use sandflower::ChainSpec;

#[derive(Parser)]
#[command(
    name = "sandflower",
    version,
    about = "Sandpile groups of polygon chains and flowers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report on a polygon chain given by its side counts.
    Chain(ChainArgs),
    /// Report on a polygon flower given by a JSON spec file.
    Flower(FlowerArgs),
    /// Verify all formulas against the oracles over every small flower.
    Sweep(SweepArgs),
    /// Smith normal form of an integer matrix from a text file.
    Snf(SnfArgs),
}

#[derive(Args)]
struct ChainArgs {
    /// Comma-separated polygon side counts, e.g. 4,4,4,4.
    #[arg(long, value_delimiter = ',', conflicts_with = "spec")]
    ks: Option<Vec<u32>>,
    /// JSON spec file with {"ks": [...]}.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Include the per-edge coefficient/order/generator table.
    #[arg(long)]
    edges: bool,
    /// Cross-check tau and the group against both oracles.
    #[arg(long)]
    verify: bool,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FlowerArgs {
    /// JSON spec file with {"center": t, "petals": [{"ks": [...]}, ...]}.
    #[arg(long)]
    spec: PathBuf,
    /// Include the m-value and petal spanning-tree counts.
    #[arg(long)]
    mu: bool,
    /// Classify every edge and every petal generator.
    #[arg(long)]
    generators: bool,
    /// Print all minimum prime partitions and their reduced matrices.
    #[arg(long)]
    partition: bool,
    /// Reduce along one explicit partition of the petal indices, written
    /// as semicolon-separated parts of comma-separated 1-based indices,
    /// e.g. "1,3;2,4". Exit code 4 if it is not a prime partition.
    #[arg(long, value_name = "PARTS", conflicts_with = "partition")]
    use_partition: Option<String>,
    /// Cross-check tau and the group against both oracles.
    #[arg(long)]
    verify: bool,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Largest center cycle length.
    #[arg(long = "max-t")]
    max_t: usize,
    /// Most polygons per petal.
    #[arg(long = "max-polys")]
    max_polys: usize,
    /// Largest polygon side count.
    #[arg(long = "max-k")]
    max_k: u32,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct SnfArgs {
    /// Matrix file: first line "rows cols", then row-major integers.
    #[arg(long)]
    matrix: PathBuf,
}

/// Failure paired with the exit code to report.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    fn mismatch(message: impl Into<String>) -> CliError {
        CliError {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let code = match e {
            Error::InvalidPartition(_) => 4,
            _ => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Chain(args) => cmd_chain(args),
        Command::Flower(args) => cmd_flower(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Snf(args) => cmd_snf(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn cmd_chain(args: ChainArgs) -> Result<(), CliError> {
    let spec = match (&args.ks, &args.spec) {
        (Some(ks), None) => ChainSpec::new(ks.clone())?,
        (None, Some(path)) => SpecFile::parse(&read_file(path)?)?.to_chain()?,
        _ => return Err(CliError::input("pass exactly one of --ks or --spec")),
    };
    let report = chain_report(
        &spec,
        ChainOptions {
            edges: args.edges,
            verify: args.verify,
        },
    )?;
    emit(&report, args.json)
}

fn cmd_flower(args: FlowerArgs) -> Result<(), CliError> {
    let spec = SpecFile::parse(&read_file(&args.spec)?)?.to_flower()?;
    let explicit_partition = args
        .use_partition
        .as_deref()
        .map(parse_partition)
        .transpose()?;
    let report = flower_report(
        &spec,
        FlowerOptions {
            mu_detail: args.mu,
            generators: args.generators,
            partitions: args.partition,
            explicit_partition,
            verify: args.verify,
        },
    )?;
    emit(&report, args.json)
}

/// "1,3;2,4" -> [[1,3],[2,4]]
fn parse_partition(text: &str) -> Result<Vec<Vec<usize>>, CliError> {
    text.split(';')
        .map(|part| {
            part.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<usize>()
                        .map_err(|e| CliError::input(format!("bad index {tok:?}: {e}")))
                })
                .collect()
        })
        .collect()
}

fn emit(report: &Report, json: bool) -> Result<(), CliError> {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(report)
                .map_err(|e| CliError::input(format!("serialize: {e}")))?
        );
    } else {
        print_human(report);
    }
    if let Some(oracle) = &report.oracle {
        if !oracle.ok {
            return Err(CliError::mismatch(format!(
                "oracle disagrees: tau={} laplacian={} cycle_cut={}",
                oracle.tau_match, oracle.laplacian_group_match, oracle.cycle_cut_group_match
            )));
        }
    }
    Ok(())
}

fn print_human(report: &Report) {
    if let Some(taus) = &report.taus {
        println!("tau sequence: {}", taus.join(" "));
    }
    println!("tau = {}", report.tau);
    println!(
        "group: {}  (mu={}, cyclic={})",
        report.group.display,
        report.mu,
        if report.cyclic { "yes" } else { "no" }
    );
    if let Some(m) = report.m_value {
        println!("m(p) = {m}");
    }
    if let Some(p) = &report.petal_taus {
        println!("petal taus: {}", p.join(" "));
    }
    if let Some(flags) = &report.petal_generators {
        let line: Vec<String> = flags
            .iter()
            .enumerate()
            .map(|(i, g)| format!("f{}={}", i + 1, if *g { "yes" } else { "no" }))
            .collect();
        println!("petal generators: {}", line.join(" "));
    }
    if let Some(exists) = report.generating_edge_exists {
        println!(
            "generating edge exists: {}",
            if exists { "yes" } else { "no" }
        );
    }
    if let Some(edges) = &report.edges {
        let widths = edges.iter().fold((4, 11, 5), |w, e| {
            (
                w.0.max(e.edge.len()),
                w.1.max(e.coefficient.len()),
                w.2.max(e.order.len()),
            )
        });
        println!(
            "{:<w0$}  {:>w1$}  {:>w2$}  generator",
            "edge",
            "coefficient",
            "order",
            w0 = widths.0,
            w1 = widths.1,
            w2 = widths.2
        );
        for e in edges {
            println!(
                "{:<w0$}  {:>w1$}  {:>w2$}  {}",
                e.edge,
                e.coefficient,
                e.order,
                if e.generator { "yes" } else { "no" },
                w0 = widths.0,
                w1 = widths.1,
                w2 = widths.2
            );
        }
    }
    if let Some(partitions) = &report.partitions {
        for (i, p) in partitions.iter().enumerate() {
            let parts: Vec<String> = p
                .parts
                .iter()
                .map(|part| {
                    format!(
                        "{{{}}}",
                        part.iter()
                            .map(usize::to_string)
                            .collect::<Vec<_>>()
                            .join(",")
                    )
                })
                .collect();
            println!("partition {}: {}", i + 1, parts.join(" u "));
            println!("  alphas: {}", p.alphas.join(" "));
            println!("  betas:  {}", p.betas.join(" "));
            for row in &p.reduced_matrix {
                println!("  [ {} ]", row.join(" "));
            }
            println!("  group: {}  (mu={})", p.group.display, p.mu);
        }
    }
    if let Some(oracle) = &report.oracle {
        println!("oracle: {}", if oracle.ok { "OK" } else { "MISMATCH" });
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    if args.max_t < 2 {
        return Err(CliError::input("--max-t must be at least 2"));
    }
    if args.max_k < 2 {
        return Err(CliError::input("--max-k must be at least 2"));
    }
    let limits = SweepLimits {
        max_center: args.max_t,
        max_polygons: args.max_polys,
        max_sides: args.max_k,
    };
    let outcome = run_sweep(&limits, args.jobs);
    println!("{}", summarize(&outcome));
    if outcome.ok() {
        Ok(())
    } else {
        for failure in outcome.failures.iter().take(5) {
            eprintln!("failed: {}", failure.what);
        }
        Err(CliError::mismatch(format!(
            "{} instances failed",
            outcome.failures.len()
        )))
    }
}

fn cmd_snf(args: SnfArgs) -> Result<(), CliError> {
    let text = read_file(&args.matrix)?;
    let matrix = parse_matrix(&text)?;
    let (diag, _) = matrix.smith_normal_form();
    let line: Vec<String> = diag.iter().map(BigInt::to_string).collect();
    println!("{}", line.join(" "));
    Ok(())
}

/// Text format: first line "rows cols", then row-major whitespace-separated
/// integers.
fn parse_matrix(text: &str) -> Result<IntMatrix, CliError> {
    let mut tokens = text.split_whitespace();
    let rows: usize = tokens
        .next()
        .ok_or_else(|| CliError::input("missing row count"))?
        .parse()
        .map_err(|e| CliError::input(format!("bad row count: {e}")))?;
    let cols: usize = tokens
        .next()
        .ok_or_else(|| CliError::input("missing column count"))?
        .parse()
        .map_err(|e| CliError::input(format!("bad column count: {e}")))?;
    let cells = rows
        .checked_mul(cols)
        .filter(|&n| n <= 1_000_000)
        .ok_or_else(|| CliError::input("matrix dimensions too large"))?;
    let mut data = Vec::with_capacity(cells);
    for _ in 0..cells {
        let tok = tokens
            .next()
            .ok_or_else(|| CliError::input(format!("expected {cells} entries")))?;
        let v: BigInt = tok
            .parse()
            .map_err(|e| CliError::input(format!("bad entry {tok:?}: {e}")))?;
        data.push(v);
    }
    if tokens.next().is_some() {
        return Err(CliError::input("trailing tokens after matrix entries"));
    }
    let mut m = IntMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            *m.entry_mut(i, j) = data[i * cols + j].clone();
        }
    }
    Ok(m)
}
