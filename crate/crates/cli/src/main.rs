use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use kgraph_core::qdeform::{limit_rate, series_check};
use kgraph_core::{
    enumerate_paths, su3, su3_verify, textfmt, DegreeVector, KgError, ReportEnvelope, Status,
    VerificationReport,
};

/// Rank-k graph validation and truncated operator verification.
#[derive(Parser)]
#[command(name = "kgraph", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a graph file and run all structural validations.
    Validate { file: PathBuf },
    /// List the normal-form paths of one degree between two vertices.
    Paths(PathsArgs),
    /// Run the full operator verification suite for the built-in graph.
    Su3Verify(VerifyArgs),
    /// Tabulate parameter-limit residuals, fitted rates, and series errors.
    Qlimit(QlimitArgs),
    /// Write the built-in six-vertex graph in the text format.
    ExportSu3 { file: PathBuf },
}

#[derive(Args)]
struct PathsArgs {
    file: PathBuf,
    /// Source vertex label.
    #[arg(long)]
    from: String,
    /// Range vertex label.
    #[arg(long)]
    to: String,
    /// Degree as comma-separated coordinates, e.g. 1,1.
    #[arg(long)]
    degree: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Truncation dimension per Fock factor.
    #[arg(long, default_value_t = 10)]
    dim: usize,
    /// Reserve depth of the core subspace.
    #[arg(long, default_value_t = 6)]
    depth: usize,
    /// Tolerance for the coarse residual checks.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QlimitArgs {
    /// Comma-separated deformation parameters in (0,1).
    #[arg(long, default_value = "0.125,0.0625,0.03125,0.015625,0.0078125")]
    q: String,
    /// Truncation dimension per Fock factor.
    #[arg(long, default_value_t = 10)]
    dim: usize,
    /// Generator selection: `all` or a single `i,j` pair.
    #[arg(long, default_value = "all")]
    which: String,
    /// Write the CSV table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

const DEPTH_DEFAULT: usize = 6;
const NNZ_CAP: u64 = 10_000_000;

fn guard_resources(dim: usize) -> Result<()> {
    let cells = (dim as u64).pow(3);
    if cells > NNZ_CAP {
        return Err(anyhow!(KgError::ResourceCap(format!(
            "truncation dimension {dim} implies {cells} matrix cells, over the {NNZ_CAP} cap"
        ))));
    }
    Ok(())
}

fn parse_degree(text: &str) -> Result<DegreeVector> {
    let coords: Vec<u32> = text
        .split(',')
        .map(|p| p.trim().parse().map_err(|_| anyhow!("invalid degree coordinate `{p}`")))
        .collect::<Result<_>>()?;
    if coords.is_empty() {
        return Err(anyhow!("empty degree"));
    }
    Ok(DegreeVector(coords))
}

fn parse_q_grid(text: &str) -> Result<Vec<f64>> {
    let grid: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse().map_err(|_| anyhow!("invalid q value `{p}`")))
        .collect::<Result<_>>()?;
    for &q in &grid {
        if !(0.0 < q && q < 1.0) {
            return Err(anyhow!("q value {q} outside (0,1)"));
        }
    }
    if grid.is_empty() {
        return Err(anyhow!("empty q grid"));
    }
    Ok(grid)
}

fn print_report(report: &VerificationReport) {
    for c in &report.checks {
        let residual = c
            .residual
            .map(|r| format!("{r:.3e}"))
            .unwrap_or_else(|| "-".to_string());
        let status = match c.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Warn => "warn",
        };
        println!("{status}  {:40} residual {residual}", c.name);
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{content}"),
    }
    Ok(())
}

fn cmd_validate(file: &PathBuf) -> Result<bool> {
    let text = std::fs::read_to_string(file)
        .with_context(|| format!("reading {}", file.display()))?;
    match textfmt::load(&text) {
        Ok(g) => {
            let mut report = g.skeleton.validate()?;
            report.merge(g.skeleton.check_commuting()?);
            report.merge(g.validate_factorization()?);
            let report = report.sorted();
            print_report(&report);
            Ok(report.all_pass())
        }
        Err(e) => {
            // Constraint violations found by validation are check failures
            // (exit 1); malformed input is a usage error (exit 2).
            match e {
                KgError::Parse { .. } => Err(anyhow!(e)),
                other => {
                    println!("FAIL  {other}");
                    Ok(false)
                }
            }
        }
    }
}

fn cmd_paths(args: &PathsArgs) -> Result<bool> {
    let text = std::fs::read_to_string(&args.file)
        .with_context(|| format!("reading {}", args.file.display()))?;
    let g = textfmt::load(&text).map_err(|e| anyhow!(e))?;
    let from = g
        .skeleton
        .vertex_by_label(&args.from)
        .map_err(|e| anyhow!(e))?
        .index;
    let to = g
        .skeleton
        .vertex_by_label(&args.to)
        .map_err(|e| anyhow!(e))?
        .index;
    let degree = parse_degree(&args.degree)?;
    let paths = enumerate_paths(&g, from, to, &degree).map_err(|e| anyhow!(e))?;
    for p in &paths {
        println!("{}", p.display(&g));
    }
    println!("{} path(s) {} -> {} of degree {}", paths.len(), args.from, args.to, degree);
    Ok(true)
}

fn cmd_su3_verify(args: &VerifyArgs) -> Result<bool> {
    guard_resources(args.dim)?;
    if args.dim < args.depth + 2 {
        return Err(anyhow!(KgError::Parameter(format!(
            "dimension {} must be at least depth {} + 2",
            args.dim, args.depth
        ))));
    }
    let report = su3_verify(args.dim, args.depth, args.tol).map_err(|e| anyhow!(e))?;
    let envelope = ReportEnvelope::wrap(&report);
    let json = serde_json::to_string_pretty(&envelope)? + "\n";
    emit(&args.out, &json)?;
    if args.out.is_some() {
        print_report(&report);
    }
    Ok(report.all_pass())
}

fn cmd_qlimit(args: &QlimitArgs) -> Result<bool> {
    guard_resources(args.dim)?;
    let grid = parse_q_grid(&args.q)?;
    let pairs: Vec<(usize, usize)> = if args.which == "all" {
        vec![(1, 1), (1, 2), (1, 3), (2, 1)]
    } else {
        let coords: Vec<usize> = args
            .which
            .split(',')
            .map(|p| p.trim().parse().map_err(|_| anyhow!("invalid generator index `{p}`")))
            .collect::<Result<_>>()?;
        match coords[..] {
            [i, j] if (1..=2).contains(&i) && (1..=3).contains(&j) => vec![(i, j)],
            _ => return Err(anyhow!("--which takes `all` or `i,j` with i in 1..2, j in 1..3")),
        }
    };
    let mut csv = String::from("check,q,K,residual\n");
    for &(i, j) in &pairs {
        let fit = limit_rate(i, j, &grid, args.dim, DEPTH_DEFAULT).map_err(|e| anyhow!(e))?;
        for (q, r) in &fit.points {
            writeln!(csv, "limit_{i}_{j},{q},,{r:e}").unwrap();
        }
        if let Some(slope) = fit.slope {
            writeln!(csv, "slope_{i}_{j},,,{slope:e}").unwrap();
        }
    }
    // Series reconstruction errors per truncation order, at q = 1/2 where
    // the geometric decay per added order is cleanly visible.
    for formula in 1..=3u8 {
        let q = 0.5;
        let errs = series_check(formula, q, 8, args.dim, DEPTH_DEFAULT).map_err(|e| anyhow!(e))?;
        for (k, r) in errs.iter().enumerate() {
            writeln!(csv, "series_{formula},{q},{},{r:e}", k + 1).unwrap();
        }
    }
    emit(&args.out, &csv)?;
    Ok(true)
}

fn cmd_export_su3(file: &PathBuf) -> Result<bool> {
    let g = su3::build().map_err(|e| anyhow!(e))?;
    std::fs::write(file, textfmt::to_text(&g))
        .with_context(|| format!("writing {}", file.display()))?;
    Ok(true)
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Validate { file } => cmd_validate(file),
        Command::Paths(args) => cmd_paths(args),
        Command::Su3Verify(args) => cmd_su3_verify(args),
        Command::Qlimit(args) => cmd_qlimit(args),
        Command::ExportSu3 { file } => cmd_export_su3(file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
