use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use abp_core::abp::AbpGraph;
use abp_core::constructions::{
    build_bivariate_abp, build_charzero_abp, build_gradient_abp, ConstructionStats,
};
use abp_core::identities::{identity_sides, verify_all, verify_identity, IdentityName};
use abp_core::{ConstMatrix, PolyMatrix, RingDescriptor};
use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

/// Exact algebraic branching programs for characteristic polynomial
/// coefficients.
#[derive(Parser)]
#[command(name = "abpc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    Charzero,
    Bivariate,
    Gradient,
}

#[derive(Subcommand)]
enum Command {
    /// Build a program and write it as JSON.
    Build {
        #[arg(long, value_enum)]
        construction: Construction,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "int")]
        ring: RingDescriptor,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Evaluate outputs of a program at a constant matrix.
    Eval {
        graph: PathBuf,
        /// Row-major JSON array of ring-element strings.
        #[arg(long)]
        matrix: String,
        /// Output to print; repeatable. Defaults to every output.
        #[arg(long)]
        output: Vec<String>,
    },
    /// Check one identity symbolically.
    Verify {
        #[arg(long)]
        identity: IdentityName,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "int")]
        ring: RingDescriptor,
        #[arg(long)]
        combinatorial: bool,
        /// Print both sides in canonical text form.
        #[arg(long)]
        dump: bool,
    },
    /// Check every identity over a parameter grid.
    VerifyAll {
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, default_value_t = 4)]
        d_max: usize,
        #[arg(long, default_value = "int")]
        ring: RingDescriptor,
    },
    /// Print vertex counts as JSON and compare them with the n^3 / n^2 bounds.
    Stats { graph: PathBuf },
    /// Write a program in DOT format.
    ExportDot {
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_graph(path: &Path) -> Result<AbpGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    AbpGraph::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn dump(label: &str, m: &PolyMatrix) {
    for i in 1..=m.rows() {
        for j in 1..=m.cols() {
            println!("{label}[{i},{j}] = {}", m.get(i, j).to_canonical_string());
        }
    }
}

/// Returns whether every check passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Build {
            construction,
            n,
            d,
            ring,
            out,
            dot,
        } => {
            let g = match construction {
                Construction::Charzero => build_charzero_abp(n, d, &ring)?,
                Construction::Bivariate => build_bivariate_abp(n, d, &ring)?,
                Construction::Gradient => build_gradient_abp(n, d, &ring)?.0,
            };
            write_file(&out, &g.to_json())?;
            if let Some(dot) = dot {
                write_file(&dot, &g.to_dot())?;
            }
        }
        Command::Eval {
            graph,
            matrix,
            output,
        } => {
            let g = read_graph(&graph)?;
            let rows: Vec<Vec<String>> = serde_json::from_str(&matrix)
                .context("matrix must be a JSON array of arrays of strings")?;
            let a = ConstMatrix::from_strings(g.ring(), &rows)?;
            let names: Vec<String> = if output.is_empty() {
                g.outputs().keys().cloned().collect()
            } else {
                output
            };
            for name in &names {
                println!("{name} = {}", g.evaluate(&a, name)?);
            }
        }
        Command::Verify {
            identity,
            n,
            d,
            ring,
            combinatorial,
            dump: show,
        } => {
            let report = verify_identity(identity, n, d, &ring, combinatorial)?;
            println!("{report}");
            if show {
                let (lhs, rhs) = identity_sides(identity, n, d, &ring, combinatorial)?;
                dump("lhs", &lhs);
                dump("rhs", &rhs);
            }
            return Ok(report.passed);
        }
        Command::VerifyAll { n_max, d_max, ring } => {
            let reports = verify_all(n_max, d_max, &ring)?;
            for r in &reports {
                println!("{r}");
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            println!("{} checks, {} failed", reports.len(), failed);
            return Ok(failed == 0);
        }
        Command::Stats { graph } => {
            let g = read_graph(&graph)?;
            let stats = ConstructionStats::of(&g);
            println!("{}", serde_json::to_string_pretty(&stats)?);
            println!("{}", stats.comparison());
        }
        Command::ExportDot { graph, out } => {
            let dot = read_graph(&graph)?.to_dot();
            match out {
                Some(path) => write_file(&path, &dot)?,
                None => print!("{dot}"),
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
