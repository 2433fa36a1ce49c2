//! `tropica` command-line front end.

mod cache;
mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::report::{Format, Report};

#[derive(Parser, Debug)]
#[command(name = "tropica", version, about = "Exact tropical Hurwitz numbers and friends")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    csv: bool,
    /// Directory for cached reports.
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run even when the input exceeds the size guard.
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tropical double Hurwitz number H_g(μ, ν).
    DoubleHurwitz {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        nu: String,
        /// Print every cover class in text mode.
        #[arg(long)]
        list_covers: bool,
    },
    /// Walls, chambers and chamber polynomials of genus-0 double Hurwitz numbers.
    Chambers {
        #[arg(long)]
        lmu: usize,
        #[arg(long)]
        lnu: usize,
        /// Coordinate bound of the lattice search box.
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Tropical simple Hurwitz number N_{d,g} of the elliptic curve.
    Elliptic {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        genus: u32,
        /// Break the count down by graph, order and multidegree.
        #[arg(long)]
        per_graph: bool,
    },
    /// Refined Feynman integral coefficients of one graph and vertex order.
    Feynman {
        /// Graph in the `V n E m L k` text format.
        #[arg(long)]
        graph: PathBuf,
        /// Vertices from lowest to highest, 1-based, e.g. "1,3,4,2".
        #[arg(long)]
        order: String,
        #[arg(long)]
        dmax: u32,
    },
    /// Compare tropical counts with the Feynman graph sum.
    MirrorCheck {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        dmax: u32,
    },
    /// Dimensions and homology of the graph complex.
    GraphComplex {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        edges: Option<usize>,
        /// Write the matrix of ∂ on the `--edges` generators as `row col p/q` lines.
        #[arg(long, requires = "edges")]
        dump_matrix: Option<PathBuf>,
    },
    /// Combinatorial types of the tropical moduli space.
    Moduli {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        marks: usize,
        /// Include the cover relation of the face poset.
        #[arg(long)]
        poset: bool,
    },
    /// Classical Hurwitz numbers from monodromy counts.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    Line {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        nu: String,
    },
    Elliptic {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        genus: u32,
    },
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<tropica::Error>() {
        Some(tropica::Error::SizeGuard(_)) => 3,
        Some(tropica::Error::CrossCheck(_)) => 4,
        _ => 2,
    }
}

fn run(cli: Cli) -> anyhow::Result<(Report, Format)> {
    let g = &cli.global;
    if let Some(t) = g.threads {
        if t == 0 {
            return Err(tropica::Error::InvalidArgument("--threads must be positive".into()).into());
        }
        tropica::par::configure_threads(t).map_err(anyhow::Error::msg)?;
    }
    let format = if g.json {
        Format::Json
    } else if g.csv {
        Format::Csv
    } else {
        Format::Text
    };
    let key = cache::key(&cli.command, g.force);
    // a matrix dump is a side effect, so it always runs
    let cache_dir = match &cli.command {
        Command::GraphComplex { dump_matrix: Some(_), .. } => None,
        _ => g.cache_dir.as_ref(),
    };
    if let Some(dir) = cache_dir {
        if let Some(hit) = cache::load(dir, &key)? {
            return Ok((hit, format));
        }
    }
    let report = commands::dispatch(&cli.command, g.force)?;
    if let Some(dir) = cache_dir {
        cache::store(dir, &key, &report)?;
    }
    Ok((report, format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((report, format)) => match report.render(format) {
            Ok(out) => {
                print!("{out}");
                ExitCode::from(report.status)
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
