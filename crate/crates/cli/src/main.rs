//! `pcube`: partial cubes, median closures and cube/clique polynomials from
//! the command line.
//!
//! Reports are JSON, written to stdout or `--out`; a one-line summary goes to
//! stderr. Exit status: 0 success, 1 a verification failed, 2 bad input,
//! 3 a resource guard tripped.

mod commands;
mod report;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{GraphFormat, InputRejected, Outcome, ThresholdFamily};
use partial_cubes::Error;
use report::Report;

const EXIT_VERIFICATION: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_GUARD: u8 = 3;

#[derive(Parser)]
#[command(
    name = "pcube",
    version,
    about = "Partial cubes, median graphs and their cube polynomials"
)]
struct Cli {
    /// Write the report (or generated graph) here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recognize a graph and report its classes, crossing graph and polynomials
    Analyze {
        /// Edge-list or JSON graph file, or - for stdin
        input: String,
    },
    /// Compare C(G, x) with Cl(G#, x + 1) for a partial cube
    Verify { input: String },
    /// Trace the median closure of a partial cube round by round
    Closure {
        input: String,
        /// Refuse cycle enumeration on rounds with more vertices than this
        #[arg(long, default_value_t = partial_cubes::crossing::DEFAULT_CYCLE_VERTEX_LIMIT)]
        max_vertices: usize,
    },
    /// Classify (x + 1)^n + m x or (x + 2)^n + m (x + 1) over a range of m
    Thresholds {
        #[arg(value_enum)]
        family: ThresholdFamily,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        m_min: u64,
        #[arg(long)]
        m_max: u64,
    },
    /// Run the invariant suite over a generated corpus
    Corpus {
        /// JSON corpus description; the built-in corpus when omitted
        spec: Option<String>,
        /// Worker threads (default: one per core)
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Write a generated graph
    Gen {
        /// Family name, e.g. hypercube, trihex, random-median, example41
        family: String,
        /// Family parameters, in order
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = GraphFormat::Edges)]
        format: GraphFormat,
        #[arg(long, default_value_t = partial_cubes::generators::DEFAULT_VERTEX_LIMIT)]
        max_vertices: usize,
    },
    /// Build the simplex graph S(G) and check that its crossing graph is G
    Simplex {
        input: String,
        #[arg(long, default_value_t = 1 << 12)]
        max_cliques: usize,
    },
}

fn write_output(out: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| anyhow::anyhow!("writing {}: {e}", path.display()))
        }
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::GuardExceeded { .. } => EXIT_GUARD,
                Error::Internal(_) => EXIT_VERIFICATION,
                _ => EXIT_INPUT,
            };
        }
    }
    EXIT_INPUT
}

fn run(cli: &Cli, argv: Vec<String>) -> anyhow::Result<Option<Outcome>> {
    let report = Report::new(argv);
    let outcome = match &cli.command {
        Command::Analyze { input } => commands::analyze(input, report)?,
        Command::Verify { input } => commands::verify(input, report)?,
        Command::Closure {
            input,
            max_vertices,
        } => commands::closure(input, *max_vertices, report)?,
        Command::Thresholds {
            family,
            n,
            m_min,
            m_max,
        } => commands::thresholds(*family, *n, *m_min, *m_max, report)?,
        Command::Corpus { spec, threads } => commands::corpus(spec.as_deref(), *threads, report)?,
        Command::Simplex { input, max_cliques } => commands::simplex(input, *max_cliques, report)?,
        Command::Gen {
            family,
            params,
            seed,
            format,
            max_vertices,
        } => {
            let g = commands::generate(family, params, *seed, *max_vertices)?;
            write_output(cli.out.as_ref(), &commands::render_graph(&g, *format))?;
            eprintln!(
                "{family}: {} vertices, {} edges",
                g.vertex_count(),
                g.edge_count()
            );
            return Ok(None);
        }
    };
    Ok(Some(outcome))
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    match run(&cli, argv.iter().skip(1).cloned().collect()) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(outcome)) => {
            let text = match outcome.report.to_json() {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(EXIT_VERIFICATION);
                }
            };
            if let Err(e) = write_output(cli.out.as_ref(), &text) {
                eprintln!("error: {e:#}");
                return ExitCode::from(EXIT_INPUT);
            }
            if outcome.verified {
                eprintln!("{}", outcome.summary);
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed: {}", outcome.summary);
                ExitCode::from(EXIT_VERIFICATION)
            }
        }
        Err(err) => {
            if let Some(rejected) = err.downcast_ref::<InputRejected>() {
                if let Ok(text) = rejected.report.to_json() {
                    let _ = write_output(cli.out.as_ref(), &text);
                }
            }
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
