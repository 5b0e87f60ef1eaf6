//! `stardecomp`: star colorings, Mad, configuration detection and
//! discharging audits from the command line.
//!
//! Exit codes: 0 success, 1 negative result or property violation, 2 usage
//! or input error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use stardecomp::{Family, Format, Method, RouteChoice, Scheme};

use commands::Outcome;

#[derive(Parser, Debug)]
#[command(name = "stardecomp", version, about = "Star colorings of sparse graphs")]
struct Cli {
    /// Print one JSON record instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GraphInput {
    /// Graph file, or `-` for standard input.
    pub input: PathBuf,
    /// Input format (graph6, dimacs, edgelist); guessed when omitted.
    #[arg(long, short)]
    pub format: Option<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact maximum average degree as `p/q`.
    Mad {
        #[command(flatten)]
        graph: GraphInput,
        /// Enumerate all vertex subsets instead of using min cuts.
        #[arg(long)]
        brute: bool,
        /// Also print a densest vertex set.
        #[arg(long)]
        witness: bool,
    },
    /// Star-color a graph and print `vertex color` lines.
    Color {
        #[command(flatten)]
        graph: GraphInput,
        /// auto, forest, thm1 (4 colors), thm2 (5), thm3 (6) or exact.
        #[arg(long, default_value = "auto")]
        route: RouteChoice,
        /// Re-check the coloring with the brute-force path verifier.
        #[arg(long)]
        verify: bool,
    },
    /// Find a reducible configuration of a family.
    Detect {
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long, default_value = "L2")]
        family: Family,
    },
    /// Replay the discharging rules of a family and audit the final charges.
    Discharge {
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long, default_value = "L2")]
        family: Family,
        /// Include every transfer in the output.
        #[arg(long)]
        transfers: bool,
    },
    /// Check that a coloring is a star coloring.
    Verify {
        #[command(flatten)]
        graph: GraphInput,
        /// File of `vertex color` lines.
        coloring: PathBuf,
    },
    /// Decompose into a forest and independent classes.
    Decompose {
        #[command(flatten)]
        graph: GraphInput,
        /// FI, FI1I2 or FI1I2I3.
        #[arg(long, default_value = "FI")]
        scheme: Scheme,
        /// Skip the girth hypothesis of the two larger schemes.
        #[arg(long)]
        no_girth: bool,
        /// Include the reduction trace in JSON output.
        #[arg(long)]
        trace: bool,
    },
    /// Search for graphs needing more than `target` colors, minimizing Mad.
    Search {
        #[arg(long)]
        target: usize,
        /// graph6 stream to scan (`-` for standard input). Without it every
        /// graph on at most `max_n` vertices is enumerated.
        #[arg(long)]
        stream: Option<PathBuf>,
        /// Largest order considered.
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        /// Largest star chromatic number computed exactly.
        #[arg(long, default_value_t = 8)]
        cap: usize,
        /// Print only the first `limit` records.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Generate a seeded sparse graph or a named graph.
    Gen {
        /// Named graph such as C5, K4, K3,3, petersen, spider(3,2).
        #[arg(long, conflicts_with_all = ["family", "mad"])]
        named: Option<String>,
        /// Use the Mad and girth hypothesis of a family.
        #[arg(long, conflicts_with = "mad")]
        family: Option<Family>,
        /// Strict Mad bound `p/q`.
        #[arg(long)]
        mad: Option<String>,
        #[arg(long, default_value_t = 3)]
        girth: usize,
        #[arg(long, short, default_value_t = 30)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "subdivision")]
        method: Method,
        /// Output format.
        #[arg(long, short, default_value = "graph6")]
        format: Format,
    },
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("STARDECOMP_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("STARDECOMP_THREADS must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Mad { graph, brute, witness } => commands::mad(&graph, brute, witness),
        Command::Color { graph, route, verify } => commands::color(&graph, route, verify),
        Command::Detect { graph, family } => commands::detect(&graph, family),
        Command::Discharge {
            graph,
            family,
            transfers,
        } => commands::discharge(&graph, family, transfers),
        Command::Verify { graph, coloring } => commands::verify(&graph, &coloring),
        Command::Decompose {
            graph,
            scheme,
            no_girth,
            trace,
        } => commands::decompose(&graph, scheme, !no_girth, trace),
        Command::Search {
            target,
            stream,
            max_n,
            cap,
            limit,
        } => commands::search(target, stream.as_deref(), max_n, cap, limit),
        Command::Gen {
            named,
            family,
            mad,
            girth,
            n,
            seed,
            method,
            format,
        } => match named {
            Some(name) => commands::gen_named(&name, format),
            None => commands::gen_random(family, mad.as_deref(), girth, n, seed, method, format),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let json = cli.json;
    match run(cli) {
        Ok(outcome) => {
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&outcome.record).expect("records serialize")
                );
            } else {
                print!("{}", outcome.text);
            }
            if let Some(msg) = &outcome.message {
                eprintln!("{msg}");
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
