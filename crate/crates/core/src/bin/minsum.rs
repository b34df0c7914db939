use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use minsum::cli::experiment::{run_tv_decay, DecayConfig, DecayFamily, DecayMatrix};
use minsum::cli::solve::{run_solve, ErrorNorm, ProblemKind, SolveConfig};
use minsum::cli::verify::{run_suites, summary, Suite};
use minsum::cli::{write_output, CliError, EXIT_OK, EXIT_VERIFICATION_FAILED};
use minsum::graph::{
    format_graph, generate, random_leafless, read_graph, read_injection, GraphFamily,
};

#[derive(Parser)]
#[command(
    name = "minsum",
    version,
    about = "Min-sum solvers for Laplacian systems and electrical flows"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a solver and report its error against the exact solution at every step.
    Solve(SolveArgs),
    /// Run verification suites over the built-in graph corpus.
    Verify(VerifyArgs),
    /// Run an experiment.
    #[command(subcommand)]
    Experiment(Experiment),
    /// Print a graph file for a built-in family.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct SolveArgs {
    problem: ProblemKind,
    /// Edge list: `tail head weight` per line.
    graph: PathBuf,
    /// Injection: `vertex value` per line; unlisted vertices get 0.
    injection: PathBuf,
    #[arg(long, default_value_t = 10)]
    iters: usize,
    /// Blend consecutive estimates (regular equal-weight graphs, at least 4 iterations).
    #[arg(long)]
    averaged: bool,
    /// Error norms, comma separated; defaults depend on the problem.
    #[arg(long, value_delimiter = ',')]
    norms: Vec<ErrorNorm>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Same as `--format json`.
    #[arg(long, conflicts_with_all = ["format", "csv"])]
    json: bool,
    /// Same as `--format csv`.
    #[arg(long, conflicts_with = "format")]
    csv: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock timings (makes output run-dependent).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suites to run; all when omitted.
    #[arg(long = "suite", value_enum)]
    suites: Vec<Suite>,
    /// Skip corpus graphs with more vertices than this.
    #[arg(long, default_value_t = 20)]
    max_vertices: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Experiment {
    /// Decay of `‖Δ‖∞` with the number of steps.
    TvDecay(DecayArgs),
}

#[derive(Args)]
struct DecayArgs {
    #[arg(long, value_enum)]
    family: DecayFamily,
    /// Even degree, at least 4.
    #[arg(long, short = 'd', default_value_t = 4)]
    degree: usize,
    /// Vertices of the connected cycle, or side of the torus.
    #[arg(long, short = 'n')]
    n: usize,
    #[arg(long)]
    t_max: Option<usize>,
    #[arg(long, value_enum, default_value = "delta")]
    which: DecayMatrix,
    /// Write the table here; stdout otherwise.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    Cycle,
    ConnectedCycle,
    Torus,
    Petersen,
    Complete,
    Random,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    family: FamilyName,
    #[arg(long, short = 'n', default_value_t = 10)]
    n: usize,
    /// Neighbours on each side for connected cycles.
    #[arg(long, short = 'k', default_value_t = 2)]
    k: usize,
    /// Torus side lengths, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "4,4")]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 1.0)]
    weight: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => write_output(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn solve(args: SolveArgs) -> Result<i32, CliError> {
    let graph = read_graph(&args.graph)?;
    let injection = read_injection(&args.injection, graph.n_vertices())?;
    let mut config = SolveConfig::new(args.problem, args.iters);
    config.averaged = args.averaged;
    config.timings = args.timings;
    if !args.norms.is_empty() {
        config.norms = args.norms;
    }
    let report = run_solve(&graph, &injection, &config)?;
    let format = match (args.json, args.csv) {
        (true, _) => Format::Json,
        (_, true) => Format::Csv,
        _ => args.format,
    };
    let text = match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv()?,
    };
    emit(&text, args.out.as_ref())?;
    Ok(EXIT_OK)
}

fn verify(args: VerifyArgs) -> Result<i32, CliError> {
    let suites = if args.suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        args.suites
    };
    let checks = run_suites(&suites, args.max_vertices);
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&checks).expect("checks serialize")
        );
    } else {
        print!("{}", summary(&checks));
    }
    Ok(if checks.iter().all(|c| c.passed) {
        EXIT_OK
    } else {
        EXIT_VERIFICATION_FAILED
    })
}

fn tv_decay(args: DecayArgs) -> Result<i32, CliError> {
    let result = run_tv_decay(&DecayConfig {
        family: args.family,
        degree: args.degree,
        n: args.n,
        t_max: args.t_max,
        which: args.which,
    })?;
    emit(&result.to_csv()?, args.csv.as_ref())?;
    if let Some(path) = &args.svg {
        write_output(path, &result.to_svg())?;
    }
    eprint!("{}", result.summary());
    Ok(EXIT_OK)
}

fn generate_graph(args: GenerateArgs) -> Result<i32, CliError> {
    let graph = match args.family {
        FamilyName::Random => random_leafless(args.n, args.seed)?,
        other => {
            let family = match other {
                FamilyName::Cycle => GraphFamily::Cycle(args.n),
                FamilyName::ConnectedCycle => GraphFamily::KConnectedCycle {
                    n: args.n,
                    k: args.k,
                },
                FamilyName::Torus => GraphFamily::Torus(args.dims),
                FamilyName::Petersen => GraphFamily::Petersen,
                FamilyName::Complete => GraphFamily::Complete(args.n),
                FamilyName::Random => unreachable!("handled above"),
            };
            generate(&family, args.weight)?
        }
    };
    print!("{}", format_graph(&graph));
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => solve(args),
        Command::Verify(args) => verify(args),
        Command::Experiment(Experiment::TvDecay(args)) => tv_decay(args),
        Command::Generate(args) => generate_graph(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
