//! `qdt` command line: generate histories, evolve trees, simulate decisions
//! and print strategy tables.
//!
//! Exit codes: 0 success, 1 usage, 2 history or tree parse error, 3 strategy
//! enumeration overflow, 4 I/O failure.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qdt::cat_environment::{generate_history, EnvConfig};
use qdt::decision_tree::{parse, QdtExpr, DEFAULT_STRATEGY_CAP};
use qdt::experiments::{
    format_strategy_table, read_history_csv, simulate_decisions, strategy_table,
    write_decisions_csv, write_generations_csv, write_history_csv, HistoryCsvError,
};
use qdt::genetic_program::{evolve, FitnessMode, GpConfig};
use qdt::CatHistory;

#[derive(Parser)]
#[command(
    name = "qdt",
    version,
    about = "Quantum decision trees evolved against a decaying-atom history"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a measurement history and write it as CSV.
    Gen(GenArgs),
    /// Evolve a decision tree against a history.
    Evolve(EvolveArgs),
    /// Let a tree decide once per history record.
    Decide(DecideArgs),
    /// Print the strategy table of a tree.
    Eval(EvalArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    seed: u64,
    /// Number of measurements.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long = "decay-prob", default_value_t = 0.5, value_parser = probability)]
    decay_prob: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvolveArgs {
    #[arg(long)]
    history: PathBuf,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    pop: usize,
    #[arg(long, default_value_t = 100)]
    gens: usize,
    #[arg(long = "p-cross", default_value_t = 0.9, value_parser = probability)]
    p_cross: f64,
    #[arg(long = "p-mut", default_value_t = 0.05, value_parser = probability)]
    p_mut: f64,
    #[arg(long = "min-depth", default_value_t = 2)]
    min_depth: usize,
    #[arg(long = "max-depth", default_value_t = 8)]
    max_depth: usize,
    #[arg(long, default_value_t = 1)]
    elitism: usize,
    #[arg(long, default_value_t = DEFAULT_STRATEGY_CAP)]
    cap: usize,
    #[arg(long = "fitness-mode", default_value_t = FitnessMode::Expected)]
    fitness_mode: FitnessMode,
    /// Do not weight records by empirical state frequency.
    #[arg(long = "no-omega")]
    no_omega: bool,
    /// Worker threads for fitness evaluation (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Generations CSV.
    #[arg(long)]
    out: PathBuf,
    /// Best tree text; defaults to the generations path with a `.tree` extension.
    #[arg(long = "tree-out")]
    tree_out: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "tree_source")]
struct TreeSource {
    /// Tree text, e.g. "((H+I)//(Z*X))".
    #[arg(long, group = "tree_source")]
    tree: Option<String>,
    /// File holding the tree text.
    #[arg(long = "tree-file", group = "tree_source")]
    tree_file: Option<PathBuf>,
}

#[derive(Args)]
struct DecideArgs {
    #[arg(long)]
    history: PathBuf,
    #[command(flatten)]
    tree: TreeSource,
    #[arg(long)]
    seed: u64,
    /// Decisions CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    tree: TreeSource,
    #[arg(long, default_value_t = DEFAULT_STRATEGY_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
}

fn probability(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(format!("{p} is outside [0, 1]"))
    }
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: 1,
            message: message.to_string(),
        }
    }

    fn parse(message: impl ToString) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }

    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        Failure {
            code: 4,
            message: format!("{}: {e}", path.display()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::io(path, e))
}

fn load_history(path: &Path) -> Result<CatHistory, Failure> {
    let file = File::open(path).map_err(|e| Failure::io(path, e))?;
    read_history_csv(BufReader::new(file)).map_err(|e| match e {
        HistoryCsvError::Io(e) => Failure::io(path, e),
        other => Failure::parse(format!("{}: {other}", path.display())),
    })
}

fn load_tree(src: &TreeSource) -> Result<QdtExpr, Failure> {
    let text = match (&src.tree, &src.tree_file) {
        (Some(t), _) => t.clone(),
        (None, Some(path)) => fs::read_to_string(path).map_err(|e| Failure::io(path, e))?,
        (None, None) => return Err(Failure::usage("one of --tree or --tree-file is required")),
    };
    parse(text.trim()).map_err(|e| Failure::parse(format!("tree: {e}")))
}

fn cmd_gen(args: GenArgs) -> CmdResult {
    let cfg = EnvConfig {
        n: args.n as usize,
        decay_probability: args.decay_prob,
        seed: args.seed,
    };
    let history = generate_history(&cfg).map_err(Failure::usage)?;
    let mut out = create(&args.out)?;
    write_history_csv(&history, &mut out).map_err(|e| Failure::io(&args.out, e))?;
    out.flush().map_err(|e| Failure::io(&args.out, e))?;
    let (o1, o2) = history.frequencies();
    println!("n = {}", history.len());
    println!("omega1 = {o1:.6}");
    println!("omega2 = {o2:.6}");
    Ok(())
}

fn cmd_evolve(args: EvolveArgs) -> CmdResult {
    let history = load_history(&args.history)?;
    let cfg = GpConfig {
        population_size: args.pop,
        generations: args.gens,
        crossover_probability: args.p_cross,
        mutation_probability: args.p_mut,
        min_depth: args.min_depth,
        max_depth: args.max_depth,
        elitism: args.elitism,
        strategy_cap: args.cap,
        fitness_mode: args.fitness_mode,
        use_omega: !args.no_omega,
        seed: args.seed,
    };
    cfg.validate().map_err(Failure::usage)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(Failure::usage)?;
    let run = pool
        .install(|| evolve(&cfg, &history))
        .map_err(Failure::usage)?;

    let mut out = create(&args.out)?;
    write_generations_csv(&run.stats, &mut out).map_err(|e| Failure::io(&args.out, e))?;
    out.flush().map_err(|e| Failure::io(&args.out, e))?;

    let tree_out = args
        .tree_out
        .unwrap_or_else(|| args.out.with_extension("tree"));
    fs::write(&tree_out, format!("{}\n", run.best.expr)).map_err(|e| Failure::io(&tree_out, e))?;

    println!("best_fitness = {:.6}", run.best.fitness);
    println!("best_tree = {}", run.best.expr);
    Ok(())
}

fn cmd_decide(args: DecideArgs) -> CmdResult {
    let history = load_history(&args.history)?;
    let tree = load_tree(&args.tree)?;
    let (rows, report) = simulate_decisions(&tree, &history, args.seed);
    let mut out = create(&args.out)?;
    write_decisions_csv(&rows, &mut out).map_err(|e| Failure::io(&args.out, e))?;
    out.flush().map_err(|e| Failure::io(&args.out, e))?;
    println!("{report}");
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> CmdResult {
    let tree = load_tree(&args.tree)?;
    let cap = usize::try_from(args.cap).unwrap_or(usize::MAX);
    let rows = strategy_table(&tree, cap).map_err(|e| Failure {
        code: 3,
        message: e.to_string(),
    })?;
    print!("{}", format_strategy_table(&rows));
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Evolve(a) => cmd_evolve(a),
        Command::Decide(a) => cmd_decide(a),
        Command::Eval(a) => cmd_eval(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
