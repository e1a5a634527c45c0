use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};

use anglepack::bench::{self, BenchConfig};
use anglepack::geometry::validate_layout;
use anglepack::io::{parse_instance, parse_layout, LayoutFile, StatsEntry};
use anglepack::models::{CapacityBinding, Relaxation, Strategy};
use anglepack::oracle::{brute_force_optimal, OracleResult, DEFAULT_BUDGET};
use anglepack::{render, solve, Instance, Mode, ModelConfig, Status};

const OK: u8 = 0;
const INFEASIBLE: u8 = 1;
const TIMEOUT: u8 = 2;
const BAD_INPUT: u8 = 3;

/// Packs L-shaped pieces into the smallest enclosing box.
#[derive(Debug, Parser)]
#[command(name = "anglepack", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an instance with the constraint model.
    Solve(SolveArgs),
    /// Check a layout file against an instance.
    Validate {
        instance: PathBuf,
        layout: PathBuf,
    },
    /// Exhaustive search for the exact optimum.
    Oracle {
        instance: PathBuf,
        /// Maximum number of placement attempts.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a layout file.
    Render(RenderArgs),
    /// Run the benchmark grid over the shipped instance family.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, default_value = "both")]
    relax: Relaxation,
    /// Minimize end_x + end_y (default).
    #[arg(long, conflicts_with = "first")]
    optimize: bool,
    /// Stop at the first feasible layout.
    #[arg(long)]
    first: bool,
    #[arg(long, default_value = "tied")]
    cap: CapacityBinding,
    #[arg(long)]
    time_limit_s: Option<u64>,
    #[arg(long, default_value = "default")]
    strategy: Strategy,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RenderArgs {
    layout: PathBuf,
    #[arg(long, conflicts_with = "ascii", required_unless_present = "ascii")]
    svg: bool,
    #[arg(long)]
    ascii: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OptimizeChoice {
    Both,
    On,
    Off,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Range `lo..hi` (inclusive) or comma-separated list.
    #[arg(long, default_value = "4..10", value_parser = parse_sizes)]
    sizes: Sizes,
    #[arg(long, default_value = "rot_mirror")]
    mode: Mode,
    #[arg(long, value_delimiter = ',', default_value = "cumulative,trapeze")]
    relax: Vec<Relaxation>,
    #[arg(long, value_enum, default_value = "both")]
    optimize: OptimizeChoice,
    #[arg(long, default_value_t = bench::DEFAULT_TIME_LIMIT.as_secs())]
    time_limit_s: u64,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    md: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Clone)]
struct Sizes(Vec<usize>);

fn parse_sizes(s: &str) -> Result<Sizes, String> {
    let bad = || format!("expected lo..hi or a comma-separated list, got '{s}'");
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok(Sizes((lo..=hi).collect()));
    }
    s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>().map(Sizes)
}

/// Diagnostic for the error stream, carrying the exit code to use.
struct Failure(u8, String);

impl Failure {
    fn input(msg: impl std::fmt::Display) -> Self {
        Failure(BAD_INPUT, msg.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_solve(args: SolveArgs) -> Result<u8, Failure> {
    let instance = load_instance(&args.instance)?;
    let config = ModelConfig {
        relaxation: args.relax,
        optimize: !args.first,
        capacity_binding: args.cap,
        time_limit: args.time_limit_s.map(Duration::from_secs),
        strategy: args.strategy,
    };
    let outcome = solve(&instance, &config);
    let file = LayoutFile::from_outcome(&instance, &outcome);
    emit(args.out.as_deref(), &(file.to_json() + "\n"))?;
    if let Some(svg) = &args.svg {
        emit(Some(svg), &render::svg(&file))?;
    }
    eprintln!(
        "{}: objective {} ({} nodes, {} fails, {} ms)",
        outcome.status,
        outcome.objective.map_or("-".to_string(), |o| o.to_string()),
        file.stats.nodes,
        file.stats.fails,
        file.stats.ms
    );
    Ok(match outcome.status {
        Status::Optimal | Status::Feasible => OK,
        Status::Infeasible => INFEASIBLE,
        Status::Timeout => TIMEOUT,
    })
}

fn run_validate(instance: &Path, layout: &Path) -> Result<u8, Failure> {
    let instance = load_instance(instance)?;
    let file = parse_layout(&read(layout)?).map_err(|e| Failure::input(format!("{}: {e}", layout.display())))?;
    let Some(layout) = file.layout().map_err(Failure::input)? else {
        println!("no layout to validate (status {})", file.status);
        return Ok(INFEASIBLE);
    };
    let report = validate_layout(&instance, &layout).map_err(Failure::input)?;
    if report.is_valid() {
        println!("valid: end_x {} end_y {} objective {}", layout.end_x, layout.end_y, layout.end_x + layout.end_y);
        return Ok(OK);
    }
    for v in &report.violations {
        println!("{v}");
    }
    Ok(INFEASIBLE)
}

fn run_oracle(instance: &Path, budget: u64, out: Option<&Path>) -> Result<u8, Failure> {
    let instance = load_instance(instance)?;
    let start = Instant::now();
    let result = brute_force_optimal(&instance, budget).map_err(|e| Failure::input(format!("oracle refused: {e}")))?;
    let stats = StatsEntry { nodes: 0, fails: 0, ms: start.elapsed().as_millis() as u64 };
    let (status, layout, code) = match &result {
        OracleResult::Optimal { layout, .. } => (Status::Optimal, Some(layout), OK),
        OracleResult::Infeasible => (Status::Infeasible, None, INFEASIBLE),
    };
    let file = LayoutFile::new(&instance, status, layout, stats);
    emit(out, &(file.to_json() + "\n"))?;
    Ok(code)
}

fn run_render(args: RenderArgs) -> Result<u8, Failure> {
    let file = parse_layout(&read(&args.layout)?).map_err(|e| Failure::input(format!("{}: {e}", args.layout.display())))?;
    let text = if args.svg { render::svg(&file) } else { render::ascii(&file) };
    emit(args.out.as_deref(), &text)?;
    Ok(OK)
}

fn run_bench(args: BenchArgs) -> Result<u8, Failure> {
    let config = BenchConfig {
        sizes: args.sizes.0,
        mode: args.mode,
        relaxations: args.relax,
        optimize: match args.optimize {
            OptimizeChoice::Both => vec![false, true],
            OptimizeChoice::On => vec![true],
            OptimizeChoice::Off => vec![false],
        },
        time_limit: Duration::from_secs(args.time_limit_s),
        jobs: args.jobs,
        ..BenchConfig::default()
    };
    let rows = bench::run_bench(&config).map_err(Failure::input)?;
    let csv = bench::to_csv(&rows);
    let md = bench::to_markdown(&rows, config.time_limit);
    match (&args.csv, &args.md) {
        (None, None) => emit(None, &csv)?,
        _ => {
            if let Some(p) = &args.csv {
                emit(Some(p), &csv)?;
            }
            if let Some(p) = &args.md {
                emit(Some(p), &md)?;
            }
        }
    }
    eprintln!("{}", bench::observation(&rows));
    Ok(OK)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { BAD_INPUT } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Validate { instance, layout } => run_validate(&instance, &layout),
        Command::Oracle { instance, budget, out } => run_oracle(&instance, budget, out.as_deref()),
        Command::Render(args) => run_render(args),
        Command::Bench(args) => run_bench(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
