//! `vact`: analyze, sweep, search, rank and verify scenario files.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vact_core::boolmodel::Model;
use vact_core::scenario::{analyze, emit_report, emit_sweep_csv, parse_scenario, ScenarioDoc};
use vact_core::search::{
    best_measurement_set, enumerate_measurements, rank_measurements, reversal_from_ranking,
    Criterion, Pool,
};
use vact_core::sweep::{cost_grid, sweep};
use vact_core::verify::{all_passed, verify_model, verify_random};
use vact_core::Error;

const DEFAULT_SAMPLES: usize = 200;

#[derive(Parser)]
#[command(name = "vact", version, about = "Prediction value versus action value of measurements")]
struct Cli {
    /// Worker threads for parallel evaluation (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print prediction and action values of the declared measurements
    Analyze(Common),
    /// Write action value against uniform cost as CSV
    Sweep(SweepArgs),
    /// Find the best measurement set of a given size
    Search(SearchArgs),
    /// Check the theorems on the scenario and optionally on random models
    Verify(VerifyArgs),
    /// Rank candidates by both values and report reversals
    Rank(RankArgs),
}

#[derive(Args)]
struct Common {
    /// Scenario file
    scenario: PathBuf,
    /// Override the scenario's action cost with a uniform cost
    #[arg(long)]
    cost: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    scenario: PathBuf,
    #[arg(long)]
    cost_min: Option<f64>,
    #[arg(long)]
    cost_max: Option<f64>,
    /// Number of grid points, endpoints included
    #[arg(long)]
    steps: Option<usize>,
    /// Output CSV path (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    common: Common,
    /// Set size (default: the scenario's budget)
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long, default_value = "act")]
    criterion: Criterion,
    #[arg(long, default_value = "declared")]
    pool: Pool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Also check seeded random models with the scenario's state count
    #[arg(long)]
    seed: Option<u64>,
    /// Random models to check with --seed
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Let random models put zero probability on some assignments
    #[arg(long)]
    zero_cells: bool,
}

#[derive(Args)]
struct RankArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "declared")]
    pool: Pool,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(Error),
    Io(PathBuf, std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(Error::Capacity(_)) => 3,
            CliError::Core(_) => 2,
            CliError::Io(..) => 4,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn check_cost(name: &str, c: Option<f64>) -> CliResult<()> {
    match c {
        Some(c) if !c.is_finite() || c < 0.0 => Err(CliError::Usage(format!(
            "--{name} must be a finite number >= 0, got {c}"
        ))),
        _ => Ok(()),
    }
}

fn load(path: &Path) -> CliResult<ScenarioDoc> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    let doc = parse_scenario(&text).map_err(|e| match e {
        Error::Parse {
            line,
            column,
            message,
        } => CliError::Usage(format!("{}:{line}:{column}: {message}", path.display())),
        other => CliError::Core(other),
    })?;
    for w in doc.model.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(doc)
}

fn load_with_cost(common: &Common) -> CliResult<Model> {
    check_cost("cost", common.cost)?;
    let doc = load(&common.scenario)?;
    Ok(match common.cost {
        Some(c) => doc.model.with_uniform_cost(c)?,
        None => doc.model,
    })
}

fn write_stdout(text: &str) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e))
}

fn candidates(model: &Model, pool: Pool) -> CliResult<Vec<vact_core::boolmodel::BoolFn>> {
    Ok(match pool {
        Pool::Declared => model.measurements().to_vec(),
        Pool::All => enumerate_measurements(model.states())?,
    })
}

fn run_sweep(args: &SweepArgs) -> CliResult<()> {
    check_cost("cost-min", args.cost_min)?;
    check_cost("cost-max", args.cost_max)?;
    if args.steps == Some(0) {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let doc = load(&args.scenario)?;
    let defaults = doc.sweep;
    let min = args.cost_min.or(defaults.map(|d| d.min)).unwrap_or(0.0);
    let max = args.cost_max.or(defaults.map(|d| d.max)).unwrap_or(1.0);
    let steps = args.steps.or(defaults.map(|d| d.steps)).unwrap_or(101);
    let grid = cost_grid(min, max, steps)?;
    let csv = emit_sweep_csv(&sweep(&doc.model, &grid)?);
    match &args.out {
        Some(path) => std::fs::write(path, csv).map_err(|e| CliError::Io(path.clone(), e)),
        None => write_stdout(&csv),
    }
}

fn run_search(args: &SearchArgs) -> CliResult<()> {
    if args.budget == Some(0) {
        return Err(CliError::Usage("--budget must be at least 1".into()));
    }
    let model = load_with_cost(&args.common)?;
    let budget = args.budget.unwrap_or(model.budget());
    let best = best_measurement_set(&model, budget, args.criterion, args.pool)?;
    let members: Vec<String> = best.members.iter().map(|f| f.label()).collect();
    write_stdout(&format!(
        "best [{}] value={:.9} evaluated={} criterion={} pool={}\n",
        members.join(","),
        best.value + 0.0,
        best.evaluated,
        args.criterion,
        args.pool
    ))
}

fn run_rank(args: &RankArgs) -> CliResult<()> {
    let model = load_with_cost(&args.common)?;
    let entries = rank_measurements(&model, &candidates(&model, args.pool)?)?;
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by(|&a, &b| {
        entries[a]
            .rank_act
            .cmp(&entries[b].rank_act)
            .then_with(|| entries[a].measurement.cmp(&entries[b].measurement))
    });
    let mut text = String::from("label rank_predict rank_act predict act\n");
    for i in order {
        let e = &entries[i];
        text.push_str(&format!(
            "{} {} {} {:.9} {:.9}\n",
            e.label,
            e.rank_predict,
            e.rank_act,
            e.predict_value + 0.0,
            e.act_value + 0.0
        ));
    }
    let reversal = reversal_from_ranking(&entries);
    for (a, b) in &reversal.reversed_pairs {
        text.push_str(&format!("reversed_pair {a} {b}\n"));
    }
    if let Some(top) = &reversal.top_predict {
        text.push_str(&format!(
            "top_predict {top} act_optimal={}\n",
            reversal.top_predict_act_optimal
        ));
    }
    write_stdout(&text)
}

/// Returns whether every check passed.
fn run_verify(args: &VerifyArgs) -> CliResult<bool> {
    if args.seed.is_some() && args.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let model = load_with_cost(&args.common)?;
    let mut results = verify_model(&model)?;
    if let Some(seed) = args.seed {
        results.extend(verify_random(model.states(), seed, args.samples, args.zero_cells)?);
    }
    let mut text = String::new();
    for r in &results {
        text.push_str(&format!("{r}\n"));
    }
    write_stdout(&text)?;
    Ok(all_passed(&results))
}

fn run(cli: &Cli) -> CliResult<bool> {
    match &cli.command {
        Command::Analyze(common) => {
            let model = load_with_cost(common)?;
            write_stdout(&emit_report(&analyze(&model)?))?;
        }
        Command::Sweep(args) => run_sweep(args)?,
        Command::Search(args) => run_search(args)?,
        Command::Verify(args) => return run_verify(args),
        Command::Rank(args) => run_rank(args)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if n == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
