use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rewire_core::exact::DEFAULT_NODE_BUDGET;
use rewire_core::experiment::{
    parse_sweep, run_experiment, run_ratio_study, write_atomically, write_trials_csv,
    ExperimentSpec, MethodChoice, MetricKind, RatioStudySpec,
};
use rewire_core::generators::{
    RandomModel, DEFAULT_ATTACHMENT, DEFAULT_REWIRE_PROB, DEFAULT_RING_DEGREE,
};
use rewire_core::graph::{read_edge_list, ParseOptions};
use rewire_core::robustness::CentralityKind;
use rewire_core::{Budget, Error};

#[derive(Parser)]
#[command(
    name = "rewire",
    version,
    about = "Degree-preserving rewiring experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a strategy (or the exact solver) over one or more budgets.
    Run(RunArgs),
    /// Compare GA against the exact optimum on random graphs.
    Ratio(RatioArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Whitespace-separated edge list.
    #[arg(long)]
    input: PathBuf,
    /// ga, eda, ta, pea, ra, pa or exact.
    #[arg(long)]
    method: String,
    /// Edge count (`50`), fraction (`0.05`) or percentage (`5%`).
    #[arg(long, default_value = "0.05")]
    budget: String,
    /// Inclusive fraction sweep `start:stop:step`; replaces --budget.
    #[arg(long)]
    budget_sweep: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated seeds; replaces --seed.
    #[arg(long, value_delimiter = ',')]
    seeds: Vec<u64>,
    /// Run seeds `seed, seed+1, …` this many times (stochastic methods).
    #[arg(long, conflicts_with = "seeds")]
    repeats: Option<u64>,
    #[arg(long, value_delimiter = ',', default_value = "assortativity")]
    metrics: Vec<String>,
    /// Fraction of top-ranked nodes compared for centrality stability.
    #[arg(long)]
    top_fraction: Option<f64>,
    #[arg(long)]
    output: PathBuf,
    /// Also write the candidate set, to PATH or `<output>.ep.csv`.
    #[arg(long, value_name = "PATH")]
    dump_ep: Option<Option<PathBuf>>,
    /// Write every applied step with labels, for replay.
    #[arg(long)]
    plans: Option<PathBuf>,
    /// Search-node limit for the exact solver.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,
    /// Consecutive failed draws before a stochastic method gives up.
    #[arg(long)]
    retry_limit: Option<usize>,
    /// Drop self-loops instead of rejecting the input.
    #[arg(long)]
    drop_self_loops: bool,
    /// Add a wall_time_ms column (output is then not reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelName {
    Er,
    Ws,
    Ba,
}

#[derive(Args)]
struct RatioArgs {
    #[arg(long, value_enum)]
    model: ModelName,
    #[arg(long, default_value_t = 50)]
    n: usize,
    /// Edge count for ER.
    #[arg(long, default_value_t = 100)]
    edges: usize,
    /// Ring degree for WS.
    #[arg(long, default_value_t = DEFAULT_RING_DEGREE)]
    ring_degree: usize,
    /// Rewiring probability for WS.
    #[arg(long, default_value_t = DEFAULT_REWIRE_PROB)]
    rewire_prob: f64,
    /// Edges per new node for BA.
    #[arg(long, default_value_t = DEFAULT_ATTACHMENT)]
    attachment: usize,
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,
    /// Per-trial CSV.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn run(args: RunArgs) -> Result<(), Error> {
    let method: MethodChoice = args.method.parse()?;
    let budgets = match &args.budget_sweep {
        Some(s) => parse_sweep(s)?.into_iter().map(Budget::Fraction).collect(),
        None => vec![args.budget.parse::<Budget>()?],
    };
    let metrics = args
        .metrics
        .iter()
        .map(|m| m.parse::<MetricKind>())
        .collect::<Result<Vec<_>, _>>()?;
    let parse = ParseOptions {
        drop_self_loops: args.drop_self_loops,
    };

    // resolve up front so bad fractions fail before any work, and log them
    let (g, report) = read_edge_list(&args.input, parse)?;
    eprintln!(
        "loaded {}: {} nodes, {} edges, {} components ({} duplicate lines, {} self-loops dropped)",
        args.input.display(),
        g.node_count(),
        g.edge_count(),
        g.component_count(),
        report.duplicates,
        report.self_loops_dropped,
    );
    let all_pairs = metrics.iter().any(|m| {
        matches!(
            m,
            MetricKind::Centrality(CentralityKind::Betweenness | CentralityKind::Closeness)
        )
    });
    if all_pairs && g.node_count() > 5000 {
        eprintln!(
            "warning: all-pairs centrality on {} nodes will take a while per cell",
            g.node_count()
        );
    }
    for b in &budgets {
        eprintln!(
            "budget {b:?} resolves to {} rewirings",
            b.resolve(g.edge_count())?
        );
    }

    let mut spec = ExperimentSpec::new(&args.input, method, &args.output);
    spec.budgets = budgets;
    spec.seeds = match args.repeats {
        Some(0) => return Err(Error::InvalidArgument("--repeats must be positive".into())),
        Some(r) => (0..r).map(|i| args.seed.wrapping_add(i)).collect(),
        None if args.seeds.is_empty() => vec![args.seed],
        None => args.seeds,
    };
    spec.metrics = metrics;
    spec.top_fraction = args.top_fraction;
    spec.dump_ep = args.dump_ep.map(|p| {
        p.unwrap_or_else(|| {
            let mut s = args.output.as_os_str().to_owned();
            s.push(".ep.csv");
            PathBuf::from(s)
        })
    });
    spec.plans_path = args.plans;
    spec.node_budget = args.node_budget;
    spec.retry_limit = args.retry_limit;
    spec.parse = parse;
    spec.record_timing = args.timing;

    let rows = run_experiment(&spec)?;
    eprintln!("wrote {} rows to {}", rows.len(), args.output.display());
    Ok(())
}

fn ratio(args: RatioArgs) -> Result<(), Error> {
    let model = match args.model {
        ModelName::Er => RandomModel::ErdosRenyi {
            n: args.n,
            edges: args.edges,
        },
        ModelName::Ws => RandomModel::WattsStrogatz {
            n: args.n,
            ring_degree: args.ring_degree,
            rewire_prob: args.rewire_prob,
        },
        ModelName::Ba => RandomModel::BarabasiAlbert {
            n: args.n,
            attachment: args.attachment,
        },
    };
    let spec = RatioStudySpec {
        model,
        k: args.k,
        trials: args.trials,
        seed: args.seed,
        node_budget: args.node_budget,
    };
    let summary = run_ratio_study(&spec)?;
    if let Some(path) = &args.output {
        write_atomically(path, |f| write_trials_csv(&summary.per_trial, f))?;
    }
    let show = |v: Option<f64>| v.map_or_else(|| "undefined".to_owned(), |x| format!("{x:.6}"));
    println!("model={model:?}");
    println!("k={} trials={}", summary.k, summary.trials);
    println!(
        "valid={} unproven={} zero_optimum={}",
        summary.valid_trials, summary.unproven_trials, summary.undefined_trials
    );
    println!("opt_fraction={}", show(summary.opt_fraction));
    println!("min_ratio={}", show(summary.min_ratio));
    println!("mean_ratio={}", show(summary.mean_ratio));
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Ratio(args) => ratio(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 1 } else { 2 })
        }
    }
}
