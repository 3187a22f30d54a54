//! Experiment harness: budget sweeps over a dataset and GA-vs-optimum ratio
//! studies on random models.
//!
//! Every cell (budget × seed) is an independent job. Cells run in parallel
//! (capped by `REWIRE_THREADS`) and are written in request order, so an
//! identical request yields a byte-identical CSV unless timing is recorded.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::candidates::{enumerate_ep, write_candidates_csv};
use crate::correlation::{spearman_degree_correlation, AssortativityParts};
use crate::error::{Error, Result};
use crate::exact::{ratio_against, solve_exact, DEFAULT_NODE_BUDGET};
use crate::generators::RandomModel;
use crate::graph::{read_edge_list, Graph, ParseOptions};
use crate::robustness::{
    centrality, centrality_sc, check_sandwich, natural_connectivity, spectral_radius,
    CentralityKind, CentralityVector, DEFAULT_TOLERANCE,
};
use crate::strategies::{run_ga, Budget, Method, RewirePlan, StrategyConfig};

pub const SCHEMA_HEADER: &str = "# rewire-results schema=1";
pub const THREADS_ENV: &str = "REWIRE_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MethodChoice {
    Strategy(Method),
    Exact,
}

impl MethodChoice {
    pub fn is_stochastic(self) -> bool {
        matches!(self, MethodChoice::Strategy(m) if m.is_stochastic())
    }
}

impl fmt::Display for MethodChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodChoice::Strategy(m) => m.fmt(f),
            MethodChoice::Exact => f.write_str("exact"),
        }
    }
}

impl FromStr for MethodChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("exact") {
            Ok(MethodChoice::Exact)
        } else {
            s.parse().map(MethodChoice::Strategy)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MetricKind {
    Assortativity,
    Spearman,
    SpectralRadius,
    NaturalConnectivity,
    Centrality(CentralityKind),
}

impl MetricKind {
    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Assortativity => "assortativity",
            MetricKind::Spearman => "spearman",
            MetricKind::SpectralRadius => "spectral_radius",
            MetricKind::NaturalConnectivity => "natural_connectivity",
            MetricKind::Centrality(c) => c.name(),
        }
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "assortativity" => MetricKind::Assortativity,
            "spearman" => MetricKind::Spearman,
            "spectral_radius" => MetricKind::SpectralRadius,
            "natural_connectivity" => MetricKind::NaturalConnectivity,
            other => MetricKind::Centrality(
                other
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("unknown metric `{other}`")))?,
            ),
        })
    }
}

/// Parses `start:stop:step` into the inclusive list of fractions.
pub fn parse_sweep(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidArgument(format!("bad sweep `{s}`, expected start:stop:step"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(bad());
    };
    if step.is_nan() || step <= 0.0 || stop < start {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| {
            let f = start + i as f64 * step;
            (f * 1e12).round() / 1e12
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub input_path: PathBuf,
    pub method: MethodChoice,
    pub budgets: Vec<Budget>,
    pub seeds: Vec<u64>,
    pub metrics: Vec<MetricKind>,
    pub top_fraction: Option<f64>,
    pub output_path: PathBuf,
    pub dump_ep: Option<PathBuf>,
    pub plans_path: Option<PathBuf>,
    pub node_budget: u64,
    pub retry_limit: Option<usize>,
    pub parse: ParseOptions,
    /// Adds a wall-time column, which makes output run-dependent.
    pub record_timing: bool,
}

impl ExperimentSpec {
    pub fn new(
        input_path: impl Into<PathBuf>,
        method: MethodChoice,
        output_path: impl Into<PathBuf>,
    ) -> Self {
        ExperimentSpec {
            input_path: input_path.into(),
            method,
            budgets: vec![Budget::Fraction(0.05)],
            seeds: vec![0],
            metrics: vec![MetricKind::Assortativity],
            top_fraction: None,
            output_path: output_path.into(),
            dump_ep: None,
            plans_path: None,
            node_budget: DEFAULT_NODE_BUDGET,
            retry_limit: None,
            parse: ParseOptions::default(),
            record_timing: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.budgets.is_empty() {
            return Err(Error::InvalidArgument("no budgets given".into()));
        }
        if self.seeds.is_empty() && self.method.is_stochastic() {
            return Err(Error::InvalidArgument(
                "at least one seed is required".into(),
            ));
        }
        for b in &self.budgets {
            if let Budget::Fraction(f) = *b {
                if !(f > 0.0 && f <= 1.0) {
                    return Err(Error::InvalidArgument(format!(
                        "budget fraction {f} outside (0, 1]"
                    )));
                }
            }
        }
        if let Some(f) = self.top_fraction {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "top fraction {f} outside (0, 1]"
                )));
            }
        }
        Ok(())
    }
}

/// One (budget, seed) cell of an experiment.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRow {
    pub dataset: String,
    pub method: String,
    pub budget_fraction: f64,
    pub budget: usize,
    pub seed: u64,
    pub steps_applied: usize,
    pub truncated: bool,
    pub delta_s: i64,
    pub proven_optimal: Option<bool>,
    pub r_before: Option<f64>,
    pub r_after: Option<f64>,
    pub spearman_before: Option<f64>,
    pub spearman_after: Option<f64>,
    pub spectral_radius_before: Option<f64>,
    pub spectral_radius_after: Option<f64>,
    pub natural_connectivity_before: Option<f64>,
    pub natural_connectivity_after: Option<f64>,
    pub sc_betweenness: Option<f64>,
    pub sc_closeness: Option<f64>,
    pub sc_eigenvector: Option<f64>,
    pub sc_kshell: Option<f64>,
    pub wall_time: Duration,
    pub reason: String,
    #[serde(skip)]
    pub plan: Option<RewirePlan>,
}

const COLUMNS: [&str; 23] = [
    "dataset",
    "method",
    "budget_fraction",
    "budget",
    "seed",
    "steps_applied",
    "truncated",
    "delta_s",
    "proven_optimal",
    "r_before",
    "r_after",
    "spearman_before",
    "spearman_after",
    "spectral_radius_before",
    "spectral_radius_after",
    "natural_connectivity_before",
    "natural_connectivity_after",
    "sc_betweenness",
    "sc_closeness",
    "sc_eigenvector",
    "sc_kshell",
    "reason",
    "wall_time_ms",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl ResultRow {
    fn record(&self, timing: bool) -> Vec<String> {
        let mut rec = vec![
            self.dataset.clone(),
            self.method.clone(),
            self.budget_fraction.to_string(),
            self.budget.to_string(),
            self.seed.to_string(),
            self.steps_applied.to_string(),
            self.truncated.to_string(),
            self.delta_s.to_string(),
            opt(self.proven_optimal),
            opt(self.r_before),
            opt(self.r_after),
            opt(self.spearman_before),
            opt(self.spearman_after),
            opt(self.spectral_radius_before),
            opt(self.spectral_radius_after),
            opt(self.natural_connectivity_before),
            opt(self.natural_connectivity_after),
            opt(self.sc_betweenness),
            opt(self.sc_closeness),
            opt(self.sc_eigenvector),
            opt(self.sc_kshell),
            self.reason.clone(),
        ];
        if timing {
            rec.push(format!("{:.3}", self.wall_time.as_secs_f64() * 1e3));
        }
        rec
    }
}

/// Writes the schema line, the header, and one row per cell.
pub fn write_results_csv<W: Write>(rows: &[ResultRow], timing: bool, mut out: W) -> Result<()> {
    writeln!(out, "{SCHEMA_HEADER}")?;
    let mut w = csv::Writer::from_writer(out);
    let width = if timing {
        COLUMNS.len()
    } else {
        COLUMNS.len() - 1
    };
    w.write_record(&COLUMNS[..width])?;
    for row in rows {
        w.write_record(row.record(timing))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes every cell's steps with external labels, one row per step.
pub fn write_plans_csv<W: Write>(g: &Graph, rows: &[ResultRow], out: W) -> Result<()> {
    let parts = AssortativityParts::of(g);
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "cell",
        "method",
        "budget",
        "seed",
        "step",
        "source_a_u",
        "source_a_v",
        "source_b_u",
        "source_b_v",
        "created_a_u",
        "created_a_v",
        "created_b_u",
        "created_b_v",
        "value",
        "cumulative_r",
    ])?;
    for (cell, row) in rows.iter().enumerate() {
        let Some(plan) = &row.plan else { continue };
        let mut delta = 0i64;
        for (i, c) in plan.steps.iter().enumerate() {
            delta += c.value;
            let label = |v| g.label(v).to_owned();
            w.write_record([
                cell.to_string(),
                row.method.clone(),
                row.budget.to_string(),
                row.seed.to_string(),
                (i + 1).to_string(),
                label(c.source_a.u),
                label(c.source_a.v),
                label(c.source_b.u),
                label(c.source_b.v),
                label(c.created_a.u),
                label(c.created_a.v),
                label(c.created_b.u),
                label(c.created_b.v),
                c.value.to_string(),
                opt(parts.assortativity_shifted(delta).ok()),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes to a sibling temp file and renames it into place.
pub fn write_atomically<F>(path: &Path, fill: F) -> Result<()>
where
    F: FnOnce(&mut fs::File) -> Result<()>,
{
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut file = fs::File::create(&tmp)?;
    fill(&mut file)?;
    file.sync_all()?;
    drop(file);
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Runs `f` on a pool sized by `REWIRE_THREADS` (rayon's default otherwise).
pub fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t > 0);
    match threads.map(|t| rayon::ThreadPoolBuilder::new().num_threads(t).build()) {
        Some(Ok(pool)) => pool.install(f),
        _ => f(),
    }
}

/// Metrics of the input graph, computed once per experiment.
struct Baseline {
    r: std::result::Result<f64, String>,
    spearman: std::result::Result<f64, String>,
    spectral_radius: std::result::Result<f64, String>,
    natural_connectivity: std::result::Result<f64, String>,
    centralities: Vec<(
        CentralityKind,
        std::result::Result<CentralityVector, String>,
    )>,
}

fn wants(spec: &ExperimentSpec, m: MetricKind) -> bool {
    spec.metrics.contains(&m)
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

impl Baseline {
    fn of(g: &Graph, spec: &ExperimentSpec) -> Self {
        let skip = || Err("not requested".to_string());
        Baseline {
            r: lift(AssortativityParts::of(g).assortativity()),
            spearman: if wants(spec, MetricKind::Spearman) {
                lift(spearman_degree_correlation(g))
            } else {
                skip()
            },
            spectral_radius: if wants(spec, MetricKind::SpectralRadius) {
                lift(spectral_radius(g, DEFAULT_TOLERANCE))
            } else {
                skip()
            },
            natural_connectivity: if wants(spec, MetricKind::NaturalConnectivity) {
                lift(natural_connectivity(g))
            } else {
                skip()
            },
            centralities: CentralityKind::ALL
                .into_iter()
                .filter(|&c| wants(spec, MetricKind::Centrality(c)))
                .map(|c| (c, lift(centrality(g, c))))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    budget: Budget,
    seed: u64,
}

fn cells(spec: &ExperimentSpec) -> Vec<Cell> {
    // deterministic methods ignore the seed: one cell per budget
    let seeds: &[u64] = if spec.method.is_stochastic() {
        &spec.seeds
    } else if spec.seeds.is_empty() {
        &[0]
    } else {
        &spec.seeds[..1]
    };
    spec.budgets
        .iter()
        .flat_map(|&budget| seeds.iter().map(move |&seed| Cell { budget, seed }))
        .collect()
}

struct Notes(Vec<String>);

impl Notes {
    fn take<T>(&mut self, what: &str, r: std::result::Result<T, String>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                if e != "not requested" {
                    self.0.push(format!("{what}: {e}"));
                }
                None
            }
        }
    }
}

fn run_cell(
    dataset: &str,
    g: &Graph,
    spec: &ExperimentSpec,
    base: &Baseline,
    cell: Cell,
) -> Result<ResultRow> {
    let started = Instant::now();
    let m = g.edge_count();
    let k = cell.budget.resolve(m)?;
    let cfg = StrategyConfig {
        budget: Budget::Count(k),
        seed: cell.seed,
        retry_limit: spec.retry_limit,
    };
    let mut notes = Notes(Vec::new());
    let (plan, proven) = match spec.method {
        MethodChoice::Strategy(method) => match method.run(g, &cfg) {
            Ok(p) => (Some(p), None),
            Err(e @ Error::DegenerateWeights) => {
                notes.0.push(format!("{method}: {e}"));
                (None, None)
            }
            Err(e) => return Err(e),
        },
        MethodChoice::Exact => {
            let sol = solve_exact(g, k, spec.node_budget)?;
            (Some(sol.plan), Some(sol.proven_optimal))
        }
    };

    let after = plan.as_ref().map(|p| &p.final_graph).unwrap_or(g);
    let parts = AssortativityParts::of(g);
    let delta_s = plan.as_ref().map_or(0, |p| p.delta_s);

    let r_before = notes.take("r_before", base.r.clone());
    let r_after = notes.take("r_after", lift(parts.assortativity_shifted(delta_s)));
    let (spearman_before, spearman_after) = if wants(spec, MetricKind::Spearman) {
        (
            notes.take("spearman_before", base.spearman.clone()),
            notes.take("spearman_after", lift(spearman_degree_correlation(after))),
        )
    } else {
        (None, None)
    };
    let (sr_before, sr_after) = if wants(spec, MetricKind::SpectralRadius) {
        (
            notes.take("spectral_radius_before", base.spectral_radius.clone()),
            notes.take(
                "spectral_radius_after",
                lift(spectral_radius(after, DEFAULT_TOLERANCE)),
            ),
        )
    } else {
        (None, None)
    };
    let (nc_before, nc_after) = if wants(spec, MetricKind::NaturalConnectivity) {
        (
            notes.take(
                "natural_connectivity_before",
                base.natural_connectivity.clone(),
            ),
            notes.take(
                "natural_connectivity_after",
                lift(natural_connectivity(after)),
            ),
        )
    } else {
        (None, None)
    };
    for (lambda, nc, which) in [
        (sr_before, nc_before, "before"),
        (sr_after, nc_after, "after"),
    ] {
        if let (Some(lambda), Some(nc)) = (lambda, nc) {
            if let Err(e) = check_sandwich(lambda, nc, g.node_count()) {
                notes.0.push(format!("spectrum {which}: {e}"));
            }
        }
    }
    let top = spec.top_fraction.unwrap_or(1.0);
    let mut sc = [None; 4];
    for (kind, before) in &base.centralities {
        let slot = CentralityKind::ALL
            .iter()
            .position(|c| c == kind)
            .expect("known kind");
        let label = format!("sc_{kind}");
        let value = before
            .clone()
            .and_then(|b| lift(centrality(after, *kind).and_then(|a| centrality_sc(&b, &a, top))));
        sc[slot] = notes.take(&label, value);
    }

    Ok(ResultRow {
        dataset: dataset.to_owned(),
        method: spec.method.to_string(),
        budget_fraction: match cell.budget {
            Budget::Fraction(f) => f,
            Budget::Count(c) if m > 0 => c as f64 / m as f64,
            Budget::Count(_) => 0.0,
        },
        budget: k,
        seed: cell.seed,
        steps_applied: plan.as_ref().map_or(0, RewirePlan::len),
        truncated: plan.as_ref().is_some_and(|p| p.truncated),
        delta_s,
        proven_optimal: proven,
        r_before,
        r_after,
        spearman_before,
        spearman_after,
        spectral_radius_before: sr_before,
        spectral_radius_after: sr_after,
        natural_connectivity_before: nc_before,
        natural_connectivity_after: nc_after,
        sc_betweenness: sc[0],
        sc_closeness: sc[1],
        sc_eigenvector: sc[2],
        sc_kshell: sc[3],
        wall_time: started.elapsed(),
        reason: notes.0.join("; "),
        plan,
    })
}

/// Runs every cell of `spec` on an already loaded graph. No I/O.
pub fn run_on_graph(dataset: &str, g: &Graph, spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let base = Baseline::of(g, spec);
    let cells = cells(spec);
    with_thread_cap(|| {
        cells
            .par_iter()
            .map(|&cell| run_cell(dataset, g, spec, &base, cell))
            .collect()
    })
}

pub fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Loads the input, runs all cells, and writes the results CSV (plus the
/// candidate dump and plan file when requested).
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let (g, _) = read_edge_list(&spec.input_path, spec.parse)?;
    let dataset = dataset_name(&spec.input_path);
    if let Some(path) = &spec.dump_ep {
        let ep = enumerate_ep(&g);
        write_atomically(path, |f| write_candidates_csv(&g, &ep, f))?;
    }
    let rows = run_on_graph(&dataset, &g, spec)?;
    write_atomically(&spec.output_path, |f| {
        write_results_csv(&rows, spec.record_timing, f)
    })?;
    if let Some(path) = &spec.plans_path {
        write_atomically(path, |f| write_plans_csv(&g, &rows, f))?;
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioStudySpec {
    pub model: RandomModel,
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    pub node_budget: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialResult {
    pub trial: usize,
    pub seed: u64,
    pub edges: usize,
    pub candidates: usize,
    pub ga_delta_s: i64,
    pub optimal_delta_s: i64,
    pub proven_optimal: bool,
    pub explored_nodes: u64,
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioSummary {
    pub model: String,
    pub k: usize,
    pub trials: usize,
    pub valid_trials: usize,
    /// Trials whose exact search hit the node budget; excluded.
    pub unproven_trials: usize,
    /// Trials with a zero optimum; excluded.
    pub undefined_trials: usize,
    pub optimal_hits: usize,
    pub opt_fraction: Option<f64>,
    pub min_ratio: Option<f64>,
    pub mean_ratio: Option<f64>,
    #[serde(skip)]
    pub per_trial: Vec<TrialResult>,
}

fn ratio_trial(spec: &RatioStudySpec, trial: usize) -> Result<TrialResult> {
    let seed = spec.seed.wrapping_add(trial as u64);
    let g = spec.model.generate(seed)?;
    let ga = run_ga(&g, &StrategyConfig::new(Budget::Count(spec.k)))?;
    let exact = solve_exact(&g, spec.k, spec.node_budget)?;
    Ok(TrialResult {
        trial,
        seed,
        edges: g.edge_count(),
        candidates: if spec.k == 0 {
            0
        } else {
            enumerate_ep(&g).len()
        },
        ga_delta_s: ga.delta_s,
        optimal_delta_s: exact.optimal_delta_s,
        proven_optimal: exact.proven_optimal,
        explored_nodes: exact.explored_nodes,
        ratio: ratio_against(ga.delta_s, &exact).ok(),
    })
}

/// Generates `trials` instances (seeds `seed, seed+1, …`), runs GA and the
/// exact solver with the same budget, and aggregates the ratios.
pub fn run_ratio_study(spec: &RatioStudySpec) -> Result<RatioSummary> {
    let per_trial: Vec<TrialResult> = with_thread_cap(|| {
        (0..spec.trials)
            .into_par_iter()
            .map(|t| ratio_trial(spec, t))
            .collect::<Result<_>>()
    })?;
    let unproven = per_trial.iter().filter(|t| !t.proven_optimal).count();
    let ratios: Vec<f64> = per_trial.iter().filter_map(|t| t.ratio).collect();
    let undefined = per_trial
        .iter()
        .filter(|t| t.proven_optimal && t.ratio.is_none())
        .count();
    let hits = per_trial
        .iter()
        .filter(|t| t.ratio.is_some() && t.ga_delta_s == t.optimal_delta_s)
        .count();
    let valid = ratios.len();
    Ok(RatioSummary {
        model: spec.model.name().to_owned(),
        k: spec.k,
        trials: spec.trials,
        valid_trials: valid,
        unproven_trials: unproven,
        undefined_trials: undefined,
        optimal_hits: hits,
        opt_fraction: (valid > 0).then(|| hits as f64 / valid as f64),
        min_ratio: ratios.iter().copied().reduce(f64::min),
        mean_ratio: (valid > 0).then(|| ratios.iter().sum::<f64>() / valid as f64),
        per_trial,
    })
}

pub fn write_trials_csv<W: Write>(trials: &[TrialResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for t in trials {
        w.serialize(t)?;
    }
    w.flush()?;
    Ok(())
}
