//! Budgeted rewiring strategies.
//!
//! Every strategy returns a [`RewirePlan`]: the ordered steps it applied,
//! the resulting s-metric and assortativity changes, and the final graph.

mod eda;
mod greedy;
mod stochastic;
mod targeted;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

pub use eda::run_eda;
pub use greedy::{greedy_from, run_ga};
pub use stochastic::{run_pa, run_pea, run_ra};
pub use targeted::run_ta;

use crate::candidates::RewireCandidate;
use crate::correlation::AssortativityParts;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Rewiring budget as an absolute count or a fraction of the edge count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Budget {
    Count(usize),
    Fraction(f64),
}

impl Budget {
    /// Number of rewirings allowed on a graph with `edge_count` edges.
    ///
    /// Fractions resolve to `floor(fraction · M)` but never below one on a
    /// non-empty graph.
    pub fn resolve(&self, edge_count: usize) -> Result<usize> {
        match *self {
            Budget::Count(k) => Ok(k),
            Budget::Fraction(f) => {
                if !(f > 0.0 && f <= 1.0) {
                    return Err(Error::InvalidArgument(format!(
                        "budget fraction {f} outside (0, 1]"
                    )));
                }
                if edge_count == 0 {
                    return Ok(0);
                }
                // the epsilon absorbs products like 0.29 * 100 = 28.999999999999996
                let k = (f * edge_count as f64 + 1e-9).floor() as usize;
                Ok(k.max(1))
            }
        }
    }
}

impl FromStr for Budget {
    type Err = Error;

    /// Integers are counts; anything with a decimal point is a fraction.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(pct) = s.strip_suffix('%') {
            let p: f64 = pct
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad budget `{s}`")))?;
            return Ok(Budget::Fraction(p / 100.0));
        }
        if let Ok(k) = s.parse::<usize>() {
            return Ok(Budget::Count(k));
        }
        s.parse::<f64>()
            .map(Budget::Fraction)
            .map_err(|_| Error::InvalidArgument(format!("bad budget `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyConfig {
    pub budget: Budget,
    pub seed: u64,
    /// Consecutive failed attempts tolerated by the sampling strategies;
    /// defaults to `50 · k`.
    pub retry_limit: Option<usize>,
}

impl StrategyConfig {
    pub fn new(budget: Budget) -> Self {
        StrategyConfig {
            budget,
            seed: 0,
            retry_limit: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_retry_limit(mut self, limit: usize) -> Self {
        self.retry_limit = Some(limit);
        self
    }

    pub(crate) fn retry_limit_for(&self, k: usize) -> usize {
        self.retry_limit.unwrap_or(50 * k.max(1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Method {
    Ga,
    Eda,
    Ta,
    Pea,
    Ra,
    Pa,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Ga,
        Method::Eda,
        Method::Ta,
        Method::Pea,
        Method::Ra,
        Method::Pa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Ga => "ga",
            Method::Eda => "eda",
            Method::Ta => "ta",
            Method::Pea => "pea",
            Method::Ra => "ra",
            Method::Pa => "pa",
        }
    }

    pub fn is_stochastic(self) -> bool {
        matches!(self, Method::Pea | Method::Ra | Method::Pa)
    }

    pub fn run(self, g: &Graph, cfg: &StrategyConfig) -> Result<RewirePlan> {
        match self {
            Method::Ga => run_ga(g, cfg),
            Method::Eda => run_eda(g, cfg),
            Method::Ta => run_ta(g, cfg),
            Method::Pea => run_pea(g, cfg),
            Method::Ra => run_ra(g, cfg),
            Method::Pa => run_pa(g, cfg),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method `{s}`")))
    }
}

/// Output of a strategy run.
#[derive(Debug, Clone)]
pub struct RewirePlan {
    pub steps: Vec<RewireCandidate>,
    pub delta_s: i64,
    /// `None` when the assortativity of the input is undefined.
    pub delta_r: Option<f64>,
    pub final_graph: Graph,
    pub budget: usize,
    /// The strategy stopped before spending its budget because it ran out
    /// of retries or applicable moves.
    pub truncated: bool,
}

impl RewirePlan {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Applies steps to an evolving copy of the input and tracks Δs.
pub(crate) struct PlanBuilder {
    pub graph: Graph,
    parts: AssortativityParts,
    steps: Vec<RewireCandidate>,
    delta_s: i64,
}

impl PlanBuilder {
    pub fn new(g: &Graph) -> Self {
        PlanBuilder {
            graph: g.clone(),
            parts: AssortativityParts::of(g),
            steps: Vec::new(),
            delta_s: 0,
        }
    }

    /// Applies `c` if it is applicable to the current graph.
    pub fn try_apply(&mut self, c: RewireCandidate) -> bool {
        if self.graph.apply_rewiring(&c).is_err() {
            return false;
        }
        self.delta_s += c.value;
        self.steps.push(c);
        true
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn finish(self, budget: usize) -> RewirePlan {
        let truncated = self.steps.len() < budget;
        RewirePlan {
            delta_r: self.parts.delta_r(self.delta_s).ok(),
            steps: self.steps,
            delta_s: self.delta_s,
            final_graph: self.graph,
            budget,
            truncated,
        }
    }
}

/// Re-applies `steps` to `g` in order.
pub fn replay(g: &Graph, steps: &[RewireCandidate]) -> Result<Graph> {
    let mut out = g.clone();
    for c in steps {
        out.apply_rewiring(c)?;
    }
    Ok(out)
}

/// Sorts four distinct nodes by degree descending, ties by id ascending.
pub(crate) fn by_degree_desc(g: &Graph, nodes: [NodeId; 4]) -> [NodeId; 4] {
    let mut n = nodes;
    n.sort_by(|&x, &y| g.degree(y).cmp(&g.degree(x)).then(x.cmp(&y)));
    n
}

/// High-high/low-low reconnection of two node-disjoint edges.
pub(crate) fn assortative_reconnection(
    g: &Graph,
    e1: crate::graph::EdgeRef,
    e2: crate::graph::EdgeRef,
) -> Option<RewireCandidate> {
    if e1.shares_endpoint(&e2) {
        return None;
    }
    let [a, b, c, d] = by_degree_desc(g, [e1.u, e1.v, e2.u, e2.v]);
    Some(RewireCandidate::reconnect(g, [e1, e2], a, b, c, d))
}

#[derive(Serialize)]
struct PlanRow<'a> {
    step: usize,
    source_a_u: &'a str,
    source_a_v: &'a str,
    source_b_u: &'a str,
    source_b_v: &'a str,
    created_a_u: &'a str,
    created_a_v: &'a str,
    created_b_u: &'a str,
    created_b_v: &'a str,
    value: i64,
    cumulative_r: Option<f64>,
}

/// Writes one CSV row per step with the assortativity after that step.
pub fn write_plan_csv<W: Write>(g: &Graph, plan: &RewirePlan, out: W) -> Result<()> {
    let parts = AssortativityParts::of(g);
    let mut w = csv::Writer::from_writer(out);
    let mut delta = 0i64;
    for (i, c) in plan.steps.iter().enumerate() {
        delta += c.value;
        w.serialize(PlanRow {
            step: i + 1,
            source_a_u: g.label(c.source_a.u),
            source_a_v: g.label(c.source_a.v),
            source_b_u: g.label(c.source_b.u),
            source_b_v: g.label(c.source_b.v),
            created_a_u: g.label(c.created_a.u),
            created_a_v: g.label(c.created_a.v),
            created_b_u: g.label(c.created_b.u),
            created_b_v: g.label(c.created_b.v),
            value: c.value,
            cumulative_r: parts.assortativity_shifted(delta).ok(),
        })?;
    }
    w.flush()?;
    Ok(())
}
