//! Optimal budgeted rewiring on small instances.
//!
//! Maximizes `Σ value·x` over the candidate set subject to each original edge
//! being consumed at most once, each new edge being created at most once, and
//! at most `k` selections. This is a maximum-weight independent set of size
//! `≤ k` in the conflict graph, solved by depth-first branch and bound.
//!
//! Candidates are visited in the greedy order, and the search always tries
//! the first compatible candidate first, so the first leaf it reaches is the
//! greedy plan. Branches are pruned with an edge-capacity bound (see
//! `Search::doubled_bound`).

use std::collections::HashMap;

use crate::candidates::{enumerate_ep, RewireCandidate};
use crate::error::{Error, Result};
use crate::graph::{EdgeRef, Graph};
use crate::strategies::{PlanBuilder, RewirePlan};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone)]
pub struct ExactSolution {
    pub plan: RewirePlan,
    pub optimal_delta_s: i64,
    pub explored_nodes: u64,
    /// False when the node budget ran out; `plan` is then the best found.
    pub proven_optimal: bool,
}

/// Best admissible plan of at most `k` candidates from the graph's
/// candidate set.
pub fn solve_exact(g: &Graph, k: usize, node_budget: u64) -> Result<ExactSolution> {
    if node_budget == 0 {
        return Err(Error::InvalidArgument(
            "node budget must be positive".into(),
        ));
    }
    let ep = if k == 0 { Vec::new() } else { enumerate_ep(g) };
    let outcome = Search::new(g, &ep, k, node_budget).run();

    let mut builder = PlanBuilder::new(g);
    for &i in &outcome.chosen {
        let applied = builder.try_apply(ep[i]);
        debug_assert!(applied, "admissible plans apply in any order");
    }
    let plan = builder.finish(k);
    Ok(ExactSolution {
        optimal_delta_s: plan.delta_s,
        plan,
        explored_nodes: outcome.explored,
        proven_optimal: !outcome.aborted,
    })
}

/// `delta_s / optimum` for a strategy plan against a proven optimum.
pub fn ratio_against(delta_s: i64, solution: &ExactSolution) -> Result<f64> {
    if !solution.proven_optimal {
        return Err(Error::NotProven {
            explored: solution.explored_nodes,
        });
    }
    if solution.optimal_delta_s == 0 {
        return Err(Error::UndefinedRatio);
    }
    Ok(delta_s as f64 / solution.optimal_delta_s as f64)
}

/// Solves `(g, k)` exactly and divides the plan's Δs by the optimum.
pub fn approximation_ratio(
    g: &Graph,
    k: usize,
    plan: &RewirePlan,
    node_budget: u64,
) -> Result<f64> {
    let solution = solve_exact(g, k, node_budget)?;
    ratio_against(plan.delta_s, &solution)
}

struct Outcome {
    chosen: Vec<usize>,
    explored: u64,
    aborted: bool,
}

struct Search {
    values: Vec<i64>,
    sources: Vec<[usize; 2]>,
    created: Vec<[usize; 2]>,
    /// The created edge with the larger degree product.
    heavy: Vec<usize>,
    source_used: Vec<bool>,
    created_used: Vec<bool>,
    source_seen: Vec<u64>,
    created_seen: Vec<u64>,
    heavy_seen: Vec<u64>,
    generation: u64,
    k: usize,
    node_budget: u64,
    explored: u64,
    aborted: bool,
    stack: Vec<usize>,
    best: i64,
    best_set: Vec<usize>,
}

fn intern(ids: &mut HashMap<EdgeRef, usize>, e: EdgeRef) -> usize {
    let next = ids.len();
    *ids.entry(e).or_insert(next)
}

impl Search {
    fn new(g: &Graph, ep: &[RewireCandidate], k: usize, node_budget: u64) -> Self {
        let mut src_ids = HashMap::new();
        let mut dst_ids = HashMap::new();
        let sources: Vec<[usize; 2]> = ep
            .iter()
            .map(|c| c.sources().map(|e| intern(&mut src_ids, e)))
            .collect();
        let created: Vec<[usize; 2]> = ep
            .iter()
            .map(|c| c.created().map(|e| intern(&mut dst_ids, e)))
            .collect();
        let product = |e: EdgeRef| g.degree(e.u) * g.degree(e.v);
        let heavy = ep
            .iter()
            .zip(&created)
            .map(|(c, ids)| {
                if product(c.created_b) > product(c.created_a) {
                    ids[1]
                } else {
                    ids[0]
                }
            })
            .collect();
        Search {
            values: ep.iter().map(|c| c.value).collect(),
            heavy,
            sources,
            created,
            source_used: vec![false; src_ids.len()],
            created_used: vec![false; dst_ids.len()],
            source_seen: vec![0; src_ids.len()],
            created_seen: vec![0; dst_ids.len()],
            heavy_seen: vec![0; dst_ids.len()],
            generation: 0,
            k,
            node_budget,
            explored: 0,
            aborted: false,
            stack: Vec::with_capacity(k),
            best: 0,
            best_set: Vec::new(),
        }
    }

    fn run(mut self) -> Outcome {
        if self.k > 0 && !self.values.is_empty() {
            self.descend(0, 0);
        }
        Outcome {
            chosen: self.best_set,
            explored: self.explored,
            aborted: self.aborted,
        }
    }

    fn compatible(&self, i: usize) -> bool {
        let [s0, s1] = self.sources[i];
        let [c0, c1] = self.created[i];
        !(self.source_used[s0]
            || self.source_used[s1]
            || self.created_used[c0]
            || self.created_used[c1])
    }

    fn mark(&mut self, i: usize, used: bool) {
        for s in self.sources[i] {
            self.source_used[s] = used;
        }
        for c in self.created[i] {
            self.created_used[c] = used;
        }
    }

    /// Upper bound on what `picks` more compatible candidates from `start`
    /// on can add, doubled to stay in integers.
    ///
    /// Any `picks` admissible candidates use `2·picks` distinct source edges
    /// and as many distinct created edges. Charging each value to edges and
    /// keeping each edge's largest charge bounds the total:
    /// - half the value to each source edge: half the `2·picks` largest
    /// - half the value to each created edge: likewise
    /// - the whole value to the heavy created edge: the `picks` largest
    ///
    /// Values are scanned in descending order, so the first sighting of an
    /// edge carries its maximum and the scan stops once every charge has
    /// enough edges. The smallest of the three bounds is returned.
    fn doubled_bound(&mut self, start: usize, picks: usize) -> i64 {
        self.generation += 1;
        let stamp = self.generation;
        let want = 2 * picks;
        let (mut src_n, mut src_sum, mut dst_n, mut dst_sum) = (0, 0, 0, 0);
        let (mut heavy_n, mut heavy_sum) = (0, 0);
        for i in start..self.values.len() {
            if src_n == want && dst_n == want && heavy_n == picks {
                break;
            }
            if !self.compatible(i) {
                continue;
            }
            let v = self.values[i];
            for s in self.sources[i] {
                if src_n < want && self.source_seen[s] != stamp {
                    self.source_seen[s] = stamp;
                    src_n += 1;
                    src_sum += v;
                }
            }
            for c in self.created[i] {
                if dst_n < want && self.created_seen[c] != stamp {
                    self.created_seen[c] = stamp;
                    dst_n += 1;
                    dst_sum += v;
                }
            }
            let h = self.heavy[i];
            if heavy_n < picks && self.heavy_seen[h] != stamp {
                self.heavy_seen[h] = stamp;
                heavy_n += 1;
                heavy_sum += v;
            }
        }
        src_sum.min(dst_sum).min(2 * heavy_sum)
    }

    fn hopeless(&mut self, start: usize, picks: usize, current: i64) -> bool {
        2 * current + self.doubled_bound(start, picks) <= 2 * self.best
    }

    fn descend(&mut self, start: usize, current: i64) {
        self.explored += 1;
        if self.explored > self.node_budget {
            self.aborted = true;
            return;
        }
        if current > self.best {
            self.best = current;
            self.best_set = self.stack.clone();
        }
        let picks = self.k - self.stack.len();
        if picks == 0 {
            return;
        }
        for i in start..self.values.len() {
            // values are sorted, so no later candidate can do better
            if current + self.values[i] * picks as i64 <= self.best {
                break;
            }
            if !self.compatible(i) {
                continue;
            }
            // the bound only shrinks as `i` advances
            if self.hopeless(i, picks, current) {
                break;
            }
            self.mark(i, true);
            self.stack.push(i);
            self.descend(i + 1, current + self.values[i]);
            self.stack.pop();
            self.mark(i, false);
            if self.aborted {
                return;
            }
        }
    }
}
