//! Node centralities and the rank-stability score SC.
//!
//! Conventions on disconnected graphs: closeness is component-local with the
//! Wasserman–Faust `(r−1)/(n−1)` correction, and eigenvector centrality is
//! supported on the largest component only (zeros elsewhere).

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::correlation::spearman_rank_corr;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

const SOURCE_CHUNK: usize = 64;
const EIGEN_TOL: f64 = 1e-13;
const EIGEN_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CentralityKind {
    Betweenness,
    Closeness,
    Eigenvector,
    KShell,
}

impl CentralityKind {
    pub const ALL: [CentralityKind; 4] = [
        CentralityKind::Betweenness,
        CentralityKind::Closeness,
        CentralityKind::Eigenvector,
        CentralityKind::KShell,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CentralityKind::Betweenness => "betweenness",
            CentralityKind::Closeness => "closeness",
            CentralityKind::Eigenvector => "eigenvector",
            CentralityKind::KShell => "kshell",
        }
    }
}

impl fmt::Display for CentralityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CentralityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CentralityKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown centrality `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralityVector {
    pub measure: CentralityKind,
    pub scores: Vec<f64>,
    /// Eigenvector scores were computed on the largest component only.
    pub largest_component_only: bool,
}

pub fn centrality(g: &Graph, measure: CentralityKind) -> Result<CentralityVector> {
    let (scores, partial) = match measure {
        CentralityKind::Betweenness => (betweenness(g), false),
        CentralityKind::Closeness => (closeness(g), false),
        CentralityKind::Eigenvector => eigenvector(g)?,
        CentralityKind::KShell => (
            core_numbers(g).into_iter().map(|c| c as f64).collect(),
            false,
        ),
    };
    Ok(CentralityVector {
        measure,
        scores,
        largest_component_only: partial,
    })
}

/// Sums per-source contributions in fixed chunks so the floating-point
/// result does not depend on the thread count.
fn accumulate_over_sources<F>(n: usize, per_source: F) -> Vec<f64>
where
    F: Fn(NodeId, &mut [f64]) + Sync,
{
    let sources: Vec<NodeId> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            for &s in chunk {
                per_source(s, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    total
}

/// Brandes betweenness, normalized by `(n−1)(n−2)/2` unordered pairs.
pub fn betweenness(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    if n < 3 {
        return vec![0.0; n];
    }
    let raw = accumulate_over_sources(n, |s, acc| {
        let mut sigma = vec![0.0f64; n];
        let mut dist = vec![usize::MAX; n];
        let mut preds: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::new();
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        let mut delta = vec![0.0f64; n];
        for &w in order.iter().rev() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                acc[w] += delta[w];
            }
        }
    });
    // each unordered pair was counted from both ends
    let scale = 1.0 / ((n - 1) * (n - 2)) as f64;
    raw.into_iter().map(|b| b * scale).collect()
}

fn bfs_distances(g: &Graph, s: NodeId) -> (usize, usize) {
    let n = g.node_count();
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::from([s]);
    dist[s] = 0;
    let (mut reached, mut total) = (0, 0);
    while let Some(v) = queue.pop_front() {
        reached += 1;
        total += dist[v];
        for &w in g.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    (reached, total)
}

/// `(r−1)/Σd · (r−1)/(n−1)` with `r` the size of the node's component.
pub fn closeness(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    (0..n)
        .into_par_iter()
        .map(|v| {
            let (reached, total) = bfs_distances(g, v);
            if total == 0 || n < 2 {
                return 0.0;
            }
            let r = (reached - 1) as f64;
            (r / total as f64) * (r / (n - 1) as f64)
        })
        .collect()
}

/// Dominant adjacency eigenvector on the largest component: nonnegative,
/// unit Euclidean norm. Returns whether other components were zeroed.
pub fn eigenvector(g: &Graph) -> Result<(Vec<f64>, bool)> {
    let n = g.node_count();
    if g.edge_count() == 0 {
        return Err(Error::UndefinedMetric(
            "eigenvector centrality of a graph without edges".into(),
        ));
    }
    let comps = g.components();
    let partial = comps.len() > 1;
    let mut largest = &comps[0];
    for c in &comps[1..] {
        if c.len() > largest.len() {
            largest = c;
        }
    }
    let mut member = vec![false; n];
    for &v in largest {
        member[v] = true;
    }

    let mut x = vec![0.0; n];
    let init = 1.0 / (largest.len() as f64).sqrt();
    for &v in largest {
        x[v] = init;
    }
    let mut next = vec![0.0; n];
    for _ in 0..EIGEN_MAX_ITER {
        for &v in largest {
            // (A + I) x, restricted to the component
            next[v] = x[v] + g.neighbors(v).iter().map(|&w| x[w]).sum::<f64>();
        }
        let s = largest
            .iter()
            .map(|&v| next[v] * next[v])
            .sum::<f64>()
            .sqrt();
        let mut change = 0.0f64;
        for &v in largest {
            let val = next[v] / s;
            change = change.max((val - x[v]).abs());
            x[v] = val;
        }
        if change < EIGEN_TOL {
            debug_assert!(x.iter().enumerate().all(|(v, &s)| member[v] || s == 0.0));
            return Ok((x, partial));
        }
    }
    Err(Error::Convergence {
        iterations: EIGEN_MAX_ITER,
        residual: f64::NAN,
    })
}

/// Core number of every node by bucket-ordered shell peeling.
pub fn core_numbers(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut degree: Vec<usize> = g.degree_sequence();
    let max_deg = degree.iter().copied().max().unwrap_or(0);
    let mut bin_start = vec![0usize; max_deg + 2];
    for &d in &degree {
        bin_start[d + 1] += 1;
    }
    for d in 1..bin_start.len() {
        bin_start[d] += bin_start[d - 1];
    }
    let mut pos = vec![0usize; n];
    let mut vert = vec![0usize; n];
    let mut next_slot = bin_start.clone();
    for v in 0..n {
        pos[v] = next_slot[degree[v]];
        vert[pos[v]] = v;
        next_slot[degree[v]] += 1;
    }
    for i in 0..n {
        let v = vert[i];
        for &u in g.neighbors(v) {
            if degree[u] > degree[v] {
                // move u to the front of its bin, then shrink the bin
                let du = degree[u];
                let pu = pos[u];
                let pw = bin_start[du];
                let w = vert[pw];
                if u != w {
                    vert[pu] = w;
                    pos[w] = pu;
                    vert[pw] = u;
                    pos[u] = pw;
                }
                bin_start[du] += 1;
                degree[u] -= 1;
            }
        }
    }
    degree
}

/// Spearman correlation between two centrality vectors over the top
/// `⌈fraction·n⌉` nodes of the original ranking (score descending, ties by
/// node id).
pub fn centrality_sc(
    original: &CentralityVector,
    rewired: &CentralityVector,
    top_fraction: f64,
) -> Result<f64> {
    if original.measure != rewired.measure || original.scores.len() != rewired.scores.len() {
        return Err(Error::InvalidArgument(
            "centrality vectors differ in measure or length".into(),
        ));
    }
    sc_scores(&original.scores, &rewired.scores, top_fraction)
}

pub fn sc_scores(original: &[f64], rewired: &[f64], top_fraction: f64) -> Result<f64> {
    if !(top_fraction > 0.0 && top_fraction <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "top fraction {top_fraction} outside (0, 1]"
        )));
    }
    let n = original.len();
    let take = ((top_fraction * n as f64 - 1e-9).ceil() as usize).clamp(1, n.max(1));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| original[b].total_cmp(&original[a]).then(a.cmp(&b)));
    order.truncate(take);
    let xs: Vec<f64> = order.iter().map(|&v| original[v]).collect();
    let ys: Vec<f64> = order.iter().map(|&v| rewired[v]).collect();
    spearman_rank_corr(&xs, &ys)
}
