//! Seeded random graph models for the solution-quality study.
//!
//! All generators draw from `ChaCha8Rng::seed_from_u64(seed)`, so a seed
//! pins the instance on every platform.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_RING_DEGREE: usize = 4;
pub const DEFAULT_REWIRE_PROB: f64 = 0.1;
pub const DEFAULT_ATTACHMENT: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RandomModel {
    /// `G(n, m)`: `edges` distinct edges chosen uniformly.
    ErdosRenyi { n: usize, edges: usize },
    /// Ring lattice of even degree `ring_degree`, each edge's far end
    /// rewired with probability `rewire_prob`.
    WattsStrogatz {
        n: usize,
        ring_degree: usize,
        rewire_prob: f64,
    },
    /// Preferential attachment, `attachment` edges per new node.
    BarabasiAlbert { n: usize, attachment: usize },
}

impl RandomModel {
    pub fn generate(&self, seed: u64) -> Result<Graph> {
        match *self {
            RandomModel::ErdosRenyi { n, edges } => erdos_renyi(n, edges, seed),
            RandomModel::WattsStrogatz {
                n,
                ring_degree,
                rewire_prob,
            } => watts_strogatz(n, ring_degree, rewire_prob, seed),
            RandomModel::BarabasiAlbert { n, attachment } => barabasi_albert(n, attachment, seed),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RandomModel::ErdosRenyi { .. } => "er",
            RandomModel::WattsStrogatz { .. } => "ws",
            RandomModel::BarabasiAlbert { .. } => "ba",
        }
    }
}

pub fn erdos_renyi(n: usize, edges: usize, seed: u64) -> Result<Graph> {
    let max = n * n.saturating_sub(1) / 2;
    if edges > max {
        return Err(Error::InvalidArgument(format!(
            "{edges} edges do not fit in a simple graph on {n} nodes"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = BTreeSet::new();
    let mut order = Vec::with_capacity(edges);
    while chosen.len() < edges {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a == b {
            continue;
        }
        let e = (a.min(b), a.max(b));
        if chosen.insert(e) {
            order.push(e);
        }
    }
    Graph::from_edges(n, order)
}

pub fn watts_strogatz(n: usize, ring_degree: usize, rewire_prob: f64, seed: u64) -> Result<Graph> {
    if !ring_degree.is_multiple_of(2) || ring_degree >= n {
        return Err(Error::InvalidArgument(format!(
            "ring degree {ring_degree} must be even and below n = {n}"
        )));
    }
    if !(0.0..=1.0).contains(&rewire_prob) {
        return Err(Error::InvalidArgument(format!(
            "rewire probability {rewire_prob}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for u in 0..n {
        for j in 1..=ring_degree / 2 {
            let v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    for j in 1..=ring_degree / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            if rng.random::<f64>() >= rewire_prob || !adj[u].contains(&v) {
                continue;
            }
            if adj[u].len() >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.random_range(0..n);
                if w != u && !adj[u].contains(&w) {
                    break w;
                }
            };
            adj[u].remove(&v);
            adj[v].remove(&u);
            adj[u].insert(w);
            adj[w].insert(u);
        }
    }
    let edges = adj
        .iter()
        .enumerate()
        .flat_map(|(u, nb)| nb.range(u + 1..).map(move |&v| (u, v)))
        .collect::<Vec<_>>();
    Graph::from_edges(n, edges)
}

pub fn barabasi_albert(n: usize, attachment: usize, seed: u64) -> Result<Graph> {
    if attachment == 0 || attachment >= n {
        return Err(Error::InvalidArgument(format!(
            "attachment {attachment} must be in 1..{n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity((n - attachment) * attachment);
    let mut targets: Vec<usize> = (0..attachment).collect();
    let mut repeated: Vec<usize> = Vec::new();
    for source in attachment..n {
        edges.extend(targets.iter().map(|&t| (source, t)));
        repeated.extend(targets.iter().copied());
        repeated.extend(std::iter::repeat_n(source, attachment));
        let mut next = BTreeSet::new();
        while next.len() < attachment {
            next.insert(repeated[rng.random_range(0..repeated.len())]);
        }
        targets = next.into_iter().collect();
    }
    Graph::from_edges(n, edges)
}
