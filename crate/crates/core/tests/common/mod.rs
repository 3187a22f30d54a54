//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the library's value formula, candidate
//! enumeration, search, or eigen solvers; each oracle recomputes from the
//! edge set directly.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use rewire_core::{Graph, RewireCandidate};

pub type Edge = (usize, usize);

fn canon(a: usize, b: usize) -> Edge {
    (a.min(b), a.max(b))
}

/// The 8-node fixture: two hubs with three leaves each and one leaf bridge.
pub fn g8() -> Graph {
    Graph::from_edges(8, [(0, 2), (0, 3), (0, 4), (1, 5), (1, 6), (1, 7), (2, 5)]).unwrap()
}

pub const G8_TEXT: &str = "h1 l1\nh1 l2\nh1 l3\nh2 l4\nh2 l5\nh2 l6\nl1 l4\n";

pub fn edge_set(g: &Graph) -> BTreeSet<Edge> {
    g.edges().map(|e| (e.u, e.v)).collect()
}

pub fn degrees_of(n: usize, edges: &BTreeSet<Edge>) -> Vec<u64> {
    let mut d = vec![0u64; n];
    for &(a, b) in edges {
        d[a] += 1;
        d[b] += 1;
    }
    d
}

/// `Σ d_u d_v` summed straight from an edge set.
pub fn s_of(n: usize, edges: &BTreeSet<Edge>) -> i64 {
    let d = degrees_of(n, edges);
    edges.iter().map(|&(a, b)| (d[a] * d[b]) as i64).sum()
}

/// Pearson correlation over both orientations of every edge, in floats.
pub fn assortativity_oracle(g: &Graph) -> f64 {
    let d: Vec<f64> = (0..g.node_count()).map(|v| g.degree(v) as f64).collect();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for e in g.edges() {
        xs.extend([d[e.u], d[e.v]]);
        ys.extend([d[e.v], d[e.u]]);
    }
    pearson_oracle(&xs, &ys)
}

pub fn pearson_oracle(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// Rank of each entry: 1 + #smaller + (#equal − 1)/2, by direct counting.
pub fn ranks_by_counting(xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|&x| {
            let less = xs.iter().filter(|&&y| y < x).count() as f64;
            let equal = xs.iter().filter(|&&y| y == x).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

pub fn spearman_oracle(xs: &[f64], ys: &[f64]) -> f64 {
    pearson_oracle(&ranks_by_counting(xs), &ranks_by_counting(ys))
}

/// A candidate as plain tuples: sorted sources, sorted created, value.
pub type Plain = ([Edge; 2], [Edge; 2], i64);

pub fn plain(c: &RewireCandidate) -> Plain {
    let mut s = [(c.source_a.u, c.source_a.v), (c.source_b.u, c.source_b.v)];
    let mut t = [
        (c.created_a.u, c.created_a.v),
        (c.created_b.u, c.created_b.v),
    ];
    s.sort();
    t.sort();
    (s, t, c.value)
}

/// Every positive-gain swap, found by performing each swap on a copy of
/// the edge set and recomputing the s-metric from scratch.
pub fn ep_oracle(g: &Graph) -> BTreeSet<Plain> {
    let n = g.node_count();
    let edges = edge_set(g);
    let base = s_of(n, &edges);
    let list: Vec<Edge> = edges.iter().copied().collect();
    let mut out = BTreeSet::new();
    for (x, &(i, j)) in list.iter().enumerate() {
        for &(k, l) in &list[x + 1..] {
            if i == k || i == l || j == k || j == l {
                continue;
            }
            for created in [[canon(i, k), canon(j, l)], [canon(i, l), canon(j, k)]] {
                if created.iter().any(|e| edges.contains(e)) {
                    continue;
                }
                let mut next = edges.clone();
                next.remove(&(i, j));
                next.remove(&(k, l));
                next.extend(created);
                let gain = s_of(n, &next) - base;
                if gain > 0 {
                    let mut s = [(i, j), (k, l)];
                    let mut t = created;
                    s.sort();
                    t.sort();
                    out.insert((s, t, gain));
                }
            }
        }
    }
    out
}

pub fn plain_admissible(chosen: &[&Plain]) -> bool {
    let mut sources = BTreeSet::new();
    let mut created = BTreeSet::new();
    chosen.iter().all(|(s, t, _)| {
        s.iter().all(|e| sources.insert(*e)) && t.iter().all(|e| created.insert(*e))
    })
}

/// Best total value over all admissible subsets of size at most `k`.
pub fn best_subset(cands: &[Plain], k: usize) -> i64 {
    fn go(cands: &[Plain], k: usize, from: usize, chosen: &mut Vec<usize>, best: &mut i64) {
        let picked: Vec<&Plain> = chosen.iter().map(|&i| &cands[i]).collect();
        if !plain_admissible(&picked) {
            return;
        }
        let total: i64 = picked.iter().map(|c| c.2).sum();
        *best = (*best).max(total);
        if chosen.len() == k {
            return;
        }
        for i in from..cands.len() {
            chosen.push(i);
            go(cands, k, i + 1, chosen, best);
            chosen.pop();
        }
    }
    let mut best = 0;
    go(cands, k, 0, &mut Vec::new(), &mut best);
    best
}

pub fn dense_adjacency(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut a = vec![vec![0.0; n]; n];
    for e in g.edges() {
        a[e.u][e.v] = 1.0;
        a[e.v][e.u] = 1.0;
    }
    a
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
/// Returns eigenvalues and the matching eigenvectors as columns.
pub fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-22 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

pub fn natural_connectivity_oracle(eigs: &[f64]) -> f64 {
    let n = eigs.len() as f64;
    let top = eigs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    top + (eigs.iter().map(|l| (l - top).exp()).sum::<f64>() / n).ln()
}

/// All-pairs BFS distances; `usize::MAX` marks unreachable pairs.
pub fn distances(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    (0..n)
        .map(|s| {
            let mut d = vec![usize::MAX; n];
            d[s] = 0;
            let mut frontier = vec![s];
            let mut level = 0;
            while !frontier.is_empty() {
                level += 1;
                let mut next = Vec::new();
                for v in frontier {
                    for &w in g.neighbors(v) {
                        if d[w] == usize::MAX {
                            d[w] = level;
                            next.push(w);
                        }
                    }
                }
                frontier = next;
            }
            d
        })
        .collect()
}

/// Betweenness from path counts: `v` lies on `σ_sv·σ_vt` of the `σ_st`
/// shortest s–t paths whenever `d(s,v) + d(v,t) = d(s,t)`.
pub fn betweenness_oracle(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let d = distances(g);
    // σ by dynamic programming over distance layers
    let mut sigma = vec![vec![0f64; n]; n];
    for s in 0..n {
        let mut order: Vec<usize> = (0..n).filter(|&v| d[s][v] != usize::MAX).collect();
        order.sort_by_key(|&v| d[s][v]);
        sigma[s][s] = 1.0;
        for &v in &order {
            if v == s {
                continue;
            }
            sigma[s][v] = g
                .neighbors(v)
                .iter()
                .filter(|&&u| d[s][u] != usize::MAX && d[s][u] + 1 == d[s][v])
                .map(|&u| sigma[s][u])
                .sum();
        }
    }
    let mut out = vec![0.0; n];
    if n < 3 {
        return out;
    }
    for (v, slot) in out.iter_mut().enumerate() {
        let mut total = 0.0;
        for s in 0..n {
            for t in s + 1..n {
                if s == v || t == v || d[s][t] == usize::MAX {
                    continue;
                }
                if d[s][v] != usize::MAX && d[v][t] != usize::MAX && d[s][v] + d[v][t] == d[s][t] {
                    total += sigma[s][v] * sigma[v][t] / sigma[s][t];
                }
            }
        }
        *slot = total * 2.0 / ((n - 1) * (n - 2)) as f64;
    }
    out
}

/// Wasserman–Faust closeness from the distance matrix.
pub fn closeness_oracle(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    distances(g)
        .iter()
        .map(|row| {
            let reach: Vec<usize> = row.iter().copied().filter(|&x| x != usize::MAX).collect();
            let r = reach.len() as f64 - 1.0;
            let sum: usize = reach.iter().sum();
            if sum == 0 || n < 2 {
                0.0
            } else {
                (r / sum as f64) * (r / (n as f64 - 1.0))
            }
        })
        .collect()
}

/// Core numbers by repeatedly deleting every node of degree `< k`.
pub fn core_oracle(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut core = vec![0; n];
    for k in 1..=n {
        let mut alive = vec![true; n];
        loop {
            let doomed: Vec<usize> = (0..n)
                .filter(|&v| alive[v] && g.neighbors(v).iter().filter(|&&w| alive[w]).count() < k)
                .collect();
            if doomed.is_empty() {
                break;
            }
            for v in doomed {
                alive[v] = false;
            }
        }
        if !alive.iter().any(|&a| a) {
            break;
        }
        for v in 0..n {
            if alive[v] {
                core[v] = k;
            }
        }
    }
    core
}

/// Random simple graph on `4..=max_n` nodes from an arbitrary pair list.
pub fn arb_graph(max_n: usize, max_pairs: usize) -> impl Strategy<Value = Graph> {
    (4..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 0..=max_pairs).prop_map(move |pairs| {
            Graph::from_edges(n, pairs.into_iter().filter(|(a, b)| a != b)).unwrap()
        })
    })
}
