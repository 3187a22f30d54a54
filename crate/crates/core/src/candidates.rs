//! Rewiring candidates and their conflict structure.
//!
//! The candidate set is evaluated once against the original graph: edges
//! created by a rewiring never become operands of a later one, and a pair
//! whose target edge exists in the original graph is never a candidate. Two
//! candidates conflict when they consume the same original edge or create the
//! same new edge.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::correlation::{value_from_degrees, Orientation};
use crate::error::Result;
use crate::graph::{EdgeRef, Graph};

/// One degree-preserving rewiring: two source edges replaced by two created
/// edges on the same four endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RewireCandidate {
    pub source_a: EdgeRef,
    pub source_b: EdgeRef,
    pub created_a: EdgeRef,
    pub created_b: EdgeRef,
    /// Change in the s-metric caused by this rewiring.
    pub value: i64,
}

pub type CandidateKey = (EdgeRef, EdgeRef, EdgeRef, EdgeRef);

impl RewireCandidate {
    /// Builds a candidate, putting both edge pairs in canonical order. The
    /// value is taken as given.
    pub fn from_parts(sources: [EdgeRef; 2], created: [EdgeRef; 2], value: i64) -> Self {
        let [sa, sb] = sorted_pair(sources);
        let [ca, cb] = sorted_pair(created);
        RewireCandidate {
            source_a: sa,
            source_b: sb,
            created_a: ca,
            created_b: cb,
            value,
        }
    }

    /// Rewires `e1`, `e2` in the given orientation, computing the value from
    /// the degrees in `g`.
    pub fn with_orientation(
        g: &Graph,
        e1: EdgeRef,
        e2: EdgeRef,
        orientation: Orientation,
    ) -> Result<Self> {
        let value = crate::correlation::candidate_value(g, e1, e2, orientation)?;
        Ok(Self::from_parts(
            [e1, e2],
            orientation.created(e1, e2),
            value,
        ))
    }

    /// Reconnects four distinct nodes as `(a, b), (c, d)`, valued by the
    /// degrees in `g`.
    pub(crate) fn reconnect(
        g: &Graph,
        sources: [EdgeRef; 2],
        a: usize,
        b: usize,
        c: usize,
        d: usize,
    ) -> Self {
        let created = [EdgeRef::new(a, b), EdgeRef::new(c, d)];
        let deg = |x: usize| g.degree(x) as u64;
        let before = deg(sources[0].u) * deg(sources[0].v) + deg(sources[1].u) * deg(sources[1].v);
        let after = deg(a) * deg(b) + deg(c) * deg(d);
        Self::from_parts(sources, created, after as i64 - before as i64)
    }

    pub fn sources(&self) -> [EdgeRef; 2] {
        [self.source_a, self.source_b]
    }

    pub fn created(&self) -> [EdgeRef; 2] {
        [self.created_a, self.created_b]
    }

    pub fn key(&self) -> CandidateKey {
        (self.source_a, self.source_b, self.created_a, self.created_b)
    }

    /// The rewiring that undoes this one.
    pub fn reversed(&self) -> Self {
        Self::from_parts(self.created(), self.sources(), -self.value)
    }

    /// Shared source edge or shared created edge.
    pub fn conflicts(&self, other: &RewireCandidate) -> bool {
        let shares = |x: [EdgeRef; 2], y: [EdgeRef; 2]| x.iter().any(|e| y.contains(e));
        shares(self.sources(), other.sources()) || shares(self.created(), other.created())
    }
}

fn sorted_pair([a, b]: [EdgeRef; 2]) -> [EdgeRef; 2] {
    if a <= b {
        [a, b]
    } else {
        [b, a]
    }
}

/// Value descending, then candidate key ascending.
pub fn rank_order(a: &RewireCandidate, b: &RewireCandidate) -> Ordering {
    b.value.cmp(&a.value).then_with(|| a.key().cmp(&b.key()))
}

pub fn conflicts(a: &RewireCandidate, b: &RewireCandidate) -> bool {
    a.conflicts(b)
}

/// True iff no two members of `plan` conflict.
pub fn admissible(plan: &[RewireCandidate]) -> bool {
    let mut sources = HashSet::with_capacity(2 * plan.len());
    let mut created = HashSet::with_capacity(2 * plan.len());
    plan.iter().all(|c| {
        c.sources().iter().all(|&e| sources.insert(e))
            && c.created().iter().all(|&e| created.insert(e))
    })
}

/// Candidates from one edge pair that have positive value and create only
/// absent edges.
fn push_positive(g: &Graph, e1: EdgeRef, e2: EdgeRef, out: &mut Vec<RewireCandidate>) {
    if e1.shares_endpoint(&e2) {
        return;
    }
    let d = |x| g.degree(x) as u64;
    for o in Orientation::BOTH {
        let value = value_from_degrees(d(e1.u), d(e1.v), d(e2.u), d(e2.v), o);
        if value <= 0 {
            continue;
        }
        let created = o.created(e1, e2);
        if created.iter().any(|&e| g.contains(e)) {
            continue;
        }
        out.push(RewireCandidate::from_parts([e1, e2], created, value));
    }
}

/// Every positive-value, applicable candidate of `g`, sorted by
/// [`rank_order`].
pub fn enumerate_ep(g: &Graph) -> Vec<RewireCandidate> {
    let edges: Vec<EdgeRef> = g.edges().collect();
    let mut out: Vec<RewireCandidate> = (0..edges.len())
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut local = Vec::new();
            for &e2 in &edges[a + 1..] {
                push_positive(g, edges[a], e2, &mut local);
            }
            local
        })
        .collect();
    out.par_sort_unstable_by(rank_order);
    out
}

/// Lazily yields the same sequence as [`enumerate_ep`], one value level at a
/// time.
///
/// Edges are grouped by their unordered endpoint-degree pair. Any two classes
/// admit at most two values (high-high/low-low and high-low/low-high), so the
/// value levels can be listed from the class table alone; a level is only
/// materialized and sorted when the iterator reaches it.
pub struct EpStream<'g> {
    graph: &'g Graph,
    classes: Vec<Vec<EdgeRef>>,
    levels: std::collections::btree_map::IntoIter<Reverse<i64>, Vec<(usize, usize)>>,
    pending: std::vec::IntoIter<RewireCandidate>,
}

impl<'g> EpStream<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        let mut class_of: BTreeMap<(u64, u64), usize> = BTreeMap::new();
        let mut classes: Vec<Vec<EdgeRef>> = Vec::new();
        let mut class_degrees: Vec<(u64, u64)> = Vec::new();
        for e in graph.edges() {
            let (x, y) = (graph.degree(e.u) as u64, graph.degree(e.v) as u64);
            let key = (x.max(y), x.min(y));
            let idx = *class_of.entry(key).or_insert_with(|| {
                classes.push(Vec::new());
                class_degrees.push(key);
                classes.len() - 1
            });
            classes[idx].push(e);
        }

        let mut levels: BTreeMap<Reverse<i64>, Vec<(usize, usize)>> = BTreeMap::new();
        for (c1, &(h1, l1)) in class_degrees.iter().enumerate() {
            for (c2, &(h2, l2)) in class_degrees.iter().enumerate().skip(c1) {
                if c1 == c2 && classes[c1].len() < 2 {
                    continue;
                }
                let high_high = (h1 as i64 - l2 as i64) * (h2 as i64 - l1 as i64);
                let high_low = (h1 as i64 - h2 as i64) * (l2 as i64 - l1 as i64);
                for v in [high_high, high_low] {
                    if v > 0 {
                        let bucket = levels.entry(Reverse(v)).or_default();
                        if bucket.last() != Some(&(c1, c2)) {
                            bucket.push((c1, c2));
                        }
                    }
                }
            }
        }

        EpStream {
            graph,
            classes,
            levels: levels.into_iter(),
            pending: Vec::new().into_iter(),
        }
    }

    fn materialize(&self, value: i64, pairs: &[(usize, usize)]) -> Vec<RewireCandidate> {
        let g = self.graph;
        let mut out: Vec<RewireCandidate> = pairs
            .par_iter()
            .flat_map_iter(|&(c1, c2)| {
                let mut local = Vec::new();
                let (a, b) = (&self.classes[c1], &self.classes[c2]);
                for (i, &e1) in a.iter().enumerate() {
                    let others = if c1 == c2 { &b[i + 1..] } else { &b[..] };
                    for &e2 in others {
                        let (x, y) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
                        push_positive(g, x, y, &mut local);
                    }
                }
                local.retain(|c| c.value == value);
                local
            })
            .collect();
        out.par_sort_unstable_by(rank_order);
        out
    }
}

impl Iterator for EpStream<'_> {
    type Item = RewireCandidate;

    fn next(&mut self) -> Option<RewireCandidate> {
        loop {
            if let Some(c) = self.pending.next() {
                return Some(c);
            }
            let (Reverse(value), pairs) = self.levels.next()?;
            self.pending = self.materialize(value, &pairs).into_iter();
        }
    }
}

/// Candidates with their pairwise conflict relation.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    pub candidates: Vec<RewireCandidate>,
    neighbors: Vec<Vec<usize>>,
}

impl ConflictGraph {
    pub fn new(candidates: Vec<RewireCandidate>) -> Self {
        let mut by_edge: HashMap<(bool, EdgeRef), Vec<usize>> = HashMap::new();
        for (i, c) in candidates.iter().enumerate() {
            for e in c.sources() {
                by_edge.entry((false, e)).or_default().push(i);
            }
            for e in c.created() {
                by_edge.entry((true, e)).or_default().push(i);
            }
        }
        let mut neighbors = vec![Vec::new(); candidates.len()];
        for members in by_edge.values() {
            for &i in members {
                neighbors[i].extend(members.iter().copied().filter(|&j| j != i));
            }
        }
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
        }
        ConflictGraph {
            candidates,
            neighbors,
        }
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn conflicts(&self, i: usize, j: usize) -> bool {
        self.neighbors[i].binary_search(&j).is_ok()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }
}

#[derive(Serialize)]
struct CandidateRow<'a> {
    source_a_u: &'a str,
    source_a_v: &'a str,
    source_b_u: &'a str,
    source_b_v: &'a str,
    created_a_u: &'a str,
    created_a_v: &'a str,
    created_b_u: &'a str,
    created_b_v: &'a str,
    value: i64,
}

/// Writes candidates as CSV rows using the graph's external labels.
const CANDIDATE_COLUMNS: [&str; 9] = [
    "source_a_u",
    "source_a_v",
    "source_b_u",
    "source_b_v",
    "created_a_u",
    "created_a_v",
    "created_b_u",
    "created_b_v",
    "value",
];

pub fn write_candidates_csv<W: Write>(
    g: &Graph,
    candidates: &[RewireCandidate],
    out: W,
) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CANDIDATE_COLUMNS)?;
    for c in candidates {
        w.serialize(CandidateRow {
            source_a_u: g.label(c.source_a.u),
            source_a_v: g.label(c.source_a.v),
            source_b_u: g.label(c.source_b.u),
            source_b_v: g.label(c.source_b.v),
            created_a_u: g.label(c.created_a.u),
            created_a_v: g.label(c.created_a.v),
            created_b_u: g.label(c.created_b.u),
            created_b_v: g.label(c.created_b.v),
            value: c.value,
        })?;
    }
    w.flush()?;
    Ok(())
}
