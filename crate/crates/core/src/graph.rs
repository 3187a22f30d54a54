//! Simple undirected graphs with dense node ids.
//!
//! Nodes are numbered `0..n` in the order their labels first appear in the
//! input. The original labels are kept in a side table for reporting. The
//! only mutation is the degree-preserving edge swap in [`Graph::apply_rewiring`].

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::candidates::RewireCandidate;
use crate::error::{Error, Inapplicable, Result};

pub type NodeId = usize;

/// An undirected edge stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeRef {
    pub u: NodeId,
    pub v: NodeId,
}

impl EdgeRef {
    /// Canonical edge between `a` and `b`.
    ///
    /// Panics if `a == b`; use [`EdgeRef::try_new`] for unchecked input.
    pub fn new(a: NodeId, b: NodeId) -> Self {
        Self::try_new(a, b).unwrap_or_else(|| panic!("self-loop edge ({a}, {a})"))
    }

    pub fn try_new(a: NodeId, b: NodeId) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(EdgeRef { u: a, v: b }),
            std::cmp::Ordering::Greater => Some(EdgeRef { u: b, v: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn touches(&self, x: NodeId) -> bool {
        self.u == x || self.v == x
    }

    pub fn shares_endpoint(&self, other: &EdgeRef) -> bool {
        self.touches(other.u) || self.touches(other.v)
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<BTreeSet<NodeId>>,
    edge_count: usize,
    labels: Vec<String>,
    label_index: HashMap<String, NodeId>,
}

impl Graph {
    /// `n` isolated nodes labelled `"0"..`.
    pub fn new(n: usize) -> Self {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let label_index = labels.iter().cloned().zip(0..).collect();
        Graph {
            adjacency: vec![BTreeSet::new(); n],
            edge_count: 0,
            labels,
            label_index,
        }
    }

    /// Builds a graph on nodes `0..n`. Duplicate edges collapse.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut g = Graph::new(n);
        for (line, (a, b)) in edges.into_iter().enumerate() {
            if a >= n {
                return Err(Error::NodeOutOfRange(a));
            }
            if b >= n {
                return Err(Error::NodeOutOfRange(b));
            }
            let e = EdgeRef::try_new(a, b).ok_or_else(|| Error::SelfLoop {
                line: line + 1,
                label: a.to_string(),
            })?;
            g.insert_edge(e);
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: NodeId) -> &BTreeSet<NodeId> {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        a < self.adjacency.len() && self.adjacency[a].contains(&b)
    }

    pub fn contains(&self, e: EdgeRef) -> bool {
        self.has_edge(e.u, e.v)
    }

    /// Edges in ascending canonical order.
    pub fn edges(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.range(u + 1..).map(move |&v| EdgeRef { u, v }))
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        self.adjacency.iter().map(BTreeSet::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_id(&self, label: &str) -> Option<NodeId> {
        self.label_index.get(label).copied()
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(x) = queue.pop_front() {
                comp.push(x);
                for &y in &self.adjacency[x] {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    /// Swaps the candidate's source edges for its created edges in place.
    ///
    /// The degree sequence and edge count are unchanged. On error the graph
    /// is left untouched.
    pub fn apply_rewiring(&mut self, c: &RewireCandidate) -> Result<()> {
        self.check_rewiring(c).map_err(Error::Inapplicable)?;
        for e in c.sources() {
            self.remove_edge(e);
        }
        for e in c.created() {
            self.insert_edge(e);
        }
        Ok(())
    }

    /// Returns a new snapshot with the rewiring applied.
    pub fn rewired(&self, c: &RewireCandidate) -> Result<Graph> {
        let mut g = self.clone();
        g.apply_rewiring(c)?;
        Ok(g)
    }

    pub fn can_apply(&self, c: &RewireCandidate) -> bool {
        self.check_rewiring(c).is_ok()
    }

    fn check_rewiring(&self, c: &RewireCandidate) -> std::result::Result<(), Inapplicable> {
        let [a, b] = c.sources();
        if a.shares_endpoint(&b) {
            return Err(Inapplicable::SharedEndpoint);
        }
        let mut src = [a.u, a.v, b.u, b.v];
        let [x, y] = c.created();
        let mut dst = [x.u, x.v, y.u, y.v];
        src.sort_unstable();
        dst.sort_unstable();
        if src != dst {
            return Err(Inapplicable::EndpointMismatch);
        }
        for e in [a, b] {
            if !self.contains(e) {
                return Err(Inapplicable::MissingSource(e));
            }
        }
        for e in [x, y] {
            if self.contains(e) {
                return Err(Inapplicable::CreatedExists(e));
            }
        }
        Ok(())
    }

    fn insert_edge(&mut self, e: EdgeRef) -> bool {
        let fresh = self.adjacency[e.u].insert(e.v);
        if fresh {
            self.adjacency[e.v].insert(e.u);
            self.edge_count += 1;
        }
        fresh
    }

    fn remove_edge(&mut self, e: EdgeRef) -> bool {
        let present = self.adjacency[e.u].remove(&e.v);
        if present {
            self.adjacency[e.v].remove(&e.u);
            self.edge_count -= 1;
        }
        present
    }

    fn intern(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.label_index.get(label) {
            return id;
        }
        let id = self.adjacency.len();
        self.adjacency.push(BTreeSet::new());
        self.labels.push(label.to_owned());
        self.label_index.insert(label.to_owned(), id);
        id
    }
}

/// Options for [`parse_edge_list_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Drop self-loop lines (counted in the report) instead of failing.
    pub drop_self_loops: bool,
}

/// Counters collected while parsing an edge list.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ParseReport {
    pub lines: usize,
    pub comments: usize,
    pub edges: usize,
    pub duplicates: usize,
    pub self_loops_dropped: usize,
}

/// Parses a whitespace-separated edge list with strict defaults.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    parse_edge_list_with(text, ParseOptions::default()).map(|(g, _)| g)
}

/// Parses an edge list. Lines starting with `#` or `%` and blank lines are
/// skipped. Columns after the first two (weights, timestamps) are ignored.
pub fn parse_edge_list_with(text: &str, opts: ParseOptions) -> Result<(Graph, ParseReport)> {
    let mut g = Graph::new(0);
    let mut report = ParseReport::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        report.lines += 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') || trimmed.starts_with('%') {
            report.comments += 1;
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected two node labels, got `{trimmed}`"),
                })
            }
        };
        if a == b {
            if opts.drop_self_loops {
                report.self_loops_dropped += 1;
                continue;
            }
            return Err(Error::SelfLoop {
                line,
                label: a.to_owned(),
            });
        }
        let ia = g.intern(a);
        let ib = g.intern(b);
        if g.insert_edge(EdgeRef::new(ia, ib)) {
            report.edges += 1;
        } else {
            report.duplicates += 1;
        }
    }
    Ok((g, report))
}

pub fn read_edge_list(path: impl AsRef<Path>, opts: ParseOptions) -> Result<(Graph, ParseReport)> {
    let text = fs::read_to_string(path)?;
    parse_edge_list_with(&text, opts)
}

/// Writes `u v` lines by internal id, sorted ascending.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    for e in g.edges() {
        writeln!(out, "{} {}", e.u, e.v)?;
    }
    Ok(())
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::candidates::RewireCandidate;

    #[test]
    fn parses_triangle() {
        let g = parse_edge_list("1 2\n2 3\n3 1\n").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.degree_sequence(), vec![2, 2, 2]);
    }

    #[test]
    fn duplicates_collapse() {
        let (g, report) = parse_edge_list_with("a b\nb a\na b\n", ParseOptions::default()).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(report.duplicates, 2);
        assert_eq!(g.label(0), "a");
        assert_eq!(g.node_id("b"), Some(1));
    }

    #[test]
    fn comments_and_extra_columns() {
        let text = "% konect header\n# comment\n\n10 20 1 123456\n20 30\n";
        let (g, report) = parse_edge_list_with(text, ParseOptions::default()).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(report.comments, 2);
        assert_eq!(g.labels(), &["10", "20", "30"]);
    }

    #[test]
    fn malformed_line_reports_number() {
        match parse_edge_list("1 2\n3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn self_loop_rejected_or_dropped() {
        match parse_edge_list("1 2\nx x\n") {
            Err(Error::SelfLoop { line, label }) => {
                assert_eq!(line, 2);
                assert_eq!(label, "x");
            }
            other => panic!("unexpected {other:?}"),
        }
        let opts = ParseOptions {
            drop_self_loops: true,
        };
        let (g, report) = parse_edge_list_with("1 2\nx x\n", opts).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(report.self_loops_dropped, 1);
    }

    #[test]
    fn degree_sequences() {
        assert_eq!(star(3).degree_sequence(), vec![3, 1, 1, 1]);
        let g = g8();
        let d = g.degree_sequence();
        assert_eq!((d[H1], d[H2], d[L1], d[L4]), (3, 3, 2, 2));
        for l in [L2, L3, L5, L6] {
            assert_eq!(d[l], 1);
        }
        assert_eq!(d.iter().sum::<usize>(), 2 * g.edge_count());
    }

    #[test]
    fn rewiring_g8() {
        let g = g8();
        let c = RewireCandidate::from_parts(
            [EdgeRef::new(H1, L2), EdgeRef::new(H2, L5)],
            [EdgeRef::new(H1, H2), EdgeRef::new(L2, L5)],
            4,
        );
        let h = g.rewired(&c).unwrap();
        assert!(h.has_edge(H1, H2));
        assert!(!h.has_edge(H1, L2));
        assert_eq!(h.degree_sequence(), g.degree_sequence());
        assert_eq!(h.edge_count(), g.edge_count());
        let back = h.rewired(&c.reversed()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn rewiring_blocked_by_existing_edge() {
        let g = path(4);
        let c = RewireCandidate::from_parts(
            [EdgeRef::new(0, 1), EdgeRef::new(2, 3)],
            [EdgeRef::new(0, 3), EdgeRef::new(1, 2)],
            0,
        );
        match g.rewired(&c) {
            Err(Error::Inapplicable(Inapplicable::CreatedExists(e))) => {
                assert_eq!(e, EdgeRef::new(1, 2))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rewiring_shared_endpoint() {
        let g = triangle();
        let c = RewireCandidate::from_parts(
            [EdgeRef::new(0, 1), EdgeRef::new(1, 2)],
            [EdgeRef::new(0, 2), EdgeRef::new(1, 2)],
            0,
        );
        assert!(matches!(
            g.rewired(&c),
            Err(Error::Inapplicable(Inapplicable::SharedEndpoint))
        ));
    }

    #[test]
    fn rewiring_missing_source() {
        let g = g8();
        let c = RewireCandidate::from_parts(
            [EdgeRef::new(H1, L4), EdgeRef::new(H2, L5)],
            [EdgeRef::new(H1, H2), EdgeRef::new(L4, L5)],
            0,
        );
        assert!(matches!(
            g.rewired(&c),
            Err(Error::Inapplicable(Inapplicable::MissingSource(_)))
        ));
    }

    #[test]
    fn components_of_disconnected() {
        let g = Graph::from_edges(5, [(0, 1), (3, 4)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1], vec![2], vec![3, 4]]);
    }

    #[test]
    fn canonical_writer_round_trip() {
        let g = g8();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("0 2\n0 3\n"));
        let h = parse_edge_list(&text).unwrap();
        assert_eq!(h.edge_count(), g.edge_count());
    }
}
