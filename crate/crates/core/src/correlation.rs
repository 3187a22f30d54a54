//! Degree-correlation measures.
//!
//! The assortativity coefficient is accumulated in exact integer arithmetic.
//! With `M` edges, endpoint degrees `j, k`, and the sums
//!
//! ```text
//! s  = Σ j·k          (the s-metric)
//! S1 = Σ (j + k)
//! S2 = Σ (j² + k²)
//! ```
//!
//! the coefficient is `r = (4M·s − S1²) / (2M·S2 − S1²)`. Both `S1` and `S2`
//! are functions of the degree sequence alone, so a degree-preserving rewiring
//! moves `r` only through `s`, and a change `Δs` maps to
//! `Δr = 4M·Δs / (2M·S2 − S1²)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeRef, Graph};

/// How the endpoints of two edges `(i, j)`, `(k, l)` are reconnected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Orientation {
    /// `(i, k)` and `(j, l)`.
    Cross,
    /// `(i, l)` and `(j, k)`.
    Parallel,
}

impl Orientation {
    pub const BOTH: [Orientation; 2] = [Orientation::Cross, Orientation::Parallel];

    /// The two edges produced by rewiring `e1`, `e2` this way.
    pub fn created(self, e1: EdgeRef, e2: EdgeRef) -> [EdgeRef; 2] {
        let (i, j, k, l) = (e1.u, e1.v, e2.u, e2.v);
        match self {
            Orientation::Cross => [EdgeRef::new(i, k), EdgeRef::new(j, l)],
            Orientation::Parallel => [EdgeRef::new(i, l), EdgeRef::new(j, k)],
        }
    }
}

/// Change in the s-metric when `(i,j),(k,l)` is rewired, from the four degrees.
pub fn value_from_degrees(di: u64, dj: u64, dk: u64, dl: u64, orientation: Orientation) -> i64 {
    let (di, dj, dk, dl) = (di as i64, dj as i64, dk as i64, dl as i64);
    let before = di * dj + dk * dl;
    let after = match orientation {
        Orientation::Cross => di * dk + dj * dl,
        Orientation::Parallel => di * dl + dj * dk,
    };
    after - before
}

/// Change in the s-metric produced by rewiring the node-disjoint edges `e1`, `e2`.
pub fn candidate_value(
    g: &Graph,
    e1: EdgeRef,
    e2: EdgeRef,
    orientation: Orientation,
) -> Result<i64> {
    if e1.shares_endpoint(&e2) {
        return Err(Error::InvalidPair(e1, e2));
    }
    let d = |x| g.degree(x) as u64;
    Ok(value_from_degrees(
        d(e1.u),
        d(e1.v),
        d(e2.u),
        d(e2.v),
        orientation,
    ))
}

/// Sum over edges of the product of endpoint degrees.
pub fn s_metric(g: &Graph) -> u64 {
    g.edges()
        .map(|e| (g.degree(e.u) * g.degree(e.v)) as u64)
        .sum()
}

/// Integer accumulators behind the assortativity coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssortativityParts {
    pub edges: u64,
    pub s: u64,
    pub sum_first: u64,
    pub sum_second: u64,
}

impl AssortativityParts {
    pub fn of(g: &Graph) -> Self {
        let mut parts = AssortativityParts {
            edges: 0,
            s: 0,
            sum_first: 0,
            sum_second: 0,
        };
        for e in g.edges() {
            let (j, k) = (g.degree(e.u) as u64, g.degree(e.v) as u64);
            parts.edges += 1;
            parts.s += j * k;
            parts.sum_first += j + k;
            parts.sum_second += j * j + k * k;
        }
        parts
    }

    /// `4M·s − S1²`.
    pub fn numerator_scaled(&self) -> i128 {
        let m = self.edges as i128;
        let s1 = self.sum_first as i128;
        4 * m * self.s as i128 - s1 * s1
    }

    /// `2M·S2 − S1²`; zero exactly when every edge joins equal-degree nodes
    /// of one common degree.
    pub fn denominator_scaled(&self) -> i128 {
        let m = self.edges as i128;
        let s1 = self.sum_first as i128;
        2 * m * self.sum_second as i128 - s1 * s1
    }

    /// The real-valued denominator of r, `denominator_scaled / 4M²`.
    pub fn denom(&self) -> f64 {
        let m = self.edges as f64;
        self.denominator_scaled() as f64 / (4.0 * m * m)
    }

    pub fn assortativity(&self) -> Result<f64> {
        if self.edges == 0 {
            return Err(Error::UndefinedMetric(
                "assortativity of an empty graph".into(),
            ));
        }
        let den = self.denominator_scaled();
        if den == 0 {
            return Err(Error::UndefinedMetric(
                "assortativity denominator is zero (all endpoint degrees equal)".into(),
            ));
        }
        Ok(self.numerator_scaled() as f64 / den as f64)
    }

    /// Assortativity after the s-metric shifts by `delta_s`.
    pub fn assortativity_shifted(&self, delta_s: i64) -> Result<f64> {
        let shifted = AssortativityParts {
            s: (self.s as i64 + delta_s) as u64,
            ..*self
        };
        shifted.assortativity()
    }

    /// `Δr` implied by a change `delta_s` under any degree-preserving rewiring.
    pub fn delta_r(&self, delta_s: i64) -> Result<f64> {
        let den = self.denominator_scaled();
        if self.edges == 0 || den == 0 {
            return Err(Error::UndefinedMetric(
                "assortativity denominator is zero".into(),
            ));
        }
        Ok((4 * self.edges as i128 * delta_s as i128) as f64 / den as f64)
    }
}

/// Pearson correlation of endpoint degrees over the edge list, each edge
/// contributing both endpoint orderings.
pub fn assortativity(g: &Graph) -> Result<f64> {
    AssortativityParts::of(g).assortativity()
}

/// Fractional (average) ranks starting at 1; tied values share the mean of
/// their rank block.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && xs[order[end]] == xs[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = avg;
        }
        start = end;
    }
    ranks
}

/// Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: {} vs {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.is_empty() {
        return Err(Error::UndefinedMetric("correlation of empty lists".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedMetric(
            "correlation of a constant list".into(),
        ));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman_rank_corr(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: {} vs {}",
            xs.len(),
            ys.len()
        )));
    }
    pearson(&average_ranks(xs), &average_ranks(ys))
}

/// Rank analogue of [`assortativity`]: Spearman correlation over the `2M`
/// ordered endpoint-degree pairs.
pub fn spearman_degree_correlation(g: &Graph) -> Result<f64> {
    let mut xs = Vec::with_capacity(2 * g.edge_count());
    let mut ys = Vec::with_capacity(2 * g.edge_count());
    for e in g.edges() {
        let (a, b) = (g.degree(e.u) as f64, g.degree(e.v) as f64);
        xs.extend([a, b]);
        ys.extend([b, a]);
    }
    spearman_rank_corr(&xs, &ys)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub assortativity: f64,
    pub s_metric: u64,
    pub spearman_degree: f64,
    pub denom: f64,
}

pub fn correlation_report(g: &Graph) -> Result<CorrelationReport> {
    let parts = AssortativityParts::of(g);
    Ok(CorrelationReport {
        assortativity: parts.assortativity()?,
        s_metric: parts.s,
        spearman_degree: spearman_degree_correlation(g)?,
        denom: parts.denom(),
    })
}
