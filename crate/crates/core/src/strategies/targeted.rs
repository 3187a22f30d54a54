use super::{PlanBuilder, RewirePlan, StrategyConfig};
use crate::candidates::RewireCandidate;
use crate::error::Result;
use crate::graph::{EdgeRef, Graph, NodeId};

/// Lowest-degree member of `nodes`, ties by smallest id.
fn min_degree<I: IntoIterator<Item = NodeId>>(g: &Graph, nodes: I) -> Option<NodeId> {
    nodes.into_iter().min_by_key(|&x| (g.degree(x), x))
}

/// Targeted assortative rewiring.
///
/// Scans hub/target pairs `(a, z)` over the degree-descending node list
/// (ties by id). For a non-adjacent target `z`, `y` is the weakest neighbour
/// of `z` and `b` the weakest neighbour of `a` not adjacent to `y`; the pair
/// `(a,b),(z,y)` becomes `(a,z),(b,y)` when `z` outranks both `y` and `b`.
/// The scan can finish before the budget is spent.
pub fn run_ta(g: &Graph, cfg: &StrategyConfig) -> Result<RewirePlan> {
    let k = cfg.budget.resolve(g.edge_count())?;
    let mut plan = PlanBuilder::new(g);
    let mut order: Vec<NodeId> = (0..g.node_count()).collect();
    order.sort_by_key(|&x| (std::cmp::Reverse(g.degree(x)), x));
    let n = order.len();

    let (mut p, mut q) = (0usize, 1usize);
    while plan.len() < k && p + 1 < n {
        if q >= n {
            p += 1;
            q = p + 1;
            continue;
        }
        let (a, z) = (order[p], order[q]);
        q += 1;
        let cur = &plan.graph;
        if cur.has_edge(a, z) {
            continue;
        }
        let Some(y) = min_degree(cur, cur.neighbors(z).iter().copied()) else {
            continue;
        };
        let y_nbrs = cur.neighbors(y);
        let Some(b) = min_degree(
            cur,
            cur.neighbors(a)
                .iter()
                .copied()
                .filter(|&x| x != y && !y_nbrs.contains(&x)),
        ) else {
            continue;
        };
        let (dz, dy, db) = (g.degree(z), g.degree(y), g.degree(b));
        if dz > dy && dz > db {
            let c = RewireCandidate::reconnect(
                cur,
                [EdgeRef::new(a, b), EdgeRef::new(z, y)],
                a,
                z,
                b,
                y,
            );
            let applied = plan.try_apply(c);
            debug_assert!(applied);
        }
    }
    Ok(plan.finish(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::strategies::Budget;

    #[test]
    fn g8_first_step() {
        let plan = run_ta(&g8(), &StrategyConfig::new(Budget::Count(1))).unwrap();
        assert_eq!(plan.delta_s, 4);
        let c = plan.steps[0];
        assert_eq!(c.sources(), [EdgeRef::new(H1, L2), EdgeRef::new(H2, L5)]);
        assert_eq!(c.created(), [EdgeRef::new(H1, H2), EdgeRef::new(L2, L5)]);
    }

    #[test]
    fn star_has_no_moves() {
        let plan = run_ta(&star(3), &StrategyConfig::new(Budget::Count(3))).unwrap();
        assert!(plan.is_empty());
    }

    #[test]
    fn steps_are_improving() {
        let g = crate::generators::barabasi_albert(60, 2, 9).unwrap();
        let plan = run_ta(&g, &StrategyConfig::new(Budget::Count(20))).unwrap();
        assert!(!plan.is_empty());
        assert!(plan.steps.iter().all(|c| c.value > 0));
    }
}
