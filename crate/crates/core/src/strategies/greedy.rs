use super::{PlanBuilder, RewirePlan, StrategyConfig};
use crate::candidates::{EpStream, RewireCandidate};
use crate::error::Result;
use crate::graph::Graph;

/// Greedy assortative rewiring.
///
/// Walks the candidate set in descending value order and accepts every
/// candidate still applicable to the evolving graph, until `k` rewirings are
/// made or the candidates run out.
pub fn run_ga(g: &Graph, cfg: &StrategyConfig) -> Result<RewirePlan> {
    let k = cfg.budget.resolve(g.edge_count())?;
    if k == 0 {
        return Ok(PlanBuilder::new(g).finish(0));
    }
    Ok(greedy_from(g, k, EpStream::new(g)))
}

/// Greedy pass over an explicit candidate order.
pub fn greedy_from<I>(g: &Graph, k: usize, ordered: I) -> RewirePlan
where
    I: IntoIterator<Item = RewireCandidate>,
{
    let mut plan = PlanBuilder::new(g);
    for c in ordered {
        if plan.len() >= k {
            break;
        }
        plan.try_apply(c);
    }
    plan.finish(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::candidates::{admissible, enumerate_ep};
    use crate::graph::fixtures::*;
    use crate::graph::EdgeRef;
    use crate::strategies::Budget;

    #[test]
    fn g8_one_step() {
        let g = g8();
        let plan = run_ga(&g, &StrategyConfig::new(Budget::Count(1))).unwrap();
        assert_eq!(plan.delta_s, 4);
        assert_eq!(plan.steps[0].created_a, EdgeRef::new(H1, H2));
        assert_eq!(plan.steps[0].source_a, EdgeRef::new(H1, L2));
        let r = crate::correlation::assortativity(&plan.final_graph).unwrap();
        assert!((r + 1.0 / 34.0).abs() < 1e-12);
    }

    #[test]
    fn g8_two_steps_saturate() {
        let g = g8();
        let plan = run_ga(&g, &StrategyConfig::new(Budget::Count(2))).unwrap();
        assert_eq!(plan.delta_s, 5);
        assert_eq!(plan.steps[1].value, 1);
        assert!(plan.steps[1].sources().contains(&EdgeRef::new(L1, L4)));
        assert!(admissible(&plan.steps));
        assert!(!plan.truncated);

        let plan3 = run_ga(&g, &StrategyConfig::new(Budget::Count(3))).unwrap();
        assert_eq!(plan3.delta_s, 5);
        assert!(plan3.truncated);
    }

    #[test]
    fn zero_budget_is_empty() {
        let plan = run_ga(&g8(), &StrategyConfig::new(Budget::Count(0))).unwrap();
        assert!(plan.is_empty());
        assert_eq!(plan.delta_r, Some(0.0));
    }

    #[test]
    fn stream_and_materialized_agree() {
        let g = g8();
        for k in 1..4 {
            let a = greedy_from(&g, k, enumerate_ep(&g));
            let b = run_ga(&g, &StrategyConfig::new(Budget::Count(k))).unwrap();
            assert_eq!(a.steps, b.steps);
        }
    }
}
