use std::cmp::Reverse;
use std::collections::BTreeSet;

use super::{assortative_reconnection, PlanBuilder, RewirePlan, StrategyConfig};
use crate::error::Result;
use crate::graph::{EdgeRef, Graph};

type Entry = (Reverse<usize>, EdgeRef);

fn entry(g: &Graph, e: EdgeRef) -> Entry {
    (Reverse(g.degree(e.u).abs_diff(g.degree(e.v))), e)
}

/// Edge-difference assortative rewiring.
///
/// Keeps the live edges ordered by endpoint-degree difference (largest
/// first, ties by edge). The top edge is paired with the next edge that
/// admits a strictly improving high-high/low-low reconnection; if none does,
/// the top edge leaves the list for good. Created edges join the list.
pub fn run_eda(g: &Graph, cfg: &StrategyConfig) -> Result<RewirePlan> {
    let k = cfg.budget.resolve(g.edge_count())?;
    let mut plan = PlanBuilder::new(g);
    let mut live: BTreeSet<Entry> = g.edges().map(|e| entry(g, e)).collect();

    while plan.len() < k && live.len() >= 2 {
        let top = *live.first().expect("non-empty");
        let found = live.iter().skip(1).find_map(|&(_, e)| {
            let c = assortative_reconnection(&plan.graph, top.1, e)?;
            (c.value > 0 && plan.graph.can_apply(&c)).then_some(c)
        });
        match found {
            Some(c) => {
                plan.try_apply(c);
                for e in c.sources() {
                    live.remove(&entry(g, e));
                }
                for e in c.created() {
                    live.insert(entry(g, e));
                }
            }
            None => {
                live.remove(&top);
            }
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
        let plan = run_eda(&g8(), &StrategyConfig::new(Budget::Count(1))).unwrap();
        assert_eq!(plan.delta_s, 4);
        let c = plan.steps[0];
        assert_eq!(c.sources(), [EdgeRef::new(H1, L2), EdgeRef::new(H2, L5)]);
        assert_eq!(c.created(), [EdgeRef::new(H1, H2), EdgeRef::new(L2, L5)]);
    }

    #[test]
    fn star_has_no_moves() {
        let plan = run_eda(&star(3), &StrategyConfig::new(Budget::Count(2))).unwrap();
        assert!(plan.is_empty());
        assert!(plan.truncated);
    }

    #[test]
    fn every_step_improves() {
        let g = crate::generators::erdos_renyi(40, 80, 3).unwrap();
        let plan = run_eda(&g, &StrategyConfig::new(Budget::Count(30))).unwrap();
        assert!(plan.steps.iter().all(|c| c.value > 0));
        assert_eq!(plan.final_graph.degree_sequence(), g.degree_sequence());
    }
}
