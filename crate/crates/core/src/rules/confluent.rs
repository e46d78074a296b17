//! The polynomial confluent rule: optimal delegation trees with time
//! forgotten. Collapse parallel edges to their best weight, reverse, negate,
//! and let a min-cost arborescence pick every voter's single outgoing hop.

use std::collections::{BTreeMap, BTreeSet};

use crate::axioms::{DelegationSolution, TimedStep};
use crate::graph::{vertices_reaching, TLDGraph};
use crate::rules::arborescence::{min_arborescence, Arc};
use crate::rules::RuleResult;

/// Maximizes total first-edge weight over all confluent (per-vertex unique,
/// tree-shaped) solutions, ignoring time discipline entirely.
///
/// Voters that cannot reach the sink even statically are reported
/// unresolved and the largest reachable subset is solved instead.
pub fn solve_confluent(g: &TLDGraph) -> RuleResult {
    let part = g.classify();
    let sg = g.static_variant();

    // Restrict to non-abstainers and find who can reach the sink at all.
    let eligible: BTreeSet<usize> = part
        .casting
        .iter()
        .chain(part.delegating.iter())
        .copied()
        .collect();
    let mut allowed = eligible.clone();
    allowed.insert(g.sink());
    let reach = vertices_reaching(&sg, g.sink(), &allowed);
    let unresolved: BTreeSet<usize> =
        part.delegating.iter().copied().filter(|v| !reach.contains(v)).collect();

    let members: Vec<usize> = eligible.into_iter().filter(|v| reach.contains(v)).collect();
    if members.is_empty() {
        return RuleResult {
            solution: DelegationSolution::paths(BTreeMap::new()),
            objective: 0,
            unresolved,
        };
    }

    // Dense ids for the arborescence: members first, sink last.
    let mut dense: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, &v) in members.iter().enumerate() {
        dense.insert(v, i);
    }
    let root = members.len();
    dense.insert(g.sink(), root);

    // Reversed and negated arcs; the representative temporal edge id is the
    // key, which both breaks ties deterministically and maps the tree back.
    let mut arcs: Vec<Arc> = Vec::new();
    for a in sg.arcs() {
        let (Some(&t), Some(&h)) = (dense.get(&a.tail), dense.get(&a.head)) else { continue };
        if t == root {
            continue; // nothing leaves the sink
        }
        arcs.push(Arc { tail: h, head: t, weight: -(a.weight as i64), key: a.edge });
    }

    let chosen = min_arborescence(root + 1, root, &arcs)
        .expect("every member was pre-filtered to reach the sink");

    // chosen[dense voter] = temporal edge of the voter's outgoing hop
    let mut hop: BTreeMap<usize, TimedStep> = BTreeMap::new();
    for (&v, &i) in &dense {
        if i == root {
            continue;
        }
        let edge = chosen[&i];
        hop.insert(v, TimedStep { edge, time: g.edge(edge).start });
    }

    let mut journeys: BTreeMap<usize, Vec<TimedStep>> = BTreeMap::new();
    let mut objective = 0u64;
    for &v in &part.delegating {
        if !reach.contains(&v) {
            continue;
        }
        let mut steps = Vec::new();
        let mut cur = v;
        while cur != g.sink() {
            let step = hop[&cur];
            steps.push(step);
            cur = g.edge(step.edge).head;
        }
        objective += g.edge(steps[0].edge).weight;
        journeys.insert(v, steps);
    }

    RuleResult { solution: DelegationSolution::paths(journeys), objective, unresolved }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::{is_delegation_tree, utility};
    use crate::graph::GraphBuilder;

    /// Everything happens in the single final round: d1 may hop straight to
    /// the caster for 1 or ride through d2 for 3 + 1.
    fn last_round_triangle() -> TLDGraph {
        let mut b = GraphBuilder::new(1);
        let d1 = b.vertex("d1");
        let d2 = b.vertex("d2");
        let c = b.vertex("c");
        b.edge(d1, c, (1, 1), 1);
        b.edge(d1, d2, (1, 1), 3);
        b.edge(d2, c, (1, 1), 1);
        b.edge(c, GraphBuilder::SINK, (1, 1), 0);
        b.retrospective();
        b.build().unwrap()
    }

    #[test]
    fn picks_the_heavier_of_two_spanning_trees() {
        let g = last_round_triangle();
        let result = solve_confluent(&g);
        assert!(result.fully_resolved());
        assert_eq!(result.objective, 4, "3 (d1->d2) + 1 (d2->c) beats 1 + 1");
        assert_eq!(result.objective, utility(&g, &result.solution));
        assert!(is_delegation_tree(&g, &result.solution));
        assert!(result.report(&g).is_valid());
        let d1 = g.vertex_named("d1").unwrap();
        let first = result.solution.journeys[&d1][0];
        assert_eq!(g.edge(first.edge).label, "d1>d2@1");
    }

    #[test]
    fn single_option_chain_scores_its_weight() {
        let mut b = GraphBuilder::new(2);
        let c = b.vertex("c");
        let d = b.vertex("d");
        b.edge(c, GraphBuilder::SINK, (1, 2), 0);
        b.edge(d, c, (2, 2), 2);
        b.delta(d, 2, 1);
        let g = b.build().unwrap();
        let result = solve_confluent(&g);
        assert_eq!(result.objective, 2);
        assert!(result.fully_resolved());
    }

    #[test]
    fn mutual_delegators_with_no_caster_are_unresolved() {
        let mut b = GraphBuilder::new(1);
        let d1 = b.vertex("d1");
        let d2 = b.vertex("d2");
        let c = b.vertex("c");
        b.edge(d1, d2, (1, 1), 2);
        b.edge(d2, d1, (1, 1), 2);
        b.edge(c, GraphBuilder::SINK, (1, 1), 0);
        b.retrospective();
        let g = b.build().unwrap();
        let result = solve_confluent(&g);
        assert_eq!(result.unresolved, BTreeSet::from([d1, d2]));
        assert_eq!(result.objective, 0);
        assert!(result.solution.journeys.is_empty());
        assert!(result.report(&g).is_clean(), "partial result must still validate");
    }

    #[test]
    fn partial_resolution_keeps_the_reachable_side() {
        // d1 reaches c; d2 only points at d3 and back.
        let mut b = GraphBuilder::new(1);
        let d1 = b.vertex("d1");
        let d2 = b.vertex("d2");
        let d3 = b.vertex("d3");
        let c = b.vertex("c");
        b.edge(d1, c, (1, 1), 2);
        b.edge(d2, d3, (1, 1), 5);
        b.edge(d3, d2, (1, 1), 5);
        b.edge(c, GraphBuilder::SINK, (1, 1), 0);
        b.retrospective();
        let g = b.build().unwrap();
        let result = solve_confluent(&g);
        assert_eq!(result.unresolved, BTreeSet::from([d2, d3]));
        assert_eq!(result.objective, 2);
        assert_eq!(result.resolved_count(), 1);
        assert!(result.solution.journeys.contains_key(&d1));
    }

    #[test]
    fn parallel_edges_collapse_to_their_best_weight() {
        let mut b = GraphBuilder::new(3);
        let c = b.vertex("c");
        let d = b.vertex("d");
        b.edge(c, GraphBuilder::SINK, (1, 3), 0);
        b.edge(d, c, (1, 1), 1);
        b.edge(d, c, (3, 3), 4);
        b.retrospective();
        let g = b.build().unwrap();
        let result = solve_confluent(&g);
        assert_eq!(result.objective, 4);
        let first = result.solution.journeys[&d][0];
        assert_eq!(g.edge(first.edge).interval(), (3, 3), "the heavy copy is the representative");
    }
}
