//! Exact optimal confluent time-conscious resolution.
//!
//! The graph is rewritten as a directed tree-cover instance
//! ([`crate::reductions::to_steiner`]), solved by the subset dynamic program
//! ([`crate::reductions::steiner_dp_on`]), and the winning tree is mapped back
//! to one journey per delegating voter. The optimum is exact, at the price of
//! a runtime exponential in the number of delegators — hence the cap.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::axioms::{is_confluent, is_time_conscious_path, utility, DelegationSolution, TimedStep};
use crate::error::{Error, Result};
use crate::graph::TLDGraph;
use crate::reductions::{steiner_dp_on, to_steiner, SteinerInstance, SteinerVertex};
use crate::rules::RuleResult;

/// Largest delegator count [`solve_exact_tc_confluent`] accepts. The subset
/// program keeps a table per delegator subset, so this bounds memory at
/// 2^16 rows; callers who know better can raise it explicitly.
pub const DEFAULT_DELEGATOR_CAP: usize = 16;

/// [`solve_exact_tc_confluent_with_cap`] with the default delegator cap.
pub fn solve_exact_tc_confluent(g: &TLDGraph) -> Result<RuleResult> {
    solve_exact_tc_confluent_with_cap(g, DEFAULT_DELEGATOR_CAP)
}

/// Maximum-utility confluent resolution in which every journey respects the
/// trust horizons. Delegating voters with no horizon-respecting route to the
/// sink are reported unresolved and the cover is optimized over the rest.
pub fn solve_exact_tc_confluent_with_cap(g: &TLDGraph, cap: usize) -> Result<RuleResult> {
    let part = g.classify();
    if part.delegating.len() > cap {
        return Err(Error::CapExceeded { delegators: part.delegating.len(), cap });
    }

    let inst = to_steiner(g);
    let reachable = forward_closure(&inst);

    // A special the root can't reach admits no covering path at all, which on
    // the election side means the voter has no horizon-respecting route to
    // the sink. Such voters stay unresolved and drop out of the cover.
    let mut kept_terminals: Vec<usize> = Vec::new();
    let mut kept_voters: Vec<usize> = Vec::new();
    let mut unresolved: BTreeSet<usize> = BTreeSet::new();
    for &v in &part.delegating {
        let s = inst.special(v).expect("every delegator owns a special");
        if reachable[s] {
            kept_terminals.push(s);
            kept_voters.push(v);
        } else {
            unresolved.insert(v);
        }
    }

    let (cost, tree) = steiner_dp_on(&inst, &kept_terminals)?;

    // Walking a root→special path visits occurrences from the ballot hop
    // backwards to the voter's own first hop. Collect, per tail vertex, the
    // hop the tree assigns it; when branches picked different occurrences of
    // the same tail (parallel zero-cost ballot copies, typically) keep the
    // earliest and re-point everyone at it.
    let mut chosen: BTreeMap<usize, TimedStep> = BTreeMap::new();
    for path in tree.paths.values() {
        for &ai in path {
            let head = inst.arcs()[ai].head;
            if let SteinerVertex::Occurrence { edge, time } = inst.vertices()[head] {
                let step = TimedStep { edge, time };
                let tail = g.edge(edge).tail;
                chosen
                    .entry(tail)
                    .and_modify(|cur| {
                        if (step.time, step.edge) < (cur.time, cur.edge) {
                            *cur = step;
                        }
                    })
                    .or_insert(step);
            }
        }
    }

    // Re-trace every kept voter through the per-vertex hops. Re-pointing is
    // only sound if the rewired pairs still clear the horizons, so each
    // journey is re-validated from scratch.
    let hop_bound = g.voter_count() + 1;
    let mut journeys: BTreeMap<usize, Vec<TimedStep>> = BTreeMap::new();
    for &voter in &kept_voters {
        let mut journey: Vec<TimedStep> = Vec::new();
        let mut here = voter;
        while here != g.sink() {
            let Some(&step) = chosen.get(&here) else {
                return Err(Error::NonConfluentBackMap(format!(
                    "no hop recorded for `{}` on the route out of `{}`",
                    g.name(here),
                    g.name(voter)
                )));
            };
            journey.push(step);
            here = g.edge(step.edge).head;
            if journey.len() > hop_bound {
                return Err(Error::NonConfluentBackMap(format!(
                    "the route out of `{}` never reaches the sink",
                    g.name(voter)
                )));
            }
        }
        if !is_time_conscious_path(g, &journey)? {
            return Err(Error::NonConfluentBackMap(format!(
                "merging branch hops broke a horizon on the route out of `{}`",
                g.name(voter)
            )));
        }
        journeys.insert(voter, journey);
    }

    let solution = DelegationSolution::paths(journeys);
    let objective = utility(g, &solution);

    // Tree cost and journey utility are two sides of the same ledger: each
    // covered voter contributes max+min on one side and her hop's weight on
    // the other.
    let covered: u64 = kept_voters
        .iter()
        .map(|&v| {
            let (max, min) = inst.bounds(v).expect("kept voters have weight bounds");
            max + min
        })
        .sum();
    debug_assert_eq!(covered - cost, objective, "tree cost disagrees with journey utility");
    debug_assert!(is_confluent(g, &solution));

    Ok(RuleResult { solution, objective, unresolved })
}

/// Which instance vertices the root reaches going forward along the arcs.
fn forward_closure(inst: &SteinerInstance) -> Vec<bool> {
    let n = inst.vertices().len();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for arc in inst.arcs() {
        out[arc.tail].push(arc.head);
    }
    let mut seen = vec![false; n];
    seen[inst.root()] = true;
    let mut queue = VecDeque::from([inst.root()]);
    while let Some(v) = queue.pop_front() {
        for &u in &out[v] {
            if !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::rules::{oracle_tc_confluent, RuleResult};

    fn step(g: &TLDGraph, label: &str, time: u32) -> TimedStep {
        TimedStep { edge: g.edge_labeled(label).expect(label).id, time }
    }

    #[test]
    fn a_single_chain_resolves_at_full_weight() {
        let mut b = GraphBuilder::new(2);
        let d = b.vertex("d");
        let c = b.vertex("c");
        b.edge(d, c, (1, 2), 2);
        b.edge(c, GraphBuilder::SINK, (1, 2), 0);
        b.retrospective();
        let g = b.build().unwrap();

        let rr = solve_exact_tc_confluent(&g).unwrap();
        assert!(rr.fully_resolved());
        assert_eq!(rr.objective, 2);
        let journey = &rr.solution.journeys[&d];
        assert_eq!(journey.len(), 2);
        assert_eq!(g.edge(journey[0].edge).tail, d);
        assert!(rr.report(&g).is_clean());
    }

    #[test]
    fn the_layered_fixture_routes_past_the_abstainer() {
        // `x` could hand off to the abstainer `a` late or to the caster `c`
        // early; only the early hop leads anywhere, and `d` must then reach
        // back one instant to ride it.
        let mut b = GraphBuilder::new(2);
        let d = b.vertex("d");
        let x = b.vertex("x");
        let c = b.vertex("c");
        let a = b.vertex("a");
        b.edge(d, x, (2, 2), 1);
        b.edge(x, a, (2, 2), 1);
        b.edge(x, c, (1, 1), 2);
        b.edge(c, GraphBuilder::SINK, (1, 2), 0);
        b.retrospective();
        let g = b.build().unwrap();
        assert!(g.classify().abstaining.contains(&a));

        let rr = solve_exact_tc_confluent(&g).unwrap();
        assert!(rr.fully_resolved());
        assert_eq!(rr.objective, 3);
        assert_eq!(
            rr.solution.journeys[&d],
            vec![step(&g, "d>x@2", 2), step(&g, "x>c@1", 1), step(&g, "c>SINK@1", 1)]
        );
        assert_eq!(
            rr.solution.journeys[&x],
            vec![step(&g, "x>c@1", 1), step(&g, "c>SINK@1", 1)]
        );
        assert!(rr.report(&g).is_clean());
    }

    #[test]
    fn branches_meeting_at_one_caster_share_a_ballot_instant() {
        // d1 forces the ballot at instant 1; d2 alone would be happy with
        // instant 2. The merged solution must put the caster's hop at a
        // single instant that works for both. The late edge into `a` only
        // keeps d1 delegating; it leads nowhere.
        let mut b = GraphBuilder::new(2);
        let d1 = b.vertex("d1");
        let d2 = b.vertex("d2");
        let c = b.vertex("c");
        let a = b.vertex("a");
        b.edge(d1, c, (1, 1), 1);
        b.edge(d1, a, (2, 2), 1);
        b.edge(d2, c, (2, 2), 1);
        b.edge(c, GraphBuilder::SINK, (1, 2), 0);
        b.retrospective();
        let g = b.build().unwrap();

        let rr = solve_exact_tc_confluent(&g).unwrap();
        assert!(rr.fully_resolved());
        assert_eq!(rr.objective, 2);
        let ballot = step(&g, "c>SINK@1", 1);
        assert_eq!(*rr.solution.journeys[&d1].last().unwrap(), ballot);
        assert_eq!(*rr.solution.journeys[&d2].last().unwrap(), ballot);
        assert!(is_confluent(&g, &rr.solution));
        assert!(rr.report(&g).is_clean());
    }

    #[test]
    fn the_delegator_cap_is_enforced() {
        let mut b = GraphBuilder::new(1);
        let d1 = b.vertex("d1");
        let d2 = b.vertex("d2");
        let c = b.vertex("c");
        b.edge(d1, c, (1, 1), 1);
        b.edge(d2, c, (1, 1), 1);
        b.edge(c, GraphBuilder::SINK, (1, 1), 0);
        b.retrospective();
        let g = b.build().unwrap();

        match solve_exact_tc_confluent_with_cap(&g, 1) {
            Err(Error::CapExceeded { delegators, cap }) => {
                assert_eq!((delegators, cap), (2, 1));
            }
            other => panic!("expected the cap to trip, got {other:?}"),
        }
        assert!(solve_exact_tc_confluent_with_cap(&g, 2).is_ok());
    }

    #[test]
    fn voters_walled_off_by_abstainers_stay_unresolved() {
        let mut b = GraphBuilder::new(2);
        let d1 = b.vertex("d1");
        let z = b.vertex("z");
        let y = b.vertex("y");
        let c = b.vertex("c");
        b.edge(d1, c, (1, 2), 1);
        b.edge(z, y, (1, 2), 5); // y never moves, so this path is a dead end
        b.edge(c, GraphBuilder::SINK, (1, 2), 0);
        b.retrospective();
        let g = b.build().unwrap();

        let rr = solve_exact_tc_confluent(&g).unwrap();
        assert_eq!(rr.unresolved, [z].into());
        assert_eq!(rr.objective, 1);
        assert!(rr.solution.journeys.contains_key(&d1));
        assert!(!rr.solution.journeys.contains_key(&z));
        assert!(rr.report(&g).is_clean());
    }

    fn agree(exact: &RuleResult, oracle: &RuleResult) {
        assert_eq!(exact.unresolved, oracle.unresolved);
        assert_eq!(exact.objective, oracle.objective);
    }

    #[test]
    fn the_exact_rule_matches_the_tree_oracle_on_random_graphs() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;

        let mut rng = ChaCha8Rng::seed_from_u64(0xe86c7);
        let mut solved = 0usize;
        let mut partial = 0usize;
        for round in 0..200 {
            let n = rng.random_range(2..=5);
            let lifespan = rng.random_range(1..=3u32);
            let mut b = GraphBuilder::new(lifespan);
            let ids: Vec<usize> = (0..n).map(|i| b.vertex(&format!("v{i}"))).collect();
            for &v in &ids {
                if rng.random_bool(0.35) {
                    let s = rng.random_range(1..=lifespan);
                    b.edge(v, GraphBuilder::SINK, (s, lifespan), 0);
                }
            }
            for &v in &ids {
                for &u in &ids {
                    if v != u && rng.random_bool(0.4) {
                        let t = rng.random_range(1..=lifespan);
                        b.edge(v, u, (t, t), rng.random_range(1..=4));
                    }
                }
            }
            b.retrospective();
            let Ok(g) = b.build() else { continue };
            if g.event_count() > 24 {
                continue;
            }

            let exact = solve_exact_tc_confluent(&g)
                .unwrap_or_else(|e| panic!("round {round}: exact failed: {e}"));
            let oracle = oracle_tc_confluent(&g)
                .unwrap_or_else(|e| panic!("round {round}: oracle failed: {e}"));
            agree(&exact, &oracle);
            assert!(exact.report(&g).is_clean(), "round {round}: dirty report");
            assert!(is_confluent(&g, &exact.solution), "round {round}: not confluent");

            if exact.fully_resolved() && !g.classify().delegating.is_empty() {
                solved += 1;
            }
            if !exact.unresolved.is_empty() {
                partial += 1;
            }
        }
        assert!(solved >= 20, "only {solved} fully resolved instances");
        assert!(partial >= 5, "only {partial} partial instances");
    }
}
