//! Solution types and the axiom checkers: journey chaining disciplines,
//! solution validity, confluence, utility and representation weights.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::TLDGraph;

/// One hop of a journey: a temporal edge traversed at a chosen instant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct TimedStep {
    pub edge: usize,
    pub time: u32,
}

/// A delegation resolution: one journey per resolved delegating voter.
///
/// Journeys of casting voters (the trivial ballot hop) and abstainers never
/// appear. `walks_allowed` records which chaining discipline produced the
/// journeys: paths forbid vertex repeats, walks only forbid reusing an
/// `(edge, instant)` event.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DelegationSolution {
    pub journeys: BTreeMap<usize, Vec<TimedStep>>,
    pub walks_allowed: bool,
}

impl DelegationSolution {
    pub fn paths(journeys: BTreeMap<usize, Vec<TimedStep>>) -> Self {
        DelegationSolution { journeys, walks_allowed: false }
    }

    pub fn walks(journeys: BTreeMap<usize, Vec<TimedStep>>) -> Self {
        DelegationSolution { journeys, walks_allowed: true }
    }
}

/// Confirms the journey is a chain of known edges laid head-to-tail.
fn chain(g: &TLDGraph, journey: &[TimedStep]) -> Result<()> {
    for step in journey {
        if step.edge >= g.edges().len() {
            return Err(Error::BrokenChain(format!("unknown edge #{}", step.edge)));
        }
    }
    for pair in journey.windows(2) {
        let first = g.edge(pair[0].edge);
        let second = g.edge(pair[1].edge);
        if first.head != second.tail {
            return Err(Error::BrokenChain(format!(
                "`{}` ends at `{}` but `{}` starts at `{}`",
                first.label,
                g.name(first.head),
                second.label,
                g.name(second.tail)
            )));
        }
    }
    Ok(())
}

fn times_live(g: &TLDGraph, journey: &[TimedStep]) -> bool {
    journey.iter().all(|s| g.edge(s.edge).available_at(s.time))
}

/// True iff each consecutive pair steps backwards in time no further than the
/// earlier edge's tail tolerates: `t_i ≥ t_{i+1} ≥ t_i − δ_{v_i}(t_i)`, with
/// `v_i` the tail of the earlier edge. Times must lie in their intervals.
pub fn is_time_conscious_path(g: &TLDGraph, journey: &[TimedStep]) -> Result<bool> {
    chain(g, journey)?;
    if !times_live(g, journey) {
        return Ok(false);
    }
    for pair in journey.windows(2) {
        let (t1, t2) = (pair[0].time, pair[1].time);
        let tail = g.edge(pair[0].edge).tail;
        let reach_back = g.horizon(tail, t1);
        if !(t1 >= t2 && t2 >= t1.saturating_sub(reach_back)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff times are non-decreasing and live.
pub fn is_time_respecting_path(g: &TLDGraph, journey: &[TimedStep]) -> Result<bool> {
    chain(g, journey)?;
    if !times_live(g, journey) {
        return Ok(false);
    }
    Ok(journey.windows(2).all(|pair| pair[0].time <= pair[1].time))
}

/// True iff each consecutive pair satisfies `t_i ≤ t_{i+1} ≤ t_i + Δ` with
/// live times. Vertex revisits are allowed by this discipline.
pub fn is_restless_walk(g: &TLDGraph, journey: &[TimedStep], delta: u32) -> Result<bool> {
    chain(g, journey)?;
    if !times_live(g, journey) {
        return Ok(false);
    }
    Ok(journey
        .windows(2)
        .all(|pair| pair[0].time <= pair[1].time && pair[1].time <= pair[0].time + delta))
}

/// One violated validity clause, attached to the voter whose journey (or
/// absence of one) triggered it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// (a) a delegating voter has neither a journey nor an unresolved mark.
    MissingJourney { voter: usize },
    /// (b) a journey is keyed by a casting or abstaining voter.
    ForeignStart { voter: usize },
    /// (c) the journey does not terminate at the sink through a casting voter.
    DoesNotReachSink { voter: usize },
    /// (d) the journey's final non-sink vertex is an abstainer.
    EndsAtAbstainer { voter: usize },
    /// (e) a consecutive pair violates the tail's trust horizon.
    HorizonViolation { voter: usize },
    /// (f) a vertex repeats although the solution claims to be paths-only.
    RepeatedVertex { voter: usize },
    /// The journey is not a live, connected chain starting at its own voter.
    Malformed { voter: usize, reason: String },
}

impl Violation {
    pub fn voter(&self) -> usize {
        match *self {
            Violation::MissingJourney { voter }
            | Violation::ForeignStart { voter }
            | Violation::DoesNotReachSink { voter }
            | Violation::EndsAtAbstainer { voter }
            | Violation::HorizonViolation { voter }
            | Violation::RepeatedVertex { voter }
            | Violation::Malformed { voter, .. } => voter,
        }
    }
}

/// Everything [`check_solution`] found. Structural validity and
/// time-consciousness are reported as separate verdicts: the confluent rule
/// legitimately returns solutions that are valid but not time-conscious.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    /// Structurally valid: right voters, right endpoints, right shape.
    pub fn is_valid(&self) -> bool {
        self.violations
            .iter()
            .all(|v| matches!(v, Violation::HorizonViolation { .. }))
    }

    /// Every journey respects the trust horizons.
    pub fn is_time_conscious(&self) -> bool {
        !self
            .violations
            .iter()
            .any(|v| matches!(v, Violation::HorizonViolation { .. }))
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a solution clause by clause and reports every violation.
///
/// `unresolved` names delegating voters the producer openly failed to route;
/// they are exempt from clause (a) so that partial resolutions can be
/// validated as far as they go.
pub fn check_solution(
    g: &TLDGraph,
    sol: &DelegationSolution,
    unresolved: &BTreeSet<usize>,
) -> ValidityReport {
    let part = g.classify();
    let mut report = ValidityReport::default();

    for &v in &part.delegating {
        if !sol.journeys.contains_key(&v) && !unresolved.contains(&v) {
            report.violations.push(Violation::MissingJourney { voter: v });
        }
    }

    for (&voter, journey) in &sol.journeys {
        if voter >= g.voter_count() {
            report
                .violations
                .push(Violation::Malformed { voter, reason: "unknown voter".into() });
            continue;
        }
        if !part.delegating.contains(&voter) {
            report.violations.push(Violation::ForeignStart { voter });
            continue;
        }
        if journey.is_empty() {
            report
                .violations
                .push(Violation::Malformed { voter, reason: "empty journey".into() });
            continue;
        }
        if let Err(e) = chain(g, journey) {
            report.violations.push(Violation::Malformed { voter, reason: e.to_string() });
            continue;
        }
        if g.edge(journey[0].edge).tail != voter {
            report.violations.push(Violation::Malformed {
                voter,
                reason: "journey does not start at its own voter".into(),
            });
            continue;
        }
        if !times_live(g, journey) {
            report.violations.push(Violation::Malformed {
                voter,
                reason: "a step uses an edge outside its live interval".into(),
            });
            continue;
        }

        let last = g.edge(journey.last().unwrap().edge);
        let reaches_sink = last.head == g.sink() && part.casting.contains(&last.tail);
        if !reaches_sink {
            report.violations.push(Violation::DoesNotReachSink { voter });
        }
        let final_voter = if last.head == g.sink() { last.tail } else { last.head };
        if part.abstaining.contains(&final_voter) {
            report.violations.push(Violation::EndsAtAbstainer { voter });
        }

        // (e) horizon discipline, independent of the structural clauses
        if !is_time_conscious_path(g, journey).unwrap_or(false) {
            report.violations.push(Violation::HorizonViolation { voter });
        }

        // (f) vertex repeats in paths-only mode
        if !sol.walks_allowed {
            let mut seen = BTreeSet::new();
            let repeats = journey.iter().any(|s| !seen.insert(g.edge(s.edge).tail))
                || journey
                    .last()
                    .map(|s| {
                        let h = g.edge(s.edge).head;
                        h != g.sink() && seen.contains(&h)
                    })
                    .unwrap_or(false);
            if repeats {
                report.violations.push(Violation::RepeatedVertex { voter });
            }
        }
    }

    report
}

/// The per-vertex outgoing step implied by a solution, if the union of
/// journeys is functional and tree-shaped.
///
/// Casting voters untouched by any journey are given their ballot edge at its
/// start instant; nothing constrains them, so any live instant works. Returns
/// `None` when a vertex is assigned two different steps, an abstainer is
/// touched, a step is dead (wrong tail, unknown edge, stale time), or some
/// assigned vertex cannot reach the sink through the steps.
fn tree_steps(g: &TLDGraph, sol: &DelegationSolution) -> Option<BTreeMap<usize, TimedStep>> {
    let part = g.classify();
    let mut steps: BTreeMap<usize, TimedStep> = BTreeMap::new();

    for journey in sol.journeys.values() {
        if journey.is_empty() || chain(g, journey).is_err() || !times_live(g, journey) {
            return None;
        }
        for step in journey {
            let e = g.edge(step.edge);
            if part.abstaining.contains(&e.tail)
                || (e.head != g.sink() && part.abstaining.contains(&e.head))
            {
                return None;
            }
            match steps.get(&e.tail) {
                None => {
                    steps.insert(e.tail, *step);
                }
                Some(prev) if *prev == *step => {}
                Some(_) => return None, // two different steps out of one vertex
            }
        }
    }
    for (&voter, journey) in &sol.journeys {
        if g.edge(journey[0].edge).tail != voter {
            return None;
        }
    }

    for &c in &part.casting {
        if let std::collections::btree_map::Entry::Vacant(slot) = steps.entry(c) {
            let ballot = g.out_edges(c).find(|e| e.head == g.sink())?;
            slot.insert(TimedStep { edge: ballot.id, time: ballot.start });
        }
    }

    // Functional graph over the assigned vertices: everyone must reach the
    // sink, which on a functional graph also rules out cycles.
    for &start in steps.keys() {
        let mut cur = start;
        let mut hops = 0;
        loop {
            let step = steps.get(&cur)?;
            cur = g.edge(step.edge).head;
            hops += 1;
            if cur == g.sink() {
                break;
            }
            if hops > steps.len() {
                return None; // cycle
            }
        }
    }

    Some(steps)
}

/// Structural confluence: the union of journeys is a per-vertex-unique,
/// abstainer-free delegation tree into the sink, with no claim about time
/// discipline. This is the shape the confluent (time-ignoring) rule
/// guarantees.
pub fn is_delegation_tree(g: &TLDGraph, sol: &DelegationSolution) -> bool {
    tree_steps(g, sol).is_some()
}

/// Full confluence: a delegation tree whose every root-ward path is also
/// δ-time-conscious.
pub fn is_confluent(g: &TLDGraph, sol: &DelegationSolution) -> bool {
    let Some(steps) = tree_steps(g, sol) else { return false };
    for &start in steps.keys() {
        let mut path = Vec::new();
        let mut cur = start;
        while cur != g.sink() {
            let step = steps[&cur];
            path.push(step);
            cur = g.edge(step.edge).head;
        }
        if !is_time_conscious_path(g, &path).unwrap_or(false) {
            return false;
        }
    }
    true
}

/// Total satisfaction: the sum over resolved delegating voters of the weight
/// of their journey's first edge. Later hops do not score.
pub fn utility(g: &TLDGraph, sol: &DelegationSolution) -> u64 {
    sol.journeys
        .values()
        .filter_map(|j| j.first())
        .map(|s| g.edge(s.edge).weight)
        .sum()
}

/// Casting weight of each ballot: 1 for the casting voter herself plus one
/// per delegating voter whose journey drains into her ballot. Voters absent
/// from the map (abstainers, and nobody else) carry weight 0.
pub fn representation_weights(
    g: &TLDGraph,
    sol: &DelegationSolution,
) -> Result<BTreeMap<usize, u64>> {
    let steps = tree_steps(g, sol).ok_or_else(|| {
        Error::NonConfluentInput("journeys do not form a delegation tree".into())
    })?;
    let part = g.classify();
    let mut weights: BTreeMap<usize, u64> = part.casting.iter().map(|&c| (c, 1)).collect();
    for &v in sol.journeys.keys() {
        let mut cur = v;
        while cur != g.sink() {
            let e = g.edge(steps[&cur].edge);
            if e.head == g.sink() {
                *weights.get_mut(&e.tail).expect("ballots come from casting voters") += 1;
            }
            cur = e.head;
        }
    }
    Ok(weights)
}

/// Breadth-first order of `steps`' vertices from the sink outward; handy for
/// rules that post-process trees. Unused keys are appended at the end.
#[allow(dead_code)]
pub(crate) fn rootward_order(
    g: &TLDGraph,
    steps: &BTreeMap<usize, TimedStep>,
) -> Vec<usize> {
    let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (&v, step) in steps {
        children.entry(g.edge(step.edge).head).or_default().push(v);
    }
    let mut order = Vec::new();
    let mut queue = VecDeque::from([g.sink()]);
    let mut seen = BTreeSet::from([g.sink()]);
    while let Some(v) = queue.pop_front() {
        if v != g.sink() {
            order.push(v);
        }
        for &c in children.get(&v).into_iter().flatten() {
            if seen.insert(c) {
                queue.push_back(c);
            }
        }
    }
    for &v in steps.keys() {
        if seen.insert(v) {
            order.push(v);
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    /// Two voters: `c` casts throughout, `d` delegates to `c` at t=2.
    fn chain_graph() -> TLDGraph {
        let mut b = GraphBuilder::new(2);
        let c = b.vertex("c");
        let d = b.vertex("d");
        b.edge(c, GraphBuilder::SINK, (1, 2), 0);
        b.edge(d, c, (2, 2), 2);
        b.delta(d, 2, 1);
        b.build().unwrap()
    }

    fn chain_solution(g: &TLDGraph) -> DelegationSolution {
        let d = g.vertex_named("d").unwrap();
        let hop = g.edge_labeled("d>c@2").unwrap().id;
        let ballot = g.edge_labeled("c>SINK@1").unwrap().id;
        DelegationSolution::paths(BTreeMap::from([(
            d,
            vec![TimedStep { edge: hop, time: 2 }, TimedStep { edge: ballot, time: 2 }],
        )]))
    }

    #[test]
    fn the_chain_solution_is_clean_and_scores_two() {
        let g = chain_graph();
        let sol = chain_solution(&g);
        let report = check_solution(&g, &sol, &BTreeSet::new());
        assert!(report.is_clean(), "unexpected violations: {:?}", report.violations);
        assert!(is_confluent(&g, &sol));
        assert_eq!(utility(&g, &sol), 2);
        let d = g.vertex_named("d").unwrap();
        let c = g.vertex_named("c").unwrap();
        let weights = representation_weights(&g, &sol).unwrap();
        assert_eq!(weights, BTreeMap::from([(c, 2)]));
        assert!(!weights.contains_key(&d));
    }

    #[test]
    fn omitting_a_delegator_violates_clause_a_unless_declared() {
        let g = chain_graph();
        let d = g.vertex_named("d").unwrap();
        let empty = DelegationSolution::paths(BTreeMap::new());
        let report = check_solution(&g, &empty, &BTreeSet::new());
        assert_eq!(report.violations, vec![Violation::MissingJourney { voter: d }]);
        let report = check_solution(&g, &empty, &BTreeSet::from([d]));
        assert!(report.is_clean(), "declared-unresolved voters are exempt");
    }

    #[test]
    fn horizon_violations_flip_the_time_conscious_verdict_only() {
        // d trusts nobody older than the same instant: δ_d(2) = 0
        let mut b = GraphBuilder::new(2);
        let c = b.vertex("c");
        let d = b.vertex("d");
        b.edge(c, GraphBuilder::SINK, (1, 2), 0);
        b.edge(d, c, (2, 2), 2);
        b.delta(d, 2, 0);
        let g = b.build().unwrap();
        let hop = g.edge_labeled("d>c@2").unwrap().id;
        let ballot = g.edge_labeled("c>SINK@1").unwrap().id;
        let sol = DelegationSolution::paths(BTreeMap::from([(
            d,
            vec![TimedStep { edge: hop, time: 2 }, TimedStep { edge: ballot, time: 1 }],
        )]));
        let report = check_solution(&g, &sol, &BTreeSet::new());
        assert!(report.is_valid());
        assert!(!report.is_time_conscious());
        assert_eq!(report.violations, vec![Violation::HorizonViolation { voter: d }]);
        assert!(!is_confluent(&g, &sol), "confluence insists on time discipline");
        assert!(is_delegation_tree(&g, &sol), "the shape is still a tree");
    }

    #[test]
    fn journeys_of_non_delegators_are_foreign_starts() {
        let g = chain_graph();
        let c = g.vertex_named("c").unwrap();
        let ballot = g.edge_labeled("c>SINK@1").unwrap().id;
        let d = g.vertex_named("d").unwrap();
        let hop = g.edge_labeled("d>c@2").unwrap().id;
        let sol = DelegationSolution::paths(BTreeMap::from([
            (c, vec![TimedStep { edge: ballot, time: 1 }]),
            (d, vec![TimedStep { edge: hop, time: 2 }, TimedStep { edge: ballot, time: 2 }]),
        ]));
        let report = check_solution(&g, &sol, &BTreeSet::new());
        assert_eq!(report.violations, vec![Violation::ForeignStart { voter: c }]);
    }

    #[test]
    fn dead_ends_trip_clauses_c_and_d() {
        // d -> a where a abstains; d also has a live edge at L via a's twin
        let mut b = GraphBuilder::new(2);
        let a = b.vertex("a");
        let d = b.vertex("d");
        let c = b.vertex("c");
        b.edge(c, GraphBuilder::SINK, (1, 2), 0);
        b.edge(d, a, (2, 2), 3);
        b.edge(a, c, (1, 1), 1); // a's only edge dies before L: abstainer
        b.delta(d, 2, 1);
        b.delta(a, 1, 0);
        let g = b.build().unwrap();
        assert!(g.classify().abstaining.contains(&a));
        let hop = g.edge_labeled("d>a@2").unwrap().id;
        let sol = DelegationSolution::paths(BTreeMap::from([(
            d,
            vec![TimedStep { edge: hop, time: 2 }],
        )]));
        let report = check_solution(&g, &sol, &BTreeSet::new());
        assert!(report.violations.contains(&Violation::DoesNotReachSink { voter: d }));
        assert!(report.violations.contains(&Violation::EndsAtAbstainer { voter: d }));
    }

    #[test]
    fn time_disciplines_disagree_exactly_where_they_should() {
        let g = chain_graph();
        let hop = g.edge_labeled("d>c@2").unwrap().id;
        let ballot = g.edge_labeled("c>SINK@1").unwrap().id;
        let back = vec![TimedStep { edge: hop, time: 2 }, TimedStep { edge: ballot, time: 1 }];
        // stepping back one instant: fine for the horizon (δ=1), not for
        // non-decreasing time, fine for a restless walk only via Δ ≥ ... no:
        // restless walks move forward, so 2 -> 1 fails for any Δ.
        assert!(is_time_conscious_path(&g, &back).unwrap());
        assert!(!is_time_respecting_path(&g, &back).unwrap());
        assert!(!is_restless_walk(&g, &back, 5).unwrap());

        let fwd = vec![TimedStep { edge: hop, time: 2 }, TimedStep { edge: ballot, time: 2 }];
        assert!(is_time_conscious_path(&g, &fwd).unwrap());
        assert!(is_time_respecting_path(&g, &fwd).unwrap());
        assert!(is_restless_walk(&g, &fwd, 0).unwrap());

        // stale instant: the hop edge is only live at t=2
        let stale = vec![TimedStep { edge: hop, time: 1 }, TimedStep { edge: ballot, time: 1 }];
        assert!(!is_time_conscious_path(&g, &stale).unwrap());

        // broken chain: ballot then hop
        let broken = vec![TimedStep { edge: ballot, time: 1 }, TimedStep { edge: hop, time: 2 }];
        assert!(is_time_conscious_path(&g, &broken).is_err());
    }

    #[test]
    fn shared_vertices_with_diverging_steps_are_not_confluent() {
        // d1 and d2 both route through m, but at different instants.
        let mut b = GraphBuilder::new(2);
        let m = b.vertex("m");
        let d1 = b.vertex("d1");
        let d2 = b.vertex("d2");
        let c = b.vertex("c");
        b.edge(c, GraphBuilder::SINK, (1, 2), 0);
        b.edge(m, c, (1, 2), 1);
        b.edge(d1, m, (2, 2), 1);
        b.edge(d2, m, (2, 2), 1);
        b.retrospective();
        let g = b.build().unwrap();
        let dm1 = g.edge_labeled("d1>m@2").unwrap().id;
        let dm2 = g.edge_labeled("d2>m@2").unwrap().id;
        let mc = g.edge_labeled("m>c@1").unwrap().id;
        let cb = g.edge_labeled("c>SINK@1").unwrap().id;
        let mk = |t_mid: u32| {
            vec![
                TimedStep { edge: mc, time: t_mid },
                TimedStep { edge: cb, time: t_mid },
            ]
        };
        let mut j1 = vec![TimedStep { edge: dm1, time: 2 }];
        j1.extend(mk(2));
        let mut j2 = vec![TimedStep { edge: dm2, time: 2 }];
        j2.extend(mk(1));
        let sol = DelegationSolution::paths(BTreeMap::from([(d1, j1.clone()), (d2, j2)]));
        assert!(!is_confluent(&g, &sol), "m is told to hop at t=2 and t=1 at once");
        assert!(representation_weights(&g, &sol).is_err());

        // aligning the times restores confluence
        let mut j2 = vec![TimedStep { edge: dm2, time: 2 }];
        j2.extend(mk(2));
        let sol = DelegationSolution::paths(BTreeMap::from([(d1, j1), (d2, j2)]));
        assert!(is_confluent(&g, &sol));
        let weights = representation_weights(&g, &sol).unwrap();
        assert_eq!(weights, BTreeMap::from([(c, 3)]));
    }

    #[test]
    fn utility_reads_only_first_edges() {
        let g = chain_graph();
        let sol = chain_solution(&g);
        let mut moved = sol.clone();
        for journey in moved.journeys.values_mut() {
            journey.last_mut().unwrap().time = 1; // retime the ballot hop
        }
        assert_eq!(utility(&g, &sol), utility(&g, &moved));
    }

    #[test]
    fn repeated_vertices_only_matter_in_paths_mode() {
        // d's journey visits m twice (d -> m -> e -> m -> c): paths mode must
        // flag the repeat, walks mode must accept it. Only d's journey is
        // under test; m is marked unresolved so clause (a) stays quiet.
        let mut b = GraphBuilder::new(3);
        let m = b.vertex("m");
        let e = b.vertex("e");
        let d = b.vertex("d");
        let c = b.vertex("c");
        b.edge(c, GraphBuilder::SINK, (1, 3), 0);
        b.edge(d, m, (3, 3), 2);
        b.edge(m, e, (2, 3), 1);
        b.edge(e, m, (1, 2), 1);
        b.edge(m, c, (1, 1), 1);
        b.retrospective();
        let g = b.build().unwrap();
        let steps = vec![
            TimedStep { edge: g.edge_labeled("d>m@3").unwrap().id, time: 3 },
            TimedStep { edge: g.edge_labeled("m>e@2").unwrap().id, time: 2 },
            TimedStep { edge: g.edge_labeled("e>m@1").unwrap().id, time: 2 },
            TimedStep { edge: g.edge_labeled("m>c@1").unwrap().id, time: 1 },
            TimedStep { edge: g.edge_labeled("c>SINK@1").unwrap().id, time: 1 },
        ];
        let exempt = BTreeSet::from([m]);
        let as_path = DelegationSolution::paths(BTreeMap::from([(d, steps.clone())]));
        let report = check_solution(&g, &as_path, &exempt);
        assert!(report.violations.contains(&Violation::RepeatedVertex { voter: d }));
        let as_walk = DelegationSolution::walks(BTreeMap::from([(d, steps)]));
        let report = check_solution(&g, &as_walk, &exempt);
        assert!(report.is_clean(), "unexpected: {:?}", report.violations);
    }
}
