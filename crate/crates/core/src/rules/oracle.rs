//! Brute-force oracles. Deliberately unclever and kept independent of the
//! production rules: they enumerate, the rules compute, and the test suites
//! demand exact agreement at desk scale.

use std::collections::{BTreeMap, BTreeSet};

use crate::axioms::{DelegationSolution, TimedStep};
use crate::error::{Error, Result};
use crate::graph::{vertices_reaching, TLDGraph, TemporalEdge, VoterPartition};
use crate::rules::RuleResult;

const MAX_VOTERS: usize = 8;
const MAX_EVENTS: u64 = 64;

fn desk_guard(g: &TLDGraph) -> Result<()> {
    if g.voter_count() > MAX_VOTERS {
        return Err(Error::ScaleExceeded(format!(
            "{} voters exceed the oracle limit of {MAX_VOTERS}",
            g.voter_count()
        )));
    }
    if g.event_count() > MAX_EVENTS {
        return Err(Error::ScaleExceeded(format!(
            "{} edge events exceed the oracle limit of {MAX_EVENTS}",
            g.event_count()
        )));
    }
    Ok(())
}

/// Gate between a hop at `t1` out of `tail` and the next hop at `t2`.
fn gate(g: &TLDGraph, tail: usize, t1: u32, t2: u32) -> bool {
    t1 >= t2 && t2 >= t1.saturating_sub(g.horizon(tail, t1))
}

// ---------------------------------------------------------------------------
// per-voter journey enumeration
// ---------------------------------------------------------------------------

/// Exhaustive per-voter search over horizon-respecting journeys; each voter
/// keeps the maximum first-edge weight. `walks` switches the repetition
/// discipline from "no vertex twice" to "no (edge, instant) event twice".
///
/// The optional `delta` cross-checks the claim that the graph carries a
/// common trust horizon: when supplied, every entry must equal
/// `min(delta, t-1)`; the search itself always follows the graph's horizons.
pub fn oracle_tc_paths(g: &TLDGraph, walks: bool, delta: Option<u32>) -> Result<RuleResult> {
    desk_guard(g)?;
    if let Some(common) = delta {
        for (v, t, d) in g.delta().iter() {
            let want = common.min(t - 1);
            if d != want {
                return Err(Error::PreconditionViolated(format!(
                    "voter `{}` at t={t} has horizon {d}, not min({common}, {})",
                    g.name(v),
                    t - 1
                )));
            }
        }
    }

    let part = g.classify();
    let mut journeys = BTreeMap::new();
    let mut unresolved = BTreeSet::new();
    let mut objective = 0u64;
    for &v in &part.delegating {
        let mut edges: Vec<&TemporalEdge> = g.out_edges(v).collect();
        edges.sort_by(|a, b| b.weight.cmp(&a.weight).then(a.id.cmp(&b.id)));
        let mut found = None;
        'candidates: for cand in edges {
            for t in cand.start..=cand.end {
                let first = TimedStep { edge: cand.id, time: t };
                let mut trail = vec![first];
                let mut seen_vertices = BTreeSet::from([v]);
                let mut seen_events = BTreeSet::from([(cand.id, t)]);
                if extend(g, walks, &mut trail, &mut seen_vertices, &mut seen_events) {
                    found = Some((cand.weight, trail));
                    break 'candidates; // heaviest-first: first hit is the max
                }
            }
        }
        match found {
            Some((weight, journey)) => {
                objective += weight;
                journeys.insert(v, journey);
            }
            None => {
                unresolved.insert(v);
            }
        }
    }

    let solution = if walks {
        DelegationSolution::walks(journeys)
    } else {
        DelegationSolution::paths(journeys)
    };
    Ok(RuleResult { solution, objective, unresolved })
}

/// Depth-first extension of a partial journey; true once the sink is reached.
fn extend(
    g: &TLDGraph,
    walks: bool,
    trail: &mut Vec<TimedStep>,
    seen_vertices: &mut BTreeSet<usize>,
    seen_events: &mut BTreeSet<(usize, u32)>,
) -> bool {
    let last = *trail.last().unwrap();
    let last_edge = g.edge(last.edge);
    let here = last_edge.head;
    if here == g.sink() {
        return true;
    }
    if !walks && !seen_vertices.insert(here) {
        return false; // we would be standing on a repeated vertex
    }
    for f in g.out_edges(here) {
        for t in f.start..=f.end {
            if !gate(g, last_edge.tail, last.time, t) {
                continue;
            }
            if walks && seen_events.contains(&(f.id, t)) {
                continue;
            }
            trail.push(TimedStep { edge: f.id, time: t });
            seen_events.insert((f.id, t));
            if extend(g, walks, trail, seen_vertices, seen_events) {
                return true;
            }
            seen_events.remove(&(f.id, t));
            trail.pop();
        }
    }
    if !walks {
        seen_vertices.remove(&here);
    }
    false
}

/// True when some horizon-respecting, event-unique walk carries `v` to the
/// sink without standing on an abstainer.
fn reaches_sink_time_conscious(g: &TLDGraph, part: &VoterPartition, v: usize) -> bool {
    fn go(
        g: &TLDGraph,
        part: &VoterPartition,
        last_tail: usize,
        last_t: u32,
        here: usize,
        used: &mut BTreeSet<(usize, u32)>,
    ) -> bool {
        if here == g.sink() {
            return true;
        }
        if part.abstaining.contains(&here) {
            return false;
        }
        for f in g.out_edges(here) {
            for t in f.start..=f.end {
                if !gate(g, last_tail, last_t, t) || !used.insert((f.id, t)) {
                    continue;
                }
                if go(g, part, here, t, f.head, used) {
                    return true;
                }
                used.remove(&(f.id, t));
            }
        }
        false
    }

    for e in g.out_edges(v) {
        if e.head != g.sink() && part.abstaining.contains(&e.head) {
            continue;
        }
        for t in e.start..=e.end {
            let mut used = BTreeSet::from([(e.id, t)]);
            if go(g, part, v, t, e.head, &mut used) {
                return true;
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// confluent tree enumeration, horizons included
// ---------------------------------------------------------------------------

/// Enumerates every assignment of one outgoing edge per non-abstaining voter
/// and keeps the best assignment that forms a tree into the sink with a
/// consistent horizon-respecting timing. Ground truth for the exact rule.
///
/// Delegating voters with no horizon-respecting way to the sink at all are
/// excluded up front and reported unresolved, mirroring the partial-solution
/// behaviour of the production rules.
pub fn oracle_tc_confluent(g: &TLDGraph) -> Result<RuleResult> {
    desk_guard(g)?;
    let part = g.classify();

    let unresolved: BTreeSet<usize> = part
        .delegating
        .iter()
        .copied()
        .filter(|&v| !reaches_sink_time_conscious(g, &part, v))
        .collect();
    let member_set: BTreeSet<usize> = part
        .casting
        .iter()
        .chain(part.delegating.iter())
        .copied()
        .filter(|v| !unresolved.contains(v))
        .collect();
    let members: Vec<usize> = member_set.iter().copied().collect();

    let options: Vec<Vec<&TemporalEdge>> = members
        .iter()
        .map(|&v| {
            g.out_edges(v)
                .filter(|e| e.head == g.sink() || member_set.contains(&e.head))
                .collect()
        })
        .collect();

    let mut best: Option<(u64, BTreeMap<usize, TimedStep>)> = None;
    let mut pick = vec![0usize; members.len()];
    if members.iter().zip(&options).all(|(_, o)| !o.is_empty()) && !members.is_empty() {
        loop {
            let choice: BTreeMap<usize, &TemporalEdge> = members
                .iter()
                .zip(&pick)
                .map(|(&v, &i)| (v, options[member_index(&members, v)][i]))
                .collect();
            if let Some(times) = timed_tree(g, &choice) {
                let value: u64 = members
                    .iter()
                    .filter(|v| part.delegating.contains(v))
                    .map(|v| choice[v].weight)
                    .sum();
                if best.as_ref().is_none_or(|(b, _)| value > *b) {
                    let steps = choice
                        .iter()
                        .map(|(&v, e)| (v, TimedStep { edge: e.id, time: times[&v] }))
                        .collect();
                    best = Some((value, steps));
                }
            }
            // odometer
            let mut done = true;
            for i in 0..members.len() {
                pick[i] += 1;
                if pick[i] < options[i].len() {
                    done = false;
                    break;
                }
                pick[i] = 0;
            }
            if done {
                break;
            }
        }
    } else if members.is_empty() {
        return Ok(RuleResult {
            solution: DelegationSolution::paths(BTreeMap::new()),
            objective: 0,
            unresolved,
        });
    }

    match best {
        Some((objective, steps)) => {
            let mut journeys = BTreeMap::new();
            for &v in members.iter().filter(|v| part.delegating.contains(v)) {
                let mut cur = v;
                let mut journey = Vec::new();
                while cur != g.sink() {
                    let step = steps[&cur];
                    journey.push(step);
                    cur = g.edge(step.edge).head;
                }
                journeys.insert(v, journey);
            }
            Ok(RuleResult {
                solution: DelegationSolution::paths(journeys),
                objective,
                unresolved,
            })
        }
        None => {
            // No tree over the eligible members: everyone delegating is lost.
            Ok(RuleResult {
                solution: DelegationSolution::paths(BTreeMap::new()),
                objective: 0,
                unresolved: part.delegating.clone(),
            })
        }
    }
}

fn member_index(members: &[usize], v: usize) -> usize {
    members.binary_search(&v).expect("members are sorted and complete")
}

/// If the per-vertex edge choice forms a tree into the sink and admits a
/// horizon-consistent timing, returns one such timing (per vertex).
///
/// Feasible instants per vertex are computed leaves-first: `t` works for `v`
/// when every child `c` (a voter whose chosen edge enters `v`) can hop at
/// some feasible `t_c` with `t_c ≥ t ≥ t_c − δ_c(t_c)`. On trees this
/// child-by-child filtering is exact, and times are then fixed root-down.
fn timed_tree(
    g: &TLDGraph,
    choice: &BTreeMap<usize, &TemporalEdge>,
) -> Option<BTreeMap<usize, u32>> {
    // tree shape: everyone must reach the sink, which also excludes cycles
    let mut depth: BTreeMap<usize, usize> = BTreeMap::new();
    for &start in choice.keys() {
        let mut cur = start;
        let mut walked = 0usize;
        while cur != g.sink() {
            cur = choice.get(&cur)?.head;
            walked += 1;
            if walked > choice.len() {
                return None;
            }
        }
        depth.insert(start, walked);
    }

    let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (&v, e) in choice {
        if e.head != g.sink() {
            children.entry(e.head).or_default().push(v);
        }
    }

    // children sit deeper than their parents, so depth-descending order
    // visits every subtree before the vertex it hangs from
    let mut order: Vec<usize> = choice.keys().copied().collect();
    order.sort_by_key(|v| std::cmp::Reverse(depth[v]));

    let mut feasible: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for &v in &order {
        let e = choice[&v];
        let times: Vec<u32> = (e.start..=e.end)
            .filter(|&t| {
                children.get(&v).into_iter().flatten().all(|&c| {
                    feasible[&c].iter().any(|&tc| gate(g, c, tc, t))
                })
            })
            .collect();
        if times.is_empty() {
            return None;
        }
        feasible.insert(v, times);
    }

    // fix times root-down; parents first
    let mut assigned: BTreeMap<usize, u32> = BTreeMap::new();
    for &v in order.iter().rev() {
        let e = choice[&v];
        let t = if e.head == g.sink() {
            feasible[&v][0]
        } else {
            let tp = assigned[&e.head];
            *feasible[&v]
                .iter()
                .find(|&&tc| gate(g, v, tc, tp))
                .expect("feasibility was established leaves-first")
        };
        assigned.insert(v, t);
    }
    Some(assigned)
}

// ---------------------------------------------------------------------------
// static (time-forgetting) tree enumeration
// ---------------------------------------------------------------------------

/// Brute-force maximum over static spanning trees rooted at the sink over the
/// non-abstaining voters: ground truth for the confluent rule. Journeys carry
/// each chosen edge at its earliest instant; their timing is incidental.
pub fn oracle_static_confluent(g: &TLDGraph) -> Result<RuleResult> {
    if g.voter_count() > MAX_VOTERS {
        return Err(Error::ScaleExceeded(format!(
            "{} voters exceed the oracle limit of {MAX_VOTERS}",
            g.voter_count()
        )));
    }
    let part = g.classify();
    let sg = g.static_variant();

    let eligible: BTreeSet<usize> =
        part.casting.iter().chain(part.delegating.iter()).copied().collect();
    let mut allowed = eligible.clone();
    allowed.insert(g.sink());
    let reach = vertices_reaching(&sg, g.sink(), &allowed);
    let unresolved: BTreeSet<usize> =
        part.delegating.iter().copied().filter(|v| !reach.contains(v)).collect();
    let members: Vec<usize> = eligible.into_iter().filter(|v| reach.contains(v)).collect();
    let member_set: BTreeSet<usize> = members.iter().copied().collect();

    let options: Vec<Vec<usize>> = members
        .iter()
        .map(|&v| {
            sg.arcs()
                .iter()
                .enumerate()
                .filter(|(_, a)| {
                    a.tail == v && (a.head == g.sink() || member_set.contains(&a.head))
                })
                .map(|(i, _)| i)
                .collect()
        })
        .collect();

    let mut best: Option<(u64, Vec<usize>)> = None;
    if !members.is_empty() {
        let mut pick = vec![0usize; members.len()];
        loop {
            // does this choice drain everyone into the sink?
            let arc_of = |i: usize| sg.arcs()[options[i][pick[i]]];
            let mut ok = true;
            for i in 0..members.len() {
                let mut cur = members[i];
                let mut walked = 0;
                while cur != g.sink() {
                    let j = member_index(&members, cur);
                    cur = arc_of(j).head;
                    walked += 1;
                    if walked > members.len() {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    break;
                }
            }
            if ok {
                let value: u64 = (0..members.len())
                    .filter(|&i| part.delegating.contains(&members[i]))
                    .map(|i| arc_of(i).weight)
                    .sum();
                if best.as_ref().is_none_or(|(b, _)| value > *b) {
                    best = Some((value, pick.clone()));
                }
            }
            let mut done = true;
            for i in 0..members.len() {
                pick[i] += 1;
                if pick[i] < options[i].len() {
                    done = false;
                    break;
                }
                pick[i] = 0;
            }
            if done {
                break;
            }
        }
    }

    match best {
        Some((objective, pick)) => {
            let step_of = |v: usize| {
                let arc = sg.arcs()[options[member_index(&members, v)][pick[member_index(&members, v)]]];
                TimedStep { edge: arc.edge, time: g.edge(arc.edge).start }
            };
            let mut journeys = BTreeMap::new();
            for &v in members.iter().filter(|v| part.delegating.contains(v)) {
                let mut journey = Vec::new();
                let mut cur = v;
                while cur != g.sink() {
                    let step = step_of(cur);
                    journey.push(step);
                    cur = g.edge(step.edge).head;
                }
                journeys.insert(v, journey);
            }
            Ok(RuleResult {
                solution: DelegationSolution::paths(journeys),
                objective,
                unresolved,
            })
        }
        None => Ok(RuleResult {
            solution: DelegationSolution::paths(BTreeMap::new()),
            objective: 0,
            unresolved: part.delegating.clone(),
        }),
    }
}
