//! Time-conscious greedy rules. Both branches flip the time axis so that
//! backward-looking trust turns into forward reachability, try each voter's
//! outgoing edges from heaviest to lightest, and keep the first edge from
//! which the sink is reachable.

use std::collections::{BTreeMap, BTreeSet};

use crate::axioms::{is_time_conscious_path, DelegationSolution, TimedStep};
use crate::error::{Error, Result};
use crate::graph::{TLDGraph, TemporalEdge};
use crate::rules::RuleResult;

/// Candidate edges of `v`, heaviest first, ties to the lower id.
fn candidates(g: &TLDGraph, v: usize) -> Vec<&TemporalEdge> {
    let mut edges: Vec<&TemporalEdge> = g.out_edges(v).collect();
    edges.sort_by(|a, b| b.weight.cmp(&a.weight).then(a.id.cmp(&b.id)));
    edges
}

/// Maximizes each delegating voter's first-edge weight over single
/// journeys that respect the trust horizons.
///
/// Designed for retrospective graphs, where flipping time turns the horizon
/// discipline into plain time-respecting reachability and the greedy
/// per-voter choice is optimal. On other graphs the rule stays sound -- every
/// found journey is re-checked against the horizons before it is accepted --
/// but not complete: a voter whose only horizon-respecting journeys revisit
/// vertices or need extra waiting is reported unresolved.
pub fn solve_tc_retrospective(g: &TLDGraph) -> RuleResult {
    let part = g.classify();
    let flipped = g.flip_time();
    let events = flipped
        .edge_events()
        .expect("flipping preserves the event count of a buildable graph");

    let mut journeys = BTreeMap::new();
    let mut unresolved = BTreeSet::new();
    let mut objective = 0u64;
    for &v in &part.delegating {
        let found = candidates(g, v).into_iter().find_map(|cand| {
            let journey = foremost_journey(g, &flipped, &events, v, cand.id)?;
            // Journeys born from a flipped time-respecting search satisfy
            // retrospective horizons by construction; tighter horizons must
            // be re-checked, and a failing candidate is simply skipped.
            is_time_conscious_path(g, &journey).unwrap_or(false).then_some(journey)
        });
        match found {
            Some(journey) => {
                debug_assert!(is_simple(g, &journey), "foremost journeys never revisit vertices");
                objective += g.edge(journey[0].edge).weight;
                journeys.insert(v, journey);
            }
            None => {
                unresolved.insert(v);
            }
        }
    }

    RuleResult { solution: DelegationSolution::paths(journeys), objective, unresolved }
}

/// Earliest-arrival time-respecting path from `v` to the sink in the flipped
/// graph, entered through `cand` and avoiding `v`'s other outgoing edges.
/// Returns the journey mapped back to original instants.
fn foremost_journey(
    g: &TLDGraph,
    flipped: &TLDGraph,
    events: &[(usize, u32)],
    v: usize,
    cand: usize,
) -> Option<Vec<TimedStep>> {
    const UNSET: u32 = u32::MAX;
    let mut arrival = vec![UNSET; flipped.vertex_count()];
    let mut parent: Vec<Option<TimedStep>> = vec![None; flipped.vertex_count()];
    arrival[v] = flipped.edge(cand).start;

    // Arrival times are non-decreasing, not increasing: several hops may
    // share an instant, in any edge order, so each same-instant bucket is
    // closed to a fixpoint before moving on.
    let mut i = 0;
    'sweep: while i < events.len() {
        let mut j = i;
        while j < events.len() && events[j].1 == events[i].1 {
            j += 1;
        }
        loop {
            let mut grew = false;
            for &(id, t) in &events[i..j] {
                let e = flipped.edge(id);
                if e.tail == v && id != cand {
                    continue; // the candidate is v's only way out
                }
                if e.head == v {
                    continue; // never route back into the source
                }
                if arrival[e.tail] <= t && arrival[e.head] == UNSET {
                    arrival[e.head] = t;
                    parent[e.head] = Some(TimedStep { edge: id, time: t });
                    grew = true;
                    if e.head == flipped.sink() {
                        break 'sweep;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        i = j;
    }

    if arrival[flipped.sink()] == UNSET {
        return None;
    }
    let mut steps = Vec::new();
    let mut cur = flipped.sink();
    while cur != v {
        let step = parent[cur].expect("parent chain is connected");
        cur = flipped.edge(step.edge).tail;
        steps.push(TimedStep { edge: step.edge, time: g.lifespan() + 1 - step.time });
    }
    steps.reverse();
    Some(steps)
}

fn is_simple(g: &TLDGraph, journey: &[TimedStep]) -> bool {
    let mut seen = BTreeSet::new();
    journey.iter().all(|s| seen.insert(g.edge(s.edge).tail))
}

/// Like [`solve_tc_retrospective`], but the per-candidate search walks: a
/// journey may revisit vertices as long as no `(edge, instant)` event
/// repeats. Sound exactly for a common trust horizon, i.e. every entry must
/// equal `min(Δ, t-1)`.
pub fn solve_tc_walks(g: &TLDGraph, delta: u32) -> Result<RuleResult> {
    for (v, t, d) in g.delta().iter() {
        let want = delta.min(t - 1);
        if d != want {
            return Err(Error::PreconditionViolated(format!(
                "voter `{}` at t={t} has horizon {d}, but a common horizon of {delta} demands {want}",
                g.name(v)
            )));
        }
    }

    let part = g.classify();
    let flipped = g.flip_time();
    let index = EventIndex::new(&flipped)?;

    let mut journeys = BTreeMap::new();
    let mut unresolved = BTreeSet::new();
    let mut objective = 0u64;
    for &v in &part.delegating {
        let found = candidates(g, v)
            .into_iter()
            .find_map(|cand| restless_journey(g, &flipped, &index, v, cand.id));
        match found {
            Some(journey) => {
                debug_assert!(
                    is_time_conscious_chain(g, &journey),
                    "walk search must respect the horizons"
                );
                objective += g.edge(journey[0].edge).weight;
                journeys.insert(v, journey);
            }
            None => {
                unresolved.insert(v);
            }
        }
    }

    Ok(RuleResult { solution: DelegationSolution::walks(journeys), objective, unresolved })
}

/// Dense indexing of the flipped graph's `(edge, instant)` events plus a
/// per-vertex, time-sorted adjacency of outgoing events.
struct EventIndex {
    /// First dense event id of each edge; events of an edge are consecutive.
    offset: Vec<usize>,
    total: usize,
    /// Outgoing `(time, edge)` pairs per vertex, sorted.
    out_events: Vec<Vec<(u32, usize)>>,
}

impl EventIndex {
    fn new(flipped: &TLDGraph) -> Result<Self> {
        let events = flipped.edge_events()?;
        let mut offset = vec![0usize; flipped.edges().len()];
        let mut acc = 0usize;
        for e in flipped.edges() {
            offset[e.id] = acc;
            acc += e.span() as usize;
        }
        let mut out_events: Vec<Vec<(u32, usize)>> = vec![Vec::new(); flipped.vertex_count()];
        for &(id, t) in &events {
            out_events[flipped.edge(id).tail].push((t, id));
        }
        for list in &mut out_events {
            list.sort_unstable();
        }
        Ok(EventIndex { offset, total: acc, out_events })
    }

    fn id(&self, flipped: &TLDGraph, step: TimedStep) -> usize {
        self.offset[step.edge] + (step.time - flipped.edge(step.edge).start) as usize
    }
}

/// Breadth-first search over events: a walk may extend from event `(e, t)`
/// along any event `(f, t')` with `tail(f) = head(e)` and
/// `t ≤ t' ≤ t + horizon(tail(e), original t)`. Each event is finalized at
/// most once; parent chains are acyclic by insertion order, so every
/// reconstructed walk uses each event at most once.
fn restless_journey(
    g: &TLDGraph,
    flipped: &TLDGraph,
    index: &EventIndex,
    v: usize,
    cand: usize,
) -> Option<Vec<TimedStep>> {
    let mut parent: Vec<Option<usize>> = vec![None; index.total];
    let mut visited = vec![false; index.total];
    let mut queue = std::collections::VecDeque::new();

    let ce = flipped.edge(cand);
    for t in ce.start..=ce.end {
        let step = TimedStep { edge: cand, time: t };
        let id = index.id(flipped, step);
        visited[id] = true;
        queue.push_back(step);
    }

    while let Some(step) = queue.pop_front() {
        let e = flipped.edge(step.edge);
        if e.head == flipped.sink() {
            return Some(reconstruct(g, flipped, index, &parent, step, v, cand));
        }
        let window = g.horizon(e.tail, g.lifespan() + 1 - step.time);
        let from = step.time;
        let until = step.time + window;
        let list = &index.out_events[e.head];
        let lo = list.partition_point(|&(t, _)| t < from);
        for &(t, f) in &list[lo..] {
            if t > until {
                break;
            }
            // Unlike the path search, no edge of `v` is removed here: a walk
            // may return through its own source and leave again by any edge.
            // Only the first hop is pinned to the candidate, via the seeds.
            let next = TimedStep { edge: f, time: t };
            let id = index.id(flipped, next);
            if !visited[id] {
                visited[id] = true;
                parent[id] = Some(index.id(flipped, step));
                queue.push_back(next);
            }
        }
    }
    None
}

fn reconstruct(
    g: &TLDGraph,
    flipped: &TLDGraph,
    index: &EventIndex,
    parent: &[Option<usize>],
    last: TimedStep,
    v: usize,
    cand: usize,
) -> Vec<TimedStep> {
    // Recover (edge, flipped time) from a dense event id by edge offsets.
    let mut edge_of = vec![0usize; index.total];
    for e in flipped.edges() {
        for t in e.start..=e.end {
            edge_of[index.offset[e.id] + (t - e.start) as usize] = e.id;
        }
    }
    let mut steps = Vec::new();
    let mut cur = index.id(flipped, last);
    loop {
        let edge = edge_of[cur];
        let time = flipped.edge(edge).start + (cur - index.offset[edge]) as u32;
        steps.push(TimedStep { edge, time: g.lifespan() + 1 - time });
        match parent[cur] {
            Some(p) => cur = p,
            None => break,
        }
    }
    steps.reverse();
    debug_assert_eq!(steps[0].edge, cand);
    debug_assert_eq!(g.edge(steps[0].edge).tail, v);
    steps
}

/// Horizon discipline for walks: the path condition applied pairwise, with
/// vertex revisits tolerated.
fn is_time_conscious_chain(g: &TLDGraph, journey: &[TimedStep]) -> bool {
    journey.iter().all(|s| g.edge(s.edge).available_at(s.time))
        && journey.windows(2).all(|pair| {
            let (t1, t2) = (pair[0].time, pair[1].time);
            let tail = g.edge(pair[0].edge).tail;
            t1 >= t2 && t2 >= t1.saturating_sub(g.horizon(tail, t1))
        })
}
