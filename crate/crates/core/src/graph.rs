//! The weighted directed temporal multigraph that delegation rules operate on.
//!
//! Vertices are voters plus one distinguished sink that absorbs cast ballots.
//! Each edge carries a closed availability interval `[start, end]` and a
//! weight; parallel edges between the same ordered pair must have disjoint
//! intervals, so "the edge from u to v live at instant t" is unambiguous.
//! A voter's willingness to accept journeys that step back in time is bounded
//! by a per-(voter, instant) trust horizon, stored separately from the edges.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Ceiling on the total number of `(edge, instant)` events an expansion may
/// produce before [`TLDGraph::edge_events`] refuses to run.
pub const DEFAULT_EVENT_CAP: u64 = 10_000_000;

/// Reserved name of the ballot sink; voters may not use it.
pub const SINK_NAME: &str = "SINK";

/// One temporal edge. `tail` delegates to (or casts into) `head` throughout
/// the closed interval `[start, end]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalEdge {
    /// Dense index of this edge inside its graph.
    pub id: usize,
    /// Stable human-readable identifier, unique per graph.
    pub label: String,
    pub tail: usize,
    pub head: usize,
    pub start: u32,
    pub end: u32,
    pub weight: u64,
}

impl TemporalEdge {
    pub fn available_at(&self, t: u32) -> bool {
        self.start <= t && t <= self.end
    }

    /// Number of instants in the availability interval.
    pub fn span(&self) -> u64 {
        u64::from(self.end - self.start) + 1
    }

    pub fn interval(&self) -> (u32, u32) {
        (self.start, self.end)
    }
}

/// Per-(voter, instant) trust horizons. An entry `(v, t) -> d` means a journey
/// arriving at `v`'s edge at instant `t` may continue along an edge whose
/// instant is as early as `t - d`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DeltaVector {
    entries: BTreeMap<(usize, u32), u32>,
}

impl DeltaVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, voter: usize, t: u32, horizon: u32) {
        self.entries.insert((voter, t), horizon);
    }

    pub fn get(&self, voter: usize, t: u32) -> Option<u32> {
        self.entries.get(&(voter, t)).copied()
    }

    /// Horizon to use in a chaining check; absent entries are conservative 0.
    pub fn horizon(&self, voter: usize, t: u32) -> u32 {
        self.get(voter, t).unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32, u32)> + '_ {
        self.entries.iter().map(|(&(v, t), &d)| (v, t, d))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Outcome of classifying the voters of a graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VoterPartition {
    pub casting: BTreeSet<usize>,
    pub abstaining: BTreeSet<usize>,
    pub delegating: BTreeSet<usize>,
}

/// A temporal election graph. Construct through [`GraphBuilder`]; instances
/// are immutable afterwards, so every derived view (classification, static
/// collapse, flipped or reversed copies) is computed fresh from the edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TLDGraph {
    /// Vertex names; the last entry is always the sink.
    names: Vec<String>,
    sink: usize,
    lifespan: u32,
    edges: Vec<TemporalEdge>,
    /// Outgoing edge ids per vertex, ascending.
    out: Vec<Vec<usize>>,
    delta: DeltaVector,
}

impl TLDGraph {
    fn from_parts(
        names: Vec<String>,
        lifespan: u32,
        edges: Vec<TemporalEdge>,
        delta: DeltaVector,
    ) -> Self {
        let sink = names.len() - 1;
        let mut out = vec![Vec::new(); names.len()];
        for e in &edges {
            out[e.tail].push(e.id);
        }
        TLDGraph { names, sink, lifespan, edges, out, delta }
    }

    pub fn lifespan(&self) -> u32 {
        self.lifespan
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    /// Number of voters (the sink is not a voter).
    pub fn voter_count(&self) -> usize {
        self.sink
    }

    /// All vertex ids including the sink.
    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn voters(&self) -> impl Iterator<Item = usize> {
        0..self.sink
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex_named(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &TemporalEdge {
        &self.edges[id]
    }

    pub fn edge_labeled(&self, label: &str) -> Option<&TemporalEdge> {
        self.edges.iter().find(|e| e.label == label)
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &TemporalEdge> + '_ {
        self.out[v].iter().map(|&id| &self.edges[id])
    }

    pub fn delta(&self) -> &DeltaVector {
        &self.delta
    }

    /// Trust horizon of `v` at instant `t` (0 when no entry is present).
    pub fn horizon(&self, v: usize, t: u32) -> u32 {
        self.delta.horizon(v, t)
    }

    /// Splits voters into casting / abstaining / delegating sets.
    ///
    /// Casting voters are the tails of sink edges. Abstaining voters are the
    /// rest of those with no outgoing edge available at the final instant.
    /// Everyone else delegates.
    pub fn classify(&self) -> VoterPartition {
        let mut part = VoterPartition::default();
        for v in self.voters() {
            if self.out_edges(v).any(|e| e.head == self.sink) {
                part.casting.insert(v);
            } else if self.out_edges(v).any(|e| e.available_at(self.lifespan)) {
                part.delegating.insert(v);
            } else {
                part.abstaining.insert(v);
            }
        }
        part
    }

    /// Collapses parallel edges to their maximum weight, forgetting time.
    ///
    /// Each static arc remembers one representative temporal edge: the
    /// heaviest parallel edge, ties resolved towards the lowest id.
    pub fn static_variant(&self) -> StaticGraph {
        let mut best: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for e in &self.edges {
            match best.entry((e.tail, e.head)) {
                Entry::Vacant(slot) => {
                    slot.insert(e.id);
                }
                Entry::Occupied(mut slot) => {
                    if e.weight > self.edges[*slot.get()].weight {
                        slot.insert(e.id);
                    }
                }
            }
        }
        let arcs = best
            .into_iter()
            .map(|((tail, head), id)| StaticArc {
                tail,
                head,
                weight: self.edges[id].weight,
                edge: id,
            })
            .collect();
        StaticGraph { vertex_count: self.names.len(), sink: self.sink, arcs }
    }

    /// Reflects every interval around the middle of the lifespan:
    /// `[s, t]` becomes `[L+1-t, L+1-s]`. Weights, ids and horizons are kept.
    /// Applying it twice returns the original graph.
    pub fn flip_time(&self) -> TLDGraph {
        let lifespan = self.lifespan;
        let edges = self
            .edges
            .iter()
            .map(|e| TemporalEdge {
                start: lifespan + 1 - e.end,
                end: lifespan + 1 - e.start,
                ..e.clone()
            })
            .collect();
        TLDGraph::from_parts(self.names.clone(), lifespan, edges, self.delta.clone())
    }

    /// Swaps the endpoints of every edge. Applying it twice returns the
    /// original graph. Reversed graphs may have edges leaving the sink; they
    /// are working copies for searches, not valid election graphs.
    pub fn reverse(&self) -> TLDGraph {
        let edges = self
            .edges
            .iter()
            .map(|e| TemporalEdge { tail: e.head, head: e.tail, ..e.clone() })
            .collect();
        TLDGraph::from_parts(self.names.clone(), self.lifespan, edges, self.delta.clone())
    }

    /// Expands edges into one `(edge id, instant)` event per live instant,
    /// sorted by instant and then edge id.
    pub fn edge_events(&self) -> Result<Vec<(usize, u32)>> {
        self.edge_events_capped(DEFAULT_EVENT_CAP)
    }

    pub fn edge_events_capped(&self, cap: u64) -> Result<Vec<(usize, u32)>> {
        let total: u64 = self.edges.iter().map(TemporalEdge::span).sum();
        if total > cap {
            return Err(Error::EventBlowup { events: total, cap });
        }
        let mut events = Vec::with_capacity(total as usize);
        for e in &self.edges {
            for t in e.start..=e.end {
                events.push((e.id, t));
            }
        }
        events.sort_by_key(|&(id, t)| (t, id));
        Ok(events)
    }

    /// Total number of `(edge, instant)` events without expanding them.
    pub fn event_count(&self) -> u64 {
        self.edges.iter().map(TemporalEdge::span).sum()
    }
}

impl fmt::Display for TLDGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "graph: {} voters, lifespan {}, {} edges",
            self.voter_count(),
            self.lifespan,
            self.edges.len()
        )?;
        for e in &self.edges {
            writeln!(
                f,
                "  {} : {} -> {} [{},{}] w{}",
                e.label, self.names[e.tail], self.names[e.head], e.start, e.end, e.weight
            )?;
        }
        Ok(())
    }
}

/// Classifies the voters of `g`. Free-function form of [`TLDGraph::classify`].
pub fn classify_voters(g: &TLDGraph) -> VoterPartition {
    g.classify()
}

/// One arc of the static collapse of a temporal graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StaticArc {
    pub tail: usize,
    pub head: usize,
    pub weight: u64,
    /// Representative temporal edge this arc was collapsed from.
    pub edge: usize,
}

/// Time-forgetting collapse of a [`TLDGraph`]; at most one arc per ordered
/// vertex pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticGraph {
    pub vertex_count: usize,
    pub sink: usize,
    arcs: Vec<StaticArc>,
}

impl StaticGraph {
    pub fn arcs(&self) -> &[StaticArc] {
        &self.arcs
    }

    /// Arc set as (tail, head, weight) triples, for comparisons in tests.
    pub fn arc_set(&self) -> BTreeSet<(usize, usize, u64)> {
        self.arcs.iter().map(|a| (a.tail, a.head, a.weight)).collect()
    }

    pub fn reverse(&self) -> StaticGraph {
        let mut arcs: Vec<StaticArc> = self
            .arcs
            .iter()
            .map(|a| StaticArc { tail: a.head, head: a.tail, ..*a })
            .collect();
        arcs.sort_by_key(|a| (a.tail, a.head));
        StaticGraph { vertex_count: self.vertex_count, sink: self.sink, arcs }
    }
}

/// Incremental constructor for [`TLDGraph`].
///
/// Voters are interned by name in first-use order; the sink is addressed with
/// [`GraphBuilder::SINK`] and materialized as the last vertex at build time.
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    lifespan: u32,
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    edges: Vec<PendingEdge>,
    delta: DeltaVector,
    fill: Option<HorizonFill>,
}

#[derive(Debug, Clone)]
struct PendingEdge {
    label: Option<String>,
    tail: usize,
    head: usize,
    start: u32,
    end: u32,
    weight: u64,
}

#[derive(Debug, Clone, Copy)]
enum HorizonFill {
    /// Fill every needed slot with `t - 1`.
    Retrospective,
    /// Fill every needed slot with `min(cap, t - 1)`.
    Constant(u32),
}

impl GraphBuilder {
    /// Placeholder head for casting edges; resolved to the real sink index at
    /// build time.
    pub const SINK: usize = usize::MAX;

    pub fn new(lifespan: u32) -> Self {
        GraphBuilder {
            lifespan,
            names: Vec::new(),
            index: BTreeMap::new(),
            edges: Vec::new(),
            delta: DeltaVector::new(),
            fill: None,
        }
    }

    /// Interns a voter name and returns its vertex id.
    pub fn vertex(&mut self, name: &str) -> usize {
        if let Some(&v) = self.index.get(name) {
            return v;
        }
        let v = self.names.len();
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), v);
        v
    }

    /// Adds an edge with an auto-derived label `tail>head@start`.
    pub fn edge(&mut self, tail: usize, head: usize, interval: (u32, u32), weight: u64) -> &mut Self {
        self.push_edge(None, tail, head, interval, weight)
    }

    /// Adds an edge with an explicit label.
    pub fn labeled_edge(
        &mut self,
        label: &str,
        tail: usize,
        head: usize,
        interval: (u32, u32),
        weight: u64,
    ) -> &mut Self {
        self.push_edge(Some(label.to_owned()), tail, head, interval, weight)
    }

    fn push_edge(
        &mut self,
        label: Option<String>,
        tail: usize,
        head: usize,
        interval: (u32, u32),
        weight: u64,
    ) -> &mut Self {
        self.edges.push(PendingEdge { label, tail, head, start: interval.0, end: interval.1, weight });
        self
    }

    /// Records a trust-horizon entry for `(voter, t)`.
    pub fn delta(&mut self, voter: usize, t: u32, horizon: u32) -> &mut Self {
        self.delta.insert(voter, t, horizon);
        self
    }

    /// Fills every required horizon slot with the maximum `t - 1` at build
    /// time. Explicit entries win over the fill.
    pub fn retrospective(&mut self) -> &mut Self {
        self.fill = Some(HorizonFill::Retrospective);
        self
    }

    /// Fills every required horizon slot with `min(cap, t - 1)` at build time.
    pub fn constant_horizon(&mut self, cap: u32) -> &mut Self {
        self.fill = Some(HorizonFill::Constant(cap));
        self
    }

    /// Validates and freezes the graph.
    ///
    /// Beyond shape checks this applies the election conventions: approval
    /// edges of casting voters are dropped, edges whose tail casts or
    /// abstains are zero-weighted, and every surviving non-sink edge must
    /// have a horizon entry for each instant it is live.
    pub fn build(self) -> Result<TLDGraph> {
        let GraphBuilder { lifespan, mut names, index: _, edges, mut delta, fill } = self;

        if lifespan == 0 {
            return Err(Error::MalformedGraph("lifespan must be at least 1".into()));
        }
        if names.iter().any(|n| n == SINK_NAME) {
            return Err(Error::MalformedGraph(format!("`{SINK_NAME}` is a reserved vertex name")));
        }
        let sink = names.len();
        names.push(SINK_NAME.to_owned());
        let name_of = |v: usize| -> &str { if v == GraphBuilder::SINK { SINK_NAME } else { &names[v] } };

        // Per-edge shape checks, resolving the sink placeholder.
        let mut resolved: Vec<TemporalEdge> = Vec::with_capacity(edges.len());
        for e in &edges {
            let head = if e.head == GraphBuilder::SINK { sink } else { e.head };
            let label = e.label.clone().unwrap_or_else(|| {
                format!("{}>{}@{}", name_of(e.tail), name_of(e.head), e.start)
            });
            let fail = |reason: &str| Error::MalformedEdge { label: label.clone(), reason: reason.into() };
            if e.tail == GraphBuilder::SINK || e.tail >= sink {
                return Err(fail("unknown tail vertex"));
            }
            if head > sink {
                return Err(fail("unknown head vertex"));
            }
            if head == e.tail {
                return Err(fail("self-delegation is not allowed"));
            }
            if e.start < 1 || e.start > e.end || e.end > lifespan {
                return Err(fail("interval must satisfy 1 <= start <= end <= lifespan"));
            }
            if head == sink && e.end != lifespan {
                return Err(fail("a ballot edge must stay live through the final instant"));
            }
            resolved.push(TemporalEdge {
                id: 0, // assigned after cleaning
                label,
                tail: e.tail,
                head,
                start: e.start,
                end: e.end,
                weight: e.weight,
            });
        }

        // Casting voters keep only their ballot edge(s); everything else they
        // proposed is discarded.
        let casting: BTreeSet<usize> =
            resolved.iter().filter(|e| e.head == sink).map(|e| e.tail).collect();
        resolved.retain(|e| e.head == sink || !casting.contains(&e.tail));

        // Label uniqueness and parallel-interval disjointness.
        let mut seen_labels: BTreeMap<&str, ()> = BTreeMap::new();
        for e in &resolved {
            if seen_labels.insert(&e.label, ()).is_some() {
                return Err(Error::MalformedEdge {
                    label: e.label.clone(),
                    reason: "duplicate edge label".into(),
                });
            }
        }
        let mut by_pair: BTreeMap<(usize, usize), Vec<&TemporalEdge>> = BTreeMap::new();
        for e in &resolved {
            by_pair.entry((e.tail, e.head)).or_default().push(e);
        }
        for group in by_pair.values_mut() {
            group.sort_by_key(|e| e.start);
            for pair in group.windows(2) {
                if pair[0].end >= pair[1].start {
                    return Err(Error::OverlappingParallelEdges {
                        first: pair[0].label.clone(),
                        second: pair[1].label.clone(),
                    });
                }
            }
        }

        // Abstainers: no vote and nothing on offer at the final instant.
        let mut inert: BTreeSet<usize> = casting.clone();
        let abstaining: BTreeSet<usize> = (0..sink)
            .filter(|&v| {
                !casting.contains(&v)
                    && !resolved.iter().any(|e| e.tail == v && e.available_at(lifespan))
            })
            .collect();
        inert.extend(abstaining.iter().copied());

        // Votes carry no delegation score, and neither does anything offered
        // by a voter who ultimately casts or abstains.
        for e in &mut resolved {
            if inert.contains(&e.tail) {
                e.weight = 0;
            }
        }

        // Freeze ids in insertion order after cleaning.
        for (id, e) in resolved.iter_mut().enumerate() {
            e.id = id;
        }

        // Horizon entries: validate what was given, fill what a convenience
        // mode promises, and demand one for every live non-sink slot.
        if let Some(mode) = fill {
            for e in &resolved {
                if e.head == sink {
                    continue;
                }
                for t in e.start..=e.end {
                    if delta.get(e.tail, t).is_none() {
                        let d = match mode {
                            HorizonFill::Retrospective => t - 1,
                            HorizonFill::Constant(cap) => cap.min(t - 1),
                        };
                        delta.insert(e.tail, t, d);
                    }
                }
            }
        }
        for (v, t, d) in delta.iter() {
            if v >= sink {
                return Err(Error::DeltaOutOfRange {
                    voter: format!("#{v}"),
                    time: t,
                    reason: "unknown voter".into(),
                });
            }
            if t < 1 || t > lifespan {
                return Err(Error::DeltaOutOfRange {
                    voter: names[v].clone(),
                    time: t,
                    reason: "instant outside the lifespan".into(),
                });
            }
            if d > t - 1 {
                return Err(Error::DeltaOutOfRange {
                    voter: names[v].clone(),
                    time: t,
                    reason: format!("horizon {d} looks past the start of the election (max {})", t - 1),
                });
            }
        }
        for e in &resolved {
            if e.head == sink {
                continue;
            }
            for t in e.start..=e.end {
                if delta.get(e.tail, t).is_none() {
                    return Err(Error::MalformedGraph(format!(
                        "voter `{}` offers edge `{}` at t={} but has no trust horizon there",
                        names[e.tail], e.label, t
                    )));
                }
            }
        }

        Ok(TLDGraph::from_parts(names, lifespan, resolved, delta))
    }
}

/// One edge for [`build_graph`]: (label, tail name, head name, interval, weight).
pub type EdgeSpec = (String, String, String, (u32, u32), u64);

/// Builds a graph from already-interned parts; used by the deserializers.
pub fn build_graph(
    lifespan: u32,
    voters: &[String],
    edges: &[EdgeSpec],
    delta: &[(String, u32, u32)],
) -> Result<TLDGraph> {
    let mut b = GraphBuilder::new(lifespan);
    let mut ids = BTreeMap::new();
    for name in voters {
        if ids.contains_key(name) {
            return Err(Error::MalformedGraph(format!("duplicate vertex name `{name}`")));
        }
        ids.insert(name.clone(), b.vertex(name));
    }
    let lookup = |ids: &BTreeMap<String, usize>, name: &str, label: &str| -> Result<usize> {
        if name == SINK_NAME {
            return Ok(GraphBuilder::SINK);
        }
        ids.get(name).copied().ok_or_else(|| Error::MalformedEdge {
            label: label.to_owned(),
            reason: format!("unknown vertex `{name}`"),
        })
    };
    for (label, tail, head, interval, weight) in edges {
        if tail == SINK_NAME {
            return Err(Error::MalformedEdge { label: label.clone(), reason: "edge leaves the sink".into() });
        }
        let t = lookup(&ids, tail, label)?;
        let h = lookup(&ids, head, label)?;
        b.labeled_edge(label, t, h, *interval, *weight);
    }
    for (voter, t, d) in delta {
        let v = ids.get(voter).copied().ok_or_else(|| Error::DeltaOutOfRange {
            voter: voter.clone(),
            time: *t,
            reason: "unknown voter".into(),
        })?;
        b.delta(v, *t, *d);
    }
    b.build()
}

/// Reverse breadth-first search: every vertex that can reach `target` along
/// arcs of `static_graph` restricted to `allowed` vertices.
pub(crate) fn vertices_reaching(
    sg: &StaticGraph,
    target: usize,
    allowed: &BTreeSet<usize>,
) -> BTreeSet<usize> {
    let mut into: Vec<Vec<usize>> = vec![Vec::new(); sg.vertex_count];
    for a in sg.arcs() {
        if allowed.contains(&a.tail) && (allowed.contains(&a.head) || a.head == target) {
            into[a.head].push(a.tail);
        }
    }
    let mut seen = BTreeSet::new();
    seen.insert(target);
    let mut queue = VecDeque::from([target]);
    while let Some(v) = queue.pop_front() {
        for &u in &into[v] {
            if seen.insert(u) {
                queue.push_back(u);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two voters: `c` casts from instant 1, `d` delegates to `c` at the end.
    fn two_voter_chain() -> TLDGraph {
        let mut b = GraphBuilder::new(2);
        let c = b.vertex("c");
        let d = b.vertex("d");
        b.edge(c, GraphBuilder::SINK, (1, 2), 0);
        b.edge(d, c, (2, 2), 2);
        b.delta(d, 2, 1);
        b.build().unwrap()
    }

    #[test]
    fn builds_and_classifies_the_simple_chain() {
        let g = two_voter_chain();
        assert_eq!(g.voter_count(), 2);
        assert_eq!(g.lifespan(), 2);
        let part = g.classify();
        let c = g.vertex_named("c").unwrap();
        let d = g.vertex_named("d").unwrap();
        assert!(part.casting.contains(&c));
        assert!(part.delegating.contains(&d));
        assert!(part.abstaining.is_empty());
        assert_eq!(g.edge_labeled("d>c@2").unwrap().weight, 2);
    }

    #[test]
    fn casting_approvals_are_dropped_and_inert_tails_zeroed() {
        let mut b = GraphBuilder::new(3);
        let a = b.vertex("a");
        let b2 = b.vertex("b");
        let x = b.vertex("x");
        // `a` delegates at t=1 but votes from t=2: the delegation must vanish.
        b.edge(a, b2, (1, 1), 5);
        b.edge(a, GraphBuilder::SINK, (2, 3), 7);
        // `x` delegates only at t=1, hence abstains; its weight drops to 0.
        b.edge(x, b2, (1, 1), 4);
        b.delta(x, 1, 0);
        // `b` delegates to `x` so it is a real delegator.
        b.edge(b2, x, (1, 3), 2);
        b.delta(b2, 1, 0).delta(b2, 2, 1).delta(b2, 3, 2);
        let g = b.build().unwrap();

        assert!(g.edge_labeled("a>b@1").is_none(), "casting voter keeps only the ballot edge");
        let ballot = g.edge_labeled("a>SINK@2").unwrap();
        assert_eq!(ballot.weight, 0, "ballot edges carry no score");
        assert_eq!(g.edge_labeled("x>b@1").unwrap().weight, 0, "abstainer edges are zeroed");
        assert_eq!(g.edge_labeled("b>x@1").unwrap().weight, 2);

        let part = g.classify();
        assert_eq!(part.casting.into_iter().collect::<Vec<_>>(), vec![a]);
        assert_eq!(part.abstaining.into_iter().collect::<Vec<_>>(), vec![x]);
        assert_eq!(part.delegating.into_iter().collect::<Vec<_>>(), vec![b2]);
    }

    #[test]
    fn rejects_overlapping_parallel_edges() {
        let mut b = GraphBuilder::new(3);
        let u = b.vertex("u");
        let v = b.vertex("v");
        b.edge(u, v, (1, 2), 1);
        b.edge(u, v, (2, 3), 2);
        b.retrospective();
        let err = b.build().unwrap_err();
        assert!(matches!(err, Error::OverlappingParallelEdges { .. }), "got {err:?}");
    }

    #[test]
    fn rejects_horizons_that_predate_the_election() {
        let mut b = GraphBuilder::new(2);
        let u = b.vertex("u");
        let v = b.vertex("v");
        b.edge(u, v, (2, 2), 1);
        b.delta(u, 2, 2); // may look back to t=0: out of range
        let err = b.build().unwrap_err();
        assert!(matches!(err, Error::DeltaOutOfRange { .. }), "got {err:?}");
    }

    #[test]
    fn rejects_missing_horizon_entries() {
        let mut b = GraphBuilder::new(2);
        let u = b.vertex("u");
        let v = b.vertex("v");
        b.edge(u, v, (1, 2), 1);
        b.delta(u, 1, 0); // t=2 slot missing
        let err = b.build().unwrap_err();
        assert!(matches!(err, Error::MalformedGraph(_)), "got {err:?}");
    }

    #[test]
    fn rejects_ballots_that_end_early() {
        let mut b = GraphBuilder::new(3);
        let u = b.vertex("u");
        b.edge(u, GraphBuilder::SINK, (1, 2), 0);
        let err = b.build().unwrap_err();
        assert!(matches!(err, Error::MalformedEdge { .. }), "got {err:?}");
    }

    #[test]
    fn static_variant_keeps_the_heaviest_parallel_edge() {
        let mut b = GraphBuilder::new(3);
        let u = b.vertex("u");
        let v = b.vertex("v");
        let c = b.vertex("c");
        b.edge(u, v, (1, 1), 1);
        b.edge(u, v, (2, 3), 4);
        b.edge(v, c, (3, 3), 2);
        b.edge(c, GraphBuilder::SINK, (1, 3), 0);
        b.retrospective();
        let g = b.build().unwrap();
        let sg = g.static_variant();
        let arcs = sg.arc_set();
        let (u, v, c) = (0, 1, 2);
        assert!(arcs.contains(&(u, v, 4)));
        assert!(arcs.contains(&(v, c, 2)));
        assert!(arcs.contains(&(c, g.sink(), 0)));
        assert_eq!(arcs.len(), 3);
        // The representative edge of u->v is the heavy one.
        let rep = sg.arcs().iter().find(|a| a.tail == u && a.head == v).unwrap();
        assert_eq!(g.edge(rep.edge).interval(), (2, 3));
    }

    #[test]
    fn flip_time_is_an_involution_and_reflects_intervals() {
        let g = two_voter_chain();
        let f = g.flip_time();
        // [2,2] inside lifespan 2 reflects onto [1,1].
        assert_eq!(f.edge_labeled("d>c@2").unwrap().interval(), (1, 1));
        // ballot [1,2] is symmetric.
        assert_eq!(f.edge_labeled("c>SINK@1").unwrap().interval(), (1, 2));
        assert_eq!(f.flip_time(), g);
    }

    #[test]
    fn reverse_is_an_involution() {
        let g = two_voter_chain();
        let r = g.reverse();
        let e = r.edge_labeled("d>c@2").unwrap();
        assert_eq!(r.name(e.tail), "c");
        assert_eq!(r.name(e.head), "d");
        assert_eq!(r.reverse(), g);
    }

    #[test]
    fn edge_events_are_sorted_and_capped() {
        let g = two_voter_chain();
        let events = g.edge_events().unwrap();
        let ballot = g.edge_labeled("c>SINK@1").unwrap().id;
        let deleg = g.edge_labeled("d>c@2").unwrap().id;
        assert_eq!(events, vec![(ballot, 1), (ballot, 2), (deleg, 2)]);
        let err = g.edge_events_capped(2).unwrap_err();
        assert!(matches!(err, Error::EventBlowup { events: 3, cap: 2 }), "got {err:?}");
    }

    #[test]
    fn empty_graph_with_one_voter_builds() {
        let mut b = GraphBuilder::new(1);
        b.vertex("lonely");
        let g = b.build().unwrap();
        let part = g.classify();
        assert_eq!(part.abstaining.len(), 1);
        assert!(part.casting.is_empty() && part.delegating.is_empty());
    }
}
