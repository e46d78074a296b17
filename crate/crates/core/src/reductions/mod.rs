//! Executable reductions: the election-resolution problem embeds into a
//! directed Steiner tree instance (solved by subset DP in `dp`), and two
//! classic temporal problems embed into election instances (`sources`),
//! which the test suites use to cross-validate objectives.

mod dp;
mod sources;

pub use dp::{steiner_dp, steiner_dp_on, SteinerTree};
pub use sources::{
    brute_force_restless_path, brute_force_tmst, from_restless_path, from_tmst,
    RestlessInstance, TmstInstance,
};

use std::collections::BTreeMap;

use crate::graph::TLDGraph;

/// One vertex of a Steiner instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteinerVertex {
    /// The source `r'`; stands in for the ballot box.
    Root,
    /// Per-voter landing vertex; terminal exactly for delegating voters.
    Special { voter: usize, terminal: bool },
    /// "Edge `edge` is crossed at instant `time`" — the back-map reads the
    /// original hop straight out of the vertex.
    Occurrence { edge: usize, time: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SteinerArc {
    pub tail: usize,
    pub head: usize,
    pub weight: u64,
}

/// Static directed Steiner-tree instance produced by [`to_steiner`], with
/// enough metadata to map trees back onto the source election graph.
#[derive(Debug, Clone)]
pub struct SteinerInstance {
    vertices: Vec<SteinerVertex>,
    arcs: Vec<SteinerArc>,
    root: usize,
    terminals: Vec<usize>,
    /// voter → (heaviest, lightest) outgoing-edge weight, any instant.
    bounds: BTreeMap<usize, (u64, u64)>,
    /// Σ over delegating voters of (heaviest + lightest): converts Steiner
    /// cost k' back into election utility k = transform − k'.
    transform: u64,
    occurrence_of: BTreeMap<(usize, u32), usize>,
    special_of: BTreeMap<usize, usize>,
}

impl SteinerInstance {
    pub fn vertices(&self) -> &[SteinerVertex] {
        &self.vertices
    }

    pub fn arcs(&self) -> &[SteinerArc] {
        &self.arcs
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Terminal vertex indices, ascending.
    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    /// (heaviest, lightest) outgoing weight of a non-abstaining voter.
    pub fn bounds(&self, voter: usize) -> Option<(u64, u64)> {
        self.bounds.get(&voter).copied()
    }

    pub fn transform(&self) -> u64 {
        self.transform
    }

    /// Steiner vertex standing for crossing `edge` at `time`.
    pub fn occurrence(&self, edge: usize, time: u32) -> Option<usize> {
        self.occurrence_of.get(&(edge, time)).copied()
    }

    /// Steiner vertex standing for voter `v`'s landing spot.
    pub fn special(&self, voter: usize) -> Option<usize> {
        self.special_of.get(&voter).copied()
    }

    /// Test-only assembly of hand-crafted instances for the DP.
    #[cfg(test)]
    pub(crate) fn raw(
        vertices: Vec<SteinerVertex>,
        arcs: Vec<SteinerArc>,
        root: usize,
        terminals: Vec<usize>,
    ) -> Self {
        SteinerInstance {
            vertices,
            arcs,
            root,
            terminals,
            bounds: BTreeMap::new(),
            transform: 0,
            occurrence_of: BTreeMap::new(),
            special_of: BTreeMap::new(),
        }
    }
}

/// Encodes confluent, horizon-respecting resolution as a directed Steiner
/// problem rooted at `r'` with the delegating voters as terminals.
///
/// One occurrence vertex exists per (edge, instant) whose endpoints avoid
/// abstainers. Arcs run from later hops to earlier ones: an arc from
/// `(e2, t2)` into `(e1, t1)` says "a journey may cross `e1` at `t1` and
/// continue over `e2` at `t2`", and exists exactly when `t1 ≥ t2 ≥
/// t1 − δ_u(t1)` for `u` the tail of `e1` (on retrospective graphs this is
/// just `t1 ≥ t2`). Its weight is `max(u) − w(e1) + min(u)`, so a root-to-
/// terminal path costs Σ(max+min) minus the journey's utility and cheapest
/// Steiner trees are highest-utility delegation trees.
///
/// Ballot crossings hang off the root at no cost; every occurrence reaches
/// its tail's special vertex at no cost.
pub fn to_steiner(g: &TLDGraph) -> SteinerInstance {
    let part = g.classify();
    let in_play = |v: usize| v == g.sink() || !part.abstaining.contains(&v);

    // heaviest / lightest outgoing weight per non-abstaining voter
    let mut bounds: BTreeMap<usize, (u64, u64)> = BTreeMap::new();
    for v in g.voters() {
        if part.abstaining.contains(&v) {
            continue;
        }
        let mut weights = g.out_edges(v).map(|e| e.weight);
        if let Some(first) = weights.next() {
            let (max, min) = weights.fold((first, first), |(hi, lo), w| (hi.max(w), lo.min(w)));
            bounds.insert(v, (max, min));
        }
    }
    let transform = part
        .delegating
        .iter()
        .map(|u| {
            let (max, min) = bounds[u];
            max + min
        })
        .sum();

    let mut vertices = vec![SteinerVertex::Root];
    let root = 0;
    let mut special_of = BTreeMap::new();
    let mut terminals = Vec::new();
    for v in g.voters() {
        if part.abstaining.contains(&v) {
            continue;
        }
        let terminal = part.delegating.contains(&v);
        special_of.insert(v, vertices.len());
        if terminal {
            terminals.push(vertices.len());
        }
        vertices.push(SteinerVertex::Special { voter: v, terminal });
    }

    let mut occurrence_of = BTreeMap::new();
    for e in g.edges() {
        if !in_play(e.tail) || !in_play(e.head) {
            continue;
        }
        for t in e.start..=e.end {
            occurrence_of.insert((e.id, t), vertices.len());
            vertices.push(SteinerVertex::Occurrence { edge: e.id, time: t });
        }
    }

    let mut arcs = Vec::new();
    // the root hands out ballot crossings for free
    for e in g.edges().iter().filter(|e| e.head == g.sink()) {
        for t in e.start..=e.end {
            if let Some(&occ) = occurrence_of.get(&(e.id, t)) {
                arcs.push(SteinerArc { tail: root, head: occ, weight: 0 });
            }
        }
    }
    // every crossing of one of v's edges lands on v's special for free
    for (&(edge, _), &occ) in &occurrence_of {
        let special = special_of[&g.edge(edge).tail];
        arcs.push(SteinerArc { tail: occ, head: special, weight: 0 });
    }
    // chained hops: cross e1 at t1, continue over e2 at t2
    for e1 in g.edges() {
        let Some((max, min)) = bounds.get(&e1.tail).copied() else {
            continue;
        };
        let weight = max - e1.weight + min;
        for t1 in e1.start..=e1.end {
            let Some(&head_occ) = occurrence_of.get(&(e1.id, t1)) else {
                continue;
            };
            let back = g.horizon(e1.tail, t1);
            for e2 in g.out_edges(e1.head) {
                for t2 in e2.start..=e2.end {
                    if !(t1 >= t2 && t2 >= t1.saturating_sub(back)) {
                        continue;
                    }
                    let Some(&tail_occ) = occurrence_of.get(&(e2.id, t2)) else {
                        continue;
                    };
                    arcs.push(SteinerArc { tail: tail_occ, head: head_occ, weight });
                }
            }
        }
    }

    SteinerInstance {
        vertices,
        arcs,
        root,
        terminals,
        bounds,
        transform,
        occurrence_of,
        special_of,
    }
}
