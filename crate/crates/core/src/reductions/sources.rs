//! Election instances built from two classic temporal problems. Each
//! constructor is paired with a small brute-force decider for the source
//! problem so tests can check that objectives translate exactly.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, TLDGraph};

/// Spanning-arborescence instance in the paired-edge normal form: every
/// listed arc `(u, v)` stands for two temporal copies, an early one over
/// `[1, lifespan−1]` of weight 2 and a late one at `[lifespan, lifespan]` of
/// weight 1; the root has no incoming arcs and every other vertex has at
/// least one.
#[derive(Debug, Clone)]
pub struct TmstInstance {
    pub vertex_count: usize,
    pub root: usize,
    pub lifespan: u32,
    pub arcs: Vec<(usize, usize)>,
}

const EARLY_WEIGHT: u64 = 2;
const LATE_WEIGHT: u64 = 1;

impl TmstInstance {
    fn validate(&self) -> Result<()> {
        let fail = |reason: String| Err(Error::MalformedTmstInstance(reason));
        if self.vertex_count == 0 {
            return fail("no vertices".into());
        }
        if self.root >= self.vertex_count {
            return fail(format!("root {} out of range", self.root));
        }
        if self.lifespan < 2 {
            return fail("lifespan must be at least 2 for the early copies to exist".into());
        }
        let mut seen = BTreeSet::new();
        for &(u, v) in &self.arcs {
            if u >= self.vertex_count || v >= self.vertex_count {
                return fail(format!("arc ({u}, {v}) out of range"));
            }
            if u == v {
                return fail(format!("self-loop on vertex {u}"));
            }
            if v == self.root {
                return fail(format!("arc ({u}, {v}) enters the root"));
            }
            if !seen.insert((u, v)) {
                return fail(format!("duplicate arc ({u}, {v})"));
            }
        }
        for v in (0..self.vertex_count).filter(|&v| v != self.root) {
            if !self.arcs.iter().any(|&(_, head)| head == v) {
                return fail(format!("vertex {v} has no incoming arc"));
            }
        }
        Ok(())
    }
}

/// Builds the election graph whose confluent optimum mirrors the spanning
/// instance's: arcs are reversed with weights swapped through `3 − w`, the
/// root casts over the whole lifespan, and wherever a voter would face only
/// weight-2 choices at some instant a weight-1 edge toward a throwaway
/// abstainer keeps the weights expressing a full ranking. Returns the graph
/// and the utility bound `k = 3(n−1) − k′` corresponding to cost bound `k′`.
pub fn from_tmst(inst: &TmstInstance, k_prime: u64) -> Result<(TLDGraph, i64)> {
    inst.validate()?;
    let n = inst.vertex_count;
    let life = inst.lifespan;

    let mut b = GraphBuilder::new(life);
    let ids: Vec<usize> = (0..n).map(|v| b.vertex(&format!("v{v}"))).collect();
    let dump = b.vertex("a");

    // reversed copies: early weight 2 → 1, late weight 1 → 2
    let mut spans: Vec<(usize, u32, u32, u64)> = Vec::new();
    for &(u, v) in &inst.arcs {
        b.edge(ids[v], ids[u], (1, life - 1), 3 - EARLY_WEIGHT);
        b.edge(ids[v], ids[u], (life, life), 3 - LATE_WEIGHT);
        spans.push((v, 1, life - 1, 3 - EARLY_WEIGHT));
        spans.push((v, life, life, 3 - LATE_WEIGHT));
    }
    b.edge(ids[inst.root], GraphBuilder::SINK, (1, life), 0);

    // weight-1 fallback wherever an instant offers weight 2 alone
    for (v, &vid) in ids.iter().enumerate() {
        for t in 1..=life {
            let live = spans
                .iter()
                .filter(|&&(tail, s, e, _)| tail == v && s <= t && t <= e)
                .map(|&(_, _, _, w)| w);
            let (mut has_heavy, mut has_light) = (false, false);
            for w in live {
                has_heavy |= w == 2;
                has_light |= w == 1;
            }
            if has_heavy && !has_light {
                b.edge(vid, dump, (t, t), 1);
            }
        }
    }

    b.retrospective();
    let g = b.build()?;
    Ok((g, 3 * (n as i64 - 1) - k_prime as i64))
}

/// Cheapest spanning arborescence from the root with non-decreasing times
/// along every root-to-leaf path, using the paired copies; `None` when no
/// spanning choice works. Exhaustive, for cross-validation only.
pub fn brute_force_tmst(inst: &TmstInstance) -> Option<u64> {
    inst.validate().ok()?;
    let n = inst.vertex_count;
    if n == 1 {
        return Some(0);
    }
    let others: Vec<usize> = (0..n).filter(|&v| v != inst.root).collect();
    // candidate in-edges per vertex: (parent, early?) over both copies
    let options: Vec<Vec<(usize, bool)>> = others
        .iter()
        .map(|&v| {
            inst.arcs
                .iter()
                .filter(|&&(_, head)| head == v)
                .flat_map(|&(tail, _)| [(tail, true), (tail, false)])
                .collect()
        })
        .collect();

    let mut best: Option<u64> = None;
    let mut pick = vec![0usize; others.len()];
    loop {
        let choice_of = |v: usize| {
            let i = others.iter().position(|&o| o == v).unwrap();
            options[i][pick[i]]
        };
        // times assigned root-down; earliest placement is the most permissive
        let mut feasible = true;
        let mut times: Vec<Option<u32>> = vec![None; n];
        times[inst.root] = Some(1);
        'vertices: for &v in &others {
            // walk up to an already-timed ancestor, then come back down
            let mut chain = vec![v];
            let mut cur = v;
            while times[cur].is_none() {
                cur = choice_of(cur).0;
                chain.push(cur);
                if chain.len() > n + 1 {
                    feasible = false; // cycle: never reaches the root
                    break 'vertices;
                }
            }
            for &link in chain.iter().rev().skip(1) {
                let (parent, early) = choice_of(link);
                let lower = if parent == inst.root { 1 } else { times[parent].unwrap() };
                let t = if early {
                    if lower > inst.lifespan - 1 {
                        feasible = false;
                        break 'vertices;
                    }
                    lower
                } else {
                    inst.lifespan
                };
                times[link] = Some(t);
            }
        }
        if feasible {
            let cost: u64 = others
                .iter()
                .map(|&v| if choice_of(v).1 { EARLY_WEIGHT } else { LATE_WEIGHT })
                .sum();
            if best.is_none_or(|b| cost < b) {
                best = Some(cost);
            }
        }
        let mut done = true;
        for i in 0..others.len() {
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
    best
}

/// Waiting-bounded path instance: does a path from `source` to `target`
/// exist whose consecutive hop times satisfy `t ≤ t' ≤ t + delta`?
#[derive(Debug, Clone)]
pub struct RestlessInstance {
    pub vertex_count: usize,
    pub source: usize,
    pub target: usize,
    pub delta: u32,
    pub lifespan: u32,
    /// One hop opportunity per entry: (tail, head, instant).
    pub edges: Vec<(usize, usize, u32)>,
}

impl RestlessInstance {
    fn checked(&self) -> &Self {
        assert!(self.source < self.vertex_count && self.target < self.vertex_count);
        assert_ne!(self.source, self.target, "source and target must differ");
        assert!(self.lifespan >= 1);
        for &(u, v, t) in &self.edges {
            assert!(u < self.vertex_count && v < self.vertex_count);
            assert!((1..=self.lifespan).contains(&t), "hop instant {t} outside the lifespan");
        }
        self
    }
}

/// Builds the election whose lone delegator can be resolved exactly when the
/// path instance is solvable: hops are reversed at their original instants,
/// the path's source casts throughout, a dummy edge at the final round keeps
/// the path's target delegating, and every horizon entry is `min(Δ, t−1)`.
/// The utility bound is always 1.
pub fn from_restless_path(inst: &RestlessInstance) -> (TLDGraph, u64) {
    inst.checked();
    let life = inst.lifespan + 1;
    let mut b = GraphBuilder::new(life);
    let ids: Vec<usize> = (0..inst.vertex_count).map(|v| b.vertex(&format!("v{v}"))).collect();
    let dump = b.vertex("a");

    let hops: BTreeSet<(usize, usize, u32)> = inst
        .edges
        .iter()
        .copied()
        .filter(|&(u, v, _)| u != v)
        .collect();
    for (u, v, t) in hops {
        b.edge(ids[v], ids[u], (t, t), 1);
    }
    b.edge(ids[inst.source], GraphBuilder::SINK, (1, life), 0);
    b.edge(ids[inst.target], dump, (life, life), 1);
    b.constant_horizon(inst.delta);
    let g = b.build().expect("the reversed-path construction is well-formed");
    (g, 1)
}

/// Exhaustive vertex-simple search for a waiting-bounded path.
pub fn brute_force_restless_path(inst: &RestlessInstance) -> bool {
    inst.checked();
    fn go(
        inst: &RestlessInstance,
        here: usize,
        last: Option<u32>,
        visited: &mut BTreeSet<usize>,
    ) -> bool {
        if here == inst.target {
            return true;
        }
        for &(u, v, t) in &inst.edges {
            if u != here || visited.contains(&v) {
                continue;
            }
            if let Some(prev) = last {
                if t < prev || t > prev.saturating_add(inst.delta) {
                    continue;
                }
            }
            visited.insert(v);
            if go(inst, v, Some(t), visited) {
                return true;
            }
            visited.remove(&v);
        }
        false
    }
    let mut visited = BTreeSet::from([inst.source]);
    go(inst, inst.source, None, &mut visited)
}
