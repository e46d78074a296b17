//! Subset dynamic program for directed Steiner trees, exponential only in
//! the number of terminals: `f[S][v]` is the cheapest out-tree rooted at `v`
//! reaching every terminal of `S`, built by splitting `S` at `v` and by
//! prepending arcs (a Dijkstra pass per subset).

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use super::SteinerInstance;
use crate::error::{Error, Result};

/// One optimal tree: the arc set, plus each terminal's root-to-terminal
/// arc sequence (the back-map reads journeys off these paths).
#[derive(Debug, Clone)]
pub struct SteinerTree {
    /// Indices into the instance's arc list, ascending and deduplicated.
    pub arcs: Vec<usize>,
    /// terminal vertex → arcs along its root-to-terminal path, in order.
    pub paths: BTreeMap<usize, Vec<usize>>,
}

#[derive(Clone, Copy, PartialEq)]
enum Choice {
    Unset,
    /// Singleton subset sitting on its own terminal.
    Leaf,
    /// Tree starts with this arc; rest hangs from the arc's head.
    Via(usize),
    /// Subtrees for this submask and its complement join here.
    Split(u32),
}

/// Solves the instance over all its terminals.
pub fn steiner_dp(inst: &SteinerInstance) -> Result<(u64, SteinerTree)> {
    steiner_dp_on(inst, inst.terminals())
}

/// Solves the instance over a chosen subset of its terminals (the exact rule
/// drops unreachable ones first and solves for the rest).
pub fn steiner_dp_on(inst: &SteinerInstance, terminals: &[usize]) -> Result<(u64, SteinerTree)> {
    let k = terminals.len();
    let n = inst.vertices().len();
    if k == 0 {
        return Ok((0, SteinerTree { arcs: Vec::new(), paths: BTreeMap::new() }));
    }
    assert!(k <= 30, "terminal count {k} exceeds the subset-mask width");

    // arcs indexed by head: settling a head relaxes its in-arcs' tails
    let mut into: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, a) in inst.arcs().iter().enumerate() {
        into[a.head].push(i);
    }

    let full = (1usize << k) - 1;
    let mut f = vec![vec![u64::MAX; n]; full + 1];
    let mut how = vec![vec![Choice::Unset; n]; full + 1];
    for (i, &t) in terminals.iter().enumerate() {
        f[1 << i][t] = 0;
        how[1 << i][t] = Choice::Leaf;
    }

    for mask in 1..=full {
        // join two already-solved subtrees at a common root
        let mut sub = (mask - 1) & mask;
        while sub != 0 {
            let rest = mask ^ sub;
            if sub <= rest {
                for v in 0..n {
                    if f[sub][v] == u64::MAX || f[rest][v] == u64::MAX {
                        continue;
                    }
                    let cand = f[sub][v] + f[rest][v];
                    if cand < f[mask][v] {
                        f[mask][v] = cand;
                        how[mask][v] = Choice::Split(sub as u32);
                    }
                }
            }
            sub = (sub - 1) & mask;
        }

        // prepend arcs: one Dijkstra pass with the joins as sources
        let mut heap: BinaryHeap<Reverse<(u64, usize)>> = (0..n)
            .filter(|&v| f[mask][v] != u64::MAX)
            .map(|v| Reverse((f[mask][v], v)))
            .collect();
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > f[mask][u] {
                continue;
            }
            for &ai in &into[u] {
                let a = inst.arcs()[ai];
                let cand = d + a.weight;
                if cand < f[mask][a.tail] {
                    f[mask][a.tail] = cand;
                    how[mask][a.tail] = Choice::Via(ai);
                    heap.push(Reverse((cand, a.tail)));
                }
            }
        }
    }

    let cost = f[full][inst.root()];
    if cost == u64::MAX {
        let lost: Vec<String> = terminals
            .iter()
            .enumerate()
            .filter(|&(i, _)| f[1 << i][inst.root()] == u64::MAX)
            .map(|(_, t)| format!("vertex {t}"))
            .collect();
        return Err(Error::Infeasible(format!(
            "terminals unreachable from the root: {}",
            if lost.is_empty() { "joint cover impossible".into() } else { lost.join(", ") }
        )));
    }

    let mut arcs = BTreeSet::new();
    let mut paths = BTreeMap::new();
    let mut prefix = Vec::new();
    rebuild(inst, &how, full, inst.root(), &mut prefix, &mut arcs, &mut paths);

    let tree = SteinerTree { arcs: arcs.into_iter().collect(), paths };
    let rebuilt: u64 = tree.arcs.iter().map(|&a| inst.arcs()[a].weight).sum();
    assert_eq!(rebuilt, cost, "reconstructed tree must cost exactly the DP optimum");
    Ok((cost, tree))
}

fn rebuild(
    inst: &SteinerInstance,
    how: &[Vec<Choice>],
    mask: usize,
    v: usize,
    prefix: &mut Vec<usize>,
    arcs: &mut BTreeSet<usize>,
    paths: &mut BTreeMap<usize, Vec<usize>>,
) {
    match how[mask][v] {
        Choice::Leaf => {
            paths.insert(v, prefix.clone());
        }
        Choice::Via(a) => {
            arcs.insert(a);
            prefix.push(a);
            rebuild(inst, how, mask, inst.arcs()[a].head, prefix, arcs, paths);
            prefix.pop();
        }
        Choice::Split(sub) => {
            rebuild(inst, how, sub as usize, v, prefix, arcs, paths);
            rebuild(inst, how, mask ^ sub as usize, v, prefix, arcs, paths);
        }
        Choice::Unset => unreachable!("reconstruction entered an unreached state"),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{to_steiner, SteinerArc, SteinerVertex};
    use super::*;
    use crate::graph::GraphBuilder;

    #[test]
    fn the_two_voter_instance_costs_two() {
        let mut b = GraphBuilder::new(2);
        let c = b.vertex("c");
        let d = b.vertex("d");
        b.edge(c, GraphBuilder::SINK, (1, 2), 0);
        b.edge(d, c, (2, 2), 2);
        b.delta(d, 2, 1);
        let g = b.build().unwrap();
        let inst = to_steiner(&g);
        let (cost, tree) = steiner_dp(&inst).unwrap();
        assert_eq!(cost, 2);

        let terminal = inst.special(d).unwrap();
        let path = &tree.paths[&terminal];
        assert_eq!(path.len(), 3, "root arc, chain arc, landing arc");
        let weights: Vec<u64> = path.iter().map(|&a| inst.arcs()[a].weight).collect();
        assert_eq!(weights, vec![0, 2, 0]);
        let hop = g.edge_labeled("d>c@2").unwrap().id;
        assert_eq!(inst.arcs()[path[1]].head, inst.occurrence(hop, 2).unwrap());
    }

    fn raw(
        n: usize,
        arcs: &[(usize, usize, u64)],
        terminals: &[usize],
    ) -> SteinerInstance {
        let vertices = (0..n)
            .map(|i| {
                if i == 0 {
                    SteinerVertex::Root
                } else {
                    SteinerVertex::Special { voter: i, terminal: terminals.contains(&i) }
                }
            })
            .collect();
        let arcs = arcs
            .iter()
            .map(|&(tail, head, weight)| SteinerArc { tail, head, weight })
            .collect();
        SteinerInstance::raw(vertices, arcs, 0, terminals.to_vec())
    }

    #[test]
    fn zero_weight_reach_costs_nothing() {
        let inst = raw(3, &[(0, 1, 0), (1, 2, 0)], &[2]);
        let (cost, tree) = steiner_dp(&inst).unwrap();
        assert_eq!(cost, 0);
        assert_eq!(tree.paths[&2], vec![0, 1]);
    }

    #[test]
    fn unreachable_terminals_are_infeasible() {
        let inst = raw(3, &[(0, 1, 1)], &[2]);
        assert!(matches!(steiner_dp(&inst), Err(Error::Infeasible(_))));
    }

    /// Cheapest arc subset from which every terminal is root-reachable.
    fn brute_force(inst: &SteinerInstance) -> Option<u64> {
        let m = inst.arcs().len();
        let mut best = None;
        for keep in 0..(1u32 << m) {
            let mut seen = BTreeSet::from([inst.root()]);
            loop {
                let before = seen.len();
                for (i, a) in inst.arcs().iter().enumerate() {
                    if keep & (1 << i) != 0 && seen.contains(&a.tail) {
                        seen.insert(a.head);
                    }
                }
                if seen.len() == before {
                    break;
                }
            }
            if !inst.terminals().iter().all(|t| seen.contains(t)) {
                continue;
            }
            let cost: u64 = (0..m)
                .filter(|i| keep & (1 << i) != 0)
                .map(|i| inst.arcs()[i].weight)
                .sum();
            if best.is_none_or(|b| cost < b) {
                best = Some(cost);
            }
        }
        best
    }

    #[test]
    fn shared_prefixes_are_paid_for_once() {
        // Two terminals (4 and 5) behind a common spine 0→1→2; decoy routes
        // are priced to lose unless the spine were double-counted.
        let inst = raw(
            10,
            &[
                (0, 1, 4),
                (1, 2, 4),
                (2, 3, 1),
                (3, 4, 0),
                (2, 5, 2),
                (0, 6, 9),
                (6, 4, 1),
                (0, 7, 9),
                (7, 5, 1),
                (8, 9, 1), // island, never usable
            ],
            &[4, 5],
        );
        let (cost, tree) = steiner_dp(&inst).unwrap();
        assert_eq!(cost, 11, "spine 8 + branch 1+0 + branch 2, spine counted once");
        assert_eq!(Some(cost), brute_force(&inst));
        assert_eq!(tree.paths[&4], vec![0, 1, 2, 3]);
        assert_eq!(tree.paths[&5], vec![0, 1, 4]);
        let rebuilt: u64 = tree.arcs.iter().map(|&a| inst.arcs()[a].weight).sum();
        assert_eq!(rebuilt, cost);
    }

    #[test]
    fn dp_matches_brute_force_on_random_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x57e1);
        for round in 0..300 {
            let n = rng.random_range(3..=7);
            let mut arcs = Vec::new();
            for tail in 0..n {
                for head in 1..n {
                    if tail != head && rng.random_bool(0.35) {
                        arcs.push((tail, head, rng.random_range(0..=6)));
                    }
                }
            }
            if arcs.len() > 12 {
                arcs.truncate(12);
            }
            let terminal_pool: Vec<usize> = (1..n).collect();
            let k = rng.random_range(1..=terminal_pool.len().min(3));
            let terminals: Vec<usize> = terminal_pool.into_iter().take(k).collect();
            let inst = raw(n, &arcs, &terminals);
            match (steiner_dp(&inst), brute_force(&inst)) {
                (Ok((cost, _)), Some(want)) => assert_eq!(cost, want, "round {round}"),
                (Err(Error::Infeasible(_)), None) => {}
                (got, want) => panic!("round {round}: dp {got:?} vs brute {want:?}"),
            }
        }
    }
}
