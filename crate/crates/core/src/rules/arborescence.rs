//! Minimum-cost spanning arborescence (Chu–Liu/Edmonds with cycle
//! contraction). The confluent rule feeds it the reversed, negated static
//! graph; keys let the caller map chosen arcs back to temporal edges.

use std::collections::BTreeMap;

/// Input arc. `key` is the caller's stable identity: it breaks weight ties
/// (lower wins) and survives contraction, so results are deterministic.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Arc {
    pub tail: usize,
    pub head: usize,
    pub weight: i64,
    pub key: usize,
}

/// Cheapest spanning arborescence of the `n`-vertex digraph rooted at
/// `root` (arcs oriented away from the root). Returns the chosen in-arc's
/// key per non-root vertex, or `None` if some vertex is unreachable.
pub(crate) fn min_arborescence(n: usize, root: usize, arcs: &[Arc]) -> Option<BTreeMap<usize, usize>> {
    let level: Vec<LevelArc> = arcs
        .iter()
        .map(|a| LevelArc { tail: a.tail, head: a.head, weight: a.weight, key: a.key })
        .collect();
    let chosen = solve(n, root, &level)?;
    Some(chosen.into_iter().map(|i| (arcs[i].head, arcs[i].key)).collect())
}

#[derive(Debug, Clone, Copy)]
struct LevelArc {
    tail: usize,
    head: usize,
    weight: i64,
    key: usize,
}

/// Returns indices into `arcs`: exactly one in-arc per non-root vertex.
fn solve(n: usize, root: usize, arcs: &[LevelArc]) -> Option<Vec<usize>> {
    if n <= 1 {
        return Some(Vec::new());
    }

    // Cheapest in-arc per vertex; ties fall to the lower key.
    let mut best: Vec<Option<usize>> = vec![None; n];
    for (i, a) in arcs.iter().enumerate() {
        if a.head == root || a.head == a.tail {
            continue;
        }
        match best[a.head] {
            None => best[a.head] = Some(i),
            Some(j) => {
                if (a.weight, a.key) < (arcs[j].weight, arcs[j].key) {
                    best[a.head] = Some(i);
                }
            }
        }
    }
    if (0..n).any(|v| v != root && best[v].is_none()) {
        return None;
    }

    // Walk the chosen-parent pointers looking for a cycle.
    let mut color = vec![0u8; n]; // 0 fresh, 1 on current walk, 2 settled
    color[root] = 2;
    let mut cycle: Vec<usize> = Vec::new();
    for start in 0..n {
        if color[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut v = start;
        while color[v] == 0 {
            color[v] = 1;
            path.push(v);
            v = arcs[best[v].unwrap()].tail;
        }
        if color[v] == 1 {
            let at = path.iter().position(|&x| x == v).unwrap();
            cycle = path[at..].to_vec();
        }
        for &u in &path {
            color[u] = 2;
        }
        if !cycle.is_empty() {
            break;
        }
    }

    if cycle.is_empty() {
        return Some((0..n).filter(|&v| v != root).map(|v| best[v].unwrap()).collect());
    }

    // Contract the cycle into one vertex; entering arcs are discounted by the
    // cycle arc they displace.
    let in_cycle = {
        let mut mark = vec![false; n];
        for &v in &cycle {
            mark[v] = true;
        }
        mark
    };
    let mut vid = vec![usize::MAX; n];
    let mut next_n = 0;
    for v in 0..n {
        if !in_cycle[v] {
            vid[v] = next_n;
            next_n += 1;
        }
    }
    let super_id = next_n;
    next_n += 1;
    for &v in &cycle {
        vid[v] = super_id;
    }

    let mut next_arcs: Vec<LevelArc> = Vec::new();
    let mut from_idx: Vec<usize> = Vec::new();
    for (i, a) in arcs.iter().enumerate() {
        let (t, h) = (vid[a.tail], vid[a.head]);
        if t == h {
            continue;
        }
        let weight = if in_cycle[a.head] {
            a.weight - arcs[best[a.head].unwrap()].weight
        } else {
            a.weight
        };
        next_arcs.push(LevelArc { tail: t, head: h, weight, key: a.key });
        from_idx.push(i);
    }

    let chosen_next = solve(next_n, vid[root], &next_arcs)?;
    let mut chosen: Vec<usize> = chosen_next.into_iter().map(|i| from_idx[i]).collect();

    // The one chosen arc entering the contracted vertex decides where the
    // cycle breaks; every other cycle vertex keeps its cheapest in-arc.
    let entering = *chosen
        .iter()
        .find(|&&i| in_cycle[arcs[i].head])
        .expect("the contracted vertex has exactly one in-arc");
    let broken = arcs[entering].head;
    for &v in &cycle {
        if v != broken {
            chosen.push(best[v].unwrap());
        }
    }
    Some(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cost(arcs: &[Arc], chosen: &BTreeMap<usize, usize>) -> i64 {
        chosen
            .iter()
            .map(|(&head, &key)| {
                arcs.iter().find(|a| a.head == head && a.key == key).unwrap().weight
            })
            .sum()
    }

    /// Cheapest arborescence by enumerating every in-arc choice.
    fn brute_force(n: usize, root: usize, arcs: &[Arc]) -> Option<i64> {
        let options: Vec<Vec<&Arc>> = (0..n)
            .map(|v| arcs.iter().filter(|a| a.head == v && a.tail != v).collect())
            .collect();
        let mut best: Option<i64> = None;
        let mut pick = vec![0usize; n];
        'outer: loop {
            // current combination
            let mut total = 0;
            let mut ok = true;
            for v in 0..n {
                if v == root {
                    continue;
                }
                if options[v].is_empty() {
                    ok = false;
                    break;
                }
                total += options[v][pick[v]].weight;
            }
            if ok {
                // every vertex must walk up to the root without looping
                'verify: for start in 0..n {
                    let mut v = start;
                    for _ in 0..=n {
                        if v == root {
                            continue 'verify;
                        }
                        v = options[v][pick[v]].tail;
                    }
                    ok = false;
                    break;
                }
                if ok {
                    best = Some(best.map_or(total, |b: i64| b.min(total)));
                }
            }
            // next combination
            for v in 0..n {
                if v == root || options[v].is_empty() {
                    if v + 1 == n {
                        break 'outer;
                    }
                    continue;
                }
                pick[v] += 1;
                if pick[v] < options[v].len() {
                    continue 'outer;
                }
                pick[v] = 0;
                if v + 1 == n {
                    break 'outer;
                }
            }
        }
        best
    }

    #[test]
    fn solves_a_known_cycle_instance() {
        // 0 is the root; 1 and 2 prefer each other, forming a cycle that must
        // be broken by the expensive arc from the root.
        let arcs = vec![
            Arc { tail: 0, head: 1, weight: 10, key: 0 },
            Arc { tail: 2, head: 1, weight: 1, key: 1 },
            Arc { tail: 1, head: 2, weight: 1, key: 2 },
            Arc { tail: 0, head: 2, weight: 4, key: 3 },
        ];
        let chosen = min_arborescence(3, 0, &arcs).unwrap();
        assert_eq!(cost(&arcs, &chosen), 5); // 0->2 (4) + 2->1 (1)
        assert_eq!(chosen[&2], 3);
        assert_eq!(chosen[&1], 1);
    }

    #[test]
    fn unreachable_vertices_yield_none() {
        let arcs = vec![Arc { tail: 0, head: 1, weight: 1, key: 0 }];
        assert!(min_arborescence(3, 0, &arcs).is_none());
    }

    #[test]
    fn ties_break_towards_the_lower_key() {
        let arcs = vec![
            Arc { tail: 0, head: 1, weight: 3, key: 7 },
            Arc { tail: 0, head: 1, weight: 3, key: 2 },
        ];
        let chosen = min_arborescence(2, 0, &arcs).unwrap();
        assert_eq!(chosen[&1], 2);
    }

    #[test]
    fn matches_brute_force_on_random_digraphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x0a5b);
        for round in 0..600 {
            let n = rng.random_range(2..=6);
            let mut arcs = Vec::new();
            for t in 0..n {
                for h in 0..n {
                    if t != h && rng.random_bool(0.5) {
                        arcs.push(Arc {
                            tail: t,
                            head: h,
                            weight: rng.random_range(-5..=5),
                            key: arcs.len(),
                        });
                    }
                }
            }
            let fast = min_arborescence(n, 0, &arcs);
            let slow = brute_force(n, 0, &arcs);
            match (fast, slow) {
                (None, None) => {}
                (Some(chosen), Some(want)) => {
                    assert_eq!(cost(&arcs, &chosen), want, "round {round}: wrong optimum");
                    assert_eq!(chosen.len(), n - 1, "round {round}: not spanning");
                }
                (fast, slow) => panic!("round {round}: feasibility mismatch {fast:?} vs {slow:?}"),
            }
        }
    }
}
