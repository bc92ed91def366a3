//! Slow, obviously-correct reference implementations used as test oracles.
#![allow(dead_code)]

use rand::Rng;
use randturn::graph::SimpleGraph;

/// Held-Karp: `reach[S][v]` = some path from vertex 0 covers exactly `S`
/// and ends at `v`.
pub fn held_karp_hamiltonian(g: &SimpleGraph) -> bool {
    let n = g.n();
    if n < 3 {
        return false;
    }
    let full = (1usize << n) - 1;
    let mut reach = vec![0u32; 1 << n];
    reach[1] = 1;
    for s in 1..=full {
        if s & 1 == 0 || reach[s] == 0 {
            continue;
        }
        for v in 0..n {
            if reach[s] >> v & 1 == 0 {
                continue;
            }
            for w in 0..n {
                if s >> w & 1 == 0 && g.has_edge(v, w) {
                    reach[s | 1 << w] |= 1 << w;
                }
            }
        }
    }
    (1..n).any(|v| reach[full] >> v & 1 == 1 && g.has_edge(v, 0))
}

fn connected_after_removing(g: &SimpleGraph, removed: usize) -> bool {
    let n = g.n();
    let Some(start) = (0..n).find(|&v| removed >> v & 1 == 0) else {
        return true;
    };
    let mut seen = removed | 1 << start;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for w in g.neighbors(v) {
            if seen >> w & 1 == 0 {
                seen |= 1 << w;
                stack.push(w);
            }
        }
    }
    seen == (1 << n) - 1
}

/// k-connected iff more than `k` vertices and no set of fewer than `k`
/// vertices disconnects the rest.
pub fn brute_force_k_connected(g: &SimpleGraph, k: usize) -> bool {
    let n = g.n();
    if n <= k {
        return false;
    }
    (0usize..1 << n)
        .filter(|s| (s.count_ones() as usize) < k)
        .all(|s| connected_after_removing(g, s))
}

pub fn random_graph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> SimpleGraph {
    let mut g = SimpleGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Every subset `U` with `|U| <= r` has at least `c|U|` outside neighbours.
pub fn brute_force_expander(g: &SimpleGraph, r: usize, c: usize) -> bool {
    let n = g.n();
    (1usize..1 << n)
        .filter(|s| s.count_ones() as usize <= r)
        .all(|s| {
            let mut nb = 0usize;
            for v in (0..n).filter(|v| s >> v & 1 == 1) {
                for w in g.neighbors(v) {
                    nb |= 1 << w;
                }
            }
            (nb & !s).count_ones() as usize >= c * s.count_ones() as usize
        })
}
