use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::connected_components;
use crate::graph::{bits, SimpleGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonReport {
    pub hamiltonian: bool,
    /// Vertex order of a Hamilton cycle (closing edge implied).
    pub cycle: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HamiltonSearch {
    Cycle(Vec<usize>),
    NoCycle,
    /// The node limit ran out first.
    Undecided,
}

/// Each vertex exactly once and consecutive vertices (cyclically) adjacent.
pub fn verify_hamilton_cycle(g: &SimpleGraph, cycle: &[usize]) -> bool {
    let n = g.n();
    if n < 3 || cycle.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    (0..n).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % n]))
}

/// Exact decision. Cheap necessary conditions first, then rotation-extension
/// attempts, then exhaustive backtracking.
pub fn is_hamiltonian(g: &SimpleGraph) -> HamiltonReport {
    match search_hamilton_cycle(g, None) {
        HamiltonSearch::Cycle(c) => HamiltonReport {
            hamiltonian: true,
            cycle: Some(c),
        },
        HamiltonSearch::NoCycle => HamiltonReport {
            hamiltonian: false,
            cycle: None,
        },
        HamiltonSearch::Undecided => unreachable!("unlimited search always decides"),
    }
}

/// Like [`is_hamiltonian`] but gives up after `node_limit` backtracking
/// nodes.
pub fn search_hamilton_cycle(g: &SimpleGraph, node_limit: Option<u64>) -> HamiltonSearch {
    if fails_necessary_conditions(g) {
        return HamiltonSearch::NoCycle;
    }
    let n = g.n();
    for attempt in 0..POSA_ATTEMPTS {
        if let Some(c) = posa_hamilton_cycle(g, attempt, 20 * n * n) {
            return HamiltonSearch::Cycle(c);
        }
    }
    let mut bt = Backtrack::new(g, node_limit);
    let result = bt.run();
    if let HamiltonSearch::Cycle(c) = &result {
        assert!(verify_hamilton_cycle(g, c), "backtracking produced an invalid cycle");
    }
    result
}

const POSA_ATTEMPTS: u64 = 32;

fn fails_necessary_conditions(g: &SimpleGraph) -> bool {
    let n = g.n();
    if n < 3 || g.min_degree() < 2 || connected_components(g).len() != 1 {
        return true;
    }
    // A vertex with three neighbours of degree two would need three cycle edges.
    let forced_too_many = (0..n).any(|v| g.neighbors(v).filter(|&u| g.degree(u) == 2).count() > 2);
    forced_too_many || has_cut_vertex(g)
}

fn has_cut_vertex(g: &SimpleGraph) -> bool {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    // Iterative DFS from 0; the graph is connected here.
    let mut stack: Vec<(usize, usize, Vec<usize>)> = vec![(0, usize::MAX, g.neighbors(0).collect())];
    disc[0] = 0;
    low[0] = 0;
    let mut root_children = 0;
    while let Some((v, parent, mut rest)) = stack.pop() {
        if let Some(u) = rest.pop() {
            stack.push((v, parent, rest));
            if disc[u] == usize::MAX {
                time += 1;
                disc[u] = time;
                low[u] = time;
                if v == 0 {
                    root_children += 1;
                }
                stack.push((u, v, g.neighbors(u).collect()));
            } else if u != parent {
                low[v] = low[v].min(disc[u]);
            }
        } else if let Some(&(p, _, _)) = stack.last() {
            low[p] = low[p].min(low[v]);
            if p != 0 && low[v] >= disc[p] {
                return true;
            }
        }
    }
    root_children > 1
}

/// Randomised rotation-extension search. Returns a verified cycle or `None`
/// (which proves nothing).
pub fn posa_hamilton_cycle(g: &SimpleGraph, seed: u64, max_steps: usize) -> Option<Vec<usize>> {
    let n = g.n();
    if n < 3 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Odd seeds start at a minimum-degree vertex, which tight graphs need.
    let start = if seed % 2 == 1 {
        let low = g.min_degree();
        let mins: Vec<usize> = (0..n).filter(|&v| g.degree(v) == low).collect();
        mins[rng.gen_range(0..mins.len())]
    } else {
        rng.gen_range(0..n)
    };
    let mut path = vec![start];
    let mut pos = vec![usize::MAX; n];
    pos[start] = 0;
    let mut nbrs: Vec<usize> = Vec::new();
    for _ in 0..max_steps {
        let end = *path.last().unwrap();
        nbrs.clear();
        nbrs.extend(g.neighbors(end).filter(|&u| pos[u] == usize::MAX));
        if let Some(&u) = nbrs.choose(&mut rng) {
            pos[u] = path.len();
            path.push(u);
            continue;
        }
        if g.has_edge(end, path[0]) && path.len() >= 3 {
            if path.len() == n {
                debug_assert!(verify_hamilton_cycle(g, &path));
                return Some(path);
            }
            // The path closes into a cycle; open it towards an outside vertex.
            let hook = path
                .iter()
                .enumerate()
                .find_map(|(j, &x)| g.neighbors(x).find(|&w| pos[w] == usize::MAX).map(|w| (j, w)));
            if let Some((j, w)) = hook {
                let mut next = Vec::with_capacity(path.len() + 1);
                next.push(w);
                next.extend(path[..=j].iter().rev());
                next.extend(path[j + 1..].iter().rev());
                path = next;
                for (i, &x) in path.iter().enumerate() {
                    pos[x] = i;
                }
                continue;
            }
            return None;
        }
        // Rotate: pick a path neighbour of the end and reverse the tail.
        nbrs.clear();
        let last = path.len() - 1;
        nbrs.extend(g.neighbors(end).filter(|&u| pos[u] + 1 < last));
        let &u = nbrs.choose(&mut rng)?;
        let i = pos[u];
        path[i + 1..].reverse();
        for (k, &x) in path.iter().enumerate().skip(i + 1) {
            pos[x] = k;
        }
    }
    None
}

/// Backtracking from vertex 0 with degree and connectivity pruning and
/// forced moves.
struct Backtrack<'a> {
    g: &'a SimpleGraph,
    n: usize,
    limit: Option<u64>,
    nodes: u64,
    path: Vec<usize>,
    free: Vec<u64>,
}

enum Step {
    Found,
    Dead,
    OutOfBudget,
}

impl<'a> Backtrack<'a> {
    fn new(g: &'a SimpleGraph, limit: Option<u64>) -> Self {
        let n = g.n();
        let mut free = vec![0u64; g.words()];
        for v in 1..n {
            free[v / 64] |= 1 << (v % 64);
        }
        Backtrack {
            g,
            n,
            limit,
            nodes: 0,
            path: vec![0],
            free,
        }
    }

    fn run(&mut self) -> HamiltonSearch {
        match self.extend() {
            Step::Found => HamiltonSearch::Cycle(self.path.clone()),
            Step::Dead => HamiltonSearch::NoCycle,
            Step::OutOfBudget => HamiltonSearch::Undecided,
        }
    }

    fn available(&self, w: usize, end: usize) -> usize {
        let row = self.g.row(w);
        let mut count: usize = row.iter().zip(&self.free).map(|(a, b)| (a & b).count_ones() as usize).sum();
        if self.g.has_edge(w, end) {
            count += 1;
        }
        if end != 0 && self.g.has_edge(w, 0) {
            count += 1;
        }
        count
    }

    /// Free vertices plus the end must form one connected piece that also
    /// touches vertex 0.
    fn remaining_connected(&self, end: usize) -> bool {
        let mut seen = vec![0u64; self.free.len()];
        seen[end / 64] |= 1 << (end % 64);
        let mut queue = vec![end];
        let mut touches_start = false;
        while let Some(v) = queue.pop() {
            let row = self.g.row(v);
            touches_start |= v != end && self.g.has_edge(v, 0);
            for w in 0..row.len() {
                let next = row[w] & self.free[w] & !seen[w];
                seen[w] |= next;
                queue.extend(bits(&[next]).map(|b| w * 64 + b));
            }
        }
        let all = self.free.iter().zip(&seen).all(|(f, s)| f & !s == 0);
        all && touches_start
    }

    fn extend(&mut self) -> Step {
        self.nodes += 1;
        if self.limit.is_some_and(|l| self.nodes > l) {
            return Step::OutOfBudget;
        }
        let end = *self.path.last().unwrap();
        if self.path.len() == self.n {
            return if self.g.has_edge(end, 0) { Step::Found } else { Step::Dead };
        }
        let free: Vec<usize> = bits(&self.free).collect();
        // Once the path has two vertices, the end has one cycle slot left
        // (its successor) and vertex 0 one (its predecessor). A free vertex
        // with only two usable neighbours must take every one of them.
        let mut forced = None;
        let mut last = None;
        for &w in &free {
            let a = self.available(w, end);
            if a < 2 {
                return Step::Dead;
            }
            if a == 2 && self.path.len() >= 2 {
                if self.g.has_edge(w, end) {
                    if forced.is_some_and(|f| f != w) {
                        return Step::Dead;
                    }
                    forced = Some(w);
                }
                if self.g.has_edge(w, 0) {
                    if last.is_some_and(|l| l != w) {
                        return Step::Dead;
                    }
                    last = Some(w);
                }
            }
        }
        if free.len() > 1 && forced.is_some() && forced == last {
            return Step::Dead;
        }
        if !self.remaining_connected(end) {
            return Step::Dead;
        }
        let mut candidates: Vec<(usize, usize)> = match forced {
            Some(w) => vec![(0, w)],
            None => self
                .g
                .neighbors(end)
                .filter(|&u| self.is_free(u))
                .map(|u| (self.available(u, end), u))
                .collect(),
        };
        candidates.sort_unstable();
        for (_, u) in candidates {
            self.free[u / 64] &= !(1 << (u % 64));
            self.path.push(u);
            match self.extend() {
                Step::Dead => {}
                other => return other,
            }
            self.path.pop();
            self.free[u / 64] |= 1 << (u % 64);
        }
        Step::Dead
    }

    fn is_free(&self, v: usize) -> bool {
        self.free[v / 64] >> (v % 64) & 1 == 1
    }
}
