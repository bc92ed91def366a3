use super::hamilton::is_hamiltonian;
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

/// Largest `n` for the exponential longest-path DP.
pub const LONGEST_PATH_MAX_N: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoosterVerdict {
    pub booster: bool,
    /// Only the Hamiltonicity branch was evaluated (`n` above the DP limit).
    pub partial: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoosterCount {
    pub count: usize,
    pub non_edges: usize,
    pub partial: bool,
}

fn guard(n: usize) -> Result<()> {
    if n > LONGEST_PATH_MAX_N {
        return Err(Error::GuardExceeded {
            what: "longest-path vertices",
            needed: n as u128,
            limit: LONGEST_PATH_MAX_N as u128,
        });
    }
    Ok(())
}

/// `ends[mask]`: vertices at which some path covering exactly `mask` ends.
/// With `start = Some(s)` only paths starting at `s` count.
fn path_ends(g: &SimpleGraph, start: Option<usize>) -> Vec<u32> {
    let n = g.n();
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).fold(0u32, |m, u| m | 1 << u)).collect();
    let mut ends = vec![0u32; 1 << n];
    match start {
        Some(s) => ends[1 << s] = 1 << s,
        None => (0..n).for_each(|v| ends[1 << v] = 1 << v),
    }
    for mask in 1..(1usize << n) {
        let mut e = ends[mask];
        while e != 0 {
            let v = e.trailing_zeros() as usize;
            e &= e - 1;
            let mut next = adj[v] & !(mask as u32);
            while next != 0 {
                let u = next.trailing_zeros() as usize;
                next &= next - 1;
                ends[mask | 1 << u] |= 1 << u;
            }
        }
    }
    ends
}

/// Number of vertices on a longest path (0 for the empty graph).
pub fn longest_path_length(g: &SimpleGraph) -> Result<usize> {
    guard(g.n())?;
    let ends = path_ends(g, None);
    Ok(best_len(&ends))
}

fn best_len(ends: &[u32]) -> usize {
    ends.iter()
        .enumerate()
        .filter(|&(_, &e)| e != 0)
        .map(|(m, _)| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Precomputed tables answering "is `{a, b}` a booster" for one graph.
struct BoosterTable {
    n: usize,
    ends: Vec<u32>,
    longest: usize,
    /// `reach[b][S]`: most vertices on a path inside `S` ending at `b`
    /// (0 when none).
    reach: Vec<Vec<u8>>,
    /// Endpoints of Hamilton paths from each start, when the longest path
    /// is Hamiltonian.
    ham_path_ends: Option<Vec<u32>>,
}

impl BoosterTable {
    fn new(g: &SimpleGraph) -> Self {
        let n = g.n();
        let full = (1usize << n) - 1;
        let ends = path_ends(g, None);
        let longest = best_len(&ends);
        let mut reach = vec![vec![0u8; 1 << n]; n];
        for (mask, &e) in ends.iter().enumerate() {
            let mut e = e;
            while e != 0 {
                let b = e.trailing_zeros() as usize;
                e &= e - 1;
                reach[b][mask] = mask.count_ones() as u8;
            }
        }
        for table in reach.iter_mut() {
            for bit in 0..n {
                for mask in 0..=full {
                    if mask >> bit & 1 == 1 {
                        table[mask] = table[mask].max(table[mask ^ 1 << bit]);
                    }
                }
            }
        }
        let ham_path_ends = (longest == n).then(|| (0..n).map(|s| path_ends(g, Some(s))[full]).collect());
        BoosterTable {
            n,
            ends,
            longest,
            reach,
            ham_path_ends,
        }
    }

    fn is_booster(&self, a: usize, b: usize) -> bool {
        if let Some(h) = &self.ham_path_ends {
            // No path can beat `n` vertices; only closing a cycle counts.
            return h[a] >> b & 1 == 1;
        }
        // A longer path in G + ab uses ab: a path ending at a, then one
        // starting at b on disjoint vertices (paths are reversible).
        let full = (1usize << self.n) - 1;
        self.ends.iter().enumerate().any(|(mask, &e)| {
            e >> a & 1 == 1 && mask.count_ones() as usize + self.reach[b][full & !mask] as usize > self.longest
        })
    }
}

fn check_pair(g: &SimpleGraph, a: usize, b: usize) -> Result<()> {
    if a == b || a >= g.n() || b >= g.n() {
        return Err(Error::InvalidParameter(format!("{a}-{b} is not a pair of distinct vertices")));
    }
    if g.has_edge(a, b) {
        return Err(Error::InvalidParameter(format!("{a}-{b} is already an edge")));
    }
    Ok(())
}

/// Whether adding `a-b` makes `g` Hamiltonian or lengthens its longest path.
/// Above [`LONGEST_PATH_MAX_N`] vertices only the Hamiltonicity branch is
/// evaluated and the verdict is flagged partial.
pub fn is_booster(g: &SimpleGraph, a: usize, b: usize) -> Result<BoosterVerdict> {
    check_pair(g, a, b)?;
    if is_hamiltonian(g).hamiltonian {
        return Err(Error::AlreadyHamiltonian);
    }
    if g.n() > LONGEST_PATH_MAX_N {
        let mut h = g.clone();
        h.add_edge(a, b);
        return Ok(BoosterVerdict {
            booster: is_hamiltonian(&h).hamiltonian,
            partial: true,
        });
    }
    Ok(BoosterVerdict {
        booster: BoosterTable::new(g).is_booster(a, b),
        partial: false,
    })
}

pub fn count_boosters(g: &SimpleGraph) -> Result<BoosterCount> {
    if is_hamiltonian(g).hamiltonian {
        return Err(Error::AlreadyHamiltonian);
    }
    let non_edges: Vec<(usize, usize)> = g.non_edges().collect();
    if g.n() > LONGEST_PATH_MAX_N {
        let mut count = 0;
        for &(a, b) in &non_edges {
            count += is_booster(g, a, b)?.booster as usize;
        }
        return Ok(BoosterCount {
            count,
            non_edges: non_edges.len(),
            partial: true,
        });
    }
    let table = BoosterTable::new(g);
    Ok(BoosterCount {
        count: non_edges.iter().filter(|&&(a, b)| table.is_booster(a, b)).count(),
        non_edges: non_edges.len(),
        partial: false,
    })
}
