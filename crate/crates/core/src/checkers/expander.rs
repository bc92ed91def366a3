use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

/// Most subsets the exact expander check will enumerate.
pub const EXPANDER_SUBSET_GUARD: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExpanderMode {
    Exact,
    /// Random subsets only: can refute, never confirm.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpanderReport {
    pub passes: bool,
    /// A set `U`, `|U| <= R`, with `|N(U)| < c|U|`.
    pub witness: Option<Vec<usize>>,
    pub mode: ExpanderMode,
    /// Set for a sampled pass.
    pub inconclusive: bool,
}

/// `c|U| - |N(U)|` for the external neighbourhood `N(U)`, computed from
/// neighbour lists. Positive means `U` fails to expand.
pub fn expansion_deficit(g: &SimpleGraph, set: &[usize], c: usize) -> i64 {
    let mut inside = vec![false; g.n()];
    for &u in set {
        inside[u] = true;
    }
    let mut seen = vec![false; g.n()];
    let mut boundary = 0i64;
    for &u in set {
        for w in g.neighbors(u) {
            if !inside[w] && !seen[w] {
                seen[w] = true;
                boundary += 1;
            }
        }
    }
    (c * set.len()) as i64 - boundary
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Whether every `U` with `1 <= |U| <= R` has `|N(U)| >= c|U|`.
pub fn is_expander(g: &SimpleGraph, r: usize, c: usize, mode: ExpanderMode) -> Result<ExpanderReport> {
    let n = g.n();
    let r = r.min(n);
    let witness = match mode {
        ExpanderMode::Exact => {
            let needed: u128 = (1..=r).map(|j| binomial(n, j)).sum();
            if needed > EXPANDER_SUBSET_GUARD {
                return Err(Error::GuardExceeded {
                    what: "expander subsets (use sampled mode)",
                    needed,
                    limit: EXPANDER_SUBSET_GUARD,
                });
            }
            let mut search = Exact {
                g,
                r,
                c,
                chosen: Vec::with_capacity(r),
                union: vec![vec![0u64; g.words()]; r + 1],
                members: vec![vec![0u64; g.words()]; r + 1],
            };
            search.run(0)
        }
        ExpanderMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut found = None;
            if r > 0 {
                for _ in 0..samples {
                    let size = rng.gen_range(1..=r);
                    let mut set = sample(&mut rng, n, size).into_vec();
                    set.sort_unstable();
                    if expansion_deficit(g, &set, c) > 0 {
                        found = Some(set);
                        break;
                    }
                }
            }
            found
        }
    };
    if let Some(w) = &witness {
        assert!(w.len() <= r && expansion_deficit(g, w, c) > 0, "expander witness failed re-verification");
    }
    Ok(ExpanderReport {
        passes: witness.is_none(),
        inconclusive: witness.is_none() && matches!(mode, ExpanderMode::Sampled { .. }),
        witness,
        mode,
    })
}

/// Depth-first enumeration of subsets in increasing order, carrying the
/// neighbourhood union and membership bitsets per depth.
struct Exact<'a> {
    g: &'a SimpleGraph,
    r: usize,
    c: usize,
    chosen: Vec<usize>,
    union: Vec<Vec<u64>>,
    members: Vec<Vec<u64>>,
}

impl Exact<'_> {
    fn run(&mut self, from: usize) -> Option<Vec<usize>> {
        let depth = self.chosen.len();
        if depth == self.r {
            return None;
        }
        for v in from..self.g.n() {
            let (lo, hi) = self.union.split_at_mut(depth + 1);
            let (mlo, mhi) = self.members.split_at_mut(depth + 1);
            let row = self.g.row(v);
            let mut boundary = 0u32;
            for w in 0..row.len() {
                let m = mlo[depth][w] | if v / 64 == w { 1 << (v % 64) } else { 0 };
                let u = lo[depth][w] | row[w];
                mhi[0][w] = m;
                hi[0][w] = u;
                boundary += (u & !m).count_ones();
            }
            self.chosen.push(v);
            if (boundary as usize) < self.c * self.chosen.len() {
                return Some(self.chosen.clone());
            }
            if let Some(w) = self.run(v + 1) {
                return Some(w);
            }
            self.chosen.pop();
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_expands() {
        for (n, c) in [(6, 1), (9, 2), (12, 3)] {
            let r = n / (c + 1);
            let rep = is_expander(&SimpleGraph::complete(n), r, c, ExpanderMode::Exact).unwrap();
            assert!(rep.passes && !rep.inconclusive);
            // One more vertex breaks it.
            let rep = is_expander(&SimpleGraph::complete(n), r + 1, c, ExpanderMode::Exact).unwrap();
            assert!(!rep.passes);
        }
    }

    #[test]
    fn star_leaf_is_a_witness() {
        let star = SimpleGraph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]);
        let rep = is_expander(&star, 1, 2, ExpanderMode::Exact).unwrap();
        assert!(!rep.passes);
        assert_eq!(rep.witness, Some(vec![1]));
    }

    #[test]
    fn guard_refuses_huge_enumerations() {
        let g = SimpleGraph::complete(200);
        assert!(matches!(
            is_expander(&g, 5, 2, ExpanderMode::Exact),
            Err(Error::GuardExceeded { .. })
        ));
        let rep = is_expander(&g, 5, 2, ExpanderMode::Sampled { samples: 100, seed: 1 }).unwrap();
        assert!(rep.passes && rep.inconclusive);
    }

    #[test]
    fn sampled_mode_refutes() {
        let g = SimpleGraph::new(10);
        let rep = is_expander(&g, 2, 1, ExpanderMode::Sampled { samples: 5, seed: 0 }).unwrap();
        assert!(!rep.passes && !rep.inconclusive);
    }
}
