//! Simple graphs on `0..n` and the edge numbering of `K_n`.

use crate::engine::{BoardState, Player};

/// Numbers the pairs `{u, v}`, `u < v`, of `K_n` row by row:
/// `(0,1), (0,2), ..., (0,n-1), (1,2), ...`.
#[derive(Clone, Debug)]
pub struct EdgeIndex {
    n: usize,
    row_start: Vec<usize>,
    ends: Vec<(u32, u32)>,
}

impl EdgeIndex {
    pub fn new(n: usize) -> Self {
        let mut row_start = Vec::with_capacity(n + 1);
        let mut ends = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n {
            row_start.push(ends.len());
            for v in u + 1..n {
                ends.push((u as u32, v as u32));
            }
        }
        row_start.push(ends.len());
        EdgeIndex { n, row_start, ends }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.ends.len()
    }

    pub fn index(&self, u: usize, v: usize) -> usize {
        assert!(u != v && u < self.n && v < self.n, "no edge {u}-{v} in K_{}", self.n);
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.row_start[a] + (b - a - 1)
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        let (u, v) = self.ends[e];
        (u as usize, v as usize)
    }

    /// The graph formed by `player`'s edges.
    pub fn graph_of(&self, board: &BoardState, player: Player) -> SimpleGraph {
        let mut g = SimpleGraph::new(self.n);
        for e in board.elements_of(player) {
            let (u, v) = self.endpoints(e);
            g.add_edge(u, v);
        }
        g
    }

    pub fn graph_from_edges<I: IntoIterator<Item = usize>>(&self, edges: I) -> SimpleGraph {
        let mut g = SimpleGraph::new(self.n);
        for e in edges {
            let (u, v) = self.endpoints(e);
            g.add_edge(u, v);
        }
        g
    }
}

/// Undirected simple graph with bitset adjacency rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    degree: Vec<usize>,
    m: usize,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        SimpleGraph {
            n,
            words,
            rows: vec![0; n * words],
            degree: vec![0; n],
            m: 0,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = SimpleGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = SimpleGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = SimpleGraph::path(n);
        if n >= 3 {
            g.add_edge(n - 1, 0);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = SimpleGraph::new(n);
        for v in 1..n {
            g.add_edge(v - 1, v);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degree[v]
    }

    pub fn words(&self) -> usize {
        self.words
    }

    /// Adjacency row of `v` as a bitset of `words()` words.
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Returns false if the edge was already there. Loops are rejected.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u != v, "loops are not allowed");
        if self.has_edge(u, v) {
            return false;
        }
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
        self.degree[u] += 1;
        self.degree[v] += 1;
        self.m += 1;
        true
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u == v || !self.has_edge(u, v) {
            return false;
        }
        self.rows[u * self.words + v / 64] &= !(1 << (v % 64));
        self.rows[v * self.words + u / 64] &= !(1 << (u % 64));
        self.degree[u] -= 1;
        self.degree[v] -= 1;
        self.m -= 1;
        true
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.row(v))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn non_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| (u + 1..self.n).filter(move |&v| !self.has_edge(u, v)).map(move |v| (u, v)))
    }

    pub fn min_degree(&self) -> usize {
        self.degree.iter().copied().min().unwrap_or(0)
    }

    /// Graph on `0..n` with the vertices in `removed` made isolated.
    pub fn without_vertices(&self, removed: &[usize]) -> SimpleGraph {
        let mut g = self.clone();
        for &v in removed {
            let nbrs: Vec<usize> = g.neighbors(v).collect();
            for u in nbrs {
                g.remove_edge(u, v);
            }
        }
        g
    }

    /// One "u v" line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses "u v" lines; blank lines and `#` comments are skipped. With
    /// `n = None` the vertex count is one more than the largest label.
    pub fn parse_edge_list(text: &str, n: Option<usize>) -> crate::Result<SimpleGraph> {
        let mut pairs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|e| crate::Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            match nums[..] {
                [u, v] if u != v => pairs.push((u, v)),
                _ => return Err(crate::Error::Parse(format!("line {}: expected two distinct vertices", lineno + 1))),
            }
        }
        let max = pairs.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        let n = n.unwrap_or(max);
        if max > n {
            return Err(crate::Error::Parse(format!("vertex {} out of range for n = {n}", max - 1)));
        }
        Ok(SimpleGraph::from_edges(n, &pairs))
    }
}

/// Indices of the set bits of a bitset.
pub(crate) fn bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + b)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_index_is_a_bijection() {
        for n in 0..12 {
            let idx = EdgeIndex::new(n);
            assert_eq!(idx.n_edges(), n * n.saturating_sub(1) / 2);
            for e in 0..idx.n_edges() {
                let (u, v) = idx.endpoints(e);
                assert!(u < v);
                assert_eq!(idx.index(u, v), e);
                assert_eq!(idx.index(v, u), e);
            }
        }
    }

    #[test]
    fn adjacency_stays_symmetric() {
        let mut g = SimpleGraph::new(130);
        assert!(g.add_edge(3, 129));
        assert!(!g.add_edge(129, 3));
        assert!(g.add_edge(64, 0));
        assert!(g.has_edge(129, 3) && g.has_edge(0, 64));
        assert_eq!((g.edge_count(), g.degree(3), g.degree(129)), (2, 1, 1));
        assert!(g.remove_edge(3, 129));
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.neighbors(0).collect::<Vec<_>>(), vec![64]);
    }

    #[test]
    fn standard_graphs() {
        assert_eq!(SimpleGraph::complete(6).edge_count(), 15);
        assert_eq!(SimpleGraph::cycle(6).min_degree(), 2);
        assert_eq!(SimpleGraph::path(4).edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(SimpleGraph::new(5).min_degree(), 0);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = SimpleGraph::cycle(5);
        let h = SimpleGraph::parse_edge_list(&g.to_edge_list(), Some(5)).unwrap();
        assert_eq!(g, h);
        assert!(SimpleGraph::parse_edge_list("0 0\n", None).is_err());
        assert!(SimpleGraph::parse_edge_list("0 7\n", Some(5)).is_err());
        let parsed = SimpleGraph::parse_edge_list("# c\n1 2\n\n", None).unwrap();
        assert_eq!(parsed.n(), 3);
    }
}
