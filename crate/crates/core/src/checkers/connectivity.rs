use std::collections::VecDeque;

use super::connected_components;
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectivityReport {
    pub k_connected: bool,
    /// A vertex set of size below `k` whose removal disconnects the graph.
    pub separator: Option<Vec<usize>>,
}

/// Whether removing `separator` leaves at least two vertices that are
/// disconnected from each other.
pub fn verify_separator(g: &SimpleGraph, separator: &[usize]) -> bool {
    let mut removed = vec![false; g.n()];
    for &v in separator {
        removed[v] = true;
    }
    let rest = g.without_vertices(separator);
    connected_components(&rest)
        .iter()
        .filter(|c| !removed[c[0]])
        .count()
        >= 2
}

/// Unit-capacity flow network on split vertices: `v_in = 2v`, `v_out = 2v+1`.
struct SplitNetwork {
    head: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<i32>,
    next: Vec<usize>,
}

const NIL: usize = usize::MAX;

impl SplitNetwork {
    fn new(g: &SimpleGraph, s: usize, t: usize) -> Self {
        let n = g.n();
        let big = n as i32;
        let mut net = SplitNetwork {
            head: vec![NIL; 2 * n],
            to: Vec::new(),
            cap: Vec::new(),
            next: Vec::new(),
        };
        for v in 0..n {
            let c = if v == s || v == t { big } else { 1 };
            net.arc(2 * v, 2 * v + 1, c);
        }
        for (u, v) in g.edges() {
            net.arc(2 * u + 1, 2 * v, big);
            net.arc(2 * v + 1, 2 * u, big);
        }
        net
    }

    fn arc(&mut self, a: usize, b: usize, c: i32) {
        for (x, y, cap) in [(a, b, c), (b, a, 0)] {
            self.to.push(y);
            self.cap.push(cap);
            self.next.push(self.head[x]);
            self.head[x] = self.to.len() - 1;
        }
    }

    /// One BFS augmentation; returns false when none exists.
    fn augment(&mut self, source: usize, sink: usize) -> bool {
        let mut via = vec![NIL; self.head.len()];
        let mut seen = vec![false; self.head.len()];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            let mut a = self.head[x];
            while a != NIL {
                let y = self.to[a];
                if self.cap[a] > 0 && !seen[y] {
                    seen[y] = true;
                    via[y] = a;
                    if y == sink {
                        let mut z = sink;
                        while z != source {
                            let arc = via[z];
                            self.cap[arc] -= 1;
                            self.cap[arc ^ 1] += 1;
                            z = self.to[arc ^ 1];
                        }
                        return true;
                    }
                    queue.push_back(y);
                }
                a = self.next[a];
            }
        }
        false
    }

    fn reachable(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[source] = true;
        let mut stack = vec![source];
        while let Some(x) = stack.pop() {
            let mut a = self.head[x];
            while a != NIL {
                if self.cap[a] > 0 && !seen[self.to[a]] {
                    seen[self.to[a]] = true;
                    stack.push(self.to[a]);
                }
                a = self.next[a];
            }
        }
        seen
    }
}

/// Number of internally disjoint `s`-`t` paths, capped at `limit`, for
/// non-adjacent `s != t`. Below the cap a minimum separator is returned.
pub fn local_vertex_connectivity(g: &SimpleGraph, s: usize, t: usize, limit: usize) -> (usize, Option<Vec<usize>>) {
    assert!(s != t && !g.has_edge(s, t), "local connectivity needs non-adjacent vertices");
    let mut net = SplitNetwork::new(g, s, t);
    let mut flow = 0;
    while flow < limit && net.augment(2 * s + 1, 2 * t) {
        flow += 1;
    }
    if flow >= limit {
        return (flow, None);
    }
    let seen = net.reachable(2 * s + 1);
    let cut = (0..g.n()).filter(|&v| seen[2 * v] && !seen[2 * v + 1]).collect();
    (flow, Some(cut))
}

/// Exact k-vertex-connectivity. Pairs examined: a minimum-degree vertex `v`
/// against every non-neighbour, and every non-adjacent pair of neighbours of
/// `v`. Graphs with at most `k` vertices are not k-connected.
pub fn is_k_connected(g: &SimpleGraph, k: usize) -> Result<ConnectivityReport> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let n = g.n();
    let fail = |separator: Vec<usize>| {
        assert!(separator.len() < k && verify_separator(g, &separator), "separator failed re-verification");
        Ok(ConnectivityReport {
            k_connected: false,
            separator: Some(separator),
        })
    };
    if n <= k {
        return Ok(ConnectivityReport {
            k_connected: false,
            separator: None,
        });
    }
    let v = (0..n).min_by_key(|&v| (g.degree(v), v)).unwrap();
    if g.degree(v) < k {
        return fail(g.neighbors(v).collect());
    }
    for w in 0..n {
        if w != v && !g.has_edge(v, w) {
            if let (_, Some(cut)) = local_vertex_connectivity(g, v, w, k) {
                return fail(cut);
            }
        }
    }
    let nbrs: Vec<usize> = g.neighbors(v).collect();
    for (i, &x) in nbrs.iter().enumerate() {
        for &y in &nbrs[i + 1..] {
            if !g.has_edge(x, y) {
                if let (_, Some(cut)) = local_vertex_connectivity(g, x, y, k) {
                    return fail(cut);
                }
            }
        }
    }
    Ok(ConnectivityReport {
        k_connected: true,
        separator: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graphs() {
        assert!(is_k_connected(&SimpleGraph::complete(5), 4).unwrap().k_connected);
        let r = is_k_connected(&SimpleGraph::complete(5), 5).unwrap();
        assert!(!r.k_connected && r.separator.is_none());
    }

    #[test]
    fn cycle_is_two_but_not_three_connected() {
        let c6 = SimpleGraph::cycle(6);
        assert!(is_k_connected(&c6, 2).unwrap().k_connected);
        let r = is_k_connected(&c6, 3).unwrap();
        assert!(!r.k_connected);
        let sep = r.separator.unwrap();
        assert_eq!(sep.len(), 2);
        assert!(verify_separator(&c6, &sep));
    }

    #[test]
    fn disconnected_graph_has_empty_separator() {
        let g = SimpleGraph::from_edges(4, &[(0, 1), (2, 3)]);
        let r = is_k_connected(&g, 1).unwrap();
        assert!(!r.k_connected);
        assert!(verify_separator(&g, r.separator.as_ref().unwrap()));
    }

    #[test]
    fn min_cut_between_hubs() {
        // Two K_4's joined through vertices 8 and 9.
        let mut g = SimpleGraph::new(10);
        for base in [0, 4] {
            for a in base..base + 4 {
                for b in a + 1..base + 4 {
                    g.add_edge(a, b);
                }
            }
        }
        for hub in [8, 9] {
            g.add_edge(hub, 0);
            g.add_edge(hub, 1);
            g.add_edge(hub, 4);
            g.add_edge(hub, 5);
        }
        let (flow, cut) = local_vertex_connectivity(&g, 2, 6, 5);
        assert_eq!(flow, 2);
        assert_eq!(cut.unwrap().len(), 2);
        assert!(!is_k_connected(&g, 3).unwrap().k_connected);
        assert!(is_k_connected(&g, 2).unwrap().k_connected);
    }

    #[test]
    fn zero_k_is_rejected() {
        assert!(is_k_connected(&SimpleGraph::complete(3), 0).is_err());
    }
}
