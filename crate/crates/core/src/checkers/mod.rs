//! Exact verifiers for the graph properties the strategies aim for.
//! Every witness a checker returns is re-verified independently.

mod connectivity;
mod expander;
mod hamilton;
mod lemmas;
mod paths;

pub use connectivity::{is_k_connected, local_vertex_connectivity, verify_separator, ConnectivityReport};
pub use expander::{expansion_deficit, is_expander, ExpanderMode, ExpanderReport, EXPANDER_SUBSET_GUARD};
pub use hamilton::{
    is_hamiltonian, posa_hamilton_cycle, search_hamilton_cycle, verify_hamilton_cycle, HamiltonReport,
    HamiltonSearch,
};
pub use lemmas::{check_lemma_component, check_lemma_connectivity, LemmaVerdict};
pub use paths::{count_boosters, is_booster, longest_path_length, BoosterCount, BoosterVerdict, LONGEST_PATH_MAX_N};

use crate::graph::SimpleGraph;

/// Vertex sets of the connected components, each sorted, ordered by their
/// smallest vertex.
pub fn connected_components(g: &SimpleGraph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for root in 0..n {
        if comp[root] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![root];
        comp[root] = id;
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            i += 1;
            for u in g.neighbors(v) {
                if comp[u] == usize::MAX {
                    comp[u] = id;
                    members.push(u);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

pub fn is_connected(g: &SimpleGraph) -> bool {
    g.n() <= 1 || connected_components(g).len() == 1
}

pub fn min_degree(g: &SimpleGraph) -> usize {
    g.min_degree()
}
