//! Implication checks: when a graph meets an expansion premise, the promised
//! conclusion must hold.

use serde::{Deserialize, Serialize};

use super::{connected_components, is_expander, is_k_connected, ExpanderMode};
use crate::error::Result;
use crate::graph::SimpleGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LemmaVerdict {
    /// The premise fails.
    VacuousPass,
    Pass,
    Counterexample,
}

fn verdict(premise: bool, conclusion: impl FnOnce() -> Result<bool>) -> Result<LemmaVerdict> {
    if !premise {
        return Ok(LemmaVerdict::VacuousPass);
    }
    Ok(if conclusion()? {
        LemmaVerdict::Pass
    } else {
        LemmaVerdict::Counterexample
    })
}

/// An `(R, c)`-expander with `c >= k` and `2Rc >= n + k` is k-connected.
pub fn check_lemma_connectivity(g: &SimpleGraph, r: usize, c: usize, k: usize) -> Result<LemmaVerdict> {
    let n = g.n();
    let premise = c >= k && 2 * r * c >= n + k && is_expander(g, r, c, ExpanderMode::Exact)?.passes;
    verdict(premise, || Ok(is_k_connected(g, k)?.k_connected))
}

/// Every component of an `(R, c)`-expander has at least `R(c+1)` vertices.
pub fn check_lemma_component(g: &SimpleGraph, r: usize, c: usize) -> Result<LemmaVerdict> {
    let premise = is_expander(g, r, c, ExpanderMode::Exact)?.passes;
    verdict(premise, || {
        Ok(connected_components(g)
            .iter()
            .all(|comp| comp.len() >= r * (c + 1)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_passes_connectivity() {
        assert_eq!(check_lemma_connectivity(&SimpleGraph::complete(9), 3, 2, 2).unwrap(), LemmaVerdict::Pass);
        // In K_8 a 3-set sees only 5 outside vertices, so the expansion
        // premise fails at R = 3, c = 2.
        assert_eq!(
            check_lemma_connectivity(&SimpleGraph::complete(8), 3, 2, 2).unwrap(),
            LemmaVerdict::VacuousPass
        );
    }

    #[test]
    fn star_is_vacuous() {
        let star = SimpleGraph::from_edges(8, &(1..8).map(|v| (0, v)).collect::<Vec<_>>());
        assert_eq!(check_lemma_connectivity(&star, 3, 2, 2).unwrap(), LemmaVerdict::VacuousPass);
    }

    #[test]
    fn component_sizes() {
        assert_eq!(check_lemma_component(&SimpleGraph::complete(6), 2, 2).unwrap(), LemmaVerdict::Pass);
        let mut two = SimpleGraph::new(12);
        for base in [0, 6] {
            for a in base..base + 6 {
                for b in a + 1..base + 6 {
                    two.add_edge(a, b);
                }
            }
        }
        assert_eq!(check_lemma_component(&two, 2, 2).unwrap(), LemmaVerdict::Pass);
    }
}
