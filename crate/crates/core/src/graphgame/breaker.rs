//! Breaker strategies that aim to isolate a vertex in Maker's graph.

use std::sync::Arc;

use super::{GraphView, StrategyConfig};
use crate::engine::{GameView, Move, Player, Strategy};
use crate::error::{Error, Result};
use crate::graph::EdgeIndex;

/// Stage I grows a Breaker clique `C` on Maker-isolated vertices, one vertex
/// per streak of Breaker turns. Stage II plays BoxMaker on the stars
/// `{vu : u not in C}` of the clique vertices; owning a whole star isolates
/// `v`.
#[derive(Clone, Debug)]
pub struct IsolationBreaker {
    gv: GraphView,
    target_size: usize,
    stage_one_turns: usize,
    clique: Vec<usize>,
    in_clique: Vec<bool>,
    attempt: Option<usize>,
    stage_two_from: Option<usize>,
    star: Option<usize>,
}

pub fn breaker_isolation_strategy(index: Arc<EdgeIndex>, p: f64, config: &StrategyConfig) -> Result<IsolationBreaker> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!("p must lie in (0, 1], got {p}")));
    }
    let n = index.n();
    let target_size = config.clique_size(p).min(n);
    let stage_one_turns = config
        .budget_stage1
        .unwrap_or_else(|| (1.0 / (p * p)).floor().min(1e15) as usize);
    Ok(IsolationBreaker {
        gv: GraphView::new(index),
        target_size,
        stage_one_turns,
        clique: Vec::new(),
        in_clique: vec![false; n],
        attempt: None,
        stage_two_from: None,
        star: None,
    })
}

impl IsolationBreaker {
    pub fn clique(&self) -> &[usize] {
        &self.clique
    }

    pub fn stage_two_started(&self) -> Option<usize> {
        self.stage_two_from
    }

    fn drop_from_clique(&mut self, v: usize) {
        if self.in_clique[v] {
            self.in_clique[v] = false;
            self.clique.retain(|&c| c != v);
        }
    }

    /// Every clique vertex is Maker-isolated and every clique pair is a
    /// Breaker edge.
    fn clique_is_sound(&self) -> bool {
        self.clique.iter().enumerate().all(|(i, &a)| {
            self.gv.maker().degree(a) == 0 && self.clique[i + 1..].iter().all(|&b| self.gv.breaker().has_edge(a, b))
        })
    }

    fn stage_one(&mut self, turn: usize) -> Option<Move> {
        while self.clique.len() < self.target_size && turn < self.stage_one_turns {
            let n = self.gv.n();
            let v = match self.attempt {
                Some(v) => v,
                None => match (0..n).find(|&v| !self.in_clique[v] && self.gv.maker().degree(v) == 0) {
                    Some(v) => v,
                    None => return Some(Move::Forfeit("stage I: no Maker-isolated vertex outside the clique".into())),
                },
            };
            let missing = self.clique.iter().copied().filter(|&u| self.gv.is_free(v, u)).min();
            match missing {
                Some(u) => {
                    self.attempt = Some(v);
                    return Some(Move::Claim(self.gv.index().index(v, u)));
                }
                None => {
                    self.clique.push(v);
                    self.in_clique[v] = true;
                    self.attempt = None;
                    debug_assert!(self.clique_is_sound());
                }
            }
        }
        None
    }

    fn stage_two(&mut self) -> Move {
        let n = self.gv.n();
        // A vertex with no Maker edge and no free edge is isolated for good.
        if (0..n).any(|v| self.gv.maker().degree(v) == 0 && self.gv.free_degree(v) == 0) {
            return Move::Done;
        }
        let untouched = |s: &Self, v: usize| s.gv.maker().degree(v) == 0 && s.gv.free_degree(v) > 0;
        if !self.star.is_some_and(|v| untouched(self, v)) {
            self.star = self.clique.iter().copied().filter(|&v| untouched(self, v)).min();
        }
        let Some(v) = self.star else {
            return Move::Forfeit("stage II: Maker has touched every star".into());
        };
        let u = (0..n)
            .find(|&u| u != v && !self.in_clique[u] && self.gv.is_free(v, u))
            .or_else(|| (0..n).find(|&u| u != v && self.gv.is_free(v, u)))
            .expect("target star has a free edge");
        Move::Claim(self.gv.index().index(v, u))
    }
}

impl Strategy for IsolationBreaker {
    fn choose(&mut self, view: &GameView<'_>) -> Move {
        let first = self.gv.sync(view);
        for &(who, e) in &view.history[first..] {
            if who == Player::Maker {
                let (x, y) = self.gv.index().endpoints(e);
                self.drop_from_clique(x);
                self.drop_from_clique(y);
            }
        }
        // A Maker turn since our last move ends the current attempt.
        if view.history.last().is_none_or(|&(who, _)| who != view.me) {
            self.attempt = None;
        }
        if let Some(a) = self.attempt {
            if self.gv.maker().degree(a) > 0 {
                self.attempt = None;
            }
        }
        if self.stage_two_from.is_none() {
            if let Some(m) = self.stage_one(view.turn) {
                return m;
            }
            if self.clique.len() < 2 {
                return Move::Forfeit(format!("stage I: clique has {} vertices when stage II begins", self.clique.len()));
            }
            self.stage_two_from = Some(view.turn);
        }
        self.stage_two()
    }

    fn stage_starts(&self) -> Vec<(&'static str, usize)> {
        let mut v = vec![("clique", 0)];
        if let Some(t) = self.stage_two_from {
            v.push(("stars", t));
        }
        v
    }
}

/// Focuses on the vertex with the fewest Maker edges (ties: fewest free
/// edges, then lowest index) and claims its lowest free edge.
#[derive(Clone, Debug)]
pub struct StarAttackBreaker {
    gv: GraphView,
}

pub fn star_attack_breaker(index: Arc<EdgeIndex>) -> StarAttackBreaker {
    StarAttackBreaker { gv: GraphView::new(index) }
}

impl Strategy for StarAttackBreaker {
    fn choose(&mut self, view: &GameView<'_>) -> Move {
        self.gv.sync(view);
        let n = self.gv.n();
        let target = (0..n)
            .filter(|&v| self.gv.free_degree(v) > 0)
            .min_by_key(|&v| (self.gv.maker().degree(v), self.gv.free_degree(v), v));
        let Some(v) = target else {
            return Move::Forfeit("no free edge".into());
        };
        let u = (0..n).find(|&u| u != v && self.gv.is_free(v, u)).unwrap();
        Move::Claim(self.gv.index().index(v, u))
    }
}
