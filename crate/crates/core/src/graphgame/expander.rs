//! Maker builds a graph in which every vertex chose `d` incident edges, by
//! playing d-Maker in a MinBox game whose boxes are the vertices.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{build_balanced_tournament, StrategyConfig, TournamentAssignment};
use crate::boxgame::{choose_interval_params, MinBoxPlanner};
use crate::engine::{GameView, Move, Player, Strategy};
use crate::error::{Error, Result};
use crate::graph::EdgeIndex;

/// The expander stage as a reusable component. Box `F_v` has `floor(beta n)`
/// slots; Breaker edges in `A_v` are booked into `F_v` (or the lowest box
/// with room once `F_v` is full), and a d-Maker move in `F_u` becomes a
/// random free edge of `A_u`.
#[derive(Clone, Debug)]
pub struct ExpanderBuilder {
    tournament: TournamentAssignment,
    planner: MinBoxPlanner,
    rng: ChaCha8Rng,
    chosen: Vec<usize>,
    processed: usize,
}

impl ExpanderBuilder {
    pub fn new(index: &EdgeIndex, config: &StrategyConfig, p: f64, total_turns: usize, seed: u64) -> Result<Self> {
        config.validate()?;
        let n = index.n();
        let s = (config.beta * n as f64).floor() as usize;
        if s < config.d {
            return Err(Error::InvalidParameter(format!(
                "box size floor(beta n) = {s} is below d = {}",
                config.d
            )));
        }
        if p * (n as f64) < config.c1() * (n as f64).ln() {
            log::warn!("p = {p} is below the expander strategy's C ln n / n for n = {n}");
        }
        let params = choose_interval_params(config.epsilon)?;
        Ok(ExpanderBuilder {
            tournament: build_balanced_tournament(index)?,
            planner: MinBoxPlanner::new(n, s, config.d, p, params, total_turns)?,
            rng: ChaCha8Rng::seed_from_u64(seed),
            chosen: vec![0; n],
            processed: 0,
        })
    }

    pub fn finished(&self) -> bool {
        self.planner.finished()
    }

    pub fn tournament(&self) -> &TournamentAssignment {
        &self.tournament
    }

    /// Edges Maker chose from each `A_v` so far.
    pub fn chosen(&self) -> &[usize] {
        &self.chosen
    }

    pub(crate) fn observe(&mut self, history: &[(Player, usize)], me: Player) {
        for (turn, &(who, e)) in history.iter().enumerate().skip(self.processed) {
            if who != me {
                self.planner.observe_opponent_in_box(turn, self.tournament.owner(e));
            }
        }
        self.processed = history.len();
    }

    /// Maker's move in the expander stage: `Claim`, or `Forfeit` when the
    /// simulation cannot be followed.
    pub fn next_move(&mut self, view: &GameView<'_>) -> Move {
        self.observe(view.history, view.me);
        let (u, _) = match self.planner.choose(view.turn) {
            Ok(choice) => choice,
            Err(reason) => return Move::Forfeit(reason),
        };
        let free: Vec<usize> = self
            .tournament
            .edges_of(u)
            .iter()
            .copied()
            .filter(|&e| view.board.is_free(e))
            .collect();
        match free.choose(&mut self.rng) {
            Some(&e) => {
                self.chosen[u] += 1;
                Move::Claim(e)
            }
            None => Move::Forfeit(format!("A_{u} has no free edge")),
        }
    }
}

/// Maker that runs the expander stage and stops when every vertex has
/// chosen `d` edges.
#[derive(Clone, Debug)]
pub struct ExpanderMaker {
    builder: ExpanderBuilder,
    budget: usize,
}

pub fn maker_expander_strategy(index: Arc<EdgeIndex>, config: &StrategyConfig, p: f64, seed: u64) -> Result<ExpanderMaker> {
    let n = index.n();
    let budget = config.stage1_budget(n);
    Ok(ExpanderMaker {
        builder: ExpanderBuilder::new(&index, config, p, budget.min(index.n_edges()), seed)?,
        budget,
    })
}

impl ExpanderMaker {
    pub fn builder(&self) -> &ExpanderBuilder {
        &self.builder
    }
}

impl Strategy for ExpanderMaker {
    fn choose(&mut self, view: &GameView<'_>) -> Move {
        self.builder.observe(view.history, view.me);
        if self.builder.finished() {
            return Move::Done;
        }
        if view.turn >= self.budget {
            return Move::Concede("expander stage: turn budget exhausted".into());
        }
        self.builder.next_move(view)
    }

    fn stage_starts(&self) -> Vec<(&'static str, usize)> {
        vec![("expander", 0)]
    }
}
