//! Multi-stage Maker strategies built on the expander stage.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ExpanderBuilder, GraphView, StrategyConfig};
use crate::checkers::{connected_components, search_hamilton_cycle, HamiltonSearch};
use crate::engine::{random_free_element, BoardState, GameView, Move, Strategy};
use crate::error::Result;
use crate::graph::EdgeIndex;

/// Claims a random free edge joining two Maker components. Components are
/// ordered by size, then smallest vertex, and pairs are tried in that order
/// (the two smallest first).
pub fn maker_connect_components<R: Rng + ?Sized>(gv: &GraphView, rng: &mut R) -> Move {
    let mut comps = connected_components(gv.maker());
    if comps.len() < 2 {
        return Move::Forfeit("Maker graph is already connected".into());
    }
    comps.sort_by_key(|c| (c.len(), c[0]));
    for i in 0..comps.len() {
        for j in i + 1..comps.len() {
            let mut cross = Vec::new();
            for &u in &comps[i] {
                for &w in &comps[j] {
                    if gv.is_free(u, w) {
                        cross.push(gv.index().index(u, w));
                    }
                }
            }
            if let Some(&e) = cross.choose(rng) {
                return Move::Claim(e);
            }
        }
    }
    Move::Forfeit("no free edge between Maker components".into())
}

/// A uniformly random free edge.
pub fn maker_booster_move<R: Rng + ?Sized>(board: &BoardState, rng: &mut R) -> Move {
    match random_free_element(board, rng) {
        Some(e) => Move::Claim(e),
        None => Move::Forfeit("no free edge".into()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum HamStage {
    Expander,
    Connect,
    Boost,
}

/// Expander stage, then joining components, then random edges until a
/// Hamilton cycle appears.
#[derive(Clone, Debug)]
pub struct HamiltonicityMaker {
    gv: GraphView,
    expander: ExpanderBuilder,
    stage: HamStage,
    stage_start: usize,
    starts: Vec<(&'static str, usize)>,
    budgets: [usize; 3],
    rng: ChaCha8Rng,
    check_every: usize,
    node_limit: u64,
    boost_moves: usize,
}

pub fn maker_hamiltonicity_strategy(
    index: Arc<EdgeIndex>,
    config: &StrategyConfig,
    p: f64,
    seed: u64,
) -> Result<HamiltonicityMaker> {
    let n = index.n();
    let cfg = StrategyConfig { k: 1, ..config.clone() };
    let budgets = [cfg.stage1_budget(n), cfg.stage2_budget(n), cfg.stage3_budget(n)];
    Ok(HamiltonicityMaker {
        expander: ExpanderBuilder::new(&index, &cfg, p, budgets[0].min(index.n_edges()), seed)?,
        gv: GraphView::new(index),
        stage: HamStage::Expander,
        stage_start: 0,
        starts: vec![("expander", 0)],
        budgets,
        rng: ChaCha8Rng::seed_from_u64(seed.wrapping_add(1)),
        check_every: cfg.check_every,
        node_limit: cfg.hamilton_node_limit,
        boost_moves: 0,
    })
}

impl HamiltonicityMaker {
    fn enter(&mut self, stage: HamStage, name: &'static str, turn: usize) {
        self.stage = stage;
        self.stage_start = turn;
        self.starts.push((name, turn));
    }
}

fn tag(stage: &str, m: Move) -> Move {
    match m {
        Move::Forfeit(r) => Move::Forfeit(format!("{stage}: {r}")),
        other => other,
    }
}

impl Strategy for HamiltonicityMaker {
    fn choose(&mut self, view: &GameView<'_>) -> Move {
        self.gv.sync(view);
        let elapsed = view.turn - self.stage_start;
        match self.stage {
            HamStage::Expander => {
                self.expander.observe(view.history, view.me);
                if self.expander.finished() {
                    self.enter(HamStage::Connect, "connect", view.turn);
                    return self.choose(view);
                }
                if elapsed >= self.budgets[0] {
                    return Move::Concede("stage I (expander): turn budget exhausted".into());
                }
                tag("stage I (expander)", self.expander.next_move(view))
            }
            HamStage::Connect => {
                if connected_components(self.gv.maker()).len() <= 1 {
                    self.enter(HamStage::Boost, "booster", view.turn);
                    return self.choose(view);
                }
                if elapsed >= self.budgets[1] {
                    return Move::Concede("stage II (connect): turn budget exhausted".into());
                }
                tag("stage II (connect)", maker_connect_components(&self.gv, &mut self.rng))
            }
            HamStage::Boost => {
                if self.boost_moves % self.check_every == 0 {
                    if let HamiltonSearch::Cycle(_) = search_hamilton_cycle(self.gv.maker(), Some(self.node_limit)) {
                        return Move::Done;
                    }
                }
                if elapsed >= self.budgets[2] {
                    return Move::Concede("stage III (booster): turn budget exhausted".into());
                }
                self.boost_moves += 1;
                tag("stage III (booster)", maker_booster_move(view.board, &mut self.rng))
            }
        }
    }

    fn stage_starts(&self) -> Vec<(&'static str, usize)> {
        self.starts.clone()
    }
}

/// Expander stage with the configured `k` and `d`, then random edges for
/// the stage-II budget.
#[derive(Clone, Debug)]
pub struct KConnectivityMaker {
    expander: ExpanderBuilder,
    in_stage_two: Option<usize>,
    budgets: [usize; 2],
    rng: ChaCha8Rng,
    n_edges: usize,
}

pub fn maker_kconnectivity_strategy(
    index: Arc<EdgeIndex>,
    config: &StrategyConfig,
    p: f64,
    seed: u64,
) -> Result<KConnectivityMaker> {
    let n = index.n();
    let budgets = [config.stage1_budget(n), config.stage2_budget(n)];
    Ok(KConnectivityMaker {
        expander: ExpanderBuilder::new(&index, config, p, budgets[0].min(index.n_edges()), seed)?,
        in_stage_two: None,
        budgets,
        rng: ChaCha8Rng::seed_from_u64(seed.wrapping_add(1)),
        n_edges: index.n_edges(),
    })
}

impl Strategy for KConnectivityMaker {
    fn choose(&mut self, view: &GameView<'_>) -> Move {
        match self.in_stage_two {
            None => {
                self.expander.observe(view.history, view.me);
                if self.expander.finished() {
                    self.in_stage_two = Some(view.turn);
                    return self.choose(view);
                }
                if view.turn >= self.budgets[0] {
                    return Move::Concede("stage I (expander): turn budget exhausted".into());
                }
                tag("stage I (expander)", self.expander.next_move(view))
            }
            Some(start) => {
                if view.turn - start >= self.budgets[1] {
                    return Move::Done;
                }
                // A random edge of K_n; if taken, the lowest free one.
                let e = self.rng.gen_range(0..self.n_edges);
                match view.board.is_free(e) {
                    true => Move::Claim(e),
                    false => match view.board.lowest_free() {
                        Some(e) => Move::Claim(e),
                        None => Move::Done,
                    },
                }
            }
        }
    }

    fn stage_starts(&self) -> Vec<(&'static str, usize)> {
        let mut v = vec![("expander", 0)];
        if let Some(t) = self.in_stage_two {
            v.push(("random edges", t));
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkers::is_hamiltonian;
    use crate::engine::{play_game, GameSettings, Outcome, Player, UniformRandom};
    use crate::graph::SimpleGraph;
    use crate::graphgame::{HamiltonianWin, KConnectedWin};

    fn tuned() -> StrategyConfig {
        StrategyConfig {
            d: 4,
            beta: 0.3,
            ..StrategyConfig::paper(1)
        }
    }

    fn view_from(index: &Arc<EdgeIndex>, maker: &[(usize, usize)], breaker: &[(usize, usize)]) -> (BoardState, Vec<(Player, usize)>) {
        let mut board = BoardState::new(index.n_edges());
        let mut history = Vec::new();
        for &(u, v) in maker {
            board.claim(index.index(u, v), Player::Maker);
            history.push((Player::Maker, index.index(u, v)));
        }
        for &(u, v) in breaker {
            board.claim(index.index(u, v), Player::Breaker);
            history.push((Player::Breaker, index.index(u, v)));
        }
        (board, history)
    }

    #[test]
    fn connecting_two_components() {
        let index = Arc::new(EdgeIndex::new(6));
        let (board, history) = view_from(&index, &[(0, 1), (1, 2), (3, 4), (4, 5)], &[]);
        let mut gv = GraphView::new(index.clone());
        gv.sync(&GameView { board: &board, history: &history, turn: history.len(), me: Player::Maker });
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let Move::Claim(e) = maker_connect_components(&gv, &mut rng) else { panic!() };
        let (u, v) = index.endpoints(e);
        assert!(u < 3 && v >= 3);
    }

    #[test]
    fn connecting_many_components_against_blocking() {
        let n = 30;
        let index = Arc::new(EdgeIndex::new(n));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        // Four paths; Breaker holds half of all cross edges.
        let part = |v: usize| v % 4;
        let maker: Vec<_> = (4..n).map(|v| (v - 4, v)).collect();
        let breaker: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| part(u) != part(v) && rng.gen_bool(0.5))
            .collect();
        let (mut board, mut history) = view_from(&index, &maker, &breaker);
        let mut gv = GraphView::new(index.clone());
        let mut count = 4;
        while count > 1 {
            gv.sync(&GameView { board: &board, history: &history, turn: history.len(), me: Player::Maker });
            assert_eq!(connected_components(gv.maker()).len(), count);
            let Move::Claim(e) = maker_connect_components(&gv, &mut rng) else { panic!() };
            board.claim(e, Player::Maker);
            history.push((Player::Maker, e));
            count -= 1;
        }
    }

    #[test]
    fn booster_stage_closes_a_path() {
        // Maker holds C_n minus one edge; random claims find the closing edge.
        let n = 12;
        let index = Arc::new(EdgeIndex::new(n));
        let budget = 3 * index.n_edges();
        let mut hits = 0;
        for seed in 0..40 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut g = SimpleGraph::path(n);
            let mut board = BoardState::new(index.n_edges());
            for (u, v) in g.edges().collect::<Vec<_>>() {
                board.claim(index.index(u, v), Player::Maker);
            }
            for _ in 0..budget {
                if is_hamiltonian(&g).hamiltonian {
                    hits += 1;
                    break;
                }
                let Move::Claim(e) = maker_booster_move(&board, &mut rng) else { break };
                board.claim(e, Player::Maker);
                let (u, v) = index.endpoints(e);
                g.add_edge(u, v);
            }
        }
        assert!(hits >= 38, "{hits}");
    }

    #[test]
    fn unopposed_maker_builds_a_hamilton_cycle() {
        let index = Arc::new(EdgeIndex::new(24));
        let cfg = tuned();
        let win = HamiltonianWin::new(index.clone());
        for seed in 0..3 {
            let mut maker = maker_hamiltonicity_strategy(index.clone(), &cfg, 1.0, seed).unwrap();
            let rec = play_game(index.n_edges(), &win, &mut maker, &mut UniformRandom::new(0), &GameSettings::maker_moves_with(1.0), seed);
            assert_eq!(rec.outcome, Outcome::MakerWin);
        }
    }

    #[test]
    fn desk_scale_hamiltonicity() {
        let index = Arc::new(EdgeIndex::new(40));
        let cfg = tuned();
        let win = HamiltonianWin::new(index.clone());
        let wins = (0..10)
            .filter(|&seed| {
                let mut maker = maker_hamiltonicity_strategy(index.clone(), &cfg, 0.6, seed).unwrap();
                let rec = play_game(index.n_edges(), &win, &mut maker, &mut UniformRandom::new(seed), &GameSettings::maker_moves_with(0.6), seed);
                if rec.outcome == Outcome::MakerWin {
                    let g = index.graph_of(&rec.final_board(index.n_edges()), Player::Maker);
                    assert!(is_hamiltonian(&g).hamiltonian);
                }
                rec.outcome == Outcome::MakerWin
            })
            .count();
        assert!(wins >= 8, "{wins}");
    }

    #[test]
    fn connectivity_with_k_one() {
        let index = Arc::new(EdgeIndex::new(20));
        let cfg = StrategyConfig { d: 2, beta: 0.2, budget_stage2: Some(50), ..StrategyConfig::paper(1) };
        let win = KConnectedWin::new(index.clone(), 1);
        let mut maker = maker_kconnectivity_strategy(index.clone(), &cfg, 1.0, 4).unwrap();
        let rec = play_game(index.n_edges(), &win, &mut maker, &mut UniformRandom::new(0), &GameSettings::maker_moves_with(1.0), 4);
        assert_eq!(rec.outcome, Outcome::MakerWin);
    }
}
