//! Random-turn games on the edges of `K_n`. The engine's Maker is the graph
//! Maker; Maker moves with probability `p`.

mod breaker;
mod expander;
mod staged;

pub use breaker::{breaker_isolation_strategy, star_attack_breaker, IsolationBreaker, StarAttackBreaker};
pub use expander::{maker_expander_strategy, ExpanderBuilder, ExpanderMaker};
pub use staged::{
    maker_booster_move, maker_connect_components, maker_hamiltonicity_strategy, maker_kconnectivity_strategy,
    HamiltonicityMaker, KConnectivityMaker,
};

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::checkers::{is_hamiltonian, is_k_connected, posa_hamilton_cycle};
use crate::engine::{
    mirror_strategy, play_game, BoardState, GameRecord, GameSettings, GameView, LowestFree, Player, Strategy,
    UniformRandom, WinCondition,
};
use crate::error::{Error, Result};
use crate::graph::{EdgeIndex, SimpleGraph};

/// Splits `E(K_n)` into the sets `A_v` of a balanced tournament: `v` owns
/// the edges to the vertices it beats.
#[derive(Clone, Debug)]
pub struct TournamentAssignment {
    owner: Vec<u32>,
    lists: Vec<Vec<usize>>,
}

/// Odd `n`: `v` beats `v+1, ..., v+(n-1)/2` (mod n). Even `n`: that
/// tournament on `0..n-1`, plus `n-1` beating the `n/2` lowest vertices.
pub fn build_balanced_tournament(index: &EdgeIndex) -> Result<TournamentAssignment> {
    let n = index.n();
    if n < 2 {
        return Err(Error::InvalidParameter(format!("tournament needs n >= 2, got {n}")));
    }
    let mut owner = vec![u32::MAX; index.n_edges()];
    let odd = if n % 2 == 1 { n } else { n - 1 };
    for v in 0..odd {
        for step in 1..=(odd - 1) / 2 {
            let w = (v + step) % odd;
            owner[index.index(v, w)] = v as u32;
        }
    }
    if n % 2 == 0 {
        let last = n - 1;
        for w in 0..last {
            let winner = if w < n / 2 { last } else { w };
            owner[index.index(last, w)] = winner as u32;
        }
    }
    let mut lists = vec![Vec::new(); n];
    for (e, &v) in owner.iter().enumerate() {
        lists[v as usize].push(e);
    }
    Ok(TournamentAssignment { owner, lists })
}

impl TournamentAssignment {
    /// The vertex whose set `A_v` holds edge `e`.
    pub fn owner(&self, e: usize) -> usize {
        self.owner[e] as usize
    }

    pub fn edges_of(&self, v: usize) -> &[usize] {
        &self.lists[v]
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }
}

/// Constants of the graph strategies. [`StrategyConfig::paper`] gives the
/// published values; desk-scale experiments override them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StrategyConfig {
    /// Connectivity target.
    pub k: usize,
    /// Edges each vertex chooses in the expander stage.
    pub d: usize,
    /// Simulated box size as a fraction of `n`.
    pub beta: f64,
    /// Upper bound on the expansion fraction for building an expander.
    pub delta_expander_bound: f64,
    /// Expansion fraction used by the Hamiltonicity and k-connectivity
    /// strategies.
    pub delta: f64,
    /// Breaker's clique size is `max(2, round(c_clique / p))`.
    pub c_clique: f64,
    pub clique_target: Option<usize>,
    pub epsilon: f64,
    /// Turn budgets; `None` uses `n^2/ln n`, `n^2/ln ln n`, `n^2/ln ln n`
    /// (Breaker's clique stage: `1/p^2`).
    pub budget_stage1: Option<usize>,
    pub budget_stage2: Option<usize>,
    pub budget_stage3: Option<usize>,
    /// Test for a Hamilton cycle every this many Maker moves in the booster
    /// stage.
    pub check_every: usize,
    /// Backtracking nodes per in-game Hamiltonicity test; cycles found by
    /// rotation-extension need none.
    pub hamilton_node_limit: u64,
}

impl Default for StrategyConfig {
    fn default() -> Self {
        StrategyConfig::paper(1)
    }
}

impl StrategyConfig {
    pub fn paper(k: usize) -> Self {
        let ke = k as f64 * std::f64::consts::E;
        StrategyConfig {
            k,
            d: 16 * k,
            beta: 0.2,
            delta_expander_bound: (44.0 * ke).powi(-8),
            delta: (45.0 * ke).powi(-8),
            c_clique: 0.01,
            clique_target: None,
            epsilon: 0.5,
            budget_stage1: None,
            budget_stage2: None,
            budget_stage3: None,
            check_every: 1,
            hamilton_node_limit: 200_000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        if self.k == 0 || self.d == 0 || self.check_every == 0 {
            return bad("k, d and check_every must be positive");
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return bad("beta must lie in (0, 1)");
        }
        if !(self.c_clique > 0.0 && self.epsilon > 0.0 && self.delta > 0.0 && self.delta_expander_bound > 0.0) {
            return bad("c_clique, epsilon and the deltas must be positive");
        }
        if self.beta > 0.2 {
            log::warn!("beta = {} exceeds 1/5; the free-edge margin per vertex is not guaranteed", self.beta);
        }
        Ok(())
    }

    /// `C = 2d / beta`, the constant in `p >= C ln n / n`.
    pub fn c1(&self) -> f64 {
        2.0 * self.d as f64 / self.beta
    }

    /// `R = delta * n`, at least 1.
    pub fn expander_radius(&self, n: usize) -> usize {
        ((self.delta * n as f64).floor() as usize).max(1)
    }

    pub fn stage1_budget(&self, n: usize) -> usize {
        self.budget_stage1.unwrap_or_else(|| budget(n, (n as f64).ln()))
    }

    pub fn stage2_budget(&self, n: usize) -> usize {
        self.budget_stage2.unwrap_or_else(|| budget(n, (n as f64).ln().ln()))
    }

    pub fn stage3_budget(&self, n: usize) -> usize {
        self.budget_stage3.unwrap_or_else(|| budget(n, (n as f64).ln().ln()))
    }

    pub fn clique_size(&self, p: f64) -> usize {
        self.clique_target
            .unwrap_or_else(|| ((self.c_clique / p).round() as usize).max(2))
    }
}

/// `n^2 / log_term` turns, or the whole board when the log term is not
/// positive.
fn budget(n: usize, log_term: f64) -> usize {
    let all = n * n.saturating_sub(1) / 2;
    if log_term > 0.0 {
        ((n * n) as f64 / log_term).floor() as usize
    } else {
        all
    }
}

/// Both players' graphs, kept in step with the game history.
#[derive(Clone, Debug)]
pub struct GraphView {
    index: Arc<EdgeIndex>,
    maker: SimpleGraph,
    breaker: SimpleGraph,
    seen: usize,
}

impl GraphView {
    pub fn new(index: Arc<EdgeIndex>) -> Self {
        let n = index.n();
        GraphView {
            index,
            maker: SimpleGraph::new(n),
            breaker: SimpleGraph::new(n),
            seen: 0,
        }
    }

    /// Applies the moves made since the last call; returns the index of the
    /// first new move in the history.
    pub fn sync(&mut self, view: &GameView<'_>) -> usize {
        let first = self.seen;
        for &(who, e) in &view.history[first..] {
            let (u, v) = self.index.endpoints(e);
            match who {
                Player::Maker => self.maker.add_edge(u, v),
                Player::Breaker => self.breaker.add_edge(u, v),
            };
        }
        self.seen = view.history.len();
        first
    }

    pub fn index(&self) -> &EdgeIndex {
        &self.index
    }

    pub fn n(&self) -> usize {
        self.index.n()
    }

    pub fn maker(&self) -> &SimpleGraph {
        &self.maker
    }

    pub fn breaker(&self) -> &SimpleGraph {
        &self.breaker
    }

    pub fn is_free(&self, u: usize, v: usize) -> bool {
        !self.maker.has_edge(u, v) && !self.breaker.has_edge(u, v)
    }

    pub fn free_degree(&self, v: usize) -> usize {
        self.n() - 1 - self.maker.degree(v) - self.breaker.degree(v)
    }

    /// `|E_M(U, W)|`, edges of Maker's graph with one end in each set.
    pub fn maker_edges_between(&self, us: &[usize], ws: &[usize]) -> usize {
        let mut count = 0;
        for &u in us {
            for &w in ws {
                if u != w && self.maker.has_edge(u, w) {
                    count += 1;
                }
            }
        }
        count
    }

    /// `N_M(U)`: vertices outside `U` adjacent in Maker's graph to some
    /// vertex of `U`.
    pub fn maker_neighbourhood(&self, us: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.n()];
        for &u in us {
            inside[u] = true;
        }
        let mut hit = vec![false; self.n()];
        for &u in us {
            for w in self.maker.neighbors(u) {
                hit[w] |= !inside[w];
            }
        }
        (0..self.n()).filter(|&w| hit[w]).collect()
    }
}

/// Maker wins with a Hamilton cycle.
#[derive(Clone, Debug)]
pub struct HamiltonianWin {
    index: Arc<EdgeIndex>,
}

impl HamiltonianWin {
    pub fn new(index: Arc<EdgeIndex>) -> Self {
        HamiltonianWin { index }
    }
}

impl WinCondition for HamiltonianWin {
    fn maker_wins(&self, board: &BoardState) -> bool {
        is_hamiltonian(&self.index.graph_of(board, Player::Maker)).hamiltonian
    }

    fn is_monotone(&self) -> bool {
        true
    }

    /// Only a found cycle stops the game early; a miss leaves the verdict
    /// to the final exact check. The per-move check is a short
    /// rotation-extension run, not a full search.
    fn maker_won_after(&self, board: &BoardState, last: usize) -> bool {
        let n = self.index.n();
        if board.maker_count() < n {
            return false;
        }
        let g = self.index.graph_of(board, Player::Maker);
        g.min_degree() >= 2 && posa_hamilton_cycle(&g, last as u64, 4 * n * n).is_some()
    }
}

/// Maker wins with a k-vertex-connected spanning graph.
#[derive(Clone, Debug)]
pub struct KConnectedWin {
    index: Arc<EdgeIndex>,
    k: usize,
}

impl KConnectedWin {
    pub fn new(index: Arc<EdgeIndex>, k: usize) -> Self {
        KConnectedWin { index, k }
    }
}

impl WinCondition for KConnectedWin {
    fn maker_wins(&self, board: &BoardState) -> bool {
        let g = self.index.graph_of(board, Player::Maker);
        g.min_degree() >= self.k && is_k_connected(&g, self.k).is_ok_and(|r| r.k_connected)
    }

    fn is_monotone(&self) -> bool {
        true
    }

    fn maker_won_after(&self, board: &BoardState, _last: usize) -> bool {
        board.maker_count() * 2 >= self.k * self.index.n() && self.maker_wins(board)
    }
}

/// Maker wins when every vertex has Maker-degree at least `d`.
#[derive(Clone, Debug)]
pub struct MinDegreeWin {
    index: Arc<EdgeIndex>,
    d: usize,
}

impl MinDegreeWin {
    pub fn new(index: Arc<EdgeIndex>, d: usize) -> Self {
        MinDegreeWin { index, d }
    }
}

impl WinCondition for MinDegreeWin {
    fn maker_wins(&self, board: &BoardState) -> bool {
        self.index.graph_of(board, Player::Maker).min_degree() >= self.d
    }

    fn is_monotone(&self) -> bool {
        true
    }

    fn maker_won_after(&self, board: &BoardState, _last: usize) -> bool {
        board.maker_count() * 2 >= self.d * self.index.n() && self.maker_wins(board)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphGame {
    /// Hamilton cycle.
    Ham,
    /// k-vertex-connectivity with the configured `k`.
    Kconn,
    /// Minimum degree 1: Breaker tries to isolate a vertex.
    Isolate,
    /// Minimum degree `d` with the configured `d`.
    Mindeg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MakerKind {
    Paper,
    Random,
    Mirror,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BreakerKind {
    Paper,
    Random,
    Star,
    Mirror,
}

impl std::str::FromStr for GraphGame {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::Parse(format!("unknown game '{s}'")))
    }
}

impl std::str::FromStr for MakerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::Parse(format!("unknown maker strategy '{s}'")))
    }
}

impl std::str::FromStr for BreakerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::Parse(format!("unknown breaker strategy '{s}'")))
    }
}

pub fn graph_win_condition(game: GraphGame, index: Arc<EdgeIndex>, config: &StrategyConfig) -> Box<dyn WinCondition> {
    match game {
        GraphGame::Ham => Box::new(HamiltonianWin::new(index)),
        GraphGame::Kconn => Box::new(KConnectedWin::new(index, config.k)),
        GraphGame::Isolate => Box::new(MinDegreeWin::new(index, 1)),
        GraphGame::Mindeg => Box::new(MinDegreeWin::new(index, config.d)),
    }
}

pub fn build_maker(
    game: GraphGame,
    kind: MakerKind,
    index: &Arc<EdgeIndex>,
    config: &StrategyConfig,
    p: f64,
    seed: u64,
) -> Result<Box<dyn Strategy>> {
    Ok(match kind {
        MakerKind::Random => Box::new(UniformRandom::new(seed)),
        MakerKind::Mirror => Box::new(mirror_strategy(LowestFree)),
        MakerKind::Paper => match game {
            GraphGame::Ham => Box::new(maker_hamiltonicity_strategy(index.clone(), config, p, seed)?),
            GraphGame::Kconn => Box::new(maker_kconnectivity_strategy(index.clone(), config, p, seed)?),
            GraphGame::Isolate | GraphGame::Mindeg => Box::new(maker_expander_strategy(index.clone(), config, p, seed)?),
        },
    })
}

pub fn build_breaker(
    kind: BreakerKind,
    index: &Arc<EdgeIndex>,
    config: &StrategyConfig,
    p: f64,
    seed: u64,
) -> Result<Box<dyn Strategy>> {
    Ok(match kind {
        BreakerKind::Random => Box::new(UniformRandom::new(seed)),
        BreakerKind::Mirror => Box::new(mirror_strategy(LowestFree)),
        BreakerKind::Star => Box::new(star_attack_breaker(index.clone())),
        BreakerKind::Paper => Box::new(breaker_isolation_strategy(index.clone(), p, config)?),
    })
}

/// One finished graph game.
#[derive(Clone, Debug)]
pub struct GraphGameResult {
    pub record: GameRecord,
    pub maker_graph: SimpleGraph,
    pub breaker_graph: SimpleGraph,
    pub maker_stages: Vec<(&'static str, usize)>,
}

/// Plays `game` on `K_n` with Maker moving with probability `p`. Strategy
/// seeds are derived from `seed`, so one seed fixes the whole game.
pub fn play_graph_game(
    game: GraphGame,
    n: usize,
    p: f64,
    maker: MakerKind,
    breaker: BreakerKind,
    config: &StrategyConfig,
    seed: u64,
) -> Result<GraphGameResult> {
    config.validate()?;
    let index = Arc::new(EdgeIndex::new(n));
    let win = graph_win_condition(game, index.clone(), config);
    let mut m = build_maker(game, maker, &index, config, p, seed ^ 0x6d61_6b65_72)?;
    let mut b = build_breaker(breaker, &index, config, p, seed ^ 0x6272_6561_6b)?;
    let record = play_game(index.n_edges(), win.as_ref(), &mut m, &mut b, &GameSettings::maker_moves_with(p), seed);
    let board = record.final_board(index.n_edges());
    Ok(GraphGameResult {
        maker_graph: index.graph_of(&board, Player::Maker),
        breaker_graph: index.graph_of(&board, Player::Breaker),
        maker_stages: m.stage_starts(),
        record,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tournament_sizes() {
        let t5 = build_balanced_tournament(&EdgeIndex::new(5)).unwrap();
        assert!((0..5).all(|v| t5.edges_of(v).len() == 2));
        let t4 = build_balanced_tournament(&EdgeIndex::new(4)).unwrap();
        let mut sizes: Vec<_> = (0..4).map(|v| t4.edges_of(v).len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 2, 2]);
        assert!(build_balanced_tournament(&EdgeIndex::new(1)).is_err());
    }

    #[test]
    fn tournament_partitions_the_edges() {
        for n in 2..40 {
            let idx = EdgeIndex::new(n);
            let t = build_balanced_tournament(&idx).unwrap();
            let mut seen = vec![0; idx.n_edges()];
            for v in 0..n {
                let size = t.edges_of(v).len();
                assert!(size == (n - 1) / 2 || size == n / 2, "n = {n}, |A_{v}| = {size}");
                for &e in t.edges_of(v) {
                    let (a, b) = idx.endpoints(e);
                    assert!(a == v || b == v);
                    assert_eq!(t.owner(e), v);
                    seen[e] += 1;
                }
            }
            assert!(seen.iter().all(|&c| c == 1));
        }
    }

    #[test]
    fn paper_constants() {
        let c = StrategyConfig::paper(1);
        assert_eq!((c.d, c.beta), (16, 0.2));
        assert_eq!(c.c1(), 160.0);
        assert_eq!(c.expander_radius(10_000), 1);
        assert!(c.validate().is_ok());
        assert_eq!(c.clique_size(0.001), 10);
        assert_eq!(c.clique_size(0.5), 2);
        assert_eq!(StrategyConfig::paper(2).d, 32);
    }

    #[test]
    fn config_round_trips_through_json() {
        let mut c = StrategyConfig::paper(2);
        c.budget_stage2 = Some(300);
        let back: StrategyConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        let partial: StrategyConfig = serde_json::from_str(r#"{"d": 4, "beta": 0.3}"#).unwrap();
        assert_eq!((partial.d, partial.k), (4, 1));
    }

    #[test]
    fn view_queries() {
        let idx = Arc::new(EdgeIndex::new(5));
        let mut gv = GraphView::new(idx.clone());
        let board = BoardState::new(idx.n_edges());
        let history = vec![(Player::Maker, idx.index(0, 1)), (Player::Breaker, idx.index(0, 2)), (Player::Maker, idx.index(1, 3))];
        let view = GameView { board: &board, history: &history, turn: 3, me: Player::Maker };
        assert_eq!(gv.sync(&view), 0);
        assert_eq!(gv.maker_edges_between(&[0, 1], &[1, 3]), 2);
        assert_eq!(gv.maker_neighbourhood(&[0]), vec![1]);
        assert_eq!(gv.maker_neighbourhood(&[0, 1]), vec![3]);
        assert_eq!(gv.free_degree(0), 2);
        assert!(!gv.is_free(0, 2) && gv.is_free(2, 3));
    }

    #[test]
    fn game_names_parse() {
        assert_eq!("ham".parse::<GraphGame>().unwrap(), GraphGame::Ham);
        assert_eq!("star".parse::<BreakerKind>().unwrap(), BreakerKind::Star);
        assert!("nope".parse::<MakerKind>().is_err());
    }
}
