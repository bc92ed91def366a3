mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use randturn::checkers::{connected_components, is_hamiltonian, is_k_connected};
use randturn::engine::{play_game, BoardState, GameSettings, GameView, Move, Outcome, Player, UniformRandom};
use randturn::graph::EdgeIndex;
use randturn::graphgame::{
    maker_connect_components, maker_expander_strategy, play_graph_game, star_attack_breaker, BreakerKind, GraphGame,
    GraphView, MakerKind, MinDegreeWin, StrategyConfig,
};

fn tuned(d: usize, beta: f64) -> StrategyConfig {
    StrategyConfig {
        d,
        beta,
        ..StrategyConfig::paper(1)
    }
}

#[test]
fn star_attack_isolates_against_random_maker() {
    let isolated = (0..100u64)
        .into_par_iter()
        .filter(|&seed| {
            let r = play_graph_game(GraphGame::Isolate, 100, 0.1, MakerKind::Random, BreakerKind::Star, &tuned(1, 0.2), seed)
                .unwrap();
            r.record.outcome == Outcome::BreakerWin
        })
        .count();
    assert!(isolated >= 90, "{isolated}/100");
}

#[test]
fn star_attack_wins_below_the_threshold() {
    let maker_wins = (0..50u64)
        .into_par_iter()
        .filter(|&seed| {
            let r = play_graph_game(GraphGame::Ham, 60, 0.05, MakerKind::Paper, BreakerKind::Star, &tuned(4, 0.3), seed)
                .unwrap();
            r.record.outcome == Outcome::MakerWin
        })
        .count();
    assert!(maker_wins <= 10, "{maker_wins}/50");
}

#[test]
fn unopposed_maker_always_wins() {
    for seed in 0..5 {
        let ham = play_graph_game(GraphGame::Ham, 20, 1.0, MakerKind::Paper, BreakerKind::Random, &tuned(2, 0.2), seed)
            .unwrap();
        assert_eq!(ham.record.outcome, Outcome::MakerWin);
        assert!(is_hamiltonian(&ham.maker_graph).hamiltonian);
        let conn = play_graph_game(GraphGame::Kconn, 20, 1.0, MakerKind::Paper, BreakerKind::Random, &tuned(2, 0.2), seed)
            .unwrap();
        assert!(is_k_connected(&conn.maker_graph, 1).unwrap().k_connected);
    }
}

#[test]
fn reported_hamiltonicity_wins_re_verify() {
    let mut checked = 0;
    for (i, &p) in [0.5, 0.7, 0.9].iter().enumerate() {
        for seed in 0..20u64 {
            let r = play_graph_game(GraphGame::Ham, 30, p, MakerKind::Paper, BreakerKind::Random, &tuned(3, 0.2), seed)
                .unwrap();
            if r.record.outcome == Outcome::MakerWin {
                checked += 1;
                assert!(is_hamiltonian(&r.maker_graph).hamiltonian, "p index {i} seed {seed}");
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn expander_choices_respect_the_quota() {
    let n = 40;
    let index = Arc::new(EdgeIndex::new(n));
    let cfg = tuned(3, 0.3);
    let win = MinDegreeWin::new(index.clone(), 3);
    for seed in 0..20 {
        let mut maker = maker_expander_strategy(index.clone(), &cfg, 0.7, seed).unwrap();
        let settings = GameSettings { early_stop: false, ..GameSettings::maker_moves_with(0.7) };
        let rec = play_game(index.n_edges(), &win, &mut maker, &mut UniformRandom::new(!seed), &settings, seed);
        let chosen = maker.builder().chosen();
        assert!(chosen.iter().all(|&c| c <= 3), "seed {seed}: {chosen:?}");
        if rec.strict_forfeit().is_none() {
            assert!(chosen.iter().all(|&c| c == 3), "seed {seed}: {chosen:?}");
        }
        // A_v accounting: claimed plus free is the whole set.
        let board = rec.final_board(index.n_edges());
        let t = maker.builder().tournament();
        for v in 0..n {
            let mine = t.edges_of(v).iter().filter(|&&e| board.owner(e) == Some(Player::Maker)).count();
            let claimed = t.edges_of(v).iter().filter(|&&e| !board.is_free(e)).count();
            let free = t.edges_of(v).iter().filter(|&&e| board.is_free(e)).count();
            assert_eq!(claimed + free, t.edges_of(v).len());
            assert!(mine >= chosen[v]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn connecting_components_merges_two(n in 4usize..30, maker_p in 0.0f64..0.15, breaker_p in 0.0f64..0.6, seed: u64) {
        let index = Arc::new(EdgeIndex::new(n));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let maker = common::random_graph(n, maker_p, &mut rng);
        let mut board = BoardState::new(index.n_edges());
        let mut history = Vec::new();
        for (u, v) in maker.edges() {
            let e = index.index(u, v);
            board.claim(e, Player::Maker);
            history.push((Player::Maker, e));
        }
        for (u, v) in common::random_graph(n, breaker_p, &mut rng).edges() {
            let e = index.index(u, v);
            if board.claim(e, Player::Breaker) {
                history.push((Player::Breaker, e));
            }
        }
        let mut gv = GraphView::new(index.clone());
        let view = GameView { board: &board, history: &history, turn: history.len(), me: Player::Maker };
        gv.sync(&view);
        let before = connected_components(gv.maker()).len();
        match maker_connect_components(&gv, &mut rng) {
            Move::Claim(e) => {
                prop_assert!(board.is_free(e));
                let mut g = gv.maker().clone();
                let (u, v) = index.endpoints(e);
                g.add_edge(u, v);
                prop_assert_eq!(connected_components(&g).len(), before - 1);
            }
            Move::Forfeit(_) => {
                // Only when connected or every cross edge is Breaker's.
                let comps = connected_components(gv.maker());
                let blocked = comps.iter().enumerate().all(|(i, a)| {
                    comps[i + 1..].iter().all(|b| a.iter().all(|&u| b.iter().all(|&w| !gv.is_free(u, w))))
                });
                prop_assert!(before == 1 || blocked);
            }
            other => prop_assert!(false, "unexpected move {:?}", other),
        }
    }

    #[test]
    fn graph_view_tracks_the_board(n in 3usize..25, moves in proptest::collection::vec((any::<proptest::sample::Index>(), any::<bool>()), 0..80)) {
        let index = Arc::new(EdgeIndex::new(n));
        let mut board = BoardState::new(index.n_edges());
        let mut history = Vec::new();
        let mut gv = GraphView::new(index.clone());
        for (idx, maker) in moves {
            let free: Vec<usize> = board.free_elements().collect();
            if free.is_empty() {
                break;
            }
            let e = free[idx.index(free.len())];
            let who = if maker { Player::Maker } else { Player::Breaker };
            board.claim(e, who);
            history.push((who, e));
            let view = GameView { board: &board, history: &history, turn: history.len(), me: Player::Maker };
            prop_assert_eq!(gv.sync(&view), history.len() - 1);
        }
        prop_assert_eq!(gv.maker(), &index.graph_of(&board, Player::Maker));
        prop_assert_eq!(gv.breaker(), &index.graph_of(&board, Player::Breaker));
        for u in 0..n {
            let free_deg = (0..n).filter(|&w| w != u && board.is_free(index.index(u, w))).count();
            prop_assert_eq!(gv.free_degree(u), free_deg);
            for w in u + 1..n {
                let e = index.index(u, w);
                prop_assert_eq!(gv.is_free(u, w), board.is_free(e));
                prop_assert!(!(gv.maker().has_edge(u, w) && gv.breaker().has_edge(u, w)));
            }
        }
        let us: Vec<usize> = (0..n / 2).collect();
        let ws: Vec<usize> = (n / 2..n).collect();
        let between = us.iter().flat_map(|&u| ws.iter().map(move |&w| (u, w))).filter(|&(u, w)| gv.maker().has_edge(u, w)).count();
        prop_assert_eq!(gv.maker_edges_between(&us, &ws), between);
    }
}

#[test]
fn star_attack_targets_an_untouched_vertex() {
    let n = 12;
    let index = Arc::new(EdgeIndex::new(n));
    let mut breaker = star_attack_breaker(index.clone());
    let mut board = BoardState::new(index.n_edges());
    let mut history = Vec::new();
    for w in 1..5 {
        let e = index.index(0, w);
        board.claim(e, Player::Maker);
        history.push((Player::Maker, e));
    }
    let view = GameView { board: &board, history: &history, turn: history.len(), me: Player::Breaker };
    let Move::Claim(e) = randturn::engine::Strategy::choose(&mut breaker, &view) else {
        panic!("star attack must claim");
    };
    let (u, v) = index.endpoints(e);
    let touched = |x: usize| (0..n).any(|w| w != x && board.owner(index.index(x, w)) == Some(Player::Maker));
    assert!(!touched(u) || !touched(v));
}
