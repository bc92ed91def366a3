use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use randturn::engine::{
    partition_into_intervals, partition_turn_sequence, play_game, sample_turn_sequence, spot_check_monotone,
    BoardState, GameSettings, LowestFree, Player, PredicateWin, UniformRandom, WinCondition,
};
use randturn::oracle::{enumerate_monotone_families, SetFamily};

fn majority_win(n: usize) -> PredicateWin<impl Fn(&BoardState) -> bool + Sync> {
    PredicateWin::new(move |b: &BoardState| 2 * b.maker_count() > n, true)
}

proptest! {
    #[test]
    fn replaying_a_seed_gives_the_same_record(n in 1usize..40, q in 0.0f64..=1.0, seed: u64) {
        let win = majority_win(n);
        let play = || play_game(
            n,
            &win,
            &mut UniformRandom::new(seed ^ 1),
            &mut UniformRandom::new(seed ^ 2),
            &GameSettings::maker_moves_with(q),
            seed,
        );
        let (a, b) = (play(), play());
        prop_assert_eq!(a.to_json(), b.to_json());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn full_playout_claims_every_element_once(n in 1usize..50, q in 0.0f64..=1.0, seed: u64) {
        let win = majority_win(n);
        let settings = GameSettings { early_stop: false, ..GameSettings::maker_moves_with(q) };
        let rec = play_game(n, &win, &mut UniformRandom::new(seed), &mut LowestFree, &settings, seed);
        prop_assert_eq!(rec.moves.len(), n);
        let board = rec.final_board(n);
        prop_assert_eq!(board.free_count(), 0);
        prop_assert_eq!(board.maker_count() + board.breaker_count(), n);
        let mut seen = vec![false; n];
        for &(_, e) in &rec.moves {
            prop_assert!(!std::mem::replace(&mut seen[e], true));
        }
        for (t, &(who, _)) in rec.moves.iter().enumerate() {
            prop_assert_eq!(who, rec.turns[t]);
        }
        prop_assert_eq!(rec.outcome.winner() == Player::Maker, win.maker_wins(&board));
    }

    #[test]
    fn board_counts_follow_ownership(claims in proptest::collection::vec((0usize..30, any::<bool>()), 0..60)) {
        let mut board = BoardState::new(30);
        let mut owner = vec![None; 30];
        for (e, maker) in claims {
            let who = if maker { Player::Maker } else { Player::Breaker };
            let fresh = owner[e].is_none();
            prop_assert_eq!(board.claim(e, who), fresh);
            if fresh {
                owner[e] = Some(who);
            }
            prop_assert_eq!(board.owner(e), owner[e]);
            prop_assert_eq!(board.maker_count() + board.breaker_count() + board.free_count(), 30);
        }
        let makers = owner.iter().filter(|o| **o == Some(Player::Maker)).count();
        prop_assert_eq!(board.maker_count(), makers);
    }

    #[test]
    fn intervals_partition_the_turns(total in 0usize..200, len in 1usize..20, q in 0.0f64..=1.0, seed: u64) {
        let ivs = partition_into_intervals(total, len);
        prop_assert_eq!(ivs.len(), total.div_ceil(len));
        let mut next = 0;
        for iv in &ivs {
            prop_assert_eq!(iv.start, next);
            prop_assert!(!iv.is_empty() && iv.len() <= len);
            next = iv.end;
        }
        prop_assert_eq!(next, total);
        let seq = sample_turn_sequence(total, q, Player::Maker, &mut ChaCha8Rng::seed_from_u64(seed));
        for iv in partition_turn_sequence(&seq, len) {
            prop_assert_eq!(iv.maker_turns + iv.breaker_turns, iv.len());
        }
    }
}

#[test]
fn early_stop_matches_full_playout() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut families = Vec::new();
    for n in 3..=10 {
        families.extend(enumerate_monotone_families(n, 10, &mut rng).unwrap());
    }
    let mut games = 0;
    for (i, family) in families.iter().enumerate() {
        let n = family.n();
        for j in 0..13u64 {
            let seed = (i as u64) << 8 | j;
            let q = [0.2, 0.5, 0.8][j as usize % 3];
            let play = |early_stop| {
                let settings = GameSettings { early_stop, ..GameSettings::maker_moves_with(q) };
                play_game(n, family, &mut UniformRandom::new(seed), &mut UniformRandom::new(!seed), &settings, seed)
            };
            let (short, full) = (play(true), play(false));
            assert_eq!(short.outcome, full.outcome, "family {i} seed {seed}");
            assert!(short.moves.len() <= full.moves.len());
            assert_eq!(short.moves[..], full.moves[..short.moves.len()]);
            games += 1;
        }
    }
    assert!(games >= 1000, "{games} games");
}

#[test]
fn monotone_spot_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let family = SetFamily::from_masks(6, &[0b000111, 0b110000]).unwrap();
    assert!(spot_check_monotone(&family, 6, 500, &mut rng).is_none());
    let parity = PredicateWin::new(|b: &BoardState| b.maker_count() % 2 == 1, false);
    let (small, large) = spot_check_monotone(&parity, 6, 500, &mut rng).expect("parity is not monotone");
    assert!(small.iter().all(|e| large.contains(e)));
    assert_eq!(small.len() % 2, 1);
    assert_eq!(large.len() % 2, 0);
}
