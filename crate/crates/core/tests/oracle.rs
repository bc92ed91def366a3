use num_rational::Ratio;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use randturn::oracle::{
    enumerate_monotone_families, expectimax_value, expected_payoff_exact, expected_payoff_monte_carlo,
    greedy_play_value, random_subset_win_probability, Arithmetic, GameValueTable, Position, SetFamily,
};

/// Sum over every subset `z` of the free elements of `P(z) * [maker | z wins]`.
fn brute_force_payoff(family: &SetFamily, maker: u32, breaker: u32, p: Ratio<u64>) -> Ratio<u128> {
    let n = family.n();
    let free: Vec<usize> = (0..n).filter(|&e| (maker | breaker) >> e & 1 == 0).collect();
    let p = Ratio::new(*p.numer() as u128, *p.denom() as u128);
    let q = Ratio::from_integer(1) - p;
    let mut total = Ratio::from_integer(0u128);
    for pick in 0u32..1 << free.len() {
        let z = free.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).fold(0u32, |m, (_, &e)| m | 1 << e);
        if family.wins(maker | z) {
            let k = pick.count_ones() as i32;
            total += p.pow(k) * q.pow(free.len() as i32 - k);
        }
    }
    total
}

fn family_strategy(max_n: usize) -> impl Strategy<Value = SetFamily> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(1u32..1 << n, 1..4).prop_map(move |sets| SetFamily::from_masks(n, &sets).unwrap())
    })
}

fn position_strategy(n: usize) -> impl Strategy<Value = Position> {
    proptest::collection::vec(0u8..3, n).prop_map(|cells| {
        let (mut maker, mut breaker) = (0u32, 0u32);
        for (e, c) in cells.into_iter().enumerate() {
            match c {
                1 => maker |= 1 << e,
                2 => breaker |= 1 << e,
                _ => {}
            }
        }
        Position::new(maker, breaker).unwrap()
    })
}

fn probability() -> impl Strategy<Value = Ratio<u64>> {
    (1u64..=12).prop_flat_map(|b| (0..=b).prop_map(move |a| Ratio::new(a, b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn payoff_matches_subset_sum(
        (family, pos) in family_strategy(7).prop_flat_map(|f| { let n = f.n(); (Just(f), position_strategy(n)) }),
        p in probability(),
    ) {
        let exact = expected_payoff_exact(&family, pos, p, Arithmetic::Rational).unwrap().exact().unwrap();
        prop_assert_eq!(exact, brute_force_payoff(&family, pos.maker, pos.breaker, p));
    }

    #[test]
    fn optimal_value_equals_payoff_at_every_position(
        (family, pos) in family_strategy(6).prop_flat_map(|f| { let n = f.n(); (Just(f), position_strategy(n)) }),
        p in probability(),
    ) {
        let value = expectimax_value(&family, pos, p, Arithmetic::Rational).unwrap();
        let payoff = expected_payoff_exact(&family, pos, p, Arithmetic::Rational).unwrap();
        prop_assert_eq!(value, payoff);
        let float = expectimax_value(&family, pos, p, Arithmetic::Float).unwrap().to_f64();
        prop_assert!((float - value.to_f64()).abs() <= 1e-12);
    }

    #[test]
    fn value_is_nondecreasing_in_p(family in family_strategy(8), a in 0u64..=20, b in 0u64..=20) {
        let (lo, hi) = (Ratio::new(a.min(b), 20), Ratio::new(a.max(b), 20));
        let v = |p| random_subset_win_probability(&family, p, Arithmetic::Rational).unwrap().exact().unwrap();
        prop_assert!(v(lo) <= v(hi));
    }

    #[test]
    fn family_text_round_trips(family in family_strategy(10)) {
        let back = SetFamily::parse(&family.to_text(), Some(family.n())).unwrap();
        prop_assert_eq!(back.minimal_sets(), family.minimal_sets());
    }
}

#[test]
fn greedy_play_is_optimal_on_small_boards() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for n in 1..=7 {
        for family in enumerate_monotone_families(n, 12, &mut rng).unwrap() {
            for p in [Ratio::new(1, 10), Ratio::new(1, 3), Ratio::new(1, 2), Ratio::new(4, 5)] {
                let best = expectimax_value(&family, Position::empty(), p, Arithmetic::Rational).unwrap();
                assert_eq!(greedy_play_value(&family, Position::empty(), p).unwrap(), best, "{family:?} p={p}");
            }
        }
    }
}

#[test]
fn memo_table_is_transparent() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for family in enumerate_monotone_families(6, 20, &mut rng).unwrap() {
        let p = Ratio::new(2, 7);
        let mut memo = GameValueTable::new(family.clone(), p, Arithmetic::Rational).unwrap();
        let mut plain = GameValueTable::unmemoized(family.clone(), p, Arithmetic::Rational).unwrap();
        for maker in 0u32..64 {
            let breaker = !maker & 0b101010;
            let pos = Position::new(maker, breaker).unwrap();
            assert_eq!(memo.value(pos).unwrap(), plain.value(pos).unwrap());
        }
    }
}

#[test]
fn monte_carlo_brackets_the_exact_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let family = SetFamily::from_masks(8, &[0b0000_1111, 0b1111_0000, 0b1010_1010]).unwrap();
    let pos = Position::new(0b1, 0b1000_0000).unwrap();
    let exact = expected_payoff_exact(&family, pos, Ratio::new(3, 5), Arithmetic::Rational).unwrap().to_f64();
    let est = expected_payoff_monte_carlo(&family, pos, 0.6, 200_000, &mut rng).unwrap();
    assert!((est.mean - exact).abs() <= 4.0 * est.std_error, "{} vs {exact}", est.mean);
}
