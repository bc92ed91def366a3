//! Exact values of random-turn games on small abstract boards.
//!
//! Values are Maker's win probabilities. With `p = a/b` every value at a
//! position with `f` free elements is an integer multiple of `1/b^f`, so the
//! rational path carries `u128` numerators over `b^f`.

use std::collections::HashMap;
use std::fmt;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::{BoardState, GameView, Move, Player, Strategy, WinCondition};
use crate::error::{Error, Result};

/// Largest board for subset enumeration and for [`SetFamily`] tables.
pub const SUBSET_GUARD: usize = 24;
pub const EXPECTIMAX_GUARD: usize = 14;
/// Largest free-element count for the exact expected payoff.
pub const PAYOFF_GUARD: usize = 22;

fn guard(what: &'static str, needed: usize, limit: usize) -> Result<()> {
    if needed > limit {
        return Err(Error::GuardExceeded {
            what,
            needed: needed as u128,
            limit: limit as u128,
        });
    }
    Ok(())
}

fn full_mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

fn bits(mut m: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

/// A monotone family of winning sets on `n <= 24` elements, stored as the
/// minimal sets plus a lookup table over all `2^n` subsets.
#[derive(Clone, PartialEq, Eq)]
pub struct SetFamily {
    n: usize,
    minimal: Vec<u32>,
    table: Vec<u64>,
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SetFamily")
            .field("n", &self.n)
            .field("minimal", &self.minimal)
            .finish()
    }
}

impl SetFamily {
    /// The monotone closure of `sets` (bitmasks over `0..n`).
    pub fn from_masks(n: usize, sets: &[u32]) -> Result<Self> {
        guard("family board size", n, SUBSET_GUARD)?;
        let full = full_mask(n);
        if let Some(bad) = sets.iter().find(|&&s| s & !full != 0) {
            return Err(Error::InvalidParameter(format!("set {bad:#b} leaves the {n}-element board")));
        }
        let mut sorted = sets.to_vec();
        sorted.sort_by_key(|s| (s.count_ones(), *s));
        sorted.dedup();
        let mut minimal: Vec<u32> = Vec::new();
        for s in sorted {
            if !minimal.iter().any(|&m| m & s == m) {
                minimal.push(s);
            }
        }
        minimal.sort_unstable();

        let words = ((1usize << n) + 63) / 64;
        let mut table = vec![0u64; words];
        for &s in &minimal {
            table[s as usize / 64] |= 1 << (s % 64);
        }
        // Close upwards one coordinate at a time.
        const LOW: [u64; 6] = [
            0x5555_5555_5555_5555,
            0x3333_3333_3333_3333,
            0x0f0f_0f0f_0f0f_0f0f,
            0x00ff_00ff_00ff_00ff,
            0x0000_ffff_0000_ffff,
            0x0000_0000_ffff_ffff,
        ];
        for i in 0..n {
            if i < 6 {
                for w in table.iter_mut() {
                    *w |= (*w & LOW[i]) << (1 << i);
                }
            } else {
                let step = 1usize << (i - 6);
                for w in 0..words {
                    if w & step != 0 {
                        table[w] |= table[w ^ step];
                    }
                }
            }
        }
        Ok(SetFamily { n, minimal, table })
    }

    pub fn from_sets(n: usize, sets: &[Vec<usize>]) -> Result<Self> {
        let mut masks = Vec::with_capacity(sets.len());
        for set in sets {
            let mut m = 0u32;
            for &e in set {
                if e >= n.min(32) {
                    return Err(Error::InvalidParameter(format!("element {e} is outside the {n}-element board")));
                }
                m |= 1 << e;
            }
            masks.push(m);
        }
        Self::from_masks(n, &masks)
    }

    /// One winning set per line, elements separated by whitespace. Blank
    /// lines and lines starting with `#` are skipped. Without `n` the board
    /// is the largest element plus one.
    pub fn parse(text: &str, n: Option<usize>) -> Result<Self> {
        let mut sets = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let set = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", no + 1)))?;
            sets.push(set);
        }
        let n = n.unwrap_or_else(|| sets.iter().flatten().map(|&e| e + 1).max().unwrap_or(0));
        Self::from_sets(n, &sets)
    }

    /// The minimal sets in the file format.
    pub fn to_text(&self) -> String {
        self.minimal
            .iter()
            .map(|&m| bits(m).map(|e| e.to_string()).collect::<Vec<_>>().join(" ") + "\n")
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn minimal_sets(&self) -> &[u32] {
        &self.minimal
    }

    pub fn full(&self) -> u32 {
        full_mask(self.n)
    }

    pub fn wins(&self, mask: u32) -> bool {
        let m = mask as usize;
        self.table[m / 64] >> (m % 64) & 1 == 1
    }
}

impl WinCondition for SetFamily {
    fn maker_wins(&self, board: &BoardState) -> bool {
        self.wins(board.maker_mask() as u32)
    }

    fn is_monotone(&self) -> bool {
        true
    }

    fn maker_shut_out_after(&self, board: &BoardState, _last: usize) -> bool {
        !self.wins(self.full() & !(board.breaker_mask() as u32))
    }
}

/// Claimed sets of both players as bitmasks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Position {
    pub maker: u32,
    pub breaker: u32,
}

impl Position {
    pub fn new(maker: u32, breaker: u32) -> Result<Self> {
        if maker & breaker != 0 {
            return Err(Error::InvalidParameter("Maker and Breaker sets overlap".into()));
        }
        Ok(Position { maker, breaker })
    }

    pub fn empty() -> Self {
        Position::default()
    }

    pub fn free(&self, family: &SetFamily) -> u32 {
        family.full() & !(self.maker | self.breaker)
    }

    fn check(&self, family: &SetFamily) -> Result<()> {
        if self.maker & self.breaker != 0 || (self.maker | self.breaker) & !family.full() != 0 {
            return Err(Error::InvalidParameter("position does not fit the board".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    Rational,
    Float,
}

impl std::str::FromStr for Arithmetic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(Arithmetic::Rational),
            "float" => Ok(Arithmetic::Float),
            _ => Err(Error::Parse(format!("unknown arithmetic '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GameValue {
    Exact(Ratio<u128>),
    Float(f64),
}

impl GameValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            GameValue::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            GameValue::Float(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<Ratio<u128>> {
        match self {
            GameValue::Exact(r) => Some(*r),
            GameValue::Float(_) => None,
        }
    }
}

impl fmt::Display for GameValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameValue::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            GameValue::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Parses `a/b` or a decimal such as `0.25` into an exact probability.
pub fn parse_probability(s: &str) -> Result<Ratio<u64>> {
    let bad = || Error::Parse(format!("'{s}' is not a probability"));
    let s = s.trim();
    let r = if let Some((a, b)) = s.split_once('/') {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        Ratio::new(a, b)
    } else {
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10u64.pow(frac.len() as u32);
        let num = if frac.is_empty() { 0 } else { frac.parse::<u64>().map_err(|_| bad())? };
        Ratio::new(int.checked_mul(den).and_then(|x| x.checked_add(num)).ok_or_else(bad)?, den)
    };
    if r > Ratio::from_integer(1) {
        return Err(bad());
    }
    Ok(r)
}

/// Arithmetic for values at positions with a known free count.
trait Arith {
    type V: Copy + PartialOrd;
    fn one(&self, free: u32) -> Self::V;
    fn zero(&self) -> Self::V;
    /// `p * up + (1 - p) * down`, where both have one fewer free element.
    fn mix(&self, up: Self::V, down: Self::V) -> Self::V;
    fn finish(&self, v: Self::V, free: u32) -> GameValue;
}

#[derive(Clone, Debug)]
struct Exact {
    a: u128,
    c: u128,
    pow_b: Vec<u128>,
}

impl Exact {
    fn new(p: Ratio<u64>, n: usize) -> Result<Self> {
        let (a, b) = (*p.numer() as u128, *p.denom() as u128);
        let mut pow_b = vec![1u128];
        for _ in 0..n {
            let next = pow_b.last().unwrap().checked_mul(b).ok_or_else(|| {
                Error::InvalidParameter(format!("denominator {b} to the power {n} overflows 128 bits"))
            })?;
            pow_b.push(next);
        }
        Ok(Exact { a, c: b - a, pow_b })
    }
}

impl Arith for Exact {
    type V = u128;
    fn one(&self, free: u32) -> u128 {
        self.pow_b[free as usize]
    }
    fn zero(&self) -> u128 {
        0
    }
    fn mix(&self, up: u128, down: u128) -> u128 {
        self.a * up + self.c * down
    }
    fn finish(&self, v: u128, free: u32) -> GameValue {
        GameValue::Exact(Ratio::new(v, self.pow_b[free as usize]))
    }
}

#[derive(Clone, Debug)]
struct Float {
    p: f64,
}

impl Arith for Float {
    type V = f64;
    fn one(&self, _free: u32) -> f64 {
        1.0
    }
    fn zero(&self) -> f64 {
        0.0
    }
    fn mix(&self, up: f64, down: f64) -> f64 {
        self.p * up + (1.0 - self.p) * down
    }
    fn finish(&self, v: f64, _free: u32) -> GameValue {
        GameValue::Float(v)
    }
}

fn ratio_to_f64(p: Ratio<u64>) -> f64 {
    *p.numer() as f64 / *p.denom() as f64
}

/// `P(Maker's set plus a p-random subset of the free elements wins)`,
/// summed over subsets with weights `a^k (b-a)^(f-k)` on the scale `b^f`.
fn subset_sum<A: Arith>(arith: &A, family: &SetFamily, maker: u32, free: u32, weight: impl Fn(u32) -> A::V, add: impl Fn(A::V, A::V) -> A::V) -> A::V {
    let mut total = arith.zero();
    let mut z = free;
    loop {
        if family.wins(maker | z) {
            total = add(total, weight(z.count_ones()));
        }
        if z == 0 {
            break;
        }
        z = (z - 1) & free;
    }
    total
}

fn exact_payoff_numerator(e: &Exact, family: &SetFamily, maker: u32, free: u32) -> u128 {
    let f = free.count_ones();
    let pa: Vec<u128> = (0..=f).map(|k| e.a.pow(k)).collect();
    let pc: Vec<u128> = (0..=f).map(|k| e.c.pow(k)).collect();
    subset_sum(e, family, maker, free, |k| pa[k as usize] * pc[(f - k) as usize], |x, y| x + y)
}

fn float_payoff(p: f64, family: &SetFamily, maker: u32, free: u32) -> f64 {
    let f = free.count_ones();
    let w: Vec<f64> = (0..=f).map(|k| p.powi(k as i32) * (1.0 - p).powi((f - k) as i32)).collect();
    subset_sum(&Float { p }, family, maker, free, |k| w[k as usize], |x, y| x + y)
}

/// Probability that a `p`-random subset of the board wins.
pub fn random_subset_win_probability(family: &SetFamily, p: Ratio<u64>, arithmetic: Arithmetic) -> Result<GameValue> {
    guard("subset enumeration board size", family.n(), SUBSET_GUARD)?;
    payoff(family, Position::empty(), p, arithmetic)
}

/// `E[win(T_M ∪ Z)]` for a `p`-random subset `Z` of the free elements.
pub fn expected_payoff_exact(family: &SetFamily, position: Position, p: Ratio<u64>, arithmetic: Arithmetic) -> Result<GameValue> {
    position.check(family)?;
    guard("free elements for exact payoff", position.free(family).count_ones() as usize, PAYOFF_GUARD)?;
    payoff(family, position, p, arithmetic)
}

fn payoff(family: &SetFamily, position: Position, p: Ratio<u64>, arithmetic: Arithmetic) -> Result<GameValue> {
    let free = position.free(family);
    let f = free.count_ones();
    Ok(match arithmetic {
        Arithmetic::Rational => {
            let e = Exact::new(p, f as usize)?;
            e.finish(exact_payoff_numerator(&e, family, position.maker, free), f)
        }
        Arithmetic::Float => GameValue::Float(float_payoff(ratio_to_f64(p), family, position.maker, free)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

pub fn expected_payoff_monte_carlo<R: Rng + ?Sized>(
    family: &SetFamily,
    position: Position,
    p: f64,
    samples: u64,
    rng: &mut R,
) -> Result<MonteCarloEstimate> {
    position.check(family)?;
    if samples == 0 {
        return Err(Error::InvalidParameter("Monte Carlo needs at least one sample".into()));
    }
    let free = position.free(family);
    let mut hits = 0u64;
    for _ in 0..samples {
        let z = bits(free).filter(|_| rng.gen_bool(p)).fold(0u32, |m, e| m | 1 << e);
        hits += family.wins(position.maker | z) as u64;
    }
    let mean = hits as f64 / samples as f64;
    Ok(MonteCarloEstimate {
        mean,
        std_error: (mean * (1.0 - mean) / samples as f64).sqrt(),
        samples,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PayoffMode {
    Exact(Arithmetic),
    MonteCarlo { samples: u64, seed: u64 },
}

pub fn expected_payoff_s(family: &SetFamily, position: Position, p: Ratio<u64>, mode: PayoffMode) -> Result<GameValue> {
    match mode {
        PayoffMode::Exact(arithmetic) => expected_payoff_exact(family, position, p, arithmetic),
        PayoffMode::MonteCarlo { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let est = expected_payoff_monte_carlo(family, position, ratio_to_f64(p), samples, &mut rng)?;
            Ok(GameValue::Float(est.mean))
        }
    }
}

struct Solver<A: Arith> {
    arith: A,
    memo: Option<HashMap<(u32, u32), A::V>>,
}

impl<A: Arith> Solver<A> {
    fn value(&mut self, family: &SetFamily, maker: u32, breaker: u32) -> A::V {
        let free = family.full() & !(maker | breaker);
        let f = free.count_ones();
        if family.wins(maker) {
            return self.arith.one(f);
        }
        if !family.wins(maker | free) {
            return self.arith.zero();
        }
        if let Some(v) = self.memo.as_ref().and_then(|m| m.get(&(maker, breaker))) {
            return *v;
        }
        let mut up: Option<A::V> = None;
        let mut down: Option<A::V> = None;
        for s in bits(free) {
            let bit = 1u32 << s;
            let x = self.value(family, maker | bit, breaker);
            let y = self.value(family, maker, breaker | bit);
            if up.is_none_or(|u| x > u) {
                up = Some(x);
            }
            if down.is_none_or(|d| y < d) {
                down = Some(y);
            }
        }
        // `free` is nonempty: Maker has not won but could.
        let v = self.arith.mix(up.unwrap(), down.unwrap());
        if let Some(m) = self.memo.as_mut() {
            m.insert((maker, breaker), v);
        }
        v
    }
}

enum AnySolver {
    Exact(Solver<Exact>),
    Float(Solver<Float>),
}

/// Memoized expectimax values for one family and one `p`, keyed by the
/// pair of claimed-set bitmasks.
pub struct GameValueTable {
    family: SetFamily,
    p: Ratio<u64>,
    solver: AnySolver,
}

impl GameValueTable {
    pub fn new(family: SetFamily, p: Ratio<u64>, arithmetic: Arithmetic) -> Result<Self> {
        Self::build(family, p, arithmetic, true)
    }

    /// A table that stores nothing; every query recomputes the full tree.
    pub fn unmemoized(family: SetFamily, p: Ratio<u64>, arithmetic: Arithmetic) -> Result<Self> {
        Self::build(family, p, arithmetic, false)
    }

    fn build(family: SetFamily, p: Ratio<u64>, arithmetic: Arithmetic, memo: bool) -> Result<Self> {
        guard("expectimax board size", family.n(), EXPECTIMAX_GUARD)?;
        if p > Ratio::from_integer(1) {
            return Err(Error::InvalidParameter(format!("p = {p} exceeds 1")));
        }
        let solver = match arithmetic {
            Arithmetic::Rational => AnySolver::Exact(Solver {
                arith: Exact::new(p, family.n())?,
                memo: memo.then(HashMap::new),
            }),
            Arithmetic::Float => AnySolver::Float(Solver {
                arith: Float { p: ratio_to_f64(p) },
                memo: memo.then(HashMap::new),
            }),
        };
        Ok(GameValueTable { family, p, solver })
    }

    pub fn value(&mut self, position: Position) -> Result<GameValue> {
        position.check(&self.family)?;
        let f = position.free(&self.family).count_ones();
        Ok(match &mut self.solver {
            AnySolver::Exact(s) => {
                let v = s.value(&self.family, position.maker, position.breaker);
                s.arith.finish(v, f)
            }
            AnySolver::Float(s) => {
                let v = s.value(&self.family, position.maker, position.breaker);
                s.arith.finish(v, f)
            }
        })
    }

    /// Stored positions.
    pub fn len(&self) -> usize {
        match &self.solver {
            AnySolver::Exact(s) => s.memo.as_ref().map_or(0, HashMap::len),
            AnySolver::Float(s) => s.memo.as_ref().map_or(0, HashMap::len),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn p(&self) -> Ratio<u64> {
        self.p
    }

    pub fn family(&self) -> &SetFamily {
        &self.family
    }
}

/// Value of `position` under optimal play by both sides.
pub fn expectimax_value(family: &SetFamily, position: Position, p: Ratio<u64>, arithmetic: Arithmetic) -> Result<GameValue> {
    GameValueTable::new(family.clone(), p, arithmetic)?.value(position)
}

/// Picks the free element that maximizes (Maker) or minimizes (Breaker)
/// the expected payoff after claiming it. Ties go to the lowest index.
fn greedy_choice(family: &SetFamily, p: Ratio<u64>, maker: u32, breaker: u32, me: Player, arithmetic: Arithmetic) -> Option<usize> {
    let free = family.full() & !(maker | breaker);
    let f = free.count_ones() as usize;
    let mut best: Option<(usize, f64, u128)> = None;
    let exact = match arithmetic {
        Arithmetic::Rational => Exact::new(p, f).ok(),
        Arithmetic::Float => None,
    };
    let pf = ratio_to_f64(p);
    for s in bits(free) {
        let bit = 1u32 << s;
        let m = if me == Player::Maker { maker | bit } else { maker };
        let (xf, xe) = match &exact {
            Some(e) => (0.0, exact_payoff_numerator(e, family, m, free & !bit)),
            None => (float_payoff(pf, family, m, free & !bit), 0),
        };
        let better = match best {
            None => true,
            Some((_, bf, be)) => match (me, exact.is_some()) {
                (Player::Maker, true) => xe > be,
                (Player::Maker, false) => xf > bf,
                (Player::Breaker, true) => xe < be,
                (Player::Breaker, false) => xf < bf,
            },
        };
        if better {
            best = Some((s, xf, xe));
        }
    }
    best.map(|(s, _, _)| s)
}

/// Plays the element that is best for its side under the expected payoff
/// `S(T_M, T_B)`.
#[derive(Clone, Debug)]
pub struct GreedyS {
    family: SetFamily,
    p: Ratio<u64>,
    arithmetic: Arithmetic,
}

pub fn greedy_s_strategy(family: SetFamily, p: Ratio<u64>, arithmetic: Arithmetic) -> Result<GreedyS> {
    guard("board size for the greedy payoff strategy", family.n(), PAYOFF_GUARD)?;
    Ok(GreedyS { family, p, arithmetic })
}

impl GreedyS {
    pub fn choose_at(&self, position: Position, me: Player) -> Option<usize> {
        greedy_choice(&self.family, self.p, position.maker, position.breaker, me, self.arithmetic)
    }
}

impl Strategy for GreedyS {
    fn choose(&mut self, view: &GameView<'_>) -> Move {
        let position = Position {
            maker: view.board.maker_mask() as u32,
            breaker: view.board.breaker_mask() as u32,
        };
        match self.choose_at(position, view.me) {
            Some(s) => Move::Claim(s),
            None => Move::Forfeit("no free element".into()),
        }
    }
}

/// Value of the game when both sides play [`GreedyS`], from the same
/// recursion as expectimax with the greedy choices in place of max and min.
pub fn greedy_play_value(family: &SetFamily, position: Position, p: Ratio<u64>) -> Result<GameValue> {
    guard("greedy play board size", family.n(), EXPECTIMAX_GUARD)?;
    position.check(family)?;
    let e = Exact::new(p, family.n())?;
    let mut memo = HashMap::new();
    let v = greedy_rec(family, p, &e, position.maker, position.breaker, &mut memo);
    Ok(e.finish(v, position.free(family).count_ones()))
}

fn greedy_rec(family: &SetFamily, p: Ratio<u64>, e: &Exact, maker: u32, breaker: u32, memo: &mut HashMap<(u32, u32), u128>) -> u128 {
    let free = family.full() & !(maker | breaker);
    if family.wins(maker) {
        return e.one(free.count_ones());
    }
    if !family.wins(maker | free) {
        return 0;
    }
    if let Some(&v) = memo.get(&(maker, breaker)) {
        return v;
    }
    let sm = greedy_choice(family, p, maker, breaker, Player::Maker, Arithmetic::Rational).unwrap();
    let sb = greedy_choice(family, p, maker, breaker, Player::Breaker, Arithmetic::Rational).unwrap();
    let up = greedy_rec(family, p, e, maker | 1 << sm, breaker, memo);
    let down = greedy_rec(family, p, e, maker, breaker | 1 << sb, memo);
    let v = e.mix(up, down);
    memo.insert((maker, breaker), v);
    v
}

/// Test fixtures: the family `{full board}`, the family of all nonempty
/// sets, then random upsets generated by a few random sets.
pub fn enumerate_monotone_families<R: Rng + ?Sized>(n: usize, count: usize, rng: &mut R) -> Result<Vec<SetFamily>> {
    if n == 0 {
        return Err(Error::InvalidParameter("board must have at least one element".into()));
    }
    guard("family board size", n, SUBSET_GUARD)?;
    let full = full_mask(n);
    let mut out = Vec::with_capacity(count);
    if count > 0 {
        out.push(SetFamily::from_masks(n, &[full])?);
    }
    if count > 1 {
        out.push(SetFamily::from_masks(n, &(0..n).map(|i| 1u32 << i).collect::<Vec<_>>())?);
    }
    while out.len() < count {
        let generators = rng.gen_range(1..=n.min(5));
        let density = rng.gen_range(0.2..0.7);
        let sets: Vec<u32> = (0..generators)
            .map(|_| {
                let s = (0..n).filter(|_| rng.gen_bool(density)).fold(0u32, |m, e| m | 1 << e);
                if s == 0 {
                    1 << rng.gen_range(0..n)
                } else {
                    s
                }
            })
            .collect();
        out.push(SetFamily::from_masks(n, &sets)?);
    }
    Ok(out)
}
