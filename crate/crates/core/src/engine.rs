//! The random-turn game loop.
//!
//! Before every turn a biased coin decides who moves. The coin is tossed for
//! a *designated* player (the one who moves with probability `q`); for graph
//! games that is Maker, for the Box auxiliary games it is BoxBreaker.
//!
//! Strategies see the whole board and the full move history through a
//! [`GameView`] and answer with a [`Move`]. Every turn claims exactly one
//! element, so `history.len()` always equals the current turn index.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    Maker,
    Breaker,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Maker => Player::Breaker,
            Player::Breaker => Player::Maker,
        }
    }
}

/// Realized coin tosses: `turns[t]` is the player who moves on turn `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TurnSequence {
    turns: Vec<Player>,
    q: f64,
    designated: Player,
}

impl TurnSequence {
    pub fn from_turns(turns: Vec<Player>, q: f64, designated: Player) -> Self {
        TurnSequence {
            turns,
            q,
            designated,
        }
    }

    pub fn len(&self) -> usize {
        self.turns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.turns.is_empty()
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn designated(&self) -> Player {
        self.designated
    }

    pub fn get(&self, t: usize) -> Player {
        self.turns[t]
    }

    pub fn as_slice(&self) -> &[Player] {
        &self.turns
    }

    pub fn count(&self, player: Player) -> usize {
        self.turns.iter().filter(|&&p| p == player).count()
    }
}

/// Tosses `len` independent coins; each lands on `designated` with
/// probability `q`.
pub fn sample_turn_sequence<R: Rng + ?Sized>(
    len: usize,
    q: f64,
    designated: Player,
    rng: &mut R,
) -> TurnSequence {
    let q = q.clamp(0.0, 1.0);
    let turns = (0..len)
        .map(|_| {
            if rng.gen_bool(q) {
                designated
            } else {
                designated.opponent()
            }
        })
        .collect();
    TurnSequence {
        turns,
        q,
        designated,
    }
}

/// Ownership of every board element. Once set, ownership never changes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoardState {
    owner: Vec<Option<Player>>,
    maker_count: usize,
    breaker_count: usize,
}

impl BoardState {
    pub fn new(n_elements: usize) -> Self {
        BoardState {
            owner: vec![None; n_elements],
            maker_count: 0,
            breaker_count: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn owner(&self, element: usize) -> Option<Player> {
        self.owner[element]
    }

    pub fn is_free(&self, element: usize) -> bool {
        element < self.owner.len() && self.owner[element].is_none()
    }

    pub fn maker_count(&self) -> usize {
        self.maker_count
    }

    pub fn breaker_count(&self) -> usize {
        self.breaker_count
    }

    pub fn free_count(&self) -> usize {
        self.owner.len() - self.maker_count - self.breaker_count
    }

    pub fn lowest_free(&self) -> Option<usize> {
        self.owner.iter().position(Option::is_none)
    }

    pub fn free_elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.owner
            .iter()
            .enumerate()
            .filter_map(|(e, o)| o.is_none().then_some(e))
    }

    pub fn elements_of(&self, player: Player) -> impl Iterator<Item = usize> + '_ {
        self.owner
            .iter()
            .enumerate()
            .filter_map(move |(e, o)| (*o == Some(player)).then_some(e))
    }

    /// Maker's set as a bitmask. Only meaningful for boards of at most 64
    /// elements.
    pub fn maker_mask(&self) -> u64 {
        self.mask_of(Player::Maker)
    }

    pub fn breaker_mask(&self) -> u64 {
        self.mask_of(Player::Breaker)
    }

    fn mask_of(&self, player: Player) -> u64 {
        debug_assert!(self.owner.len() <= 64);
        self.elements_of(player).fold(0u64, |m, e| m | (1 << e))
    }

    /// Returns false (and changes nothing) if the element is out of range or
    /// already owned.
    pub fn claim(&mut self, element: usize, player: Player) -> bool {
        if !self.is_free(element) {
            return false;
        }
        self.owner[element] = Some(player);
        match player {
            Player::Maker => self.maker_count += 1,
            Player::Breaker => self.breaker_count += 1,
        }
        true
    }
}

/// The winning family, given as a predicate on the final position.
pub trait WinCondition: Sync {
    fn maker_wins(&self, board: &BoardState) -> bool;

    /// Adding elements to Maker's set never turns a win into a loss.
    fn is_monotone(&self) -> bool {
        false
    }

    /// Called after Maker claims `last` when early stopping is on. Override
    /// for an incremental check.
    fn maker_won_after(&self, board: &BoardState, _last: usize) -> bool {
        self.maker_wins(board)
    }

    /// Called after Breaker claims `last` when early stopping is on: true if
    /// Maker can no longer win even by taking every free element.
    fn maker_shut_out_after(&self, _board: &BoardState, _last: usize) -> bool {
        false
    }
}

/// Wraps a closure over the board.
pub struct PredicateWin<F> {
    predicate: F,
    monotone: bool,
}

impl<F> PredicateWin<F>
where
    F: Fn(&BoardState) -> bool + Sync,
{
    pub fn new(predicate: F, monotone: bool) -> Self {
        PredicateWin {
            predicate,
            monotone,
        }
    }
}

impl<F> WinCondition for PredicateWin<F>
where
    F: Fn(&BoardState) -> bool + Sync,
{
    fn maker_wins(&self, board: &BoardState) -> bool {
        (self.predicate)(board)
    }

    fn is_monotone(&self) -> bool {
        self.monotone
    }
}

/// Samples pairs `A ⊆ A'` of Maker sets and returns the first pair where
/// `A` wins but `A'` does not.
pub fn spot_check_monotone<R: Rng + ?Sized>(
    win: &dyn WinCondition,
    n_elements: usize,
    samples: usize,
    rng: &mut R,
) -> Option<(Vec<usize>, Vec<usize>)> {
    for _ in 0..samples {
        let small: Vec<usize> = (0..n_elements).filter(|_| rng.gen_bool(0.5)).collect();
        let extra: Vec<usize> = (0..n_elements).filter(|e| !small.contains(e) && rng.gen_bool(0.5)).collect();
        let mut board = BoardState::new(n_elements);
        for &e in &small {
            board.claim(e, Player::Maker);
        }
        if !win.maker_wins(&board) {
            continue;
        }
        for &e in &extra {
            board.claim(e, Player::Maker);
        }
        if !win.maker_wins(&board) {
            let mut big = small.clone();
            big.extend(extra);
            big.sort_unstable();
            return Some((small, big));
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    Claim(usize),
    /// The strategy cannot be followed.
    Forfeit(String),
    /// The strategy ran out of budget; the game is lost but nothing illegal
    /// happened.
    Concede(String),
    /// The strategy has finished its job; the game is scored as it stands.
    Done,
}

pub struct GameView<'a> {
    pub board: &'a BoardState,
    pub history: &'a [(Player, usize)],
    pub turn: usize,
    pub me: Player,
}

impl GameView<'_> {
    /// The same position seen through the other player's eyes.
    pub fn as_player(&self, me: Player) -> GameView<'_> {
        GameView {
            board: self.board,
            history: self.history,
            turn: self.turn,
            me,
        }
    }
}

pub trait Strategy: Send {
    fn choose(&mut self, view: &GameView<'_>) -> Move;

    /// Named stages the strategy entered, with the turn each one started.
    fn stage_starts(&self) -> Vec<(&'static str, usize)> {
        Vec::new()
    }
}

impl<S: Strategy + ?Sized> Strategy for Box<S> {
    fn choose(&mut self, view: &GameView<'_>) -> Move {
        (**self).choose(view)
    }

    fn stage_starts(&self) -> Vec<(&'static str, usize)> {
        (**self).stage_starts()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    MakerWin,
    BreakerWin,
}

impl Outcome {
    pub fn winner(self) -> Player {
        match self {
            Outcome::MakerWin => Player::Maker,
            Outcome::BreakerWin => Player::Breaker,
        }
    }

    fn for_winner(p: Player) -> Self {
        match p {
            Player::Maker => Outcome::MakerWin,
            Player::Breaker => Outcome::BreakerWin,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ForfeitPolicy {
    /// A forfeit loses the game on the spot.
    #[default]
    Strict,
    /// Note the forfeit, claim the lowest free element and play on.
    Fallback,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ForfeitKind {
    Strict,
    /// Concession after an exhausted budget.
    Failure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Forfeit {
    pub player: Player,
    pub turn: usize,
    pub kind: ForfeitKind,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameRecord {
    pub seed: u64,
    pub q: f64,
    pub designated: Player,
    /// Coin tosses for the turns actually played.
    pub turns: Vec<Player>,
    pub moves: Vec<(Player, usize)>,
    pub outcome: Outcome,
    pub forfeit: Option<Forfeit>,
}

impl GameRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("GameRecord serializes")
    }

    pub fn elements_of(&self, player: Player) -> impl Iterator<Item = usize> + '_ {
        self.moves
            .iter()
            .filter_map(move |&(p, e)| (p == player).then_some(e))
    }

    pub fn turns_played(&self) -> usize {
        self.moves.len()
    }

    /// Rebuilds the final board from the move list.
    pub fn final_board(&self, n_elements: usize) -> BoardState {
        let mut board = BoardState::new(n_elements);
        for &(p, e) in &self.moves {
            board.claim(e, p);
        }
        board
    }

    /// A strict forfeit decided the game.
    pub fn strict_forfeit(&self) -> Option<&Forfeit> {
        self.forfeit
            .as_ref()
            .filter(|f| f.kind == ForfeitKind::Strict)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameSettings {
    /// Probability that the designated player moves.
    pub q: f64,
    pub designated: Player,
    pub early_stop: bool,
    pub policy: ForfeitPolicy,
    /// Number of turns; defaults to the board size.
    pub max_turns: Option<usize>,
}

impl GameSettings {
    pub fn maker_moves_with(p: f64) -> Self {
        GameSettings {
            q: p,
            designated: Player::Maker,
            ..Default::default()
        }
    }

    pub fn breaker_moves_with(p: f64) -> Self {
        GameSettings {
            q: p,
            designated: Player::Breaker,
            ..Default::default()
        }
    }

    /// Probability that Maker moves on a given turn.
    pub fn maker_probability(&self) -> f64 {
        match self.designated {
            Player::Maker => self.q,
            Player::Breaker => 1.0 - self.q,
        }
    }
}

impl Default for GameSettings {
    fn default() -> Self {
        GameSettings {
            q: 0.5,
            designated: Player::Maker,
            early_stop: true,
            policy: ForfeitPolicy::Strict,
            max_turns: None,
        }
    }
}

/// Plays one game. The coin tosses come from a generator seeded with `seed`,
/// so they never depend on how much randomness the strategies consume.
pub fn play_game(
    n_elements: usize,
    win: &dyn WinCondition,
    maker: &mut dyn Strategy,
    breaker: &mut dyn Strategy,
    settings: &GameSettings,
    seed: u64,
) -> GameRecord {
    let length = settings.max_turns.unwrap_or(n_elements).min(n_elements);
    let mut coin = ChaCha8Rng::seed_from_u64(seed);
    let sequence = sample_turn_sequence(length, settings.q, settings.designated, &mut coin);

    let mut board = BoardState::new(n_elements);
    let mut moves: Vec<(Player, usize)> = Vec::with_capacity(length);
    let mut forfeit: Option<Forfeit> = None;
    let early_stop = settings.early_stop && win.is_monotone();

    let mut decided: Option<Outcome> = None;
    for turn in 0..length {
        let me = sequence.get(turn);
        let view = GameView {
            board: &board,
            history: &moves,
            turn,
            me,
        };
        let strategy: &mut dyn Strategy = match me {
            Player::Maker => &mut *maker,
            Player::Breaker => &mut *breaker,
        };
        let element = match strategy.choose(&view) {
            Move::Claim(e) if board.is_free(e) => e,
            Move::Claim(e) => {
                let reason = format!("claimed element {e}, which is not free");
                match forfeit_or_fallback(&mut forfeit, settings.policy, me, turn, reason, &board) {
                    Some(e) => e,
                    None => {
                        decided = Some(Outcome::for_winner(me.opponent()));
                        break;
                    }
                }
            }
            Move::Forfeit(reason) => {
                match forfeit_or_fallback(&mut forfeit, settings.policy, me, turn, reason, &board) {
                    Some(e) => e,
                    None => {
                        decided = Some(Outcome::for_winner(me.opponent()));
                        break;
                    }
                }
            }
            Move::Concede(reason) => {
                forfeit.get_or_insert(Forfeit {
                    player: me,
                    turn,
                    kind: ForfeitKind::Failure,
                    reason,
                });
                decided = Some(Outcome::for_winner(me.opponent()));
                break;
            }
            Move::Done => break,
        };
        board.claim(element, me);
        moves.push((me, element));

        if early_stop {
            match me {
                Player::Maker if win.maker_won_after(&board, element) => {
                    decided = Some(Outcome::MakerWin);
                    break;
                }
                Player::Breaker if win.maker_shut_out_after(&board, element) => {
                    decided = Some(Outcome::BreakerWin);
                    break;
                }
                _ => {}
            }
        }
    }

    let outcome = decided.unwrap_or_else(|| {
        if win.maker_wins(&board) {
            Outcome::MakerWin
        } else {
            Outcome::BreakerWin
        }
    });
    let mut turns = sequence.turns;
    turns.truncate(moves.len().max(forfeit_turn(&forfeit)));
    GameRecord {
        seed,
        q: settings.q,
        designated: settings.designated,
        turns,
        moves,
        outcome,
        forfeit,
    }
}

fn forfeit_turn(forfeit: &Option<Forfeit>) -> usize {
    forfeit.as_ref().map_or(0, |f| f.turn + 1)
}

/// Records the forfeit. Under the strict policy returns `None` (game over);
/// under fallback returns the lowest free element to claim instead.
fn forfeit_or_fallback(
    slot: &mut Option<Forfeit>,
    policy: ForfeitPolicy,
    player: Player,
    turn: usize,
    reason: String,
    board: &BoardState,
) -> Option<usize> {
    let kind = ForfeitKind::Strict;
    match policy {
        ForfeitPolicy::Strict => {
            *slot = Some(Forfeit {
                player,
                turn,
                kind,
                reason,
            });
            None
        }
        ForfeitPolicy::Fallback => {
            slot.get_or_insert(Forfeit {
                player,
                turn,
                kind,
                reason,
            });
            board.lowest_free()
        }
    }
}

/// Claims the lowest-index free element. Deterministic, so mirroring it is
/// well defined.
#[derive(Clone, Debug, Default)]
pub struct LowestFree;

impl Strategy for LowestFree {
    fn choose(&mut self, view: &GameView<'_>) -> Move {
        match view.board.lowest_free() {
            Some(e) => Move::Claim(e),
            None => Move::Forfeit("board exhausted".into()),
        }
    }
}

/// Claims a uniformly random free element.
#[derive(Clone, Debug)]
pub struct UniformRandom {
    rng: ChaCha8Rng,
}

impl UniformRandom {
    pub fn new(seed: u64) -> Self {
        UniformRandom {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

/// Uniform free element: rejection sampling while the board is sparse,
/// a scan once it fills up.
pub fn random_free_element<R: Rng + ?Sized>(board: &BoardState, rng: &mut R) -> Option<usize> {
    let free = board.free_count();
    if free == 0 {
        return None;
    }
    for _ in 0..32 {
        let e = rng.gen_range(0..board.len());
        if board.is_free(e) {
            return Some(e);
        }
    }
    let k = rng.gen_range(0..free);
    board.free_elements().nth(k)
}

impl Strategy for UniformRandom {
    fn choose(&mut self, view: &GameView<'_>) -> Move {
        match random_free_element(view.board, &mut self.rng) {
            Some(e) => Move::Claim(e),
            None => Move::Forfeit("board exhausted".into()),
        }
    }
}

/// Plays exactly the element the wrapped strategy would pick if it were the
/// opponent in the same position.
#[derive(Clone, Debug)]
pub struct Mirror<S> {
    inner: S,
}

pub fn mirror_strategy<S: Strategy>(opponent_strategy: S) -> Mirror<S> {
    Mirror {
        inner: opponent_strategy,
    }
}

impl<S: Strategy> Strategy for Mirror<S> {
    fn choose(&mut self, view: &GameView<'_>) -> Move {
        self.inner.choose(&view.as_player(view.me.opponent()))
    }
}

/// A block of consecutive turns `[start, end)`, with how many of them each
/// player owns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
    pub maker_turns: usize,
    pub breaker_turns: usize,
}

impl Interval {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }

    pub fn contains(&self, turn: usize) -> bool {
        (self.start..self.end).contains(&turn)
    }
}

/// Splits `[0, total)` into `ceil(total / interval_length)` consecutive
/// blocks; only the last may be shorter.
pub fn partition_into_intervals(total: usize, interval_length: usize) -> Vec<Interval> {
    assert!(interval_length >= 1, "interval length must be positive");
    (0..total.div_ceil(interval_length))
        .map(|i| Interval {
            start: i * interval_length,
            end: ((i + 1) * interval_length).min(total),
            maker_turns: 0,
            breaker_turns: 0,
        })
        .collect()
}

/// Same partition, with per-player turn counts filled in.
pub fn partition_turn_sequence(seq: &TurnSequence, interval_length: usize) -> Vec<Interval> {
    let mut intervals = partition_into_intervals(seq.len(), interval_length);
    for iv in &mut intervals {
        for &p in &seq.as_slice()[iv.start..iv.end] {
            match p {
                Player::Maker => iv.maker_turns += 1,
                Player::Breaker => iv.breaker_turns += 1,
            }
        }
    }
    intervals
}
