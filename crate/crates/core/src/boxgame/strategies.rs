use std::str::FromStr;

use super::{choose_interval_params, minimal_box_move, BoxLayout, BoxPosition, BoxSpec, BoxWin, IntervalBoxBreaker, IntervalParams};
use crate::engine::{play_game, GameRecord, GameSettings, GameView, Move, Player, Strategy, UniformRandom};
use crate::error::{Error, Result};

/// BoxBreaker's interval strategy for `Box_p`. Boxes larger than the
/// smallest one are simulated at the smallest size.
#[derive(Clone, Debug)]
pub struct BoxBreakerStrategy {
    layout: BoxLayout,
    sim: IntervalBoxBreaker,
    seen: usize,
}

pub fn boxbreaker_random_turn_strategy(spec: &BoxSpec, p: f64, params: IntervalParams) -> BoxBreakerStrategy {
    let plan = params.plan(spec.min_size(), p);
    BoxBreakerStrategy {
        layout: BoxLayout::new(spec),
        sim: IntervalBoxBreaker::new(spec.sizes().to_vec(), plan, spec.total()),
        seen: 0,
    }
}

impl BoxBreakerStrategy {
    pub fn simulation(&self) -> &IntervalBoxBreaker {
        &self.sim
    }

    fn catch_up(&mut self, view: &GameView<'_>) {
        for (turn, &(who, e)) in view.history.iter().enumerate().skip(self.seen) {
            let b = self.layout.box_of(e);
            if who == view.me {
                // Our claims are booked in `choose`; this only matters when the
                // engine substituted a fallback element.
                if !self.sim.is_touched(b) {
                    self.sim.observe_own(b);
                }
            } else {
                self.sim.observe_opponent(turn, b);
            }
        }
        self.seen = view.history.len();
    }
}

impl Strategy for BoxBreakerStrategy {
    fn choose(&mut self, view: &GameView<'_>) -> Move {
        self.catch_up(view);
        if self.sim.finished() {
            return Move::Done;
        }
        match self.sim.choose(view.turn) {
            Ok(b) => match self.layout.first_free_in(view.board, b) {
                Some(e) => Move::Claim(e),
                None => Move::Forfeit(format!("box {b} has no free element")),
            },
            Err(reason) => Move::Forfeit(reason),
        }
    }
}

/// BoxMaker's strategy for `Box_p`: keep filling one box BoxBreaker has not
/// touched; when it gets touched, move to the lowest-index untouched box.
#[derive(Clone, Debug)]
pub struct BoxMakerStrategy {
    layout: BoxLayout,
    position: BoxPosition,
    target: Option<usize>,
    seen: usize,
    attempts: usize,
}

pub fn boxmaker_random_turn_strategy(spec: &BoxSpec) -> BoxMakerStrategy {
    BoxMakerStrategy {
        layout: BoxLayout::new(spec),
        position: BoxPosition::fresh(spec),
        target: None,
        seen: 0,
        attempts: 0,
    }
}

impl BoxMakerStrategy {
    /// How many boxes were targeted so far.
    pub fn attempts(&self) -> usize {
        self.attempts
    }
}

impl Strategy for BoxMakerStrategy {
    fn choose(&mut self, view: &GameView<'_>) -> Move {
        for &(who, e) in &view.history[self.seen..] {
            let b = self.layout.box_of(e);
            self.position.apply(b, if who == view.me { Player::Maker } else { Player::Breaker });
        }
        self.seen = view.history.len();

        let keep = self
            .target
            .filter(|&b| !self.position.touched[b] && self.position.free[b] > 0);
        let target = match keep {
            Some(b) => b,
            None => {
                let Some(b) = (0..self.position.n()).find(|&b| !self.position.touched[b] && self.position.free[b] > 0)
                else {
                    return Move::Forfeit("every box has been touched".into());
                };
                self.attempts += 1;
                self.target = Some(b);
                b
            }
        };
        match self.layout.first_free_in(view.board, target) {
            Some(e) => Move::Claim(e),
            None => Move::Forfeit(format!("box {target} has no free element")),
        }
    }
}

/// BoxBreaker that always plays the minimal-box rule on the real position.
#[derive(Clone, Debug)]
pub struct MinimalBoxBreaker {
    layout: BoxLayout,
    position: BoxPosition,
    seen: usize,
}

impl MinimalBoxBreaker {
    pub fn new(spec: &BoxSpec) -> Self {
        MinimalBoxBreaker {
            layout: BoxLayout::new(spec),
            position: BoxPosition::fresh(spec),
            seen: 0,
        }
    }
}

impl Strategy for MinimalBoxBreaker {
    fn choose(&mut self, view: &GameView<'_>) -> Move {
        for &(who, e) in &view.history[self.seen..] {
            let b = self.layout.box_of(e);
            self.position.apply(b, if who == view.me { Player::Breaker } else { Player::Maker });
        }
        self.seen = view.history.len();
        if self.position.all_touched() {
            return Move::Done;
        }
        match minimal_box_move(&self.position) {
            Some(b) => match self.layout.first_free_in(view.board, b) {
                Some(e) => Move::Claim(e),
                None => Move::Forfeit(format!("box {b} has no free element")),
            },
            None => Move::Forfeit("no active box".into()),
        }
    }
}


/// Which side of a box game plays its strategy; the other side claims
/// uniformly at random.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxSide {
    BoxMaker,
    BoxBreaker,
    Both,
}

impl FromStr for BoxSide {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "boxmaker" => Ok(BoxSide::BoxMaker),
            "boxbreaker" => Ok(BoxSide::BoxBreaker),
            "both" => Ok(BoxSide::Both),
            _ => Err(Error::Parse(format!("unknown side '{s}'"))),
        }
    }
}

/// One game of `Box_p` on `spec`: the interval strategy for BoxBreaker with
/// parameters chosen from `epsilon`, the one-box strategy for BoxMaker.
pub fn play_box_game(spec: &BoxSpec, p: f64, side: BoxSide, epsilon: f64, seed: u64) -> Result<GameRecord> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!("p = {p} is outside (0, 1]")));
    }
    let params = choose_interval_params(epsilon)?;
    let win = BoxWin::new(BoxLayout::new(spec));
    let mut maker: Box<dyn Strategy> = match side {
        BoxSide::BoxBreaker => Box::new(UniformRandom::new(seed ^ 0x6d61_6b65)),
        _ => Box::new(boxmaker_random_turn_strategy(spec)),
    };
    let mut breaker: Box<dyn Strategy> = match side {
        BoxSide::BoxMaker => Box::new(UniformRandom::new(seed ^ 0x6272_6b72)),
        _ => Box::new(boxbreaker_random_turn_strategy(spec, p, params)),
    };
    Ok(play_game(spec.total(), &win, &mut maker, &mut breaker, &GameSettings::breaker_moves_with(p), seed))
}
