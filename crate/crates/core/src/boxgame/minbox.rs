//! The d-Maker MinBox game: d-Maker wants exactly `d` of its elements in
//! each of `n` boxes. Each box is cut into `d` sub-boxes of `floor(s/d)`
//! elements (the remainder is never used) and d-Maker plays BoxBreaker's
//! interval strategy on the `dn` sub-boxes, touching each one once.

use super::{choose_interval_params, BoxLayout, BoxSpec, IntervalBoxBreaker, IntervalParams};
use crate::engine::{BoardState, GameView, Move, Player, Strategy, WinCondition};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct MinBoxPlanner {
    n: usize,
    d: usize,
    sub_size: usize,
    sim: IntervalBoxBreaker,
}

impl MinBoxPlanner {
    pub fn new(n: usize, s: usize, d: usize, p: f64, params: IntervalParams, total_turns: usize) -> Result<Self> {
        if d == 0 || s < d {
            return Err(Error::InvalidParameter(format!("need 1 <= d <= s, got d = {d}, s = {s}")));
        }
        let sub_size = s / d;
        let plan = params.plan(sub_size, p);
        Ok(MinBoxPlanner {
            n,
            d,
            sub_size,
            sim: IntervalBoxBreaker::new(vec![sub_size; n * d], plan, total_turns),
        })
    }

    pub fn n_boxes(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn sub_size(&self) -> usize {
        self.sub_size
    }

    pub fn simulation(&self) -> &IntervalBoxBreaker {
        &self.sim
    }

    /// All `dn` sub-boxes touched: d-Maker has its `d` elements everywhere.
    pub fn finished(&self) -> bool {
        self.sim.finished()
    }

    /// The opponent claimed slot `slot` of box `b`. Remainder slots are
    /// outside every sub-box and are ignored.
    pub fn observe_opponent_slot(&mut self, turn: usize, b: usize, slot: usize) {
        let j = slot / self.sub_size;
        if j < self.d {
            self.sim.observe_opponent(turn, b * self.d + j);
        }
    }

    /// The opponent claimed an unspecified element of box `b`, or of the
    /// lowest-index box with room when `b` is full. Inside the box it goes
    /// to a sub-box d-Maker already touched if one has room, else to the
    /// emptiest sub-box (lowest index on ties). Returns the sub-box used.
    pub fn observe_opponent_in_box(&mut self, turn: usize, b: usize) -> Option<usize> {
        let sub = self.free_sub_in(b).or_else(|| (0..self.n).find_map(|w| self.free_sub_in(w)))?;
        self.sim.observe_opponent(turn, sub);
        Some(sub)
    }

    fn free_sub_in(&self, b: usize) -> Option<usize> {
        let subs = (b * self.d..(b + 1) * self.d).filter(|&sub| self.sim.has_free(sub));
        subs.clone()
            .find(|&sub| self.sim.is_touched(sub))
            .or_else(|| subs.min_by_key(|&sub| self.sim.used(sub)))
    }

    /// Whether box `b` still has room for a (virtual) claim.
    pub fn box_has_room(&self, b: usize) -> bool {
        self.free_sub_in(b).is_some()
    }

    /// d-Maker's move on `turn`: `(box, sub-box index within the box)`.
    pub fn choose(&mut self, turn: usize) -> std::result::Result<(usize, usize), String> {
        let sub = self.sim.choose(turn)?;
        Ok((sub / self.d, sub % self.d))
    }
}

/// Engine strategy for the abstract MinBox game on a `BoxLayout` of `n`
/// boxes of size `s`; d-Maker is the engine's Maker.
#[derive(Clone, Debug)]
pub struct DMakerMinBox {
    layout: BoxLayout,
    planner: MinBoxPlanner,
    seen: usize,
}

pub fn dmaker_minbox_strategy(n: usize, s: usize, d: usize, p: f64) -> Result<DMakerMinBox> {
    DMakerMinBox::with_params(n, s, d, p, choose_interval_params(0.5)?)
}

impl DMakerMinBox {
    pub fn with_params(n: usize, s: usize, d: usize, p: f64, params: IntervalParams) -> Result<Self> {
        let spec = BoxSpec::uniform(n, s)?;
        Ok(DMakerMinBox {
            planner: MinBoxPlanner::new(n, s, d, p, params, spec.total())?,
            layout: BoxLayout::new(&spec),
            seen: 0,
        })
    }

    pub fn planner(&self) -> &MinBoxPlanner {
        &self.planner
    }
}

impl Strategy for DMakerMinBox {
    fn choose(&mut self, view: &GameView<'_>) -> Move {
        for (turn, &(who, e)) in view.history.iter().enumerate().skip(self.seen) {
            if who != view.me {
                let b = self.layout.box_of(e);
                self.planner.observe_opponent_slot(turn, b, self.layout.slot_of(e));
            }
        }
        self.seen = view.history.len();
        if self.planner.finished() {
            return Move::Done;
        }
        match self.planner.choose(view.turn) {
            Ok((b, j)) => {
                let size = self.planner.sub_size();
                let slots = j * size..(j + 1) * size;
                match slots.map(|slot| self.layout.element(b, slot)).find(|&e| view.board.is_free(e)) {
                    Some(e) => Move::Claim(e),
                    None => Move::Forfeit(format!("sub-box {j} of box {b} is full")),
                }
            }
            Err(reason) => Move::Forfeit(reason),
        }
    }
}

/// d-Maker wins when every box holds at least `d` of its elements.
#[derive(Clone, Debug)]
pub struct MinBoxWin {
    layout: BoxLayout,
    d: usize,
}

impl MinBoxWin {
    pub fn new(layout: BoxLayout, d: usize) -> Self {
        MinBoxWin { layout, d }
    }

    pub fn maker_counts(&self, board: &BoardState) -> Vec<usize> {
        (0..self.layout.n_boxes())
            .map(|b| {
                self.layout
                    .range(b)
                    .filter(|&e| board.owner(e) == Some(Player::Maker))
                    .count()
            })
            .collect()
    }
}

impl WinCondition for MinBoxWin {
    fn maker_wins(&self, board: &BoardState) -> bool {
        self.maker_counts(board).iter().all(|&c| c >= self.d)
    }

    fn is_monotone(&self) -> bool {
        true
    }
}
