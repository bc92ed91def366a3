//! Box games: `n` disjoint boxes, BoxMaker wants to own one box completely,
//! BoxBreaker wants to touch every box.
//!
//! In the random-turn auxiliary versions BoxBreaker is the player who moves
//! with probability `p`, so games are played with
//! [`GameSettings::breaker_moves_with`](crate::engine::GameSettings::breaker_moves_with).
//! BoxMaker is the engine's Maker, BoxBreaker the engine's Breaker.

mod deterministic;
mod interval;
mod minbox;
mod strategies;

pub use deterministic::{
    biasbox_condition, exhaustive_biasbox_search, harmonic, minimal_box_move, potential,
    BiasBoxReport,
};
pub use interval::{choose_interval_params, IntervalBoxBreaker, IntervalParams, IntervalPlan};
pub use minbox::{dmaker_minbox_strategy, DMakerMinBox, MinBoxPlanner, MinBoxWin};
pub use strategies::{
    boxbreaker_random_turn_strategy, boxmaker_random_turn_strategy, play_box_game, BoxBreakerStrategy,
    BoxMakerStrategy, BoxSide, MinimalBoxBreaker,
};

use crate::engine::{BoardState, Player, WinCondition};
use crate::error::{Error, Result};

/// Box sizes `a_1..a_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxSpec {
    sizes: Vec<usize>,
}

impl BoxSpec {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidParameter("at least one box is required".into()));
        }
        if sizes.contains(&0) {
            return Err(Error::InvalidParameter("box sizes must be positive".into()));
        }
        Ok(BoxSpec { sizes })
    }

    pub fn uniform(n: usize, size: usize) -> Result<Self> {
        BoxSpec::new(vec![size; n])
    }

    pub fn n(&self) -> usize {
        self.sizes.len()
    }

    pub fn size(&self, i: usize) -> usize {
        self.sizes[i]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn min_size(&self) -> usize {
        *self.sizes.iter().min().expect("nonempty")
    }
}

/// Board layout: box `i` owns the contiguous element range
/// `offset(i)..offset(i + 1)`.
#[derive(Clone, Debug)]
pub struct BoxLayout {
    offsets: Vec<usize>,
    box_of: Vec<u32>,
}

impl BoxLayout {
    pub fn new(spec: &BoxSpec) -> Self {
        let mut offsets = Vec::with_capacity(spec.n() + 1);
        let mut box_of = Vec::with_capacity(spec.total());
        offsets.push(0);
        for (i, &a) in spec.sizes().iter().enumerate() {
            box_of.extend(std::iter::repeat(i as u32).take(a));
            offsets.push(offsets[i] + a);
        }
        BoxLayout { offsets, box_of }
    }

    pub fn n_boxes(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn n_elements(&self) -> usize {
        self.box_of.len()
    }

    pub fn box_of(&self, element: usize) -> usize {
        self.box_of[element] as usize
    }

    pub fn slot_of(&self, element: usize) -> usize {
        element - self.offsets[self.box_of(element)]
    }

    pub fn element(&self, b: usize, slot: usize) -> usize {
        self.offsets[b] + slot
    }

    pub fn range(&self, b: usize) -> std::ops::Range<usize> {
        self.offsets[b]..self.offsets[b + 1]
    }

    pub fn box_size(&self, b: usize) -> usize {
        self.offsets[b + 1] - self.offsets[b]
    }

    pub fn first_free_in(&self, board: &BoardState, b: usize) -> Option<usize> {
        self.range(b).find(|&e| board.is_free(e))
    }
}

/// Per-box summary of a position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxPosition {
    pub free: Vec<usize>,
    pub touched: Vec<bool>,
    pub full: Vec<bool>,
}

impl BoxPosition {
    pub fn fresh(spec: &BoxSpec) -> Self {
        BoxPosition {
            free: spec.sizes().to_vec(),
            touched: vec![false; spec.n()],
            full: vec![false; spec.n()],
        }
    }

    pub fn from_board(layout: &BoxLayout, board: &BoardState) -> Self {
        let n = layout.n_boxes();
        let mut pos = BoxPosition {
            free: vec![0; n],
            touched: vec![false; n],
            full: vec![false; n],
        };
        for b in 0..n {
            let mut maker = 0;
            for e in layout.range(b) {
                match board.owner(e) {
                    None => pos.free[b] += 1,
                    Some(Player::Maker) => maker += 1,
                    Some(Player::Breaker) => pos.touched[b] = true,
                }
            }
            pos.full[b] = maker == layout.box_size(b);
        }
        pos
    }

    pub fn n(&self) -> usize {
        self.free.len()
    }

    pub fn is_active(&self, b: usize) -> bool {
        !self.touched[b] && !self.full[b]
    }

    pub fn apply(&mut self, b: usize, player: Player) {
        self.free[b] -= 1;
        match player {
            Player::Breaker => self.touched[b] = true,
            Player::Maker => {
                if self.free[b] == 0 && !self.touched[b] {
                    self.full[b] = true;
                }
            }
        }
    }

    pub fn all_touched(&self) -> bool {
        self.touched.iter().all(|&t| t)
    }

    pub fn any_full(&self) -> bool {
        self.full.iter().any(|&f| f)
    }
}

/// BoxMaker (the engine's Maker) wins by owning a whole box.
#[derive(Clone, Debug)]
pub struct BoxWin {
    layout: BoxLayout,
}

impl BoxWin {
    pub fn new(layout: BoxLayout) -> Self {
        BoxWin { layout }
    }

    fn box_is_makers(&self, board: &BoardState, b: usize) -> bool {
        self.layout
            .range(b)
            .all(|e| board.owner(e) == Some(Player::Maker))
    }

    /// BoxBreaker's winning condition, the exact complement of Maker's.
    pub fn all_touched(&self, board: &BoardState) -> bool {
        (0..self.layout.n_boxes()).all(|b| {
            self.layout
                .range(b)
                .any(|e| board.owner(e) == Some(Player::Breaker))
        })
    }
}

impl WinCondition for BoxWin {
    fn maker_wins(&self, board: &BoardState) -> bool {
        (0..self.layout.n_boxes()).any(|b| self.box_is_makers(board, b))
    }

    fn is_monotone(&self) -> bool {
        true
    }

    fn maker_won_after(&self, board: &BoardState, last: usize) -> bool {
        self.box_is_makers(board, self.layout.box_of(last))
    }
}
