//! BoxBreaker's interval simulation for the random-turn Box game.
//!
//! The turn sequence is cut into intervals of length about `gamma * s`.
//! During interval `i` BoxBreaker plays a simulated deterministic
//! `Box(n x s'; m:b)` game with the minimal-box rule, where BoxMaker's
//! simulated move is everything BoxMaker did up to the end of interval
//! `i - 1`. Turns in the first and last interval, and turns beyond the
//! per-interval quota of `b`, touch the lowest-index untouched box.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// `(epsilon, delta, gamma)` with `(1+e)(1-d)g < d` and
/// `(1-g)(1+e)(1-d) > (1+d)^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntervalParams {
    pub epsilon: f64,
    pub delta: f64,
    pub gamma: f64,
}

impl IntervalParams {
    pub fn new(epsilon: f64, delta: f64, gamma: f64) -> Result<Self> {
        if !(epsilon > 0.0 && delta > 0.0 && gamma > 0.0 && delta < 1.0 && gamma < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "need epsilon > 0 and delta, gamma in (0, 1); got ({epsilon}, {delta}, {gamma})"
            )));
        }
        if !first_constraint(epsilon, delta, gamma) {
            return Err(Error::InfeasibleParams("(1+e)(1-d)g < d"));
        }
        if !second_constraint(epsilon, delta, gamma) {
            return Err(Error::InfeasibleParams("(1-g)(1+e)(1-d) > (1+d)^2"));
        }
        Ok(IntervalParams {
            epsilon,
            delta,
            gamma,
        })
    }

    /// Concrete interval length and per-round budgets for box size `s` when
    /// BoxBreaker moves with probability `p`.
    pub fn plan(&self, s: usize, p: f64) -> IntervalPlan {
        let gs = self.gamma * s as f64;
        let m = (1.0 + self.delta) * gs * (1.0 - p);
        let b = (1.0 - self.delta) * gs * p;
        IntervalPlan {
            interval_len: (gs.round() as usize).max(1),
            maker_per_round: m,
            breaker_per_round: b,
            quota: (b.round() as usize).max(1),
            sim_size: (1.0 - self.gamma) * s as f64,
            real_size: s,
        }
    }
}

fn first_constraint(e: f64, d: f64, g: f64) -> bool {
    (1.0 + e) * (1.0 - d) * g < d
}

fn second_constraint(e: f64, d: f64, g: f64) -> bool {
    (1.0 - g) * (1.0 + e) * (1.0 - d) > (1.0 + d) * (1.0 + d)
}

/// Scans `delta, gamma` over `{0.01, ..., 0.99}` and returns the feasible
/// pair with the largest `gamma` (smallest `delta` among those).
pub fn choose_interval_params(epsilon: f64) -> Result<IntervalParams> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    for gi in (1..100).rev() {
        let gamma = gi as f64 / 100.0;
        for di in 1..100 {
            let delta = di as f64 / 100.0;
            if first_constraint(epsilon, delta, gamma) && second_constraint(epsilon, delta, gamma) {
                return IntervalParams::new(epsilon, delta, gamma);
            }
        }
    }
    Err(Error::NoFeasibleParams(epsilon))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntervalPlan {
    pub interval_len: usize,
    /// `m = (1+d) g s (1-p)`.
    pub maker_per_round: f64,
    /// `b = (1-d) g s p`.
    pub breaker_per_round: f64,
    /// Simulated moves per interval: `b` rounded, at least one.
    pub quota: usize,
    /// `s' = (1-g) s`.
    pub sim_size: f64,
    pub real_size: usize,
}

/// Box-level state of the interval simulation. Callers translate boxes to
/// board elements.
#[derive(Clone, Debug)]
pub struct IntervalBoxBreaker {
    plan: IntervalPlan,
    n_intervals: usize,
    capacity: Vec<usize>,
    used: Vec<usize>,
    opponent_total: Vec<usize>,
    registered: Vec<usize>,
    pending: VecDeque<(usize, usize)>,
    touched: Vec<bool>,
    untouched: usize,
    current_interval: usize,
    simulated_this_interval: usize,
    legality_violations: usize,
}

impl IntervalBoxBreaker {
    /// `capacity[i]` is the number of usable elements in box `i`;
    /// `total_turns` fixes the number of intervals.
    pub fn new(capacity: Vec<usize>, plan: IntervalPlan, total_turns: usize) -> Self {
        let n = capacity.len();
        IntervalBoxBreaker {
            plan,
            n_intervals: total_turns.div_ceil(plan.interval_len),
            capacity,
            used: vec![0; n],
            opponent_total: vec![0; n],
            registered: vec![0; n],
            pending: VecDeque::new(),
            touched: vec![false; n],
            untouched: n,
            current_interval: usize::MAX,
            simulated_this_interval: 0,
            legality_violations: 0,
        }
    }

    pub fn plan(&self) -> &IntervalPlan {
        &self.plan
    }

    pub fn n_boxes(&self) -> usize {
        self.capacity.len()
    }

    pub fn is_touched(&self, b: usize) -> bool {
        self.touched[b]
    }

    pub fn has_free(&self, b: usize) -> bool {
        self.used[b] < self.capacity[b]
    }

    pub fn used(&self, b: usize) -> usize {
        self.used[b]
    }

    pub fn finished(&self) -> bool {
        self.untouched == 0
    }

    pub fn touched_count(&self) -> usize {
        self.n_boxes() - self.untouched
    }

    /// Number of times an untouched box held more than `s' + m` opponent
    /// elements when BoxBreaker reached it.
    pub fn legality_violations(&self) -> usize {
        self.legality_violations
    }

    /// The opponent claimed an element of box `b` on `turn`.
    pub fn observe_opponent(&mut self, turn: usize, b: usize) {
        self.used[b] += 1;
        self.opponent_total[b] += 1;
        self.pending.push_back((turn, b));
    }

    /// Our own element went to box `b` outside of [`Self::choose`] (e.g. a
    /// fallback claim).
    pub fn observe_own(&mut self, b: usize) {
        self.used[b] += 1;
        self.mark_touched(b);
    }

    fn mark_touched(&mut self, b: usize) {
        if !self.touched[b] {
            self.touched[b] = true;
            self.untouched -= 1;
        }
    }

    /// Picks the box for our move on `turn` and records the claim.
    /// `Err` means the strategy cannot be followed.
    pub fn choose(&mut self, turn: usize) -> std::result::Result<usize, String> {
        let interval = turn / self.plan.interval_len;
        if interval != self.current_interval {
            self.current_interval = interval;
            self.simulated_this_interval = 0;
        }
        let boundary = interval * self.plan.interval_len;
        while let Some(&(t, b)) = self.pending.front() {
            if t >= boundary {
                break;
            }
            self.registered[b] += 1;
            self.pending.pop_front();
        }

        let edge_interval = interval == 0 || interval + 1 >= self.n_intervals;
        let simulated = !edge_interval && self.simulated_this_interval < self.plan.quota;
        let b = if simulated {
            self.simulated_this_interval += 1;
            let b = self
                .minimal_simulated_box()
                .ok_or_else(|| "no untouched box left in the simulated game".to_string())?;
            if !self.has_free(b) {
                return Err(format!("simulated game requires box {b}, which is full"));
            }
            b
        } else {
            (0..self.n_boxes())
                .find(|&b| !self.touched[b] && self.has_free(b))
                .ok_or_else(|| "no untouched box with a free element".to_string())?
        };

        let limit = self.plan.sim_size + self.plan.maker_per_round;
        if self.opponent_total[b] as f64 > limit {
            self.legality_violations += 1;
        }
        self.used[b] += 1;
        self.mark_touched(b);
        Ok(b)
    }

    /// Untouched box with the fewest simulated free elements
    /// (`s' - registered opponent claims`); lowest index on ties.
    fn minimal_simulated_box(&self) -> Option<usize> {
        (0..self.n_boxes())
            .filter(|&b| !self.touched[b])
            .min_by_key(|&b| (std::cmp::Reverse(self.registered[b]), b))
    }
}
