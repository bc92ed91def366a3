//! The deterministic `Box(n x s; m:b)` game: BoxMaker claims `m` elements,
//! then BoxBreaker claims `b`, BoxMaker moving first.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Zero;

use super::BoxPosition;

/// `H_j = 1 + 1/2 + ... + 1/j`, with `H_0 = 0`.
pub fn harmonic(j: u64) -> BigRational {
    (1..=j).fold(BigRational::zero(), |acc, i| {
        acc + BigRational::new(BigInt::from(1), BigInt::from(i))
    })
}

/// BoxBreaker wins `Box(n x s; m:b)` when `s > (m / b) (H_n + b)`.
pub fn biasbox_condition(s: u64, m: u64, b: u64, n: u64) -> bool {
    assert!(s > 0 && m > 0 && b > 0 && n > 0, "parameters must be positive");
    let lhs = BigRational::from_integer(BigInt::from(s) * BigInt::from(b));
    let rhs = BigRational::from_integer(BigInt::from(m))
        * (harmonic(n) + BigRational::from_integer(BigInt::from(b)));
    lhs > rhs
}

/// The active box (not touched by BoxBreaker, not filled by BoxMaker) with
/// the fewest free elements, lowest index on ties. `None` means no active
/// box is left.
pub fn minimal_box_move(position: &BoxPosition) -> Option<usize> {
    (0..position.n())
        .filter(|&b| position.is_active(b))
        .min_by_key(|&b| (position.free[b], b))
}

/// Averaged free count over the boxes labelled `jb+1 ..= (k-1)b+1`.
///
/// `labelled_free[i]` is the free count of the box with label `i + 1`, in the
/// relabelled game where BoxBreaker touches boxes `ib+1 ..= (i+1)b` in round
/// `i + 1` and BoxMaker completes box `(k-1)b+1` in round `k`.
pub fn potential(labelled_free: &[u64], j: usize, k: usize, b: usize) -> Ratio<i64> {
    assert!(j < k, "potential is defined for 0 <= j <= k - 1");
    let first = j * b;
    let last = (k - 1) * b;
    assert!(last < labelled_free.len(), "labelled boxes missing");
    let sum: u64 = labelled_free[first..=last].iter().sum();
    Ratio::new(sum as i64, ((k - 1 - j) * b + 1) as i64)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiasBoxReport {
    /// Complete plays explored.
    pub paths: u64,
    /// Plays in which BoxMaker filled a box.
    pub maker_wins: u64,
    /// Potential-drop inequalities evaluated.
    pub potential_checks: u64,
    pub potential_violations: u64,
    pub max_rounds: usize,
}

struct Search {
    n: usize,
    m: u64,
    b: usize,
    report: BiasBoxReport,
    /// Free counts just before each BoxMaker move on the current path.
    snapshots: Vec<Vec<u64>>,
    /// Boxes BoxBreaker touched in each round on the current path.
    touched_rounds: Vec<Vec<usize>>,
}

/// Plays minimal-box BoxBreaker against every possible BoxMaker strategy and
/// checks the potential-drop bound along every path.
///
/// Elements inside one box are interchangeable, so a BoxMaker move is a
/// distribution of `m` claims over boxes; touched boxes are included.
pub fn exhaustive_biasbox_search(n: usize, s: u64, m: u64, b: u64) -> BiasBoxReport {
    let mut search = Search {
        n,
        m,
        b: b as usize,
        report: BiasBoxReport::default(),
        snapshots: Vec::new(),
        touched_rounds: Vec::new(),
    };
    let pos = BoxPosition {
        free: vec![s as usize; n],
        touched: vec![false; n],
        full: vec![false; n],
    };
    search.round(pos);
    search.report
}

impl Search {
    fn round(&mut self, pos: BoxPosition) {
        let total_free: usize = pos.free.iter().sum();
        if pos.all_touched() || total_free == 0 {
            self.finish_path(pos.any_full());
            return;
        }
        self.snapshots
            .push(pos.free.iter().map(|&f| f as u64).collect());
        let claims = (self.m as usize).min(total_free);
        let mut alloc = vec![0usize; self.n];
        self.distribute(&pos, 0, claims, &mut alloc);
        self.snapshots.pop();
    }

    fn distribute(&mut self, pos: &BoxPosition, from: usize, left: usize, alloc: &mut [usize]) {
        if left == 0 {
            let mut next = pos.clone();
            for (bx, &a) in alloc.iter().enumerate() {
                for _ in 0..a {
                    next.apply(bx, crate::engine::Player::Maker);
                }
            }
            if next.any_full() {
                self.finish_path(true);
                return;
            }
            self.breaker_reply(next);
            return;
        }
        if from == self.n {
            return;
        }
        let cap = pos.free[from].min(left);
        for a in (0..=cap).rev() {
            alloc[from] = a;
            self.distribute(pos, from + 1, left - a, alloc);
        }
        alloc[from] = 0;
    }

    fn breaker_reply(&mut self, mut pos: BoxPosition) {
        let mut touched = Vec::with_capacity(self.b);
        for _ in 0..self.b {
            match minimal_box_move(&pos) {
                Some(bx) => {
                    pos.apply(bx, crate::engine::Player::Breaker);
                    touched.push(bx);
                }
                None => {
                    // Only touched boxes remain; claim anywhere.
                    if let Some(bx) = (0..pos.n()).find(|&i| pos.free[i] > 0) {
                        pos.apply(bx, crate::engine::Player::Breaker);
                    }
                }
            }
        }
        self.touched_rounds.push(touched);
        self.round(pos);
        self.touched_rounds.pop();
    }

    fn finish_path(&mut self, maker_won: bool) {
        self.report.paths += 1;
        if maker_won {
            self.report.maker_wins += 1;
        }
        self.report.max_rounds = self.report.max_rounds.max(self.touched_rounds.len());
        self.check_potential();
    }

    /// For every horizon `k` whose first `k - 1` rounds each touched exactly
    /// `b` boxes, and every box `F` still active before BoxMaker's `k`-th
    /// move, relabels boxes as in the BiasBox argument (with `F` last) and
    /// checks `phi(j+1) >= phi(j) - m / ((k-1-j)b + 1)`.
    fn check_potential(&mut self) {
        let b = self.b;
        for k in 2..=self.snapshots.len() {
            if self.touched_rounds[..k - 1].iter().any(|t| t.len() != b) {
                break;
            }
            let earlier: Vec<usize> = self.touched_rounds[..k - 1].iter().flatten().copied().collect();
            for last in 0..self.n {
                if earlier.contains(&last) {
                    continue;
                }
                // `last` must still be active before round k.
                let before_k = &self.snapshots[k - 1];
                if before_k[last] == 0 {
                    continue;
                }
                let mut labels = earlier.clone();
                labels.push(last);
                for j in 0..k - 1 {
                    let at = |t: usize| -> Vec<u64> {
                        labels.iter().map(|&bx| self.snapshots[t][bx]).collect()
                    };
                    let phi_j = potential(&at(j), j, k, b);
                    let phi_next = potential(&at(j + 1), j + 1, k, b);
                    let drop = Ratio::new(self.m as i64, ((k - 1 - j) * b + 1) as i64);
                    self.report.potential_checks += 1;
                    if phi_next < phi_j - drop {
                        self.report.potential_violations += 1;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic(0), r(0, 1));
        assert_eq!(harmonic(1), r(1, 1));
        assert_eq!(harmonic(4), r(25, 12));
    }

    #[test]
    fn biasbox_thresholds() {
        assert!(biasbox_condition(6, 2, 1, 3));
        assert!(!biasbox_condition(5, 2, 1, 3));
        assert!(biasbox_condition(8, 3, 1, 2));
        assert!(!biasbox_condition(7, 3, 1, 2));
        // Threshold exactly 2: strict inequality fails.
        assert!(!biasbox_condition(2, 1, 1, 1));
        assert!(biasbox_condition(3, 1, 1, 1));
    }

    #[test]
    fn minimal_box_choices() {
        let mut pos = BoxPosition {
            free: vec![5, 2, 4],
            touched: vec![false; 3],
            full: vec![false; 3],
        };
        assert_eq!(minimal_box_move(&pos), Some(1));
        pos.touched[1] = true;
        assert_eq!(minimal_box_move(&pos), Some(2));
        let tie = BoxPosition {
            free: vec![3, 3, 3],
            touched: vec![false; 3],
            full: vec![false; 3],
        };
        assert_eq!(minimal_box_move(&tie), Some(0));
        let none = BoxPosition {
            free: vec![1, 0],
            touched: vec![true, false],
            full: vec![false, true],
        };
        assert_eq!(minimal_box_move(&none), None);
    }

    #[test]
    fn potential_boundary_values() {
        // phi(0) = s when every labelled box is untouched and empty of claims.
        let s = 7u64;
        let (k, b) = (3, 2);
        let labelled = vec![s; (k - 1) * b + 1];
        assert_eq!(potential(&labelled, 0, k, b), Ratio::from_integer(s as i64));
        // phi(k - 1) is the free count of the last box.
        let mut tail = vec![0u64; (k - 1) * b + 1];
        tail[(k - 1) * b] = 2;
        assert_eq!(potential(&tail, k - 1, k, b), Ratio::from_integer(2));
    }

    #[test]
    fn small_search_breaker_always_wins() {
        let rep = exhaustive_biasbox_search(4, 4, 1, 1);
        assert!(rep.paths > 0);
        assert_eq!(rep.maker_wins, 0);
        assert_eq!(rep.potential_violations, 0);
        assert!(rep.potential_checks > 0);
    }

    #[test]
    fn search_finds_maker_wins_below_threshold() {
        // s = 2 with m = 2: BoxMaker fills a box on the first move.
        assert!(!biasbox_condition(2, 2, 1, 3));
        let rep = exhaustive_biasbox_search(3, 2, 2, 1);
        assert!(rep.maker_wins > 0);
    }
}
