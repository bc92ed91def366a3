//! Random-turn Maker-Breaker games.
//!
//! * [`engine`]: the coin-tossing game loop, strategy contract and records.
//! * [`boxgame`]: Box game variants and the strategies for both sides.
//! * [`graphgame`]: strategies on the edge set of `K_n`.
//! * [`checkers`]: exact graph-property verifiers.
//! * [`oracle`]: exact game values on small boards.
//! * [`harness`]: seeded, parallel Monte Carlo experiments.

pub mod boxgame;
pub mod checkers;
pub mod engine;
pub mod error;
pub mod graph;
pub mod graphgame;
pub mod harness;
pub mod oracle;

pub use error::{Error, Result};
