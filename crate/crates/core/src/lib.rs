//! Exact analysis of the k-majority game.
//!
//! `n` balls carry two colours, at least `k > n/2` of them the same. A player
//! compares pairs of balls, learning only whether they match, until some ball
//! is certainly of the majority colour. The optimal number of comparisons is
//! `K(n, k) = 2(n-k) - B(n-k)`, where `B` counts binary ones.
//!
//! - [`rules`]: the weight-game reformulation (positions, moves, final test).
//! - [`statistics`]: subposition counts, the `delta` statistics and the
//!   potential `SW_e`.
//! - [`laurent`]: Laurent polynomials, hyperderivatives and the certificate
//!   bounding `SW_e` at final positions.
//! - [`solver`]: memoized minimax values, `K(n, k)` and optimal play.
//! - [`ballgame`]: the question graph, adversaries and transcripts.
//! - [`verify`]: seeded suites that check the identities end to end.

pub mod ballgame;
pub mod error;
pub mod laurent;
pub mod rules;
pub mod solver;
pub mod statistics;
pub mod verify;

pub use error::{Error, Result};
pub use rules::{AssignerChoice, GameParams, Move, Position};
pub use statistics::{ExactInt, Valuation};
