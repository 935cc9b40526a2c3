//! Competitive two-player information diffusion on social graphs.
//!
//! The crate covers the full pipeline: pricing nodes and picking seeds
//! ([`seeding`]), spreading both informations over level trees and assigning
//! supporters ([`cascade`]), the six-compartment mean-field model
//! ([`meanfield`]), Hotelling-style positions and equilibria ([`game`]), and a
//! replicated experiment runner with CSV output ([`runner`]).

pub mod cascade;
pub mod error;
pub mod game;
pub mod graph;
pub mod meanfield;
pub mod output;
pub mod rng;
pub mod runner;
pub mod seeding;

use std::fmt;

use serde::Serialize;

pub use error::{Error, Result};
pub use graph::{Graph, NodeId};

/// One of the two competing players; also names the information it spreads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::One, Player::Two];

    /// 0 or 1.
    pub fn index(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
        }
    }

    /// 1 or 2.
    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }

    pub fn other(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}
