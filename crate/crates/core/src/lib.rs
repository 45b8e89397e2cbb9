//! Achievement positional games: an exact solver, the 3-QBF reduction
//! compiler with its rank-4 Maker-Maker wrapper, executable strategy
//! certificates and an exhaustive strategy verifier.

pub mod cli;
pub mod fixtures;
pub mod format;
pub mod game;
pub mod lemmas;
pub mod playbook;
pub mod qbf;
pub mod reduction;
pub mod solver;
pub mod verify;
pub mod vset;

pub use game::{
    AchievementGame, Color, Edge, EdgeState, GameError, GameStatus, Position, Seat, VertexId,
};
pub use solver::{Outcome, SearchBudget, SolveReport, SolveResult};
pub use vset::VertexSet;
