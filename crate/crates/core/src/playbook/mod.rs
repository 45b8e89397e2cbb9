//! Regular play on reduction games, its invariant checker and the two
//! strategy certificates.

mod claim0;
mod left;
mod right;
mod schedule;

use thiserror::Error;

use crate::game::{Color, Position, Seat, VertexId};
use crate::lemmas::{pairing_move, Pairing};
use crate::vset::VertexSet;

pub use claim0::{check_claim0, check_claim0_moves, Claim0Report, PropertyResult};
pub use left::{left_certificate, LeftCertificate};
pub use right::{right_certificate, RightCertificate, RightMode};
pub use schedule::{
    regular_play_trace, MoveKind, RegularPlayTrace, Schedule, Scheduled, TraceEntry,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StrategyError {
    #[error("no legal move")]
    NoMove,
    #[error("no script covers this position: {0}")]
    Uncovered(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlaybookError {
    #[error("scheduled move {vertex} at ply {ply} is unavailable")]
    Unavailable { ply: usize, vertex: String },
    #[error("game ended during regular play at ply {0}")]
    EndedEarly(usize),
}

/// A total move policy for one seat.
pub trait Strategy: Sync {
    /// `history` is the full move list from the empty board.
    fn next_move(
        &self,
        position: &Position,
        history: &[VertexId],
    ) -> Result<VertexId, StrategyError>;

    /// Distinguishes internal states that share a board; equal keys on equal
    /// boards promise identical future play.
    fn memo_key(&self, _position: &Position, _history: &[VertexId]) -> u64 {
        0
    }

    /// True if the strategy always completes an edge when a single move
    /// does it. The verifier then skips replies that leave such a move open.
    fn takes_wins(&self) -> bool {
        false
    }
}

/// Adapts a closure into a [`Strategy`].
pub struct FnStrategy<F>(pub F);

impl<F> Strategy for FnStrategy<F>
where
    F: Fn(&Position, &[VertexId]) -> Result<VertexId, StrategyError> + Sync,
{
    fn next_move(
        &self,
        position: &Position,
        history: &[VertexId],
    ) -> Result<VertexId, StrategyError> {
        (self.0)(position, history)
    }
}

/// The pairing executor as a strategy.
pub struct PairingStrategy {
    pub pairing: Pairing,
    pub seat: Seat,
}

impl Strategy for PairingStrategy {
    fn next_move(
        &self,
        position: &Position,
        _history: &[VertexId],
    ) -> Result<VertexId, StrategyError> {
        pairing_move(&self.pairing, position, self.seat).map_err(|_| StrategyError::NoMove)
    }
}

/// Unpicked remainders of the live edges of `color`.
pub fn live_residuals(position: &Position, color: Color) -> Vec<VertexSet> {
    position
        .game()
        .edges(color)
        .iter()
        .filter_map(|e| position.residual(e, color))
        .collect()
}

/// Vertices that would complete an edge for `seat` right away.
pub fn threats(position: &Position, seat: Seat) -> VertexSet {
    live_residuals(position, seat.color())
        .into_iter()
        .filter(|r| r.len() == 1)
        .fold(VertexSet::new(), |acc, r| acc.union(&r))
}

/// Lowest vertex lying on two live two-vertex remainders of `seat`'s color
/// with different partners: picking it leaves two threats at once.
pub fn double_threat_vertex(position: &Position, seat: Seat) -> Option<VertexId> {
    let pairs: Vec<VertexSet> = live_residuals(position, seat.color())
        .into_iter()
        .filter(|r| r.len() == 2)
        .collect();
    let mut partner: Vec<Option<usize>> = vec![None; position.game().num_vertices()];
    let mut best: Option<usize> = None;
    for r in &pairs {
        let a = r.first().expect("pair");
        let b = r.last().expect("pair");
        for (c, other) in [(a, b), (b, a)] {
            match partner[c] {
                None => partner[c] = Some(other),
                Some(o) if o != other => best = Some(best.map_or(c, |x| x.min(c))),
                _ => {}
            }
        }
    }
    best.map(VertexId::from)
}

fn lowest(set: &VertexSet) -> Option<VertexId> {
    set.first().map(VertexId::from)
}

/// Shared opening rules: win now, else block a single threat.
fn tactical_move(position: &Position, seat: Seat) -> Option<VertexId> {
    lowest(&threats(position, seat)).or_else(|| lowest(&threats(position, seat.opponent())))
}
