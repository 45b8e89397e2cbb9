use crate::game::{AchievementGame, Color, Position, Seat, VertexId};
use crate::qbf::DecisionOracle;
use crate::reduction::{ClauseRole, ReductionLayout, VarRole};

use super::{double_threat_vertex, live_residuals, lowest, tactical_move, Strategy, StrategyError};

/// Left's winning certificate against any Right play, given a Falsifier oracle.
///
/// Purely positional: forced replies and forks first, then the pending
/// step-4 greedy moves, then the next x decision, then the butterfly attack.
pub struct LeftCertificate<'a> {
    layout: &'a ReductionLayout,
    oracle: &'a dyn DecisionOracle,
}

pub fn left_certificate<'a>(
    _game: &AchievementGame,
    layout: &'a ReductionLayout,
    falsifier: &'a dyn DecisionOracle,
) -> LeftCertificate<'a> {
    LeftCertificate {
        layout,
        oracle: falsifier,
    }
}

/// Values read off the board for rounds `1..i`, x then y per round.
pub(crate) fn prefix_from_board(layout: &ReductionLayout, pos: &Position, i: usize) -> Vec<bool> {
    let mut out = Vec::with_capacity(2 * i);
    for k in 1..i {
        let xt = pos.owner(layout.var(k, VarRole::XT));
        let xf = pos.owner(layout.var(k, VarRole::XF));
        out.push(xt == Some(Seat::Left) || (xt.is_none() && xf == Some(Seat::Right)));
        let yt = pos.owner(layout.var(k, VarRole::YT));
        let yf = pos.owner(layout.var(k, VarRole::YF));
        out.push(yt == Some(Seat::Right) || (yt.is_none() && yf == Some(Seat::Left)));
    }
    out
}

impl LeftCertificate<'_> {
    fn greedy(&self, pos: &Position) -> Option<VertexId> {
        let l = self.layout;
        l.slots().find_map(|(j, r)| {
            let d = l.clause(j, ClauseRole::Dr(r as u8));
            let a = l.clause(j, ClauseRole::A(r as u8));
            (pos.owner(l.key(j, r)) == Some(Seat::Left) && pos.is_unpicked(d) && pos.is_unpicked(a))
                .then_some(d)
        })
    }

    fn decision(&self, pos: &Position) -> Option<VertexId> {
        let l = self.layout;
        let i = (1..=l.n()).find(|&i| {
            pos.is_unpicked(l.var(i, VarRole::XT)) && pos.is_unpicked(l.var(i, VarRole::XF))
        })?;
        let prefix = prefix_from_board(l, pos, i);
        let role = if self.oracle.choose(&prefix) {
            VarRole::XT
        } else {
            VarRole::XF
        };
        Some(l.var(i, role))
    }

    fn butterfly(&self, pos: &Position) -> Option<VertexId> {
        let l = self.layout;
        let ready = |j: usize| {
            let b = l.clause(j, ClauseRole::B);
            let clean = std::iter::once(b)
                .chain((1..=6).map(|r| l.clause(j, ClauseRole::Br(r))))
                .all(|v| pos.owner(v) != Some(Seat::Right));
            let defused = (1..=3u8).all(|r| {
                !pos.is_unpicked(l.clause(j, ClauseRole::Br(r)))
                    || !pos.is_unpicked(l.clause(j, ClauseRole::Dr(r)))
            });
            pos.is_unpicked(b) && clean && defused
        };
        let live = |j: usize| {
            let b = l.clause(j, ClauseRole::B);
            pos.is_unpicked(b)
                && live_residuals(pos, Color::Blue)
                    .iter()
                    .any(|r| r.contains(b.index()) && r.len() == 3)
        };
        (1..=l.m())
            .find(|&j| ready(j))
            .or_else(|| (1..=l.m()).find(|&j| live(j)))
            .map(|j| l.clause(j, ClauseRole::B))
    }
}

impl Strategy for LeftCertificate<'_> {
    fn takes_wins(&self) -> bool {
        true
    }

    fn next_move(&self, pos: &Position, _history: &[VertexId]) -> Result<VertexId, StrategyError> {
        if pos.status().is_terminal() || pos.unpicked().is_empty() {
            return Err(StrategyError::NoMove);
        }
        if let Some(v) = tactical_move(pos, Seat::Left) {
            return Ok(v);
        }
        if let Some(v) = double_threat_vertex(pos, Seat::Left) {
            return Ok(v);
        }
        if let Some(v) = self
            .greedy(pos)
            .or_else(|| self.decision(pos))
            .or_else(|| self.butterfly(pos))
        {
            return Ok(v);
        }
        let live = live_residuals(pos, Color::Blue)
            .into_iter()
            .fold(crate::vset::VertexSet::new(), |a, r| a.union(&r));
        Ok(lowest(&live)
            .or_else(|| lowest(&pos.unpicked()))
            .expect("unpicked vertex exists"))
    }
}
