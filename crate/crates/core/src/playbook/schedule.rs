use std::collections::VecDeque;
use std::fmt;

use crate::game::{AchievementGame, Position, Seat, VertexId};
use crate::qbf::{DecisionOracle, Valuation};
use crate::reduction::{ClauseRole, ReductionLayout, VarRole};

use super::PlaybookError;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum MoveKind {
    Decision,
    Forced,
    Greedy,
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveKind::Decision => "decision",
            MoveKind::Forced => "forced",
            MoveKind::Greedy => "greedy",
        })
    }
}

/// One item of the regular-play schedule.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Scheduled {
    /// A choice between the T key (`options[0]`) and the F key.
    Decision {
        seat: Seat,
        round: usize,
        options: [VertexId; 2],
    },
    Move {
        seat: Seat,
        vertex: VertexId,
        round: usize,
        step: u8,
        kind: MoveKind,
    },
}

impl Scheduled {
    pub fn seat(&self) -> Seat {
        match *self {
            Scheduled::Decision { seat, .. } | Scheduled::Move { seat, .. } => seat,
        }
    }

    pub fn round(&self) -> usize {
        match *self {
            Scheduled::Decision { round, .. } | Scheduled::Move { round, .. } => round,
        }
    }

    pub fn step(&self) -> u8 {
        match *self {
            Scheduled::Decision {
                seat: Seat::Left, ..
            } => 1,
            Scheduled::Decision {
                seat: Seat::Right, ..
            } => 3,
            Scheduled::Move { step, .. } => step,
        }
    }

    pub fn kind(&self) -> MoveKind {
        match *self {
            Scheduled::Decision { .. } => MoveKind::Decision,
            Scheduled::Move { kind, .. } => kind,
        }
    }

    pub fn accepts(&self, v: VertexId) -> bool {
        match *self {
            Scheduled::Decision { options, .. } => options.contains(&v),
            Scheduled::Move { vertex, .. } => vertex == v,
        }
    }
}

/// Streams the regular-play schedule as decisions get made.
#[derive(Clone, Debug)]
pub struct Schedule<'a> {
    layout: &'a ReductionLayout,
    round: usize,
    queue: VecDeque<Scheduled>,
    values: Vec<bool>,
}

impl<'a> Schedule<'a> {
    pub fn new(layout: &'a ReductionLayout) -> Self {
        Schedule {
            layout,
            round: 0,
            queue: VecDeque::new(),
            values: Vec::new(),
        }
    }

    /// Values decided so far, in the order x1, y1, x2, …
    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn round(&self) -> usize {
        self.round
    }

    /// The next scheduled item; `None` once round n is complete.
    pub fn peek(&mut self) -> Option<Scheduled> {
        if self.queue.is_empty() && self.round < self.layout.n() {
            self.round += 1;
            let i = self.round;
            let l = self.layout;
            self.queue.push_back(Scheduled::Decision {
                seat: Seat::Left,
                round: i,
                options: [l.var(i, VarRole::XT), l.var(i, VarRole::XF)],
            });
        }
        self.queue.front().copied()
    }

    /// Consumes the front item; `false` if `v` does not conform to it.
    pub fn commit(&mut self, v: VertexId) -> bool {
        let Some(item) = self.peek() else {
            return false;
        };
        if !item.accepts(v) {
            return false;
        }
        self.queue.pop_front();
        if let Scheduled::Decision {
            seat,
            round,
            options,
        } = item
        {
            let value = v == options[0];
            self.values.push(value);
            match seat {
                Seat::Left => self.after_x(round, value),
                Seat::Right => self.after_y(round, value),
            }
        }
        true
    }

    /// Drops a pending Left greedy move and its forced answer, returning
    /// the pair `(d, a)` that Left may still claim later.
    pub fn defer_greedy(&mut self) -> Option<(VertexId, VertexId)> {
        match (self.queue.front().copied(), self.queue.get(1).copied()) {
            (
                Some(Scheduled::Move {
                    seat: Seat::Left,
                    vertex: d,
                    kind: MoveKind::Greedy,
                    ..
                }),
                Some(Scheduled::Move { vertex: a, .. }),
            ) => {
                self.queue.pop_front();
                self.queue.pop_front();
                Some((d, a))
            }
            _ => None,
        }
    }

    fn literal_true(&self, j: usize, r: usize) -> bool {
        let lit = self.layout.literal(j, r);
        self.values[lit.variable() - 1] != lit.negated
    }

    fn push(&mut self, seat: Seat, vertex: VertexId, step: u8, kind: MoveKind) {
        let round = self.round;
        self.queue.push_back(Scheduled::Move {
            seat,
            vertex,
            round,
            step,
            kind,
        });
    }

    fn after_x(&mut self, i: usize, value: bool) {
        use VarRole::*;
        let l = self.layout;
        let (other, guard) = if value { (XF, Wp) } else { (XT, W) };
        self.push(Seat::Right, l.var(i, other), 1, MoveKind::Forced);
        self.push(Seat::Left, l.var(i, guard), 1, MoveKind::Forced);
        self.push(Seat::Right, l.var(i, S), 1, MoveKind::Forced);
        self.push(Seat::Left, l.var(i, T), 1, MoveKind::Forced);
        if i >= 2 {
            let slots: Vec<(usize, usize)> =
                l.slots().filter(|&(j, r)| l.ind(j, r) == i - 1).collect();
            for (j, r) in slots {
                if self.literal_true(j, r) {
                    self.push(
                        Seat::Right,
                        l.clause(j, ClauseRole::Br(r as u8)),
                        2,
                        MoveKind::Greedy,
                    );
                    self.push(
                        Seat::Left,
                        l.clause(j, ClauseRole::Dr(r as u8)),
                        2,
                        MoveKind::Forced,
                    );
                }
            }
        }
        self.queue.push_back(Scheduled::Decision {
            seat: Seat::Right,
            round: i,
            options: [l.var(i, YT), l.var(i, YF)],
        });
    }

    fn after_y(&mut self, i: usize, value: bool) {
        use VarRole::*;
        let l = self.layout;
        let chain = if value {
            [Om, Omp, YF, Zep, Ze, Ta, De, La]
        } else {
            [Omp, Om, YT, Ze, Zep, Ta, De, La]
        };
        for (k, role) in chain.into_iter().enumerate() {
            let seat = if k % 2 == 0 { Seat::Left } else { Seat::Right };
            self.push(seat, l.var(i, role), 3, MoveKind::Forced);
        }
        let slots: Vec<(usize, usize)> = l.slots().filter(|&(j, r)| l.ind(j, r) == i).collect();
        for (j, r) in slots {
            if !self.literal_true(j, r) {
                self.push(
                    Seat::Left,
                    l.clause(j, ClauseRole::Dr(r as u8)),
                    4,
                    MoveKind::Greedy,
                );
                self.push(
                    Seat::Right,
                    l.clause(j, ClauseRole::A(r as u8)),
                    4,
                    MoveKind::Forced,
                );
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TraceEntry {
    pub seat: Seat,
    pub vertex: VertexId,
    pub round: usize,
    pub step: u8,
    pub kind: MoveKind,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RegularPlayTrace {
    pub entries: Vec<TraceEntry>,
    pub valuation: Valuation,
}

impl RegularPlayTrace {
    pub fn moves(&self) -> Vec<VertexId> {
        self.entries.iter().map(|e| e.vertex).collect()
    }

    /// Moves through the end of round `i`.
    pub fn prefix(&self, i: usize) -> Vec<VertexId> {
        self.entries
            .iter()
            .take_while(|e| e.round <= i)
            .map(|e| e.vertex)
            .collect()
    }

    /// `<ply> <seat> <vertex-name> <round>/<step> <kind>`, one line per move.
    pub fn dump(&self, game: &AchievementGame) -> String {
        let mut out = String::new();
        for (k, e) in self.entries.iter().enumerate() {
            out.push_str(&format!(
                "{} {} {} {}/{} {}\n",
                k + 1,
                e.seat,
                game.name(e.vertex),
                e.round,
                e.step,
                e.kind
            ));
        }
        out
    }
}

/// Plays both sides through round n with Left moving first.
pub fn regular_play_trace(
    game: &AchievementGame,
    layout: &ReductionLayout,
    left_oracle: &dyn DecisionOracle,
    right_oracle: &dyn DecisionOracle,
) -> Result<RegularPlayTrace, PlaybookError> {
    let mut schedule = Schedule::new(layout);
    let mut pos = Position::new(game, Seat::Left);
    let mut entries = Vec::new();
    while let Some(item) = schedule.peek() {
        let ply = entries.len() + 1;
        let vertex = match item {
            Scheduled::Decision { seat, options, .. } => {
                let oracle = if seat == Seat::Left {
                    left_oracle
                } else {
                    right_oracle
                };
                if oracle.choose(schedule.values()) {
                    options[0]
                } else {
                    options[1]
                }
            }
            Scheduled::Move { vertex, .. } => vertex,
        };
        if pos.status().is_terminal() {
            return Err(PlaybookError::EndedEarly(ply));
        }
        if pos.to_move() != item.seat() || !pos.is_unpicked(vertex) {
            return Err(PlaybookError::Unavailable {
                ply,
                vertex: game.name(vertex),
            });
        }
        pos = pos.apply_move(vertex).expect("checked legal");
        entries.push(TraceEntry {
            seat: item.seat(),
            vertex,
            round: item.round(),
            step: item.step(),
            kind: item.kind(),
        });
        schedule.commit(vertex);
    }
    if pos.status().is_terminal() {
        return Err(PlaybookError::EndedEarly(entries.len()));
    }
    Ok(RegularPlayTrace {
        entries,
        valuation: Valuation::new(schedule.values().to_vec()),
    })
}
