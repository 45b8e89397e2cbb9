use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::game::{AchievementGame, Color, Position, Seat, VertexId};
use crate::qbf::DecisionOracle;
use crate::reduction::{ClauseRole, ReductionLayout, VarRole, VertexRole};

use super::{
    double_threat_vertex, live_residuals, tactical_move, threats, Schedule, Scheduled, Strategy,
    StrategyError,
};

/// How Right reads the game so far.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum RightMode {
    /// Everyone has followed the schedule.
    Regular,
    /// Phase 1 is over and Left opened Phase 2 with `opening`.
    Phase2 { opening: VertexId },
    /// Left left the schedule with `u` while round `round` was next to decide.
    Deviation { u: VertexId, round: usize },
    /// Right herself is off the schedule.
    Off,
}

/// Right's drawing certificate against any Left play, given a Satisfier oracle.
pub struct RightCertificate<'a> {
    layout: &'a ReductionLayout,
    oracle: &'a dyn DecisionOracle,
}

pub fn right_certificate<'a>(
    _game: &AchievementGame,
    layout: &'a ReductionLayout,
    satisfier: &'a dyn DecisionOracle,
) -> RightCertificate<'a> {
    RightCertificate {
        layout,
        oracle: satisfier,
    }
}

/// A scripted target, resolved against the current board.
#[derive(Clone, Copy)]
enum Target {
    At(VertexId),
    /// `b^r` of the first clause-`j` slot whose destruction pair is untouched.
    OpenDestruction(usize),
}

impl<'a> RightCertificate<'a> {
    pub fn mode(&self, history: &[VertexId]) -> (RightMode, Schedule<'a>) {
        let mut schedule = Schedule::new(self.layout);
        // greedy links Left passed on, and the answer owed to a late one
        let mut deferred: Vec<(VertexId, VertexId)> = Vec::new();
        let mut owed: Option<VertexId> = None;
        for (k, &v) in history.iter().enumerate() {
            let seat = if k % 2 == 0 { Seat::Left } else { Seat::Right };
            if seat == Seat::Right && owed.take() == Some(v) {
                continue;
            }
            if seat == Seat::Left {
                if let Some(at) = deferred.iter().position(|&(d, _)| d == v) {
                    owed = Some(deferred.remove(at).1);
                    continue;
                }
            }
            loop {
                if schedule.commit(v) {
                    break;
                }
                if seat == Seat::Right {
                    return (RightMode::Off, schedule);
                }
                if let Some(pair) = schedule.defer_greedy() {
                    deferred.push(pair);
                    continue;
                }
                let Some(item) = schedule.peek() else {
                    return (RightMode::Phase2 { opening: v }, schedule);
                };
                return (
                    RightMode::Deviation {
                        u: v,
                        round: item.round(),
                    },
                    schedule,
                );
            }
        }
        (RightMode::Regular, schedule)
    }

    fn regular(&self, pos: &Position, schedule: &mut Schedule) -> Option<VertexId> {
        match schedule.peek()? {
            Scheduled::Move {
                seat: Seat::Right,
                vertex,
                ..
            } => pos.is_unpicked(vertex).then_some(vertex),
            Scheduled::Decision {
                seat: Seat::Right,
                options,
                ..
            } => {
                let v = if self.oracle.choose(schedule.values()) {
                    options[0]
                } else {
                    options[1]
                };
                pos.is_unpicked(v).then_some(v)
            }
            _ => None,
        }
    }

    fn butterfly_tail(&self, targets: &mut Vec<Target>, u: VertexId, j0: usize, skip: bool) {
        let l = self.layout;
        let c = |r| l.clause(j0, r);
        for j in 1..=l.m() {
            if j != j0 || !skip {
                if j != j0 {
                    targets.push(Target::At(l.clause(j, ClauseRole::B)));
                }
            }
        }
        if u == c(ClauseRole::B) {
            targets.push(Target::OpenDestruction(j0));
            targets.push(Target::At(c(ClauseRole::Br(5))));
        } else {
            targets.push(Target::At(c(ClauseRole::B)));
        }
    }

    fn script(&self, mode: RightMode) -> Vec<Target> {
        let l = self.layout;
        let v = |k: usize, r: VarRole| l.var(k, r);
        let mut t: Vec<Target> = Vec::new();
        let all_d = |t: &mut Vec<Target>| {
            for (j, r) in l.slots() {
                t.push(Target::At(l.clause(j, ClauseRole::Dr(r as u8))));
            }
        };
        let all_b = |t: &mut Vec<Target>| {
            for j in 1..=l.m() {
                t.push(Target::At(l.clause(j, ClauseRole::B)));
            }
        };
        match mode {
            RightMode::Regular | RightMode::Off => {}
            RightMode::Phase2 { opening: u } => {
                let owner = (1..=l.m())
                    .find(|&j| u == l.clause(j, ClauseRole::B) || u == l.clause(j, ClauseRole::D));
                match owner {
                    Some(j0) => self.butterfly_tail(&mut t, u, j0, true),
                    None => all_b(&mut t),
                }
            }
            RightMode::Deviation { u, round: i } => match l.role(u) {
                VertexRole::Var(k0, role) if !matches!(role, VarRole::XT | VarRole::XF) => {
                    use VarRole::*;
                    if matches!(role, T | S | W | Wp) {
                        t.push(Target::At(v(k0, Ta)));
                    } else {
                        t.push(Target::At(v(k0, T)));
                    }
                    for k in (i..=l.n()).filter(|&k| k != k0) {
                        t.push(Target::At(v(k, T)));
                    }
                    all_b(&mut t);
                    all_d(&mut t);
                    for k in (i..=l.n()).filter(|&k| k != k0) {
                        t.push(Target::At(v(k, XT)));
                        t.push(Target::At(v(k, XF)));
                    }
                    let (first, second) = if role == W { (XF, XT) } else { (XT, XF) };
                    t.push(Target::At(v(k0, first)));
                    t.push(Target::At(v(k0, second)));
                }
                VertexRole::Var(k0, role) => {
                    use VarRole::*;
                    all_b(&mut t);
                    all_d(&mut t);
                    for k in (i..=l.n()).filter(|&k| k != k0) {
                        t.push(Target::At(v(k, XT)));
                        t.push(Target::At(v(k, XF)));
                        t.push(Target::At(v(k, T)));
                    }
                    let (guard, tail) = if role == XT {
                        (Wp, [W, S])
                    } else {
                        (W, [Wp, S])
                    };
                    t.push(Target::At(v(k0, guard)));
                    for r in [YT, Omp, Zep, Ta, La] {
                        t.push(Target::At(v(k0, r)));
                    }
                    for r in tail {
                        t.push(Target::At(v(k0, r)));
                    }
                }
                VertexRole::Clause(j0, _) => {
                    use VarRole::*;
                    for k in i..=l.n() {
                        t.push(Target::At(v(k, T)));
                    }
                    for k in i..=l.n() {
                        t.push(Target::At(v(k, XT)));
                        t.push(Target::At(v(k, XF)));
                    }
                    for k in i..=l.n() {
                        t.push(Target::At(v(k, YT)));
                        t.push(Target::At(v(k, YF)));
                    }
                    self.butterfly_tail(&mut t, u, j0, false);
                }
            },
        }
        t
    }

    fn resolve(&self, pos: &Position, target: Target) -> Option<VertexId> {
        let l = self.layout;
        match target {
            Target::At(v) => pos.is_unpicked(v).then_some(v),
            Target::OpenDestruction(j) => {
                let b = l.clause(j, ClauseRole::B);
                let wing_live = [(1, 2), (2, 3)].iter().any(|&(p, q)| {
                    pos.owner(b) == Some(Seat::Left)
                        && [p, q].iter().all(|&r| {
                            pos.owner(l.clause(j, ClauseRole::Br(r))) != Some(Seat::Right)
                        })
                });
                if !wing_live {
                    return None;
                }
                // the forced d^r must not complete a link threat for Left
                (1..=3u8).find_map(|r| {
                    let br = l.clause(j, ClauseRole::Br(r));
                    let dr = l.clause(j, ClauseRole::Dr(r));
                    let linked = pos.owner(l.key(j, r as usize)) == Some(Seat::Left)
                        && pos.is_unpicked(l.clause(j, ClauseRole::A(r)));
                    (pos.is_unpicked(br) && pos.is_unpicked(dr) && !linked).then_some(br)
                })
            }
        }
    }
}

/// Board score for Right, higher is better.
fn assess(pos: &Position) -> i64 {
    let residuals = live_residuals(pos, Color::Blue);
    let small = residuals.iter().filter(|r| r.len() <= 2).count() as i64;
    let forks = i64::from(double_threat_vertex(pos, Seat::Left).is_some());
    -(1000 * forks + 10 * small + residuals.len() as i64)
}

/// One-step lookahead kill: every candidate is tried together with Left's
/// forced answer when it creates a red threat.
fn generic_kill(pos: &Position) -> Option<VertexId> {
    let mut best: Option<(i64, VertexId)> = None;
    for v in pos.unpicked().iter().map(VertexId::from) {
        let after = pos.apply_unchecked(v);
        let score = match threats(&after, Seat::Right)
            .iter()
            .collect::<Vec<_>>()
            .as_slice()
        {
            [p] => {
                let after2 = after.apply_unchecked(VertexId::from(*p));
                match threats(&after2, Seat::Left).len() {
                    0 => assess(&after2) + 1,
                    1 => assess(&after2) - 500,
                    _ => i64::MIN / 2,
                }
            }
            _ if double_threat_vertex(&after, Seat::Left).is_some() => i64::MIN / 4,
            _ => assess(&after),
        };
        if best.map_or(true, |(s, _)| score > s) {
            best = Some((score, v));
        }
    }
    best.map(|(_, v)| v)
}

impl Strategy for RightCertificate<'_> {
    fn takes_wins(&self) -> bool {
        true
    }

    fn next_move(&self, pos: &Position, history: &[VertexId]) -> Result<VertexId, StrategyError> {
        if pos.status().is_terminal() || pos.unpicked().is_empty() {
            return Err(StrategyError::NoMove);
        }
        if let Some(v) = tactical_move(pos, Seat::Right) {
            return Ok(v);
        }
        let (mode, mut schedule) = self.mode(history);
        if mode == RightMode::Regular {
            if let Some(v) = self.regular(pos, &mut schedule) {
                return Ok(v);
            }
        }
        for target in self.script(mode) {
            if let Some(v) = self.resolve(pos, target) {
                return Ok(v);
            }
        }
        generic_kill(pos).ok_or(StrategyError::NoMove)
    }

    fn memo_key(&self, _pos: &Position, history: &[VertexId]) -> u64 {
        let mut h = DefaultHasher::new();
        self.mode(history).0.hash(&mut h);
        h.finish()
    }
}
