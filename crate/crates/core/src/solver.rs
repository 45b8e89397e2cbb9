//! Exact optimal-play values.
//!
//! [`solve`] is a memoized three-valued minimax over picked-set pairs;
//! [`naive_solve`] is the unmemoized reference used to check it.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::game::{AchievementGame, GameError, GameStatus, Position, Seat, VertexId};
use crate::vset::VertexSet;

/// Largest number of unpicked vertices [`naive_solve`] accepts.
pub const NAIVE_LIMIT: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("search budget exhausted")]
    Exhausted,
    #[error("{0} unpicked vertices exceeds the naive solver limit of {NAIVE_LIMIT}")]
    TooLarge(usize),
    #[error("budget limits must be positive")]
    BadBudget,
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Outcome {
    LeftWin,
    Draw,
    RightWin,
}

impl Outcome {
    /// +1 for a win of `seat`, 0 for a draw, -1 for a loss.
    pub fn score_for(self, seat: Seat) -> i8 {
        match (self, seat) {
            (Outcome::Draw, _) => 0,
            (Outcome::LeftWin, Seat::Left) | (Outcome::RightWin, Seat::Right) => 1,
            _ => -1,
        }
    }

    pub fn from_score(seat: Seat, score: i8) -> Outcome {
        match (score.signum(), seat) {
            (0, _) => Outcome::Draw,
            (1, Seat::Left) | (-1, Seat::Right) => Outcome::LeftWin,
            _ => Outcome::RightWin,
        }
    }

    pub fn win_for(seat: Seat) -> Outcome {
        Outcome::from_score(seat, 1)
    }

    pub fn from_status(status: GameStatus) -> Option<Outcome> {
        match status {
            GameStatus::Ongoing => None,
            GameStatus::LeftWon => Some(Outcome::LeftWin),
            GameStatus::RightWon => Some(Outcome::RightWin),
            GameStatus::Drawn => Some(Outcome::Draw),
        }
    }

    pub fn mirrored(self) -> Outcome {
        match self {
            Outcome::LeftWin => Outcome::RightWin,
            Outcome::RightWin => Outcome::LeftWin,
            Outcome::Draw => Outcome::Draw,
        }
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::LeftWin => "LeftWin",
            Outcome::Draw => "Draw",
            Outcome::RightWin => "RightWin",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SearchBudget {
    pub max_states: u64,
    pub max_millis: u64,
}

impl SearchBudget {
    pub fn new(max_states: u64, max_millis: u64) -> Result<Self, SolveError> {
        if max_states == 0 || max_millis == 0 {
            return Err(SolveError::BadBudget);
        }
        Ok(SearchBudget {
            max_states,
            max_millis,
        })
    }

    pub fn states(max_states: u64) -> Self {
        SearchBudget {
            max_states: max_states.max(1),
            max_millis: u64::MAX,
        }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_states: 10_000_000,
            max_millis: 60_000,
        }
    }
}

/// Tracks state count and wall clock against a [`SearchBudget`].
#[derive(Debug)]
pub(crate) struct BudgetMeter {
    budget: SearchBudget,
    start: Instant,
    pub(crate) states: u64,
}

impl BudgetMeter {
    pub(crate) fn new(budget: SearchBudget) -> Self {
        BudgetMeter {
            budget,
            start: Instant::now(),
            states: 0,
        }
    }

    /// Counts one state; `Err` once either limit trips.
    #[inline]
    pub(crate) fn tick(&mut self) -> Result<(), SolveError> {
        self.states += 1;
        if self.states > self.budget.max_states {
            return Err(SolveError::Exhausted);
        }
        if self.states % 1024 == 0
            && self.budget.max_millis != u64::MAX
            && self.start.elapsed() > Duration::from_millis(self.budget.max_millis)
        {
            return Err(SolveError::Exhausted);
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SolveResult {
    Solved(Outcome),
    Exhausted,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SolveReport {
    pub result: SolveResult,
    pub states_visited: u64,
    pub table_hits: u64,
}

impl SolveReport {
    pub fn outcome(&self) -> Option<Outcome> {
        match self.result {
            SolveResult::Solved(o) => Some(o),
            SolveResult::Exhausted => None,
        }
    }
}

/// A memoizing solver bound to one game and first player.
pub struct Solver<'g> {
    game: &'g AchievementGame,
    first: Seat,
    blue: Vec<VertexSet>,
    red: Vec<VertexSet>,
    memo: HashMap<(VertexSet, VertexSet), i8>,
    meter: BudgetMeter,
    hits: u64,
}

impl<'g> Solver<'g> {
    pub fn new(game: &'g AchievementGame, first: Seat, budget: SearchBudget) -> Self {
        Solver {
            game,
            first,
            blue: game.blue_edges().iter().map(|e| *e.members()).collect(),
            red: game.red_edges().iter().map(|e| *e.members()).collect(),
            memo: HashMap::new(),
            meter: BudgetMeter::new(budget),
            hits: 0,
        }
    }

    pub fn states_visited(&self) -> u64 {
        self.meter.states
    }

    pub fn table_hits(&self) -> u64 {
        self.hits
    }

    /// Value of `position` under optimal play.
    pub fn value(&mut self, position: &Position<'g>) -> Result<Outcome, SolveError> {
        debug_assert!(std::ptr::eq(position.game(), self.game));
        debug_assert_eq!(position.first_player(), self.first);
        if let Some(o) = Outcome::from_status(position.status()) {
            return Ok(o);
        }
        let mover = position.to_move();
        let (mine, theirs) = match mover {
            Seat::Left => (*position.picked_left(), *position.picked_right()),
            Seat::Right => (*position.picked_right(), *position.picked_left()),
        };
        let score = self.search(mine, theirs, mover)?;
        Ok(Outcome::from_score(mover, score))
    }

    fn edges(&self, seat: Seat) -> &[VertexSet] {
        match seat {
            Seat::Left => &self.blue,
            Seat::Right => &self.red,
        }
    }

    /// Mover-relative score of an ongoing state.
    fn search(
        &mut self,
        mine: VertexSet,
        theirs: VertexSet,
        mover: Seat,
    ) -> Result<i8, SolveError> {
        let picked = mine.union(&theirs);
        let free = self.game.universe().difference(&picked);
        if free.is_empty() {
            return Ok(0);
        }
        // Immediate win.
        for e in self.edges(mover) {
            if !e.intersects(&theirs) && e.difference(&mine).len() == 1 {
                return Ok(1);
            }
        }
        // Opponent threats: one forces the reply, two lose.
        let mut threats = VertexSet::new();
        for e in self.edges(mover.opponent()) {
            if !e.intersects(&mine) {
                let rest = e.difference(&theirs);
                if rest.len() == 1 {
                    threats = threats.union(&rest);
                }
            }
        }
        if threats.len() >= 2 {
            return Ok(-1);
        }

        let key = match mover {
            Seat::Left => (mine, theirs),
            Seat::Right => (theirs, mine),
        };
        if let Some(&s) = self.memo.get(&key) {
            self.hits += 1;
            return Ok(s);
        }
        self.meter.tick()?;

        let candidates = if threats.is_empty() { free } else { threats };
        let mut best = -1i8;
        for v in candidates.iter() {
            let s = -self.search(theirs, mine.with(v), mover.opponent())?;
            if s > best {
                best = s;
                if best == 1 {
                    break;
                }
            }
        }
        self.memo.insert(key, best);
        Ok(best)
    }
}

pub fn solve(position: &Position, budget: SearchBudget) -> SolveReport {
    let mut solver = Solver::new(position.game(), position.first_player(), budget);
    let result = match solver.value(position) {
        Ok(o) => SolveResult::Solved(o),
        Err(_) => SolveResult::Exhausted,
    };
    SolveReport {
        result,
        states_visited: solver.states_visited(),
        table_hits: solver.table_hits(),
    }
}

/// Plain minimax over every move sequence.
pub fn naive_solve(position: &Position) -> Result<Outcome, SolveError> {
    let free = position.unpicked().len();
    if free > NAIVE_LIMIT {
        return Err(SolveError::TooLarge(free));
    }
    Ok(naive(position))
}

fn naive(position: &Position) -> Outcome {
    if let Some(o) = Outcome::from_status(position.status()) {
        return o;
    }
    let mover = position.to_move();
    position
        .legal_moves()
        .expect("ongoing")
        .into_iter()
        .map(|v| naive(&position.apply_move(v).expect("legal")))
        .max_by_key(|o| o.score_for(mover))
        .expect("ongoing positions have moves")
}

/// Every move whose resulting value equals the position value, ascending.
pub fn best_moves(position: &Position, budget: SearchBudget) -> Result<Vec<VertexId>, SolveError> {
    let moves = position.legal_moves()?;
    let mut solver = Solver::new(position.game(), position.first_player(), budget);
    let target = solver.value(position)?;
    let mut out = Vec::new();
    for v in moves {
        if solver.value(&position.apply_move(v)?)? == target {
            out.push(v);
        }
    }
    Ok(out)
}
