//! Adversarial checking of strategies: exhaustive search over every reply,
//! random playouts, and the full pipeline from a 3-QBF instance.

use std::collections::HashSet;
use std::fmt;

use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::game::{AchievementGame, GameError, GameStatus, Position, Seat, VertexId};
use crate::playbook::{left_certificate, live_residuals, right_certificate, threats, Strategy};
use crate::qbf::{falsifier_wins, FalsifierOracle, Qbf3Instance, QbfError, SatisfierOracle};
use crate::reduction::{build_reduction, validate_reduction, ReductionError, ValidationReport};
use crate::solver::{solve, Outcome, SearchBudget};
use crate::vset::VertexSet;

/// Default node budget for exhaustive runs.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// Largest reduction game the end-to-end pipeline hands to the exact solver.
pub const CROSSCHECK_VERTEX_LIMIT: usize = 30;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("opening line: {0}")]
    Line(#[from] GameError),
    #[error(transparent)]
    Qbf(#[from] QbfError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Goal {
    MustWin,
    MustNotLose,
}

impl Goal {
    fn accepts(self, seat: Seat, status: GameStatus) -> bool {
        let won = matches!(
            (seat, status),
            (Seat::Left, GameStatus::LeftWon) | (Seat::Right, GameStatus::RightWon)
        );
        won || (self == Goal::MustNotLose && status == GameStatus::Drawn)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Verified,
    /// A full move list from the empty board ending in a leaf the goal rejects.
    Refuted(Vec<VertexId>),
    Exhausted,
    /// Random playouts found nothing; not a proof.
    NotRefuted(usize),
}

impl Verdict {
    fn rank(&self) -> u8 {
        match self {
            Verdict::Refuted(_) => 3,
            Verdict::Exhausted => 2,
            Verdict::NotRefuted(_) => 1,
            Verdict::Verified => 0,
        }
    }

    pub fn is_verified(&self) -> bool {
        *self == Verdict::Verified
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(_))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VerificationReport {
    pub verdict: Verdict,
    pub nodes_explored: u64,
    pub max_depth: usize,
}

impl VerificationReport {
    pub fn counterexample(&self) -> Option<&[VertexId]> {
        match &self.verdict {
            Verdict::Refuted(line) => Some(line),
            _ => None,
        }
    }

    /// Key-value lines: `verdict=`, `nodes=`, `max_depth=`, `counterexample=`.
    pub fn render(&self, game: &AchievementGame) -> String {
        let verdict = match &self.verdict {
            Verdict::Verified => "Verified".to_string(),
            Verdict::Refuted(_) => "Refuted".to_string(),
            Verdict::Exhausted => "Exhausted".to_string(),
            Verdict::NotRefuted(t) => format!("NotRefuted({t})"),
        };
        let mut out = format!(
            "verdict={verdict}\nnodes={}\nmax_depth={}\n",
            self.nodes_explored, self.max_depth
        );
        if let Some(line) = self.counterexample() {
            let names: Vec<String> = line.iter().map(|&v| game.name(v)).collect();
            out.push_str(&format!("counterexample={}\n", names.join(" ")));
        }
        out
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Verified => write!(f, "Verified"),
            Verdict::Refuted(line) => write!(f, "Refuted({} plies)", line.len()),
            Verdict::Exhausted => write!(f, "Exhausted"),
            Verdict::NotRefuted(t) => write!(f, "NotRefuted({t})"),
        }
    }
}

/// Search settings. The node budget applies to each branch below the first
/// adversary choice, so verdicts and counts do not depend on `jobs`.
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub node_budget: u64,
    pub jobs: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            node_budget: DEFAULT_NODE_BUDGET,
            jobs: 1,
        }
    }
}

impl VerifyOptions {
    pub fn budget(node_budget: u64) -> Self {
        VerifyOptions {
            node_budget,
            ..Self::default()
        }
    }
}

enum Step {
    Accept,
    Reject,
    OutOfBudget,
}

struct Search<'s, 'g> {
    strategy: &'s dyn Strategy,
    seat: Seat,
    goal: Goal,
    budget: u64,
    nodes: u64,
    base: usize,
    max_depth: usize,
    seen: HashSet<(VertexSet, VertexSet, u64)>,
    line: Vec<VertexId>,
    _game: std::marker::PhantomData<&'g ()>,
}

/// Adversary replies: immediate wins, blocks, then moves by how much of
/// `seat`'s live structure they destroy, threat-creating moves breaking ties,
/// then ascending index.
fn adversary_moves(pos: &Position, seat: Seat) -> Vec<VertexId> {
    let mover = pos.to_move();
    let wins = threats(pos, mover);
    let blocks = threats(pos, seat);
    let near = live_residuals(pos, mover.color())
        .into_iter()
        .filter(|r| r.len() == 2)
        .fold(VertexSet::new(), |a, r| a.union(&r));
    let mut kill = vec![0u32; pos.game().num_vertices()];
    for r in live_residuals(pos, seat.color()) {
        let weight = 1 << (4 - r.len().min(4));
        for v in r.iter() {
            kill[v] += weight;
        }
    }
    let mut rest: Vec<VertexId> = pos
        .unpicked()
        .difference(&wins.union(&blocks))
        .iter()
        .map(VertexId::from)
        .collect();
    rest.sort_by_key(|v| {
        (
            std::cmp::Reverse(kill[v.index()]),
            !near.contains(v.index()),
            v.index(),
        )
    });
    let mut out: Vec<VertexId> = wins.iter().map(VertexId::from).collect();
    out.extend(blocks.difference(&wins).iter().map(VertexId::from));
    out.extend(rest);
    out
}

impl<'s, 'g> Search<'s, 'g> {
    fn new(
        strategy: &'s dyn Strategy,
        seat: Seat,
        goal: Goal,
        budget: u64,
        line: Vec<VertexId>,
    ) -> Self {
        Search {
            strategy,
            seat,
            goal,
            budget,
            nodes: 0,
            base: line.len(),
            max_depth: 0,
            seen: HashSet::new(),
            line,
            _game: std::marker::PhantomData,
        }
    }

    /// Plays the line out to a leaf; used once the goal is already out of reach.
    fn finish(&mut self, mut pos: Position<'g>) {
        while !pos.status().is_terminal() {
            let v = if pos.to_move() == self.seat {
                self.strategy
                    .next_move(&pos, &self.line)
                    .ok()
                    .filter(|&v| pos.is_unpicked(v))
            } else {
                None
            };
            let v = v.unwrap_or_else(|| VertexId::from(pos.unpicked().first().expect("ongoing")));
            self.line.push(v);
            pos = pos.apply_unchecked(v);
        }
    }

    fn run(&mut self, pos: Position<'g>) -> Step {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Step::OutOfBudget;
        }
        self.max_depth = self.max_depth.max(self.line.len() - self.base);
        let status = pos.status();
        if status.is_terminal() {
            return if self.goal.accepts(self.seat, status) {
                Step::Accept
            } else {
                Step::Reject
            };
        }
        let opponent = self.seat.opponent();
        match self.goal {
            Goal::MustNotLose if live_residuals(&pos, opponent.color()).is_empty() => {
                return Step::Accept
            }
            Goal::MustWin if live_residuals(&pos, self.seat.color()).is_empty() => {
                self.finish(pos);
                return Step::Reject;
            }
            _ => {}
        }
        let key = (
            *pos.picked_left(),
            *pos.picked_right(),
            self.strategy.memo_key(&pos, &self.line),
        );
        if self.seen.contains(&key) {
            return Step::Accept;
        }
        if pos.to_move() == self.seat {
            let v = match self.strategy.next_move(&pos, &self.line) {
                Ok(v) if pos.is_unpicked(v) => v,
                _ => return Step::Reject,
            };
            self.line.push(v);
            match self.run(pos.apply_unchecked(v)) {
                Step::Accept => {
                    self.line.pop();
                }
                other => return other,
            }
        } else {
            let mut moves = adversary_moves(&pos, self.seat);
            let open = threats(&pos, self.seat);
            if self.strategy.takes_wins() && !open.is_empty() && threats(&pos, opponent).is_empty()
            {
                if open.len() >= 2 {
                    self.seen.insert(key);
                    return Step::Accept;
                }
                // any other reply lets the strategy complete its edge
                moves.retain(|v| open.contains(v.index()));
            }
            for v in moves {
                self.line.push(v);
                match self.run(pos.apply_unchecked(v)) {
                    Step::Accept => {
                        self.line.pop();
                    }
                    other => return other,
                }
            }
        }
        self.seen.insert(key);
        Step::Accept
    }

    fn report(self, step: Step) -> VerificationReport {
        let verdict = match step {
            Step::Accept => Verdict::Verified,
            Step::Reject => Verdict::Refuted(self.line),
            Step::OutOfBudget => Verdict::Exhausted,
        };
        VerificationReport {
            verdict,
            nodes_explored: self.nodes.min(self.budget),
            max_depth: self.max_depth,
        }
    }
}

fn merge(
    parts: Vec<VerificationReport>,
    prefix_nodes: u64,
    prefix_depth: usize,
) -> VerificationReport {
    let nodes = prefix_nodes + parts.iter().map(|r| r.nodes_explored).sum::<u64>();
    let depth = parts
        .iter()
        .map(|r| r.max_depth + prefix_depth)
        .max()
        .unwrap_or(prefix_depth);
    let verdict = parts
        .into_iter()
        .map(|r| r.verdict)
        .max_by(|a, b| {
            a.rank().cmp(&b.rank()).then_with(|| match (a, b) {
                (Verdict::Refuted(x), Verdict::Refuted(y)) => y.cmp(x),
                _ => std::cmp::Ordering::Equal,
            })
        })
        .unwrap_or(Verdict::Verified);
    VerificationReport {
        verdict,
        nodes_explored: nodes,
        max_depth: depth,
    }
}

/// Checks `strategy` for `seat` from the empty board with Left to move first.
pub fn verify_strategy(
    game: &AchievementGame,
    strategy: &dyn Strategy,
    seat: Seat,
    goal: Goal,
    node_budget: u64,
) -> VerificationReport {
    verify_from(
        game,
        Seat::Left,
        &[],
        strategy,
        seat,
        goal,
        VerifyOptions::budget(node_budget),
    )
    .expect("empty line is legal")
}

/// Checks `strategy` from the position reached by `line`; the strategy sees
/// the whole history including `line`.
pub fn verify_from(
    game: &AchievementGame,
    first: Seat,
    line: &[VertexId],
    strategy: &dyn Strategy,
    seat: Seat,
    goal: Goal,
    options: VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let root = Position::from_moves(game, first, line)?;
    // Follow the strategy down to the first adversary choice.
    let mut head = Search::new(strategy, seat, goal, options.node_budget, line.to_vec());
    let mut pos = root;
    loop {
        if pos.status().is_terminal() || pos.to_move() != seat {
            break;
        }
        head.nodes += 1;
        match strategy.next_move(&pos, &head.line) {
            Ok(v) if pos.is_unpicked(v) => {
                head.line.push(v);
                pos = pos.apply_unchecked(v);
            }
            _ => return Ok(head.report(Step::Reject)),
        }
    }
    if pos.status().is_terminal() {
        let step = if goal.accepts(seat, pos.status()) {
            Step::Accept
        } else {
            Step::Reject
        };
        return Ok(head.report(step));
    }
    let prefix = head.line.clone();
    let prefix_depth = prefix.len() - line.len();
    let check = |v: VertexId| {
        let mut l = prefix.clone();
        l.push(v);
        let mut s = Search::new(strategy, seat, goal, options.node_budget, l);
        s.base = line.len();
        let step = s.run(pos.apply_unchecked(v));
        s.report(step)
    };
    let moves = adversary_moves(&pos, seat);
    let parts: Vec<VerificationReport> = if options.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .expect("thread pool");
        pool.install(|| moves.par_iter().map(|&v| check(v)).collect())
    } else {
        moves.iter().map(|&v| check(v)).collect()
    };
    let mut report = merge(parts, head.nodes + 1, 0);
    report.max_depth = report.max_depth.max(prefix_depth);
    Ok(report)
}

/// Plays `trials` games against a uniformly random adversary.
pub fn randomized_check(
    game: &AchievementGame,
    strategy: &dyn Strategy,
    seat: Seat,
    goal: Goal,
    trials: usize,
    seed: u64,
) -> Result<VerificationReport, VerifyError> {
    if trials == 0 {
        return Err(VerifyError::NoTrials);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = 0u64;
    let mut max_depth = 0;
    for _ in 0..trials {
        let mut pos = Position::new(game, Seat::Left);
        let mut line = Vec::new();
        while !pos.status().is_terminal() {
            let v = if pos.to_move() == seat {
                match strategy.next_move(&pos, &line) {
                    Ok(v) if pos.is_unpicked(v) => v,
                    _ => {
                        return Ok(VerificationReport {
                            verdict: Verdict::Refuted(line),
                            nodes_explored: nodes,
                            max_depth,
                        })
                    }
                }
            } else {
                VertexId::from(pos.unpicked().iter().choose(&mut rng).expect("ongoing"))
            };
            line.push(v);
            pos = pos.apply_unchecked(v);
            nodes += 1;
        }
        max_depth = max_depth.max(line.len());
        if !goal.accepts(seat, pos.status()) {
            return Ok(VerificationReport {
                verdict: Verdict::Refuted(line),
                nodes_explored: nodes,
                max_depth,
            });
        }
    }
    Ok(VerificationReport {
        verdict: Verdict::NotRefuted(trials),
        nodes_explored: nodes,
        max_depth,
    })
}

#[derive(Clone, Debug)]
pub struct EndToEndReport {
    pub falsifier_wins: bool,
    pub validation: ValidationReport,
    /// The seat whose certificate was checked: Left if Falsifier wins.
    pub certificate: Seat,
    pub verification: VerificationReport,
    /// Exact value of the reduction game with Left first, when small enough to solve.
    pub crosscheck: Option<Outcome>,
}

impl EndToEndReport {
    pub fn conclusive(&self) -> bool {
        self.verification.verdict != Verdict::Exhausted
    }

    /// Everything that ran agrees with the equivalence.
    pub fn agrees(&self) -> bool {
        let expected = if self.falsifier_wins {
            Outcome::LeftWin
        } else {
            Outcome::Draw
        };
        self.validation.all_passed()
            && self.verification.verdict.is_verified()
            && self.crosscheck.map_or(true, |o| {
                o == expected || (!self.falsifier_wins && o != Outcome::LeftWin)
            })
    }
}

/// Compiles, validates and verifies the certificate matching the QBF value.
pub fn end_to_end(
    instance: &Qbf3Instance,
    options: VerifyOptions,
) -> Result<EndToEndReport, VerifyError> {
    let f = falsifier_wins(instance)?;
    let (game, layout) = build_reduction(instance)?;
    let validation = validate_reduction(&game, &layout);
    let verification = if f {
        let oracle = FalsifierOracle::new(instance)?;
        let cert = left_certificate(&game, &layout, &oracle);
        verify_from(
            &game,
            Seat::Left,
            &[],
            &cert,
            Seat::Left,
            Goal::MustWin,
            options,
        )?
    } else {
        let oracle = SatisfierOracle::new(instance)?;
        let cert = right_certificate(&game, &layout, &oracle);
        verify_from(
            &game,
            Seat::Left,
            &[],
            &cert,
            Seat::Right,
            Goal::MustNotLose,
            options,
        )?
    };
    let crosscheck = (game.num_vertices() <= CROSSCHECK_VERTEX_LIMIT)
        .then(|| {
            solve(
                &Position::new(&game, Seat::Left),
                SearchBudget::states(options.node_budget),
            )
            .outcome()
        })
        .flatten();
    Ok(EndToEndReport {
        falsifier_wins: f,
        validation,
        certificate: if f { Seat::Left } else { Seat::Right },
        verification,
        crosscheck,
    })
}
