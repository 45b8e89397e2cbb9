//! Complete pairings and greedy moves.

use thiserror::Error;

use crate::game::{AchievementGame, Edge, Position, Seat, VertexId};
use crate::vset::VertexSet;

/// Edge-count limit for the exact pairing search.
pub const PAIRING_EDGE_LIMIT: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LemmaError {
    #[error("{0} edges exceeds the pairing search limit of {PAIRING_EDGE_LIMIT}")]
    TooManyEdges(usize),
    #[error("greedy moves need a game without size-1 edges")]
    SizeOneEdge,
    #[error("no legal move")]
    NoMove,
}

/// Pairwise disjoint vertex pairs.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Pairing {
    pairs: Vec<(VertexId, VertexId)>,
}

impl Pairing {
    /// Builds a pairing; `None` if two pairs share a vertex or a pair is degenerate.
    pub fn new(pairs: Vec<(VertexId, VertexId)>) -> Option<Self> {
        let mut used = VertexSet::new();
        for &(a, b) in &pairs {
            if a == b || used.contains(a.index()) || used.contains(b.index()) {
                return None;
            }
            used.insert(a.index());
            used.insert(b.index());
        }
        Some(Pairing { pairs })
    }

    pub fn pairs(&self) -> &[(VertexId, VertexId)] {
        &self.pairs
    }

    pub fn partner(&self, v: VertexId) -> Option<VertexId> {
        self.pairs.iter().find_map(|&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }

    fn covers(&self, e: &Edge) -> bool {
        self.pairs
            .iter()
            .any(|&(a, b)| e.contains(a) && e.contains(b))
    }

    /// Every edge contains some pair.
    pub fn is_complete_for(&self, edges: &[Edge]) -> bool {
        edges.iter().all(|e| self.covers(e))
    }
}

/// Exact backtracking search for a complete pairing of `edges`.
pub fn find_complete_pairing(edges: &[Edge]) -> Result<Option<Pairing>, LemmaError> {
    if edges.len() > PAIRING_EDGE_LIMIT {
        return Err(LemmaError::TooManyEdges(edges.len()));
    }
    let sets: Vec<VertexSet> = edges.iter().map(|e| *e.members()).collect();
    let mut chosen = Vec::new();
    let covered = vec![false; sets.len()];
    if !search_pairing(&sets, covered, VertexSet::new(), &mut chosen) {
        return Ok(None);
    }
    let pairing = Pairing::new(chosen).expect("search keeps pairs disjoint");
    debug_assert!(pairing.is_complete_for(edges));
    Ok(Some(pairing))
}

fn candidate_pairs(e: &VertexSet, used: &VertexSet) -> Vec<(usize, usize)> {
    let free: Vec<usize> = e.difference(used).iter().collect();
    let mut out = Vec::new();
    for (i, &a) in free.iter().enumerate() {
        for &b in &free[i + 1..] {
            out.push((a, b));
        }
    }
    out
}

fn search_pairing(
    sets: &[VertexSet],
    covered: Vec<bool>,
    used: VertexSet,
    chosen: &mut Vec<(VertexId, VertexId)>,
) -> bool {
    // Most constrained uncovered edge first.
    let mut pick: Option<(usize, Vec<(usize, usize)>)> = None;
    for (i, e) in sets.iter().enumerate() {
        if covered[i] {
            continue;
        }
        let cands = candidate_pairs(e, &used);
        if cands.is_empty() {
            return false;
        }
        if pick
            .as_ref()
            .map(|(_, c)| cands.len() < c.len())
            .unwrap_or(true)
        {
            pick = Some((i, cands));
        }
    }
    let Some((_, cands)) = pick else {
        return true;
    };
    for (a, b) in cands {
        let pair = VertexSet::singleton(a).with(b);
        let next: Vec<bool> = sets
            .iter()
            .zip(&covered)
            .map(|(e, &c)| c || pair.is_subset(e))
            .collect();
        chosen.push((VertexId::from(a), VertexId::from(b)));
        if search_pairing(sets, next, used.union(&pair), chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Pairing-strategy reply for `seat`: answer inside the pair the opponent
/// just hit, otherwise stay outside live pairs.
pub fn pairing_move(
    pairing: &Pairing,
    position: &Position,
    seat: Seat,
) -> Result<VertexId, LemmaError> {
    let free = position.unpicked();
    if free.is_empty() || position.status().is_terminal() {
        return Err(LemmaError::NoMove);
    }
    let theirs = position.picked(seat.opponent());
    for &(a, b) in pairing.pairs() {
        if theirs.contains(a.index()) && free.contains(b.index()) {
            return Ok(b);
        }
        if theirs.contains(b.index()) && free.contains(a.index()) {
            return Ok(a);
        }
    }
    let mut live = VertexSet::new();
    for &(a, b) in pairing.pairs() {
        if free.contains(a.index()) && free.contains(b.index()) {
            live.insert(a.index());
            live.insert(b.index());
        }
    }
    let v = free
        .difference(&live)
        .first()
        .or_else(|| free.first())
        .expect("free is non-empty");
    Ok(VertexId::from(v))
}

/// Finds an own-color edge `{u, v}` where every edge through `u` also
/// contains `v`; returns `(v, u)` with the lexicographically smallest indices.
pub fn find_greedy_move(
    game: &AchievementGame,
    seat: Seat,
) -> Result<Option<(VertexId, VertexId)>, LemmaError> {
    if game
        .blue_edges()
        .iter()
        .chain(game.red_edges())
        .any(|e| e.len() == 1)
    {
        return Err(LemmaError::SizeOneEdge);
    }
    let all: Vec<&Edge> = game.blue_edges().iter().chain(game.red_edges()).collect();
    let mut best: Option<(VertexId, VertexId)> = None;
    for e in game.edges(seat.color()).iter().filter(|e| e.len() == 2) {
        let ends: Vec<VertexId> = e.vertices().collect();
        for (v, u) in [(ends[0], ends[1]), (ends[1], ends[0])] {
            let dominated = all.iter().all(|f| !f.contains(u) || f.contains(v));
            if dominated && best.map(|b| (v, u) < b).unwrap_or(true) {
                best = Some((v, u));
            }
        }
    }
    Ok(best)
}
