//! Achievement positional games: the board, positions and move rules.
//!
//! A game is a vertex universe with two edge lists. Left (blue) and Right
//! (red) alternately pick unpicked vertices; whoever first picks every vertex
//! of one of their own edges wins, and the game is drawn when the vertices run
//! out first.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::vset::{VertexSet, MAX_VERTICES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("game has {0} vertices, the limit is {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("empty edge")]
    EmptyEdge,
    #[error("vertex {vertex} out of range for a game with {num_vertices} vertices")]
    VertexOutOfRange { vertex: usize, num_vertices: usize },
    #[error("duplicate vertex name {0:?}")]
    DuplicateName(String),
    #[error("vertex {0} has already been picked")]
    AlreadyPicked(usize),
    #[error("the position is terminal ({0:?})")]
    Terminal(GameStatus),
    #[error("picked sets overlap")]
    OverlappingPicks,
    #[error("picked set sizes do not match the move alternation")]
    BadParity,
    #[error("no {color:?} edge with index {index}")]
    UnknownEdge { color: Color, index: usize },
}

/// Dense vertex index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(v: usize) -> Self {
        VertexId(v as u32)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Seat {
    Left,
    Right,
}

impl Seat {
    pub fn opponent(self) -> Seat {
        match self {
            Seat::Left => Seat::Right,
            Seat::Right => Seat::Left,
        }
    }

    /// The color of the edges this seat tries to fill.
    pub fn color(self) -> Color {
        match self {
            Seat::Left => Color::Blue,
            Seat::Right => Color::Red,
        }
    }
}

impl fmt::Display for Seat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Seat::Left => "left",
            Seat::Right => "right",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Color {
    Blue,
    Red,
}

impl Color {
    pub fn owner(self) -> Seat {
        match self {
            Color::Blue => Seat::Left,
            Color::Red => Seat::Right,
        }
    }
}

/// A non-empty set of vertices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Edge {
    members: VertexSet,
}

impl Edge {
    pub fn new(members: VertexSet) -> Result<Self, GameError> {
        if members.is_empty() {
            return Err(GameError::EmptyEdge);
        }
        Ok(Edge { members })
    }

    pub fn from_slice(members: &[usize]) -> Result<Self, GameError> {
        Self::new(members.iter().copied().collect())
    }

    #[inline]
    pub fn members(&self) -> &VertexSet {
        &self.members
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.contains(v.index())
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        self.members.iter().map(VertexId::from)
    }
}

/// An immutable achievement positional game `(V, E_L, E_R)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AchievementGame {
    num_vertices: usize,
    blue: Vec<Edge>,
    red: Vec<Edge>,
    names: Vec<Option<String>>,
}

fn dedup_edges(edges: Vec<Edge>) -> Vec<Edge> {
    let mut seen = HashSet::new();
    edges.into_iter().filter(|e| seen.insert(*e)).collect()
}

impl AchievementGame {
    /// Builds a game, deduplicating each edge list (first occurrence wins).
    pub fn new(num_vertices: usize, blue: Vec<Edge>, red: Vec<Edge>) -> Result<Self, GameError> {
        if num_vertices > MAX_VERTICES {
            return Err(GameError::TooManyVertices(num_vertices));
        }
        let universe = VertexSet::full(num_vertices);
        for e in blue.iter().chain(red.iter()) {
            if !e.members().is_subset(&universe) {
                let vertex = e.members().difference(&universe).first().unwrap_or(0);
                return Err(GameError::VertexOutOfRange {
                    vertex,
                    num_vertices,
                });
            }
        }
        Ok(AchievementGame {
            num_vertices,
            blue: dedup_edges(blue),
            red: dedup_edges(red),
            names: vec![None; num_vertices],
        })
    }

    /// Convenience constructor from index lists.
    pub fn from_lists(
        num_vertices: usize,
        blue: &[&[usize]],
        red: &[&[usize]],
    ) -> Result<Self, GameError> {
        let conv = |l: &[&[usize]]| -> Result<Vec<Edge>, GameError> {
            l.iter().map(|e| Edge::from_slice(e)).collect()
        };
        Self::new(num_vertices, conv(blue)?, conv(red)?)
    }

    /// Attaches explicit names; `names[i] = None` keeps the default `v<i>`.
    pub fn with_names(mut self, names: Vec<Option<String>>) -> Result<Self, GameError> {
        let mut names = names;
        names.resize(self.num_vertices, None);
        let mut seen = HashSet::new();
        for (i, n) in names.iter().enumerate() {
            let label = n.clone().unwrap_or_else(|| format!("v{i}"));
            if !seen.insert(label.clone()) {
                return Err(GameError::DuplicateName(label));
            }
        }
        self.names = names;
        Ok(self)
    }

    pub fn named(self, names: &[&str]) -> Result<Self, GameError> {
        self.with_names(names.iter().map(|s| Some(s.to_string())).collect())
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    #[inline]
    pub fn blue_edges(&self) -> &[Edge] {
        &self.blue
    }

    #[inline]
    pub fn red_edges(&self) -> &[Edge] {
        &self.red
    }

    pub fn edges(&self, color: Color) -> &[Edge] {
        match color {
            Color::Blue => &self.blue,
            Color::Red => &self.red,
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.num_vertices).map(VertexId::from)
    }

    pub fn universe(&self) -> VertexSet {
        VertexSet::full(self.num_vertices)
    }

    pub fn name(&self, v: VertexId) -> String {
        match self.names.get(v.index()).and_then(|n| n.as_ref()) {
            Some(n) => n.clone(),
            None => format!("v{}", v.0),
        }
    }

    pub fn names(&self) -> &[Option<String>] {
        &self.names
    }

    pub fn explicit_name(&self, v: VertexId) -> Option<&str> {
        self.names.get(v.index()).and_then(|n| n.as_deref())
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices().find(|&v| self.name(v) == name)
    }

    /// Edge with its members rendered as names, for readable diagnostics.
    pub fn edge_names(&self, e: &Edge) -> Vec<String> {
        e.vertices().map(|v| self.name(v)).collect()
    }

    /// Largest edge size over both colors.
    pub fn rank(&self) -> usize {
        self.blue
            .iter()
            .chain(self.red.iter())
            .map(Edge::len)
            .max()
            .unwrap_or(0)
    }
}

/// A plain hypergraph `(V, E)` with optional vertex names.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hypergraph {
    num_vertices: usize,
    edges: Vec<Edge>,
    names: Vec<Option<String>>,
}

impl Hypergraph {
    pub fn new(num_vertices: usize, edges: Vec<Edge>) -> Result<Self, GameError> {
        // Reuse the game validation on a one-colored game.
        let g = AchievementGame::new(num_vertices, edges, Vec::new())?;
        Ok(Hypergraph {
            num_vertices,
            edges: g.blue,
            names: vec![None; num_vertices],
        })
    }

    pub fn with_names(mut self, names: Vec<Option<String>>) -> Result<Self, GameError> {
        let g = AchievementGame::new(self.num_vertices, vec![], vec![])?.with_names(names)?;
        self.names = g.names;
        Ok(self)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn names(&self) -> &[Option<String>] {
        &self.names
    }

    pub fn rank(&self) -> usize {
        self.edges.iter().map(Edge::len).max().unwrap_or(0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GameStatus {
    Ongoing,
    LeftWon,
    RightWon,
    Drawn,
}

impl GameStatus {
    pub fn is_terminal(self) -> bool {
        self != GameStatus::Ongoing
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeState {
    /// The opponent of the edge's owner picked a member.
    Dead,
    /// No member picked.
    Intact,
    /// Only the owner has picked members; `remaining` are still unpicked.
    Partial { owner: Seat, remaining: usize },
}

/// A game state: both picked sets and who moved first.
#[derive(Clone, Copy, Debug)]
pub struct Position<'g> {
    game: &'g AchievementGame,
    left: VertexSet,
    right: VertexSet,
    first: Seat,
}

impl PartialEq for Position<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.game, other.game)
            && self.left == other.left
            && self.right == other.right
            && self.first == other.first
    }
}

impl Eq for Position<'_> {}

/// Whether some edge of `edges` lies inside `picked`.
fn fills(edges: &[Edge], picked: &VertexSet) -> bool {
    edges.iter().any(|e| e.members().is_subset(picked))
}

impl<'g> Position<'g> {
    pub fn new(game: &'g AchievementGame, first: Seat) -> Self {
        Position {
            game,
            left: VertexSet::new(),
            right: VertexSet::new(),
            first,
        }
    }

    /// Builds a position from explicit picked sets, checking disjointness and
    /// alternation parity.
    pub fn from_sets(
        game: &'g AchievementGame,
        left: VertexSet,
        right: VertexSet,
        first: Seat,
    ) -> Result<Self, GameError> {
        if left.intersects(&right) {
            return Err(GameError::OverlappingPicks);
        }
        let universe = game.universe();
        if let Some(v) = left.union(&right).difference(&universe).first() {
            return Err(GameError::VertexOutOfRange {
                vertex: v,
                num_vertices: game.num_vertices(),
            });
        }
        let (nf, ns) = match first {
            Seat::Left => (left.len(), right.len()),
            Seat::Right => (right.len(), left.len()),
        };
        if nf != ns && nf != ns + 1 {
            return Err(GameError::BadParity);
        }
        Ok(Position {
            game,
            left,
            right,
            first,
        })
    }

    /// Replays `moves` from the empty position.
    pub fn from_moves(
        game: &'g AchievementGame,
        first: Seat,
        moves: &[VertexId],
    ) -> Result<Self, GameError> {
        moves
            .iter()
            .try_fold(Self::new(game, first), |p, &v| p.apply_move(v))
    }

    #[inline]
    pub fn game(&self) -> &'g AchievementGame {
        self.game
    }

    #[inline]
    pub fn first_player(&self) -> Seat {
        self.first
    }

    #[inline]
    pub fn picked_left(&self) -> &VertexSet {
        &self.left
    }

    #[inline]
    pub fn picked_right(&self) -> &VertexSet {
        &self.right
    }

    #[inline]
    pub fn picked(&self, seat: Seat) -> &VertexSet {
        match seat {
            Seat::Left => &self.left,
            Seat::Right => &self.right,
        }
    }

    pub fn picked_all(&self) -> VertexSet {
        self.left.union(&self.right)
    }

    pub fn unpicked(&self) -> VertexSet {
        self.game.universe().difference(&self.picked_all())
    }

    pub fn num_picked(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn is_unpicked(&self, v: VertexId) -> bool {
        v.index() < self.game.num_vertices()
            && !self.left.contains(v.index())
            && !self.right.contains(v.index())
    }

    pub fn owner(&self, v: VertexId) -> Option<Seat> {
        if self.left.contains(v.index()) {
            Some(Seat::Left)
        } else if self.right.contains(v.index()) {
            Some(Seat::Right)
        } else {
            None
        }
    }

    /// The seat whose turn it is, derived from the number of picks.
    pub fn to_move(&self) -> Seat {
        if self.num_picked() % 2 == 0 {
            self.first
        } else {
            self.first.opponent()
        }
    }

    pub fn status(&self) -> GameStatus {
        if fills(&self.game.blue, &self.left) {
            GameStatus::LeftWon
        } else if fills(&self.game.red, &self.right) {
            GameStatus::RightWon
        } else if self.num_picked() == self.game.num_vertices() {
            GameStatus::Drawn
        } else {
            GameStatus::Ongoing
        }
    }

    fn ensure_ongoing(&self) -> Result<(), GameError> {
        match self.status() {
            GameStatus::Ongoing => Ok(()),
            s => Err(GameError::Terminal(s)),
        }
    }

    /// Unpicked vertices in ascending index order.
    pub fn legal_moves(&self) -> Result<Vec<VertexId>, GameError> {
        self.ensure_ongoing()?;
        Ok(self.unpicked().iter().map(VertexId::from).collect())
    }

    pub fn apply_move(&self, v: VertexId) -> Result<Position<'g>, GameError> {
        self.ensure_ongoing()?;
        if v.index() >= self.game.num_vertices() {
            return Err(GameError::VertexOutOfRange {
                vertex: v.index(),
                num_vertices: self.game.num_vertices(),
            });
        }
        if !self.is_unpicked(v) {
            return Err(GameError::AlreadyPicked(v.index()));
        }
        Ok(self.apply_unchecked(v))
    }

    /// Applies a move known to be legal on an ongoing position.
    pub(crate) fn apply_unchecked(&self, v: VertexId) -> Position<'g> {
        let mut next = *self;
        match self.to_move() {
            Seat::Left => next.left.insert(v.index()),
            Seat::Right => next.right.insert(v.index()),
        }
        debug_assert!(!next.left.intersects(&next.right));
        debug_assert!({
            let (a, b) = (
                next.picked(next.first).len(),
                next.picked(next.first.opponent()).len(),
            );
            a == b || a == b + 1
        });
        next
    }

    pub fn edge_state(&self, color: Color, index: usize) -> Result<EdgeState, GameError> {
        let edge = self
            .game
            .edges(color)
            .get(index)
            .ok_or(GameError::UnknownEdge { color, index })?;
        Ok(self.state_of(edge, color))
    }

    /// State of an arbitrary edge read as belonging to `color`.
    pub fn state_of(&self, edge: &Edge, color: Color) -> EdgeState {
        let owner = color.owner();
        let mine = self.picked(owner);
        let theirs = self.picked(owner.opponent());
        if edge.members().intersects(theirs) {
            EdgeState::Dead
        } else if !edge.members().intersects(mine) {
            EdgeState::Intact
        } else {
            EdgeState::Partial {
                owner,
                remaining: edge.members().difference(mine).len(),
            }
        }
    }

    /// Members of `edge` still needed by its owner, or `None` if it is dead.
    pub fn residual(&self, edge: &Edge, color: Color) -> Option<VertexSet> {
        let owner = color.owner();
        if edge.members().intersects(self.picked(owner.opponent())) {
            None
        } else {
            Some(edge.members().difference(self.picked(owner)))
        }
    }

    /// The rewritten game on the unpicked vertices, with names preserved.
    pub fn updated_game(&self) -> Result<AchievementGame, GameError> {
        self.ensure_ongoing()?;
        let keep: Vec<usize> = self.unpicked().iter().collect();
        let mut remap = vec![usize::MAX; self.game.num_vertices()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let rewrite = |color: Color| -> Result<Vec<Edge>, GameError> {
            self.game
                .edges(color)
                .iter()
                .filter_map(|e| self.residual(e, color))
                .map(|rest| Edge::new(rest.iter().map(|v| remap[v]).collect()))
                .collect()
        };
        let blue = rewrite(Color::Blue)?;
        let red = rewrite(Color::Red)?;
        let names = keep
            .iter()
            .map(|&old| Some(self.game.name(VertexId::from(old))))
            .collect();
        AchievementGame::new(keep.len(), blue, red)?.with_names(names)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::butterfly_bomb;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn v(g: &AchievementGame, name: &str) -> VertexId {
        g.vertex_by_name(name).unwrap()
    }

    fn named_edges(g: &AchievementGame, color: Color) -> BTreeSet<BTreeSet<String>> {
        g.edges(color)
            .iter()
            .map(|e| g.edge_names(e).into_iter().collect())
            .collect()
    }

    fn set_of(edges: &[&[&str]]) -> BTreeSet<BTreeSet<String>> {
        edges
            .iter()
            .map(|e| e.iter().map(|s| s.to_string()).collect())
            .collect()
    }

    #[test]
    fn new_position_examples() {
        let g = butterfly_bomb();
        let p = Position::new(&g, Seat::Left);
        assert_eq!(p.legal_moves().unwrap().len(), 8);
        assert_eq!(p.to_move(), Seat::Left);

        let empty = AchievementGame::new(3, vec![], vec![]).unwrap();
        let p = Position::new(&empty, Seat::Right);
        assert_eq!(p.to_move(), Seat::Right);
        assert_eq!(p.status(), GameStatus::Ongoing);

        let one = AchievementGame::new(1, vec![], vec![]).unwrap();
        assert_eq!(
            Position::new(&one, Seat::Left).legal_moves().unwrap().len(),
            1
        );
    }

    #[test]
    fn legal_moves_examples() {
        let g = butterfly_bomb();
        let p = Position::new(&g, Seat::Left);
        let b = v(&g, "b");
        let after = p.apply_move(b).unwrap();
        let moves = after.legal_moves().unwrap();
        assert_eq!(moves.len(), 7);
        assert!(!moves.contains(&b));
        assert!(moves.windows(2).all(|w| w[0] < w[1]));

        let two = AchievementGame::new(2, vec![], vec![]).unwrap();
        let done = Position::from_moves(&two, Seat::Left, &[VertexId(0), VertexId(1)]).unwrap();
        assert_eq!(
            done.legal_moves(),
            Err(GameError::Terminal(GameStatus::Drawn))
        );
    }

    #[test]
    fn butterfly_bomb_winning_line() {
        let g = butterfly_bomb();
        let line: Vec<VertexId> = ["b", "b1", "b5", "b2", "b4"]
            .iter()
            .map(|n| v(&g, n))
            .collect();
        let p = Position::from_moves(&g, Seat::Left, &line).unwrap();
        assert_eq!(p.status(), GameStatus::LeftWon);
        assert!(matches!(
            p.apply_move(v(&g, "b6")),
            Err(GameError::Terminal(_))
        ));
    }

    #[test]
    fn apply_move_examples() {
        let g = AchievementGame::from_lists(1, &[&[0]], &[]).unwrap();
        let p = Position::new(&g, Seat::Left)
            .apply_move(VertexId(0))
            .unwrap();
        assert_eq!(p.status(), GameStatus::LeftWon);

        let g = AchievementGame::new(2, vec![], vec![]).unwrap();
        let p = Position::new(&g, Seat::Left);
        let p = p.apply_move(VertexId(1)).unwrap();
        assert_eq!(p.apply_move(VertexId(1)), Err(GameError::AlreadyPicked(1)));
        let p = p.apply_move(VertexId(0)).unwrap();
        assert_eq!(p.status(), GameStatus::Drawn);
    }

    #[test]
    fn status_examples() {
        let g = butterfly_bomb();
        assert_eq!(Position::new(&g, Seat::Left).status(), GameStatus::Ongoing);
        let left: VertexSet = ["b", "b2", "b1"].iter().map(|n| v(&g, n).index()).collect();
        let right: VertexSet = ["b4", "d", "b6"].iter().map(|n| v(&g, n).index()).collect();
        let p = Position::from_sets(&g, left, right, Seat::Left).unwrap();
        assert_eq!(p.status(), GameStatus::LeftWon);

        let right: VertexSet = ["b", "d"].iter().map(|n| v(&g, n).index()).collect();
        let left: VertexSet = ["b1", "b2"].iter().map(|n| v(&g, n).index()).collect();
        let p = Position::from_sets(&g, left, right, Seat::Right).unwrap();
        assert_eq!(p.status(), GameStatus::RightWon);
    }

    #[test]
    fn from_sets_rejects_bad_states() {
        let g = butterfly_bomb();
        let a = VertexSet::singleton(0);
        assert_eq!(
            Position::from_sets(&g, a, a, Seat::Left),
            Err(GameError::OverlappingPicks)
        );
        assert_eq!(
            Position::from_sets(&g, VertexSet::new(), a, Seat::Left),
            Err(GameError::BadParity)
        );
    }

    #[test]
    fn updated_game_examples() {
        let g = butterfly_bomb();
        let b = v(&g, "b");
        let after_left = Position::new(&g, Seat::Left).apply_move(b).unwrap();
        let ug = after_left.updated_game().unwrap();
        assert_eq!(ug.num_vertices(), 7);
        assert_eq!(
            named_edges(&ug, Color::Blue),
            set_of(&[&["b1", "b2"], &["b2", "b3"], &["b4", "b5"], &["b5", "b6"]])
        );
        assert!(ug.red_edges().is_empty());

        let after_right = Position::new(&g, Seat::Right).apply_move(b).unwrap();
        let ug = after_right.updated_game().unwrap();
        assert!(ug.blue_edges().is_empty());
        assert_eq!(named_edges(&ug, Color::Red), set_of(&[&["d"]]));

        let same = Position::new(&g, Seat::Left).updated_game().unwrap();
        assert_eq!(
            named_edges(&same, Color::Blue),
            named_edges(&g, Color::Blue)
        );
        assert_eq!(named_edges(&same, Color::Red), named_edges(&g, Color::Red));
        assert_eq!(same.num_vertices(), g.num_vertices());
    }

    #[test]
    fn updated_game_rejects_terminal() {
        let g = AchievementGame::from_lists(1, &[&[0]], &[]).unwrap();
        let p = Position::new(&g, Seat::Left)
            .apply_move(VertexId(0))
            .unwrap();
        assert!(matches!(
            p.updated_game(),
            Err(GameError::Terminal(GameStatus::LeftWon))
        ));
    }

    #[test]
    fn edge_state_examples() {
        let g = butterfly_bomb();
        let b = v(&g, "b");
        // blue edge 0 is {b, b1, b2}; red edge 0 is {b, d}
        let p = Position::new(&g, Seat::Right).apply_move(b).unwrap();
        assert_eq!(p.edge_state(Color::Blue, 0), Ok(EdgeState::Dead));
        let p0 = Position::new(&g, Seat::Left);
        assert_eq!(p0.edge_state(Color::Red, 0), Ok(EdgeState::Intact));
        let p = p0.apply_move(b).unwrap();
        assert_eq!(
            p.edge_state(Color::Blue, 0),
            Ok(EdgeState::Partial {
                owner: Seat::Left,
                remaining: 2
            })
        );
        assert!(matches!(
            p.edge_state(Color::Red, 7),
            Err(GameError::UnknownEdge { .. })
        ));
    }

    #[test]
    fn construction_limits() {
        assert_eq!(
            AchievementGame::new(MAX_VERTICES + 1, vec![], vec![]),
            Err(GameError::TooManyVertices(MAX_VERTICES + 1))
        );
        assert!(matches!(
            AchievementGame::from_lists(2, &[&[0, 5]], &[]),
            Err(GameError::VertexOutOfRange { vertex: 5, .. })
        ));
        assert_eq!(Edge::from_slice(&[]), Err(GameError::EmptyEdge));
        let g = AchievementGame::from_lists(3, &[&[0, 1], &[1, 0]], &[]).unwrap();
        assert_eq!(g.blue_edges().len(), 1);
        assert!(AchievementGame::new(2, vec![], vec![])
            .unwrap()
            .named(&["a", "a"])
            .is_err());
    }

    fn arb_game(max_v: usize) -> impl Strategy<Value = AchievementGame> {
        (2..=max_v).prop_flat_map(|n| {
            let edge = proptest::collection::btree_set(0..n, 1..=3.min(n));
            (
                Just(n),
                proptest::collection::vec(edge.clone(), 0..5),
                proptest::collection::vec(edge, 0..5),
            )
                .prop_map(|(n, blue, red)| {
                    let conv = |l: Vec<BTreeSet<usize>>| {
                        l.into_iter()
                            .map(|e| Edge::new(e.into_iter().collect()).unwrap())
                            .collect()
                    };
                    AchievementGame::new(n, conv(blue), conv(red)).unwrap()
                })
        })
    }

    proptest! {
        /// Rewriting after a whole move sequence equals rewriting after each
        /// move in turn.
        #[test]
        fn updated_game_is_incremental(g in arb_game(10), order in proptest::collection::vec(any::<prop::sample::Index>(), 0..10)) {
            let mut whole = Position::new(&g, Seat::Left);
            let mut stepwise = g.clone();
            for idx in order {
                if whole.status().is_terminal() { break; }
                let moves = whole.legal_moves().unwrap();
                let mv = moves[idx.index(moves.len())];
                let name = g.name(mv);
                // the step game restarts each time, so the mover is the one to move in `whole`
                let seat = whole.to_move();
                let step_pos = Position::new(&stepwise, seat);
                let step_mv = stepwise.vertex_by_name(&name).unwrap();
                let step_next = step_pos.apply_move(step_mv).unwrap();
                whole = whole.apply_move(mv).unwrap();
                prop_assert_eq!(whole.status(), step_next.status());
                if whole.status().is_terminal() { break; }
                stepwise = step_next.updated_game().unwrap();
                let direct = whole.updated_game().unwrap();
                prop_assert_eq!(named_edges(&direct, Color::Blue), named_edges(&stepwise, Color::Blue));
                prop_assert_eq!(named_edges(&direct, Color::Red), named_edges(&stepwise, Color::Red));
                prop_assert_eq!(direct.num_vertices(), stepwise.num_vertices());
            }
        }

        /// Picked sets stay disjoint, alternate, and at most one side ever fills.
        #[test]
        fn reachable_positions_are_consistent(g in arb_game(10), order in proptest::collection::vec(any::<prop::sample::Index>(), 0..10)) {
            let mut p = Position::new(&g, Seat::Right);
            for idx in order {
                if p.status().is_terminal() {
                    prop_assert!(p.legal_moves().is_err());
                    break;
                }
                let moves = p.legal_moves().unwrap();
                p = p.apply_move(moves[idx.index(moves.len())]).unwrap();
                prop_assert!(!p.picked_left().intersects(p.picked_right()));
                let lf = g.blue_edges().iter().any(|e| e.members().is_subset(p.picked_left()));
                let rf = g.red_edges().iter().any(|e| e.members().is_subset(p.picked_right()));
                prop_assert!(!(lf && rf));
                prop_assert!(Position::from_sets(&g, *p.picked_left(), *p.picked_right(), Seat::Right).is_ok());
            }
        }
    }
}
