use std::fmt;

use crate::game::{AchievementGame, Color, Edge, EdgeState, Position, Seat, VertexId};
use crate::reduction::{ClauseRole, EdgeRole, ReductionLayout, VarRole, VertexRole};
use crate::vset::VertexSet;

use super::RegularPlayTrace;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PropertyResult {
    pub name: &'static str,
    pub passed: bool,
    pub witnesses: Vec<String>,
}

/// The five end-of-round properties of regular play.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Claim0Report {
    pub round: usize,
    pub properties: Vec<PropertyResult>,
}

impl Claim0Report {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.properties
            .iter()
            .filter(|p| !p.passed)
            .map(|p| p.name)
            .collect()
    }
}

impl fmt::Display for Claim0Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.properties {
            let mark = if p.passed { "ok" } else { "FAIL" };
            writeln!(
                f,
                "round {} {mark} {} {}",
                self.round,
                p.name,
                p.witnesses.join(", ")
            )?;
        }
        Ok(())
    }
}

/// Checks the trace prefix through the end of round `i`.
pub fn check_claim0(
    trace: &RegularPlayTrace,
    game: &AchievementGame,
    layout: &ReductionLayout,
    i: usize,
) -> Claim0Report {
    check_claim0_moves(game, layout, &trace.prefix(i), i)
}

/// Checks the position reached by `moves` (Left first, alternating) as the
/// end of round `i`. Moves that cannot be replayed are reported as a failure.
pub fn check_claim0_moves(
    game: &AchievementGame,
    layout: &ReductionLayout,
    moves: &[VertexId],
    i: usize,
) -> Claim0Report {
    let Ok(pos) = Position::from_moves(game, Seat::Left, moves) else {
        return Claim0Report {
            round: i,
            properties: vec![PropertyResult {
                name: "replay",
                passed: false,
                witnesses: vec!["illegal move list".into()],
            }],
        };
    };
    let mut props = Vec::new();
    let dead = |e: &Edge, c: Color| pos.state_of(e, c) == EdgeState::Dead;
    let intact = |e: &Edge, c: Color| pos.state_of(e, c) == EdgeState::Intact;
    let name = |e: &Edge| format!("{{{}}}", game.edge_names(e).join(","));
    let gadget = |e: &Edge| {
        e.vertices()
            .filter_map(|v| match layout.role(v) {
                VertexRole::Var(k, _) => Some(k),
                VertexRole::Clause(..) => None,
            })
            .max()
            .unwrap_or(0)
    };
    let blue = game.blue_edges();
    let red = game.red_edges();

    // (i) guide edges
    let mut w = Vec::new();
    let x_next = (i < layout.n()).then(|| {
        VertexSet::singleton(layout.var(i + 1, VarRole::XT).index())
            .with(layout.var(i + 1, VarRole::XF).index())
    });
    let mut bridge_dead = 0;
    let mut bridge_open = 0;
    for (k, e) in blue.iter().enumerate() {
        if layout.edge_role(Color::Blue, k) != EdgeRole::GuideL {
            continue;
        }
        let g = gadget(e);
        if g <= i {
            if !dead(e, Color::Blue) {
                w.push(name(e));
            }
        } else if g == i + 1 && x_next.is_some_and(|x| x.is_subset(e.members()) && e.len() == 3) {
            match pos.state_of(e, Color::Blue) {
                EdgeState::Dead => bridge_dead += 1,
                EdgeState::Partial {
                    owner: Seat::Left, ..
                } if pos.residual(e, Color::Blue) == x_next => bridge_open += 1,
                _ => w.push(name(e)),
            }
        } else if !intact(e, Color::Blue) {
            w.push(name(e));
        }
    }
    if x_next.is_some() && (bridge_dead, bridge_open) != (1, 1) {
        w.push(format!(
            "bridge edges dead={bridge_dead} open={bridge_open}"
        ));
    }
    for (k, e) in red.iter().enumerate() {
        if layout.edge_role(Color::Red, k) != EdgeRole::GuideR {
            continue;
        }
        let ok = if gadget(e) <= i {
            dead(e, Color::Red)
        } else {
            intact(e, Color::Red)
        };
        if !ok {
            w.push(name(e));
        }
    }
    props.push(PropertyResult {
        name: "guides",
        passed: w.is_empty(),
        witnesses: w,
    });

    // (ii) trap edges
    let mut w = Vec::new();
    for (k, e) in blue.iter().enumerate() {
        if layout.edge_role(Color::Blue, k) != EdgeRole::Trap {
            continue;
        }
        let owner = (1..=layout.n())
            .find(|&t| e.contains(layout.var(t, VarRole::T)))
            .unwrap_or(0);
        let ok = if owner <= i {
            dead(e, Color::Blue)
        } else {
            intact(e, Color::Blue)
        };
        if !ok {
            w.push(name(e));
        }
    }
    props.push(PropertyResult {
        name: "traps",
        passed: w.is_empty(),
        witnesses: w,
    });

    let edge =
        |vs: &[VertexId]| Edge::new(vs.iter().map(|v| v.index()).collect()).expect("non-empty");
    let c = |j: usize, r: ClauseRole| layout.clause(j, r);

    // (iii) link edges
    let mut w = Vec::new();
    for (j, r) in layout.slots() {
        let e = edge(&[
            layout.key(j, r),
            c(j, ClauseRole::A(r as u8)),
            c(j, ClauseRole::Dr(r as u8)),
        ]);
        let ok = if layout.ind(j, r) <= i {
            dead(&e, Color::Blue)
        } else {
            intact(&e, Color::Blue)
        };
        if !ok {
            w.push(name(&e));
        }
    }
    props.push(PropertyResult {
        name: "links",
        passed: w.is_empty(),
        witnesses: w,
    });

    // (iv) destruction edges
    let mut w = Vec::new();
    for (j, r) in layout.slots() {
        let e = edge(&[c(j, ClauseRole::Br(r as u8)), c(j, ClauseRole::Dr(r as u8))]);
        let ind = layout.ind(j, r);
        let key_owner = pos.owner(layout.key(j, r));
        let should_die = (ind <= i && key_owner == Some(Seat::Left))
            || (ind < i && key_owner == Some(Seat::Right));
        let ok = if should_die {
            dead(&e, Color::Red)
        } else {
            intact(&e, Color::Red)
        };
        if !ok {
            w.push(name(&e));
        }
    }
    for j in 1..=layout.m() {
        let e = edge(&[c(j, ClauseRole::B), c(j, ClauseRole::D)]);
        if !intact(&e, Color::Red) {
            w.push(name(&e));
        }
    }
    props.push(PropertyResult {
        name: "destruction",
        passed: w.is_empty(),
        witnesses: w,
    });

    // (v) butterflies
    let mut w = Vec::new();
    for j in 1..=layout.m() {
        let b = c(j, ClauseRole::B);
        let br = |r: u8| c(j, ClauseRole::Br(r));
        let wing = |p: u8, q: u8| edge(&[b, br(p), br(q)]);
        for v in std::iter::once(b).chain((1..=6).map(br)) {
            if pos.owner(v) == Some(Seat::Left) {
                w.push(format!("left holds {}", game.name(v)));
            }
        }
        for e in [wing(4, 5), wing(5, 6)] {
            if !intact(&e, Color::Blue) {
                w.push(name(&e));
            }
        }
        let destruction_dead =
            (1..=3u8).all(|r| dead(&edge(&[br(r), c(j, ClauseRole::Dr(r))]), Color::Red));
        let a = intact(&wing(1, 2), Color::Blue)
            && intact(&wing(2, 3), Color::Blue)
            && destruction_dead;
        let bb = (1..=3).all(|r| pos.owner(layout.key(j, r)) == Some(Seat::Left));
        if a != bb {
            w.push(format!(
                "clause {j}: butterfly-ready={a} all-keys-left={bb}"
            ));
        }
    }
    props.push(PropertyResult {
        name: "butterflies",
        passed: w.is_empty(),
        witnesses: w,
    });

    Claim0Report {
        round: i,
        properties: props,
    }
}
