//! The 3-QBF to achievement-game construction and the rank-4 Maker-Maker wrapper.
//!
//! Vertex numbering: the 15 roles of each variable gadget `V_1, …, V_n` in
//! [`VarRole`] order, then the 14 fresh roles of each clause gadget in
//! [`ClauseRole`] order.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::game::{AchievementGame, Color, Edge, GameError, Hypergraph, VertexId};
use crate::qbf::{Literal, Qbf3Instance, VarKind};
use crate::vset::VertexSet;

/// Constant in the checked bound `|E_L| ≤ C (n² + nm)`.
pub const BLUE_SIZE_CONSTANT: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("the construction needs at least one variable pair")]
    NoVariables,
    #[error(
        "edge {index} of color {color:?} has {size} vertices; the wrapper needs size at most 3"
    )]
    EdgeTooLarge {
        color: Color,
        index: usize,
        size: usize,
    },
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum VarRole {
    XT,
    XF,
    YT,
    YF,
    W,
    Wp,
    S,
    T,
    Om,
    Omp,
    Ze,
    Zep,
    Ta,
    De,
    La,
}

impl VarRole {
    pub const ALL: [VarRole; 15] = [
        VarRole::XT,
        VarRole::XF,
        VarRole::YT,
        VarRole::YF,
        VarRole::W,
        VarRole::Wp,
        VarRole::S,
        VarRole::T,
        VarRole::Om,
        VarRole::Omp,
        VarRole::Ze,
        VarRole::Zep,
        VarRole::Ta,
        VarRole::De,
        VarRole::La,
    ];

    fn offset(self) -> usize {
        self as usize
    }

    fn stem(self) -> &'static str {
        match self {
            VarRole::XT | VarRole::XF => "x",
            VarRole::YT | VarRole::YF => "y",
            VarRole::W => "w",
            VarRole::Wp => "wp",
            VarRole::S => "s",
            VarRole::T => "t",
            VarRole::Om => "om",
            VarRole::Omp => "omp",
            VarRole::Ze => "ze",
            VarRole::Zep => "zep",
            VarRole::Ta => "ta",
            VarRole::De => "de",
            VarRole::La => "la",
        }
    }

    fn name(self, i: usize) -> String {
        match self {
            VarRole::XT | VarRole::YT => format!("{}{i}T", self.stem()),
            VarRole::XF | VarRole::YF => format!("{}{i}F", self.stem()),
            _ => format!("{}{i}", self.stem()),
        }
    }
}

/// Fresh clause-gadget roles; `r` is 1..=3 for `A`/`Dr` and 1..=6 for `Br`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ClauseRole {
    A(u8),
    D,
    Dr(u8),
    B,
    Br(u8),
}

impl ClauseRole {
    pub fn all() -> impl Iterator<Item = ClauseRole> {
        (1..=3)
            .map(ClauseRole::A)
            .chain([ClauseRole::D])
            .chain((1..=3).map(ClauseRole::Dr))
            .chain([ClauseRole::B])
            .chain((1..=6).map(ClauseRole::Br))
    }

    fn offset(self) -> usize {
        match self {
            ClauseRole::A(r) => r as usize - 1,
            ClauseRole::D => 3,
            ClauseRole::Dr(r) => 3 + r as usize,
            ClauseRole::B => 7,
            ClauseRole::Br(r) => 7 + r as usize,
        }
    }

    fn from_offset(k: usize) -> ClauseRole {
        match k {
            0..=2 => ClauseRole::A(k as u8 + 1),
            3 => ClauseRole::D,
            4..=6 => ClauseRole::Dr(k as u8 - 3),
            7 => ClauseRole::B,
            _ => ClauseRole::Br(k as u8 - 7),
        }
    }

    fn name(self, j: usize) -> String {
        match self {
            ClauseRole::A(r) => format!("a{j}_{r}"),
            ClauseRole::D => format!("d{j}"),
            ClauseRole::Dr(r) => format!("d{j}_{r}"),
            ClauseRole::B => format!("b{j}"),
            ClauseRole::Br(r) => format!("b{j}_{r}"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum VertexRole {
    Var(usize, VarRole),
    Clause(usize, ClauseRole),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum EdgeRole {
    GuideL,
    GuideR,
    Butterfly,
    Destruction,
    Link,
    Trap,
}

impl fmt::Display for EdgeRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EdgeRole::GuideL => "guideL",
            EdgeRole::GuideR => "guideR",
            EdgeRole::Butterfly => "butterfly",
            EdgeRole::Destruction => "destruction",
            EdgeRole::Link => "link",
            EdgeRole::Trap => "trap",
        };
        f.write_str(s)
    }
}

/// Role tables for a built reduction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReductionLayout {
    n: usize,
    m: usize,
    literals: Vec<[Literal; 3]>,
    blue_roles: Vec<EdgeRole>,
    red_roles: Vec<EdgeRole>,
    red_partner: Vec<Option<VertexId>>,
}

impl ReductionLayout {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn num_vertices(&self) -> usize {
        15 * self.n + 14 * self.m
    }

    /// Role `role` of variable gadget `i` (1-based).
    pub fn var(&self, i: usize, role: VarRole) -> VertexId {
        debug_assert!((1..=self.n).contains(&i));
        VertexId::from(15 * (i - 1) + role.offset())
    }

    /// Fresh role of clause gadget `j` (1-based).
    pub fn clause(&self, j: usize, role: ClauseRole) -> VertexId {
        debug_assert!((1..=self.m).contains(&j));
        VertexId::from(15 * self.n + 14 * (j - 1) + role.offset())
    }

    pub fn literal(&self, j: usize, r: usize) -> Literal {
        self.literals[j - 1][r - 1]
    }

    /// `ind` of the r-th literal of clause j.
    pub fn ind(&self, j: usize, r: usize) -> usize {
        self.literal(j, r).index
    }

    pub fn key_vertex(&self, literal: Literal) -> VertexId {
        let role = match (literal.kind, literal.negated) {
            (VarKind::X, false) => VarRole::XF,
            (VarKind::X, true) => VarRole::XT,
            (VarKind::Y, false) => VarRole::YT,
            (VarKind::Y, true) => VarRole::YF,
        };
        self.var(literal.index, role)
    }

    /// `v(ℓ_j^r)`.
    pub fn key(&self, j: usize, r: usize) -> VertexId {
        self.key_vertex(self.literal(j, r))
    }

    pub fn key_vertices(&self) -> VertexSet {
        (1..=self.m)
            .flat_map(|j| (1..=3).map(move |r| (j, r)))
            .map(|(j, r)| self.key(j, r).index())
            .collect()
    }

    pub fn role(&self, v: VertexId) -> VertexRole {
        let k = v.index();
        if k < 15 * self.n {
            VertexRole::Var(k / 15 + 1, VarRole::ALL[k % 15])
        } else {
            let c = k - 15 * self.n;
            VertexRole::Clause(c / 14 + 1, ClauseRole::from_offset(c % 14))
        }
    }

    pub fn vertex_name(&self, v: VertexId) -> String {
        match self.role(v) {
            VertexRole::Var(i, r) => r.name(i),
            VertexRole::Clause(j, r) => r.name(j),
        }
    }

    pub fn edge_role(&self, color: Color, index: usize) -> EdgeRole {
        match color {
            Color::Blue => self.blue_roles[index],
            Color::Red => self.red_roles[index],
        }
    }

    pub fn blue_roles(&self) -> &[EdgeRole] {
        &self.blue_roles
    }

    pub fn red_roles(&self) -> &[EdgeRole] {
        &self.red_roles
    }

    /// The other endpoint of the red edge through `v`.
    pub fn red_partner(&self, v: VertexId) -> Option<VertexId> {
        self.red_partner.get(v.index()).copied().flatten()
    }

    /// Clause slots `(j, r)` in ascending order.
    pub fn slots(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.m).flat_map(|j| (1..=3).map(move |r| (j, r)))
    }

    /// Blue-edge count predicted by the construction.
    pub fn expected_blue_count(&self) -> usize {
        let (n, m) = (self.n, self.m);
        let ind_sum: usize = self.slots().map(|(j, r)| self.ind(j, r)).sum();
        20 * n - 1 + 7 * n * (n - 1) + 2 * m * n + 2 * ind_sum + 7 * m
    }

    /// Predicted `|T_i|`.
    pub fn expected_trap_count(&self, i: usize) -> usize {
        let later = self.slots().filter(|&(j, r)| self.ind(j, r) >= i).count();
        14 * (self.n - i) + 2 * self.m + 2 * later
    }
}

struct Builder {
    blue: Vec<(VertexSet, EdgeRole)>,
    red: Vec<(VertexSet, EdgeRole)>,
}

impl Builder {
    fn blue(&mut self, vs: &[VertexId], role: EdgeRole) {
        self.blue
            .push((vs.iter().map(|v| v.index()).collect(), role));
    }

    fn red(&mut self, a: VertexId, b: VertexId, role: EdgeRole) {
        self.red
            .push((VertexSet::singleton(a.index()).with(b.index()), role));
    }
}

fn dedup(edges: Vec<(VertexSet, EdgeRole)>) -> (Vec<Edge>, Vec<EdgeRole>) {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut roles = Vec::new();
    for (s, role) in edges {
        if seen.insert(s) {
            out.push(Edge::new(s).expect("construction edges are non-empty"));
            roles.push(role);
        }
    }
    (out, roles)
}

pub fn build_reduction(
    instance: &Qbf3Instance,
) -> Result<(AchievementGame, ReductionLayout), ReductionError> {
    let (n, m) = (instance.n(), instance.m());
    if n == 0 {
        return Err(ReductionError::NoVariables);
    }
    let mut layout = ReductionLayout {
        n,
        m,
        literals: instance.clauses().iter().map(|c| *c.literals()).collect(),
        blue_roles: Vec::new(),
        red_roles: Vec::new(),
        red_partner: Vec::new(),
    };
    let l = &layout;
    let v = |i: usize, r: VarRole| l.var(i, r);
    let c = |j: usize, r: ClauseRole| l.clause(j, r);
    use VarRole::*;

    let mut b = Builder {
        blue: Vec::new(),
        red: Vec::new(),
    };

    // red guides first, so trap edges can enumerate them
    for i in 1..=n {
        for (p, q) in [
            (XT, W),
            (XF, Wp),
            (S, T),
            (YT, Om),
            (YF, Omp),
            (Ze, Zep),
            (Ta, De),
        ] {
            b.red(v(i, p), v(i, q), EdgeRole::GuideR);
        }
    }
    for j in 1..=m {
        b.red(
            c(j, ClauseRole::B),
            c(j, ClauseRole::D),
            EdgeRole::Destruction,
        );
        for r in 1..=3u8 {
            b.red(
                c(j, ClauseRole::Br(r)),
                c(j, ClauseRole::Dr(r)),
                EdgeRole::Destruction,
            );
        }
    }

    for i in 1..=n {
        let guide = |b: &mut Builder, p: VertexId, q: VertexId, k: usize| {
            if k == 0 {
                b.blue(&[p, q], EdgeRole::GuideL);
            } else {
                b.blue(&[p, q, v(k, XT)], EdgeRole::GuideL);
                b.blue(&[p, q, v(k, XF)], EdgeRole::GuideL);
            }
        };
        guide(&mut b, v(i, XT), v(i, XF), i - 1);
        for (p, q) in [
            (W, S),
            (Wp, S),
            (YT, YF),
            (YT, Ze),
            (YF, Zep),
            (Ze, Ta),
            (Zep, Ta),
            (Om, Omp),
            (De, La),
        ] {
            guide(&mut b, v(i, p), v(i, q), i);
        }

        let mut targets: Vec<VertexId> = Vec::new();
        for k in i + 1..=n {
            for (p, q) in [
                (XT, W),
                (XF, Wp),
                (S, T),
                (YT, Om),
                (YF, Omp),
                (Ze, Zep),
                (Ta, De),
            ] {
                targets.push(v(k, p));
                targets.push(v(k, q));
            }
        }
        for j in 1..=m {
            targets.push(c(j, ClauseRole::B));
            targets.push(c(j, ClauseRole::D));
            for r in 1..=3u8 {
                if l.ind(j, r as usize) >= i {
                    targets.push(c(j, ClauseRole::Br(r)));
                    targets.push(c(j, ClauseRole::Dr(r)));
                }
            }
        }
        for u in targets {
            b.blue(&[v(i, T), v(i, Ta), u], EdgeRole::Trap);
        }
    }
    for j in 1..=m {
        let bj = c(j, ClauseRole::B);
        let br = |r: u8| c(j, ClauseRole::Br(r));
        for (p, q) in [(1, 2), (2, 3), (4, 5), (5, 6)] {
            b.blue(&[bj, br(p), br(q)], EdgeRole::Butterfly);
        }
        for r in 1..=3u8 {
            b.blue(
                &[
                    l.key(j, r as usize),
                    c(j, ClauseRole::A(r)),
                    c(j, ClauseRole::Dr(r)),
                ],
                EdgeRole::Link,
            );
        }
    }

    let (blue, blue_roles) = dedup(b.blue);
    let (red, red_roles) = dedup(b.red);
    let names: Vec<Option<String>> = (0..l.num_vertices())
        .map(|k| Some(l.vertex_name(VertexId::from(k))))
        .collect();
    let mut red_partner = vec![None; l.num_vertices()];
    for e in &red {
        let ends: Vec<VertexId> = e.vertices().collect();
        red_partner[ends[0].index()] = Some(ends[1]);
        red_partner[ends[1].index()] = Some(ends[0]);
    }
    let game = AchievementGame::new(l.num_vertices(), blue, red)?.with_names(names)?;
    layout.blue_roles = blue_roles;
    layout.red_roles = red_roles;
    layout.red_partner = red_partner;
    Ok((game, layout))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: String) {
        self.checks.push(Check {
            name,
            passed,
            detail,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "ok" } else { "FAIL" };
            writeln!(f, "{mark} {} {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Structural checks on a reduction game against its layout.
pub fn validate_reduction(game: &AchievementGame, layout: &ReductionLayout) -> ValidationReport {
    let (n, m) = (layout.n(), layout.m());
    let mut rep = ValidationReport::default();
    let blue = game.blue_edges();
    let red = game.red_edges();

    let bad_blue = blue.iter().filter(|e| !(2..=3).contains(&e.len())).count();
    rep.push(
        "blue_sizes",
        bad_blue == 0,
        format!("{bad_blue} blue edges outside sizes 2..3"),
    );

    let small: Vec<&Edge> = blue.iter().filter(|e| e.len() == 2).collect();
    let x1 = VertexSet::singleton(layout.var(1, VarRole::XT).index())
        .with(layout.var(1, VarRole::XF).index());
    let single = small.len() == 1 && *small[0].members() == x1;
    rep.push(
        "single_size2_blue",
        single,
        format!("{} blue edges of size 2", small.len()),
    );

    let bad_red = red.iter().filter(|e| e.len() != 2).count();
    rep.push(
        "red_sizes",
        bad_red == 0,
        format!("{bad_red} red edges not of size 2"),
    );

    let mut seen = VertexSet::new();
    let mut clash = None;
    for e in red {
        if e.members().intersects(&seen) && clash.is_none() {
            clash = e.members().intersection(&seen).first();
        }
        seen = seen.union(e.members());
    }
    rep.push(
        "red_disjoint",
        clash.is_none(),
        clash
            .map(|v| format!("vertex {} in two red edges", game.name(VertexId::from(v))))
            .unwrap_or_default(),
    );

    let vcount = game.num_vertices();
    rep.push(
        "vertex_count",
        vcount == 15 * n + 14 * m,
        format!("|V| = {vcount}, expected {}", 15 * n + 14 * m),
    );
    rep.push(
        "red_count",
        red.len() == 7 * n + 4 * m,
        format!("|E_R| = {}, expected {}", red.len(), 7 * n + 4 * m),
    );

    let roles_ok = layout.blue_roles().len() == blue.len() && layout.red_roles().len() == red.len();
    rep.push(
        "edge_roles",
        roles_ok,
        format!(
            "{}+{} roles for {}+{} edges",
            layout.blue_roles().len(),
            layout.red_roles().len(),
            blue.len(),
            red.len()
        ),
    );

    // gadget overlap: vertices in both variable-gadget and clause-gadget edges
    let mut var_side = VertexSet::new();
    let mut clause_side = VertexSet::new();
    if roles_ok {
        for (color, edges) in [(Color::Blue, blue), (Color::Red, red)] {
            for (k, e) in edges.iter().enumerate() {
                match layout.edge_role(color, k) {
                    EdgeRole::GuideL | EdgeRole::GuideR => var_side = var_side.union(e.members()),
                    EdgeRole::Butterfly | EdgeRole::Destruction | EdgeRole::Link => {
                        clause_side = clause_side.union(e.members())
                    }
                    EdgeRole::Trap => {}
                }
            }
        }
    }
    let shared = var_side.intersection(&clause_side);
    rep.push(
        "key_sharing",
        roles_ok && shared == layout.key_vertices(),
        format!(
            "{} shared vertices, {} declared keys",
            shared.len(),
            layout.key_vertices().len()
        ),
    );

    let expected = layout.expected_blue_count();
    rep.push(
        "blue_count",
        blue.len() == expected,
        format!("|E_L| = {}, expected {expected}", blue.len()),
    );
    let bound = BLUE_SIZE_CONSTANT * (n * n + n * m);
    rep.push(
        "blue_size_bound",
        blue.len() <= bound,
        format!("|E_L| = {} ≤ {bound}", blue.len()),
    );

    let mut census_ok = roles_ok;
    let mut census = Vec::new();
    if roles_ok {
        for i in 1..=n {
            let t = layout.var(i, VarRole::T);
            let ta = layout.var(i, VarRole::Ta);
            let got = blue
                .iter()
                .enumerate()
                .filter(|(k, e)| {
                    layout.edge_role(Color::Blue, *k) == EdgeRole::Trap
                        && e.contains(t)
                        && e.contains(ta)
                })
                .count();
            let want = layout.expected_trap_count(i);
            census_ok &= got == want;
            census.push(format!("T{i}={got}/{want}"));
        }
    }
    rep.push("trap_census", census_ok, census.join(" "));
    rep
}

/// Adds fresh `u`, `v`: blue edges gain `u`, red edges gain `v`, plus `{u, v}`.
pub fn build_rank4_mm(game: &AchievementGame) -> Result<Hypergraph, ReductionError> {
    for color in [Color::Blue, Color::Red] {
        if let Some((index, e)) = game
            .edges(color)
            .iter()
            .enumerate()
            .find(|(_, e)| e.len() > 3)
        {
            return Err(ReductionError::EdgeTooLarge {
                color,
                index,
                size: e.len(),
            });
        }
    }
    let n = game.num_vertices();
    let (u, v) = (n, n + 1);
    let mut edges: Vec<Edge> = Vec::new();
    for e in game.blue_edges() {
        edges.push(Edge::new(e.members().with(u))?);
    }
    for e in game.red_edges() {
        edges.push(Edge::new(e.members().with(v))?);
    }
    edges.push(Edge::new(VertexSet::singleton(u).with(v))?);
    let h = Hypergraph::new(n + 2, edges)?;
    let mut names: Vec<Option<String>> = game.names().to_vec();
    names.resize(n, None);
    let taken = |s: &str| game.vertex_by_name(s).is_some();
    names.push((!taken("u")).then(|| "u".to_string()));
    names.push((!taken("v")).then(|| "v".to_string()));
    Ok(h.with_names(names)?)
}

/// The Maker-Maker game on `h` as an achievement game with `E_L = E_R`.
pub fn mm_as_achievement(h: &Hypergraph) -> Result<AchievementGame, GameError> {
    AchievementGame::new(h.num_vertices(), h.edges().to_vec(), h.edges().to_vec())?
        .with_names(h.names().to_vec())
}

/// `.layout` sidecar: vertex roles, then edge roles over blue then red ordinals.
pub fn emit_layout(layout: &ReductionLayout) -> String {
    let mut out = String::new();
    for k in 0..layout.num_vertices() {
        out.push_str(&format!(
            "role {} = {k}\n",
            layout.vertex_name(VertexId::from(k))
        ));
    }
    for (k, role) in layout
        .blue_roles()
        .iter()
        .chain(layout.red_roles())
        .enumerate()
    {
        out.push_str(&format!("edgerole {k} = {role}\n"));
    }
    out
}
