//! The `.apg` text format.
//!
//! ```text
//! apg 3
//! name 0 a
//! L 0 1
//! R 1 2
//! ```
//!
//! Indices are 0-based, `#` starts a comment. `name` lines must precede edge
//! lines. [`emit_apg`] writes edges in stored order with ascending members.

use thiserror::Error;

use crate::game::{AchievementGame, Color, Edge, GameError, VertexId};
use crate::vset::VertexSet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Game(#[from] GameError),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        msg: msg.into(),
    }
}

pub fn parse_apg(text: &str) -> Result<AchievementGame, FormatError> {
    let mut num_vertices: Option<usize> = None;
    let mut names: Vec<Option<String>> = Vec::new();
    let mut blue = Vec::new();
    let mut red = Vec::new();
    let mut seen_edge = false;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let head = tokens.next().unwrap_or_default();
        let Some(n) = num_vertices else {
            if head != "apg" {
                return Err(syntax(lineno, "expected header `apg <num_vertices>`"));
            }
            let n = tokens
                .next()
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| syntax(lineno, "bad vertex count"))?;
            if tokens.next().is_some() {
                return Err(syntax(lineno, "trailing tokens after header"));
            }
            num_vertices = Some(n);
            names = vec![None; n.min(crate::vset::MAX_VERTICES + 1)];
            continue;
        };
        let parse_index = |t: &str| -> Result<usize, FormatError> {
            let v: usize = t
                .parse()
                .map_err(|_| syntax(lineno, format!("bad vertex index {t:?}")))?;
            if v >= n {
                return Err(syntax(lineno, format!("vertex {v} out of range")));
            }
            Ok(v)
        };
        match head {
            "name" => {
                if seen_edge {
                    return Err(syntax(lineno, "name lines must precede edges"));
                }
                let idx = parse_index(
                    tokens
                        .next()
                        .ok_or_else(|| syntax(lineno, "missing index"))?,
                )?;
                let label = tokens
                    .next()
                    .ok_or_else(|| syntax(lineno, "missing label"))?;
                if tokens.next().is_some() {
                    return Err(syntax(lineno, "labels cannot contain spaces"));
                }
                if names[idx].is_some() {
                    return Err(syntax(lineno, format!("vertex {idx} named twice")));
                }
                names[idx] = Some(label.to_string());
            }
            "L" | "R" => {
                seen_edge = true;
                let members: VertexSet = tokens.map(parse_index).collect::<Result<_, _>>()?;
                let edge = Edge::new(members).map_err(|_| syntax(lineno, "empty edge"))?;
                if head == "L" {
                    blue.push(edge);
                } else {
                    red.push(edge);
                }
            }
            "apg" => return Err(syntax(lineno, "duplicate header")),
            other => return Err(syntax(lineno, format!("unknown directive {other:?}"))),
        }
    }
    let n = num_vertices.ok_or_else(|| syntax(1, "missing header"))?;
    Ok(AchievementGame::new(n, blue, red)?.with_names(names)?)
}

pub fn emit_apg(game: &AchievementGame) -> String {
    let mut out = format!("apg {}\n", game.num_vertices());
    for v in game.vertices() {
        if let Some(name) = game.explicit_name(v) {
            out.push_str(&format!("name {} {}\n", v.0, name));
        }
    }
    for (tag, color) in [("L", Color::Blue), ("R", Color::Red)] {
        for e in game.edges(color) {
            out.push_str(tag);
            for v in e.vertices() {
                out.push_str(&format!(" {}", v.0));
            }
            out.push('\n');
        }
    }
    out
}

/// Human-readable rendering of a vertex list.
pub fn render_line(game: &AchievementGame, moves: &[VertexId]) -> String {
    moves
        .iter()
        .map(|&v| game.name(v))
        .collect::<Vec<_>>()
        .join(" ")
}
