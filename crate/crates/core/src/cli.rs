//! Command-line front end. `run` returns the process exit code:
//! 0 success, 1 refuted or failed validation, 2 usage or input error,
//! 3 exhausted budget or size guard.

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::format::{emit_apg, parse_apg};
use crate::game::{AchievementGame, GameStatus, Position, Seat, VertexId};
use crate::playbook::regular_play_trace;
use crate::qbf::{
    emit_q3f, falsifier_wins, parse_q3f, random_instance, Qbf3Instance, QbfError, ScriptedOracle,
};
use crate::reduction::{
    build_rank4_mm, build_reduction, emit_layout, mm_as_achievement, validate_reduction,
};
use crate::solver::{best_moves, solve, SearchBudget, SolveResult};
use crate::verify::{end_to_end, Verdict, VerifyOptions, DEFAULT_NODE_BUDGET};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "apg",
    version,
    about = "Achievement positional games: solver, QBF reduction and certificate checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum SeatArg {
    Left,
    Right,
}

impl From<SeatArg> for Seat {
    fn from(s: SeatArg) -> Seat {
        match s {
            SeatArg::Left => Seat::Left,
            SeatArg::Right => Seat::Right,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact value of a game from the empty board.
    Solve {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, value_enum)]
        first: SeatArg,
        /// Maximum number of solver states.
        #[arg(long, default_value_t = 10_000_000)]
        budget_states: u64,
        /// Wall-clock limit in milliseconds.
        #[arg(long, default_value_t = 60_000)]
        budget_ms: u64,
    },
    /// Compile a 3-QBF instance into an achievement game.
    Reduce {
        #[arg(long)]
        qbf: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write the vertex and edge roles.
        #[arg(long)]
        layout: Option<PathBuf>,
    },
    /// Wrap a game with edges of size at most 3 into a rank-4 Maker-Maker game.
    WrapMm4 {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Which player wins the quantifier game.
    QbfOracle {
        #[arg(long)]
        qbf: PathBuf,
    },
    /// Build, validate and exhaustively check the matching certificate.
    VerifyCert {
        #[arg(long)]
        qbf: PathBuf,
        /// Node budget per top-level adversary branch.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget_states: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Print the regular-play trace for fixed decisions.
    TraceRegular {
        #[arg(long)]
        qbf: PathBuf,
        /// x values, one T or F per round.
        #[arg(long)]
        left: String,
        /// y values, one T or F per round.
        #[arg(long)]
        right: String,
    },
    /// Write a random 3-QBF instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Play against the exact solver on standard input.
    Play {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, value_enum)]
        human: SeatArg,
        /// Seat that moves first.
        #[arg(long, value_enum, default_value_t = SeatArg::Left)]
        first: SeatArg,
        /// Solver states per engine move.
        #[arg(long, default_value_t = 10_000_000)]
        budget_states: u64,
    },
}

struct Fail(i32, String);

type CmdResult = Result<i32, Fail>;

fn usage(msg: impl std::fmt::Display) -> Fail {
    Fail(EXIT_USAGE, msg.to_string())
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Fail> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_game(path: &Path) -> Result<AchievementGame, Fail> {
    parse_apg(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn qbf_fail(e: QbfError) -> Fail {
    match e {
        QbfError::TooLarge(_) => Fail(EXIT_EXHAUSTED, e.to_string()),
        _ => usage(e),
    }
}

fn load_qbf(path: &Path) -> Result<Qbf3Instance, Fail> {
    parse_q3f(&read(path)?).map_err(|e| match e {
        QbfError::TooLarge(_) => qbf_fail(e),
        e => usage(format!("{}: {e}", path.display())),
    })
}

fn tf_string(s: &str, n: usize) -> Result<Vec<bool>, Fail> {
    let values: Option<Vec<bool>> = s
        .chars()
        .map(|c| match c {
            'T' | 't' => Some(true),
            'F' | 'f' => Some(false),
            _ => None,
        })
        .collect();
    match values {
        Some(v) if v.len() == n => Ok(v),
        _ => Err(usage(format!("expected {n} letters T or F, got {s:?}"))),
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

fn dispatch(command: Command) -> CmdResult {
    match command {
        Command::Solve {
            game,
            first,
            budget_states,
            budget_ms,
        } => {
            let g = load_game(&game)?;
            let budget = SearchBudget::new(budget_states, budget_ms).map_err(usage)?;
            let report = solve(&Position::new(&g, first.into()), budget);
            match report.result {
                SolveResult::Solved(o) => {
                    println!("{o:?}");
                    Ok(EXIT_OK)
                }
                SolveResult::Exhausted => {
                    println!("Exhausted");
                    Ok(EXIT_EXHAUSTED)
                }
            }
        }
        Command::Reduce { qbf, out, layout } => {
            let q = load_qbf(&qbf)?;
            let (g, lay) = build_reduction(&q).map_err(usage)?;
            let rep = validate_reduction(&g, &lay);
            write(&out, &emit_apg(&g))?;
            if let Some(path) = layout {
                write(&path, &emit_layout(&lay))?;
            }
            println!(
                "vertices={} blue={} red={}",
                g.num_vertices(),
                g.blue_edges().len(),
                g.red_edges().len()
            );
            if rep.all_passed() {
                Ok(EXIT_OK)
            } else {
                eprint!("{rep}");
                Ok(EXIT_FAILED)
            }
        }
        Command::WrapMm4 { game, out } => {
            let g = load_game(&game)?;
            let h = build_rank4_mm(&g).map_err(usage)?;
            let mm = mm_as_achievement(&h).map_err(usage)?;
            write(&out, &emit_apg(&mm))?;
            println!(
                "vertices={} edges={} rank={}",
                h.num_vertices(),
                h.edges().len(),
                h.rank()
            );
            Ok(EXIT_OK)
        }
        Command::QbfOracle { qbf } => {
            let q = load_qbf(&qbf)?;
            let f = falsifier_wins(&q).map_err(qbf_fail)?;
            println!("{}", if f { "Falsifier" } else { "Satisfier" });
            Ok(EXIT_OK)
        }
        Command::VerifyCert {
            qbf,
            budget_states,
            jobs,
        } => {
            let q = load_qbf(&qbf)?;
            let options = VerifyOptions {
                node_budget: budget_states,
                jobs: jobs.max(1),
            };
            let rep = end_to_end(&q, options).map_err(|e| Fail(EXIT_EXHAUSTED, e.to_string()))?;
            let (g, _) = build_reduction(&q).map_err(usage)?;
            println!("falsifier_wins={}", rep.falsifier_wins);
            println!("certificate={:?}", rep.certificate);
            println!(
                "validation={}",
                if rep.validation.all_passed() {
                    "pass"
                } else {
                    "fail"
                }
            );
            print!("{}", rep.verification.render(&g));
            match rep.crosscheck {
                Some(o) => println!("crosscheck={o:?}"),
                None => println!("crosscheck=skipped"),
            }
            Ok(match rep.verification.verdict {
                _ if !rep.validation.all_passed() => EXIT_FAILED,
                Verdict::Exhausted => EXIT_EXHAUSTED,
                _ if rep.agrees() => EXIT_OK,
                _ => EXIT_FAILED,
            })
        }
        Command::TraceRegular { qbf, left, right } => {
            let q = load_qbf(&qbf)?;
            let xs = tf_string(&left, q.n())?;
            let ys = tf_string(&right, q.n())?;
            let (g, lay) = build_reduction(&q).map_err(usage)?;
            let trace =
                regular_play_trace(&g, &lay, &ScriptedOracle::new(xs), &ScriptedOracle::new(ys))
                    .map_err(|e| Fail(EXIT_FAILED, e.to_string()))?;
            print!("{}", trace.dump(&g));
            Ok(EXIT_OK)
        }
        Command::Gen { n, m, seed, out } => {
            let q = random_instance(n, m, seed).map_err(qbf_fail)?;
            write(&out, &emit_q3f(&q))?;
            Ok(EXIT_OK)
        }
        Command::Play {
            game,
            human,
            first,
            budget_states,
        } => {
            let g = load_game(&game)?;
            let stdin = io::stdin();
            let stdout = io::stdout();
            play(
                &g,
                human.into(),
                first.into(),
                SearchBudget::states(budget_states),
                &mut stdin.lock(),
                &mut stdout.lock(),
            )
            .map_err(|e| Fail(EXIT_FAILED, e.to_string()))?;
            Ok(EXIT_OK)
        }
    }
}

fn parse_vertex(game: &AchievementGame, text: &str) -> Option<VertexId> {
    game.vertex_by_name(text).or_else(|| {
        text.parse::<usize>()
            .ok()
            .filter(|&k| k < game.num_vertices())
            .map(VertexId::from)
    })
}

/// Human against engine. The human types a vertex name or index; `quit` or
/// end of input stops the game.
pub fn play(
    game: &AchievementGame,
    human: Seat,
    first: Seat,
    budget: SearchBudget,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> io::Result<()> {
    let mut pos = Position::new(game, first);
    let mut line = String::new();
    while pos.status() == GameStatus::Ongoing {
        if pos.to_move() == human {
            write!(out, "your move> ")?;
            out.flush()?;
            line.clear();
            if input.read_line(&mut line)? == 0 {
                writeln!(out)?;
                return Ok(());
            }
            let text = line.trim();
            if text == "quit" {
                return Ok(());
            }
            match parse_vertex(game, text) {
                Some(v) if pos.is_unpicked(v) => pos = pos.apply_move(v).expect("legal"),
                Some(v) => writeln!(out, "{} is taken", game.name(v))?,
                None => writeln!(out, "unknown vertex {text:?}")?,
            }
        } else {
            let v = match best_moves(&pos, budget) {
                Ok(moves) if !moves.is_empty() => moves[0],
                _ => VertexId::from(pos.unpicked().first().expect("ongoing")),
            };
            writeln!(out, "engine plays {}", game.name(v))?;
            pos = pos.apply_move(v).expect("legal");
        }
    }
    let result = match pos.status() {
        GameStatus::LeftWon => "LeftWin",
        GameStatus::RightWon => "RightWin",
        _ => "Draw",
    };
    writeln!(out, "{result}")
}
