//! 3-QBF instances with the fixed prefix ∃x1 ∀y1 … ∃xn ∀yn.
//!
//! Variables are numbered in play order: `x_i` is `2i-1` and `y_i` is `2i`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Largest `n` the brute-force game recursion accepts.
pub const GAME_TREE_LIMIT: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QbfError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: variable {var} repeated in clause")]
    RepeatedVariable { line: usize, var: usize },
    #[error("line {line}: variable {var} out of range for n = {n}")]
    OutOfRange { line: usize, var: usize, n: usize },
    #[error("line {line}: clause has {found} literals, expected 3")]
    Arity { line: usize, found: usize },
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCount { declared: usize, found: usize },
    #[error("n = {0} exceeds the game-tree limit of {GAME_TREE_LIMIT}")]
    TooLarge(usize),
    #[error("need at least 3 variables for a clause, have {0}")]
    TooFewVariables(usize),
    #[error("valuation has {found} values, expected {expected}")]
    ValuationLength { expected: usize, found: usize },
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum VarKind {
    X,
    Y,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Literal {
    pub kind: VarKind,
    /// 1-based pair index.
    pub index: usize,
    pub negated: bool,
}

impl Literal {
    pub fn x(index: usize, negated: bool) -> Self {
        Literal {
            kind: VarKind::X,
            index,
            negated,
        }
    }

    pub fn y(index: usize, negated: bool) -> Self {
        Literal {
            kind: VarKind::Y,
            index,
            negated,
        }
    }

    /// Position in the order x1, y1, x2, y2, … starting from 1.
    pub fn variable(&self) -> usize {
        match self.kind {
            VarKind::X => 2 * self.index - 1,
            VarKind::Y => 2 * self.index,
        }
    }

    pub fn from_signed(k: i64) -> Option<Self> {
        if k == 0 {
            return None;
        }
        let var = k.unsigned_abs() as usize;
        let index = var.div_ceil(2);
        let kind = if var % 2 == 1 { VarKind::X } else { VarKind::Y };
        Some(Literal {
            kind,
            index,
            negated: k < 0,
        })
    }

    pub fn to_signed(&self) -> i64 {
        let v = self.variable() as i64;
        if self.negated {
            -v
        } else {
            v
        }
    }

    pub fn is_true(&self, valuation: &Valuation) -> bool {
        valuation.value(self.variable()) != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            VarKind::X => 'x',
            VarKind::Y => 'y',
        };
        let neg = if self.negated { "¬" } else { "" };
        write!(f, "{neg}{name}{}", self.index)
    }
}

/// Three literals over distinct variables, in variable order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Clause {
    literals: [Literal; 3],
}

impl Clause {
    /// Sorts the literals; `None` if a variable repeats.
    pub fn new(mut literals: [Literal; 3]) -> Option<Self> {
        literals.sort_by_key(|l| l.variable());
        if literals[0].variable() == literals[1].variable()
            || literals[1].variable() == literals[2].variable()
        {
            return None;
        }
        Some(Clause { literals })
    }

    pub fn literals(&self) -> &[Literal; 3] {
        &self.literals
    }

    pub fn is_satisfied(&self, valuation: &Valuation) -> bool {
        self.literals.iter().any(|l| l.is_true(valuation))
    }

    /// Bitmasks over variables (bit `k-1` for variable k): the variables
    /// and which of them appear positively.
    fn masks(&self) -> (u32, u32) {
        let mut vars = 0;
        let mut pos = 0;
        for l in &self.literals {
            let bit = 1u32 << (l.variable() - 1);
            vars |= bit;
            if !l.negated {
                pos |= bit;
            }
        }
        (vars, pos)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.literals;
        write!(f, "({a} ∨ {b} ∨ {c})")
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Qbf3Instance {
    n: usize,
    clauses: Vec<Clause>,
}

impl Qbf3Instance {
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self, QbfError> {
        for (j, c) in clauses.iter().enumerate() {
            for l in c.literals() {
                if l.index == 0 || l.index > n {
                    return Err(QbfError::OutOfRange {
                        line: j + 1,
                        var: l.variable(),
                        n,
                    });
                }
            }
        }
        Ok(Qbf3Instance { n, clauses })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn evaluate(&self, valuation: &Valuation) -> bool {
        self.clauses.iter().all(|c| c.is_satisfied(valuation))
    }

    fn check_guard(&self) -> Result<(), QbfError> {
        if self.n > GAME_TREE_LIMIT {
            Err(QbfError::TooLarge(self.n))
        } else {
            Ok(())
        }
    }

    fn packed(&self) -> Vec<(u32, u32)> {
        self.clauses.iter().map(Clause::masks).collect()
    }
}

impl fmt::Display for Qbf3Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return write!(f, "⊤");
        }
        let parts: Vec<String> = self.clauses.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" ∧ "))
    }
}

/// Truth values in the order x1, y1, …, xn, yn.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Valuation {
    values: Vec<bool>,
}

impl Valuation {
    pub fn new(values: Vec<bool>) -> Self {
        Valuation { values }
    }

    pub fn from_pairs(x: &[bool], y: &[bool]) -> Self {
        assert_eq!(x.len(), y.len());
        let values = x.iter().zip(y).flat_map(|(&a, &b)| [a, b]).collect();
        Valuation { values }
    }

    pub fn n(&self) -> usize {
        self.values.len() / 2
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// Value of variable `k` (1-based play order).
    pub fn value(&self, k: usize) -> bool {
        self.values[k - 1]
    }

    pub fn x(&self, i: usize) -> bool {
        self.values[2 * i - 2]
    }

    pub fn y(&self, i: usize) -> bool {
        self.values[2 * i - 1]
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tf = |b: bool| if b { 'T' } else { 'F' };
        let parts: Vec<String> = (1..=self.n())
            .map(|i| format!("x{i}={} y{i}={}", tf(self.x(i)), tf(self.y(i))))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub fn evaluate(instance: &Qbf3Instance, valuation: &Valuation) -> Result<bool, QbfError> {
    if valuation.values.len() != 2 * instance.n {
        return Err(QbfError::ValuationLength {
            expected: 2 * instance.n,
            found: valuation.values.len(),
        });
    }
    Ok(instance.evaluate(valuation))
}

fn satisfied_bits(clauses: &[(u32, u32)], bits: u32) -> bool {
    // a clause holds if some positive variable is set or some negative one is clear
    clauses
        .iter()
        .all(|&(vars, pos)| (bits & pos) != 0 || (!bits & vars & !pos) != 0)
}

/// Falsifier to move at even depths. `bits` holds the values chosen so far.
fn falsifier_recursion(clauses: &[(u32, u32)], total: usize, depth: usize, bits: u32) -> bool {
    if depth == total {
        return !satisfied_bits(clauses, bits);
    }
    let f = falsifier_recursion(clauses, total, depth + 1, bits);
    let t = falsifier_recursion(clauses, total, depth + 1, bits | (1 << depth));
    if depth % 2 == 0 {
        f || t
    } else {
        f && t
    }
}

/// Dual of [`falsifier_recursion`], written from Satisfier's side.
fn satisfier_recursion(clauses: &[(u32, u32)], total: usize, depth: usize, bits: u32) -> bool {
    if depth == total {
        return satisfied_bits(clauses, bits);
    }
    let f = satisfier_recursion(clauses, total, depth + 1, bits);
    let t = satisfier_recursion(clauses, total, depth + 1, bits | (1 << depth));
    if depth % 2 == 1 {
        f || t
    } else {
        f && t
    }
}

fn prefix_bits(prefix: &[bool]) -> u32 {
    prefix
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &b)| if b { acc | (1 << k) } else { acc })
}

/// Whether Falsifier, setting every `x_i`, has a winning strategy.
pub fn falsifier_wins(instance: &Qbf3Instance) -> Result<bool, QbfError> {
    instance.check_guard()?;
    Ok(falsifier_recursion(
        &instance.packed(),
        2 * instance.n,
        0,
        0,
    ))
}

/// Whether Satisfier, setting every `y_i`, has a winning strategy.
pub fn satisfier_wins(instance: &Qbf3Instance) -> Result<bool, QbfError> {
    instance.check_guard()?;
    Ok(satisfier_recursion(
        &instance.packed(),
        2 * instance.n,
        0,
        0,
    ))
}

/// Whether Falsifier wins from the given value prefix.
pub fn falsifier_wins_from(instance: &Qbf3Instance, prefix: &[bool]) -> Result<bool, QbfError> {
    instance.check_guard()?;
    let total = 2 * instance.n;
    if prefix.len() > total {
        return Err(QbfError::ValuationLength {
            expected: total,
            found: prefix.len(),
        });
    }
    Ok(falsifier_recursion(
        &instance.packed(),
        total,
        prefix.len(),
        prefix_bits(prefix),
    ))
}

/// Chooses the next variable value given the values already fixed in play order.
pub trait DecisionOracle: Send + Sync {
    fn choose(&self, prefix: &[bool]) -> bool;
}

/// Brute-force Falsifier: picks a value from which Falsifier still wins,
/// trying F first. Falls back to F from lost positions.
pub struct FalsifierOracle {
    clauses: Vec<(u32, u32)>,
    total: usize,
}

impl FalsifierOracle {
    pub fn new(instance: &Qbf3Instance) -> Result<Self, QbfError> {
        instance.check_guard()?;
        Ok(FalsifierOracle {
            clauses: instance.packed(),
            total: 2 * instance.n,
        })
    }
}

impl DecisionOracle for FalsifierOracle {
    fn choose(&self, prefix: &[bool]) -> bool {
        let bits = prefix_bits(prefix);
        let d = prefix.len();
        !falsifier_recursion(&self.clauses, self.total, d + 1, bits)
            && falsifier_recursion(&self.clauses, self.total, d + 1, bits | (1 << d))
    }
}

/// Brute-force Satisfier, trying F first.
pub struct SatisfierOracle {
    clauses: Vec<(u32, u32)>,
    total: usize,
}

impl SatisfierOracle {
    pub fn new(instance: &Qbf3Instance) -> Result<Self, QbfError> {
        instance.check_guard()?;
        Ok(SatisfierOracle {
            clauses: instance.packed(),
            total: 2 * instance.n,
        })
    }
}

impl DecisionOracle for SatisfierOracle {
    fn choose(&self, prefix: &[bool]) -> bool {
        let bits = prefix_bits(prefix);
        let d = prefix.len();
        !satisfier_recursion(&self.clauses, self.total, d + 1, bits)
            && satisfier_recursion(&self.clauses, self.total, d + 1, bits | (1 << d))
    }
}

/// Replays fixed choices for one side, indexed by round; ignores the prefix.
pub struct ScriptedOracle {
    choices: Vec<bool>,
}

impl ScriptedOracle {
    pub fn new(choices: Vec<bool>) -> Self {
        ScriptedOracle { choices }
    }
}

impl DecisionOracle for ScriptedOracle {
    fn choose(&self, prefix: &[bool]) -> bool {
        self.choices.get(prefix.len() / 2).copied().unwrap_or(false)
    }
}

/// Wraps a closure over the prefix.
pub struct FnOracle<F>(pub F);

impl<F: Fn(&[bool]) -> bool + Send + Sync> DecisionOracle for FnOracle<F> {
    fn choose(&self, prefix: &[bool]) -> bool {
        (self.0)(prefix)
    }
}

pub fn parse_q3f(text: &str) -> Result<Qbf3Instance, QbfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = t.split_whitespace().collect();
        if tokens[0] == "p" {
            if header.is_some() {
                return Err(QbfError::Syntax {
                    line,
                    msg: "duplicate header".into(),
                });
            }
            if tokens.len() != 4 || tokens[1] != "q3f" {
                return Err(QbfError::Syntax {
                    line,
                    msg: "expected `p q3f <n> <m>`".into(),
                });
            }
            let num = |s: &str| {
                s.parse::<usize>().map_err(|_| QbfError::Syntax {
                    line,
                    msg: format!("bad number `{s}`"),
                })
            };
            header = Some((num(tokens[2])?, num(tokens[3])?));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(QbfError::Syntax {
                line,
                msg: "clause before header".into(),
            });
        };
        let mut values = Vec::with_capacity(tokens.len());
        for tok in &tokens {
            let v: i64 = tok.parse().map_err(|_| QbfError::Syntax {
                line,
                msg: format!("bad literal `{tok}`"),
            })?;
            values.push(v);
        }
        if values.last() != Some(&0) {
            return Err(QbfError::Syntax {
                line,
                msg: "clause must end with 0".into(),
            });
        }
        values.pop();
        if values.contains(&0) {
            return Err(QbfError::Syntax {
                line,
                msg: "0 inside clause".into(),
            });
        }
        if values.len() != 3 {
            return Err(QbfError::Arity {
                line,
                found: values.len(),
            });
        }
        let lits: Vec<Literal> = values
            .iter()
            .map(|&v| Literal::from_signed(v).expect("nonzero"))
            .collect();
        for l in &lits {
            if l.index > n {
                return Err(QbfError::OutOfRange {
                    line,
                    var: l.variable(),
                    n,
                });
            }
        }
        let clause = Clause::new([lits[0], lits[1], lits[2]]).ok_or_else(|| {
            let mut vars: Vec<usize> = lits.iter().map(|l| l.variable()).collect();
            vars.sort_unstable();
            let var = if vars[0] == vars[1] { vars[0] } else { vars[1] };
            QbfError::RepeatedVariable { line, var }
        })?;
        clauses.push(clause);
    }
    let Some((n, m)) = header else {
        return Err(QbfError::Syntax {
            line: 0,
            msg: "missing header".into(),
        });
    };
    if m != clauses.len() {
        return Err(QbfError::ClauseCount {
            declared: m,
            found: clauses.len(),
        });
    }
    Qbf3Instance::new(n, clauses)
}

pub fn emit_q3f(instance: &Qbf3Instance) -> String {
    let mut out = format!("p q3f {} {}\n", instance.n, instance.m());
    for c in &instance.clauses {
        let [a, b, d] = c.literals();
        out.push_str(&format!(
            "{} {} {} 0\n",
            a.to_signed(),
            b.to_signed(),
            d.to_signed()
        ));
    }
    out
}

/// `m` clauses over three distinct uniformly drawn variables with uniform signs.
pub fn random_instance(n: usize, m: usize, seed: u64) -> Result<Qbf3Instance, QbfError> {
    if m > 0 && 2 * n < 3 {
        return Err(QbfError::TooFewVariables(2 * n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clauses = (0..m)
        .map(|_| {
            let vars = rand::seq::index::sample(&mut rng, 2 * n, 3);
            let mut lits = [Literal::x(1, false); 3];
            for (slot, v) in lits.iter_mut().zip(vars.iter()) {
                let signed = (v + 1) as i64;
                let signed = if rng.gen_bool(0.5) { -signed } else { signed };
                *slot = Literal::from_signed(signed).expect("nonzero");
            }
            Clause::new(lits).expect("distinct variables")
        })
        .collect();
    Qbf3Instance::new(n, clauses)
}

/// All `2^(2n)` valuations in binary order, x1 most significant.
pub fn all_valuations(n: usize) -> impl Iterator<Item = Valuation> {
    let total = 2 * n;
    (0u64..1 << total).map(move |bits| {
        Valuation::new(
            (0..total)
                .map(|k| bits >> (total - 1 - k) & 1 == 1)
                .collect(),
        )
    })
}
