//! Context-free grammars, their slots, and the prediction table.
//!
//! Grammar text is one rule per line:
//!
//! ```text
//! # balanced brackets
//! S -> a S b S
//! S -> eps
//! ```
//!
//! A symbol is a nonterminal iff it occurs as the left-hand side of some
//! rule; every other symbol is a terminal. The left-hand side of the first
//! rule is the start symbol, and `eps` stands for an empty right-hand side.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;

/// Index of a nonterminal in [`Grammar::nonterminals`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NontermId(pub u32);

/// Index of a terminal in [`Grammar::terminals`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermId(pub u32);

/// A grammar slot `A -> α · β`, interned as a dense index.
///
/// Slots of production `p` occupy a contiguous range, one per dot
/// position, so advancing the dot is `SlotId(s.0 + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlotId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Terminal(TermId),
    Nonterminal(NontermId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Production {
    pub lhs: NontermId,
    pub rhs: Vec<Symbol>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GrammarError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("grammar has no rules")]
    Empty,
    #[error("line {line}: rule for `{lhs}` has no right-hand side symbols (use `eps` for an empty rule)")]
    EmptyRhs { line: usize, lhs: String },
    #[error("nonterminal `{0}` has no productions")]
    NoProductions(String),
    #[error("symbol `{0}` is declared both as a terminal and as a nonterminal")]
    Overlap(String),
    #[error("symbol id out of range in production {0}")]
    BadSymbol(usize),
    #[error("start symbol is not a nonterminal")]
    BadStart,
}

/// An immutable context-free grammar together with its derived sets.
#[derive(Clone, Debug)]
pub struct Grammar {
    nonterminals: Vec<String>,
    terminals: Vec<String>,
    productions: Vec<Production>,
    start: NontermId,
    alternatives: Vec<Vec<usize>>,
    slot_base: Vec<u32>,
    slot_prod: Vec<u32>,
    slot_dot: Vec<u32>,
    nullable: Vec<bool>,
    first: Vec<BTreeSet<TermId>>,
    follow: Vec<BTreeSet<TermId>>,
}

impl Grammar {
    /// Builds a grammar from already-interned parts, checking its invariants.
    pub fn new(
        nonterminals: Vec<String>,
        terminals: Vec<String>,
        productions: Vec<Production>,
        start: NontermId,
    ) -> Result<Self, GrammarError> {
        if productions.is_empty() {
            return Err(GrammarError::Empty);
        }
        if start.0 as usize >= nonterminals.len() {
            return Err(GrammarError::BadStart);
        }
        let nt_names: BTreeSet<&str> = nonterminals.iter().map(String::as_str).collect();
        if let Some(t) = terminals.iter().find(|t| nt_names.contains(t.as_str())) {
            return Err(GrammarError::Overlap(t.clone()));
        }
        for (i, p) in productions.iter().enumerate() {
            let lhs_ok = (p.lhs.0 as usize) < nonterminals.len();
            let rhs_ok = p.rhs.iter().all(|s| match *s {
                Symbol::Terminal(t) => (t.0 as usize) < terminals.len(),
                Symbol::Nonterminal(n) => (n.0 as usize) < nonterminals.len(),
            });
            if !lhs_ok || !rhs_ok {
                return Err(GrammarError::BadSymbol(i));
            }
        }

        let mut alternatives = alloc::vec![Vec::new(); nonterminals.len()];
        for (i, p) in productions.iter().enumerate() {
            alternatives[p.lhs.0 as usize].push(i);
        }
        if let Some(n) = alternatives.iter().position(Vec::is_empty) {
            return Err(GrammarError::NoProductions(nonterminals[n].clone()));
        }

        let mut slot_base = Vec::with_capacity(productions.len());
        let mut slot_prod = Vec::new();
        let mut slot_dot = Vec::new();
        for (i, p) in productions.iter().enumerate() {
            slot_base.push(slot_prod.len() as u32);
            for dot in 0..=p.rhs.len() {
                slot_prod.push(i as u32);
                slot_dot.push(dot as u32);
            }
        }

        let mut g = Grammar {
            nonterminals,
            terminals,
            productions,
            start,
            alternatives,
            slot_base,
            slot_prod,
            slot_dot,
            nullable: Vec::new(),
            first: Vec::new(),
            follow: Vec::new(),
        };
        g.nullable = g.compute_nullable_flags();
        g.first = g.compute_first();
        g.follow = g.compute_follow();
        Ok(g)
    }

    /// Parses grammar text. See the module docs for the format.
    pub fn parse(text: &str) -> Result<Self, GrammarError> {
        let mut rules: Vec<(usize, &str, Vec<&str>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut tokens = content.split_whitespace();
            let lhs = tokens.next().unwrap_or_default();
            if lhs == "->" || lhs == "eps" {
                return Err(GrammarError::Syntax {
                    line,
                    message: format!("expected a nonterminal name, found `{lhs}`"),
                });
            }
            match tokens.next() {
                Some("->") => {}
                Some(other) => {
                    return Err(GrammarError::Syntax {
                        line,
                        message: format!("expected `->` after `{lhs}`, found `{other}`"),
                    })
                }
                None => {
                    return Err(GrammarError::Syntax {
                        line,
                        message: format!("expected `->` after `{lhs}`"),
                    })
                }
            }
            let rhs: Vec<&str> = tokens.collect();
            if rhs.is_empty() {
                return Err(GrammarError::EmptyRhs { line, lhs: lhs.to_string() });
            }
            if let Some(bad) = rhs.iter().find(|s| **s == "->") {
                return Err(GrammarError::Syntax {
                    line,
                    message: format!("unexpected `{bad}` in right-hand side"),
                });
            }
            let rhs = if rhs == ["eps"] {
                Vec::new()
            } else if rhs.contains(&"eps") {
                return Err(GrammarError::Syntax {
                    line,
                    message: "`eps` must be the only symbol of a right-hand side".to_string(),
                });
            } else {
                rhs
            };
            rules.push((line, lhs, rhs));
        }
        if rules.is_empty() {
            return Err(GrammarError::Empty);
        }

        let mut nt_index: HashMap<&str, NontermId> = HashMap::new();
        let mut nonterminals = Vec::new();
        for (_, lhs, _) in &rules {
            nt_index.entry(*lhs).or_insert_with(|| {
                nonterminals.push(lhs.to_string());
                NontermId(nonterminals.len() as u32 - 1)
            });
        }
        let mut t_index: HashMap<&str, TermId> = HashMap::new();
        let mut terminals = Vec::new();
        let mut productions = Vec::with_capacity(rules.len());
        for (_, lhs, rhs) in &rules {
            let rhs = rhs
                .iter()
                .map(|s| match nt_index.get(s) {
                    Some(&n) => Symbol::Nonterminal(n),
                    None => Symbol::Terminal(*t_index.entry(*s).or_insert_with(|| {
                        terminals.push(s.to_string());
                        TermId(terminals.len() as u32 - 1)
                    })),
                })
                .collect();
            productions.push(Production { lhs: nt_index[lhs], rhs });
        }
        Grammar::new(nonterminals, terminals, productions, NontermId(0))
    }

    pub fn start(&self) -> NontermId {
        self.start
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &[String] {
        &self.terminals
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn production(&self, index: usize) -> &Production {
        &self.productions[index]
    }

    /// Production indices with the given left-hand side, in file order.
    pub fn alternatives(&self, nt: NontermId) -> &[usize] {
        &self.alternatives[nt.0 as usize]
    }

    pub fn nonterminal_name(&self, nt: NontermId) -> &str {
        &self.nonterminals[nt.0 as usize]
    }

    pub fn terminal_name(&self, t: TermId) -> &str {
        &self.terminals[t.0 as usize]
    }

    pub fn nonterminal_id(&self, name: &str) -> Option<NontermId> {
        self.nonterminals.iter().position(|n| n == name).map(|i| NontermId(i as u32))
    }

    pub fn terminal_id(&self, name: &str) -> Option<TermId> {
        self.terminals.iter().position(|n| n == name).map(|i| TermId(i as u32))
    }

    pub fn symbol_name(&self, s: Symbol) -> &str {
        match s {
            Symbol::Terminal(t) => self.terminal_name(t),
            Symbol::Nonterminal(n) => self.nonterminal_name(n),
        }
    }

    // ---- slots -------------------------------------------------------

    pub fn slot_count(&self) -> usize {
        self.slot_prod.len()
    }

    /// Every slot exactly once, grouped by production, dot ascending.
    pub fn slots(&self) -> impl Iterator<Item = SlotId> + '_ {
        (0..self.slot_prod.len() as u32).map(SlotId)
    }

    pub fn slot(&self, production: usize, dot: usize) -> SlotId {
        debug_assert!(dot <= self.productions[production].rhs.len());
        SlotId(self.slot_base[production] + dot as u32)
    }

    pub fn slot_production(&self, s: SlotId) -> usize {
        self.slot_prod[s.0 as usize] as usize
    }

    pub fn slot_dot(&self, s: SlotId) -> usize {
        self.slot_dot[s.0 as usize] as usize
    }

    pub fn slot_lhs(&self, s: SlotId) -> NontermId {
        self.productions[self.slot_production(s)].lhs
    }

    /// The symbol right after the dot, or `None` at the end of the rule.
    pub fn symbol_after(&self, s: SlotId) -> Option<Symbol> {
        self.productions[self.slot_production(s)].rhs.get(self.slot_dot(s)).copied()
    }

    /// The symbol right before the dot, or `None` at the start of the rule.
    pub fn symbol_before(&self, s: SlotId) -> Option<Symbol> {
        let dot = self.slot_dot(s);
        dot.checked_sub(1).map(|d| self.productions[self.slot_production(s)].rhs[d])
    }

    pub fn is_end_slot(&self, s: SlotId) -> bool {
        self.symbol_after(s).is_none()
    }

    /// True for slots of the form `A -> α X · β` with `X` a nonterminal,
    /// i.e. slots that can label a stack node.
    pub fn is_return_slot(&self, s: SlotId) -> bool {
        matches!(self.symbol_before(s), Some(Symbol::Nonterminal(_)))
    }

    pub fn return_slot_count(&self) -> usize {
        self.slots().filter(|&s| self.is_return_slot(s)).count()
    }

    /// Slot with the dot moved one symbol to the right.
    pub fn advance(&self, s: SlotId) -> SlotId {
        debug_assert!(!self.is_end_slot(s));
        SlotId(s.0 + 1)
    }

    pub fn display_slot(&self, s: SlotId) -> SlotDisplay<'_> {
        SlotDisplay { grammar: self, slot: s }
    }

    // ---- nullable / FIRST / FOLLOW ------------------------------------

    pub fn is_nullable(&self, nt: NontermId) -> bool {
        self.nullable[nt.0 as usize]
    }

    /// `{A | A ⇒* ε}`.
    pub fn nullable_set(&self) -> BTreeSet<NontermId> {
        (0..self.nonterminals.len() as u32)
            .map(NontermId)
            .filter(|&n| self.is_nullable(n))
            .collect()
    }

    pub fn first(&self, nt: NontermId) -> &BTreeSet<TermId> {
        &self.first[nt.0 as usize]
    }

    pub fn follow(&self, nt: NontermId) -> &BTreeSet<TermId> {
        &self.follow[nt.0 as usize]
    }

    pub fn is_nullable_seq(&self, seq: &[Symbol]) -> bool {
        seq.iter().all(|s| match *s {
            Symbol::Terminal(_) => false,
            Symbol::Nonterminal(n) => self.nullable[n.0 as usize],
        })
    }

    pub fn first_of_seq(&self, seq: &[Symbol]) -> BTreeSet<TermId> {
        first_of_seq(seq, &self.first, &self.nullable)
    }

    fn compute_nullable_flags(&self) -> Vec<bool> {
        let mut nullable = alloc::vec![false; self.nonterminals.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for p in &self.productions {
                if nullable[p.lhs.0 as usize] {
                    continue;
                }
                let all = p.rhs.iter().all(|s| match *s {
                    Symbol::Terminal(_) => false,
                    Symbol::Nonterminal(n) => nullable[n.0 as usize],
                });
                if all {
                    nullable[p.lhs.0 as usize] = true;
                    changed = true;
                }
            }
        }
        nullable
    }

    fn compute_first(&self) -> Vec<BTreeSet<TermId>> {
        let mut first = alloc::vec![BTreeSet::new(); self.nonterminals.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for p in &self.productions {
                let add = first_of_seq(&p.rhs, &first, &self.nullable);
                let target = &mut first[p.lhs.0 as usize];
                for t in add {
                    changed |= target.insert(t);
                }
            }
        }
        first
    }

    fn compute_follow(&self) -> Vec<BTreeSet<TermId>> {
        let mut follow = alloc::vec![BTreeSet::new(); self.nonterminals.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for p in &self.productions {
                for (i, s) in p.rhs.iter().enumerate() {
                    let Symbol::Nonterminal(b) = *s else { continue };
                    let rest = &p.rhs[i + 1..];
                    let mut add = first_of_seq(rest, &self.first, &self.nullable);
                    if self.is_nullable_seq(rest) {
                        add.extend(follow[p.lhs.0 as usize].iter().copied());
                    }
                    let target = &mut follow[b.0 as usize];
                    for t in add {
                        changed |= target.insert(t);
                    }
                }
            }
        }
        follow
    }
}

fn first_of_seq(seq: &[Symbol], first: &[BTreeSet<TermId>], nullable: &[bool]) -> BTreeSet<TermId> {
    let mut out = BTreeSet::new();
    for s in seq {
        match *s {
            Symbol::Terminal(t) => {
                out.insert(t);
                return out;
            }
            Symbol::Nonterminal(n) => {
                out.extend(first[n.0 as usize].iter().copied());
                if !nullable[n.0 as usize] {
                    return out;
                }
            }
        }
    }
    out
}

/// Renders the grammar back in the text format accepted by [`Grammar::parse`].
impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.productions {
            write!(f, "{} ->", self.nonterminal_name(p.lhs))?;
            if p.rhs.is_empty() {
                f.write_str(" eps")?;
            }
            for s in &p.rhs {
                write!(f, " {}", self.symbol_name(*s))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub struct SlotDisplay<'g> {
    grammar: &'g Grammar,
    slot: SlotId,
}

impl fmt::Display for SlotDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.grammar;
        let p = g.production(g.slot_production(self.slot));
        let dot = g.slot_dot(self.slot);
        write!(f, "{} ->", g.nonterminal_name(p.lhs))?;
        for (i, s) in p.rhs.iter().enumerate() {
            if i == dot {
                f.write_str(" .")?;
            }
            write!(f, " {}", g.symbol_name(*s))?;
        }
        if dot == p.rhs.len() {
            f.write_str(" .")?;
        }
        Ok(())
    }
}

/// Prediction table: for a nonterminal `A` and a terminal `t`, the initial
/// slots of the alternatives of `A` that can start a derivation consuming
/// `t` first.
///
/// Cell `(A, t)` holds `A -> ·γ` iff `t ∈ FIRST(γ)`, or `γ` is nullable and
/// `t ∈ FOLLOW(A)`. Several slots per cell are expected; the parser explores
/// all of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseTable {
    terminal_count: usize,
    cells: Vec<Vec<SlotId>>,
    nullable_alternatives: Vec<Vec<SlotId>>,
    lookahead: bool,
}

impl ParseTable {
    pub fn build(g: &Grammar) -> Self {
        let nt = g.nonterminals.len();
        let tc = g.terminals.len();
        let mut cells = alloc::vec![Vec::new(); nt * tc];
        let mut nullable_alternatives = alloc::vec![Vec::new(); nt];
        for (pi, p) in g.productions.iter().enumerate() {
            let slot = g.slot(pi, 0);
            let a = p.lhs.0 as usize;
            let mut lookahead = g.first_of_seq(&p.rhs);
            if g.is_nullable_seq(&p.rhs) {
                nullable_alternatives[a].push(slot);
                lookahead.extend(g.follow(p.lhs).iter().copied());
            }
            for t in lookahead {
                cells[a * tc + t.0 as usize].push(slot);
            }
        }
        ParseTable { terminal_count: tc, cells, nullable_alternatives, lookahead: true }
    }

    /// A table whose every cell `(A, t)` lists all alternatives of `A`.
    /// Querying with it must give the same results as with [`build`].
    ///
    /// [`build`]: ParseTable::build
    pub fn without_lookahead(g: &Grammar) -> Self {
        let nt = g.nonterminals.len();
        let tc = g.terminals.len();
        let mut cells = alloc::vec![Vec::new(); nt * tc];
        let mut nullable_alternatives = alloc::vec![Vec::new(); nt];
        for (pi, p) in g.productions.iter().enumerate() {
            let slot = g.slot(pi, 0);
            let a = p.lhs.0 as usize;
            for t in 0..tc {
                cells[a * tc + t].push(slot);
            }
            if g.is_nullable_seq(&p.rhs) {
                nullable_alternatives[a].push(slot);
            }
        }
        ParseTable { terminal_count: tc, cells, nullable_alternatives, lookahead: false }
    }

    pub fn cell(&self, nt: NontermId, t: TermId) -> &[SlotId] {
        &self.cells[nt.0 as usize * self.terminal_count + t.0 as usize]
    }

    /// Initial slots of the alternatives of `nt` that derive ε.
    pub fn nullable_alternatives(&self, nt: NontermId) -> &[SlotId] {
        &self.nullable_alternatives[nt.0 as usize]
    }

    pub fn uses_lookahead(&self) -> bool {
        self.lookahead
    }
}
