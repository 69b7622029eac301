//! Reference answers computed without the GLL machinery.
//!
//! [`hellings`] is a relational worklist fixpoint over a binarized copy of
//! the grammar. The other helpers are brute force and only meant for small
//! inputs in tests.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};

use crate::grammar::{Grammar, NontermId, Symbol};
use crate::graph::{Edge, Graph, LabelId, Path, Vertex};

enum Rule {
    Eps(usize),
    Term(usize, LabelId),
    Unit(usize, usize),
    Pair(usize, usize, usize),
}

/// Every `(A, u, v)` such that some path `u → v` spells a word derivable
/// from `A`. Only nonterminals of `grammar` appear in the output.
pub fn hellings(graph: &Graph, grammar: &Grammar) -> BTreeSet<(NontermId, Vertex, Vertex)> {
    let n_orig = grammar.nonterminals().len();
    let mut next = n_orig;
    let mut rules = Vec::new();
    let mut term_nt: HashMap<usize, Option<usize>> = HashMap::new();

    // symbol → oracle nonterminal; `None` for terminals absent from the graph
    let mut lift = |s: Symbol, rules: &mut Vec<Rule>, next: &mut usize| -> Option<usize> {
        match s {
            Symbol::Nonterminal(nt) => Some(nt.0 as usize),
            Symbol::Terminal(t) => *term_nt.entry(t.0 as usize).or_insert_with(|| {
                let label = graph.label_id(grammar.terminal_name(t))?;
                let id = *next;
                *next += 1;
                rules.push(Rule::Term(id, label));
                Some(id)
            }),
        }
    };

    for p in grammar.productions() {
        let lhs = p.lhs.0 as usize;
        let Some(rhs) = p.rhs.iter().map(|&s| lift(s, &mut rules, &mut next)).collect::<Option<Vec<_>>>() else {
            continue;
        };
        match rhs.len() {
            0 => rules.push(Rule::Eps(lhs)),
            1 => rules.push(Rule::Unit(lhs, rhs[0])),
            k => {
                let mut head = lhs;
                for &sym in &rhs[..k - 2] {
                    let tail = next;
                    next += 1;
                    rules.push(Rule::Pair(head, sym, tail));
                    head = tail;
                }
                rules.push(Rule::Pair(head, rhs[k - 2], rhs[k - 1]));
            }
        }
    }

    let mut unit_of: Vec<Vec<usize>> = vec![Vec::new(); next];
    let mut as_left: Vec<Vec<(usize, usize)>> = vec![Vec::new(); next];
    let mut as_right: Vec<Vec<(usize, usize)>> = vec![Vec::new(); next];
    let mut facts: HashSet<(usize, Vertex, Vertex)> = HashSet::new();
    let mut work = Vec::new();
    let push = |f: (usize, Vertex, Vertex), facts: &mut HashSet<_>, work: &mut Vec<_>| {
        if facts.insert(f) {
            work.push(f);
        }
    };

    for r in &rules {
        match *r {
            Rule::Eps(a) => {
                for v in 0..graph.vertex_count() as Vertex {
                    push((a, v, v), &mut facts, &mut work);
                }
            }
            Rule::Term(a, label) => {
                for e in graph.edges().filter(|e| e.label == label) {
                    push((a, e.source, e.target), &mut facts, &mut work);
                }
            }
            Rule::Unit(a, b) => unit_of[b].push(a),
            Rule::Pair(a, b, c) => {
                as_left[b].push((a, c));
                as_right[c].push((a, b));
            }
        }
    }

    let mut from: HashMap<(usize, Vertex), Vec<Vertex>> = HashMap::new();
    let mut into: HashMap<(usize, Vertex), Vec<Vertex>> = HashMap::new();
    while let Some((b, u, v)) = work.pop() {
        from.entry((b, u)).or_default().push(v);
        into.entry((b, v)).or_default().push(u);
        let mut found = Vec::new();
        for &a in &unit_of[b] {
            found.push((a, u, v));
        }
        for &(a, c) in &as_left[b] {
            for &w in from.get(&(c, v)).into_iter().flatten() {
                found.push((a, u, w));
            }
        }
        for &(a, c) in &as_right[b] {
            for &w in into.get(&(c, u)).into_iter().flatten() {
                found.push((a, w, v));
            }
        }
        for f in found {
            push(f, &mut facts, &mut work);
        }
    }

    facts
        .into_iter()
        .filter(|&(a, _, _)| a < n_orig)
        .map(|(a, u, v)| (NontermId(a as u32), u, v))
        .collect()
}

/// Whether `nt` derives `word`, by a fixpoint over all substrings.
///
/// Words are given as graph labels; labels the grammar does not know
/// never match.
pub fn derives(graph: &Graph, grammar: &Grammar, nt: NontermId, word: &[LabelId]) -> bool {
    let n = word.len();
    let nts = grammar.nonterminals().len();
    let word: Vec<Option<_>> = word.iter().map(|&l| grammar.terminal_id(graph.label_name(l))).collect();
    // table[i][j][A]: A derives word[i..j]
    let mut table = vec![vec![vec![false; nts]; n + 1]; n + 1];
    loop {
        let mut changed = false;
        for i in 0..=n {
            for j in i..=n {
                for p in grammar.productions() {
                    let a = p.lhs.0 as usize;
                    if table[i][j][a] {
                        continue;
                    }
                    // positions reachable after matching a prefix of the rhs
                    let mut at = vec![false; n + 1];
                    at[i] = true;
                    for &s in &p.rhs {
                        let mut next = vec![false; n + 1];
                        for k in i..=j {
                            if !at[k] {
                                continue;
                            }
                            match s {
                                Symbol::Terminal(t) => {
                                    if k < j && word[k] == Some(t) {
                                        next[k + 1] = true;
                                    }
                                }
                                Symbol::Nonterminal(b) => {
                                    for m in k..=j {
                                        if table[k][m][b.0 as usize] {
                                            next[m] = true;
                                        }
                                    }
                                }
                            }
                        }
                        at = next;
                    }
                    if at[j] {
                        table[i][j][a] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return table[0][n][nt.0 as usize];
        }
    }
}

/// All non-empty paths leaving `from` with at most `max_len` edges, in
/// depth-first order.
pub fn paths_from(graph: &Graph, from: Vertex, max_len: usize) -> Vec<Path> {
    fn walk(graph: &Graph, at: Vertex, max_len: usize, stack: &mut Vec<Edge>, out: &mut Vec<Path>) {
        if stack.len() == max_len {
            return;
        }
        for (label, targets) in graph.out_labels(at) {
            for &v in targets {
                stack.push(Edge::new(at, label, v));
                out.push(Path::new(stack.clone()).expect("walk builds incident paths"));
                walk(graph, v, max_len, stack, out);
                stack.pop();
            }
        }
    }
    let mut out = Vec::new();
    if (from as usize) < graph.vertex_count() {
        walk(graph, from, max_len, &mut Vec::new(), &mut out);
    }
    out
}

/// Pairs `(u, v)` joined by a path of 1 to `max_len` edges whose word
/// `nt` derives. Empty paths are not considered.
///
/// Words are enumerated once each together with the relation they induce,
/// so this stays usable on dense graphs with few labels. Vertices are
/// limited to 64.
pub fn bounded_pairs(graph: &Graph, grammar: &Grammar, nt: NontermId, max_len: usize) -> BTreeSet<(Vertex, Vertex)> {
    let n = graph.vertex_count();
    assert!(n <= 64, "bounded_pairs handles at most 64 vertices");
    let labels: Vec<LabelId> = (0..graph.labels().len() as u32).map(LabelId).collect();
    let mut out = BTreeSet::new();
    let step = |rel: &[u64], l: LabelId| -> Vec<u64> {
        rel.iter()
            .map(|&row| {
                let mut acc = 0u64;
                for v in (0..n).filter(|v| row >> v & 1 == 1) {
                    for &w in graph.targets(v as Vertex, l) {
                        acc |= 1 << w;
                    }
                }
                acc
            })
            .collect()
    };
    let identity: Vec<u64> = (0..n).map(|v| 1u64 << v).collect();
    let mut stack: Vec<(Vec<LabelId>, Vec<u64>)> = vec![(Vec::new(), identity)];
    let mut memo: HashMap<Vec<LabelId>, bool> = HashMap::new();
    while let Some((word, rel)) = stack.pop() {
        if !word.is_empty() && *memo.entry(word.clone()).or_insert_with(|| derives(graph, grammar, nt, &word)) {
            for (u, &row) in rel.iter().enumerate() {
                for v in (0..n).filter(|v| row >> v & 1 == 1) {
                    out.insert((u as Vertex, v as Vertex));
                }
            }
        }
        if word.len() == max_len {
            continue;
        }
        for &l in &labels {
            let next = step(&rel, l);
            if next.iter().any(|&r| r != 0) {
                let mut w = word.clone();
                w.push(l);
                stack.push((w, next));
            }
        }
    }
    out
}
