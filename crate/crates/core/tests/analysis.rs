//! Nullable, FIRST and FOLLOW checked against path reachability on small
//! gadget graphs, which only relies on the relational oracle.

mod common;

use std::collections::BTreeSet;

use cfpq_core::oracle::hellings;
use cfpq_core::{Grammar, Graph, NontermId, ParseTable, Symbol};
use common::{grammar_text, raw_grammar, RawGrammar, TERMINALS};
use proptest::prelude::*;

fn derives_between(graph: &Graph, grammar: &Grammar, nt: NontermId, u: u32, v: u32) -> bool {
    hellings(graph, grammar).contains(&(nt, u, v))
}

/// One vertex with a loop for every terminal of the grammar.
fn universe(grammar: &Grammar) -> Graph {
    let mut g = Graph::with_vertices(1);
    for t in grammar.terminals() {
        g.add_edge_named(0, t, 0);
    }
    g
}

fn nt(grammar: &Grammar, i: usize) -> NontermId {
    grammar.nonterminal_id(&format!("N{i}")).unwrap()
}

fn all_productive(grammar: &Grammar, n: usize) -> bool {
    let u = universe(grammar);
    (0..n).all(|i| derives_between(&u, grammar, nt(grammar, i), 0, 0))
}

/// `H{x}` derives the words of `N{x}` in which one occurrence of `N{a}`
/// is followed by the marker terminal.
fn marked(raw: &RawGrammar, a: usize) -> Grammar {
    let mut text = grammar_text(raw);
    text.push_str(&format!("H{a} -> N{a} mark\n"));
    for (x, alts) in raw.iter().enumerate() {
        for rhs in alts {
            for (i, s) in rhs.iter().enumerate() {
                if s.is_err() {
                    continue;
                }
                let mut line = format!("H{x} ->");
                for (j, s) in rhs.iter().enumerate() {
                    match s {
                        Ok(b) if j == i => line.push_str(&format!(" H{b}")),
                        Ok(b) => line.push_str(&format!(" N{b}")),
                        Err(t) => line.push_str(&format!(" {}", TERMINALS[*t])),
                    }
                }
                text.push_str(&line);
                text.push('\n');
            }
        }
    }
    Grammar::parse(&text).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn nullable_matches_empty_paths(raw in raw_grammar(4, 3)) {
        let g = Grammar::parse(&grammar_text(&raw)).unwrap();
        let empty = Graph::with_vertices(1);
        for i in 0..raw.len() {
            let a = nt(&g, i);
            prop_assert_eq!(g.is_nullable(a), derives_between(&empty, &g, a, 0, 0));
        }
    }

    #[test]
    fn first_matches_prefix_paths(raw in raw_grammar(4, 3)) {
        let g = Grammar::parse(&grammar_text(&raw)).unwrap();
        prop_assume!(all_productive(&g, raw.len()));
        for (ti, t) in g.terminals().iter().enumerate() {
            // 0 -t-> 1, then anything
            let mut graph = Graph::with_vertices(2);
            for u in g.terminals() {
                graph.add_edge_named(1, u, 1);
            }
            graph.add_edge_named(0, t, 1);
            let facts = hellings(&graph, &g);
            for i in 0..raw.len() {
                let a = nt(&g, i);
                let expected = facts.contains(&(a, 0, 1));
                let tid = g.terminal_id(t).unwrap();
                prop_assert_eq!(g.first(a).contains(&tid), expected, "N{} / {}", i, ti);
            }
        }
    }

    #[test]
    fn follow_matches_marked_paths(raw in raw_grammar(3, 3)) {
        let g = Grammar::parse(&grammar_text(&raw)).unwrap();
        prop_assume!(all_productive(&g, raw.len()));
        for a in 0..raw.len() {
            let h = marked(&raw, a);
            let mut expected = BTreeSet::new();
            for t in g.terminals() {
                // anything, mark, t, anything
                let mut graph = Graph::with_vertices(3);
                for u in g.terminals() {
                    graph.add_edge_named(0, u, 0);
                    graph.add_edge_named(2, u, 2);
                }
                graph.add_edge_named(0, "mark", 1);
                graph.add_edge_named(1, t, 2);
                let facts = hellings(&graph, &h);
                let hit = (0..raw.len()).any(|x| {
                    h.nonterminal_id(&format!("H{x}")).is_some_and(|hx| facts.contains(&(hx, 0, 2)))
                });
                if hit {
                    expected.insert(g.terminal_id(t).unwrap());
                }
            }
            prop_assert_eq!(g.follow(nt(&g, a)), &expected, "N{}", a);
        }
    }

    #[test]
    fn table_cells_hold_initial_slots_of_their_nonterminal(raw in raw_grammar(4, 3)) {
        let g = Grammar::parse(&grammar_text(&raw)).unwrap();
        let table = ParseTable::build(&g);
        let open = ParseTable::without_lookahead(&g);
        for i in 0..raw.len() {
            let a = nt(&g, i);
            for ti in 0..g.terminals().len() {
                let t = cfpq_core::TermId(ti as u32);
                for &s in table.cell(a, t) {
                    prop_assert_eq!(g.slot_dot(s), 0);
                    prop_assert_eq!(g.slot_lhs(s), a);
                    prop_assert!(open.cell(a, t).contains(&s));
                    let rhs = &g.production(g.slot_production(s)).rhs;
                    prop_assert!(g.first_of_seq(rhs).contains(&t) || (g.is_nullable_seq(rhs) && g.follow(a).contains(&t)));
                }
                prop_assert_eq!(open.cell(a, t).len(), g.alternatives(a).len());
            }
            for &s in table.nullable_alternatives(a) {
                let rhs = &g.production(g.slot_production(s)).rhs;
                prop_assert!(rhs.iter().all(|s| matches!(s, Symbol::Nonterminal(b) if g.is_nullable(*b))));
            }
        }
    }
}
