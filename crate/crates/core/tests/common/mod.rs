#![allow(dead_code)]

use std::fmt::Write;

use cfpq_core::{Grammar, Graph};
use proptest::prelude::*;

pub const G0: &str = "S -> eps\nS -> a S b\nS -> S S";
pub const G1: &str = "S -> a S b\nS -> Middle\nMiddle -> a b";
pub const G2: &str = "S -> a S b S\nS -> eps";

pub const TERMINALS: [&str; 3] = ["a", "b", "c"];

/// Right-hand side symbols: `Ok(nt)` or `Err(terminal)`.
pub type RawGrammar = Vec<Vec<Vec<Result<usize, usize>>>>;

pub fn grammar_text(raw: &RawGrammar) -> String {
    let mut text = String::new();
    for (a, alts) in raw.iter().enumerate() {
        for rhs in alts {
            write!(text, "N{a} ->").unwrap();
            if rhs.is_empty() {
                text.push_str(" eps");
            }
            for s in rhs {
                match s {
                    Ok(b) => write!(text, " N{b}").unwrap(),
                    Err(t) => write!(text, " {}", TERMINALS[*t]).unwrap(),
                }
            }
            text.push('\n');
        }
    }
    text
}

pub fn raw_grammar(max_nts: usize, terminals: usize) -> impl Strategy<Value = RawGrammar> {
    (1..=max_nts).prop_flat_map(move |n| {
        let sym = prop_oneof![(0..n).prop_map(Ok), (0..terminals).prop_map(Err)];
        let rhs = prop::collection::vec(sym, 0..=4);
        prop::collection::vec(prop::collection::vec(rhs, 1..=3), n)
    })
}

pub fn grammar(max_nts: usize, terminals: usize) -> impl Strategy<Value = Grammar> {
    raw_grammar(max_nts, terminals).prop_map(|raw| Grammar::parse(&grammar_text(&raw)).expect("generated grammar parses"))
}

/// A graph on `1..=max_vertices` vertices whose edges over the first
/// `labels` terminals appear independently with a drawn density.
pub fn graph(max_vertices: usize, labels: usize, density: std::ops::RangeInclusive<f64>) -> impl Strategy<Value = Graph> {
    (1..=max_vertices, density).prop_flat_map(move |(n, p)| {
        prop::collection::vec(prop::bool::weighted(p), n * n * labels).prop_map(move |bits| {
            let mut g = Graph::with_vertices(n);
            for (i, &on) in bits.iter().enumerate() {
                if on {
                    let (u, rest) = (i / (n * labels), i % (n * labels));
                    let (l, v) = (rest / n, rest % n);
                    g.add_edge_named(u as u32, TERMINALS[l], v as u32);
                }
            }
            g
        })
    })
}

pub fn school() -> Graph {
    let mut g = Graph::new();
    for (u, l, v) in [(0, "a", 1), (1, "a", 2), (2, "a", 0), (0, "b", 3), (3, "b", 0)] {
        g.add_edge_named(u, l, v);
    }
    g
}
