//! Context-free path querying on edge-labeled directed graphs.
//!
//! A query is a context-free grammar. Running it over a graph with a GLL
//! machine produces a binarized shared packed parse forest (SPPF) that
//! represents every path whose label word is derivable from the start
//! symbol, including infinitely many paths when the graph has cycles.
//! Reachability pairs, concrete paths and the matched subgraph are then
//! read back out of the forest.
//!
//! ```
//! use cfpq_core::{Grammar, Graph, Query};
//!
//! let grammar = Grammar::parse("S -> a S b\nS -> Middle\nMiddle -> a b").unwrap();
//! let mut graph = Graph::new();
//! for (u, l, v) in [(0, "a", 1), (1, "a", 2), (2, "a", 0), (0, "b", 3), (3, "b", 0)] {
//!     graph.add_edge_named(u, l, v);
//! }
//! let result = Query::new(&graph, &grammar).starts([0]).run();
//! let roots: Vec<_> = result.root_pairs().collect();
//! assert_eq!(roots, [(0, 0), (0, 3)]);
//! ```
//!
//! The crate is `no_std` and only needs `alloc`; file formats, export and
//! the command-line driver live in the `cfpq` crate.
#![no_std]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod audit;
pub mod engine;
pub mod grammar;
pub mod graph;
pub mod gss;
pub mod oracle;
pub mod results;
pub mod sppf;

pub use audit::{AuditReport, Bound};
pub use engine::{EngineStats, GllMachine, Lookahead, Query, WorklistOrder};
pub use grammar::{Grammar, GrammarError, NontermId, ParseTable, SlotId, Symbol, TermId};
pub use graph::{Edge, Graph, LabelId, Path, PathError, Vertex};
pub use results::{PathIter, PathQueryLimits, QueryResult};
pub use sppf::{NodeId, NodeKind, Sppf, SppfNode, SppfStats};
