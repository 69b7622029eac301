//! Size bounds on the forest and stack of a finished query.
//!
//! A packed node is determined by its slot, its parent's extension and its
//! pivot, which gives the `#slots·|V|³` packed bound below.

use alloc::vec::Vec;
use core::fmt;

use crate::results::QueryResult;
use crate::sppf::{NodeKind, SppfNode};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bound {
    pub name: &'static str,
    pub actual: u128,
    pub limit: u128,
    pub ok: bool,
}

impl Bound {
    fn at_most(name: &'static str, actual: usize, limit: u128) -> Self {
        let actual = actual as u128;
        Bound { name, actual, limit, ok: actual <= limit }
    }

    fn exactly(name: &'static str, actual: usize, expected: usize) -> Self {
        Bound { name, actual: actual as u128, limit: expected as u128, ok: actual == expected }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.ok { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {} (limit {})", self.name, self.actual, self.limit)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub vertices: usize,
    pub edges: usize,
    pub nonterminals: usize,
    pub slots: usize,
    pub return_slots: usize,
    pub bounds: Vec<Bound>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.bounds.iter().all(|b| b.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Bound> + '_ {
        self.bounds.iter().filter(|b| !b.ok)
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "|V|={} |E|={} |N|={} slots={} return-slots={}",
            self.vertices, self.edges, self.nonterminals, self.slots, self.return_slots
        )?;
        for b in &self.bounds {
            writeln!(f, "{b}")?;
        }
        Ok(())
    }
}

pub(crate) fn audit(r: &QueryResult<'_>) -> AuditReport {
    let graph = r.graph();
    let grammar = r.grammar();
    let sppf = r.sppf();
    let gss = r.gss();
    let stats = sppf.stats();
    let engine = r.engine_stats();

    let v = graph.vertex_count() as u128;
    let e = graph.edge_count();
    let n = grammar.nonterminals().len();
    let slots = grammar.slot_count();
    let ret = grammar.return_slot_count();

    let dangling = sppf
        .nodes()
        .filter(|(_, node)| matches!(node, SppfNode::Terminal { edge } if !graph.has_edge(*edge)))
        .count();

    let bounds = alloc::vec![
        Bound::at_most("terminal nodes <= |E|", stats.count(NodeKind::Terminal), e as u128),
        Bound::exactly("terminal nodes without a graph edge", dangling, 0),
        Bound::at_most("epsilon nodes <= |V|", stats.count(NodeKind::Epsilon), v),
        Bound::at_most("nonterminal nodes <= |N|*|V|^2", stats.count(NodeKind::Nonterminal), n as u128 * v * v),
        Bound::at_most(
            "intermediate nodes <= slots*|V|^2",
            stats.count(NodeKind::Intermediate),
            slots as u128 * v * v,
        ),
        Bound::at_most("packed nodes <= slots*|V|^3", stats.count(NodeKind::Packed), slots as u128 * v * v * v),
        Bound::at_most("GSS nodes <= (return-slots+1)*|V|", gss.len(), (ret as u128 + 1) * v),
        Bound::at_most("GSS edges <= (GSS nodes)^2", gss.edge_count(), (gss.len() as u128).pow(2)),
        Bound::exactly("descriptors breaking the extension invariant", engine.lemma_violations, 0),
        Bound::exactly("descriptors dispatched == |U|", engine.dispatched, engine.descriptors),
    ];
    AuditReport { vertices: graph.vertex_count(), edges: e, nonterminals: n, slots, return_slots: ret, bounds }
}

#[cfg(test)]
mod tests {
    use crate::engine::Query;
    use crate::grammar::Grammar;
    use crate::graph::Graph;

    #[test]
    fn school_passes() {
        let mut g = Graph::new();
        for (u, l, v) in [(0, "a", 1), (1, "a", 2), (2, "a", 0), (0, "b", 3), (3, "b", 0)] {
            g.add_edge_named(u, l, v);
        }
        let grammar = Grammar::parse("S -> a S b\nS -> Middle\nMiddle -> a b").unwrap();
        let r = Query::new(&g, &grammar).starts([0]).run();
        let report = r.audit();
        assert!(report.passed(), "{report}");
        assert!(r.sppf().stats().terminal <= 5);
        assert_eq!(r.sppf().stats().epsilon, 0);
    }

    #[test]
    fn empty_graph_passes_with_zeros() {
        let g = Graph::new();
        let grammar = Grammar::parse("S -> a S b\nS -> eps").unwrap();
        let r = Query::new(&g, &grammar).run();
        let report = r.audit();
        assert!(report.passed(), "{report}");
        assert!(report.bounds.iter().all(|b| b.actual == 0));
    }

    #[test]
    fn complete_k4_epsilon_bound() {
        let g = Graph::complete(4, &["a", "b"], false).unwrap();
        let grammar = Grammar::parse("S -> a S b S\nS -> eps").unwrap();
        let r = Query::new(&g, &grammar).run();
        assert!(r.sppf().stats().epsilon <= 4);
        assert!(r.audit().passed());
    }
}
