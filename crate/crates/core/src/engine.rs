//! Table-driven GLL machine adapted to graph input.
//!
//! Positions are graph vertices. Where a string parser reads the one next
//! token, the graph parser follows every outgoing edge carrying the
//! expected terminal, and predicts alternatives from the labels of all
//! outgoing edges.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::grammar::{Grammar, NontermId, ParseTable, SlotId, Symbol, TermId};
use crate::graph::{Edge, Graph, LabelId, Vertex};
use crate::gss::{Gss, GssId};
use crate::results::QueryResult;
use crate::sppf::{NodeId, Sppf};

/// Order in which pending descriptors are taken.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WorklistOrder {
    #[default]
    Lifo,
    Fifo,
}

/// Whether alternatives are predicted from the parse table or all tried.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Lookahead {
    #[default]
    Table,
    Off,
}

/// A suspended parser configuration: grammar slot, stack node, current
/// vertex and the forest node built so far for the current rule
/// (`None` is the dummy node).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Descriptor {
    pub slot: SlotId,
    pub stack: GssId,
    pub position: Vertex,
    pub node: Option<NodeId>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    /// Distinct descriptors created (|U|).
    pub descriptors: usize,
    /// Descriptors taken off the worklist and processed.
    pub dispatched: usize,
    /// Calls to `add`, including duplicates.
    pub offers: usize,
    /// Descriptors offered while replaying recorded pops in `create`.
    pub replayed: usize,
    /// Descriptors whose forest node does not span (stack index, position).
    pub lemma_violations: usize,
}

pub struct GllMachine<'a> {
    grammar: &'a Grammar,
    graph: &'a Graph,
    table: &'a ParseTable,
    label_term: Vec<Option<TermId>>,
    term_label: Vec<Option<LabelId>>,
    gss: Gss,
    sppf: Sppf,
    pending: VecDeque<Descriptor>,
    created: HashSet<Descriptor>,
    history: Vec<Descriptor>,
    order: WorklistOrder,
    stats: EngineStats,
    scratch: Vec<SlotId>,
}

impl<'a> GllMachine<'a> {
    pub fn new(graph: &'a Graph, grammar: &'a Grammar, table: &'a ParseTable, order: WorklistOrder) -> Self {
        let label_term = graph.labels().iter().map(|l| grammar.terminal_id(l)).collect();
        let term_label = grammar.terminals().iter().map(|t| graph.label_id(t)).collect();
        GllMachine {
            grammar,
            graph,
            table,
            label_term,
            term_label,
            gss: Gss::new(),
            sppf: Sppf::new(),
            pending: VecDeque::new(),
            created: HashSet::new(),
            history: Vec::new(),
            order,
            stats: EngineStats::default(),
            scratch: Vec::new(),
        }
    }

    pub fn gss(&self) -> &Gss {
        &self.gss
    }

    pub fn sppf(&self) -> &Sppf {
        &self.sppf
    }

    pub fn stats(&self) -> EngineStats {
        self.stats
    }

    pub fn pending(&self) -> usize {
        self.pending.len()
    }

    /// All descriptors created so far, in creation order.
    pub fn descriptors(&self) -> &[Descriptor] {
        &self.history
    }

    /// Queues the descriptor unless it was created before.
    pub fn add(&mut self, slot: SlotId, stack: GssId, position: Vertex, node: Option<NodeId>) {
        self.stats.offers += 1;
        let d = Descriptor { slot, stack, position, node };
        if !self.created.insert(d) {
            return;
        }
        if let Some(n) = node {
            let expected = (self.gss.node(stack).index, position);
            if self.sppf.extension(n) != Some(expected) {
                self.stats.lemma_violations += 1;
                debug_assert!(false, "descriptor {d:?} breaks the extension invariant");
            }
        }
        self.stats.descriptors += 1;
        self.history.push(d);
        self.pending.push_back(d);
    }

    /// Returns from the call recorded by `stack`, having derived `z`
    /// ending at `position`.
    pub fn pop(&mut self, stack: GssId, position: Vertex, z: NodeId) {
        let node = self.gss.node(stack);
        let Some(slot) = node.slot else { return };
        if !self.gss.record_pop(stack, z) {
            return;
        }
        let mut i = 0;
        while i < self.gss.node(stack).edges().len() {
            let (label, caller) = self.gss.node(stack).edges()[i];
            let y = self.sppf.get_node_p(self.grammar, slot, label, z);
            self.add(slot, caller, position, Some(y));
            i += 1;
        }
    }

    /// Pushes `return_slot` at `position` on top of `stack`, returning the
    /// (possibly shared) stack node.
    pub fn create(&mut self, return_slot: SlotId, stack: GssId, position: Vertex, node: Option<NodeId>) -> GssId {
        debug_assert!(self.grammar.is_return_slot(return_slot));
        let (v, _) = self.gss.intern(Some(return_slot), position);
        if self.gss.add_edge(v, node, stack) {
            let mut i = 0;
            while i < self.gss.node(v).popped().len() {
                let z = self.gss.node(v).popped()[i];
                let y = self.sppf.get_node_p(self.grammar, return_slot, node, z);
                let (_, k) = self.sppf.extension(z).expect("popped nodes have extensions");
                self.stats.replayed += 1;
                self.add(return_slot, stack, k, Some(y));
                i += 1;
            }
        }
        v
    }

    /// Initial slots of `nt` worth trying at `vertex`.
    fn predict(&mut self, nt: NontermId, vertex: Vertex) -> Vec<SlotId> {
        let mut slots = core::mem::take(&mut self.scratch);
        slots.clear();
        for (label, _) in self.graph.out_labels(vertex) {
            if let Some(t) = self.label_term[label.0 as usize] {
                slots.extend_from_slice(self.table.cell(nt, t));
            }
        }
        slots.extend_from_slice(self.table.nullable_alternatives(nt));
        slots.sort_unstable();
        slots.dedup();
        slots
    }

    /// Seeds the worklist with the start symbol's alternatives at `vertex`.
    pub fn seed(&mut self, vertex: Vertex) {
        let bottom = self.gss.bottom(vertex);
        let slots = self.predict(self.grammar.start(), vertex);
        for &s in &slots {
            self.add(s, bottom, vertex, None);
        }
        self.scratch = slots;
    }

    /// Processes one pending descriptor; false once the worklist is empty.
    pub fn step(&mut self) -> bool {
        let next = match self.order {
            WorklistOrder::Lifo => self.pending.pop_back(),
            WorklistOrder::Fifo => self.pending.pop_front(),
        };
        let Some(d) = next else { return false };
        self.stats.dispatched += 1;
        self.process(d);
        true
    }

    pub fn run(&mut self) {
        while self.step() {}
    }

    fn process(&mut self, d: Descriptor) {
        let Descriptor { slot, stack, position, node } = d;
        match self.grammar.symbol_after(slot) {
            Some(Symbol::Terminal(x)) => {
                let Some(label) = self.term_label[x.0 as usize] else { return };
                let next = self.grammar.advance(slot);
                let targets = self.graph.targets(position, label);
                for &target in targets {
                    let right = self.sppf.get_node_t(Edge::new(position, label, target));
                    let y = self.sppf.get_node_p(self.grammar, next, node, right);
                    self.add(next, stack, target, Some(y));
                }
            }
            Some(Symbol::Nonterminal(x)) => {
                let callee = self.create(self.grammar.advance(slot), stack, position, node);
                let slots = self.predict(x, position);
                for &s in &slots {
                    self.add(s, callee, position, None);
                }
                self.scratch = slots;
            }
            None => {
                let z = match node {
                    Some(z) => z,
                    None => {
                        // only an empty rule ends with nothing consumed
                        debug_assert_eq!(self.grammar.slot_dot(slot), 0);
                        let eps = self.sppf.get_epsilon(position);
                        self.sppf.get_node_p(self.grammar, slot, None, eps)
                    }
                };
                self.pop(stack, position, z);
            }
        }
    }

    pub fn into_parts(self) -> (Sppf, Gss, Vec<Descriptor>, EngineStats) {
        (self.sppf, self.gss, self.history, self.stats)
    }
}

/// Builder for one query execution.
pub struct Query<'a> {
    graph: &'a Graph,
    grammar: &'a Grammar,
    table: Option<&'a ParseTable>,
    starts: Option<Vec<Vertex>>,
    finals: Option<Vec<Vertex>>,
    order: WorklistOrder,
    lookahead: Lookahead,
}

impl<'a> Query<'a> {
    /// A query from all vertices to all vertices.
    pub fn new(graph: &'a Graph, grammar: &'a Grammar) -> Self {
        Query {
            graph,
            grammar,
            table: None,
            starts: None,
            finals: None,
            order: WorklistOrder::Lifo,
            lookahead: Lookahead::Table,
        }
    }

    /// Restricts the start vertices. Vertices outside the graph are ignored.
    pub fn starts(mut self, starts: impl IntoIterator<Item = Vertex>) -> Self {
        self.starts = Some(starts.into_iter().collect());
        self
    }

    /// Restricts the final vertices. Vertices outside the graph are ignored.
    pub fn finals(mut self, finals: impl IntoIterator<Item = Vertex>) -> Self {
        self.finals = Some(finals.into_iter().collect());
        self
    }

    pub fn order(mut self, order: WorklistOrder) -> Self {
        self.order = order;
        self
    }

    pub fn lookahead(mut self, lookahead: Lookahead) -> Self {
        self.lookahead = lookahead;
        self
    }

    /// Reuses a prebuilt table; it must have been built for this grammar.
    pub fn table(mut self, table: &'a ParseTable) -> Self {
        self.table = Some(table);
        self
    }

    pub fn run(self) -> QueryResult<'a> {
        let n = self.graph.vertex_count() as Vertex;
        let normalize = |set: Option<Vec<Vertex>>| -> Vec<Vertex> {
            let mut v: Vec<Vertex> = match set {
                Some(v) => v.into_iter().filter(|&x| x < n).collect(),
                None => (0..n).collect(),
            };
            v.sort_unstable();
            v.dedup();
            v
        };
        let starts = normalize(self.starts);
        let finals = normalize(self.finals);

        let owned;
        let table = match (self.table, self.lookahead) {
            (Some(t), _) => t,
            (None, Lookahead::Table) => {
                owned = ParseTable::build(self.grammar);
                &owned
            }
            (None, Lookahead::Off) => {
                owned = ParseTable::without_lookahead(self.grammar);
                &owned
            }
        };

        let mut machine = GllMachine::new(self.graph, self.grammar, table, self.order);
        for &s in &starts {
            machine.seed(s);
        }
        machine.run();
        let (sppf, gss, descriptors, stats) = machine.into_parts();
        QueryResult::new(self.graph, self.grammar, sppf, gss, descriptors, stats, starts, finals)
    }
}
