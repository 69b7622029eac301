//! Binarized shared packed parse forest.
//!
//! Non-packed nodes are interned on (label, extension), where the extension
//! is the pair of graph vertices the node spans. Packed nodes hang below a
//! nonterminal or intermediate parent and are unique per (slot, pivot)
//! within that parent; each has a right child and an optional left child.

use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};

use crate::grammar::{Grammar, NontermId, SlotId, Symbol};
use crate::graph::{Edge, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Terminal,
    Epsilon,
    Nonterminal,
    Intermediate,
    Packed,
}

impl NodeKind {
    pub const ALL: [NodeKind; 5] = [
        NodeKind::Terminal,
        NodeKind::Epsilon,
        NodeKind::Nonterminal,
        NodeKind::Intermediate,
        NodeKind::Packed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Terminal => "terminal",
            NodeKind::Epsilon => "epsilon",
            NodeKind::Nonterminal => "nonterminal",
            NodeKind::Intermediate => "intermediate",
            NodeKind::Packed => "packed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SppfNode {
    Terminal {
        edge: Edge,
    },
    Epsilon {
        vertex: Vertex,
    },
    Nonterminal {
        nt: NontermId,
        left: Vertex,
        right: Vertex,
        packed: Vec<NodeId>,
    },
    Intermediate {
        slot: SlotId,
        left: Vertex,
        right: Vertex,
        packed: Vec<NodeId>,
    },
    Packed {
        slot: SlotId,
        pivot: Vertex,
        left: Option<NodeId>,
        right: NodeId,
    },
}

impl SppfNode {
    pub fn kind(&self) -> NodeKind {
        match self {
            SppfNode::Terminal { .. } => NodeKind::Terminal,
            SppfNode::Epsilon { .. } => NodeKind::Epsilon,
            SppfNode::Nonterminal { .. } => NodeKind::Nonterminal,
            SppfNode::Intermediate { .. } => NodeKind::Intermediate,
            SppfNode::Packed { .. } => NodeKind::Packed,
        }
    }

    /// `(left, right)` vertices spanned; `None` for packed nodes.
    pub fn extension(&self) -> Option<(Vertex, Vertex)> {
        match *self {
            SppfNode::Terminal { edge } => Some((edge.source, edge.target)),
            SppfNode::Epsilon { vertex } => Some((vertex, vertex)),
            SppfNode::Nonterminal { left, right, .. } | SppfNode::Intermediate { left, right, .. } => {
                Some((left, right))
            }
            SppfNode::Packed { .. } => None,
        }
    }

    /// Children in left-to-right order.
    pub fn children(&self) -> impl Iterator<Item = NodeId> + '_ {
        let (packed, pair): (&[NodeId], [Option<NodeId>; 2]) = match self {
            SppfNode::Nonterminal { packed, .. } | SppfNode::Intermediate { packed, .. } => {
                (packed, [None, None])
            }
            SppfNode::Packed { left, right, .. } => (&[], [*left, Some(*right)]),
            _ => (&[], [None, None]),
        };
        packed.iter().copied().chain(pair.into_iter().flatten())
    }

    pub fn is_ambiguous(&self) -> bool {
        matches!(self, SppfNode::Nonterminal { packed, .. } | SppfNode::Intermediate { packed, .. } if packed.len() >= 2)
    }
}

/// Label + extension identity of a node, independent of arena order.
/// Used to compare forests built by different runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKey {
    Terminal(Edge),
    Epsilon(Vertex),
    Nonterminal(NontermId, Vertex, Vertex),
    Intermediate(SlotId, Vertex, Vertex),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum SymbolLabel {
    Nonterminal(NontermId),
    Slot(SlotId),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct SppfStats {
    pub terminal: usize,
    pub epsilon: usize,
    pub nonterminal: usize,
    pub intermediate: usize,
    pub packed: usize,
    pub nodes: usize,
    pub edges: usize,
}

impl SppfStats {
    pub fn count(&self, kind: NodeKind) -> usize {
        match kind {
            NodeKind::Terminal => self.terminal,
            NodeKind::Epsilon => self.epsilon,
            NodeKind::Nonterminal => self.nonterminal,
            NodeKind::Intermediate => self.intermediate,
            NodeKind::Packed => self.packed,
        }
    }

    pub fn record(&mut self, kind: NodeKind, children: usize) {
        match kind {
            NodeKind::Terminal => self.terminal += 1,
            NodeKind::Epsilon => self.epsilon += 1,
            NodeKind::Nonterminal => self.nonterminal += 1,
            NodeKind::Intermediate => self.intermediate += 1,
            NodeKind::Packed => self.packed += 1,
        }
        self.nodes += 1;
        self.edges += children;
    }
}

#[derive(Clone, Debug, Default)]
pub struct Sppf {
    nodes: Vec<SppfNode>,
    terminals: HashMap<Edge, NodeId>,
    epsilons: HashMap<Vertex, NodeId>,
    symbols: HashMap<(SymbolLabel, Vertex, Vertex), NodeId>,
    packed: HashSet<(NodeId, SlotId, Vertex)>,
    stats: SppfStats,
}

impl Sppf {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &SppfNode {
        &self.nodes[id.0 as usize]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &SppfNode)> + '_ {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeId(i as u32), n))
    }

    pub fn extension(&self, id: NodeId) -> Option<(Vertex, Vertex)> {
        self.node(id).extension()
    }

    pub fn stats(&self) -> SppfStats {
        self.stats
    }

    pub fn key(&self, id: NodeId) -> Option<NodeKey> {
        match *self.node(id) {
            SppfNode::Terminal { edge } => Some(NodeKey::Terminal(edge)),
            SppfNode::Epsilon { vertex } => Some(NodeKey::Epsilon(vertex)),
            SppfNode::Nonterminal { nt, left, right, .. } => Some(NodeKey::Nonterminal(nt, left, right)),
            SppfNode::Intermediate { slot, left, right, .. } => Some(NodeKey::Intermediate(slot, left, right)),
            SppfNode::Packed { .. } => None,
        }
    }

    pub fn find_nonterminal(&self, nt: NontermId, left: Vertex, right: Vertex) -> Option<NodeId> {
        self.symbols.get(&(SymbolLabel::Nonterminal(nt), left, right)).copied()
    }

    /// Nonterminal nodes labeled `nt`, in creation order.
    pub fn nonterminal_nodes(&self, nt: NontermId) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes().filter_map(move |(id, n)| match n {
            SppfNode::Nonterminal { nt: m, .. } if *m == nt => Some(id),
            _ => None,
        })
    }

    fn push(&mut self, node: SppfNode) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        let children = node.children().count();
        self.stats.record(node.kind(), children);
        self.nodes.push(node);
        id
    }

    /// Terminal node for a graph edge.
    pub fn get_node_t(&mut self, edge: Edge) -> NodeId {
        if let Some(&id) = self.terminals.get(&edge) {
            return id;
        }
        let id = self.push(SppfNode::Terminal { edge });
        self.terminals.insert(edge, id);
        id
    }

    /// ε node `(v, ε, v)`.
    pub fn get_epsilon(&mut self, vertex: Vertex) -> NodeId {
        if let Some(&id) = self.epsilons.get(&vertex) {
            return id;
        }
        let id = self.push(SppfNode::Epsilon { vertex });
        self.epsilons.insert(vertex, id);
        id
    }

    /// Combines the node for the part of a rule before its last consumed
    /// symbol (`left`, or `None` if nothing precedes it) with the node for
    /// that symbol (`right`) under `slot`, whose dot sits just after it.
    ///
    /// When `slot` is `A -> x · β` with `x` a terminal or non-nullable
    /// nonterminal and `β` non-empty, no binarization node is needed and
    /// `right` is returned. Otherwise the parent (a nonterminal node for an
    /// end slot, else an intermediate node labeled with `slot`) is found or
    /// created, and the packed child `(slot, pivot)` is added if missing.
    pub fn get_node_p(&mut self, grammar: &Grammar, slot: SlotId, left: Option<NodeId>, right: NodeId) -> NodeId {
        let dot = grammar.slot_dot(slot);
        let at_end = grammar.is_end_slot(slot);
        if dot == 1 && !at_end {
            let single = match grammar.symbol_before(slot) {
                Some(Symbol::Terminal(_)) => true,
                Some(Symbol::Nonterminal(n)) => !grammar.is_nullable(n),
                None => false,
            };
            if single {
                return right;
            }
        }

        let (pivot, end) = self.extension(right).expect("right child of a packed node has an extension");
        let start = match left {
            Some(l) => {
                let (s, mid) = self.extension(l).expect("left child of a packed node has an extension");
                debug_assert_eq!(mid, pivot, "children of a packed node must be adjacent");
                s
            }
            None => pivot,
        };
        let label = if at_end {
            SymbolLabel::Nonterminal(grammar.slot_lhs(slot))
        } else {
            SymbolLabel::Slot(slot)
        };

        let parent = match self.symbols.get(&(label, start, end)) {
            Some(&id) => id,
            None => {
                let node = match label {
                    SymbolLabel::Nonterminal(nt) => SppfNode::Nonterminal { nt, left: start, right: end, packed: Vec::new() },
                    SymbolLabel::Slot(slot) => SppfNode::Intermediate { slot, left: start, right: end, packed: Vec::new() },
                };
                let id = self.push(node);
                self.symbols.insert((label, start, end), id);
                id
            }
        };

        if self.packed.insert((parent, slot, pivot)) {
            let packed = self.push(SppfNode::Packed { slot, pivot, left, right });
            match &mut self.nodes[parent.0 as usize] {
                SppfNode::Nonterminal { packed: children, .. } | SppfNode::Intermediate { packed: children, .. } => {
                    children.push(packed)
                }
                _ => unreachable!(),
            }
            self.stats.edges += 1;
        }
        parent
    }

    /// Node ids reachable from `roots`, each once, in depth-first preorder.
    pub fn reachable_from(&self, roots: &[NodeId]) -> Vec<NodeId> {
        let mut seen = alloc::vec![false; self.nodes.len()];
        let mut order = Vec::new();
        let mut stack: Vec<NodeId> = roots.iter().rev().copied().collect();
        while let Some(id) = stack.pop() {
            if core::mem::replace(&mut seen[id.0 as usize], true) {
                continue;
            }
            order.push(id);
            let children: Vec<NodeId> = self.node(id).children().collect();
            stack.extend(children.into_iter().rev());
        }
        order
    }
}
