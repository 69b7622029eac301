//! Graph-structured stack.
//!
//! Nodes are interned on (return slot, vertex). A bottom node per start
//! vertex carries the synthetic accept slot (`slot == None`); popping it is
//! a no-op. Edges carry the SPPF node built before the call (or the dummy).
//! Each node also keeps the set of forest nodes it has been popped with, so
//! callers that attach later can be replayed.

use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};

use crate::grammar::SlotId;
use crate::graph::Vertex;
use crate::sppf::NodeId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GssId(pub u32);

#[derive(Clone, Debug)]
pub struct GssNode {
    /// Return slot, or `None` for a bottom (accept) node.
    pub slot: Option<SlotId>,
    pub index: Vertex,
    edges: Vec<(Option<NodeId>, GssId)>,
    popped: Vec<NodeId>,
}

impl GssNode {
    pub fn is_bottom(&self) -> bool {
        self.slot.is_none()
    }

    pub fn edges(&self) -> &[(Option<NodeId>, GssId)] {
        &self.edges
    }

    pub fn popped(&self) -> &[NodeId] {
        &self.popped
    }
}

#[derive(Clone, Debug, Default)]
pub struct Gss {
    nodes: Vec<GssNode>,
    index: HashMap<(Option<SlotId>, Vertex), GssId>,
    edge_set: HashSet<(GssId, Option<NodeId>, GssId)>,
    popped_set: HashSet<(GssId, NodeId)>,
}

impl Gss {
    pub fn new() -> Self {
        Self::default()
    }

    /// Interned node for `(slot, index)`; the flag is true if it was created.
    pub fn intern(&mut self, slot: Option<SlotId>, index: Vertex) -> (GssId, bool) {
        if let Some(&id) = self.index.get(&(slot, index)) {
            return (id, false);
        }
        let id = GssId(self.nodes.len() as u32);
        self.nodes.push(GssNode { slot, index, edges: Vec::new(), popped: Vec::new() });
        self.index.insert((slot, index), id);
        (id, true)
    }

    pub fn bottom(&mut self, index: Vertex) -> GssId {
        self.intern(None, index).0
    }

    pub fn get(&self, slot: Option<SlotId>, index: Vertex) -> Option<GssId> {
        self.index.get(&(slot, index)).copied()
    }

    pub fn node(&self, id: GssId) -> &GssNode {
        &self.nodes[id.0 as usize]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (GssId, &GssNode)> + '_ {
        self.nodes.iter().enumerate().map(|(i, n)| (GssId(i as u32), n))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_set.len()
    }

    pub fn popped_count(&self) -> usize {
        self.popped_set.len()
    }

    /// Adds `from --label--> to`; false if it already existed.
    pub fn add_edge(&mut self, from: GssId, label: Option<NodeId>, to: GssId) -> bool {
        if !self.edge_set.insert((from, label, to)) {
            return false;
        }
        self.nodes[from.0 as usize].edges.push((label, to));
        true
    }

    /// Records that `node` was popped with forest node `z`; false if known.
    pub fn record_pop(&mut self, node: GssId, z: NodeId) -> bool {
        if !self.popped_set.insert((node, z)) {
            return false;
        }
        self.nodes[node.0 as usize].popped.push(z);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_are_interned() {
        let mut gss = Gss::new();
        let (a, fresh) = gss.intern(Some(SlotId(2)), 5);
        assert!(fresh);
        let (b, fresh) = gss.intern(Some(SlotId(2)), 5);
        assert!(!fresh);
        assert_eq!(a, b);
        let bottom = gss.bottom(5);
        assert_ne!(bottom, a);
        assert!(gss.node(bottom).is_bottom());
        assert_eq!(gss.len(), 2);
    }

    #[test]
    fn edges_and_pops_dedup() {
        let mut gss = Gss::new();
        let u = gss.bottom(0);
        let (v, _) = gss.intern(Some(SlotId(1)), 0);
        assert!(gss.add_edge(v, None, u));
        assert!(!gss.add_edge(v, None, u));
        assert!(gss.add_edge(v, Some(NodeId(3)), u));
        assert_eq!(gss.node(v).edges().len(), 2);
        assert_eq!(gss.edge_count(), 2);
        assert!(gss.record_pop(v, NodeId(7)));
        assert!(!gss.record_pop(v, NodeId(7)));
        assert_eq!(gss.node(v).popped(), [NodeId(7)]);
    }
}
