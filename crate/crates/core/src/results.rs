//! Reading answers back out of a finished forest.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::audit::{self, AuditReport};
use crate::engine::{Descriptor, EngineStats};
use crate::grammar::{Grammar, NontermId, SlotId};
use crate::graph::{Edge, Graph, Path, Vertex};
use crate::gss::Gss;
use crate::sppf::{NodeId, NodeKey, Sppf, SppfNode};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResultError {
    #[error("unknown nonterminal `{0}`")]
    UnknownNonterminal(String),
    #[error("path limits must be at least 1")]
    ZeroLimit,
}

/// Descriptor identity that does not depend on arena ids, so runs with
/// different worklist orders can be compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalDescriptor {
    pub slot: SlotId,
    pub stack: (Option<SlotId>, Vertex),
    pub position: Vertex,
    pub node: Option<NodeKey>,
}

/// Outcome of one query: the forest, the stack it was built with, and the
/// accepted roots `(s, S, f)` with `s` a start and `f` a final vertex.
pub struct QueryResult<'a> {
    graph: &'a Graph,
    grammar: &'a Grammar,
    sppf: Sppf,
    gss: Gss,
    descriptors: Vec<Descriptor>,
    stats: EngineStats,
    starts: Vec<Vertex>,
    finals: Vec<Vertex>,
    roots: Vec<NodeId>,
}

impl<'a> QueryResult<'a> {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn new(
        graph: &'a Graph,
        grammar: &'a Grammar,
        sppf: Sppf,
        gss: Gss,
        descriptors: Vec<Descriptor>,
        stats: EngineStats,
        starts: Vec<Vertex>,
        finals: Vec<Vertex>,
    ) -> Self {
        let mut roots: Vec<(Vertex, Vertex, NodeId)> = sppf
            .nonterminal_nodes(grammar.start())
            .filter_map(|id| {
                let (l, r) = sppf.extension(id)?;
                (starts.binary_search(&l).is_ok() && finals.binary_search(&r).is_ok()).then_some((l, r, id))
            })
            .collect();
        roots.sort_unstable();
        let roots = roots.into_iter().map(|(_, _, id)| id).collect();
        QueryResult { graph, grammar, sppf, gss, descriptors, stats, starts, finals, roots }
    }

    pub fn graph(&self) -> &'a Graph {
        self.graph
    }

    pub fn grammar(&self) -> &'a Grammar {
        self.grammar
    }

    pub fn sppf(&self) -> &Sppf {
        &self.sppf
    }

    pub fn gss(&self) -> &Gss {
        &self.gss
    }

    pub fn engine_stats(&self) -> EngineStats {
        self.stats
    }

    pub fn descriptors(&self) -> &[Descriptor] {
        &self.descriptors
    }

    pub fn starts(&self) -> &[Vertex] {
        &self.starts
    }

    pub fn finals(&self) -> &[Vertex] {
        &self.finals
    }

    /// Accepted start-symbol nodes, ordered by extension.
    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    pub fn root_pairs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.roots.iter().filter_map(|&id| self.sppf.extension(id))
    }

    pub fn is_success(&self) -> bool {
        !self.roots.is_empty()
    }

    pub fn canonical_descriptors(&self) -> BTreeSet<CanonicalDescriptor> {
        self.descriptors
            .iter()
            .map(|d| {
                let s = self.gss.node(d.stack);
                CanonicalDescriptor {
                    slot: d.slot,
                    stack: (s.slot, s.index),
                    position: d.position,
                    node: d.node.and_then(|n| self.sppf.key(n)),
                }
            })
            .collect()
    }

    /// Extensions of every forest node labeled `nt`.
    ///
    /// Unlike [`root_pairs`](Self::root_pairs) this is not filtered by the
    /// start and final sets.
    pub fn reachable_pairs(&self, nt: NontermId) -> BTreeSet<(Vertex, Vertex)> {
        self.sppf
            .nonterminal_nodes(nt)
            .filter_map(|id| self.sppf.extension(id))
            .collect()
    }

    pub fn reachable_pairs_named(&self, name: &str) -> Result<BTreeSet<(Vertex, Vertex)>, ResultError> {
        let nt = self
            .grammar
            .nonterminal_id(name)
            .ok_or_else(|| ResultError::UnknownNonterminal(name.to_string()))?;
        Ok(self.reachable_pairs(nt))
    }

    /// Pairs for `nt` to report as query answers. For the start symbol these
    /// are the accepted roots; other nonterminals report every node.
    pub fn answer_pairs(&self, nt: NontermId) -> BTreeSet<(Vertex, Vertex)> {
        if nt == self.grammar.start() {
            self.root_pairs().collect()
        } else {
            self.reachable_pairs(nt)
        }
    }

    /// Paths from `from` to `to` whose words derive from the start symbol,
    /// shortest first and lexicographic within a length.
    pub fn enumerate_paths(&self, from: Vertex, to: Vertex, limits: PathQueryLimits) -> PathIter<'_> {
        let roots = self
            .roots
            .iter()
            .copied()
            .filter(|&id| self.sppf.extension(id) == Some((from, to)))
            .collect();
        PathIter::new(&self.sppf, roots, limits)
    }

    /// Like [`enumerate_paths`](Self::enumerate_paths) but to any final vertex.
    pub fn enumerate_paths_from(&self, from: Vertex, limits: PathQueryLimits) -> PathIter<'_> {
        let roots = self
            .roots
            .iter()
            .copied()
            .filter(|&id| matches!(self.sppf.extension(id), Some((l, _)) if l == from))
            .collect();
        PathIter::new(&self.sppf, roots, limits)
    }

    /// The edges used by at least one accepted path, as a graph over the
    /// same vertices and labels.
    pub fn extract_subgraph(&self) -> Graph {
        let mut sub = self.graph.empty_like();
        for id in self.sppf.reachable_from(&self.roots) {
            if let SppfNode::Terminal { edge } = *self.sppf.node(id) {
                sub.add_edge(edge.source, edge.label, edge.target);
            }
        }
        sub
    }

    /// Checks the size bounds and engine invariants on this run.
    pub fn audit(&self) -> AuditReport {
        audit::audit(self)
    }
}

/// Caps on path enumeration; both must be at least 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathQueryLimits {
    max_paths: usize,
    max_length: usize,
}

impl PathQueryLimits {
    pub fn new(max_paths: usize, max_length: usize) -> Result<Self, ResultError> {
        if max_paths == 0 || max_length == 0 {
            return Err(ResultError::ZeroLimit);
        }
        Ok(PathQueryLimits { max_paths, max_length })
    }

    pub fn max_paths(&self) -> usize {
        self.max_paths
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }
}

type Words = Vec<Vec<Edge>>;

/// Lazy, length-ordered enumeration of the paths below a set of roots.
///
/// The forest may be cyclic (ε-cycles and `A ⇒+ A` through unit rules), so
/// nodes are expanded by length level: level `n` holds, for every node, the
/// `max_paths` smallest edge sequences of length exactly `n` it derives. A
/// level depends on lower levels and, through zero-length siblings, on
/// itself; the self-dependency is solved by iterating to a fixpoint. Keeping
/// only the smallest sequences is exact because concatenation and union
/// both commute with taking the k smallest of equal-length sequences.
pub struct PathIter<'r> {
    sppf: &'r Sppf,
    roots: Vec<usize>,
    nodes: Vec<NodeId>,
    local: HashMap<NodeId, usize>,
    levels: Vec<Vec<Words>>,
    limits: PathQueryLimits,
    buffer: VecDeque<Vec<Edge>>,
    emitted: usize,
}

impl<'r> PathIter<'r> {
    fn new(sppf: &'r Sppf, roots: Vec<NodeId>, limits: PathQueryLimits) -> Self {
        let nodes = sppf.reachable_from(&roots);
        let local: HashMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let roots = roots.iter().map(|r| local[r]).collect();
        let mut it = PathIter {
            sppf,
            roots,
            nodes,
            local,
            levels: Vec::new(),
            limits,
            buffer: VecDeque::new(),
            emitted: 0,
        };
        it.compute_level(); // length 0: never emitted, paths are non-empty
        it
    }

    fn words<'s>(&'s self, node: NodeId, len: usize, current: &'s [Words]) -> &'s Words {
        let i = self.local[&node];
        if len == self.levels.len() {
            &current[i]
        } else {
            &self.levels[len][i]
        }
    }

    fn evaluate(&self, i: usize, len: usize, current: &[Words]) -> Words {
        let k = self.limits.max_paths;
        let mut out: Words = Vec::new();
        match self.sppf.node(self.nodes[i]) {
            SppfNode::Terminal { edge } => {
                if len == 1 {
                    out.push(alloc::vec![*edge]);
                }
            }
            SppfNode::Epsilon { .. } => {
                if len == 0 {
                    out.push(Vec::new());
                }
            }
            SppfNode::Nonterminal { packed, .. } | SppfNode::Intermediate { packed, .. } => {
                for &p in packed {
                    out.extend(self.words(p, len, current).iter().cloned());
                }
            }
            SppfNode::Packed { left, right, .. } => match left {
                None => out.extend(self.words(*right, len, current).iter().cloned()),
                Some(left) => {
                    for l_len in 0..=len {
                        let ls = self.words(*left, l_len, current);
                        if ls.is_empty() {
                            continue;
                        }
                        let rs = self.words(*right, len - l_len, current);
                        for l in ls {
                            for r in rs {
                                let mut w = l.clone();
                                w.extend_from_slice(r);
                                out.push(w);
                            }
                        }
                    }
                }
            },
        }
        out.sort_unstable();
        out.dedup();
        out.truncate(k);
        out
    }

    fn compute_level(&mut self) {
        let len = self.levels.len();
        let mut current: Vec<Words> = alloc::vec![Vec::new(); self.nodes.len()];
        loop {
            let mut changed = false;
            for i in 0..self.nodes.len() {
                let next = self.evaluate(i, len, &current);
                if next != current[i] {
                    current[i] = next;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        self.levels.push(current);
    }
}

impl Iterator for PathIter<'_> {
    type Item = Path;

    fn next(&mut self) -> Option<Path> {
        loop {
            if self.emitted >= self.limits.max_paths {
                return None;
            }
            if let Some(w) = self.buffer.pop_front() {
                self.emitted += 1;
                return Some(Path::new(w).expect("forest yields incident, non-empty edge sequences"));
            }
            if self.roots.is_empty() || self.levels.len() > self.limits.max_length {
                return None;
            }
            self.compute_level();
            let level = self.levels.last().expect("level just computed");
            let mut found: Words = self.roots.iter().flat_map(|&r| level[r].iter().cloned()).collect();
            found.sort_unstable();
            found.dedup();
            self.buffer.extend(found);
        }
    }
}
