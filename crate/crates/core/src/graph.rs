//! Edge-labeled directed graphs and paths over them.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;

/// Dense vertex index.
pub type Vertex = u32;

/// Interned edge label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: Vertex,
    pub label: LabelId,
    pub target: Vertex,
}

impl Edge {
    pub fn new(source: Vertex, label: LabelId, target: Vertex) -> Self {
        Edge { source, label, target }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("complete graph needs at least one label")]
    EmptyAlphabet,
    #[error("complete graph needs at least one vertex")]
    NoVertices,
}

/// A directed graph with labeled edges and no parallel edges carrying the
/// same label.
///
/// Vertices are dense integers `0..vertex_count()`. Loaders that read
/// symbolic vertex names keep them in a side table (see
/// [`Graph::set_vertex_names`]).
#[derive(Clone, Debug, Default)]
pub struct Graph {
    vertex_count: usize,
    labels: Vec<String>,
    label_index: HashMap<String, LabelId>,
    // per vertex, sorted by label; targets sorted and unique
    out: Vec<Vec<(LabelId, Vec<Vertex>)>>,
    edge_count: usize,
    names: Vec<String>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        g.ensure_vertex_count(n);
        g
    }

    /// Complete graph on `n` vertices: an edge for every label between every
    /// ordered pair of distinct vertices, plus self-loops if `with_loops`.
    pub fn complete<S: AsRef<str>>(n: usize, alphabet: &[S], with_loops: bool) -> Result<Self, GraphError> {
        if alphabet.is_empty() {
            return Err(GraphError::EmptyAlphabet);
        }
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut g = Graph::with_vertices(n);
        let labels: Vec<LabelId> = alphabet.iter().map(|a| g.intern_label(a.as_ref())).collect();
        for u in 0..n as Vertex {
            for v in 0..n as Vertex {
                if u == v && !with_loops {
                    continue;
                }
                for &l in &labels {
                    g.add_edge(u, l, v);
                }
            }
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn ensure_vertex_count(&mut self, n: usize) {
        if n > self.vertex_count {
            self.vertex_count = n;
            self.out.resize_with(n, Vec::new);
        }
    }

    pub fn intern_label(&mut self, name: &str) -> LabelId {
        if let Some(&id) = self.label_index.get(name) {
            return id;
        }
        let id = LabelId(self.labels.len() as u32);
        self.labels.push(name.to_string());
        self.label_index.insert(name.to_string(), id);
        id
    }

    pub fn label_id(&self, name: &str) -> Option<LabelId> {
        self.label_index.get(name).copied()
    }

    pub fn label_name(&self, l: LabelId) -> &str {
        &self.labels[l.0 as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Adds `(source, label, target)`, creating vertices on demand.
    /// Returns `false` if the edge was already present.
    pub fn add_edge(&mut self, source: Vertex, label: LabelId, target: Vertex) -> bool {
        assert!((label.0 as usize) < self.labels.len(), "label {label:?} is not interned");
        self.ensure_vertex_count(source.max(target) as usize + 1);
        let row = &mut self.out[source as usize];
        let targets = match row.binary_search_by_key(&label, |(l, _)| *l) {
            Ok(i) => &mut row[i].1,
            Err(i) => {
                row.insert(i, (label, Vec::new()));
                &mut row[i].1
            }
        };
        match targets.binary_search(&target) {
            Ok(_) => false,
            Err(i) => {
                targets.insert(i, target);
                self.edge_count += 1;
                true
            }
        }
    }

    pub fn add_edge_named(&mut self, source: Vertex, label: &str, target: Vertex) -> bool {
        let l = self.intern_label(label);
        self.add_edge(source, l, target)
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.targets(e.source, e.label).binary_search(&e.target).is_ok()
    }

    /// Outgoing edges of `v` grouped by label, labels ascending.
    pub fn out_labels(&self, v: Vertex) -> impl Iterator<Item = (LabelId, &[Vertex])> + '_ {
        self.out
            .get(v as usize)
            .into_iter()
            .flatten()
            .map(|(l, ts)| (*l, ts.as_slice()))
    }

    pub fn targets(&self, v: Vertex, label: LabelId) -> &[Vertex] {
        let Some(row) = self.out.get(v as usize) else { return &[] };
        match row.binary_search_by_key(&label, |(l, _)| *l) {
            Ok(i) => &row[i].1,
            Err(_) => &[],
        }
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.out_labels(v).map(|(_, ts)| ts.len()).sum()
    }

    pub fn max_out_degree(&self) -> usize {
        (0..self.vertex_count as Vertex).map(|v| self.out_degree(v)).max().unwrap_or(0)
    }

    /// All edges ordered by (source, label, target).
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.out.iter().enumerate().flat_map(|(u, row)| {
            row.iter().flat_map(move |(l, ts)| {
                ts.iter().map(move |&t| Edge::new(u as Vertex, *l, t))
            })
        })
    }

    /// Attaches external vertex names; `names[v]` names vertex `v`.
    pub fn set_vertex_names(&mut self, names: Vec<String>) {
        self.ensure_vertex_count(names.len());
        self.names = names;
    }

    pub fn has_vertex_names(&self) -> bool {
        !self.names.is_empty()
    }

    pub fn vertex_name(&self, v: Vertex) -> String {
        match self.names.get(v as usize) {
            Some(n) => n.clone(),
            None => v.to_string(),
        }
    }

    /// Resolves an external vertex name, falling back to a numeric id when
    /// the graph has no name table.
    pub fn vertex_by_name(&self, name: &str) -> Option<Vertex> {
        if self.names.is_empty() {
            name.parse::<Vertex>().ok().filter(|&v| (v as usize) < self.vertex_count)
        } else {
            self.names.iter().position(|n| n == name).map(|v| v as Vertex)
        }
    }

    /// An empty graph sharing this graph's vertices, names and labels.
    pub fn empty_like(&self) -> Graph {
        let mut g = Graph::with_vertices(self.vertex_count);
        for l in &self.labels {
            g.intern_label(l);
        }
        g.names = self.names.clone();
        g
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("a path has at least one edge")]
    Empty,
    #[error("edge {0} does not start where the previous edge ends")]
    NotIncident(usize),
}

/// A non-empty sequence of incident edges.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    edges: Vec<Edge>,
}

impl Path {
    pub fn new(edges: Vec<Edge>) -> Result<Self, PathError> {
        if edges.is_empty() {
            return Err(PathError::Empty);
        }
        if let Some(i) = edges.windows(2).position(|w| w[0].target != w[1].source) {
            return Err(PathError::NotIncident(i + 1));
        }
        Ok(Path { edges })
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn start(&self) -> Vertex {
        self.edges[0].source
    }

    pub fn end(&self) -> Vertex {
        self.edges[self.edges.len() - 1].target
    }

    /// The label word spelled by the path.
    pub fn word(&self) -> Vec<LabelId> {
        self.edges.iter().map(|e| e.label).collect()
    }

    /// Renders as `v0 -l0-> v1 -l1-> v2 ...`.
    pub fn display<'a>(&'a self, graph: &'a Graph) -> PathDisplay<'a> {
        PathDisplay { path: self, graph }
    }
}

pub struct PathDisplay<'a> {
    path: &'a Path,
    graph: &'a Graph,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.graph.vertex_name(self.path.start()))?;
        for e in &self.path.edges {
            write!(f, " -{}-> {}", self.graph.label_name(e.label), self.graph.vertex_name(e.target))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use std::format;

    fn school() -> Graph {
        let mut g = Graph::new();
        for (u, l, v) in [(0, "a", 1), (1, "a", 2), (2, "a", 0), (0, "b", 3), (3, "b", 0)] {
            g.add_edge_named(u, l, v);
        }
        g
    }

    #[test]
    fn add_edge_dedups() {
        let mut g = Graph::new();
        assert!(g.add_edge_named(0, "a", 1));
        assert!(!g.add_edge_named(0, "a", 1));
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.vertex_count(), 2);
        assert!(g.add_edge_named(0, "b", 1));
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn example_paths_cover_five_edges() {
        let mut g = Graph::new();
        let p0 = [(0, "a", 1), (1, "a", 2), (2, "a", 0), (0, "b", 3), (3, "b", 0), (0, "b", 3)];
        for (u, l, v) in p0 {
            g.add_edge_named(u, l, v);
        }
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g.vertex_count(), 4);
        let a = g.label_id("a").unwrap();
        let b = g.label_id("b").unwrap();
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(
            edges,
            [
                Edge::new(0, a, 1),
                Edge::new(0, b, 3),
                Edge::new(1, a, 2),
                Edge::new(2, a, 0),
                Edge::new(3, b, 0)
            ]
        );
    }

    #[test]
    fn out_index_matches_edges() {
        let g = school();
        let total: usize = (0..4).map(|v| g.out_degree(v)).sum();
        assert_eq!(total, g.edge_count());
        assert_eq!(g.targets(3, g.label_id("a").unwrap()), &[] as &[Vertex]);
        assert_eq!(g.targets(0, g.label_id("b").unwrap()), [3]);
        assert!(g.has_edge(Edge::new(2, g.label_id("a").unwrap(), 0)));
        assert_eq!(g.targets(99, LabelId(0)), &[] as &[Vertex]);
    }

    #[test]
    fn complete_graph_sizes() {
        let g = Graph::complete(2, &["a"], false).unwrap();
        assert_eq!(g.edges().count(), 2);
        let g = Graph::complete(4, &["a", "b"], false).unwrap();
        assert_eq!(g.edge_count(), 24);
        assert_eq!(g.max_out_degree(), 3 * 2);
        let g = Graph::complete(1, &["a"], false).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.vertex_count(), 1);
        let g = Graph::complete(3, &["a", "b"], true).unwrap();
        assert_eq!(g.edge_count(), 18);
        assert_eq!(Graph::complete::<&str>(3, &[], false).unwrap_err(), GraphError::EmptyAlphabet);
        assert_eq!(Graph::complete(0, &["a"], false).unwrap_err(), GraphError::NoVertices);
    }

    #[test]
    fn path_words() {
        let g = school();
        let a = g.label_id("a").unwrap();
        let b = g.label_id("b").unwrap();
        let p0 = Path::new(vec![
            Edge::new(0, a, 1),
            Edge::new(1, a, 2),
            Edge::new(2, a, 0),
            Edge::new(0, b, 3),
            Edge::new(3, b, 0),
            Edge::new(0, b, 3),
        ])
        .unwrap();
        assert_eq!(p0.word(), [a, a, a, b, b, b]);
        assert_eq!((p0.start(), p0.end(), p0.len()), (0, 3, 6));
        assert_eq!(
            format!("{}", p0.display(&g)),
            "0 -a-> 1 -a-> 2 -a-> 0 -b-> 3 -b-> 0 -b-> 3"
        );
        let single = Path::new(vec![Edge::new(0, a, 1)]).unwrap();
        assert_eq!(single.word(), [a]);
    }

    #[test]
    fn path_validation() {
        assert_eq!(Path::new(vec![]).unwrap_err(), PathError::Empty);
        let l = LabelId(0);
        assert_eq!(
            Path::new(vec![Edge::new(0, l, 1), Edge::new(2, l, 3)]).unwrap_err(),
            PathError::NotIncident(1)
        );
    }

    #[test]
    fn vertex_names() {
        let mut g = school();
        assert_eq!(g.vertex_by_name("3"), Some(3));
        assert_eq!(g.vertex_by_name("4"), None);
        g.set_vertex_names(vec!["w".into(), "x".into(), "y".into(), "z".into()]);
        assert_eq!(g.vertex_name(2), "y");
        assert_eq!(g.vertex_by_name("z"), Some(3));
        assert_eq!(g.vertex_by_name("3"), None);
        let e = g.empty_like();
        assert_eq!(e.edge_count(), 0);
        assert_eq!(e.labels(), g.labels());
        assert_eq!(e.vertex_name(0), "w");
    }
}
