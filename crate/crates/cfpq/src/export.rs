//! DOT and JSON renderings of a forest.
//!
//! JSON layout:
//!
//! ```json
//! {
//!   "nodes": [
//!     {"id": 0, "kind": "terminal", "label": "a", "extension": [0, 1]},
//!     {"id": 4, "kind": "nonterminal", "label": "S", "extension": [0, 3], "ambiguous": true},
//!     {"id": 5, "kind": "packed", "label": "S -> a S . b", "pivot": 2}
//!   ],
//!   "edges": [[4, 5], [5, 0]],
//!   "roots": [4]
//! }
//! ```
//!
//! Packed nodes carry `label` and `pivot` only in verbose mode. Edges are
//! listed parent by parent, children in order.

use std::collections::HashSet;
use std::fmt::Write;
use std::path::Path;

use cfpq_core::sppf::{NodeKind, SppfNode, SppfStats};
use cfpq_core::{NodeId, QueryResult};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ExportError {
    #[error("unknown forest format `{0}` (expected dot or json)")]
    UnknownFormat(String),
    #[error("unknown node kind `{0}`")]
    UnknownKind(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Dot,
    Json,
}

impl Format {
    pub fn parse(name: &str) -> Result<Self, ExportError> {
        match name.to_ascii_lowercase().as_str() {
            "dot" | "gv" => Ok(Format::Dot),
            "json" => Ok(Format::Json),
            _ => Err(ExportError::UnknownFormat(name.to_string())),
        }
    }

    /// Format named by a file extension.
    pub fn from_path(path: &Path) -> Result<Self, ExportError> {
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        Format::parse(ext)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    /// Label packed nodes with their slot and pivot.
    pub verbose: bool,
    /// Drop packed nodes that are the only child of their parent.
    pub simplify: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonNode {
    pub id: u32,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pivot: Option<u32>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub ambiguous: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonForest {
    pub nodes: Vec<JsonNode>,
    pub edges: Vec<[u32; 2]>,
    pub roots: Vec<u32>,
}

impl JsonForest {
    pub fn from_json(text: &str) -> Result<Self, ExportError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Node and edge counts of the document, comparable with
    /// [`Sppf::stats`](cfpq_core::Sppf::stats) for unsimplified exports.
    pub fn stats(&self) -> Result<SppfStats, ExportError> {
        let mut stats = SppfStats::default();
        let mut children = std::collections::HashMap::<u32, usize>::new();
        for [parent, _] in &self.edges {
            *children.entry(*parent).or_default() += 1;
        }
        for n in &self.nodes {
            let kind = NodeKind::ALL
                .into_iter()
                .find(|k| k.as_str() == n.kind)
                .ok_or_else(|| ExportError::UnknownKind(n.kind.clone()))?;
            stats.record(kind, children.get(&n.id).copied().unwrap_or(0));
        }
        Ok(stats)
    }
}

struct View<'r, 'a> {
    result: &'r QueryResult<'a>,
    options: Options,
    dropped: HashSet<NodeId>,
}

impl<'r, 'a> View<'r, 'a> {
    fn new(result: &'r QueryResult<'a>, options: Options) -> Self {
        let mut dropped = HashSet::new();
        if options.simplify {
            for (_, node) in result.sppf().nodes() {
                if let SppfNode::Nonterminal { packed, .. } | SppfNode::Intermediate { packed, .. } = node {
                    if let [only] = packed.as_slice() {
                        dropped.insert(*only);
                    }
                }
            }
        }
        View { result, options, dropped }
    }

    fn nodes(&self) -> impl Iterator<Item = (NodeId, &'r SppfNode)> + '_ {
        self.result.sppf().nodes().filter(|(id, _)| !self.dropped.contains(id))
    }

    fn children(&self, node: &SppfNode) -> Vec<NodeId> {
        let mut out = Vec::new();
        for c in node.children() {
            if self.dropped.contains(&c) {
                out.extend(self.result.sppf().node(c).children());
            } else {
                out.push(c);
            }
        }
        out
    }

    fn vertex(&self, v: u32) -> String {
        self.result.graph().vertex_name(v)
    }

    fn label(&self, node: &SppfNode) -> Option<String> {
        let grammar = self.result.grammar();
        let graph = self.result.graph();
        match node {
            SppfNode::Terminal { edge } => Some(graph.label_name(edge.label).to_string()),
            SppfNode::Epsilon { .. } => Some("eps".to_string()),
            SppfNode::Nonterminal { nt, .. } => Some(grammar.nonterminal_name(*nt).to_string()),
            SppfNode::Intermediate { slot, .. } => Some(grammar.display_slot(*slot).to_string()),
            SppfNode::Packed { slot, .. } => self.options.verbose.then(|| grammar.display_slot(*slot).to_string()),
        }
    }
}

pub fn to_json(result: &QueryResult<'_>, options: Options) -> JsonForest {
    let view = View::new(result, options);
    let mut doc = JsonForest::default();
    for (id, node) in view.nodes() {
        doc.nodes.push(JsonNode {
            id: id.0,
            kind: node.kind().as_str().to_string(),
            label: view.label(node),
            extension: node.extension().map(|(l, r)| [l, r]),
            pivot: match node {
                SppfNode::Packed { pivot, .. } if options.verbose => Some(*pivot),
                _ => None,
            },
            ambiguous: node.is_ambiguous(),
        });
        for c in view.children(node) {
            doc.edges.push([id.0, c.0]);
        }
    }
    doc.roots = result.roots().iter().map(|r| r.0).collect();
    doc
}

pub fn to_json_string(result: &QueryResult<'_>, options: Options) -> String {
    let mut s = serde_json::to_string_pretty(&to_json(result, options)).expect("forest documents serialize");
    s.push('\n');
    s
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn to_dot(result: &QueryResult<'_>, options: Options) -> String {
    let view = View::new(result, options);
    let roots: HashSet<NodeId> = result.roots().iter().copied().collect();
    let mut out = String::from("digraph sppf {\n    node [fontname=\"monospace\"];\n");
    for (id, node) in view.nodes() {
        let label = match (node.extension(), view.label(node)) {
            (Some((l, r)), Some(lbl)) => format!("({}, {}, {})", view.vertex(l), lbl, view.vertex(r)),
            (None, Some(lbl)) => match node {
                SppfNode::Packed { pivot, .. } => format!("{lbl}, {}", view.vertex(*pivot)),
                _ => lbl,
            },
            (_, None) => String::new(),
        };
        let mut attrs = match node.kind() {
            NodeKind::Terminal | NodeKind::Epsilon | NodeKind::Intermediate => "shape=box".to_string(),
            NodeKind::Nonterminal => "shape=ellipse".to_string(),
            NodeKind::Packed if options.verbose => "shape=circle, fontsize=8".to_string(),
            NodeKind::Packed => "shape=point".to_string(),
        };
        if node.is_ambiguous() {
            attrs.push_str(", style=filled, fillcolor=lightgrey");
        }
        if roots.contains(&id) {
            attrs.push_str(", peripheries=2");
        }
        writeln!(out, "    n{} [label=\"{}\", {attrs}];", id.0, escape(&label)).unwrap();
    }
    for (id, node) in view.nodes() {
        for c in view.children(node) {
            writeln!(out, "    n{} -> n{};", id.0, c.0).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

pub fn render(result: &QueryResult<'_>, format: Format, options: Options) -> String {
    match format {
        Format::Dot => to_dot(result, options),
        Format::Json => to_json_string(result, options),
    }
}
