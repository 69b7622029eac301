//! Graph loaders: tab-separated edge lists and a subset of N-Triples.

use std::collections::HashMap;
use std::path::Path;

use cfpq_core::{Graph, Vertex};

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: statement is not terminated by `.`")]
    Unterminated { line: usize },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn syntax(line: usize, message: impl Into<String>) -> LoadError {
    LoadError::Syntax { line, message: message.into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GraphFormat {
    Tsv,
    Ntriples,
}

pub const DEFAULT_INVERSE_SUFFIX: &str = "_r";

pub fn read_graph(path: &Path, format: GraphFormat, inverse_suffix: &str) -> Result<Graph, LoadError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| LoadError::Io { path: path.display().to_string(), source })?;
    match format {
        GraphFormat::Tsv => load_tsv(&text),
        GraphFormat::Ntriples => load_ntriples(&text, inverse_suffix),
    }
}

/// Vertex names interned to dense ids in order of first appearance.
#[derive(Default)]
struct Names {
    ids: HashMap<String, Vertex>,
    names: Vec<String>,
}

impl Names {
    fn intern(&mut self, name: &str) -> Vertex {
        if let Some(&v) = self.ids.get(name) {
            return v;
        }
        let v = self.names.len() as Vertex;
        self.ids.insert(name.to_string(), v);
        self.names.push(name.to_string());
        v
    }
}

/// Reads `source<TAB>label<TAB>target` lines. Blank lines and lines
/// starting with `#` are skipped.
///
/// If every vertex token is a non-negative integer the tokens are used as
/// ids directly. Otherwise all tokens are treated as names and numbered in
/// order of first appearance, and the names are kept on the graph.
pub fn load_tsv(text: &str) -> Result<Graph, LoadError> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.trim_end_matches('\r').split('\t').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(syntax(line, format!("expected 3 tab-separated fields, found {}", fields.len())));
        }
        if let Some(pos) = fields.iter().position(|f| f.is_empty()) {
            return Err(syntax(line, format!("field {} is empty", pos + 1)));
        }
        rows.push((fields[0], fields[1], fields[2]));
    }

    let numeric = rows.iter().all(|(u, _, v)| u.parse::<Vertex>().is_ok() && v.parse::<Vertex>().is_ok());
    let mut graph = Graph::new();
    if numeric {
        for (u, l, v) in rows {
            graph.add_edge_named(u.parse().unwrap(), l, v.parse().unwrap());
        }
    } else {
        let mut names = Names::default();
        for (u, l, v) in rows {
            let (u, v) = (names.intern(u), names.intern(v));
            graph.add_edge_named(u, l, v);
        }
        graph.set_vertex_names(names.names);
    }
    Ok(graph)
}

#[derive(Debug, PartialEq, Eq)]
enum Term<'t> {
    Iri(&'t str),
    Blank(&'t str),
    /// Full lexical text including quotes and any tag or datatype.
    Literal(&'t str),
}

struct Cursor<'t> {
    text: &'t str,
    pos: usize,
    line: usize,
}

impl<'t> Cursor<'t> {
    fn rest(&self) -> &'t str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn term(&mut self) -> Result<Term<'t>, LoadError> {
        self.skip_ws();
        let rest = self.rest();
        let start = self.pos;
        match rest.chars().next() {
            Some('<') => {
                let end = rest.find('>').ok_or_else(|| syntax(self.line, "unclosed `<`"))?;
                self.pos += end + 1;
                Ok(Term::Iri(&rest[1..end]))
            }
            Some('_') if rest.starts_with("_:") => {
                let len = rest.find(|c: char| c.is_whitespace()).unwrap_or(rest.len());
                let len = if rest[..len].ends_with('.') && len == rest.len() { len - 1 } else { len };
                if len <= 2 {
                    return Err(syntax(self.line, "empty blank node label"));
                }
                self.pos += len;
                Ok(Term::Blank(&rest[..len]))
            }
            Some('"') => {
                let mut escaped = false;
                let mut close = None;
                for (i, c) in rest.char_indices().skip(1) {
                    match c {
                        _ if escaped => escaped = false,
                        '\\' => escaped = true,
                        '"' => {
                            close = Some(i);
                            break;
                        }
                        _ => {}
                    }
                }
                let close = close.ok_or_else(|| syntax(self.line, "unclosed string literal"))?;
                let mut end = close + 1;
                let after = &rest[end..];
                if after.starts_with('@') {
                    end += after.find(|c: char| c.is_whitespace() || c == '.').unwrap_or(after.len());
                } else if let Some(dt) = after.strip_prefix("^^<") {
                    let gt = dt.find('>').ok_or_else(|| syntax(self.line, "unclosed datatype IRI"))?;
                    end += 3 + gt + 1;
                }
                self.pos += end;
                Ok(Term::Literal(&self.text[start..start + end]))
            }
            Some(c) => Err(syntax(self.line, format!("unexpected character `{c}`"))),
            None => Err(syntax(self.line, "missing term")),
        }
    }
}

/// `#fragment` if present, else the last non-empty `/` segment.
fn compact(iri: &str) -> &str {
    if let Some((_, frag)) = iri.rsplit_once('#') {
        if !frag.is_empty() {
            return frag;
        }
    }
    iri.trim_end_matches(['/', '#']).rsplit('/').next().unwrap_or(iri)
}

/// Reads one `<s> <p> <o> .` statement per line. Every triple adds the
/// edge `(s, p, o)` and the inverse edge `(o, p + inverse_suffix, s)`.
///
/// Predicates are compacted to their local name so grammars can refer to
/// bare names like `subClassOf`. Subjects and objects keep their full
/// text as vertex names; literals become vertices too.
pub fn load_ntriples(text: &str, inverse_suffix: &str) -> Result<Graph, LoadError> {
    let mut graph = Graph::new();
    let mut names = Names::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut cur = Cursor { text: trimmed, pos: 0, line };
        let subject = match cur.term()? {
            Term::Iri(s) => s,
            Term::Blank(s) => s,
            Term::Literal(_) => return Err(syntax(line, "literal in subject position")),
        };
        let Term::Iri(predicate) = cur.term()? else {
            return Err(syntax(line, "predicate must be an IRI"));
        };
        let object = match cur.term()? {
            Term::Iri(s) | Term::Blank(s) | Term::Literal(s) => s,
        };
        cur.skip_ws();
        let tail = cur.rest();
        let Some(after) = tail.strip_prefix('.') else {
            if tail.is_empty() {
                return Err(LoadError::Unterminated { line });
            }
            return Err(syntax(line, format!("unexpected `{tail}` after object")));
        };
        let after = after.trim_start();
        if !after.is_empty() && !after.starts_with('#') {
            return Err(syntax(line, format!("unexpected `{after}` after statement")));
        }

        let label = compact(predicate);
        let (s, o) = (names.intern(subject), names.intern(object));
        graph.add_edge_named(s, label, o);
        graph.add_edge_named(o, &format!("{label}{inverse_suffix}"), s);
    }
    graph.set_vertex_names(names.names);
    Ok(graph)
}
