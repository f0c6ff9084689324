//! Line-based ordered-graph text format.
//!
//! ```text
//! # comment
//! ograph 4
//! edge 0 2
//! edge 1 3
//! ```
//!
//! Vertices are 0-based. An edge line may carry a third token naming its
//! color; either every edge line names a color or none does. Color names are
//! interned through a [`ColorTable`] so that several files parsed with the
//! same table agree on ids.
//!
//! Comment lines of the form `# permutation-edge u v` or
//! `# auxiliary-edge u v` are recognized as edge-class annotations.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{validate, ColorId, Edge, OrderedGraph, RawEdge, RawGraph};

/// Maps color names to ids in order of first appearance.
#[derive(Debug, Clone, Default)]
pub struct ColorTable {
    ids: HashMap<String, ColorId>,
    names: Vec<String>,
}

impl ColorTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> Result<ColorId> {
        if let Some(&id) = self.ids.get(name) {
            return Ok(id);
        }
        let next = u16::try_from(self.names.len()).map_err(|_| Error::Parse {
            line: 0,
            message: "more than 65535 distinct colors".into(),
        })?;
        let id = ColorId(next);
        self.ids.insert(name.to_owned(), id);
        self.names.push(name.to_owned());
        Ok(id)
    }

    pub fn name(&self, id: ColorId) -> Option<&str> {
        self.names.get(id.0 as usize).map(String::as_str)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeClass {
    Permutation,
    Auxiliary,
}

impl EdgeClass {
    pub fn tag(self) -> &'static str {
        match self {
            EdgeClass::Permutation => "permutation-edge",
            EdgeClass::Auxiliary => "auxiliary-edge",
        }
    }

    fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "permutation-edge" => Some(EdgeClass::Permutation),
            "auxiliary-edge" => Some(EdgeClass::Auxiliary),
            _ => None,
        }
    }
}

pub type EdgeClasses = BTreeMap<Edge, EdgeClass>;

#[derive(Debug, Clone)]
pub struct ParsedGraph {
    pub graph: OrderedGraph,
    pub classes: EdgeClasses,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_index(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("expected a non-negative integer, found `{tok}`")))
}

/// Parses the ograph format. Structural problems (loops, duplicates, range)
/// are reported through [`validate`]'s errors.
pub fn parse_ograph(text: &str, colors: &mut ColorTable) -> Result<ParsedGraph> {
    let mut n = None;
    let mut raw = RawGraph::default();
    let mut classes = EdgeClasses::new();
    let mut colored = None;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if let Some(comment) = line.strip_prefix('#') {
            let toks: Vec<&str> = comment.split_whitespace().collect();
            if let [tag, u, v] = toks[..] {
                if let (Some(class), Ok(u), Ok(v)) = (EdgeClass::from_tag(tag), u.parse::<usize>(), v.parse::<usize>()) {
                    classes.insert((u.min(v), u.max(v)), class);
                }
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let body = line.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        match toks[..] {
            ["ograph", count] => {
                if n.is_some() {
                    return Err(parse_err(lineno, "repeated `ograph` header"));
                }
                n = Some(parse_index(count, lineno)?);
            }
            ["edge", u, v, ref rest @ ..] if rest.len() <= 1 => {
                if n.is_none() {
                    return Err(parse_err(lineno, "`edge` before the `ograph` header"));
                }
                let has_color = rest.len() == 1;
                match colored {
                    None => colored = Some(has_color),
                    Some(c) if c != has_color => {
                        return Err(parse_err(lineno, "mixed colored and uncolored edge lines"));
                    }
                    _ => {}
                }
                let color = rest.first().map(|name| colors.intern(name)).transpose()?;
                raw.edges.push(RawEdge {
                    u: parse_index(u, lineno)?,
                    v: parse_index(v, lineno)?,
                    color,
                });
            }
            _ => return Err(parse_err(lineno, format!("unrecognized line `{line}`"))),
        }
    }
    raw.n = n.ok_or_else(|| parse_err(1, "missing `ograph <n>` header"))?;
    let graph = validate(&raw)?;
    Ok(ParsedGraph { graph, classes })
}

/// Serializes a graph. Colors are written by name when `colors` knows the
/// id and as the numeric id otherwise.
pub fn write_ograph(graph: &OrderedGraph, colors: Option<&ColorTable>) -> String {
    write_ograph_annotated(graph, colors, &EdgeClasses::new())
}

pub fn write_ograph_annotated(graph: &OrderedGraph, colors: Option<&ColorTable>, classes: &EdgeClasses) -> String {
    let mut out = String::new();
    writeln!(out, "ograph {}", graph.n()).unwrap();
    for (u, v, c) in graph.edges_with_colors() {
        match c {
            None => writeln!(out, "edge {u} {v}").unwrap(),
            Some(id) => match colors.and_then(|t| t.name(id)) {
                Some(name) => writeln!(out, "edge {u} {v} {name}").unwrap(),
                None => writeln!(out, "edge {u} {v} {id}").unwrap(),
            },
        }
    }
    for (&(u, v), class) in classes {
        writeln!(out, "# {} {u} {v}", class.tag()).unwrap();
    }
    out
}

/// One line per vertex image: `f(0) f(1) ... f(n-1)`.
pub fn parse_map(text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|t| parse_index(t, 1))
        .collect()
}
