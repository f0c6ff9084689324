//! Ordered graphs and the predicates every other module builds on.
//!
//! Vertices are the integers `0..n` and the vertex order is the integer
//! order. Edges are unordered pairs stored as `(min, max)`. A graph may carry
//! an edge coloring; when it does, every edge has exactly one color.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Deref, Range};

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type Edge = (Vertex, Vertex);

/// Edge color. Colors are only ever compared for equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColorId(pub u16);

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An edge as it arrives from a parser or a caller, before validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawEdge {
    pub u: Vertex,
    pub v: Vertex,
    pub color: Option<ColorId>,
}

/// Unvalidated graph description.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawGraph {
    pub n: usize,
    pub edges: Vec<RawEdge>,
}

impl RawGraph {
    pub fn new(n: usize) -> Self {
        RawGraph {
            n,
            edges: Vec::new(),
        }
    }

    pub fn edge(mut self, u: Vertex, v: Vertex) -> Self {
        self.edges.push(RawEdge { u, v, color: None });
        self
    }

    pub fn colored_edge(mut self, u: Vertex, v: Vertex, color: ColorId) -> Self {
        self.edges.push(RawEdge {
            u,
            v,
            color: Some(color),
        });
        self
    }
}

/// A finite simple graph on the vertices `0..n` ordered by index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrderedGraph {
    n: usize,
    /// Sorted, normalized `(min, max)` pairs.
    edges: Vec<Edge>,
    /// Parallel to `edges` when present.
    colors: Option<Vec<ColorId>>,
    /// Sorted neighbor lists.
    adj: Vec<Vec<Vertex>>,
}

impl fmt::Debug for OrderedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrderedGraph(n={}, ", self.n)?;
        match &self.colors {
            None => write!(f, "{:?})", self.edges),
            Some(colors) => {
                let labeled: Vec<_> = self
                    .edges
                    .iter()
                    .zip(colors)
                    .map(|(&(u, v), c)| (u, v, c.0))
                    .collect();
                write!(f, "{:?})", labeled)
            }
        }
    }
}

/// Checks a raw description and builds the normalized graph.
pub fn validate(raw: &RawGraph) -> Result<OrderedGraph> {
    let n = raw.n;
    let colored = raw.edges.first().is_some_and(|e| e.color.is_some());
    let mut seen = BTreeSet::new();
    let mut items: Vec<(Edge, Option<ColorId>)> = Vec::with_capacity(raw.edges.len());
    for e in &raw.edges {
        for x in [e.u, e.v] {
            if x >= n {
                return Err(Error::OutOfRangeVertex { vertex: x, n });
            }
        }
        if e.u == e.v {
            return Err(Error::Loop { vertex: e.u });
        }
        if e.color.is_some() != colored {
            return Err(Error::PartialColoring);
        }
        let key = (e.u.min(e.v), e.u.max(e.v));
        if !seen.insert(key) {
            return Err(Error::DuplicateEdge { u: key.0, v: key.1 });
        }
        items.push((key, e.color));
    }
    items.sort_unstable_by_key(|&(e, _)| e);
    let edges: Vec<Edge> = items.iter().map(|&(e, _)| e).collect();
    let colors = colored.then(|| items.iter().map(|&(_, c)| c.unwrap()).collect());
    Ok(OrderedGraph::assemble(n, edges, colors))
}

impl OrderedGraph {
    fn assemble(n: usize, edges: Vec<Edge>, colors: Option<Vec<ColorId>>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        OrderedGraph {
            n,
            edges,
            colors,
            adj,
        }
    }

    /// Uncolored graph from an edge list; pairs may be given in either order.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let raw = RawGraph {
            n,
            edges: edges
                .into_iter()
                .map(|(u, v)| RawEdge { u, v, color: None })
                .collect(),
        };
        validate(&raw)
    }

    /// Colored graph from `(u, v, color)` triples.
    pub fn colored(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex, u16)>) -> Result<Self> {
        let raw = RawGraph {
            n,
            edges: edges
                .into_iter()
                .map(|(u, v, c)| RawEdge {
                    u,
                    v,
                    color: Some(ColorId(c)),
                })
                .collect(),
        };
        validate(&raw)
    }

    pub fn empty(n: usize) -> Self {
        OrderedGraph::assemble(n, Vec::new(), None)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_colored(&self) -> bool {
        self.colors.is_some()
    }

    pub fn colors(&self) -> Option<&[ColorId]> {
        self.colors.as_deref()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    fn edge_index(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    /// Color of the edge `{u, v}`, or `None` if the edge is absent or the
    /// graph is uncolored.
    pub fn color(&self, u: Vertex, v: Vertex) -> Option<ColorId> {
        let colors = self.colors.as_ref()?;
        self.edge_index(u, v).map(|i| colors[i])
    }

    /// `(u, v, color)` triples; `color` is `None` on uncolored graphs.
    pub fn edges_with_colors(&self) -> impl Iterator<Item = (Vertex, Vertex, Option<ColorId>)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .map(move |(i, &(u, v))| (u, v, self.colors.as_ref().map(|c| c[i])))
    }

    /// Same vertices and edges with the coloring dropped.
    pub fn uncolored(&self) -> OrderedGraph {
        OrderedGraph::assemble(self.n, self.edges.clone(), None)
    }

    /// Replaces the coloring. `colors` is indexed like [`OrderedGraph::edges`].
    pub fn with_colors(&self, colors: Vec<ColorId>) -> Result<OrderedGraph> {
        if colors.len() != self.edges.len() {
            return Err(Error::PartialColoring);
        }
        Ok(OrderedGraph::assemble(self.n, self.edges.clone(), Some(colors)))
    }

    pub fn is_isolated(&self, v: Vertex) -> bool {
        self.adj[v].is_empty()
    }

    /// True iff every vertex has degree exactly one.
    pub fn is_matching(&self) -> bool {
        self.adj.iter().all(|a| a.len() == 1)
    }

    /// Smallest cut index `i` such that every edge has one endpoint below
    /// `i` and the other at or above it.
    pub fn is_separated(&self) -> Result<Option<usize>> {
        if self.edges.is_empty() {
            return Err(Error::EmptyEdgeSet);
        }
        let max_left = self.edges.iter().map(|e| e.0).max().unwrap();
        let min_right = self.edges.iter().map(|e| e.1).min().unwrap();
        Ok((max_left < min_right).then_some(max_left + 1))
    }

    /// True iff `set` is a run of consecutive vertices with no edge inside.
    /// The empty set counts as an interval.
    pub fn is_independent_interval(&self, set: &[Vertex]) -> bool {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != set.len() || sorted.last().is_some_and(|&x| x >= self.n) {
            return false;
        }
        if sorted.windows(2).any(|w| w[1] != w[0] + 1) {
            return false;
        }
        match (sorted.first(), sorted.last()) {
            (Some(&lo), Some(&hi)) => (lo..=hi).all(|u| self.adj[u].iter().all(|&w| w < lo || w > hi)),
            _ => true,
        }
    }

    /// Subgraph induced by `set`, relabeled to `0..|set|` in vertex order.
    /// Colors carry over.
    pub fn induced_subgraph(&self, set: &[Vertex]) -> OrderedGraph {
        let mut keep: Vec<Vertex> = set.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        let mut colors = self.colors.as_ref().map(|_| Vec::new());
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if index[u] != usize::MAX && index[v] != usize::MAX {
                edges.push((index[u], index[v]));
                if let (Some(out), Some(all)) = (colors.as_mut(), self.colors.as_ref()) {
                    out.push(all[i]);
                }
            }
        }
        // Relabeling is monotone, so the edge list stays sorted.
        OrderedGraph::assemble(keep.len(), edges, colors)
    }

    /// The only order-preserving bijection between ordered graphs of equal
    /// size is the identity, so isomorphism is equality of edge sets, plus
    /// equality of colorings when both graphs are colored.
    pub fn ordered_isomorphic(&self, other: &OrderedGraph) -> bool {
        if self.n != other.n || self.edges != other.edges {
            return false;
        }
        match (&self.colors, &other.colors) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }

    /// Connected components, each as a sorted vertex list, ordered by their
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out: Vec<Vec<Vertex>> = Vec::new();
        let mut stack = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            comp[s] = id;
            stack.push(s);
            let mut members = Vec::new();
            while let Some(u) = stack.pop() {
                members.push(u);
                for &w in &self.adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.components().len() == 1
    }
}

/// The `i`-th cut: `left = 0..i`, `right = i..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cut {
    index: usize,
    n: usize,
}

impl Cut {
    /// `index` must lie in `1..n`.
    pub fn new(index: usize, n: usize) -> Option<Cut> {
        (index >= 1 && index < n).then_some(Cut { index, n })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn left(&self) -> Range<Vertex> {
        0..self.index
    }

    pub fn right(&self) -> Range<Vertex> {
        self.index..self.n
    }

    pub fn is_crossed_by(&self, (u, v): Edge) -> bool {
        u.min(v) < self.index && u.max(v) >= self.index
    }
}

/// An ordered graph in which every vertex has degree exactly one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedMatching(OrderedGraph);

impl OrderedMatching {
    pub fn new(graph: OrderedGraph) -> Result<Self> {
        if graph.is_matching() {
            Ok(OrderedMatching(graph))
        } else {
            Err(Error::NotAMatching)
        }
    }

    pub fn partner(&self, v: Vertex) -> Vertex {
        self.0.adj[v][0]
    }

    pub fn as_graph(&self) -> &OrderedGraph {
        &self.0
    }

    pub fn into_graph(self) -> OrderedGraph {
        self.0
    }
}

impl TryFrom<OrderedGraph> for OrderedMatching {
    type Error = Error;

    fn try_from(graph: OrderedGraph) -> Result<Self> {
        OrderedMatching::new(graph)
    }
}

impl Deref for OrderedMatching {
    type Target = OrderedGraph;

    fn deref(&self) -> &OrderedGraph {
        &self.0
    }
}

/// Total vertex map `f : V(G) -> V(H)`, stored as `f(0), f(1), ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct HomMap(pub Vec<Vertex>);

impl HomMap {
    pub fn identity(n: usize) -> Self {
        HomMap((0..n).collect())
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &HomMap) -> HomMap {
        HomMap(self.0.iter().map(|&x| other.0[x]).collect())
    }

    /// Distinct image vertices in increasing order.
    pub fn image(&self) -> Vec<Vertex> {
        let mut img = self.0.clone();
        img.sort_unstable();
        img.dedup();
        img
    }
}

impl Deref for HomMap {
    type Target = [Vertex];

    fn deref(&self) -> &[Vertex] {
        &self.0
    }
}

impl fmt::Display for HomMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for x in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
            first = false;
        }
        Ok(())
    }
}

/// Checks that `f` is an ordered homomorphism `g -> h`: monotone, edge
/// preserving, and color preserving when both graphs are colored.
///
/// This is the witness check every solver's output goes through.
pub fn check_hom(g: &OrderedGraph, h: &OrderedGraph, f: &[Vertex]) -> Result<bool> {
    if f.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: f.len(),
        });
    }
    if let Some((vertex, &image)) = f.iter().enumerate().find(|(_, &x)| x >= h.n()) {
        return Err(Error::RangeError {
            vertex,
            image,
            bound: h.n(),
        });
    }
    if f.windows(2).any(|w| w[0] > w[1]) {
        return Ok(false);
    }
    let colored = g.is_colored() && h.is_colored();
    for (u, v, c) in g.edges_with_colors() {
        let (x, y) = (f[u], f[v]);
        if !h.has_edge(x, y) {
            return Ok(false);
        }
        if colored && h.color(x, y) != c {
            return Ok(false);
        }
    }
    Ok(true)
}
