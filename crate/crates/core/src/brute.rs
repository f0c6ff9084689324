//! Exhaustive reference solvers.
//!
//! These are the ground truth the reductions and the collapse-based
//! algorithms are checked against. Every solver refuses inputs above its
//! size guard with [`Error::SizeLimitExceeded`] instead of approximating.
//!
//! Searches are deterministic: vertices are assigned left to right, candidate
//! images are tried in increasing order, and the first witness is returned.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{HomMap, OrderedGraph, Vertex};

/// Permutation of `1..=k` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let k = values.len();
        let mut seen = vec![false; k + 1];
        for &x in &values {
            if x == 0 || x > k {
                return Err(Error::InvalidPermutation(format!("value {x} outside 1..={k}")));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!("value {x} repeated")));
            }
        }
        Ok(Permutation(values))
    }

    pub fn identity(k: usize) -> Self {
        Permutation((1..=k).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-based one-line values.
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    /// `π(i)` for 1-based `i`.
    pub fn at(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    /// Ranks the values at 1-based `positions`, producing the pattern they form.
    pub fn restrict(&self, positions: &[usize]) -> Permutation {
        let vals: Vec<usize> = positions.iter().map(|&i| self.at(i)).collect();
        let ranked = vals
            .iter()
            .map(|&x| 1 + vals.iter().filter(|&&y| y < x).count())
            .collect();
        Permutation(ranked)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::InvalidPermutation(format!("`{t}` is not a positive integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(values)
    }
}

/// Size limits for the exhaustive solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    /// Limit on `n_G + n_H` for homomorphism search.
    pub hom: usize,
    /// Limit on the host's vertex count for subgraph search.
    pub subgraph: usize,
    /// Limit on the host permutation's length for pattern search.
    pub pattern: usize,
    /// Limit on the vertex count for core search.
    pub core: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            hom: 64,
            subgraph: 20,
            pattern: 12,
            core: 14,
        }
    }
}

impl Guards {
    /// Hard ceilings an override may not exceed.
    pub const CEILING: Guards = Guards {
        hom: 256,
        subgraph: 40,
        pattern: 24,
        core: 32,
    };

    /// Parses overrides of the form `hom=80,core=16`. Unnamed keys keep
    /// their defaults; values above [`Guards::CEILING`] are rejected.
    pub fn parse_overrides(spec: &str) -> Result<Guards> {
        let mut g = Guards::default();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidSpec(format!("guard override `{item}` is not key=value")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidSpec(format!("guard value `{value}` is not an integer")))?;
            let (slot, ceiling) = match key.trim() {
                "hom" => (&mut g.hom, Self::CEILING.hom),
                "sub" | "subgraph" => (&mut g.subgraph, Self::CEILING.subgraph),
                "pattern" => (&mut g.pattern, Self::CEILING.pattern),
                "core" => (&mut g.core, Self::CEILING.core),
                other => return Err(Error::InvalidSpec(format!("unknown guard `{other}`"))),
            };
            if value > ceiling {
                return Err(Error::InvalidSpec(format!("guard {key}={value} exceeds ceiling {ceiling}")));
            }
            *slot = value;
        }
        Ok(g)
    }
}

fn guard(what: &'static str, size: usize, limit: usize) -> Result<()> {
    if size > limit {
        Err(Error::SizeLimitExceeded { what, size, limit })
    } else {
        Ok(())
    }
}

/// Search result plus the number of search nodes visited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome<T> {
    pub witness: Option<T>,
    pub nodes: u64,
}

/// Strictly increasing vertex list of the host graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphWitness(pub Vec<Vertex>);

// Bit set over the target's vertices, `words` u64s per source vertex.
struct Domains {
    words: usize,
    bits: Vec<u64>,
}

impl Domains {
    fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    fn row_mut(&mut self, v: usize) -> &mut [u64] {
        &mut self.bits[v * self.words..(v + 1) * self.words]
    }

    fn contains(&self, v: usize, x: usize) -> bool {
        self.row(v)[x / 64] >> (x % 64) & 1 == 1
    }

    fn any_at_least(&self, v: usize, lo: usize) -> bool {
        let row = self.row(v);
        let (w0, b0) = (lo / 64, lo % 64);
        if w0 >= row.len() {
            return false;
        }
        if row[w0] >> b0 != 0 {
            return true;
        }
        row[w0 + 1..].iter().any(|&w| w != 0)
    }
}

struct HomSearch<'a> {
    g: &'a OrderedGraph,
    h: &'a OrderedGraph,
    colored: bool,
    domains: Domains,
    trail: Vec<(usize, Vec<u64>)>,
    assign: Vec<usize>,
    nodes: u64,
}

impl<'a> HomSearch<'a> {
    fn new(g: &'a OrderedGraph, h: &'a OrderedGraph, forbidden: Option<Vertex>) -> Self {
        let colored = g.is_colored() && h.is_colored();
        let words = h.n().div_ceil(64).max(1);
        let mut domains = Domains {
            words,
            bits: vec![0; g.n() * words],
        };
        // Initial domains: an image must have a right (left) neighbor of the
        // right color whenever the source vertex has one.
        for v in 0..g.n() {
            for x in 0..h.n() {
                if Some(x) == forbidden {
                    continue;
                }
                let ok = g.neighbors(v).iter().all(|&w| {
                    let want = if colored { g.color(v, w) } else { None };
                    h.neighbors(x).iter().any(|&y| {
                        (w > v) == (y > x) && (!colored || h.color(x, y) == want)
                    })
                });
                if ok {
                    domains.row_mut(v)[x / 64] |= 1 << (x % 64);
                }
            }
        }
        HomSearch {
            g,
            h,
            colored,
            domains,
            trail: Vec::new(),
            assign: Vec::with_capacity(g.n()),
            nodes: 0,
        }
    }

    fn solve(&mut self) -> Option<HomMap> {
        if self.search(0) {
            Some(HomMap(self.assign.clone()))
        } else {
            None
        }
    }

    fn search(&mut self, v: usize) -> bool {
        self.nodes += 1;
        if v == self.g.n() {
            return true;
        }
        let lo = if v == 0 { 0 } else { self.assign[v - 1] };
        for x in lo..self.h.n() {
            if !self.domains.contains(v, x) {
                continue;
            }
            let mark = self.trail.len();
            if self.narrow(v, x) {
                self.assign.push(x);
                if self.search(v + 1) {
                    return true;
                }
                self.assign.pop();
            }
            self.undo(mark);
        }
        false
    }

    // Restricts every later neighbor of `v` to the neighbors of `x` above it.
    fn narrow(&mut self, v: usize, x: usize) -> bool {
        let words = self.domains.words;
        let mut mask = vec![0u64; words];
        for &w in self.g.neighbors(v) {
            if w < v {
                continue;
            }
            mask.iter_mut().for_each(|m| *m = 0);
            let want = if self.colored { self.g.color(v, w) } else { None };
            for &y in self.h.neighbors(x) {
                if y > x && (!self.colored || self.h.color(x, y) == want) {
                    mask[y / 64] |= 1 << (y % 64);
                }
            }
            let old = self.domains.row(w).to_vec();
            let row = self.domains.row_mut(w);
            for (r, m) in row.iter_mut().zip(&mask) {
                *r &= m;
            }
            self.trail.push((w, old));
            if !self.domains.any_at_least(w, x) {
                return false;
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (w, old) = self.trail.pop().unwrap();
            self.domains.row_mut(w).copy_from_slice(&old);
        }
    }
}

/// Finds an ordered homomorphism `g -> h`, color-aware when both graphs are
/// colored. Uses the default guards.
pub fn hom_exists_brute(g: &OrderedGraph, h: &OrderedGraph) -> Result<Option<HomMap>> {
    Ok(hom_search(g, h, &Guards::default())?.witness)
}

pub fn hom_search(g: &OrderedGraph, h: &OrderedGraph, guards: &Guards) -> Result<Outcome<HomMap>> {
    guard("homomorphism search (n_G + n_H)", g.n() + h.n(), guards.hom)?;
    let mut s = HomSearch::new(g, h, None);
    let witness = s.solve();
    Ok(Outcome {
        witness,
        nodes: s.nodes,
    })
}

/// Finds an increasing `X` such that `m[X]` contains `n` (ordinary) or
/// equals `n` (induced) under the identity relabeling.
pub fn subgraph_brute(n: &OrderedGraph, m: &OrderedGraph, induced: bool) -> Result<Option<SubgraphWitness>> {
    Ok(subgraph_search(n, m, induced, &Guards::default())?.witness)
}

pub fn subgraph_search(
    n: &OrderedGraph,
    m: &OrderedGraph,
    induced: bool,
    guards: &Guards,
) -> Result<Outcome<SubgraphWitness>> {
    guard("subgraph search (n_M)", m.n(), guards.subgraph)?;
    let colored = n.is_colored() && m.is_colored();
    let mut chosen = Vec::with_capacity(n.n());
    let mut nodes = 0;
    let found = n.n() <= m.n() && extend_subgraph(n, m, induced, colored, &mut chosen, &mut nodes);
    Ok(Outcome {
        witness: found.then_some(SubgraphWitness(chosen)),
        nodes,
    })
}

fn extend_subgraph(
    n: &OrderedGraph,
    m: &OrderedGraph,
    induced: bool,
    colored: bool,
    chosen: &mut Vec<Vertex>,
    nodes: &mut u64,
) -> bool {
    *nodes += 1;
    let k = chosen.len();
    if k == n.n() {
        return true;
    }
    let start = chosen.last().map_or(0, |&x| x + 1);
    // leave room for the remaining pattern vertices
    let end = m.n() + k + 1 - n.n();
    for x in start..end {
        let fits = (0..k).all(|a| {
            let y = chosen[a];
            if n.has_edge(a, k) {
                m.has_edge(y, x) && (!colored || m.color(y, x) == n.color(a, k))
            } else {
                !induced || !m.has_edge(y, x)
            }
        });
        if fits {
            chosen.push(x);
            if extend_subgraph(n, m, induced, colored, chosen, nodes) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Finds 1-based positions `i_1 < ... < i_k` of `host` whose values are
/// order-isomorphic to `pattern`.
pub fn pattern_contains(pattern: &Permutation, host: &Permutation) -> Result<Option<Vec<usize>>> {
    pattern_contains_with(pattern, host, &Guards::default())
}

pub fn pattern_contains_with(pattern: &Permutation, host: &Permutation, guards: &Guards) -> Result<Option<Vec<usize>>> {
    guard("pattern search (|Π|)", host.len(), guards.pattern)?;
    if pattern.len() > host.len() {
        return Ok(None);
    }
    let mut chosen = Vec::with_capacity(pattern.len());
    let found = extend_pattern(pattern.values(), host.values(), &mut chosen);
    Ok(found.then(|| chosen.iter().map(|&i| i + 1).collect()))
}

fn extend_pattern(pattern: &[usize], host: &[usize], chosen: &mut Vec<usize>) -> bool {
    let k = chosen.len();
    if k == pattern.len() {
        return true;
    }
    let start = chosen.last().map_or(0, |&i| i + 1);
    let end = host.len() + k + 1 - pattern.len();
    for i in start..end {
        let consistent = chosen
            .iter()
            .enumerate()
            .all(|(a, &j)| (pattern[a] < pattern[k]) == (host[j] < host[i]));
        if consistent {
            chosen.push(i);
            if extend_pattern(pattern, host, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Order in which vertices are tried as the one missing from the image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RetractionOrder {
    #[default]
    Forward,
    Reverse,
}

/// A non-surjective endomorphism `g -> g`, found by excluding each vertex
/// from the image in turn.
pub fn non_surjective_endomorphism(g: &OrderedGraph, guards: &Guards) -> Result<Outcome<HomMap>> {
    non_surjective_endomorphism_ordered(g, guards, RetractionOrder::Forward)
}

fn non_surjective_endomorphism_ordered(
    g: &OrderedGraph,
    guards: &Guards,
    order: RetractionOrder,
) -> Result<Outcome<HomMap>> {
    guard("core search (n_G)", g.n(), guards.core)?;
    let mut nodes = 0;
    let candidates: Box<dyn Iterator<Item = Vertex>> = match order {
        RetractionOrder::Forward => Box::new(0..g.n()),
        RetractionOrder::Reverse => Box::new((0..g.n()).rev()),
    };
    for missing in candidates {
        let mut s = HomSearch::new(g, g, Some(missing));
        let found = s.solve();
        nodes += s.nodes;
        if found.is_some() {
            return Ok(Outcome { witness: found, nodes });
        }
    }
    Ok(Outcome { witness: None, nodes })
}

/// True iff every endomorphism of `g` is surjective.
pub fn is_core_brute(g: &OrderedGraph) -> Result<bool> {
    is_core_brute_with(g, &Guards::default())
}

pub fn is_core_brute_with(g: &OrderedGraph, guards: &Guards) -> Result<bool> {
    Ok(non_surjective_endomorphism(g, guards)?.witness.is_none())
}

/// Result of iterated retraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteCore {
    pub core: OrderedGraph,
    /// Vertices of the input that make up the core, in order.
    pub retained: Vec<Vertex>,
    /// Homomorphism from the input onto the (relabeled) core.
    pub to_core: HomMap,
}

/// Retracts `g` onto the image of a non-surjective endomorphism until none
/// exists, returning the relabeled core.
pub fn core_brute(g: &OrderedGraph) -> Result<OrderedGraph> {
    Ok(core_brute_detailed(g, &Guards::default(), RetractionOrder::Forward)?.core)
}

pub fn core_brute_detailed(g: &OrderedGraph, guards: &Guards, order: RetractionOrder) -> Result<BruteCore> {
    guard("core search (n_G)", g.n(), guards.core)?;
    let mut current = g.clone();
    let mut retained: Vec<Vertex> = (0..g.n()).collect();
    // input vertex -> current vertex
    let mut to_current = HomMap::identity(g.n());
    while let Some(f) = non_surjective_endomorphism_ordered(&current, guards, order)?.witness {
        let image = f.image();
        let mut relabel = vec![usize::MAX; current.n()];
        for (i, &x) in image.iter().enumerate() {
            relabel[x] = i;
        }
        let step = HomMap(f.iter().map(|&x| relabel[x]).collect());
        to_current = to_current.then(&step);
        retained = image.iter().map(|&x| retained[x]).collect();
        current = current.induced_subgraph(&image);
    }
    Ok(BruteCore {
        core: current,
        retained,
        to_core: to_current,
    })
}
