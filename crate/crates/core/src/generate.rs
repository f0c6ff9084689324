//! Seeded instance generation and exhaustive enumeration.
//!
//! All randomness comes from a ChaCha8 stream seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`, so a [`GenSpec`] always produces the
//! same instance.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::brute::Permutation;
use crate::error::{Error, Result};
use crate::graph::{ColorId, Edge, OrderedGraph, Vertex};

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Each pair becomes an edge independently with probability `edge_prob`.
    RandomGraph { n: usize, edge_prob: f64 },
    /// Perfect matching on `2 * edges` points. With probability
    /// `crossing_bias` a closing point pairs with the oldest open point
    /// (crossing), otherwise with the newest (nesting).
    RandomMatching { edges: usize, crossing_bias: f64 },
    Permutation { size: usize },
    /// Grows a matching `core` by inserting vertices that copy the role of
    /// an existing vertex, so `core` stays a homomorphic image and an
    /// ordered subgraph of the result. `isolated` extra isolated vertices
    /// are inserted at random positions.
    Inflate {
        core: OrderedGraph,
        steps: usize,
        isolated: usize,
    },
    /// `copies` copies of `template` merged into one vertex order. With
    /// `interleave_bias = 0` copies are laid out one after another.
    H0Matching {
        template: OrderedGraph,
        copies: usize,
        interleave_bias: f64,
    },
    /// A graph family with edge colors drawn uniformly from `0..palette`.
    Colored { base: Box<Family>, palette: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub seed: u64,
    pub family: Family,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Graph(OrderedGraph),
    Permutation(Permutation),
}

impl Instance {
    pub fn into_graph(self) -> Option<OrderedGraph> {
        match self {
            Instance::Graph(g) => Some(g),
            Instance::Permutation(_) => None,
        }
    }

    pub fn into_permutation(self) -> Option<Permutation> {
        match self {
            Instance::Permutation(p) => Some(p),
            Instance::Graph(_) => None,
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidSpec(msg.into())
}

fn check_prob(p: f64, name: &str) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid(format!("{name} must lie in [0, 1], got {p}")))
    }
}

pub fn generate(spec: &GenSpec) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    generate_family(&spec.family, &mut rng)
}

/// Convenience wrapper for graph families.
pub fn generate_graph(seed: u64, family: Family) -> Result<OrderedGraph> {
    generate(&GenSpec { seed, family })?
        .into_graph()
        .ok_or_else(|| invalid("family does not produce a graph"))
}

fn generate_family(family: &Family, rng: &mut ChaCha8Rng) -> Result<Instance> {
    match family {
        Family::RandomGraph { n, edge_prob } => {
            check_prob(*edge_prob, "edge_prob")?;
            let edges: Vec<Edge> = (0..*n)
                .tuple_combinations()
                .filter(|_| rng.gen_bool(*edge_prob))
                .collect();
            Ok(Instance::Graph(OrderedGraph::new(*n, edges)?))
        }
        Family::RandomMatching { edges, crossing_bias } => {
            check_prob(*crossing_bias, "crossing_bias")?;
            Ok(Instance::Graph(random_matching(*edges, *crossing_bias, rng)))
        }
        Family::Permutation { size } => {
            let mut values: Vec<usize> = (1..=*size).collect();
            values.shuffle(rng);
            Ok(Instance::Permutation(Permutation::new(values)?))
        }
        Family::Inflate { core, steps, isolated } => Ok(Instance::Graph(inflate(core, *steps, *isolated, rng)?)),
        Family::H0Matching {
            template,
            copies,
            interleave_bias,
        } => {
            check_prob(*interleave_bias, "interleave_bias")?;
            if !template.is_connected() {
                return Err(invalid("template must be connected"));
            }
            Ok(Instance::Graph(h0_matching(template, *copies, *interleave_bias, rng)))
        }
        Family::Colored { base, palette } => {
            if *palette == 0 || *palette > u16::MAX as usize + 1 {
                return Err(invalid(format!("palette size {palette} outside 1..=65536")));
            }
            let g = generate_family(base, rng)?
                .into_graph()
                .ok_or_else(|| invalid("colored family needs a graph base"))?;
            let colors = (0..g.edge_count())
                .map(|_| ColorId(rng.gen_range(0..*palette) as u16))
                .collect();
            Ok(Instance::Graph(g.with_colors(colors)?))
        }
    }
}

fn random_matching(k: usize, crossing_bias: f64, rng: &mut ChaCha8Rng) -> OrderedGraph {
    let n = 2 * k;
    let mut open: Vec<Vertex> = Vec::new();
    let mut opened = 0;
    let mut edges = Vec::with_capacity(k);
    for v in 0..n {
        let must_close = open.len() == n - v;
        let can_open = opened < k && !must_close;
        if can_open && (open.is_empty() || rng.gen_bool(0.5)) {
            open.push(v);
            opened += 1;
        } else {
            let u = if rng.gen_bool(crossing_bias) {
                open.remove(0)
            } else {
                open.pop().unwrap()
            };
            edges.push((u, v));
        }
    }
    OrderedGraph::new(n, edges).expect("generated matching is valid")
}

fn inflate(core: &OrderedGraph, steps: usize, isolated: usize, rng: &mut ChaCha8Rng) -> Result<OrderedGraph> {
    if !core.is_matching() {
        return Err(invalid("inflate needs a matching as its core"));
    }
    if core.n() == 0 && steps > 0 {
        return Err(invalid("cannot inflate the empty matching"));
    }
    // Vertices are ids; `image[id]` is the core vertex it maps to, and
    // `groups[x]` lists the ids mapping to `x` in their final order.
    let mut image: Vec<Vertex> = (0..core.n()).collect();
    let mut groups: Vec<Vec<usize>> = (0..core.n()).map(|x| vec![x]).collect();
    let mut edges: HashSet<Edge> = core.edges().iter().copied().collect();
    for _ in 0..steps {
        let v = rng.gen_range(0..image.len());
        let x = image[v];
        let partner = core.neighbors(x)[0];
        let id = image.len();
        image.push(x);
        let slot = rng.gen_range(0..=groups[x].len());
        groups[x].insert(slot, id);
        let others = &groups[partner];
        let want = rng.gen_range(1..=others.len().min(3));
        for &w in others.choose_multiple(rng, want) {
            edges.insert((id.min(w), id.max(w)));
        }
        // occasionally densify an existing block
        if rng.gen_bool(0.25) {
            let a = groups[x][rng.gen_range(0..groups[x].len())];
            let b = groups[partner][rng.gen_range(0..groups[partner].len())];
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let mut order: Vec<Option<usize>> = groups.into_iter().flatten().map(Some).collect();
    for _ in 0..isolated {
        let slot = rng.gen_range(0..=order.len());
        order.insert(slot, None);
    }
    let mut label = vec![0; image.len()];
    for (pos, id) in order.iter().enumerate() {
        if let Some(id) = id {
            label[*id] = pos;
        }
    }
    let mut edge_list: Vec<Edge> = edges.into_iter().collect();
    edge_list.sort_unstable();
    let n = order.len();
    if core.is_colored() {
        // every edge inherits the color of the core edge it maps onto
        let colored: Vec<(usize, usize, u16)> = edge_list
            .iter()
            .map(|&(a, b)| {
                let c = core.color(image[a], image[b]).expect("edge maps onto a core edge");
                (label[a], label[b], c.0)
            })
            .collect();
        OrderedGraph::colored(n, colored)
    } else {
        OrderedGraph::new(n, edge_list.iter().map(|&(a, b)| (label[a], label[b])))
    }
}

fn h0_matching(template: &OrderedGraph, copies: usize, bias: f64, rng: &mut ChaCha8Rng) -> OrderedGraph {
    let h0 = template.n();
    let mut emitted = vec![0usize; copies];
    let mut current = 0;
    let mut sequence = Vec::with_capacity(copies * h0);
    while sequence.len() < copies * h0 {
        let unfinished: Vec<usize> = (0..copies).filter(|&c| emitted[c] < h0).collect();
        if emitted[current] == h0 || rng.gen_bool(bias) {
            current = *unfinished.choose(rng).unwrap();
        }
        sequence.push(current);
        emitted[current] += 1;
    }
    graph_from_labels(template, &sequence)
}

/// Builds the union of copies from a label sequence in which each copy
/// label occurs `template.n()` times.
fn graph_from_labels(template: &OrderedGraph, sequence: &[usize]) -> OrderedGraph {
    let copies = sequence.iter().max().map_or(0, |&c| c + 1);
    let mut members = vec![Vec::new(); copies];
    for (pos, &c) in sequence.iter().enumerate() {
        members[c].push(pos);
    }
    let edges = members
        .iter()
        .flat_map(|m| template.edges().iter().map(move |&(a, b)| (m[a], m[b])));
    OrderedGraph::new(sequence.len(), edges).expect("copies are disjoint")
}

/// Bounded families for exhaustive runs.
#[derive(Debug, Clone, PartialEq)]
pub enum EnumFamily {
    /// Every perfect matching on `2 * edges` ordered points.
    Matchings { edges: usize },
    Permutations { size: usize },
    /// Every ordered graph whose components are `copies` copies of
    /// `template`, over all interleavings.
    H0Factors { template: OrderedGraph, copies: usize },
}

/// Above this many instances enumeration is refused.
pub const ENUMERATION_LIMIT: u128 = 2_000_000;

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// Number of instances `enumerate_all` yields for `family`.
pub fn enumeration_count(family: &EnumFamily) -> u128 {
    match family {
        EnumFamily::Matchings { edges } => (1..=*edges as u128).map(|i| 2 * i - 1).product(),
        EnumFamily::Permutations { size } => factorial(*size),
        EnumFamily::H0Factors { template, copies } => {
            // multinomial (c * h)! / (h!)^c, divided by c! for unlabeled copies
            let h = template.n();
            let mut count = factorial(copies * h);
            for _ in 0..*copies {
                count /= factorial(h);
            }
            count / factorial(*copies)
        }
    }
}

/// Every instance of the family exactly once, graphs in lexicographic
/// order of their sorted edge lists, permutations in lexicographic order.
pub fn enumerate_all(family: &EnumFamily) -> Result<impl Iterator<Item = Instance>> {
    let too_big = match family {
        EnumFamily::Matchings { edges } => *edges > 10,
        EnumFamily::Permutations { size } => *size > 12,
        EnumFamily::H0Factors { template, copies } => template.n() * copies > 24,
    } || enumeration_count(family) > ENUMERATION_LIMIT;
    if too_big {
        return Err(Error::BoundTooLarge(format!("{family:?}")));
    }
    let items: Vec<Instance> = match family {
        EnumFamily::Matchings { edges } => {
            let mut out = Vec::new();
            let mut pairs = Vec::new();
            let mut used = vec![false; 2 * edges];
            all_matchings(&mut used, &mut pairs, &mut out);
            out.into_iter().map(Instance::Graph).collect()
        }
        EnumFamily::Permutations { size } => (1..=*size)
            .permutations(*size)
            .map(|v| Instance::Permutation(Permutation::new(v).expect("permutation")))
            .collect(),
        EnumFamily::H0Factors { template, copies } => {
            if *copies > 0 && template.n() == 0 {
                return Err(Error::InvalidSpec("template has no vertices".into()));
            }
            let mut out = Vec::new();
            let mut seq = Vec::new();
            let mut counts = vec![0; *copies];
            canonical_interleavings(template.n(), *copies, &mut counts, &mut seq, &mut out);
            let mut graphs: Vec<OrderedGraph> = out.iter().map(|s| graph_from_labels(template, s)).collect();
            graphs.sort_by(|a, b| a.edges().cmp(b.edges()));
            if *copies == 0 {
                graphs = vec![OrderedGraph::empty(0)];
            }
            graphs.into_iter().map(Instance::Graph).collect()
        }
    };
    Ok(items.into_iter())
}

fn all_matchings(used: &mut [bool], pairs: &mut Vec<Edge>, out: &mut Vec<OrderedGraph>) {
    let Some(first) = used.iter().position(|&u| !u) else {
        out.push(OrderedGraph::new(used.len(), pairs.iter().copied()).expect("matching"));
        return;
    };
    used[first] = true;
    for partner in first + 1..used.len() {
        if used[partner] {
            continue;
        }
        used[partner] = true;
        pairs.push((first, partner));
        all_matchings(used, pairs, out);
        pairs.pop();
        used[partner] = false;
    }
    used[first] = false;
}

// Label sequences where each label appears `h` times and labels first
// appear in increasing order, so each unlabeled interleaving occurs once.
fn canonical_interleavings(h: usize, copies: usize, counts: &mut [usize], seq: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if seq.len() == h * copies {
        out.push(seq.clone());
        return;
    }
    let started = counts.iter().take_while(|&&c| c > 0).count();
    for c in 0..copies.min(started + 1) {
        if counts[c] < h {
            counts[c] += 1;
            seq.push(c);
            canonical_interleavings(h, copies, counts, seq, out);
            seq.pop();
            counts[c] -= 1;
        }
    }
}

/// One corpus manifest line: `<family> <seed-or-index> <path>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub family: String,
    pub key: u64,
    pub path: String,
}

impl fmt::Display for ManifestEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.family, self.key, self.path)
    }
}

impl FromStr for ManifestEntry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            line: 1,
            message: format!("manifest line `{s}` is not `<family> <seed> <path>`"),
        };
        let mut it = s.split_whitespace();
        let (Some(family), Some(key), Some(path), None) = (it.next(), it.next(), it.next(), it.next()) else {
            return Err(bad());
        };
        Ok(ManifestEntry {
            family: family.to_owned(),
            key: key.parse().map_err(|_| bad())?,
            path: path.to_owned(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::check_hom;

    fn edge() -> OrderedGraph {
        OrderedGraph::new(2, [(0, 1)]).unwrap()
    }

    #[test]
    fn single_edge_matching() {
        for seed in 0..5 {
            let g = generate_graph(
                seed,
                Family::RandomMatching {
                    edges: 1,
                    crossing_bias: 0.7,
                },
            )
            .unwrap();
            assert_eq!(g, edge());
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = GenSpec {
            seed: 42,
            family: Family::Permutation { size: 3 },
        };
        let a = generate(&spec).unwrap();
        assert_eq!(a, generate(&spec).unwrap());
        let p = a.into_permutation().unwrap();
        assert_eq!(p.len(), 3);
        // frozen
        assert_eq!(p.to_string(), "3 2 1");
    }

    #[test]
    fn inflate_single_step_golden() {
        let g = generate_graph(
            7,
            Family::Inflate {
                core: edge(),
                steps: 1,
                isolated: 0,
            },
        )
        .unwrap();
        assert_eq!(g, OrderedGraph::new(3, [(0, 2), (1, 2)]).unwrap());
        let f: Vec<usize> = (0..g.n()).map(|v| usize::from(v == 2)).collect();
        assert!(check_hom(&g, &edge(), &f).unwrap());
    }

    #[test]
    fn random_matchings_are_matchings() {
        for seed in 0..50 {
            for bias in [0.0, 0.5, 1.0] {
                let g = generate_graph(
                    seed,
                    Family::RandomMatching {
                        edges: 5,
                        crossing_bias: bias,
                    },
                )
                .unwrap();
                assert!(g.is_matching());
                assert_eq!(g.n(), 10);
            }
        }
    }

    #[test]
    fn h0_matching_components_match_template() {
        let p3 = OrderedGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        for seed in 0..20 {
            let g = generate_graph(
                seed,
                Family::H0Matching {
                    template: p3.clone(),
                    copies: 3,
                    interleave_bias: 0.6,
                },
            )
            .unwrap();
            for comp in g.components() {
                assert!(g.induced_subgraph(&comp).ordered_isomorphic(&p3));
            }
        }
        let seq = generate_graph(
            1,
            Family::H0Matching {
                template: p3.clone(),
                copies: 2,
                interleave_bias: 0.0,
            },
        )
        .unwrap();
        assert_eq!(seq.edges(), &[(0, 1), (1, 2), (3, 4), (4, 5)]);
    }

    #[test]
    fn colored_family_colors_every_edge() {
        let g = generate_graph(
            3,
            Family::Colored {
                base: Box::new(Family::RandomGraph { n: 8, edge_prob: 0.4 }),
                palette: 3,
            },
        )
        .unwrap();
        assert!(g.is_colored());
        assert!(g.colors().unwrap().iter().all(|c| c.0 < 3));
    }

    #[test]
    fn invalid_specs() {
        assert!(generate_graph(0, Family::RandomGraph { n: 3, edge_prob: 1.5 }).is_err());
        assert!(generate_graph(
            0,
            Family::Inflate {
                core: OrderedGraph::new(3, [(0, 1)]).unwrap(),
                steps: 2,
                isolated: 0
            }
        )
        .is_err());
        assert!(generate_graph(
            0,
            Family::Colored {
                base: Box::new(Family::Permutation { size: 3 }),
                palette: 2
            }
        )
        .is_err());
        assert!(enumerate_all(&EnumFamily::Permutations { size: 13 }).is_err());
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_all(&EnumFamily::Matchings { edges: 1 }).unwrap().count(), 1);
        let two: Vec<OrderedGraph> = enumerate_all(&EnumFamily::Matchings { edges: 2 })
            .unwrap()
            .filter_map(Instance::into_graph)
            .collect();
        let edge_lists: Vec<&[Edge]> = two.iter().map(|g| g.edges()).collect();
        assert_eq!(
            edge_lists,
            vec![&[(0, 1), (2, 3)][..], &[(0, 2), (1, 3)][..], &[(0, 3), (1, 2)][..]]
        );
        assert_eq!(enumerate_all(&EnumFamily::Permutations { size: 3 }).unwrap().count(), 6);
    }

    #[test]
    fn h0_factor_enumeration_is_exhaustive_and_distinct() {
        let p3 = OrderedGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        for copies in 0..=3 {
            let fam = EnumFamily::H0Factors {
                template: p3.clone(),
                copies,
            };
            let all: Vec<OrderedGraph> = enumerate_all(&fam).unwrap().filter_map(Instance::into_graph).collect();
            let distinct: HashSet<_> = all.iter().cloned().collect();
            assert_eq!(distinct.len(), all.len());
            let expected = if copies == 0 { 1 } else { enumeration_count(&fam) as usize };
            assert_eq!(all.len(), expected);
        }
        // K2 factors are exactly the perfect matchings
        let k2 = edge();
        let factors: Vec<OrderedGraph> = enumerate_all(&EnumFamily::H0Factors {
            template: k2,
            copies: 3,
        })
        .unwrap()
        .filter_map(Instance::into_graph)
        .collect();
        let matchings: Vec<OrderedGraph> = enumerate_all(&EnumFamily::Matchings { edges: 3 })
            .unwrap()
            .filter_map(Instance::into_graph)
            .collect();
        assert_eq!(factors, matchings);
    }

    #[test]
    fn manifest_lines() {
        let e: ManifestEntry = "inflate 17 corpus/inflate-17.og".parse().unwrap();
        assert_eq!(e.key, 17);
        assert_eq!(e.to_string(), "inflate 17 corpus/inflate-17.og");
        assert!("inflate x path".parse::<ManifestEntry>().is_err());
    }
}
