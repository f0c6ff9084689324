//! Matching encodings of permutations.
//!
//! Both constructions start from the separated layout: for a permutation `p`
//! of size `k`, the 1-based edge `(i, k + p(i))` becomes the 0-based edge
//! `(i - 1, k + p(i) - 1)`. Containment of one permutation in another is then
//! equivalent to containment of the separated matchings, and (after
//! inserting auxiliary edges) to the existence of an ordered homomorphism
//! between the gadget matchings.
//!
//! An occurrence of a pattern of length `n` in a host of length `N` is a
//! choice of positions `i_1 < ... < i_n` inside `1..=N`.

use crate::brute::{hom_search, pattern_contains_with, subgraph_search, Guards, Permutation};
use crate::error::Result;
use crate::format::{EdgeClass, EdgeClasses};
use crate::graph::{Edge, OrderedGraph, OrderedMatching};

/// Matching on `2k` vertices with edges `(i - 1, k + p(i) - 1)`, separated
/// at cut `k`.
pub fn perm_to_separated_matching(p: &Permutation) -> OrderedMatching {
    let k = p.len();
    let edges = (1..=k).map(|i| (i - 1, k + p.at(i) - 1));
    let graph = OrderedGraph::new(2 * k, edges).expect("separated layout is a valid graph");
    OrderedMatching::new(graph).expect("separated layout is a matching")
}

/// The injectivity gadget built around the separated layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetMatching {
    pub graph: OrderedMatching,
    pub permutation_edges: Vec<Edge>,
    pub auxiliary_edges: Vec<Edge>,
    pub source: Permutation,
}

impl GadgetMatching {
    pub fn classes(&self) -> EdgeClasses {
        self.permutation_edges
            .iter()
            .map(|&e| (e, EdgeClass::Permutation))
            .chain(self.auxiliary_edges.iter().map(|&e| (e, EdgeClass::Auxiliary)))
            .collect()
    }
}

/// Lays out base vertices `1..=2k` left to right. After every base vertex
/// `i < 2k` an adjacent pair `a_i < b_i` is inserted, and after `b_k` one
/// more pair `c_k < d_k`; each pair is an auxiliary edge. The result is a
/// matching on `6k` vertices with `3k` edges.
pub fn perm_to_gadget_matching(p: &Permutation) -> GadgetMatching {
    let k = p.len();
    let mut base_pos = Vec::with_capacity(2 * k);
    let mut auxiliary_edges = Vec::with_capacity(2 * k);
    let mut next = 0;
    for i in 1..=2 * k {
        base_pos.push(next);
        next += 1;
        if i < 2 * k {
            auxiliary_edges.push((next, next + 1));
            next += 2;
        }
        if i == k {
            auxiliary_edges.push((next, next + 1));
            next += 2;
        }
    }
    debug_assert_eq!(next, 6 * k);
    let permutation_edges: Vec<Edge> = (1..=k)
        .map(|i| (base_pos[i - 1], base_pos[k + p.at(i) - 1]))
        .collect();
    let graph = OrderedGraph::new(next, permutation_edges.iter().chain(&auxiliary_edges).copied())
        .expect("gadget layout is a valid graph");
    GadgetMatching {
        graph: OrderedMatching::new(graph).expect("gadget layout is a matching"),
        permutation_edges,
        auxiliary_edges,
        source: p.clone(),
    }
}

/// Containment answers computed three ways on the separated layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubVerdict {
    pub pattern: bool,
    pub subgraph: bool,
    pub induced_subgraph: bool,
}

impl SubVerdict {
    pub fn agrees(&self) -> bool {
        self.pattern == self.subgraph && self.subgraph == self.induced_subgraph
    }
}

pub fn verify_reduction_sub(pi: &Permutation, host: &Permutation) -> Result<SubVerdict> {
    verify_reduction_sub_with(pi, host, &Guards::default())
}

pub fn verify_reduction_sub_with(pi: &Permutation, host: &Permutation, guards: &Guards) -> Result<SubVerdict> {
    let n = perm_to_separated_matching(pi);
    let m = perm_to_separated_matching(host);
    Ok(SubVerdict {
        pattern: pattern_contains_with(pi, host, guards)?.is_some(),
        subgraph: subgraph_search(&n, &m, false, guards)?.witness.is_some(),
        induced_subgraph: subgraph_search(&n, &m, true, guards)?.witness.is_some(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomVerdict {
    pub pattern: bool,
    pub homomorphism: bool,
}

impl HomVerdict {
    pub fn agrees(&self) -> bool {
        self.pattern == self.homomorphism
    }
}

pub fn verify_reduction_hom(pi: &Permutation, host: &Permutation) -> Result<HomVerdict> {
    verify_reduction_hom_with(pi, host, &Guards::default())
}

pub fn verify_reduction_hom_with(pi: &Permutation, host: &Permutation, guards: &Guards) -> Result<HomVerdict> {
    let n = perm_to_gadget_matching(pi);
    let m = perm_to_gadget_matching(host);
    Ok(HomVerdict {
        pattern: pattern_contains_with(pi, host, guards)?.is_some(),
        homomorphism: hom_search(&n.graph, &m.graph, guards)?.witness.is_some(),
    })
}
