//! Homomorphisms into disjoint unions of a fixed connected ordered core.
//!
//! A graph is an H0-matching for a template `h0` when every connected
//! component is ordered-isomorphic to `h0`; components may interleave.
//! Because `h0` is a connected core, every homomorphism between two such
//! graphs maps each copy identically onto a single copy. Deciding `G -> H`
//! therefore reduces to collapsing `G` to its core (a union of `g'` copies)
//! and searching the `g'`-subsets of `H`'s copies.
//!
//! Colors are ignored throughout.

use crate::brute::{is_core_brute_with, Guards};
use crate::collapse::{first_subset, FptConfig};
use crate::error::{Error, Result};
use crate::graph::{check_hom, HomMap, OrderedGraph, Vertex};

/// `h0` is connected and has no non-surjective endomorphism.
pub fn is_connected_ordered_core(h0: &OrderedGraph, guards: &Guards) -> Result<bool> {
    let h0 = h0.uncolored();
    if !h0.is_connected() {
        return Ok(false);
    }
    is_core_brute_with(&h0, guards)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyDecomposition {
    pub h0: OrderedGraph,
    /// Copies ordered by their first vertex; each tuple is increasing.
    pub copies: Vec<Vec<Vertex>>,
    /// `position_of[v] = (copy index, rank of v inside its copy)`.
    pub position_of: Vec<(usize, usize)>,
}

impl CopyDecomposition {
    pub fn copy_count(&self) -> usize {
        self.copies.len()
    }

    pub fn first_vertices(&self) -> Vec<Vertex> {
        self.copies.iter().map(|c| c[0]).collect()
    }
}

/// Splits `g` into copies of `h0`, or `None` if some component is not an
/// ordered copy of `h0`.
pub fn decompose_into_copies(g: &OrderedGraph, h0: &OrderedGraph) -> Option<CopyDecomposition> {
    let g = g.uncolored();
    let h0 = h0.uncolored();
    let copies = g.components();
    if copies
        .iter()
        .any(|c| c.len() != h0.n() || !g.induced_subgraph(c).ordered_isomorphic(&h0))
    {
        return None;
    }
    let mut position_of = vec![(0, 0); g.n()];
    for (i, copy) in copies.iter().enumerate() {
        for (k, &v) in copy.iter().enumerate() {
            position_of[v] = (i, k);
        }
    }
    Some(CopyDecomposition {
        h0,
        copies,
        position_of,
    })
}

/// A run of copies merged in one pass. `intervals[k]` holds the `k`-th
/// vertices of the merged copies; each is an interval of the order at the
/// time of merging, and `intervals[0]` is the leading run of first vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H0Block {
    pub copies: Vec<usize>,
    pub intervals: Vec<Vec<Vertex>>,
    pub pass: usize,
}

impl H0Block {
    pub fn leading(&self) -> &[Vertex] {
        &self.intervals[0]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H0CollapseResult {
    pub image: OrderedGraph,
    pub quotient_map: HomMap,
    /// `embedding[i]` is the vertex of `G` kept as image vertex `i`.
    pub embedding: Vec<Vertex>,
    /// Indices (into the decomposition) of the copies kept in the image.
    pub kept_copies: Vec<usize>,
    pub blocks: Vec<H0Block>,
    pub passes: usize,
}

impl H0CollapseResult {
    pub fn copy_count(&self) -> usize {
        self.kept_copies.len()
    }
}

fn checked_template(h0: &OrderedGraph, guards: &Guards) -> Result<()> {
    if is_connected_ordered_core(h0, guards)? {
        Ok(())
    } else {
        Err(Error::TemplateNotCore)
    }
}

pub fn collapse_h0(g: &OrderedGraph, h0: &OrderedGraph) -> Result<H0CollapseResult> {
    collapse_h0_with(g, h0, &Guards::default(), true)
}

pub fn collapse_h0_with(g: &OrderedGraph, h0: &OrderedGraph, guards: &Guards, fixpoint: bool) -> Result<H0CollapseResult> {
    checked_template(h0, guards)?;
    let dec = decompose_into_copies(g, h0).ok_or(Error::NotAnH0Matching)?;
    Ok(collapse_decomposed(g.n(), &dec, fixpoint))
}

fn collapse_decomposed(n: usize, dec: &CopyDecomposition, fixpoint: bool) -> H0CollapseResult {
    let h0 = dec.h0.n();
    let mut leader: Vec<usize> = (0..dec.copy_count()).collect();
    let mut alive = vec![true; dec.copy_count()];
    let mut index = vec![usize::MAX; n];
    let mut blocks = Vec::new();
    let mut passes = 0;
    loop {
        let verts: Vec<Vertex> = (0..n).filter(|&v| alive[dec.position_of[v].0]).collect();
        for (i, &v) in verts.iter().enumerate() {
            index[v] = i;
        }
        let mut changed = false;
        let mut p = 0;
        let mut lo = vec![0; h0];
        let mut hi = vec![0; h0];
        while p < verts.len() {
            if dec.position_of[verts[p]].1 != 0 {
                p += 1;
                continue;
            }
            let mut best = None;
            let mut j = p;
            while j < verts.len() && dec.position_of[verts[j]].1 == 0 {
                let copy = &dec.copies[dec.position_of[verts[j]].0];
                for k in 0..h0 {
                    let at = index[copy[k]];
                    if j == p {
                        lo[k] = at;
                        hi[k] = at;
                    } else {
                        lo[k] = lo[k].min(at);
                        hi[k] = hi[k].max(at);
                    }
                }
                let count = j - p + 1;
                if j > p && (0..h0).all(|k| hi[k] - lo[k] + 1 == count) {
                    best = Some(j);
                }
                j += 1;
            }
            let Some(end) = best else {
                p += 1;
                continue;
            };
            let members: Vec<usize> = verts[p..=end].iter().map(|&v| dec.position_of[v].0).collect();
            let head = members[0];
            for &c in &members[1..] {
                alive[c] = false;
                leader[c] = head;
            }
            blocks.push(H0Block {
                intervals: (0..h0)
                    .map(|k| {
                        let mut a: Vec<Vertex> = members.iter().map(|&c| dec.copies[c][k]).collect();
                        a.sort_unstable();
                        a
                    })
                    .collect(),
                copies: members,
                pass: passes,
            });
            changed = true;
            p = end + 1;
        }
        passes += 1;
        if !changed || !fixpoint {
            break;
        }
    }

    let embedding: Vec<Vertex> = (0..n).filter(|&v| alive[dec.position_of[v].0]).collect();
    for (i, &v) in embedding.iter().enumerate() {
        index[v] = i;
    }
    let quotient = (0..n)
        .map(|v| {
            let (mut c, k) = dec.position_of[v];
            while leader[c] != c {
                c = leader[c];
            }
            index[dec.copies[c][k]]
        })
        .collect();
    let plain = if embedding.is_empty() {
        OrderedGraph::empty(0)
    } else {
        // edges of the image only come from kept copies, all of `h0`'s shape
        let index = &index;
        let edges = dec
            .copies
            .iter()
            .enumerate()
            .filter(|&(c, _)| alive[c])
            .flat_map(|(_, copy)| dec.h0.edges().iter().map(move |&(a, b)| (index[copy[a]], index[copy[b]])));
        OrderedGraph::new(embedding.len(), edges).expect("image of disjoint copies")
    };
    H0CollapseResult {
        image: plain,
        quotient_map: HomMap(quotient),
        embedding,
        kept_copies: (0..dec.copy_count()).filter(|&c| alive[c]).collect(),
        blocks,
        passes,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H0Outcome {
    pub witness: Option<HomMap>,
    pub collapsed_copies: usize,
    pub host_copies: usize,
    pub subsets_examined: u64,
}

/// Decides `g -> h` where both are unions of copies of the connected core
/// `h0`. A returned witness always passes [`check_hom`].
pub fn hom_h0_fpt(g: &OrderedGraph, h0: &OrderedGraph, h: &OrderedGraph) -> Result<Option<HomMap>> {
    Ok(hom_h0_fpt_with(g, h0, h, &FptConfig::default(), &Guards::default())?.witness)
}

pub fn hom_h0_fpt_with(
    g: &OrderedGraph,
    h0: &OrderedGraph,
    h: &OrderedGraph,
    config: &FptConfig,
    guards: &Guards,
) -> Result<H0Outcome> {
    checked_template(h0, guards)?;
    let g = g.uncolored();
    let h = h.uncolored();
    let g_dec = decompose_into_copies(&g, h0).ok_or(Error::NotAnH0Matching)?;
    let h_dec = decompose_into_copies(&h, h0).ok_or(Error::NotAnH0Matching)?;
    let collapsed = collapse_decomposed(g.n(), &g_dec, config.fixpoint);
    let wanted = collapsed.copy_count();
    let available = h_dec.copy_count();
    let outcome = |witness, subsets_examined| H0Outcome {
        witness,
        collapsed_copies: wanted,
        host_copies: available,
        subsets_examined,
    };
    if g.n() == 0 {
        return Ok(outcome(Some(HomMap(Vec::new())), 0));
    }
    if wanted > available {
        return Ok(outcome(None, 0));
    }
    let try_subset = |chosen: &Vec<usize>| -> Option<HomMap> {
        let mut verts: Vec<Vertex> = chosen.iter().flat_map(|&c| h_dec.copies[c].iter().copied()).collect();
        verts.sort_unstable();
        if !collapsed.image.ordered_isomorphic(&h.induced_subgraph(&verts)) {
            return None;
        }
        let f = HomMap(collapsed.quotient_map.iter().map(|&x| verts[x]).collect());
        check_hom(&g, &h, &f).ok()?.then_some(f)
    };
    let (witness, examined) = first_subset(available, wanted, config.threads, try_subset);
    Ok(outcome(witness, examined))
}
