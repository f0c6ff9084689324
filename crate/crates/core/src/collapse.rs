//! Greedy collapse of an ordered graph onto an ordered matching, and the
//! decision procedure for homomorphisms into a matching that is exponential
//! only in the size of the matching.
//!
//! A collapse block is a pair of independent intervals `(L, R)`, `L` before
//! `R`, with `N(L) = R` and `N(R) = L`. Such a block is a union of connected
//! components and can be retracted onto any one of its edges. The collapse
//! scans left to right for blocks with the longest possible `L`, contracts
//! them, and repeats until a pass contracts nothing.
//!
//! Isolated vertices take no part in blocks: they are set aside before the
//! scan and mapped to the image of the nearest non-isolated vertex on their
//! left (or the first image vertex if there is none).

use itertools::Itertools;
use rayon::prelude::*;

use crate::graph::{check_hom, Edge, HomMap, OrderedGraph, OrderedMatching, Vertex};

const NONE: usize = usize::MAX;

/// Idempotent range queries over a fixed array.
struct SparseTable {
    levels: Vec<Vec<usize>>,
    op: fn(usize, usize) -> usize,
}

impl SparseTable {
    fn new(base: Vec<usize>, op: fn(usize, usize) -> usize) -> Self {
        let mut levels = vec![base];
        let mut width = 1;
        while 2 * width <= levels[0].len() {
            let prev = levels.last().unwrap();
            let next = (0..prev.len() - width).map(|i| op(prev[i], prev[i + width])).collect();
            levels.push(next);
            width *= 2;
        }
        SparseTable { levels, op }
    }

    /// Query over `lo..=hi`.
    fn query(&self, lo: usize, hi: usize) -> usize {
        let k = (hi - lo + 1).ilog2() as usize;
        let row = &self.levels[k];
        (self.op)(row[lo], row[hi + 1 - (1 << k)])
    }
}

/// A graph restricted to a vertex subset, with positions in place of labels.
struct Snapshot<'a> {
    g: &'a OrderedGraph,
    verts: Vec<Vertex>,
    nbrs: Vec<Vec<usize>>,
    min_nbr: Vec<usize>,
    min_table: SparseTable,
    max_table: SparseTable,
}

impl<'a> Snapshot<'a> {
    fn new(g: &'a OrderedGraph, verts: Vec<Vertex>) -> Self {
        let mut pos = vec![NONE; g.n()];
        for (i, &v) in verts.iter().enumerate() {
            pos[v] = i;
        }
        let nbrs: Vec<Vec<usize>> = verts
            .iter()
            .map(|&v| {
                g.neighbors(v)
                    .iter()
                    .map(|&w| pos[w])
                    .filter(|&p| p != NONE)
                    .collect()
            })
            .collect();
        let min_nbr: Vec<usize> = nbrs.iter().map(|l| l.first().copied().unwrap_or(NONE)).collect();
        let max_nbr: Vec<usize> = nbrs.iter().map(|l| l.last().copied().unwrap_or(0)).collect();
        Snapshot {
            g,
            verts,
            min_table: SparseTable::new(min_nbr.clone(), usize::min),
            max_table: SparseTable::new(max_nbr, usize::max),
            nbrs,
            min_nbr,
        }
    }

    fn len(&self) -> usize {
        self.verts.len()
    }

    fn has_left_neighbor(&self, p: usize) -> bool {
        self.min_nbr[p] < p
    }

    /// Longest `L = [start..=j]` forming a valid block, as
    /// `(j, r_lo, r_hi)` with `R = [r_lo..=r_hi]` in positions.
    ///
    /// `L` grows while the new vertex has no neighbor to its left; that
    /// keeps `L` independent with all its neighbors to the right. A length
    /// is valid when `N(L)` is contiguous and every neighbor of `N(L)` lies
    /// inside `L`, which also makes `R` independent.
    fn grow_block(&self, start: usize, color_aware: bool, mark: &mut [usize]) -> Option<(usize, usize, usize)> {
        if self.nbrs[start].is_empty() || self.has_left_neighbor(start) {
            return None;
        }
        let block_color = if color_aware {
            let p = start;
            self.g.color(self.verts[p], self.verts[self.nbrs[p][0]])
        } else {
            None
        };
        let (mut count, mut r_lo, mut r_hi) = (0usize, NONE, 0usize);
        let mut best = None;
        for j in start..self.len() {
            if j > start && self.has_left_neighbor(j) {
                break;
            }
            if color_aware
                && self.nbrs[j]
                    .iter()
                    .any(|&q| self.g.color(self.verts[j], self.verts[q]) != block_color)
            {
                // colors only accumulate, so no longer L can be valid
                break;
            }
            for &q in &self.nbrs[j] {
                if mark[q] != start {
                    mark[q] = start;
                    count += 1;
                    r_lo = r_lo.min(q);
                    r_hi = r_hi.max(q);
                }
            }
            if count > 0
                && r_hi - r_lo + 1 == count
                && self.min_table.query(r_lo, r_hi) >= start
                && self.max_table.query(r_lo, r_hi) <= j
            {
                best = Some((j, r_lo, r_hi));
            }
        }
        best
    }
}

/// Contractible pair of intervals. Vertex ids refer to the input graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseBlock {
    pub left: Vec<Vertex>,
    pub right: Vec<Vertex>,
    /// Edge at the smallest vertex of `left`, towards its smallest neighbor.
    pub representative: Edge,
    /// Zero-based pass in which the block was contracted.
    pub pass: usize,
}

impl CollapseBlock {
    pub fn is_trivial(&self) -> bool {
        self.left.len() == 1 && self.right.len() == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseResult {
    /// The quotient graph, an induced subgraph of the input relabeled.
    pub image: OrderedGraph,
    /// Homomorphism from the input onto `image`.
    pub quotient_map: HomMap,
    /// Inclusion of `image` back into the input.
    pub embedding: Vec<Vertex>,
    /// Non-trivial blocks in contraction order.
    pub blocks: Vec<CollapseBlock>,
    pub is_matching_image: bool,
    pub passes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CollapseOptions {
    /// Require every edge in a block to share one color.
    pub color_aware: bool,
    /// Repeat passes until nothing contracts; `false` runs a single pass.
    pub fixpoint: bool,
}

impl Default for CollapseOptions {
    fn default() -> Self {
        CollapseOptions {
            color_aware: false,
            fixpoint: true,
        }
    }
}

/// Block starting at `start` in `g` as given (isolated vertices included),
/// with `L` as long as possible. `None` if `start` has a neighbor on its
/// left, has no neighbors, or no length of `L` gives a valid block.
pub fn find_collapse_block(g: &OrderedGraph, start: Vertex, opts: CollapseOptions) -> Option<CollapseBlock> {
    if start >= g.n() {
        return None;
    }
    let snap = Snapshot::new(g, (0..g.n()).collect());
    let mut mark = vec![NONE; g.n()];
    let (j, r_lo, r_hi) = snap.grow_block(start, opts.color_aware, &mut mark)?;
    Some(CollapseBlock {
        left: (start..=j).collect(),
        right: (r_lo..=r_hi).collect(),
        representative: (start, g.neighbors(start)[0]),
        pass: 0,
    })
}

/// Color-blind collapse with fixpoint iteration.
pub fn collapse_to_matching(g: &OrderedGraph) -> CollapseResult {
    collapse_to_matching_with(g, CollapseOptions::default())
}

pub fn collapse_to_matching_with(g: &OrderedGraph, opts: CollapseOptions) -> CollapseResult {
    let plain;
    let g = if !opts.color_aware && g.is_colored() {
        plain = g.uncolored();
        &plain
    } else {
        g
    };
    let n = g.n();
    if g.edge_count() == 0 {
        let image_n = n.min(1);
        return CollapseResult {
            image: OrderedGraph::empty(image_n),
            quotient_map: HomMap(vec![0; n]),
            embedding: (0..image_n).collect(),
            blocks: Vec::new(),
            is_matching_image: n == 0,
            passes: 0,
        };
    }

    let mut alive: Vec<Vertex> = (0..n).filter(|&v| !g.is_isolated(v)).collect();
    let mut rep: Vec<Vertex> = (0..n).collect();
    let mut blocks = Vec::new();
    let mut mark = vec![NONE; n];
    let mut passes = 0;
    loop {
        let snap = Snapshot::new(g, alive.clone());
        mark[..snap.len()].iter_mut().for_each(|m| *m = NONE);
        let mut removed = vec![false; snap.len()];
        let mut changed = false;
        let mut p = 0;
        while p < snap.len() {
            let Some((j, r_lo, r_hi)) = snap.grow_block(p, opts.color_aware, &mut mark) else {
                p += 1;
                continue;
            };
            if j > p || r_hi > r_lo {
                let l = snap.verts[p];
                let r_pos = snap.nbrs[p][0];
                let r = snap.verts[r_pos];
                for q in (p..=j).filter(|&q| q != p) {
                    removed[q] = true;
                    rep[snap.verts[q]] = l;
                }
                for q in (r_lo..=r_hi).filter(|&q| q != r_pos) {
                    removed[q] = true;
                    rep[snap.verts[q]] = r;
                }
                blocks.push(CollapseBlock {
                    left: snap.verts[p..=j].to_vec(),
                    right: snap.verts[r_lo..=r_hi].to_vec(),
                    representative: (l, r),
                    pass: passes,
                });
                changed = true;
            }
            p = j + 1;
        }
        passes += 1;
        alive = snap
            .verts
            .iter()
            .zip(&removed)
            .filter(|(_, &gone)| !gone)
            .map(|(&v, _)| v)
            .collect();
        if !changed || !opts.fixpoint {
            break;
        }
    }

    let mut image_index = vec![NONE; n];
    for (i, &v) in alive.iter().enumerate() {
        image_index[v] = i;
    }
    // isolated vertices follow the image of the nearest vertex to their left
    let mut last = 0;
    let quotient: Vec<usize> = (0..n)
        .map(|v| {
            if !g.is_isolated(v) {
                let mut r = v;
                while rep[r] != r {
                    r = rep[r];
                }
                last = image_index[r];
            }
            last
        })
        .collect();
    let image = g.induced_subgraph(&alive);
    CollapseResult {
        is_matching_image: image.is_matching(),
        image,
        quotient_map: HomMap(quotient),
        embedding: alive,
        blocks,
        passes,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FptConfig {
    /// Worker threads for the subset enumeration; `0` or `1` runs inline.
    pub threads: usize,
    pub fixpoint: bool,
}

impl Default for FptConfig {
    fn default() -> Self {
        FptConfig {
            threads: 1,
            fixpoint: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FptOutcome {
    pub witness: Option<HomMap>,
    /// Edge count of the collapsed image, when it is a matching.
    pub collapsed_edges: Option<usize>,
    pub subsets_examined: u64,
}

/// Decides `g -> m` ignoring colors. The witness, when present, passes
/// [`check_hom`] on the uncolored graphs.
pub fn hom_to_matching_fpt(g: &OrderedGraph, m: &OrderedMatching) -> Option<HomMap> {
    hom_to_matching_fpt_with(g, m, false, &FptConfig::default()).witness
}

/// Decides `g -> m` preserving edge colors when both graphs are colored.
pub fn hom_to_matching_fpt_colored(g: &OrderedGraph, m: &OrderedMatching) -> Option<HomMap> {
    hom_to_matching_fpt_with(g, m, true, &FptConfig::default()).witness
}

pub fn hom_to_matching_fpt_with(
    g: &OrderedGraph,
    m: &OrderedMatching,
    colored: bool,
    config: &FptConfig,
) -> FptOutcome {
    let color_aware = colored && g.is_colored() && m.is_colored();
    let (g, m) = if color_aware {
        (g.clone(), m.as_graph().clone())
    } else {
        (g.uncolored(), m.uncolored())
    };
    let none = |collapsed_edges, subsets_examined| FptOutcome {
        witness: None,
        collapsed_edges,
        subsets_examined,
    };
    if g.n() == 0 {
        return FptOutcome {
            witness: Some(HomMap(Vec::new())),
            collapsed_edges: Some(0),
            subsets_examined: 0,
        };
    }
    if m.n() == 0 {
        return none(None, 0);
    }
    if g.edge_count() == 0 {
        return FptOutcome {
            witness: Some(HomMap(vec![0; g.n()])),
            collapsed_edges: None,
            subsets_examined: 0,
        };
    }
    let collapsed = collapse_to_matching_with(
        &g,
        CollapseOptions {
            color_aware,
            fixpoint: config.fixpoint,
        },
    );
    if !collapsed.is_matching_image {
        return none(None, 0);
    }
    let g_edges = collapsed.image.edge_count();
    if g_edges > m.edge_count() {
        return none(Some(g_edges), 0);
    }

    let try_subset = |chosen: &Vec<usize>| -> Option<HomMap> {
        let mut verts: Vec<Vertex> = chosen
            .iter()
            .flat_map(|&i| {
                let (u, v) = m.edges()[i];
                [u, v]
            })
            .collect();
        verts.sort_unstable();
        let sub = m.induced_subgraph(&verts);
        if !collapsed.image.ordered_isomorphic(&sub) {
            return None;
        }
        let f = HomMap(collapsed.quotient_map.iter().map(|&x| verts[x]).collect());
        check_hom(&g, &m, &f).ok()?.then_some(f)
    };

    let (witness, examined) = first_subset(m.edge_count(), g_edges, config.threads, try_subset);
    FptOutcome {
        witness,
        collapsed_edges: Some(g_edges),
        subsets_examined: examined,
    }
}

/// Tries the `size`-subsets of `0..count` in lexicographic order and
/// returns the first accepted result with the number of subsets handed
/// out. With several threads, chunks are searched in parallel but the
/// earliest success in enumeration order wins.
pub(crate) fn first_subset<T, F>(count: usize, size: usize, threads: usize, accept: F) -> (Option<T>, u64)
where
    T: Send,
    F: Fn(&Vec<usize>) -> Option<T> + Sync,
{
    let subsets = (0..count).combinations(size);
    if threads <= 1 {
        let mut examined = 0;
        for chosen in subsets {
            examined += 1;
            if let Some(found) = accept(&chosen) {
                return (Some(found), examined);
            }
        }
        return (None, examined);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    pool.install(|| {
        let mut examined = 0;
        for chunk in &subsets.chunks(4096) {
            let chunk: Vec<Vec<usize>> = chunk.collect();
            examined += chunk.len() as u64;
            if let Some(found) = chunk.par_iter().find_map_first(&accept) {
                return (Some(found), examined);
            }
        }
        (None, examined)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute::{hom_exists_brute, is_core_brute};

    fn g(n: usize, edges: &[(usize, usize)]) -> OrderedGraph {
        OrderedGraph::new(n, edges.iter().copied()).unwrap()
    }

    fn matching(n: usize, edges: &[(usize, usize)]) -> OrderedMatching {
        OrderedMatching::new(g(n, edges)).unwrap()
    }

    fn crossing() -> OrderedGraph {
        g(4, &[(0, 2), (1, 3)])
    }

    fn sequential() -> OrderedGraph {
        g(4, &[(0, 1), (2, 3)])
    }

    fn nested() -> OrderedGraph {
        g(4, &[(0, 3), (1, 2)])
    }

    #[test]
    fn sparse_table_matches_scan() {
        let data = vec![5, 3, 8, 1, 9, 2, 7, 7, 0, 4, 6];
        let mins = SparseTable::new(data.clone(), usize::min);
        let maxs = SparseTable::new(data.clone(), usize::max);
        for lo in 0..data.len() {
            for hi in lo..data.len() {
                assert_eq!(mins.query(lo, hi), *data[lo..=hi].iter().min().unwrap());
                assert_eq!(maxs.query(lo, hi), *data[lo..=hi].iter().max().unwrap());
            }
        }
    }

    #[test]
    fn find_block_examples() {
        let opts = CollapseOptions::default();
        let b = find_collapse_block(&crossing(), 0, opts).unwrap();
        assert_eq!((b.left, b.right), (vec![0, 1], vec![2, 3]));
        let b = find_collapse_block(&sequential(), 0, opts).unwrap();
        assert_eq!((b.left, b.right), (vec![0], vec![1]));
        let b = find_collapse_block(&nested(), 0, opts).unwrap();
        assert_eq!((b.left, b.right), (vec![0, 1], vec![2, 3]));
        // vertex with a left neighbor is not a start
        assert!(find_collapse_block(&crossing(), 2, opts).is_none());
    }

    #[test]
    fn find_block_can_skip_invalid_prefixes() {
        // L = {0} gives R = {2} but N(2) = {0, 1}; L = {0, 1} closes up.
        let x = g(4, &[(0, 2), (1, 2), (1, 3)]);
        let b = find_collapse_block(&x, 0, CollapseOptions::default()).unwrap();
        assert_eq!((b.left, b.right), (vec![0, 1], vec![2, 3]));
    }

    #[test]
    fn collapse_examples() {
        let c = collapse_to_matching(&crossing());
        assert_eq!(c.image, g(2, &[(0, 1)]));
        assert_eq!(c.quotient_map, HomMap(vec![0, 0, 1, 1]));
        assert!(c.is_matching_image);

        let c = collapse_to_matching(&sequential());
        assert_eq!(c.image, sequential());
        assert!(c.is_matching_image);
        assert!(c.blocks.is_empty());

        let triangle = g(3, &[(0, 1), (0, 2), (1, 2)]);
        let c = collapse_to_matching(&triangle);
        assert_eq!(c.image, triangle);
        assert!(!c.is_matching_image);
    }

    #[test]
    fn star_collapses_onto_one_edge() {
        let star = g(4, &[(0, 1), (0, 2), (0, 3)]);
        let c = collapse_to_matching(&star);
        assert_eq!(c.image, g(2, &[(0, 1)]));
        assert_eq!(c.blocks[0].representative, (0, 1));
    }

    #[test]
    fn fixpoint_confirms_single_pass() {
        let x = g(6, &[(0, 3), (1, 5), (2, 4)]);
        let single = collapse_to_matching_with(
            &x,
            CollapseOptions {
                color_aware: false,
                fixpoint: false,
            },
        );
        let full = collapse_to_matching(&x);
        assert_eq!(single.image, full.image);
        assert_eq!(single.passes, 1);
        assert_eq!(full.passes, 2);
        assert!(check_hom(&x, &full.image, &full.quotient_map).unwrap());
        assert!(is_core_brute(&full.image).unwrap());
    }

    #[test]
    fn isolated_vertices_are_absorbed() {
        // 0-2, 1-4 with 3 isolated between the right endpoints
        let x = g(5, &[(0, 2), (1, 4)]);
        let c = collapse_to_matching(&x);
        assert_eq!(c.image, g(2, &[(0, 1)]));
        assert!(check_hom(&x, &c.image, &c.quotient_map).unwrap());
        let edgeless = OrderedGraph::empty(3);
        let c = collapse_to_matching(&edgeless);
        assert_eq!(c.image.n(), 1);
        assert!(!c.is_matching_image);
    }

    #[test]
    fn colored_collapse_respects_colors() {
        let opts = CollapseOptions {
            color_aware: true,
            fixpoint: true,
        };
        let mono = OrderedGraph::colored(4, [(0, 2, 1), (1, 3, 1)]).unwrap();
        assert_eq!(collapse_to_matching_with(&mono, opts).image.edge_count(), 1);
        let two = OrderedGraph::colored(4, [(0, 2, 1), (1, 3, 2)]).unwrap();
        let c = collapse_to_matching_with(&two, opts);
        assert_eq!(c.image, two);
        // color-blind mode ignores the coloring entirely
        assert_eq!(collapse_to_matching(&two).image, g(2, &[(0, 1)]));
    }

    #[test]
    fn fpt_examples() {
        let edge = matching(2, &[(0, 1)]);
        assert_eq!(hom_to_matching_fpt(&crossing(), &edge), Some(HomMap(vec![0, 0, 1, 1])));
        assert_eq!(hom_to_matching_fpt(&sequential(), &edge), None);
        // a core matching maps to itself by the identity; non-cores fold
        let m = OrderedMatching::new(sequential()).unwrap();
        assert_eq!(hom_to_matching_fpt(&sequential(), &m), Some(HomMap::identity(4)));
        for x in [crossing(), nested()] {
            let m = OrderedMatching::new(x.clone()).unwrap();
            let f = hom_to_matching_fpt(&x, &m).unwrap();
            assert!(check_hom(&x, &m, &f).unwrap());
            assert_eq!(f.image().len(), 2);
        }
        assert_eq!(hom_to_matching_fpt(&g(0, &[]), &edge), Some(HomMap(vec![])));
        assert_eq!(hom_to_matching_fpt(&crossing(), &matching(0, &[])), None);
        assert_eq!(hom_to_matching_fpt(&OrderedGraph::empty(3), &edge), Some(HomMap(vec![0, 0, 0])));
    }

    #[test]
    fn colored_fpt_examples() {
        let e1 = OrderedMatching::new(OrderedGraph::colored(2, [(0, 1, 1)]).unwrap()).unwrap();
        let mono = OrderedGraph::colored(4, [(0, 2, 1), (1, 3, 1)]).unwrap();
        let two = OrderedGraph::colored(4, [(0, 2, 1), (1, 3, 2)]).unwrap();
        assert!(hom_to_matching_fpt_colored(&mono, &e1).is_some());
        assert!(hom_to_matching_fpt_colored(&two, &e1).is_none());
        let m = OrderedMatching::new(two.clone()).unwrap();
        assert_eq!(hom_to_matching_fpt_colored(&two, &m), Some(HomMap::identity(4)));
    }

    #[test]
    fn threaded_enumeration_gives_the_same_witness() {
        let host = matching(10, &[(0, 5), (1, 6), (2, 3), (4, 9), (7, 8)]);
        let x = g(6, &[(0, 3), (1, 4), (2, 5)]);
        let seq = hom_to_matching_fpt_with(&x, &host, false, &FptConfig::default());
        let par = hom_to_matching_fpt_with(
            &x,
            &host,
            false,
            &FptConfig {
                threads: 4,
                fixpoint: true,
            },
        );
        assert_eq!(seq.witness, par.witness);
        assert_eq!(seq.witness.is_some(), hom_exists_brute(&x, &host).unwrap().is_some());
    }
}
