//! Core extraction. Cores that are matchings come out of the collapse in
//! polynomial time; anything else goes through the guarded brute search.

use crate::brute::{core_brute_detailed, is_core_brute_with, non_surjective_endomorphism, Guards, RetractionOrder};
use crate::collapse::{collapse_to_matching_with, CollapseOptions};
use crate::error::Result;
use crate::graph::{check_hom, HomMap, OrderedGraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoreMethod {
    MatchingCollapse,
    Brute,
}

impl CoreMethod {
    pub fn name(self) -> &'static str {
        match self {
            CoreMethod::MatchingCollapse => "matching-collapse",
            CoreMethod::Brute => "brute",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreReport {
    pub core: OrderedGraph,
    pub method: CoreMethod,
    /// Homomorphism from the input onto `core`.
    pub to_core: HomMap,
    /// `inclusion[i]` is the input vertex playing core vertex `i`.
    pub inclusion: Vec<Vertex>,
    /// Set once `is_core_brute` has confirmed `core`.
    pub is_certified: bool,
}

impl CoreReport {
    /// Both directions of the homomorphic equivalence hold on `g`.
    pub fn witnesses_hold(&self, g: &OrderedGraph) -> Result<bool> {
        Ok(check_hom(g, &self.core, &self.to_core)? && check_hom(&self.core, g, &self.inclusion)?)
    }

    /// Runs the brute core check on the result and records the outcome.
    pub fn certify(&mut self, guards: &Guards) -> Result<bool> {
        self.is_certified = is_core_brute_with(&self.core, guards)?;
        Ok(self.is_certified)
    }

    /// Endomorphism of the input obtained by retracting onto the core.
    pub fn retraction(&self) -> HomMap {
        HomMap(self.to_core.iter().map(|&x| self.inclusion[x]).collect())
    }
}

fn collapse_core(g: &OrderedGraph, color_aware: bool) -> Option<CoreReport> {
    let c = collapse_to_matching_with(
        g,
        CollapseOptions {
            color_aware,
            fixpoint: true,
        },
    );
    c.is_matching_image.then_some(CoreReport {
        core: c.image,
        method: CoreMethod::MatchingCollapse,
        to_core: c.quotient_map,
        inclusion: c.embedding,
        is_certified: false,
    })
}

/// The core of `g` (colors ignored) when it is a matching, else `None`.
pub fn matching_core(g: &OrderedGraph) -> Option<CoreReport> {
    collapse_core(&g.uncolored(), false)
}

/// As [`matching_core`], keeping edge colors.
pub fn matching_core_colored(g: &OrderedGraph) -> Option<CoreReport> {
    collapse_core(g, true)
}

/// The core of `g` by iterated retraction. The result is certified by
/// construction.
pub fn brute_core(g: &OrderedGraph, guards: &Guards) -> Result<CoreReport> {
    let b = core_brute_detailed(g, guards, RetractionOrder::Forward)?;
    Ok(CoreReport {
        core: b.core,
        method: CoreMethod::Brute,
        to_core: b.to_core,
        inclusion: b.retained,
        is_certified: true,
    })
}

/// Matching collapse when it applies, brute retraction otherwise.
pub fn find_core(g: &OrderedGraph, guards: &Guards) -> Result<CoreReport> {
    let fast = if g.is_colored() {
        matching_core_colored(g)
    } else {
        matching_core(g)
    };
    match fast {
        Some(report) => Ok(report),
        None => brute_core(g, guards),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreDecision {
    /// `g` has a non-surjective endomorphism.
    pub non_surjective: bool,
    pub witness: Option<HomMap>,
    pub method: CoreMethod,
    pub nodes: u64,
}

/// Decides whether `g` has a non-surjective endomorphism. Colors are
/// respected when present.
pub fn decide_core(g: &OrderedGraph, guards: &Guards) -> Result<CoreDecision> {
    let fast = if g.is_colored() {
        matching_core_colored(g)
    } else {
        matching_core(g)
    };
    if let Some(report) = fast {
        if report.core.n() < g.n() {
            return Ok(CoreDecision {
                non_surjective: true,
                witness: Some(report.retraction()),
                method: CoreMethod::MatchingCollapse,
                nodes: 0,
            });
        }
        if g.is_matching() {
            return Ok(CoreDecision {
                non_surjective: false,
                witness: None,
                method: CoreMethod::MatchingCollapse,
                nodes: 0,
            });
        }
    }
    let outcome = non_surjective_endomorphism(g, guards)?;
    Ok(CoreDecision {
        non_surjective: outcome.witness.is_some(),
        witness: outcome.witness,
        method: CoreMethod::Brute,
        nodes: outcome.nodes,
    })
}
