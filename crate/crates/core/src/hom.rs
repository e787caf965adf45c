//! Graph homomorphism search, cores and homomorphic equivalence.

use crate::bitset::VertexSet;
use crate::canon;
use crate::clique;
use crate::graph::Graph;
use serde::{Deserialize, Serialize};

/// Default node budget for a single homomorphism search.
pub const DEFAULT_HOM_BUDGET: u64 = 5_000_000;

/// An explicit vertex map `source -> target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomMap {
    pub map: Vec<usize>,
}

impl HomMap {
    /// Checks that every edge of `g` lands on an edge of `h`.
    pub fn verify(&self, g: &Graph, h: &Graph) -> bool {
        self.map.len() == g.n()
            && self.map.iter().all(|&x| x < h.n())
            && g.edges().iter().all(|&(u, v)| h.adjacent(self.map[u], self.map[v]))
    }

    pub fn compose(&self, then: &HomMap) -> HomMap {
        HomMap {
            map: self.map.iter().map(|&x| then.map[x]).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomResult {
    Found(HomMap),
    None,
    Inconclusive,
}

impl HomResult {
    pub fn is_found(&self) -> bool {
        matches!(self, HomResult::Found(_))
    }
}

/// Why a search was decided without (or before) backtracking.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cutoff {
    /// Source has no edges: everything maps to one target vertex.
    EdgelessSource,
    /// Source has an edge, target has none.
    EdgelessTarget,
    /// A source clique larger than a proper colouring of the target.
    CliqueExceedsColouring,
    /// A source odd cycle shorter than every target odd cycle.
    OddGirth,
}

#[derive(Clone, Debug)]
pub struct HomOptions {
    pub budget: u64,
    /// Allowed images of the first search variable; used for symmetry
    /// breaking with target orbit representatives.
    pub first_images: Option<Vec<usize>>,
}

impl Default for HomOptions {
    fn default() -> Self {
        HomOptions {
            budget: DEFAULT_HOM_BUDGET,
            first_images: None,
        }
    }
}

/// Sound checks that decide some instances outright.
pub fn precheck(g: &Graph, h: &Graph) -> Option<(Cutoff, bool)> {
    if !g.has_edges() {
        return Some((Cutoff::EdgelessSource, h.n() > 0 || g.n() == 0));
    }
    if !h.has_edges() {
        return Some((Cutoff::EdgelessTarget, false));
    }
    // A homomorphism maps a k-clique injectively onto a k-clique, and any
    // proper colouring of h pulls back to g, so ω(g) ≤ ω(h) ≤ χ(h).
    if clique::greedy_clique(g).len() > clique::greedy_colour_count(h) {
        return Some((Cutoff::CliqueExceedsColouring, false));
    }
    // An odd cycle maps to a closed odd walk, which contains an odd cycle
    // no longer than itself.
    if let Some(og) = g.odd_girth() {
        match h.odd_girth() {
            None => return Some((Cutoff::OddGirth, false)),
            Some(oh) if oh > og => return Some((Cutoff::OddGirth, false)),
            _ => {}
        }
    }
    None
}

struct Csp<'a> {
    g: &'a Graph,
    h: &'a Graph,
    vars: &'a [usize],
    nodes: u64,
    budget: u64,
    value_order: &'a [usize],
}

impl Csp<'_> {
    fn solve(&mut self, domains: &mut [VertexSet], assign: &mut [usize]) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        // Smallest domain first, ties by more constraints, then index.
        let var = self
            .vars
            .iter()
            .copied()
            .filter(|&v| assign[v] == usize::MAX)
            .min_by_key(|&v| (domains[v].len(), usize::MAX - self.g.degree(v), v));
        let Some(var) = var else {
            return Some(true);
        };
        let dom = domains[var].clone();
        for &t in self.value_order {
            if !dom.contains(t) {
                continue;
            }
            assign[var] = t;
            let mut saved = Vec::new();
            let mut ok = true;
            for u in self.g.neighbors(var).iter() {
                if assign[u] == usize::MAX {
                    let nd = domains[u].intersection(self.h.neighbors(t));
                    if nd.is_empty() {
                        ok = false;
                        break;
                    }
                    if nd != domains[u] {
                        saved.push((u, std::mem::replace(&mut domains[u], nd)));
                    }
                }
            }
            if ok {
                match self.solve(domains, assign) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
            }
            for (u, d) in saved.into_iter().rev() {
                domains[u] = d;
            }
            assign[var] = usize::MAX;
        }
        Some(false)
    }
}

/// Searches for a homomorphism `g -> h` with the given options.
pub fn hom_search(g: &Graph, h: &Graph, opts: &HomOptions) -> HomResult {
    if let Some((_, exists)) = precheck(g, h) {
        if !exists {
            return HomResult::None;
        }
        if !g.has_edges() {
            let target = opts.first_images.as_ref().and_then(|f| f.first().copied()).unwrap_or(0);
            return HomResult::Found(HomMap { map: vec![target; g.n()] });
        }
    }
    let mut value_order: Vec<usize> = (0..h.n()).collect();
    value_order.sort_by_key(|&t| (std::cmp::Reverse(h.degree(t)), t));
    let mut assign = vec![usize::MAX; g.n()];
    let mut nodes = 0u64;
    // Components are independent; search each one on its own.
    let comps = g.components();
    for (ci, comp) in comps.iter().enumerate() {
        let mut domains = vec![h.vertex_set(); g.n()];
        if ci == 0 {
            if let Some(fi) = &opts.first_images {
                // Pin the highest-degree vertex of the first component.
                let pin = *comp.iter().max_by_key(|&&v| (g.degree(v), usize::MAX - v)).unwrap();
                domains[pin] = VertexSet::from_iter_with_capacity(h.n(), fi.iter().copied());
            }
        }
        if comp.len() == 1 {
            assign[comp[0]] = domains[comp[0]].first().unwrap_or(0);
            continue;
        }
        let mut csp = Csp {
            g,
            h,
            vars: comp,
            nodes,
            budget: opts.budget,
            value_order: &value_order,
        };
        match csp.solve(&mut domains, &mut assign) {
            Some(true) => nodes = csp.nodes,
            Some(false) => return HomResult::None,
            None => return HomResult::Inconclusive,
        }
    }
    let m = HomMap { map: assign };
    debug_assert!(m.verify(g, h));
    HomResult::Found(m)
}

pub fn hom_exists(g: &Graph, h: &Graph, budget: u64) -> HomResult {
    hom_search(
        g,
        h,
        &HomOptions {
            budget,
            first_images: None,
        },
    )
}

/// Result of a core computation.
#[derive(Clone, Debug)]
pub struct CoreResult {
    /// Vertices of the input inducing the core.
    pub vertices: Vec<usize>,
    pub core: Graph,
    /// Retraction-like homomorphism from the input onto the core (indices
    /// into `core`).
    pub hom: HomMap,
}

/// Core of `g`, or `None` if some search ran out of budget.
pub fn core_of(g: &Graph, budget: u64) -> Option<CoreResult> {
    let mut verts: Vec<usize> = (0..g.n()).collect();
    let mut cur = g.clone();
    // Map from the input into the current graph.
    let mut into: Vec<usize> = (0..g.n()).collect();
    'outer: loop {
        let orb = if cur.n() <= 200 {
            canon::canonical_form(&cur).orbits()
        } else {
            (0..cur.n()).collect()
        };
        for v in 0..cur.n() {
            if orb[v] != v {
                continue;
            }
            let sub = cur.without_vertex(v);
            match hom_exists(&cur, &sub, budget) {
                HomResult::Found(f) => {
                    // Shrink to the image of the endomorphism.
                    let sub_idx: Vec<usize> = (0..cur.n()).filter(|&u| u != v).collect();
                    let mut image: Vec<usize> = f.map.iter().map(|&x| sub_idx[x]).collect();
                    image.sort_unstable();
                    image.dedup();
                    let mut pos = vec![usize::MAX; cur.n()];
                    for (i, &u) in image.iter().enumerate() {
                        pos[u] = i;
                    }
                    into = into.iter().map(|&x| pos[sub_idx[f.map[x]]]).collect();
                    verts = image.iter().map(|&u| verts[u]).collect();
                    cur = cur.induced(&image);
                    continue 'outer;
                }
                HomResult::None => {}
                HomResult::Inconclusive => return None,
            }
        }
        break;
    }
    let hom = HomMap { map: into };
    debug_assert!(hom.verify(g, &cur));
    Some(CoreResult {
        vertices: verts,
        core: cur,
        hom,
    })
}

/// Whether `g` is a core; `None` when the budget runs out.
pub fn is_core(g: &Graph, budget: u64) -> Option<bool> {
    core_of(g, budget).map(|c| c.core.n() == g.n())
}

/// Homomorphisms both ways, or `None` if undecided within budget.
pub fn hom_equivalent(g: &Graph, h: &Graph, budget: u64) -> Option<bool> {
    match (hom_exists(g, h, budget), hom_exists(h, g, budget)) {
        (HomResult::Found(_), HomResult::Found(_)) => Some(true),
        (HomResult::None, _) | (_, HomResult::None) => Some(false),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, kneser, wheel};

    const B: u64 = DEFAULT_HOM_BUDGET;

    #[test]
    fn odd_cycles() {
        let c5 = cycle(5).unwrap();
        let c7 = cycle(7).unwrap();
        match hom_exists(&c7, &c5, B) {
            HomResult::Found(m) => assert!(m.verify(&c7, &c5)),
            r => panic!("{r:?}"),
        }
        assert_eq!(hom_exists(&c5, &c7, B), HomResult::None);
        assert_eq!(hom_exists(&c5, &complete(2), B), HomResult::None);
        assert!(hom_exists(&c5, &c5, B).is_found());
    }

    #[test]
    fn cores() {
        let c6 = cycle(6).unwrap();
        assert_eq!(core_of(&c6, B).unwrap().core.n(), 2);
        let k5e = complete(5).without_edge(0, 1);
        let c = core_of(&k5e, B).unwrap();
        assert!(c.core.is_complete() && c.core.n() == 4);
        let u = cycle(5).unwrap().disjoint_union(&cycle(7).unwrap()).unwrap();
        let c = core_of(&u, B).unwrap();
        assert!(canon::isomorphic(&c.core, &cycle(5).unwrap()));
        assert!(c.hom.verify(&u, &c.core));
        for g in [complete(4), cycle(7).unwrap(), wheel(5).unwrap(), kneser(5, 2).unwrap()] {
            assert_eq!(is_core(&g, B), Some(true));
        }
    }

    #[test]
    fn equivalence() {
        assert_eq!(hom_equivalent(&cycle(6).unwrap(), &complete(2), B), Some(true));
        assert_eq!(hom_equivalent(&cycle(5).unwrap(), &cycle(7).unwrap(), B), Some(false));
    }

    #[test]
    fn pinned_first_image() {
        let c5 = cycle(5).unwrap();
        let r = hom_search(
            &c5,
            &c5,
            &HomOptions {
                budget: B,
                first_images: Some(vec![3]),
            },
        );
        let HomResult::Found(m) = r else { panic!() };
        assert!(m.verify(&c5, &c5));
        assert!(m.map.contains(&3));
    }
}
