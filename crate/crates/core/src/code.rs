//! Explicit `(k, n)` codes: maps `G^k -> H^n` sending distinct non-adjacent
//! pairs to distinct non-adjacent pairs.

use crate::canon;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hom::{hom_search, HomOptions, HomResult};
use crate::invariants;
use serde::{Deserialize, Serialize};

/// Default ceiling on `|V(G^k)|` and `|V(H^n)|` for a single search.
pub const DEFAULT_CODE_MAX_VERTICES: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "CodeMapJson", try_from = "CodeMapJson")]
pub struct CodeMap {
    pub source: Graph,
    pub k: usize,
    pub channel: Graph,
    pub n: usize,
    /// Image of each vertex of `source^k`, as a vertex index of `channel^n`.
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CodeMapJson {
    source: String,
    k: usize,
    channel: String,
    n: usize,
    /// `[source tuple, channel tuple]` for every source tuple.
    table: Vec<(Vec<usize>, Vec<usize>)>,
}

/// Coordinates of vertex `x` of a `len`-th power of a graph on `base` vertices.
pub fn tuple(mut x: usize, base: usize, len: usize) -> Vec<usize> {
    let mut t = vec![0; len];
    for i in (0..len).rev() {
        t[i] = x % base;
        x /= base;
    }
    t
}

pub fn untuple(t: &[usize], base: usize) -> usize {
    t.iter().fold(0, |acc, &c| acc * base + c)
}

impl From<CodeMap> for CodeMapJson {
    fn from(c: CodeMap) -> Self {
        let (gs, hs) = (c.source.n(), c.channel.n());
        let table = c
            .map
            .iter()
            .enumerate()
            .map(|(x, &y)| (tuple(x, gs, c.k), tuple(y, hs, c.n)))
            .collect();
        CodeMapJson {
            source: c.source.to_graph6(),
            k: c.k,
            channel: c.channel.to_graph6(),
            n: c.n,
            table,
        }
    }
}

impl TryFrom<CodeMapJson> for CodeMap {
    type Error = Error;

    fn try_from(j: CodeMapJson) -> Result<Self> {
        let source = Graph::from_graph6(&j.source)?;
        let channel = Graph::from_graph6(&j.channel)?;
        let (gs, hs) = (source.n(), channel.n());
        let size = (gs as u128).checked_pow(j.k as u32).unwrap_or(u128::MAX);
        if j.k == 0 || j.n == 0 || size != j.table.len() as u128 {
            return Err(Error::InvalidParameter("code table does not cover the source power".into()));
        }
        let mut map = vec![usize::MAX; j.table.len()];
        for (from, to) in &j.table {
            if from.len() != j.k || to.len() != j.n || from.iter().any(|&c| c >= gs) || to.iter().any(|&c| c >= hs) {
                return Err(Error::InvalidParameter("malformed code table entry".into()));
            }
            map[untuple(from, gs)] = untuple(to, hs);
        }
        if map.contains(&usize::MAX) {
            return Err(Error::InvalidParameter("code table has missing entries".into()));
        }
        Ok(CodeMap {
            source,
            k: j.k,
            channel,
            n: j.n,
            map,
        })
    }
}

impl CodeMap {
    /// Exhaustive check over all pairs of source tuples.
    pub fn verify(&self) -> bool {
        let (Ok(gk), Ok(hn)) = (self.source.strong_power(self.k), self.channel.strong_power(self.n)) else {
            return false;
        };
        if self.map.len() != gk.n() || self.map.iter().any(|&y| y >= hn.n()) {
            return false;
        }
        for x in 0..gk.n() {
            for y in x + 1..gk.n() {
                if !gk.adjacent(x, y) {
                    let (a, b) = (self.map[x], self.map[y]);
                    if a == b || hn.adjacent(a, b) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The `(km, nm)` code applying `self` to each of `m` blocks.
    pub fn repeat(&self, m: usize) -> Result<CodeMap> {
        let gk = self.source.n().pow(self.k as u32);
        let hn = self.channel.n().pow(self.n as u32);
        let total = crate::graph::check_size((gk as u128).saturating_pow(m as u32), crate::graph::DEFAULT_MAX_VERTICES)?;
        let map = (0..total)
            .map(|x| {
                let blocks = tuple(x, gk, m);
                let imgs: Vec<usize> = blocks.iter().map(|&b| self.map[b]).collect();
                untuple(&imgs, hn)
            })
            .collect();
        Ok(CodeMap {
            source: self.source.clone(),
            k: self.k * m,
            channel: self.channel.clone(),
            n: self.n * m,
            map,
        })
    }

    /// The same map into `H^{n+1}`, fixing the new coordinate to 0.
    pub fn pad(&self) -> CodeMap {
        let hs = self.channel.n();
        CodeMap {
            source: self.source.clone(),
            k: self.k,
            channel: self.channel.clone(),
            n: self.n + 1,
            map: self.map.iter().map(|&y| y * hs).collect(),
        }
    }

    /// Composes `G -> F` at `(k1, n1)` with `F -> H` at `(k2, n2)` into a
    /// `(k1 k2, n1 n2)` code, after repeating each to align powers of `F`.
    /// The result is re-verified.
    pub fn compose(&self, then: &CodeMap) -> Result<CodeMap> {
        if self.channel != then.source {
            return Err(Error::InvalidParameter("codes do not share the middle graph".into()));
        }
        let a = self.repeat(then.k)?;
        let b = then.repeat(self.n)?;
        let c = CodeMap {
            source: self.source.clone(),
            k: a.k,
            channel: then.channel.clone(),
            n: b.n,
            map: a.map.iter().map(|&x| b.map[x]).collect(),
        };
        if !c.verify() {
            return Err(Error::InvalidParameter("composed code failed verification".into()));
        }
        Ok(c)
    }

    pub fn identity(g: &Graph) -> CodeMap {
        CodeMap {
            source: g.clone(),
            k: 1,
            channel: g.clone(),
            n: 1,
            map: (0..g.n()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CodeResult {
    Found(CodeMap),
    None,
    Inconclusive,
}

/// Searches for a `(k, n)` code via a homomorphism between complements of
/// the powers. The first source vertex is pinned to target orbit
/// representatives.
pub fn find_code(g: &Graph, h: &Graph, k: usize, n: usize, budget: u64) -> Result<CodeResult> {
    find_code_limited(g, h, k, n, budget, DEFAULT_CODE_MAX_VERTICES)
}

pub fn find_code_limited(g: &Graph, h: &Graph, k: usize, n: usize, budget: u64, max_vertices: usize) -> Result<CodeResult> {
    let gk = g.strong_power_limited(k, max_vertices)?;
    let hn = h.strong_power_limited(n, max_vertices)?;
    let (src, dst) = (gk.complement(), hn.complement());
    let first_images = (dst.n() <= 200 && dst.n() > 0).then(|| {
        let orb = canon::canonical_form(&dst).orbits();
        (0..dst.n()).filter(|&v| orb[v] == v).collect::<Vec<_>>()
    });
    let opts = HomOptions { budget, first_images };
    Ok(match hom_search(&src, &dst, &opts) {
        HomResult::Found(m) => {
            let c = CodeMap {
                source: g.clone(),
                k,
                channel: h.clone(),
                n,
                map: m.map,
            };
            debug_assert!(c.verify());
            CodeResult::Found(c)
        }
        HomResult::None => CodeResult::None,
        HomResult::Inconclusive => CodeResult::Inconclusive,
    })
}

/// Compress-then-transmit code: a clique cover of `G^k` indexes an
/// independent set of `H^n`. `None` when the cover is larger than the set.
pub fn separation_code(g: &Graph, h: &Graph, k: usize, n: usize) -> Result<Option<CodeMap>> {
    let gk = g.strong_power_limited(k, DEFAULT_CODE_MAX_VERTICES)?;
    let hn = h.strong_power_limited(n, DEFAULT_CODE_MAX_VERTICES)?;
    let (_, colour) = invariants::clique_cover_number(&gk);
    let (_, set) = invariants::independence_number(&hn);
    if colour.iter().any(|&c| c >= set.len()) {
        return Ok(None);
    }
    Ok(Some(CodeMap {
        source: g.clone(),
        k,
        channel: h.clone(),
        n,
        map: colour.iter().map(|&c| set[c]).collect(),
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Found,
    /// Found by padding a code at `(k, n-1)`.
    Padded,
    None,
    /// Excluded because `(k-1, n)` has no code.
    Restricted,
    Inconclusive,
    /// Powers exceed the size limit.
    TooLarge,
}

impl CellStatus {
    pub fn is_found(self) -> bool {
        matches!(self, CellStatus::Found | CellStatus::Padded)
    }

    pub fn is_none(self) -> bool {
        matches!(self, CellStatus::None | CellStatus::Restricted)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FrontierCell {
    pub k: usize,
    pub n: usize,
    pub status: CellStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code: Option<CodeMap>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Frontier {
    pub cells: Vec<FrontierCell>,
    /// Best `(k, n)` among found cells, by `k/n`.
    pub best: Option<(usize, usize)>,
}

impl Frontier {
    pub fn cell(&self, k: usize, n: usize) -> Option<&FrontierCell> {
        self.cells.iter().find(|c| c.k == k && c.n == n)
    }
}

/// Searches every `(k, n)` with `k ≤ k_max`, `n ≤ n_max`, filling cells by
/// padding and restriction where possible.
pub fn ratio_frontier(g: &Graph, h: &Graph, k_max: usize, n_max: usize, budget: u64) -> Frontier {
    ratio_frontier_limited(g, h, k_max, n_max, budget, DEFAULT_CODE_MAX_VERTICES)
}

pub fn ratio_frontier_limited(
    g: &Graph,
    h: &Graph,
    k_max: usize,
    n_max: usize,
    budget: u64,
    max_vertices: usize,
) -> Frontier {
    let mut cells: Vec<FrontierCell> = Vec::new();
    let idx = |k: usize, n: usize| (k - 1) * n_max + (n - 1);
    for k in 1..=k_max {
        for n in 1..=n_max {
            let below = (k > 1).then(|| cells[idx(k - 1, n)].status);
            let left = (n > 1).then(|| &cells[idx(k, n - 1)]);
            let cell = if below.is_some_and(CellStatus::is_none) {
                FrontierCell {
                    k,
                    n,
                    status: CellStatus::Restricted,
                    code: None,
                }
            } else if let Some(l) = left.filter(|l| l.status.is_found()) {
                let code = l.code.as_ref().map(CodeMap::pad);
                FrontierCell {
                    k,
                    n,
                    status: CellStatus::Padded,
                    code,
                }
            } else {
                let (status, code) = match find_code_limited(g, h, k, n, budget, max_vertices) {
                    Ok(CodeResult::Found(c)) => (CellStatus::Found, Some(c)),
                    Ok(CodeResult::None) => (CellStatus::None, None),
                    Ok(CodeResult::Inconclusive) => (CellStatus::Inconclusive, None),
                    Err(_) => (CellStatus::TooLarge, None),
                };
                FrontierCell { k, n, status, code }
            };
            cells.push(cell);
        }
    }
    let best = cells
        .iter()
        .filter(|c| c.status.is_found())
        .map(|c| (c.k, c.n))
        .max_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)).then(b.1.cmp(&a.1)));
    Frontier { cells, best }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, empty};

    #[test]
    fn spec_cases() {
        let c5 = cycle(5).unwrap();
        let CodeResult::Found(id) = find_code(&c5, &c5, 1, 1, 1_000_000).unwrap() else { panic!() };
        assert!(id.verify());
        let k2 = empty(2);
        assert_eq!(find_code(&k2, &c5, 2, 1, 1_000_000).unwrap(), CodeResult::None);
        let CodeResult::Found(c) = find_code(&k2, &c5, 2, 2, 1_000_000).unwrap() else { panic!() };
        assert!(c.verify());
    }

    #[test]
    fn constant_map_rejected() {
        let c = CodeMap {
            source: empty(2),
            k: 1,
            channel: cycle(5).unwrap(),
            n: 1,
            map: vec![0, 0],
        };
        assert!(!c.verify());
    }

    #[test]
    fn repeat_pad_compose() {
        let c5 = cycle(5).unwrap();
        let CodeResult::Found(c) = find_code(&empty(2), &c5, 2, 2, 1_000_000).unwrap() else { panic!() };
        assert!(c.repeat(2).unwrap().verify());
        assert!(c.pad().verify());
        let id = CodeMap::identity(&c5);
        let comp = c.compose(&id).unwrap();
        assert!(comp.verify());
        assert_eq!((comp.k, comp.n), (2, 2));
    }

    #[test]
    fn separation_code_verifies() {
        let c5 = cycle(5).unwrap();
        let c = separation_code(&empty(2), &c5, 2, 2).unwrap().unwrap();
        assert!(c.verify());
        let g = complete(2).disjoint_union(&complete(2)).unwrap();
        let c = separation_code(&g, &empty(2), 1, 1).unwrap().unwrap();
        assert!(c.verify());
    }

    #[test]
    fn frontier() {
        let c5 = cycle(5).unwrap();
        let f = ratio_frontier(&empty(2), &c5, 4, 2, 1_000_000);
        let (k, n) = f.best.unwrap();
        assert_eq!(k, n);
        assert!(f.cell(2, 2).unwrap().status.is_found());
        for c in &f.cells {
            if let Some(code) = &c.code {
                assert!(code.verify());
            }
        }
        assert!(f.cell(3, 2).unwrap().status.is_none());
        let g = complete(2).disjoint_union(&complete(2)).unwrap();
        let f = ratio_frontier(&g, &empty(2), 2, 4, 1_000_000);
        let (k, n) = f.best.unwrap();
        assert_eq!(k * 2, n * 2);
        assert!(f.cell(2, 2).unwrap().status.is_found());
    }

    #[test]
    fn json_round_trip() {
        let c = CodeMap::identity(&cycle(5).unwrap()).repeat(2).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: CodeMap = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
