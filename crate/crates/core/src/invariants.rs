//! Exact combinatorial invariants with verifiable witnesses.

use crate::bitset::VertexSet;
use crate::clique;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hom::HomMap;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// Default vertex limit for the GF(2) minrank search.
pub const MINRANK_MAX_VERTICES: usize = 12;

/// Maximum independent set.
pub fn independence_number(g: &Graph) -> (usize, Vec<usize>) {
    let s = clique::max_clique(&g.complement());
    (s.len(), s)
}

/// Maximum independent set within a node budget.
pub fn independence_number_budgeted(g: &Graph, budget: u64) -> Option<(usize, Vec<usize>)> {
    clique::max_clique_budgeted(&g.complement(), budget, usize::MAX).map(|s| (s.len(), s))
}

pub fn clique_number(g: &Graph) -> (usize, Vec<usize>) {
    let s = clique::max_clique(g);
    (s.len(), s)
}

/// Exact chromatic number with an optimal colouring (DSATUR branch and bound).
pub fn chromatic_number(g: &Graph) -> (usize, Vec<usize>) {
    let n = g.n();
    if n == 0 {
        return (0, vec![]);
    }
    let lower = clique::max_clique(g);
    // Start from a greedy DSATUR colouring as the incumbent.
    struct St<'a> {
        g: &'a Graph,
        best: usize,
        best_col: Vec<usize>,
        lower: usize,
    }
    fn rec(s: &mut St, col: &mut Vec<usize>, used: usize, coloured: usize) {
        let n = s.g.n();
        if used >= s.best || s.best == s.lower {
            return;
        }
        if coloured == n {
            s.best = used;
            s.best_col = col.clone();
            return;
        }
        // Pick the uncoloured vertex of maximum saturation.
        let mut pick = usize::MAX;
        let mut key = (0usize, 0usize);
        let mut pick_forbidden = 0u128;
        for v in 0..n {
            if col[v] != usize::MAX {
                continue;
            }
            let mut forbidden = 0u128;
            let mut deg = 0;
            for u in s.g.neighbors(v).iter() {
                if col[u] != usize::MAX {
                    forbidden |= 1 << col[u].min(127);
                } else {
                    deg += 1;
                }
            }
            let k = (forbidden.count_ones() as usize, deg);
            if pick == usize::MAX || k > key {
                pick = v;
                key = k;
                pick_forbidden = forbidden;
            }
        }
        for c in 0..=used.min(127) {
            if c == used && used + 1 >= s.best {
                break;
            }
            if pick_forbidden >> c & 1 == 1 {
                continue;
            }
            col[pick] = c;
            rec(s, col, used.max(c + 1), coloured + 1);
            col[pick] = usize::MAX;
            if s.best == s.lower {
                return;
            }
        }
    }
    let mut st = St {
        g,
        best: n + 1,
        best_col: (0..n).collect(),
        lower: lower.len(),
    };
    let mut col = vec![usize::MAX; n];
    // Seed with the clique coloured first: it is forced up to symmetry.
    for (i, &v) in lower.iter().enumerate() {
        col[v] = i;
    }
    rec(&mut st, &mut col, lower.len(), lower.len());
    if st.best > n {
        // Only reachable when n == best; keep the identity colouring.
        st.best = n;
    }
    (st.best, st.best_col)
}

pub fn is_proper_colouring(g: &Graph, col: &[usize]) -> bool {
    col.len() == g.n() && g.edges().iter().all(|&(u, v)| col[u] != col[v])
}

/// Minimum number of cliques covering the vertices; witness is a colouring
/// of the complement (one colour per clique).
pub fn clique_cover_number(g: &Graph) -> (usize, Vec<usize>) {
    chromatic_number(&g.complement())
}

/// Independent set of a strong power for each `j ≤ m` whose size is known
/// exactly, as `(j, α(g^j), witness)`.
pub fn alpha_powers(g: &Graph, m: usize, max_vertices: usize, budget: u64) -> Vec<(usize, usize, Vec<usize>)> {
    let mut out = Vec::new();
    for j in 1..=m {
        let Ok(p) = g.strong_power_limited(j, max_vertices) else {
            break;
        };
        match independence_number_budgeted(&p, budget) {
            Some((a, w)) => out.push((j, a, w)),
            None => break,
        }
    }
    out
}

// -------------------------------------------------------------------------
// Minrank over GF(2)
// -------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinrankValue {
    pub value: usize,
    pub field: String,
    /// Rows of a fitting matrix, bit `j` of row `i` is entry `(i, j)`.
    pub matrix: Vec<u64>,
}

/// Rank of a GF(2) matrix given as row bitmasks.
pub fn gf2_rank(rows: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &r in rows {
        let mut x = r;
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Whether `m` fits `g`: unit diagonal, zero on distinct non-adjacent pairs.
pub fn fits(g: &Graph, m: &[u64]) -> bool {
    let n = g.n();
    m.len() == n
        && (0..n).all(|i| {
            m[i] >> i & 1 == 1
                && (0..n).all(|j| i == j || g.adjacent(i, j) || m[i] >> j & 1 == 0)
                && m[i] >> n == 0
        })
}

/// Reduced echelon basis over GF(2), kept with distinct leading bits.
#[derive(Clone, Default)]
struct Span {
    basis: Vec<u64>,
}

impl Span {
    fn reduce(&self, mut x: u64) -> u64 {
        for &b in &self.basis {
            let lead = 63 - b.leading_zeros();
            if x >> lead & 1 == 1 {
                x ^= b;
            }
        }
        x
    }

    fn push(&mut self, x: u64) {
        let x = self.reduce(x);
        debug_assert!(x != 0);
        let lead = 63 - x.leading_zeros();
        for b in &mut self.basis {
            if *b >> lead & 1 == 1 {
                *b ^= x;
            }
        }
        self.basis.push(x);
        self.basis.sort_unstable_by(|a, b| b.cmp(a));
    }

    fn contains(&self, x: u64) -> bool {
        self.reduce(x) == 0
    }
}

/// Elements of the affine set `e_i + span{e_j : j ~ i}`.
fn row_set(g: &Graph, i: usize) -> Vec<u64> {
    let nb: Vec<usize> = g.neighbors(i).to_vec();
    (0u64..1 << nb.len())
        .map(|mask| {
            let mut x = 1u64 << i;
            for (b, &j) in nb.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    x |= 1 << j;
                }
            }
            x
        })
        .collect()
}

fn minrank_search(rows: &[Vec<u64>], i: usize, span: &mut Span, r: usize) -> bool {
    if i == rows.len() {
        return true;
    }
    if rows[i].iter().any(|&x| span.contains(x)) {
        return minrank_search(rows, i + 1, span, r);
    }
    if span.basis.len() == r {
        return false;
    }
    let mut seen = HashSet::new();
    for &x in &rows[i] {
        let red = span.reduce(x);
        if !seen.insert(red) {
            continue;
        }
        let saved = span.clone();
        span.push(red);
        if minrank_search(rows, i + 1, span, r) {
            return true;
        }
        *span = saved;
    }
    false
}

/// Minimum rank over GF(2) of a matrix fitting `g`.
pub fn minrank_gf2(g: &Graph) -> Result<MinrankValue> {
    minrank_gf2_limited(g, MINRANK_MAX_VERTICES)
}

pub fn minrank_gf2_limited(g: &Graph, limit: usize) -> Result<MinrankValue> {
    let n = g.n();
    if n > limit.min(63) {
        return Err(Error::SizeLimit {
            vertices: n as u128,
            limit: limit.min(63) as u128,
        });
    }
    let (alpha, _) = independence_number(g);
    let (cover, cover_col) = clique_cover_number(g);
    // Clique cover matrix: rows equal within a clique, rank = #cliques.
    let cover_matrix: Vec<u64> = (0..n)
        .map(|i| (0..n).filter(|&j| cover_col[j] == cover_col[i]).fold(0u64, |m, j| m | 1 << j))
        .collect();
    // Rows with fewer choices first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (g.degree(i), i));
    let rows: Vec<Vec<u64>> = order.iter().map(|&i| row_set(g, i)).collect();
    for r in alpha..cover {
        let mut span = Span::default();
        if minrank_search(&rows, 0, &mut span, r) {
            let matrix: Vec<u64> = (0..n)
                .map(|i| {
                    row_set(g, i)
                        .into_iter()
                        .find(|&x| span.contains(x))
                        .expect("every row meets the subspace")
                })
                .collect();
            let value = gf2_rank(&matrix);
            debug_assert!(value <= r && fits(g, &matrix));
            return Ok(MinrankValue {
                value,
                field: "GF(2)".into(),
                matrix,
            });
        }
    }
    Ok(MinrankValue {
        value: cover,
        field: "GF(2)".into(),
        matrix: cover_matrix,
    })
}

/// `(γ(g^m), m)`: the m-th root is an upper approximant of the fractional
/// minrank by submultiplicativity.
pub fn gamma_power_root(g: &Graph, m: usize) -> Result<(usize, usize)> {
    let p = g.strong_power_limited(m, MINRANK_MAX_VERTICES)?;
    Ok((minrank_gf2(&p)?.value, m))
}

// -------------------------------------------------------------------------
// β(G, F)
// -------------------------------------------------------------------------

/// Largest induced subgraph of `g` with a homomorphism to `f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaValue {
    pub value: usize,
    pub vertices: Vec<usize>,
    /// Image in `f` of each listed vertex.
    pub hom: HomMap,
}

impl BetaValue {
    pub fn verify(&self, g: &Graph, f: &Graph) -> bool {
        self.vertices.len() == self.value
            && self.hom.verify(&g.induced(&self.vertices), f)
    }
}

struct BetaSearch<'a> {
    g: &'a Graph,
    f: &'a Graph,
    order: Vec<usize>,
    best: Vec<(usize, usize)>,
    nodes: u64,
    budget: u64,
}

impl BetaSearch<'_> {
    fn rec(&mut self, i: usize, chosen: &mut Vec<(usize, usize)>) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        if chosen.len() + (self.order.len() - i) <= self.best.len() {
            return true;
        }
        if i == self.order.len() {
            self.best = chosen.clone();
            return true;
        }
        let v = self.order[i];
        // Allowed images: adjacent to the image of every chosen neighbour.
        let mut allowed = self.f.vertex_set();
        for &(u, t) in chosen.iter() {
            if self.g.adjacent(u, v) {
                allowed.intersect_with(self.f.neighbors(t));
            }
        }
        for t in allowed.iter() {
            chosen.push((v, t));
            let ok = self.rec(i + 1, chosen);
            chosen.pop();
            if !ok {
                return false;
            }
            if self.best.len() == self.order.len() {
                return true;
            }
        }
        self.rec(i + 1, chosen)
    }
}

/// β(g, f) within a node budget.
pub fn beta(g: &Graph, f: &Graph, budget: u64) -> Result<BetaValue> {
    if f.n() == 0 {
        return Ok(BetaValue {
            value: 0,
            vertices: vec![],
            hom: HomMap { map: vec![] },
        });
    }
    if !f.has_edges() {
        // Only independent sets map into an edgeless graph.
        let (a, w) = independence_number(g);
        return Ok(BetaValue {
            value: a,
            hom: HomMap { map: vec![0; a] },
            vertices: w,
        });
    }
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut s = BetaSearch {
        g,
        f,
        order,
        best: Vec::new(),
        nodes: 0,
        budget,
    };
    if !s.rec(0, &mut Vec::new()) {
        return Err(Error::BudgetExhausted("beta".into()));
    }
    let mut best = s.best;
    best.sort_unstable();
    Ok(BetaValue {
        value: best.len(),
        vertices: best.iter().map(|x| x.0).collect(),
        hom: HomMap {
            map: best.iter().map(|x| x.1).collect(),
        },
    })
}

/// Finite-m diagnostic `β(g^{∨km}, f^{∨m})^{1/(km)}` as `(β, km)` and its
/// float value. A lower approximant of the limit, not a certified bound.
pub fn beta_f_estimate(g: &Graph, f: &Graph, k: usize, m: usize, budget: u64) -> Result<(usize, usize, f64)> {
    if k == 0 || m == 0 {
        return Err(Error::InvalidParameter("k and m must be >= 1".into()));
    }
    let gp = g.or_power(k * m)?;
    let fp = f.or_power(m)?;
    let b = beta(&gp, &fp, budget)?.value;
    let root = (b as f64).powf(1.0 / (k * m) as f64);
    Ok((b, k * m, root))
}

/// Vertex set helper for callers verifying independent sets.
pub fn independent_in(g: &Graph, set: &[usize]) -> bool {
    let vs = VertexSet::from_iter_with_capacity(g.n(), set.iter().copied());
    vs.len() == set.len() && g.is_independent(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, empty, mycielski, schlafli};

    #[test]
    fn alpha_values() {
        assert_eq!(independence_number(&cycle(5).unwrap()).0, 2);
        let c52 = cycle(5).unwrap().strong_power(2).unwrap();
        let (a, w) = independence_number(&c52);
        assert_eq!(a, 5);
        assert!(c52.is_independent(&w));
        assert_eq!(independence_number(&schlafli()).0, 3);
        assert_eq!(independence_number(&schlafli().complement()).0, 6);
    }

    #[test]
    fn chromatic_values() {
        let (c, col) = chromatic_number(&cycle(5).unwrap());
        assert_eq!(c, 3);
        assert!(is_proper_colouring(&cycle(5).unwrap(), &col));
        let gr = mycielski(&cycle(5).unwrap());
        let (c, col) = chromatic_number(&gr);
        assert_eq!(c, 4);
        assert!(is_proper_colouring(&gr, &col));
        assert_eq!(clique_cover_number(&cycle(5).unwrap()).0, 3);
        assert_eq!(chromatic_number(&complete(6)).0, 6);
        assert_eq!(chromatic_number(&empty(4)).0, 1);
    }

    #[test]
    fn minrank_values() {
        for n in 1..6 {
            assert_eq!(minrank_gf2(&empty(n)).unwrap().value, n);
            assert_eq!(minrank_gf2(&complete(n)).unwrap().value, 1);
        }
        let c5 = cycle(5).unwrap();
        let m = minrank_gf2(&c5).unwrap();
        assert_eq!(m.value, 3);
        assert!(fits(&c5, &m.matrix));
        assert_eq!(gf2_rank(&m.matrix), 3);
        assert!(minrank_gf2(&cycle(13).unwrap()).is_err());
        assert_eq!(gamma_power_root(&complete(3), 2).unwrap(), (1, 2));
        assert_eq!(gamma_power_root(&empty(3), 1).unwrap(), (3, 1));
    }

    #[test]
    fn beta_values() {
        let c7 = cycle(7).unwrap();
        assert_eq!(beta(&c7, &complete(1), 1 << 20).unwrap().value, 3);
        let c5 = cycle(5).unwrap();
        let b = beta(&c5, &complete(3), 1 << 20).unwrap();
        assert_eq!(b.value, 5);
        assert!(b.verify(&c5, &complete(3)));
        assert_eq!(beta(&complete(4), &complete(3), 1 << 20).unwrap().value, 3);
        assert_eq!(beta(&c5, &complete(2), 1 << 20).unwrap().value, 4);
    }

    #[test]
    fn beta_f_values() {
        let c5 = cycle(5).unwrap();
        assert_eq!(beta_f_estimate(&c5, &complete(1), 1, 1, 1 << 20).unwrap().0, 2);
        assert_eq!(beta_f_estimate(&c5, &complete(2), 1, 1, 1 << 20).unwrap().0, 4);
        let (b, root, v) = beta_f_estimate(&empty(3), &complete(1), 1, 2, 1 << 20).unwrap();
        assert_eq!((b, root), (9, 2));
        assert!((v - 3.0).abs() < 1e-12);
        let (b, _, v) = beta_f_estimate(&complete(3), &complete(1), 1, 2, 1 << 20).unwrap();
        assert_eq!(b, 1);
        assert!((v - 1.0).abs() < 1e-12);
    }
}
