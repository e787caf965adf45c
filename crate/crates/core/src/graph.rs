//! Simple undirected graphs with bitset adjacency rows.
//!
//! Vertex sets of products are ordered row-major over coordinate tuples: in
//! `G ⊠ H` the pair `(u, v)` has index `u * |H| + v`, and in a power `G^k`
//! the tuple `(x_1, .., x_k)` has index `Σ x_i |G|^(k-i)` (first coordinate
//! most significant).

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Default ceiling on the vertex count of materialized products.
pub const DEFAULT_MAX_VERTICES: usize = 1_000_000;

/// Ceiling on adjacency storage (bits) regardless of the vertex limit.
const MAX_ADJACENCY_BITS: u128 = 1 << 33;

#[derive(Clone)]
pub struct Graph {
    rows: Vec<VertexSet>,
    name: Option<String>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("name", &self.name)
            .field("n", &self.n())
            .field("edges", &self.edges())
            .finish()
    }
}

pub(crate) fn check_size(vertices: u128, limit: usize) -> Result<usize> {
    if vertices > limit as u128 || vertices * vertices > MAX_ADJACENCY_BITS {
        return Err(Error::SizeLimit {
            vertices,
            limit: (limit as u128).min(1 << 16),
        });
    }
    Ok(vertices as usize)
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            rows: vec![VertexSet::empty(n); n],
            name: None,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u},{v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from a symmetric predicate evaluated on pairs `u < v`.
    pub fn from_fn(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                if adjacent(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.rows[u].insert(v);
        self.rows[v].insert(u);
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Display name, falling back to the graph6 encoding.
    pub fn label(&self) -> String {
        match &self.name {
            Some(n) => n.clone(),
            None => format!("g6:{}", self.to_graph6()),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.rows[v]
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            for v in self.rows[u].iter() {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n();
        self.edge_count() == n * n.saturating_sub(1) / 2
    }

    pub fn has_edges(&self) -> bool {
        self.rows.iter().any(|r| !r.is_empty())
    }

    pub fn is_regular(&self) -> Option<usize> {
        let d = self.rows.first().map(|r| r.len())?;
        self.rows.iter().all(|r| r.len() == d).then_some(d)
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| {
            u < self.n() && set[i + 1..].iter().all(|&v| u != v && !self.adjacent(u, v))
        })
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| {
            u < self.n() && set[i + 1..].iter().all(|&v| u != v && self.adjacent(u, v))
        })
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let full = VertexSet::full(n);
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(v, r)| {
                let mut c = full.difference(r);
                c.remove(v);
                c
            })
            .collect();
        Graph {
            rows,
            name: self.name.as_ref().map(|s| format!("~({s})")),
        }
    }

    /// Subgraph induced on `vertices`, relabelled in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let k = vertices.len();
        Graph::from_fn(k, |i, j| self.adjacent(vertices[i], vertices[j]))
    }

    pub fn without_vertex(&self, v: usize) -> Graph {
        let keep: Vec<usize> = (0..self.n()).filter(|&u| u != v).collect();
        self.induced(&keep)
    }

    /// Spanning subgraph with the edge `{u, v}` removed.
    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let mut g = self.clone();
        g.rows[u].remove(v);
        g.rows[v].remove(u);
        g.name = None;
        g
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = VertexSet::empty(n);
        let mut out = Vec::new();
        for s in 0..n {
            if seen.contains(s) {
                continue;
            }
            let mut comp = vec![s];
            seen.insert(s);
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                for w in self.rows[u].iter() {
                    if !seen.contains(w) {
                        seen.insert(w);
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() > 0 && self.components().len() == 1
    }

    pub fn has_triangle(&self) -> bool {
        (0..self.n()).any(|u| {
            self.rows[u]
                .iter()
                .filter(|&v| v > u)
                .any(|v| !self.rows[u].is_disjoint(&self.rows[v]))
        })
    }

    /// Length of the shortest odd cycle, or `None` for bipartite graphs.
    pub fn odd_girth(&self) -> Option<usize> {
        let n = self.n();
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; n];
        for s in 0..n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for w in self.rows[u].iter() {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    } else if dist[w] == dist[u] {
                        let len = 2 * dist[u] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    pub fn is_bipartite(&self) -> bool {
        self.odd_girth().is_none()
    }

    // ---------------------------------------------------------------------
    // Products
    // ---------------------------------------------------------------------

    fn product_with(
        &self,
        other: &Graph,
        limit: usize,
        rule: impl Fn(bool, bool, bool, bool) -> bool,
    ) -> Result<Graph> {
        let (a, b) = (self.n(), other.n());
        let n = check_size(a as u128 * b as u128, limit)?;
        let mut g = Graph::empty(n);
        for u1 in 0..a {
            for v1 in 0..b {
                let x = u1 * b + v1;
                for u2 in u1..a {
                    let eq_u = u1 == u2;
                    let adj_u = self.adjacent(u1, u2);
                    if !eq_u && !adj_u && !rule(false, false, true, true) {
                        // Rule needs a related first coordinate; skip quickly.
                        continue;
                    }
                    let v_start = if eq_u { v1 + 1 } else { 0 };
                    for v2 in v_start..b {
                        let eq_v = v1 == v2;
                        let adj_v = other.adjacent(v1, v2);
                        if rule(eq_u, adj_u, eq_v, adj_v) {
                            g.add_edge(x, u2 * b + v2);
                        }
                    }
                }
            }
        }
        Ok(g)
    }

    /// Strong (AND) product: coordinates pairwise equal-or-adjacent.
    pub fn strong_product(&self, other: &Graph) -> Result<Graph> {
        self.strong_product_limited(other, DEFAULT_MAX_VERTICES)
    }

    pub fn strong_product_limited(&self, other: &Graph, limit: usize) -> Result<Graph> {
        self.product_with(other, limit, |eu, au, ev, av| (eu || au) && (ev || av))
            .map(|g| g.named_binary(self, other, "*"))
    }

    /// OR (co-normal) product: adjacent in at least one coordinate.
    pub fn or_product(&self, other: &Graph) -> Result<Graph> {
        self.or_product_limited(other, DEFAULT_MAX_VERTICES)
    }

    pub fn or_product_limited(&self, other: &Graph, limit: usize) -> Result<Graph> {
        self.product_with(other, limit, |_, au, _, av| au || av)
            .map(|g| g.named_binary(self, other, "|"))
    }

    /// Tensor (categorical) product: adjacent in both coordinates.
    pub fn tensor_product(&self, other: &Graph) -> Result<Graph> {
        self.product_with(other, DEFAULT_MAX_VERTICES, |_, au, _, av| au && av)
            .map(|g| g.named_binary(self, other, "x"))
    }

    /// Disjoint union; vertices of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let (a, b) = (self.n(), other.n());
        let n = check_size(a as u128 + b as u128, DEFAULT_MAX_VERTICES)?;
        let mut g = Graph::empty(n);
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.add_edge(a + u, a + v);
        }
        Ok(g.named_binary(self, other, "+"))
    }

    pub fn strong_power(&self, k: usize) -> Result<Graph> {
        self.strong_power_limited(k, DEFAULT_MAX_VERTICES)
    }

    pub fn strong_power_limited(&self, k: usize, limit: usize) -> Result<Graph> {
        self.power_with(k, limit, |a, b| a.strong_product_limited(b, limit))
    }

    pub fn or_power(&self, k: usize) -> Result<Graph> {
        self.or_power_limited(k, DEFAULT_MAX_VERTICES)
    }

    pub fn or_power_limited(&self, k: usize, limit: usize) -> Result<Graph> {
        self.power_with(k, limit, |a, b| a.or_product_limited(b, limit))
    }

    fn power_with(
        &self,
        k: usize,
        limit: usize,
        mul: impl Fn(&Graph, &Graph) -> Result<Graph>,
    ) -> Result<Graph> {
        if k == 0 {
            return Err(Error::InvalidParameter("power exponent must be >= 1".into()));
        }
        check_size((self.n() as u128).saturating_pow(k as u32), limit)?;
        let mut acc = self.clone();
        for _ in 1..k {
            acc = mul(&acc, self)?;
        }
        acc.name = self.name.as_ref().map(|s| {
            if k == 1 {
                s.clone()
            } else {
                format!("({s})^{k}")
            }
        });
        Ok(acc)
    }

    fn named_binary(mut self, a: &Graph, b: &Graph, op: &str) -> Graph {
        self.name = match (&a.name, &b.name) {
            (Some(x), Some(y)) => Some(format!("({x}) {op} ({y})")),
            _ => None,
        };
        self
    }

    // ---------------------------------------------------------------------
    // graph6
    // ---------------------------------------------------------------------

    pub fn to_graph6(&self) -> String {
        let n = self.n();
        let mut out = Vec::new();
        if n <= 62 {
            out.push(n as u8 + 63);
        } else if n <= 258_047 {
            out.push(126);
            for shift in [12, 6, 0] {
                out.push(((n >> shift) & 63) as u8 + 63);
            }
        } else {
            out.push(126);
            out.push(126);
            for shift in [30, 24, 18, 12, 6, 0] {
                out.push(((n >> shift) & 63) as u8 + 63);
            }
        }
        let mut acc = 0u8;
        let mut nbits = 0;
        for j in 1..n {
            for i in 0..j {
                acc = (acc << 1) | self.adjacent(i, j) as u8;
                nbits += 1;
                if nbits == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    nbits = 0;
                }
            }
        }
        if nbits > 0 {
            out.push((acc << (6 - nbits)) + 63);
        }
        String::from_utf8(out).expect("graph6 bytes are printable ASCII")
    }

    pub fn from_graph6(text: &str) -> Result<Graph> {
        let text = text.trim();
        let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
        let bytes = text.as_bytes();
        if bytes.is_empty() {
            return Err(Error::Graph6("empty input".into()));
        }
        if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
            return Err(Error::Graph6(format!("byte {b} outside 63..=126")));
        }
        let (n, body) = if bytes[0] != 126 {
            ((bytes[0] - 63) as usize, &bytes[1..])
        } else if bytes.len() >= 2 && bytes[1] == 126 {
            if bytes.len() < 8 {
                return Err(Error::Graph6("truncated vertex count".into()));
            }
            let n = bytes[2..8]
                .iter()
                .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, &bytes[8..])
        } else {
            if bytes.len() < 4 {
                return Err(Error::Graph6("truncated vertex count".into()));
            }
            let n = bytes[1..4]
                .iter()
                .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, &bytes[4..])
        };
        check_size(n as u128, DEFAULT_MAX_VERTICES)
            .map_err(|_| Error::Graph6(format!("vertex count {n} too large")))?;
        let nbits = n * n.saturating_sub(1) / 2;
        let expected = nbits.div_ceil(6);
        if body.len() != expected {
            return Err(Error::Graph6(format!(
                "expected {expected} data bytes for {n} vertices, found {}",
                body.len()
            )));
        }
        let mut g = Graph::empty(n);
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                let byte = body[k / 6] - 63;
                if (byte >> (5 - k % 6)) & 1 == 1 {
                    g.add_edge(i, j);
                }
                k += 1;
            }
        }
        let pad = expected * 6 - nbits;
        if pad > 0 && ((body[expected - 1] - 63) & ((1u8 << pad) - 1)) != 0 {
            return Err(Error::Graph6("nonzero padding bits".into()));
        }
        Ok(g)
    }

    /// Applies a vertex permutation: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let n = self.n();
        let mut g = Graph::empty(n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }
}

// -------------------------------------------------------------------------
// Named generators
// -------------------------------------------------------------------------

pub fn complete(n: usize) -> Graph {
    Graph::from_fn(n, |_, _| true).with_name(format!("K({n})"))
}

pub fn empty(n: usize) -> Graph {
    Graph::empty(n).with_name(format!("Kbar({n})"))
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("cycle needs n >= 3, got {n}")));
    }
    Ok(Graph::from_fn(n, |u, v| v == u + 1 || (u == 0 && v == n - 1)).with_name(format!("C({n})")))
}

/// Wheel `W(n)`: vertex 0 is the hub, vertices `1..=n` form the rim cycle.
pub fn wheel(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("wheel needs n >= 3, got {n}")));
    }
    Ok(Graph::from_fn(n + 1, |u, v| {
        u == 0 || v == u + 1 || (u == 1 && v == n)
    })
    .with_name(format!("W({n})")))
}

/// `r`-subsets of `{0, .., n-1}` in lexicographic order.
pub fn kneser_subsets(n: usize, r: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..r).collect();
    if r > n {
        return out;
    }
    loop {
        out.push(idx.iter().fold(0u64, |m, &i| m | (1 << i)));
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - r + i {
                idx[i] += 1;
                for j in i + 1..r {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Kneser graph: `r`-subsets of an `n`-set, adjacent when disjoint.
pub fn kneser(n: usize, r: usize) -> Result<Graph> {
    if r == 0 || n < r || n > 64 {
        return Err(Error::InvalidParameter(format!(
            "Kneser graph needs 1 <= r <= n <= 64, got KG({n},{r})"
        )));
    }
    let sets = kneser_subsets(n, r);
    check_size(sets.len() as u128, DEFAULT_MAX_VERTICES)?;
    Ok(Graph::from_fn(sets.len(), |u, v| sets[u] & sets[v] == 0).with_name(format!("KG({n},{r})")))
}

/// Mycielski construction: originals `0..n`, mirrors `n..2n`, apex `2n`.
pub fn mycielski(g: &Graph) -> Graph {
    let n = g.n();
    let mut m = Graph::empty(2 * n + 1);
    for (u, v) in g.edges() {
        m.add_edge(u, v);
        m.add_edge(u, n + v);
        m.add_edge(n + u, v);
    }
    for i in 0..n {
        m.add_edge(n + i, 2 * n);
    }
    match g.name() {
        Some(s) => m.with_name(format!("M({s})")),
        None => m,
    }
}

/// The Schläfli graph: the 27 lines on a cubic surface, adjacent when skew.
///
/// Lines are `a_i`, `b_i` (i in 0..6) and `c_ij` (i < j). Two lines meet iff
/// they are `a_i, b_j` with `i != j`, or `a_i`/`b_i` and `c_jk` with
/// `i in {j,k}`, or `c_ij, c_kl` with disjoint index pairs.
pub fn schlafli() -> Graph {
    #[derive(Clone, Copy)]
    enum Line {
        A(usize),
        B(usize),
        C(usize, usize),
    }
    let mut lines: Vec<Line> = (0..6).map(Line::A).collect();
    lines.extend((0..6).map(Line::B));
    for i in 0..6 {
        for j in i + 1..6 {
            lines.push(Line::C(i, j));
        }
    }
    let meet = |x: Line, y: Line| match (x, y) {
        (Line::A(i), Line::B(j)) | (Line::B(j), Line::A(i)) => i != j,
        (Line::A(i), Line::C(j, k))
        | (Line::C(j, k), Line::A(i))
        | (Line::B(i), Line::C(j, k))
        | (Line::C(j, k), Line::B(i)) => i == j || i == k,
        (Line::C(i, j), Line::C(k, l)) => i != k && i != l && j != k && j != l,
        _ => false,
    };
    let g = Graph::from_fn(27, |u, v| !meet(lines[u], lines[v])).with_name("schlafli");
    debug_assert_eq!(strongly_regular_parameters(&g), Some((27, 16, 10, 8)));
    g
}

/// `(n, k, λ, μ)` when the graph is strongly regular.
pub fn strongly_regular_parameters(g: &Graph) -> Option<(usize, usize, usize, usize)> {
    let k = g.is_regular()?;
    let n = g.n();
    let mut lambda = None;
    let mut mu = None;
    for u in 0..n {
        for v in u + 1..n {
            let c = g.neighbors(u).intersection_len(g.neighbors(v));
            let slot = if g.adjacent(u, v) { &mut lambda } else { &mut mu };
            match *slot {
                None => *slot = Some(c),
                Some(x) if x != c => return None,
                _ => {}
            }
        }
    }
    Some((n, k, lambda.unwrap_or(0), mu.unwrap_or(0)))
}

/// Named generator lookup, as used by the expression language.
pub fn make_named(name: &str, params: &[usize]) -> Result<Graph> {
    let want = |k: usize| -> Result<()> {
        if params.len() != k {
            return Err(Error::InvalidParameter(format!(
                "{name} takes {k} parameter(s), got {}",
                params.len()
            )));
        }
        Ok(())
    };
    let positive = |x: usize| -> Result<usize> {
        if x == 0 {
            Err(Error::InvalidParameter(format!("{name} needs a positive size")))
        } else {
            Ok(x)
        }
    };
    match name {
        "K" => {
            want(1)?;
            Ok(complete(positive(params[0])?))
        }
        "Kbar" => {
            want(1)?;
            Ok(empty(positive(params[0])?))
        }
        "C" => {
            want(1)?;
            cycle(params[0])
        }
        "W" => {
            want(1)?;
            wheel(params[0])
        }
        "KG" => {
            want(2)?;
            kneser(params[0], params[1])
        }
        "schlafli" => {
            want(0)?;
            Ok(schlafli())
        }
        _ => Err(Error::UnknownGenerator(name.to_string())),
    }
}

/// Serializable form of a graph: graph6 text plus optional name.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphRecord {
    pub graph6: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl From<&Graph> for GraphRecord {
    fn from(g: &Graph) -> Self {
        GraphRecord {
            graph6: g.to_graph6(),
            name: g.name.clone(),
        }
    }
}

impl TryFrom<&GraphRecord> for Graph {
    type Error = Error;

    fn try_from(r: &GraphRecord) -> Result<Graph> {
        let g = Graph::from_graph6(&r.graph6)?;
        Ok(match &r.name {
            Some(n) => g.with_name(n.clone()),
            None => g,
        })
    }
}
