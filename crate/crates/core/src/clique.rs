//! Maximum clique by branch and bound with greedy colouring bounds, and
//! maximal clique enumeration (Bron–Kerbosch with pivoting).

use crate::bitset::VertexSet;
use crate::graph::Graph;

/// Colour classes of `p` produced greedily in vertex order. Returns the
/// vertices in colour order together with the running colour number.
fn colour_sort(g: &Graph, p: &VertexSet, order: &mut Vec<usize>, bounds: &mut Vec<usize>) {
    order.clear();
    bounds.clear();
    let mut uncoloured = p.clone();
    let mut colour = 0;
    while !uncoloured.is_empty() {
        colour += 1;
        let mut q = uncoloured.clone();
        while let Some(v) = q.first() {
            q.remove(v);
            q.difference_with(g.neighbors(v));
            uncoloured.remove(v);
            order.push(v);
            bounds.push(colour);
        }
    }
}

struct MaxClique<'a> {
    g: &'a Graph,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    target: usize,
}

impl MaxClique<'_> {
    fn expand(&mut self, current: &mut Vec<usize>, p: VertexSet) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        let mut order = Vec::new();
        let mut bounds = Vec::new();
        colour_sort(self.g, &p, &mut order, &mut bounds);
        let mut p = p;
        for i in (0..order.len()).rev() {
            if current.len() + bounds[i] <= self.best.len() || self.best.len() >= self.target {
                return true;
            }
            let v = order[i];
            current.push(v);
            let np = p.intersection(self.g.neighbors(v));
            if np.is_empty() {
                if current.len() > self.best.len() {
                    self.best = current.clone();
                }
            } else if !self.expand(current, np) {
                return false;
            }
            current.pop();
            p.remove(v);
        }
        true
    }
}

/// Maximum clique, or `None` when `budget` search nodes are exceeded.
/// Stops early once a clique of size `target` is found.
pub fn max_clique_budgeted(g: &Graph, budget: u64, target: usize) -> Option<Vec<usize>> {
    if g.n() == 0 {
        return Some(vec![]);
    }
    let mut s = MaxClique {
        g,
        best: vec![0],
        nodes: 0,
        budget,
        target,
    };
    let mut cur = Vec::new();
    if s.expand(&mut cur, g.vertex_set()) {
        let mut b = s.best;
        b.sort_unstable();
        Some(b)
    } else {
        None
    }
}

pub fn max_clique(g: &Graph) -> Vec<usize> {
    max_clique_budgeted(g, u64::MAX, usize::MAX).expect("unbounded search completes")
}

/// A clique found greedily (by degree), used as a cheap lower bound.
pub fn greedy_clique(g: &Graph) -> Vec<usize> {
    let mut best = Vec::new();
    for start in 0..g.n() {
        let mut cl = vec![start];
        let mut cand = g.neighbors(start).clone();
        while let Some(v) = cand.iter().max_by_key(|&v| (g.neighbors(v).intersection_len(&cand), usize::MAX - v)) {
            cl.push(v);
            cand.intersect_with(g.neighbors(v));
        }
        if cl.len() > best.len() {
            best = cl;
        }
    }
    best.sort_unstable();
    best
}

/// Number of colours used by a greedy colouring in degeneracy-like order.
pub fn greedy_colour_count(g: &Graph) -> usize {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut colour = vec![usize::MAX; g.n()];
    let mut used = 0;
    for &v in &order {
        let mut taken = vec![false; used + 1];
        for u in g.neighbors(v).iter() {
            if colour[u] != usize::MAX {
                taken[colour[u]] = true;
            }
        }
        let c = taken.iter().position(|&t| !t).unwrap();
        colour[v] = c;
        used = used.max(c + 1);
    }
    used
}

/// All maximal cliques, or `None` once more than `cap` have been produced.
pub fn maximal_cliques(g: &Graph, cap: usize) -> Option<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let n = g.n();
    if n == 0 {
        return Some(out);
    }
    fn bk(
        g: &Graph,
        r: &mut Vec<usize>,
        p: VertexSet,
        x: VertexSet,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> bool {
        if p.is_empty() {
            if x.is_empty() {
                if out.len() >= cap {
                    return false;
                }
                let mut c = r.clone();
                c.sort_unstable();
                out.push(c);
            }
            return true;
        }
        let mut px = p.clone();
        px.union_with(&x);
        let pivot = px
            .iter()
            .max_by_key(|&u| p.intersection_len(g.neighbors(u)))
            .unwrap();
        let cand = p.difference(g.neighbors(pivot));
        let (mut p, mut x) = (p, x);
        for v in cand.iter() {
            r.push(v);
            let ok = bk(
                g,
                r,
                p.intersection(g.neighbors(v)),
                x.intersection(g.neighbors(v)),
                out,
                cap,
            );
            r.pop();
            if !ok {
                return false;
            }
            p.remove(v);
            x.insert(v);
        }
        true
    }
    let ok = bk(g, &mut Vec::new(), g.vertex_set(), VertexSet::empty(n), &mut out, cap);
    ok.then(|| {
        out.sort();
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, kneser, schlafli};

    #[test]
    fn clique_sizes() {
        assert_eq!(max_clique(&complete(6)).len(), 6);
        assert_eq!(max_clique(&cycle(5).unwrap()).len(), 2);
        assert_eq!(max_clique(&kneser(5, 2).unwrap()).len(), 2);
        assert_eq!(max_clique(&schlafli()).len(), 6);
        assert_eq!(max_clique(&schlafli().complement()).len(), 3);
    }

    #[test]
    fn maximal_cliques_pentagon() {
        let cl = maximal_cliques(&cycle(5).unwrap(), 100).unwrap();
        assert_eq!(cl.len(), 5);
        assert!(maximal_cliques(&cycle(5).unwrap(), 3).is_none());
        // Moon–Moser: complement of 3 disjoint triangles has 27 maximal cliques.
        let t = complete(3);
        let g = t.disjoint_union(&t).unwrap().disjoint_union(&t).unwrap().complement();
        assert_eq!(maximal_cliques(&g, 1000).unwrap().len(), 27);
    }
}
