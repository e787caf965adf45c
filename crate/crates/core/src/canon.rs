//! Canonical labeling by colour refinement and individualization.
//!
//! The search tree individualizes a vertex of the first smallest
//! non-singleton cell at each node. Leaves are compared by the graph6 text
//! of the relabelled graph; the largest one is canonical. Automorphisms are
//! read off from leaves with equal certificates and used for orbit pruning.

use crate::bitset::VertexSet;
use crate::graph::Graph;

#[derive(Clone, Debug)]
pub struct Canonical {
    /// `labeling[v]` is the position of vertex `v` in the canonical form.
    pub labeling: Vec<usize>,
    /// The relabelled graph (equal for isomorphic inputs).
    pub form: Graph,
    /// Automorphisms found during the search (generators of a subgroup of
    /// the automorphism group, usually the whole group).
    pub automorphisms: Vec<Vec<usize>>,
}

impl Canonical {
    /// graph6 text of the canonical form, used as the isomorphism key.
    pub fn key(&self) -> String {
        self.form.to_graph6()
    }

    /// Orbit representative for each vertex under the found automorphisms.
    pub fn orbits(&self) -> Vec<usize> {
        orbits_of(self.labeling.len(), &self.automorphisms)
    }
}

/// Union of the cycles of all permutations, reported as least-element reps.
pub fn orbits_of(n: usize, perms: &[Vec<usize>]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for perm in perms {
        for v in 0..n {
            let (a, b) = (find(&mut parent, v), find(&mut parent, perm[v]));
            if a != b {
                let (lo, hi) = (a.min(b), a.max(b));
                parent[hi] = lo;
            }
        }
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}

/// Ordered partition refined to equitability.
fn refine(g: &Graph, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let n = g.n();
    loop {
        let sets: Vec<VertexSet> = cells
            .iter()
            .map(|c| VertexSet::from_iter_with_capacity(n, c.iter().copied()))
            .collect();
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> = cell
                .iter()
                .map(|&v| {
                    let sig = sets
                        .iter()
                        .map(|s| g.neighbors(v).intersection_len(s) as u32)
                        .collect();
                    (sig, v)
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|x| x.1).collect());
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn individualize(cells: &[Vec<usize>], target: usize, v: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(cells.len() + 1);
    for (i, c) in cells.iter().enumerate() {
        if i == target {
            out.push(vec![v]);
            out.push(c.iter().copied().filter(|&u| u != v).collect());
        } else {
            out.push(c.clone());
        }
    }
    out
}

struct Search<'a> {
    g: &'a Graph,
    first: Option<(String, Vec<usize>)>,
    best: Option<(String, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn leaf(&mut self, cells: &[Vec<usize>]) {
        let n = self.g.n();
        let mut lab = vec![0; n];
        for (pos, c) in cells.iter().enumerate() {
            lab[c[0]] = pos;
        }
        let cert = self.g.permuted(&lab).to_graph6();
        for slot in [&self.first, &self.best].into_iter().flatten() {
            if slot.0 == cert {
                // lab maps to the same form as slot.1, so slot.1^-1 ∘ lab is an automorphism.
                let mut inv = vec![0; n];
                for (v, &p) in slot.1.iter().enumerate() {
                    inv[p] = v;
                }
                let auto: Vec<usize> = lab.iter().map(|&p| inv[p]).collect();
                if auto.iter().enumerate().any(|(i, &x)| i != x) && !self.automorphisms.contains(&auto) {
                    self.automorphisms.push(auto);
                }
                return;
            }
        }
        if self.first.is_none() {
            self.first = Some((cert.clone(), lab.clone()));
        }
        if self.best.as_ref().is_none_or(|b| cert > b.0) {
            self.best = Some((cert, lab));
        }
    }

    fn descend(&mut self, cells: Vec<Vec<usize>>, prefix: &mut Vec<usize>) {
        let target = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i);
        let Some(target) = target else {
            self.leaf(&cells);
            return;
        };
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cells[target] {
            if !tried.is_empty() {
                // Orbits of the pointwise stabilizer of the prefix.
                let stab: Vec<Vec<usize>> = self
                    .automorphisms
                    .iter()
                    .filter(|a| prefix.iter().all(|&p| a[p] == p))
                    .cloned()
                    .collect();
                if !stab.is_empty() {
                    let orb = orbits_of(self.g.n(), &stab);
                    if tried.iter().any(|&t| orb[t] == orb[v]) {
                        continue;
                    }
                }
            }
            tried.push(v);
            let child = refine(self.g, individualize(&cells, target, v));
            prefix.push(v);
            self.descend(child, prefix);
            prefix.pop();
        }
    }
}

/// Canonical form, labeling and automorphisms of `g`.
pub fn canonical_form(g: &Graph) -> Canonical {
    let n = g.n();
    if n == 0 {
        return Canonical {
            labeling: vec![],
            form: g.clone(),
            automorphisms: vec![],
        };
    }
    let root = refine(g, vec![(0..n).collect()]);
    let mut s = Search {
        g,
        first: None,
        best: None,
        automorphisms: Vec::new(),
    };
    s.descend(root, &mut Vec::new());
    let (_, labeling) = s.best.expect("search reaches at least one leaf");
    let form = g.permuted(&labeling);
    Canonical {
        labeling,
        form,
        automorphisms: s.automorphisms,
    }
}

/// Key equal for two graphs exactly when they are isomorphic.
pub fn canonical_key(g: &Graph) -> Vec<u8> {
    canonical_form(g).key().into_bytes()
}

pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut da: Vec<usize> = (0..a.n()).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..b.n()).map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    da == db && canonical_key(a) == canonical_key(b)
}

/// An isomorphism `a -> b` as a vertex map, if one exists.
pub fn find_isomorphism(a: &Graph, b: &Graph) -> Option<Vec<usize>> {
    if a.n() != b.n() {
        return None;
    }
    let ca = canonical_form(a);
    let cb = canonical_form(b);
    if ca.form != cb.form {
        return None;
    }
    let mut inv_b = vec![0; b.n()];
    for (v, &p) in cb.labeling.iter().enumerate() {
        inv_b[p] = v;
    }
    Some(ca.labeling.iter().map(|&p| inv_b[p]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, kneser, schlafli};

    fn random_relabel(g: &Graph, seed: u64) -> Graph {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        g.permuted(&perm)
    }

    #[test]
    fn pentagon_self_complementary() {
        let c5 = cycle(5).unwrap();
        assert_eq!(canonical_key(&c5), canonical_key(&c5.complement()));
    }

    #[test]
    fn hexagon_vs_two_triangles() {
        let c6 = cycle(6).unwrap();
        let tt = complete(3).disjoint_union(&complete(3)).unwrap();
        assert_ne!(canonical_key(&c6), canonical_key(&tt));
    }

    #[test]
    fn relabel_invariance() {
        for g in [kneser(5, 2).unwrap(), schlafli(), cycle(9).unwrap().complement()] {
            let key = canonical_key(&g);
            for seed in 1..4 {
                let h = random_relabel(&g, seed);
                assert_eq!(canonical_key(&h), key);
                let iso = find_isomorphism(&g, &h).unwrap();
                for (u, v) in g.edges() {
                    assert!(h.adjacent(iso[u], iso[v]));
                }
            }
        }
    }

    #[test]
    fn automorphisms_verify() {
        let p = kneser(5, 2).unwrap();
        let c = canonical_form(&p);
        assert!(!c.automorphisms.is_empty());
        for a in &c.automorphisms {
            for (u, v) in p.edges() {
                assert!(p.adjacent(a[u], a[v]));
            }
        }
        // Petersen graph is vertex-transitive.
        assert!(c.orbits().iter().all(|&r| r == 0));
    }
}
