//! Fractional chromatic number and fractional clique cover number as exact
//! rational linear programs over independent sets.

use crate::clique;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lp::{int, solve_lp, LinearProgram, LpOutcome, Rational, Sense};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

/// Maximal independent sets enumerated before switching to column generation.
pub const DEFAULT_MIS_CAP: usize = 1_000_000;

#[serde_as]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractionalValue {
    #[serde_as(as = "DisplayFromStr")]
    pub value: Rational,
    /// Fractional colouring: independent sets with positive weight.
    #[serde_as(as = "Vec<(_, DisplayFromStr)>")]
    pub cover: Vec<(Vec<usize>, Rational)>,
    /// Vertex weights with every independent set of weight at most one.
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub packing: Vec<Rational>,
}

impl FractionalValue {
    /// Re-checks both certificates against `g`: the cover uses independent
    /// sets and covers every vertex with total weight at least one, the
    /// packing is nonnegative with every independent set at most one, and
    /// both have objective `value`.
    pub fn verify(&self, g: &Graph) -> bool {
        let n = g.n();
        let mut covered = vec![Rational::zero(); n];
        let mut total = Rational::zero();
        for (set, w) in &self.cover {
            if w.is_negative() || !g.is_independent(set) {
                return false;
            }
            for &v in set {
                covered[v] += w;
            }
            total += w;
        }
        if total != self.value || covered.iter().any(|c| *c < Rational::one()) {
            return false;
        }
        if self.packing.len() != n || self.packing.iter().any(|w| w.is_negative()) {
            return false;
        }
        let psum: Rational = self.packing.iter().sum();
        if psum != self.value {
            return false;
        }
        let (best, _) = max_weight_independent_set(g, &self.packing);
        best <= Rational::one()
    }
}

/// Exact maximum-weight independent set for nonnegative rational weights.
pub fn max_weight_independent_set(g: &Graph, w: &[Rational]) -> (Rational, Vec<usize>) {
    let n = g.n();
    let mut order: Vec<usize> = (0..n).filter(|&v| w[v].is_positive()).collect();
    order.sort_by(|&a, &b| w[b].cmp(&w[a]).then(a.cmp(&b)));
    struct S<'a> {
        g: &'a Graph,
        w: &'a [Rational],
        order: Vec<usize>,
        best: Rational,
        best_set: Vec<usize>,
    }
    fn rec(s: &mut S, i: usize, cur: &mut Vec<usize>, cur_w: Rational, rest: Rational) {
        if cur_w > s.best {
            s.best = cur_w.clone();
            s.best_set = cur.clone();
        }
        if i == s.order.len() || &cur_w + &rest <= s.best {
            return;
        }
        let v = s.order[i];
        let rest_after = &rest - &s.w[v];
        if cur.iter().all(|&u| !s.g.adjacent(u, v)) {
            cur.push(v);
            let nw = &cur_w + &s.w[v];
            // Remaining weight restricted to vertices still compatible.
            let compat: Rational = s.order[i + 1..]
                .iter()
                .filter(|&&u| cur.iter().all(|&x| !s.g.adjacent(x, u)))
                .map(|&u| s.w[u].clone())
                .sum();
            rec(s, i + 1, cur, nw, compat);
            cur.pop();
        }
        rec(s, i + 1, cur, cur_w, rest_after);
    }
    let total: Rational = order.iter().map(|&v| w[v].clone()).sum();
    let mut s = S {
        g,
        w,
        order,
        best: Rational::zero(),
        best_set: Vec::new(),
    };
    rec(&mut s, 0, &mut Vec::new(), Rational::zero(), total);
    s.best_set.sort_unstable();
    (s.best, s.best_set)
}

/// Covering LP `min Σ x_I, Σ_{I∋v} x_I ≥ 1` over the given sets, solved
/// through its packing dual `max Σ y_v, Σ_{v∈I} y_v ≤ 1`, whose slack basis
/// is feasible from the start.
fn solve_cover(n: usize, sets: &[Vec<usize>]) -> Result<(Rational, Vec<Rational>, Vec<Rational>)> {
    let mut lp = LinearProgram::new(vec![int(1); n]);
    for s in sets {
        let mut coeffs = vec![int(0); n];
        for &v in s {
            coeffs[v] = int(1);
        }
        lp.add(coeffs, Sense::Le, int(1));
    }
    match solve_lp(&lp) {
        LpOutcome::Optimal { value, primal, dual } => Ok((value, dual, primal)),
        other => Err(Error::NonConvergence(format!("fractional colouring LP: {other:?}"))),
    }
}

fn extend_to_maximal(g: &Graph, set: &mut Vec<usize>) {
    for v in 0..g.n() {
        if !set.contains(&v) && set.iter().all(|&u| !g.adjacent(u, v)) {
            set.push(v);
        }
    }
    set.sort_unstable();
}

fn package(sets: Vec<Vec<usize>>, value: Rational, x: Vec<Rational>, packing: Vec<Rational>) -> FractionalValue {
    let cover = sets
        .into_iter()
        .zip(x)
        .filter(|(_, w)| w.is_positive())
        .collect();
    FractionalValue { value, cover, packing }
}

/// Exact fractional chromatic number with primal and dual certificates.
pub fn fractional_chromatic(g: &Graph) -> Result<FractionalValue> {
    fractional_chromatic_capped(g, DEFAULT_MIS_CAP)
}

pub fn fractional_chromatic_capped(g: &Graph, cap: usize) -> Result<FractionalValue> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidParameter("graph has no vertices".into()));
    }
    if !g.has_edges() {
        let all: Vec<usize> = (0..n).collect();
        let mut packing = vec![Rational::zero(); n];
        packing[0] = Rational::one();
        return Ok(FractionalValue {
            value: Rational::one(),
            cover: vec![(all, Rational::one())],
            packing,
        });
    }
    let comp = g.complement();
    if let Some(sets) = clique::maximal_cliques(&comp, cap) {
        let (value, x, packing) = solve_cover(n, &sets)?;
        return Ok(package(sets, value, x, packing));
    }
    // Column generation from a greedy colouring.
    let mut sets: Vec<Vec<usize>> = Vec::new();
    let mut uncovered: Vec<usize> = (0..n).collect();
    while let Some(&v) = uncovered.first() {
        let mut s = vec![v];
        for &u in &uncovered[1..] {
            if s.iter().all(|&x| !g.adjacent(x, u)) {
                s.push(u);
            }
        }
        uncovered.retain(|u| !s.contains(u));
        extend_to_maximal(g, &mut s);
        sets.push(s);
    }
    loop {
        let (value, x, packing) = solve_cover(n, &sets)?;
        let (best, mut set) = max_weight_independent_set(g, &packing);
        if best <= Rational::one() {
            return Ok(package(sets, value, x, packing));
        }
        extend_to_maximal(g, &mut set);
        if sets.contains(&set) {
            return Err(Error::NonConvergence("column generation stalled".into()));
        }
        sets.push(set);
    }
}

/// Fractional clique cover number `χ̄_f(g) = χ_f(ḡ)`.
pub fn chi_bar_f(g: &Graph) -> Result<FractionalValue> {
    fractional_chromatic(&g.complement())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, empty, kneser, mycielski};
    use crate::lp::rat;

    #[test]
    fn known_values() {
        let c5 = cycle(5).unwrap();
        let v = chi_bar_f(&c5).unwrap();
        assert_eq!(v.value, rat(5, 2));
        assert!(v.verify(&c5.complement()));
        assert_eq!(chi_bar_f(&cycle(9).unwrap().complement()).unwrap().value, rat(9, 4));
        assert_eq!(chi_bar_f(&kneser(6, 2).unwrap().complement()).unwrap().value, int(3));
        assert_eq!(fractional_chromatic(&empty(4)).unwrap().value, int(1));
        assert_eq!(fractional_chromatic(&complete(4)).unwrap().value, int(4));
        assert_eq!(fractional_chromatic(&mycielski(&cycle(5).unwrap())).unwrap().value, rat(29, 10));
    }

    #[test]
    fn column_generation_matches() {
        let g = kneser(6, 2).unwrap();
        let full = fractional_chromatic(&g).unwrap();
        let cg = fractional_chromatic_capped(&g, 2).unwrap();
        assert_eq!(full.value, cg.value);
        assert!(cg.verify(&g));
    }
}
