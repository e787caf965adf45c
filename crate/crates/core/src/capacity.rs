//! Per-graph invariant profiles: exact χ̄_f, a ϑ interval, a certified
//! lower bound on Θ, and a minrank value, each with its certificate.
//!
//! Values enter the bound rules as base-2 logarithms. A ϑ interval that
//! contains (within `tol`) the capacity lower bound or χ̄_f is snapped to
//! that exact value; Θ is exact when its lower bound meets min(ϑ, χ̄_f).

use crate::certificate::Certificate;
use crate::clique;
use crate::config::Config;
use crate::error::Result;
use crate::expr::Expr;
use crate::fractional;
use crate::graph::Graph;
use crate::invariants;
use crate::lp::Rational;
use crate::real::{Exact, Interval, PowerProduct, Value};
use crate::theta;
use num_bigint::BigInt;
use num_traits::One;
use std::cmp::Ordering;

/// Graphs up to this size are keyed by canonical form.
pub const CANONICAL_KEY_MAX: usize = 64;

/// A graph with the expression that produced it.
#[derive(Clone, Debug)]
pub struct Operand {
    pub expr: Expr,
    /// `None` when the graph is too large to build.
    pub graph: Option<Graph>,
    pub vertices: u128,
    /// Isomorphism-invariant key when the graph is small, else the
    /// expression text.
    pub key: String,
}

impl Operand {
    pub fn new(expr: Expr, cfg: &Config) -> Result<Operand> {
        let vertices = expr.vertex_count()?;
        let graph = if vertices <= cfg.operand_max_vertices as u128 {
            Some(expr.eval_limited(cfg.operand_max_vertices)?)
        } else {
            None
        };
        let key = key_of(&expr, graph.as_ref());
        Ok(Operand {
            expr,
            graph,
            vertices,
            key,
        })
    }

    pub fn parse(text: &str, cfg: &Config) -> Result<Operand> {
        Operand::new(Expr::parse(text)?, cfg)
    }

    pub fn from_graph(g: &Graph, label: &str) -> Operand {
        let expr = Expr::Literal {
            source: label.to_string(),
            graph6: g.to_graph6(),
        };
        let key = key_of(&expr, Some(g));
        Operand {
            expr,
            graph: Some(g.clone()),
            vertices: g.n() as u128,
            key,
        }
    }

    pub fn label(&self) -> String {
        self.expr.to_string()
    }
}

fn key_of(expr: &Expr, g: Option<&Graph>) -> String {
    match g {
        Some(g) if g.n() <= CANONICAL_KEY_MAX => format!("c:{}", crate::canon::canonical_form(g).key()),
        _ => format!("e:{expr}"),
    }
}

/// Strong-product factors of an expression, with multiplicity. A disjoint
/// union of `c` syntactically equal parts becomes `part ⊠ Kbar(c)`.
pub fn factors(e: &Expr) -> Vec<(Expr, usize)> {
    match e {
        Expr::Strong(a, b) => {
            let mut f = factors(a);
            f.extend(factors(b));
            f
        }
        Expr::Power(a, k) => factors(a).into_iter().map(|(x, m)| (x, m * k)).collect(),
        Expr::Union(..) => {
            let mut parts = Vec::new();
            union_parts(e, &mut parts);
            if parts.len() > 1 && parts.iter().all(|p| p == &parts[0]) {
                let mut f = factors(&parts[0]);
                f.push((
                    Expr::Named {
                        name: "Kbar".into(),
                        params: vec![parts.len()],
                    },
                    1,
                ));
                f
            } else {
                vec![(e.clone(), 1)]
            }
        }
        _ => vec![(e.clone(), 1)],
    }
}

pub fn union_parts(e: &Expr, out: &mut Vec<Expr>) {
    match e {
        Expr::Union(a, b) => {
            union_parts(a, out);
            union_parts(b, out);
        }
        _ => out.push(e.clone()),
    }
}

/// Rebuilds a product expression from factors.
pub fn product_expr(fs: &[(Expr, usize)]) -> Expr {
    let term = |(e, k): &(Expr, usize)| if *k == 1 { e.clone() } else { Expr::Power(Box::new(e.clone()), *k) };
    let mut it = fs.iter();
    let first = term(it.next().expect("at least one factor"));
    it.fold(first, |acc, f| Expr::Strong(Box::new(acc), Box::new(term(f))))
}

#[derive(Clone, Debug)]
pub struct Profile {
    pub vertices: u128,
    pub complete: bool,
    /// Exact χ̄_f; the certificate value is its log.
    pub chi: Option<(Rational, Certificate)>,
    /// ϑ interval and its log certificate (exact when snapped).
    pub theta: Option<(Interval, Certificate)>,
    /// Certified lower bound on Θ and its log certificate.
    pub cap_lo: Option<(PowerProduct, Certificate)>,
    /// Θ equals `cap_lo`.
    pub cap_exact: bool,
    /// `log2 γ(g^m)^{1/m}` certificate.
    pub gamma: Option<Certificate>,
}

impl Profile {
    pub fn log_chi(&self) -> Option<&Certificate> {
        self.chi.as_ref().map(|c| &c.1)
    }

    pub fn log_theta(&self) -> Option<&Certificate> {
        self.theta.as_ref().map(|c| &c.1)
    }

    pub fn log_cap_lo(&self) -> Option<&Certificate> {
        self.cap_lo.as_ref().map(|c| &c.1)
    }

    /// Interval for Θ: `[cap_lo, min(ϑ_hi, χ̄_f)]`.
    pub fn capacity_interval(&self) -> Option<Interval> {
        let lo = self.cap_lo.as_ref()?.0.enclosure().lo;
        let mut hi = f64::INFINITY;
        if let Some((t, c)) = &self.theta {
            hi = hi.min(if c.value.is_exact() { c.value.enclosure().exp2().hi } else { t.hi });
        }
        if let Some((q, _)) = &self.chi {
            hi = hi.min(Exact::rational(q.clone()).enclosure().hi);
        }
        Some(Interval::new(lo.min(hi), hi))
    }

    pub fn theta_exact(&self) -> bool {
        self.theta.as_ref().is_some_and(|(_, c)| c.value.is_exact())
    }

    /// Direct computation on an explicit graph.
    pub fn compute(g: &Graph, cfg: &Config) -> Profile {
        let n = g.n();
        let complete = g.is_complete();
        let chi = (n <= cfg.chi_max_vertices)
            .then(|| fractional::chi_bar_f(g).ok())
            .flatten()
            .map(|fv| (fv.value.clone(), Certificate::fractional_cover(g, &fv)));
        let cap_lo = Some(capacity_lower(g, cfg, chi.as_ref().map(|c| &c.0)));
        let theta = (n <= cfg.theta_max_vertices && n > 0)
            .then(|| theta::lovasz_theta_limited(g, cfg.tol, cfg.theta_max_vertices).ok())
            .flatten()
            .map(|t| (Interval::new(t.lo, t.hi), (t.lo, t.hi)));
        let gamma = (n <= invariants::MINRANK_MAX_VERTICES && n > 0)
            .then(|| invariants::minrank_gf2(g).ok())
            .flatten()
            .map(|m| Certificate::minrank(g, 1, m.value, &m.matrix));
        let mut p = Profile {
            vertices: n as u128,
            complete,
            chi,
            theta: None,
            cap_lo,
            cap_exact: false,
            gamma,
        };
        if let Some((iv, (lo, hi))) = theta {
            let snapped = p.snap_target(iv, cfg.tol);
            p.theta = Some((iv, Certificate::theta_sdp(g, lo, hi, cfg.tol, snapped.as_ref())));
        }
        p.settle_capacity();
        p
    }

    /// Exact value the ϑ interval is snapped to, if any.
    fn snap_target(&self, iv: Interval, tol: f64) -> Option<Exact> {
        let near = |pp: &PowerProduct| {
            let e = pp.enclosure();
            e.hi >= iv.lo - tol && e.lo <= iv.hi + tol
        };
        if let Some((pp, _)) = &self.cap_lo {
            if near(pp) {
                return Some(pp.log2());
            }
        }
        if let Some((q, _)) = &self.chi {
            if near(&PowerProduct::from_rational(q)) {
                return Some(Exact::log2_rational(q));
            }
        }
        None
    }

    /// Marks Θ exact when its lower bound meets an exact upper bound.
    fn settle_capacity(&mut self) {
        let Some((pp, _)) = &self.cap_lo else { return };
        let lo = pp.log2();
        let meets = |v: &Value| v.as_exact().is_some_and(|e| *e == lo);
        self.cap_exact = self.log_chi().is_some_and(|c| meets(&c.value))
            || self.log_theta().is_some_and(|c| meets(&c.value));
    }

    /// Profile of `∏ f_i^{e_i}` from factor profiles, using
    /// multiplicativity of χ̄_f and ϑ and supermultiplicativity of Θ.
    pub fn strong_product(parts: &[(&Profile, usize)]) -> Profile {
        let vertices = parts
            .iter()
            .fold(1u128, |acc, (p, e)| acc.saturating_mul(p.vertices.saturating_pow(*e as u32)));
        let complete = parts.iter().all(|(p, _)| p.complete);
        let chi = parts
            .iter()
            .map(|(p, e)| p.chi.as_ref().map(|(q, c)| (q.pow(*e as i32), (c.clone(), *e))))
            .collect::<Option<Vec<_>>>()
            .map(|v| {
                let q = v.iter().fold(Rational::one(), |acc, (q, _)| acc * q);
                (q, Certificate::multiplicative(v.into_iter().map(|(_, c)| c).collect()))
            });
        let theta = parts
            .iter()
            .map(|(p, e)| p.theta.as_ref().map(|(iv, c)| (pow_interval(*iv, *e), (c.clone(), *e))))
            .collect::<Option<Vec<_>>>()
            .map(|v| {
                let iv = v.iter().fold(Interval::point(1.0), |acc, (i, _)| acc.mul(*i));
                (iv, Certificate::multiplicative(v.into_iter().map(|(_, c)| c).collect()))
            });
        let cap_lo = parts
            .iter()
            .map(|(p, e)| {
                p.cap_lo
                    .as_ref()
                    .map(|(pp, c)| (pp.pow(&Rational::from_integer(BigInt::from(*e))), (c.clone(), *e)))
            })
            .collect::<Option<Vec<_>>>()
            .map(|v| {
                let pp = v.iter().fold(PowerProduct::one(), |acc, (p, _)| acc.mul(p));
                (pp, Certificate::multiplicative(v.into_iter().map(|(_, c)| c).collect()))
            });
        let cap_exact = parts.iter().all(|(p, _)| p.cap_exact);
        Profile {
            vertices,
            complete,
            chi,
            theta,
            cap_lo,
            cap_exact,
            gamma: None,
        }
    }

    /// Replaces the capacity lower bound when `other` is strictly larger.
    pub fn improve_capacity(&mut self, pp: PowerProduct, cert: Certificate) {
        let better = match &self.cap_lo {
            None => true,
            Some((cur, _)) => pp.cmp(cur) == Some(Ordering::Greater),
        };
        if better {
            self.cap_lo = Some((pp, cert));
            self.settle_capacity();
        }
    }
}

fn pow_interval(iv: Interval, e: usize) -> Interval {
    (1..e).fold(iv, |acc, _| acc.mul(iv))
}

/// Best certified `α(g^j)^{1/j}` within the configured limits. Falls back to
/// a greedy independent set when exact search runs out of budget.
fn capacity_lower(g: &Graph, cfg: &Config, chi: Option<&Rational>) -> (PowerProduct, Certificate) {
    let set = invariants::independence_number_budgeted(g, cfg.budget_nodes)
        .map(|(_, s)| s)
        .unwrap_or_else(|| clique::greedy_clique(&g.complement()));
    let a = set.len().max(1);
    let mut best = (PowerProduct::from_int(a as u64), Certificate::alpha_power(g, 1, &set));
    let chi_pp = chi.map(PowerProduct::from_rational);
    for j in 2..=cfg.max_power {
        if chi_pp.as_ref().is_some_and(|c| best.0.cmp(c) != Some(Ordering::Less)) {
            break;
        }
        let size = (g.n() as u128).saturating_pow(j as u32);
        if size > cfg.power_vertices as u128 || cfg.out_of_time() {
            break;
        }
        let Ok(p) = g.strong_power_limited(j, cfg.power_vertices) else { break };
        let Some((aj, s)) = invariants::independence_number_budgeted(&p, cfg.budget_nodes) else { break };
        let pp = PowerProduct::from_int(aj as u64).pow(&Rational::new(BigInt::one(), BigInt::from(j)));
        if pp.cmp(&best.0) == Some(Ordering::Greater) {
            best = (pp, Certificate::alpha_power(g, j, &s));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, schlafli};
    use crate::lp::rat;

    #[test]
    fn pentagon() {
        let cfg = Config::default();
        let p = Profile::compute(&cycle(5).unwrap(), &cfg);
        assert_eq!(p.chi.as_ref().unwrap().0, rat(5, 2));
        assert!(p.cap_exact && p.theta_exact());
        assert_eq!(p.cap_lo.as_ref().unwrap().0, PowerProduct::root(5, 2));
        assert!(p.log_theta().unwrap().verify());
        assert!(p.log_cap_lo().unwrap().verify());
    }

    #[test]
    fn schlafli_pair() {
        let cfg = Config::default();
        let g = schlafli();
        let p = Profile::compute(&g, &cfg);
        assert_eq!(p.chi.as_ref().unwrap().0, rat(9, 2));
        assert!(p.cap_exact);
        let q = Profile::compute(&g.complement(), &cfg);
        assert_eq!(q.chi.as_ref().unwrap().0, rat(9, 1));
        assert!(q.theta_exact() && !q.cap_exact);
        assert_eq!(q.cap_lo.as_ref().unwrap().0, PowerProduct::from_int(6));
    }

    #[test]
    fn products_and_factors() {
        let e = Expr::parse("C(5) * C(5)^2 + C(5) * C(5)^2").unwrap();
        let f = factors(&e);
        assert_eq!(f.len(), 3);
        assert_eq!(f[1].1, 2);
        let cfg = Config::default();
        let p = Profile::compute(&cycle(5).unwrap(), &cfg);
        let sq = Profile::strong_product(&[(&p, 2)]);
        assert_eq!(sq.chi.as_ref().unwrap().0, rat(25, 4));
        assert_eq!(sq.cap_lo.as_ref().unwrap().0, PowerProduct::from_int(5));
        assert!(sq.cap_exact && sq.log_chi().unwrap().verify());
    }
}
