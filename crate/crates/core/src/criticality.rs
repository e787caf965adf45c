//! Information-critical graphs, certified by an edge `e` with
//! `α((F∖e)^j)^{1/j} > χ̄_f(F)`.

use crate::config::Config;
use crate::error::Result;
use crate::fractional::{self, FractionalValue};
use crate::graph::Graph;
use crate::invariants;
use crate::lp::Rational;
use num_bigint::BigInt;
use num_traits::Pow;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct EdgeWitness {
    pub edge: (usize, usize),
    pub power: usize,
    /// Independent set of `(F∖e)^power`.
    pub set: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Criticality {
    CertifiedCritical {
        graph6: String,
        chi_bar_f: FractionalValue,
        witness: EdgeWitness,
        /// Complement connected, triangle-free, at least three vertices,
        /// and `χ̄_f < 3`.
        triangle_free_complement: bool,
    },
    Unknown {
        graph6: String,
        chi_bar_f: Option<FractionalValue>,
        edges_tried: usize,
        /// Some search stopped on a node or time budget.
        budget_exhausted: bool,
    },
}

impl Criticality {
    pub fn is_critical(&self) -> bool {
        matches!(self, Criticality::CertifiedCritical { .. })
    }

    /// Re-checks the cover, the edge, and the independent set.
    pub fn verify(&self, f: &Graph) -> bool {
        let Criticality::CertifiedCritical { chi_bar_f, witness, .. } = self else {
            return true;
        };
        let (u, v) = witness.edge;
        if u >= f.n() || v >= f.n() || !f.adjacent(u, v) || !chi_bar_f.verify(&f.complement()) {
            return false;
        }
        let Ok(p) = f.without_edge(u, v).strong_power(witness.power) else { return false };
        let mut set = witness.set.clone();
        set.sort_unstable();
        set.dedup();
        set.len() == witness.set.len()
            && set.iter().all(|&x| x < p.n())
            && p.is_independent(&set)
            && exceeds(set.len(), witness.power, &chi_bar_f.value)
    }
}

/// `a^{1/j} > q`.
fn exceeds(a: usize, j: usize, q: &Rational) -> bool {
    let lhs = BigInt::from(a) * Pow::pow(q.denom(), j);
    lhs > Pow::pow(q.numer(), j)
}

fn fast_path(f: &Graph, chi: &Rational) -> bool {
    let c = f.complement();
    f.n() >= 3 && c.is_connected() && !c.has_triangle() && *chi < Rational::from_integer(BigInt::from(3))
}

pub fn criticality_check(f: &Graph, cfg: &Config) -> Result<Criticality> {
    let graph6 = f.to_graph6();
    let Ok(chi) = fractional::chi_bar_f(f) else {
        return Ok(Criticality::Unknown {
            graph6,
            chi_bar_f: None,
            edges_tried: 0,
            budget_exhausted: true,
        });
    };
    let edges = f.edges();
    let square_ok = f.n() * f.n() <= cfg.power_vertices;
    let mut tried = 0;
    let mut exhausted = false;
    for (power, allowed) in [(1, true), (2, square_ok)] {
        if !allowed {
            continue;
        }
        for &(u, v) in &edges {
            if cfg.out_of_time() {
                exhausted = true;
                break;
            }
            tried += 1;
            let g = f.without_edge(u, v).strong_power(power)?;
            let Some((a, set)) = invariants::independence_number_budgeted(&g, cfg.budget_nodes) else {
                exhausted = true;
                continue;
            };
            if exceeds(a, power, &chi.value) {
                return Ok(Criticality::CertifiedCritical {
                    graph6,
                    triangle_free_complement: fast_path(f, &chi.value),
                    chi_bar_f: chi,
                    witness: EdgeWitness {
                        edge: (u, v),
                        power,
                        set,
                    },
                });
            }
        }
    }
    Ok(Criticality::Unknown {
        graph6,
        chi_bar_f: Some(chi),
        edges_tried: tried,
        budget_exhausted: exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;

    fn check(text: &str) -> Criticality {
        let g = Expr::parse(text).unwrap().eval().unwrap();
        let c = criticality_check(&g, &Config::default()).unwrap();
        assert!(c.verify(&g));
        c
    }

    #[test]
    fn odd_cycle_complements() {
        for n in [5, 7, 9] {
            let c = check(&format!("~C({n})"));
            assert!(c.is_critical(), "~C({n})");
            if let Criticality::CertifiedCritical { triangle_free_complement, .. } = c {
                assert!(triangle_free_complement);
            }
        }
    }

    #[test]
    fn wheel_complement_edge() {
        let c = check("~W(9)");
        let Criticality::CertifiedCritical { witness, .. } = c else { panic!("not certified") };
        assert_eq!(witness.power, 1);
        assert_eq!(witness.set.len(), 4);
    }

    #[test]
    fn kneser_and_mycielski_complements() {
        assert!(check("~KG(5,2)").is_critical());
        assert!(check("~M(C(5))").is_critical());
    }

    #[test]
    fn square_is_unknown() {
        assert!(!check("C(4)").is_critical());
    }

    #[test]
    fn tampered_witness_rejected() {
        let g = Expr::parse("~C(5)").unwrap().eval().unwrap();
        let mut c = criticality_check(&g, &Config::default()).unwrap();
        if let Criticality::CertifiedCritical { witness, .. } = &mut c {
            witness.set.pop();
        }
        assert!(!c.verify(&g));
    }
}
