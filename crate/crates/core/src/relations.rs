//! Information equivalence, weak equivalence, the information order, the
//! two distances, and finite core spectra, all read off certified bounds.

use crate::capacity::Operand;
use crate::error::Result;
use crate::lp::Rational;
use crate::ratio::{at_least_one, below_one, value_min, Engine, RatioBounds};
use crate::real::{Exact, Interval, Value};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::cmp::Ordering;

/// Reference cores for spectra; each enters as its complement.
pub const REFERENCE_CORES: [&str; 8] = ["K(1)", "K(2)", "K(3)", "K(4)", "K(5)", "C(5)", "C(7)", "KG(5,2)"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CertifiedEquivalent,
    CertifiedInequivalent,
    Unknown,
}

/// Whether `a ≼ b`, `b ≼ a` hold: `Some(true)` certified, `Some(false)`
/// refuted, `None` undecided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Order {
    pub a_below_b: Option<bool>,
    pub b_below_a: Option<bool>,
}

impl Order {
    pub fn incomparable(&self) -> bool {
        self.a_below_b == Some(false) && self.b_below_a == Some(false)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Relation {
    /// `Ir(b/a)`: `a` as source.
    pub forward: RatioBounds,
    /// `Ir(a/b)`.
    pub backward: RatioBounds,
    pub information: Verdict,
    pub weak: Verdict,
    pub order: Order,
}

fn above_one(v: &Value) -> bool {
    matches!(v.partial_cmp_value(&Value::int(1)), Some(Ordering::Greater)) || v.lo() > 1.0
}

fn below(b: &RatioBounds) -> Option<bool> {
    if at_least_one(&b.lower.value) {
        Some(true)
    } else if below_one(&b.upper.value) {
        Some(false)
    } else {
        None
    }
}

impl Relation {
    pub fn from_bounds(forward: RatioBounds, backward: RatioBounds) -> Relation {
        let (f, b) = (&forward, &backward);
        let information = if at_least_one(&f.lower.value) && at_least_one(&b.lower.value) {
            Verdict::CertifiedEquivalent
        } else if below_one(&f.upper.value)
            || below_one(&b.upper.value)
            || above_one(&f.lower.value)
            || above_one(&b.lower.value)
        {
            Verdict::CertifiedInequivalent
        } else {
            Verdict::Unknown
        };
        // The product of the two ratios never exceeds one.
        let weak = if at_least_one(&f.lower.value.mul(&b.lower.value)) {
            Verdict::CertifiedEquivalent
        } else if below_one(&f.upper.value.mul(&b.upper.value)) {
            Verdict::CertifiedInequivalent
        } else {
            Verdict::Unknown
        };
        let order = Order {
            a_below_b: below(f),
            b_below_a: below(b),
        };
        Relation {
            forward,
            backward,
            information,
            weak,
            order,
        }
    }
}

pub fn equivalence_check(engine: &mut Engine, a: &Operand, b: &Operand) -> Result<Relation> {
    let forward = engine.ir_bounds(a, b)?;
    let backward = engine.ir_bounds(b, a)?;
    Ok(Relation::from_bounds(forward, backward))
}

#[derive(Clone, Debug, Serialize)]
pub struct Metric {
    #[serde(serialize_with = "ser_value")]
    pub d: Value,
    #[serde(serialize_with = "ser_value")]
    pub d_w: Value,
}

fn ser_value<S: serde::Serializer>(v: &Value, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::real::ValueJson::from(v).serialize(s)
}

/// `-log2 x` for `x` between `lo` and `hi`; exact when both ends are the
/// same rational.
fn neg_log2(lo: &Value, hi: &Value) -> Value {
    if let (Some(a), Some(b)) = (lo.as_exact(), hi.as_exact()) {
        if a == b {
            if let Some(q) = a.as_rational() {
                if q.is_positive() {
                    return Value::Exact(Exact::log2_rational(&(Rational::one() / q)));
                }
            }
        }
    }
    if lo.is_infinite() && hi.is_infinite() {
        return Value::Approx(Interval::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    }
    let top = if lo.lo() <= 0.0 { f64::INFINITY } else { -lo.lo().log2() };
    let bottom = if hi.is_infinite() { f64::NEG_INFINITY } else { -hi.hi().log2() };
    if top.is_infinite() && top > 0.0 && bottom == top {
        return Value::Infinite;
    }
    Value::Approx(Interval::new(bottom, top).widen(4))
}

/// Distances from the two directional bounds of `rel`.
pub fn metric_from(rel: &Relation) -> Metric {
    let (f, b) = (&rel.forward, &rel.backward);
    let min_lo = value_min(&f.lower.value, &b.lower.value);
    let min_hi = value_min(&f.upper.value, &b.upper.value);
    let d = neg_log2(&min_lo, &min_hi);
    let zero_times_inf = |x: &Value, y: &Value| {
        (x.is_infinite() && y.as_exact().is_some_and(Exact::is_zero)) || (y.is_infinite() && x.as_exact().is_some_and(Exact::is_zero))
    };
    let d_w = if zero_times_inf(&f.lower.value, &b.lower.value) || zero_times_inf(&f.upper.value, &b.upper.value) {
        Value::Approx(Interval::new(f64::NEG_INFINITY, f64::INFINITY))
    } else {
        let lo = f.lower.value.mul(&b.lower.value);
        let hi = f.upper.value.mul(&b.upper.value);
        let lo = match lo.as_exact().and_then(Exact::as_rational) {
            Some(q) if q.is_zero() => Value::int(0),
            _ => lo,
        };
        neg_log2(&lo, &hi)
    };
    Metric { d, d_w }
}

pub fn metric_eval(engine: &mut Engine, a: &Operand, b: &Operand) -> Result<Metric> {
    Ok(metric_from(&equivalence_check(engine, a, b)?))
}

/// `σ_S` and `σ_C` over a list of reference cores.
#[derive(Clone, Debug, Serialize)]
pub struct Spectra {
    pub references: Vec<String>,
    /// `Ir(Γ̄_i / G)`: `G` as source.
    pub source: Vec<RatioBounds>,
    /// `Ir(G / Γ̄_i)`: `G` as channel.
    pub channel: Vec<RatioBounds>,
}

pub fn spectra(engine: &mut Engine, g: &Operand, references: &[&str]) -> Result<Spectra> {
    let mut out = Spectra {
        references: Vec::new(),
        source: Vec::new(),
        channel: Vec::new(),
    };
    for r in references {
        let gamma = engine.operand(&format!("~({r})"))?;
        out.references.push(r.to_string());
        out.source.push(engine.ir_bounds(g, &gamma)?);
        out.channel.push(engine.ir_bounds(&gamma, g)?);
    }
    Ok(out)
}

/// Some coordinate where `x ≤ y` certainly fails.
fn violates_le(x: &[RatioBounds], y: &[RatioBounds]) -> bool {
    x.iter().zip(y).any(|(a, b)| a.lo() > b.hi() + 1e-9)
}

/// Necessary conditions relating spectra to a relation, as diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpectraCheck {
    /// The spectra allow `a ≼ b`: `σ_S(b) ≤ σ_S(a)` and `σ_C(a) ≤ σ_C(b)`.
    pub allows_a_below_b: bool,
    pub allows_b_below_a: bool,
}

pub fn spectra_check(a: &Spectra, b: &Spectra) -> SpectraCheck {
    SpectraCheck {
        allows_a_below_b: !violates_le(&b.source, &a.source) && !violates_le(&a.channel, &b.channel),
        allows_b_below_a: !violates_le(&a.source, &b.source) && !violates_le(&b.channel, &a.channel),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;

    fn rel(a: &str, b: &str) -> (Relation, Metric) {
        let mut e = Engine::new(Config::default());
        let (x, y) = (e.operand(a).unwrap(), e.operand(b).unwrap());
        let r = equivalence_check(&mut e, &x, &y).unwrap();
        let m = metric_from(&r);
        (r, m)
    }

    #[test]
    fn kneser_complement_equivalent_to_empty() {
        let (r, m) = rel("~KG(6,2)", "Kbar(3)");
        assert_eq!(r.information, Verdict::CertifiedEquivalent);
        assert_eq!(m.d, Value::int(0));
    }

    #[test]
    fn pentagon_square_incomparable() {
        let (r, _) = rel("C(5)^2", "Kbar(6)");
        assert!(r.order.incomparable());
        assert_eq!(r.information, Verdict::CertifiedInequivalent);
        assert_eq!(r.weak, Verdict::CertifiedInequivalent);
    }

    #[test]
    fn powers_weakly_equivalent() {
        let (r, m) = rel("C(5)", "C(5)^2");
        assert_eq!(r.information, Verdict::CertifiedInequivalent);
        assert_eq!(r.weak, Verdict::CertifiedEquivalent);
        assert_eq!(r.order, Order { a_below_b: Some(true), b_below_a: Some(false) });
        assert_eq!(m.d_w, Value::int(0));
        assert_eq!(m.d, Value::int(1));
    }

    #[test]
    fn schlafli_distance_one() {
        let (_, m) = rel("schlafli", "~schlafli");
        assert_eq!(m.d, Value::int(1));
    }

    #[test]
    fn self_distance_zero() {
        let (r, m) = rel("C(7)", "C(7)");
        assert_eq!(r.information, Verdict::CertifiedEquivalent);
        assert_eq!(m.d, Value::int(0));
        assert_eq!(m.d_w, Value::int(0));
    }

    #[test]
    fn spectra_of_equivalent_graphs_agree() {
        let mut e = Engine::new(Config::default());
        let refs = ["K(2)", "K(3)", "C(5)"];
        let a = e.operand("~KG(6,2)").unwrap();
        let b = e.operand("Kbar(3)").unwrap();
        let sa = spectra(&mut e, &a, &refs).unwrap();
        let sb = spectra(&mut e, &b, &refs).unwrap();
        let c = spectra_check(&sa, &sb);
        assert!(c.allows_a_below_b && c.allows_b_below_a);
        // Kbar(3) against ~K(2) = Kbar(2): Ir = log 2 / log 3.
        assert!((sb.source[0].lo() - 1.0 / 3f64.log2()).abs() < 1e-9);
    }
}
