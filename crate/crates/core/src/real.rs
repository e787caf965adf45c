//! Exact reals built from base-2 logarithms of rationals and rational roots.
//!
//! A value is a ratio of polynomials with rational coefficients in the
//! symbols `L_p = log2 p` for primes `p` (with `L_2 = 1`). Ratios of logs,
//! sums, products and the rational maps used by the bound rules stay inside
//! this field. Equality is decided by formal identity of cross products;
//! anything else falls back to outward-rounded float enclosures.

use crate::lp::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

// -------------------------------------------------------------------------
// Float intervals
// -------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi || lo.is_nan() || hi.is_nan(), "{lo} > {hi}");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// `x` widened by one ulp each way.
    pub fn around(x: f64) -> Self {
        Interval {
            lo: x.next_down(),
            hi: x.next_up(),
        }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && self.hi >= 0.0
    }

    pub fn add(self, o: Interval) -> Interval {
        Interval::new((self.lo + o.lo).next_down(), (self.hi + o.hi).next_up())
    }

    pub fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }

    pub fn sub(self, o: Interval) -> Interval {
        self.add(o.neg())
    }

    pub fn mul(self, o: Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo.next_down(), hi.next_up())
    }

    /// Division; the result is unbounded when `o` straddles zero.
    pub fn div(self, o: Interval) -> Interval {
        if o.contains_zero() {
            return Interval::new(f64::NEG_INFINITY, f64::INFINITY);
        }
        let inv = Interval::new((1.0 / o.hi).next_down(), (1.0 / o.lo).next_up());
        self.mul(inv)
    }

    /// Monotone image under `f` (increasing), widened by `ulps` each way.
    pub fn map_increasing(self, f: impl Fn(f64) -> f64, ulps: u32) -> Interval {
        let (mut lo, mut hi) = (f(self.lo), f(self.hi));
        for _ in 0..ulps {
            lo = lo.next_down();
            hi = hi.next_up();
        }
        Interval::new(lo, hi)
    }

    /// Widened by `ulps` each way.
    pub fn widen(self, ulps: u32) -> Interval {
        self.map_increasing(|x| x, ulps)
    }

    pub fn log2(self) -> Interval {
        self.map_increasing(f64::log2, 4)
    }

    pub fn exp2(self) -> Interval {
        self.map_increasing(f64::exp2, 4)
    }
}

fn rational_interval(q: &Rational) -> Interval {
    let x = q.to_f64().unwrap_or(f64::NAN);
    if exact_f64(q, x) {
        Interval::point(x)
    } else {
        Interval::new(x.next_down().next_down(), x.next_up().next_up())
    }
}

fn exact_f64(q: &Rational, x: f64) -> bool {
    q.is_integer() && q.numer().bits() <= 53 && x.is_finite()
}

// -------------------------------------------------------------------------
// Factorization
// -------------------------------------------------------------------------

/// Factors a positive integer; cofactors beyond trial division are kept as
/// opaque "prime" symbols (sound for formal comparison).
pub fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(n.is_positive(), "factor of non-positive integer");
    let mut out = Vec::new();
    let mut m = n.clone();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u32);
    while &p * &p <= m && p <= limit {
        let mut e = 0;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if !m.is_one() {
        out.push((m, 1));
    }
    out
}

// -------------------------------------------------------------------------
// Positive algebraic numbers ∏ p^{e_p}
// -------------------------------------------------------------------------

/// `∏ p^{e_p}` with rational exponents over primes (or opaque cofactors).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PowerProduct {
    pub factors: BTreeMap<BigInt, Rational>,
}

impl PowerProduct {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_rational(q: &Rational) -> Self {
        assert!(q.is_positive(), "power product of non-positive value");
        let mut pp = PowerProduct::one();
        for (p, e) in factor(q.numer()) {
            *pp.factors.entry(p).or_insert_with(Rational::zero) += Rational::from_integer(BigInt::from(e));
        }
        for (p, e) in factor(q.denom()) {
            *pp.factors.entry(p).or_insert_with(Rational::zero) -= Rational::from_integer(BigInt::from(e));
        }
        pp.factors.retain(|_, e| !e.is_zero());
        pp
    }

    pub fn from_int(n: u64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    /// `base^(1/m)`.
    pub fn root(base: u64, m: u32) -> Self {
        Self::from_int(base).pow(&Rational::new(BigInt::one(), BigInt::from(m)))
    }

    pub fn pow(&self, e: &Rational) -> Self {
        let mut out = self.clone();
        for v in out.factors.values_mut() {
            *v *= e;
        }
        out.factors.retain(|_, e| !e.is_zero());
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (p, e) in &o.factors {
            *out.factors.entry(p.clone()).or_insert_with(Rational::zero) += e;
        }
        out.factors.retain(|_, e| !e.is_zero());
        out
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Exact comparison through `log2`, or `None` when undecidable formally
    /// and the enclosures overlap.
    pub fn cmp(&self, o: &Self) -> Option<Ordering> {
        self.log2().partial_cmp_value(&o.log2())
    }

    /// The value as a rational, when all exponents are integers.
    pub fn as_rational(&self) -> Option<Rational> {
        let mut q = Rational::one();
        for (p, e) in &self.factors {
            if !e.is_integer() {
                return None;
            }
            let k = e.to_integer().to_i32()?;
            let pr = Rational::from_integer(p.clone());
            q *= pr.pow(k);
        }
        Some(q)
    }

    pub fn log2(&self) -> Exact {
        let mut poly = Poly::zero();
        for (p, e) in &self.factors {
            poly = poly.add(&Poly::log_prime(p).scale(e));
        }
        Exact::from_poly(poly)
    }

    pub fn enclosure(&self) -> Interval {
        self.log2().enclosure().exp2()
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", fmt_rational(&q));
        }
        // Render as (integer)^(1/m) when all exponents share a denominator.
        let m = self
            .factors
            .values()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        let mut num = Rational::one();
        for (p, e) in &self.factors {
            let k = (e * Rational::from_integer(m.clone())).to_integer().to_i32().unwrap_or(0);
            num *= Rational::from_integer(p.clone()).pow(k);
        }
        write!(f, "({})^(1/{})", fmt_rational(&num), m)
    }
}

pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

// -------------------------------------------------------------------------
// Polynomials in log-prime symbols
// -------------------------------------------------------------------------

type Mono = Vec<(BigInt, u32)>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, Rational>,
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut m: BTreeMap<BigInt, u32> = a.iter().cloned().collect();
    for (p, e) in b {
        *m.entry(p.clone()).or_insert(0) += e;
    }
    m.into_iter().collect()
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(q: Rational) -> Self {
        let mut p = Poly::zero();
        if !q.is_zero() {
            p.terms.insert(Vec::new(), q);
        }
        p
    }

    /// `log2 p`; for `p = 2` this is the constant 1.
    pub fn log_prime(p: &BigInt) -> Self {
        if *p == BigInt::from(2u32) {
            return Poly::constant(Rational::one());
        }
        let mut out = Poly::zero();
        out.terms.insert(vec![(p.clone(), 1)], Rational::one());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            let e = out.terms.entry(m.clone()).or_insert_with(Rational::zero);
            *e += c;
            if e.is_zero() {
                out.terms.remove(m);
            }
        }
        out
    }

    pub fn scale(&self, q: &Rational) -> Poly {
        if q.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Rational::one())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = mono_mul(ma, mb);
                let e = out.terms.entry(m.clone()).or_insert_with(Rational::zero);
                *e += ca * cb;
                if e.is_zero() {
                    out.terms.remove(&m);
                }
            }
        }
        out
    }

    pub fn enclosure(&self) -> Interval {
        let mut acc = Interval::point(0.0);
        for (m, c) in &self.terms {
            let mut t = rational_interval(c);
            for (p, e) in m {
                let lp = Interval::around(p.to_f64().unwrap_or(f64::INFINITY).log2()).map_increasing(|x| x, 2);
                for _ in 0..*e {
                    t = t.mul(lp);
                }
            }
            acc = acc.add(t);
        }
        acc
    }

    fn leading(&self) -> Option<(&Mono, &Rational)> {
        self.terms.iter().next_back()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let vars: Vec<String> = m
                .iter()
                .map(|(p, e)| if *e == 1 { format!("log2({p})") } else { format!("log2({p})^{e}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

// -------------------------------------------------------------------------
// Exact values
// -------------------------------------------------------------------------

/// A ratio of polynomials in log-prime symbols.
#[derive(Clone, Debug)]
pub struct Exact {
    num: Poly,
    den: Poly,
}

impl PartialEq for Exact {
    fn eq(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl Exact {
    fn from_poly(p: Poly) -> Self {
        Exact {
            num: p,
            den: Poly::constant(Rational::one()),
        }
    }

    pub fn rational(q: Rational) -> Self {
        Self::from_poly(Poly::constant(q))
    }

    pub fn int(n: i64) -> Self {
        Self::rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    /// `log2 q` for a positive rational.
    pub fn log2_rational(q: &Rational) -> Self {
        PowerProduct::from_rational(q).log2()
    }

    fn normalize(mut self) -> Self {
        assert!(!self.den.is_zero(), "exact division by zero");
        if self.num.is_zero() {
            return Exact::zero();
        }
        if let Some(c) = self.den.as_constant() {
            self.num = self.num.scale(&c.recip());
            self.den = Poly::constant(Rational::one());
            return self;
        }
        // Collapse proportional numerator and denominator.
        let (_, cn) = self.num.leading().unwrap();
        let (_, cd) = self.den.leading().unwrap();
        let ratio = cn / cd;
        if self.den.scale(&ratio) == self.num {
            return Exact::rational(ratio);
        }
        // Make the denominator's leading coefficient one.
        let cd = cd.clone();
        self.num = self.num.scale(&cd.recip());
        self.den = self.den.scale(&cd.recip());
        self
    }

    pub fn add(&self, o: &Exact) -> Exact {
        if self.den == o.den {
            return Exact {
                num: self.num.add(&o.num),
                den: self.den.clone(),
            }
            .normalize();
        }
        Exact {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
        .normalize()
    }

    pub fn neg(&self) -> Exact {
        Exact {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Exact) -> Exact {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Exact) -> Exact {
        Exact {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        }
        .normalize()
    }

    /// `self / o`; `None` when `o` is formally zero.
    pub fn div(&self, o: &Exact) -> Option<Exact> {
        if o.num.is_zero() {
            return None;
        }
        Some(
            Exact {
                num: self.num.mul(&o.den),
                den: self.den.mul(&o.num),
            }
            .normalize(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `2^self` as a power product, when `self` is a rational combination
    /// of log-prime symbols.
    pub fn exp2(&self) -> Option<PowerProduct> {
        let d = self.den.as_constant()?;
        let mut pp = PowerProduct::one();
        for (mono, c) in &self.num.terms {
            let e = c / &d;
            let base = match mono.as_slice() {
                [] => BigInt::from(2u32),
                [(p, 1)] => p.clone(),
                _ => return None,
            };
            let mut one = PowerProduct::one();
            one.factors.insert(base, e);
            pp = pp.mul(&one);
        }
        Some(pp)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match (self.num.as_constant(), self.den.as_constant()) {
            (Some(a), Some(b)) => Some(a / b),
            _ => None,
        }
    }

    pub fn enclosure(&self) -> Interval {
        if let Some(q) = self.as_rational() {
            return rational_interval(&q);
        }
        self.num.enclosure().div(self.den.enclosure())
    }

    pub fn to_f64(&self) -> f64 {
        self.enclosure().mid()
    }

    /// Ordering decided formally (equality) or by disjoint enclosures.
    pub fn partial_cmp_value(&self, o: &Exact) -> Option<Ordering> {
        if self == o {
            return Some(Ordering::Equal);
        }
        if let (Some(a), Some(b)) = (self.as_rational(), o.as_rational()) {
            return Some(a.cmp(&b));
        }
        let (a, b) = (self.enclosure(), o.enclosure());
        if a.hi < b.lo {
            Some(Ordering::Less)
        } else if a.lo > b.hi {
            Some(Ordering::Greater)
        } else {
            None
        }
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", fmt_rational(&q));
        }
        if self.den.as_constant().is_some() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// `2^e` as a rational, when it is one.
pub fn exp2_rational(e: &Exact) -> Option<Rational> {
    e.exp2()?.as_rational()
}

// -------------------------------------------------------------------------
// Bound values
// -------------------------------------------------------------------------

/// An endpoint value: exact, or a certified float enclosure.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Exact),
    Approx(Interval),
    Infinite,
}

impl Value {
    pub fn rational(q: Rational) -> Self {
        Value::Exact(Exact::rational(q))
    }

    pub fn int(n: i64) -> Self {
        Value::Exact(Exact::int(n))
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Value::Approx(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Value::Infinite)
    }

    pub fn enclosure(&self) -> Interval {
        match self {
            Value::Exact(e) => e.enclosure(),
            Value::Approx(i) => *i,
            Value::Infinite => Interval::point(f64::INFINITY),
        }
    }

    pub fn as_exact(&self) -> Option<&Exact> {
        match self {
            Value::Exact(e) => Some(e),
            _ => None,
        }
    }

    /// Ordering when decidable. Approximate values compare by enclosure.
    pub fn partial_cmp_value(&self, o: &Value) -> Option<Ordering> {
        match (self, o) {
            (Value::Infinite, Value::Infinite) => Some(Ordering::Equal),
            (Value::Infinite, _) => Some(Ordering::Greater),
            (_, Value::Infinite) => Some(Ordering::Less),
            (Value::Exact(a), Value::Exact(b)) => a.partial_cmp_value(b),
            _ => {
                let (a, b) = (self.enclosure(), o.enclosure());
                if a.hi < b.lo {
                    Some(Ordering::Less)
                } else if a.lo > b.hi {
                    Some(Ordering::Greater)
                } else if a == b && a.lo == a.hi {
                    Some(Ordering::Equal)
                } else {
                    None
                }
            }
        }
    }

    /// Certified lower end of the enclosure.
    pub fn lo(&self) -> f64 {
        self.enclosure().lo
    }

    /// Certified upper end of the enclosure.
    pub fn hi(&self) -> f64 {
        self.enclosure().hi
    }

    pub fn approx(&self) -> f64 {
        match self {
            Value::Infinite => f64::INFINITY,
            v => v.enclosure().mid(),
        }
    }

    fn lift2(
        &self,
        o: &Value,
        exact: impl Fn(&Exact, &Exact) -> Option<Exact>,
        float: impl Fn(Interval, Interval) -> Interval,
    ) -> Value {
        if let (Value::Exact(a), Value::Exact(b)) = (self, o) {
            if let Some(e) = exact(a, b) {
                return Value::Exact(e);
            }
        }
        Value::Approx(float(self.enclosure(), o.enclosure()))
    }

    pub fn add(&self, o: &Value) -> Value {
        if self.is_infinite() || o.is_infinite() {
            return Value::Infinite;
        }
        self.lift2(o, |a, b| Some(a.add(b)), Interval::add)
    }

    pub fn mul(&self, o: &Value) -> Value {
        if self.is_infinite() || o.is_infinite() {
            return Value::Infinite;
        }
        self.lift2(o, |a, b| Some(a.mul(b)), Interval::mul)
    }

    pub fn div(&self, o: &Value) -> Value {
        self.lift2(o, |a, b| a.div(b), Interval::div)
    }

    /// `x / (1 + x)`, increasing in `x`, with `∞ ↦ 1`.
    pub fn x_over_1px(&self) -> Value {
        match self {
            Value::Infinite => Value::int(1),
            Value::Exact(e) => Value::Exact(e.div(&e.add(&Exact::one())).expect("1 + x > 0")),
            Value::Approx(i) => {
                let f = |x: f64| x / (1.0 + x);
                Value::Approx(i.map_increasing(f, 4))
            }
        }
    }

    /// `1 / x` for positive `x`.
    pub fn recip(&self) -> Value {
        match self {
            Value::Infinite => Value::int(0),
            v => Value::int(1).div(v),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(e) => {
                if e.as_rational().is_some() {
                    write!(f, "{e}")
                } else {
                    write!(f, "{} ≈ {:.6}", e, e.to_f64())
                }
            }
            Value::Approx(i) => write!(f, "[{:.8}, {:.8}]", i.lo, i.hi),
            Value::Infinite => write!(f, "inf"),
        }
    }
}

/// JSON form: `{kind: "rational"|"log_ratio"|"interval"|"infinite", ...}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValueJson {
    Rational { num: String, den: String, approx: f64 },
    LogRatio { expr: String, lo: f64, hi: f64, approx: f64 },
    Root { base: String, index: u32, approx: f64 },
    Interval { lo: f64, hi: f64 },
    Infinite,
}

impl From<&Value> for ValueJson {
    fn from(v: &Value) -> Self {
        match v {
            Value::Infinite => ValueJson::Infinite,
            Value::Approx(i) => ValueJson::Interval { lo: i.lo, hi: i.hi },
            Value::Exact(e) => match e.as_rational() {
                Some(q) => ValueJson::Rational {
                    num: q.numer().to_string(),
                    den: q.denom().to_string(),
                    approx: q.to_f64().unwrap_or(f64::NAN),
                },
                None => {
                    let i = e.enclosure();
                    ValueJson::LogRatio {
                        expr: e.to_string(),
                        lo: i.lo,
                        hi: i.hi,
                        approx: i.mid(),
                    }
                }
            },
        }
    }
}

impl ValueJson {
    pub fn approx(&self) -> f64 {
        match self {
            ValueJson::Rational { approx, .. } | ValueJson::LogRatio { approx, .. } | ValueJson::Root { approx, .. } => {
                *approx
            }
            ValueJson::Interval { lo, hi } => 0.5 * (lo + hi),
            ValueJson::Infinite => f64::INFINITY,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{int, rat};

    #[test]
    fn log_ratios_collapse() {
        let l3 = Exact::log2_rational(&int(3));
        let l9 = Exact::log2_rational(&int(9));
        assert_eq!(l3.div(&l9).unwrap().as_rational(), Some(rat(1, 2)));
        let l4 = Exact::log2_rational(&int(4));
        assert_eq!(l4.as_rational(), Some(int(2)));
        // (5/2)^3 against 5/2.
        let a = Exact::log2_rational(&rat(125, 8));
        let b = Exact::log2_rational(&rat(5, 2));
        assert_eq!(a.div(&b).unwrap().as_rational(), Some(int(3)));
    }

    #[test]
    fn separation_value() {
        let sqrt5 = PowerProduct::root(5, 2).log2();
        let v = sqrt5.div(&Exact::log2_rational(&rat(5, 2))).unwrap();
        let i = v.enclosure();
        let expect = 5f64.sqrt().log2() / 2.5f64.log2();
        assert!(i.lo <= expect && expect <= i.hi);
        assert!(i.width() < 1e-12);
        assert!(v.as_rational().is_none());
    }

    #[test]
    fn identity_maps() {
        // 1 + 1/log2(5/2) is formally equal to (log2 5)/(log2 5 - 1).
        let l = Exact::log2_rational(&rat(5, 2));
        let a = Exact::one().add(&Exact::one().div(&l).unwrap());
        let l5 = Exact::log2_rational(&int(5));
        let b = l5.div(&l5.sub(&Exact::one())).unwrap();
        assert_eq!(a, b);
        let x = Value::Exact(Exact::int(1));
        assert_eq!(x.x_over_1px(), Value::rational(rat(1, 2)));
    }

    #[test]
    fn comparisons() {
        let a = PowerProduct::root(5, 2);
        let b = PowerProduct::from_rational(&rat(5, 2));
        assert_eq!(a.cmp(&b), Some(Ordering::Less));
        assert_eq!(PowerProduct::root(9, 2).cmp(&PowerProduct::from_int(3)), Some(Ordering::Equal));
        assert_eq!(PowerProduct::root(9, 2).as_rational(), Some(int(3)));
        assert_eq!(PowerProduct::root(5, 2).to_string(), "(5)^(1/2)");
    }
}
