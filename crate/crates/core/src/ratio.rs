//! Certified lower and upper bounds on `Ir(H/G)`.
//!
//! Throughout, `source` is `G` and `channel` is `H`: a `(k, n)` code maps
//! `G^k` into `H^n`, and the ratio is `Ir(H/G)`.

use crate::capacity::{factors, product_expr, union_parts, Operand, Profile};
use crate::certificate::{clique_union_count, Certificate, Rule};
use crate::code::{find_code_limited, CodeResult};
use crate::config::Config;
use crate::error::Result;
use crate::expr::Expr;
use crate::graph::Graph;
use crate::hom::{self, HomResult};
use crate::lp::Rational;
use crate::real::{Exact, Interval, Value, ValueJson};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::rc::Rc;

/// Channel-side size ceiling for code search inside bounds.
const CODE_CHANNEL_MAX_VERTICES: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    /// Source complete: every map is a code, `Ir = ∞`.
    SourceComplete,
    /// Channel complete and source not: `Ir = 0`.
    ChannelComplete,
    /// Lower and upper bounds coincide exactly.
    Exact,
    /// A bound was transferred from the complement cores.
    CoreReduced,
    /// A ϑ value was snapped to an exact value within tolerance.
    ThetaSnapped,
    /// Some optional stage was skipped when the time budget ran out.
    TimeBudget,
    /// Lower exceeds upper beyond tolerance (should not happen).
    Inconsistent,
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioBounds {
    pub source: String,
    pub channel: String,
    pub lower: Certificate,
    pub upper: Certificate,
    pub flags: Vec<Flag>,
}

impl RatioBounds {
    /// Certified lower bound as a float.
    pub fn lo(&self) -> f64 {
        self.lower.value.lo()
    }

    /// Certified upper bound as a float.
    pub fn hi(&self) -> f64 {
        self.upper.value.hi()
    }

    pub fn is_exact(&self) -> bool {
        match (&self.lower.value, &self.upper.value) {
            (Value::Exact(a), Value::Exact(b)) => a == b,
            (Value::Infinite, Value::Infinite) => true,
            _ => false,
        }
    }

    /// The exact value, when both ends agree formally.
    pub fn exact_value(&self) -> Option<&Value> {
        self.is_exact().then_some(&self.lower.value)
    }

    pub fn has(&self, f: Flag) -> bool {
        self.flags.contains(&f)
    }

    pub fn verify(&self) -> bool {
        self.lower.verify() && self.upper.verify()
    }

    pub fn to_json(&self) -> RatioJson {
        RatioJson {
            pair: Pair {
                source: self.source.clone(),
                channel: self.channel.clone(),
            },
            lower: EndpointJson::new(&self.lower, self.lo()),
            upper: EndpointJson::new(&self.upper, self.hi()),
            exact: self.is_exact(),
            flags: self.flags.clone(),
        }
    }
}

/// Published JSON shape of a bound pair.
#[derive(Clone, Debug, Serialize)]
pub struct RatioJson {
    pub pair: Pair,
    pub lower: EndpointJson,
    pub upper: EndpointJson,
    pub exact: bool,
    pub flags: Vec<Flag>,
}

/// `Ir(channel/source)`.
#[derive(Clone, Debug, Serialize)]
pub struct Pair {
    pub source: String,
    pub channel: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EndpointJson {
    pub value: ValueJson,
    /// Certified float endpoint (lower end for a lower bound, upper end
    /// for an upper bound).
    pub bound: f64,
    pub exactness: &'static str,
    pub certificate: Certificate,
}

impl EndpointJson {
    fn new(c: &Certificate, bound: f64) -> Self {
        EndpointJson {
            value: ValueJson::from(&c.value),
            bound,
            exactness: match &c.value {
                Value::Exact(_) => "exact",
                Value::Approx(_) => "interval",
                Value::Infinite => "infinite",
            },
            certificate: c.clone(),
        }
    }
}

/// The upper bounds that come from hom-monotone invariants.
#[derive(Clone, Debug, Serialize)]
pub struct UpperFamily {
    pub theta: Option<Certificate>,
    pub fractional: Option<Certificate>,
    pub capacity: Option<Certificate>,
    pub minrank: Option<Certificate>,
}

impl UpperFamily {
    pub fn all(&self) -> Vec<Certificate> {
        [&self.theta, &self.fractional, &self.capacity, &self.minrank]
            .into_iter()
            .flatten()
            .cloned()
            .collect()
    }

    pub fn best(&self) -> Option<Certificate> {
        best_upper(self.all())
    }
}

/// Complement-core data for one operand.
#[derive(Clone, Debug)]
struct CoreInfo {
    reduced: Graph,
    data: serde_json::Value,
}

pub struct Engine {
    pub cfg: Config,
    profiles: HashMap<String, Rc<Profile>>,
    memo: HashMap<(String, String), (usize, RatioBounds)>,
    cores: HashMap<String, Option<CoreInfo>>,
    time_spent: bool,
}

fn trivial_lower() -> Certificate {
    Certificate::leaf(Rule::Trivial, Value::int(0), serde_json::Value::Null)
}

fn trivial_upper() -> Certificate {
    Certificate::leaf(Rule::Trivial, Value::Infinite, serde_json::Value::Null)
}

fn better_lower(a: &Certificate, b: &Certificate) -> bool {
    let (x, y) = (a.value.lo(), b.value.lo());
    let slack = 1e-12 * (1.0 + x.abs().min(1e300));
    if x > y + slack {
        return true;
    }
    if (x - y).abs() <= slack || x == y {
        return a.value.is_exact() && !b.value.is_exact();
    }
    false
}

fn better_upper(a: &Certificate, b: &Certificate) -> bool {
    let (x, y) = (a.value.hi(), b.value.hi());
    let slack = 1e-12 * (1.0 + x.abs().min(1e300));
    if x < y - slack {
        return true;
    }
    if (x - y).abs() <= slack || x == y {
        return a.value.is_exact() && !b.value.is_exact();
    }
    false
}

pub fn best_lower(cs: Vec<Certificate>) -> Option<Certificate> {
    cs.into_iter().reduce(|a, b| if better_lower(&b, &a) { b } else { a })
}

pub fn best_upper(cs: Vec<Certificate>) -> Option<Certificate> {
    cs.into_iter().reduce(|a, b| if better_upper(&b, &a) { b } else { a })
}

fn positive(v: &Value) -> bool {
    v.lo() > 0.0
}

fn uses_snap(c: &Certificate) -> bool {
    (c.rule == Rule::ThetaSdp && c.value.is_exact()) || c.premises.iter().any(uses_snap)
}

fn uses_rule(c: &Certificate, r: Rule) -> bool {
    c.rule == r || c.premises.iter().any(|p| uses_rule(p, r))
}

/// Merged strong-product factors of an operand, keyed isomorphism-invariantly.
type Factors = Vec<(Operand, usize)>;

impl Engine {
    pub fn new(cfg: Config) -> Self {
        Engine {
            cfg,
            profiles: HashMap::new(),
            memo: HashMap::new(),
            cores: HashMap::new(),
            time_spent: false,
        }
    }

    pub fn operand(&self, text: &str) -> Result<Operand> {
        Operand::parse(text, &self.cfg)
    }

    fn out_of_time(&mut self) -> bool {
        let t = self.cfg.out_of_time();
        self.time_spent |= t;
        t
    }

    /// Invariant profile, via product structure when the expression has it.
    pub fn profile(&mut self, op: &Operand) -> Result<Rc<Profile>> {
        if let Some(p) = self.profiles.get(&op.key) {
            return Ok(p.clone());
        }
        let fs = self.factor_operands(op)?;
        let p = if fs.len() > 1 || fs[0].1 > 1 {
            let mut parts = Vec::new();
            for (f, e) in &fs {
                parts.push((self.profile(f)?, *e));
            }
            let refs: Vec<(&Profile, usize)> = parts.iter().map(|(p, e)| (p.as_ref(), *e)).collect();
            let mut p = Profile::strong_product(&refs);
            if let Some(g) = &op.graph {
                if g.n() <= self.cfg.power_vertices {
                    if let Some((a, s)) = crate::invariants::independence_number_budgeted(g, self.cfg.budget_nodes) {
                        p.improve_capacity(
                            crate::real::PowerProduct::from_int(a as u64),
                            Certificate::alpha_power(g, 1, &s),
                        );
                    }
                }
                if p.chi.is_none() && g.n() <= self.cfg.chi_max_vertices {
                    if let Ok(fv) = crate::fractional::chi_bar_f(g) {
                        p.chi = Some((fv.value.clone(), Certificate::fractional_cover(g, &fv)));
                    }
                }
            }
            p
        } else if let Some(g) = &op.graph {
            Profile::compute(g, &self.cfg)
        } else {
            Profile {
                vertices: op.vertices,
                complete: false,
                chi: None,
                theta: None,
                cap_lo: None,
                cap_exact: false,
                gamma: None,
            }
        };
        let p = Rc::new(p);
        self.profiles.insert(op.key.clone(), p.clone());
        Ok(p)
    }

    fn factor_operands(&mut self, op: &Operand) -> Result<Factors> {
        let raw = factors(&op.expr);
        if raw.len() == 1 && raw[0].1 == 1 {
            // Unions of isomorphic (not just equal) parts.
            if let Expr::Union(..) = &op.expr {
                let mut parts = Vec::new();
                union_parts(&op.expr, &mut parts);
                let ops = parts
                    .iter()
                    .map(|p| Operand::new(p.clone(), &self.cfg))
                    .collect::<Result<Vec<_>>>()?;
                if ops.iter().all(|o| o.key == ops[0].key) && !ops[0].key.starts_with("e:") {
                    let kbar = Operand::new(
                        Expr::Named {
                            name: "Kbar".into(),
                            params: vec![ops.len()],
                        },
                        &self.cfg,
                    )?;
                    let mut out = self.factor_operands(&ops[0])?;
                    merge(&mut out, kbar, 1);
                    return Ok(out);
                }
            }
            return Ok(vec![(op.clone(), 1)]);
        }
        let mut out: Factors = Vec::new();
        for (e, k) in raw {
            let o = Operand::new(e, &self.cfg)?;
            for (f, j) in self.factor_operands(&o)? {
                merge(&mut out, f, j * k);
            }
        }
        Ok(out)
    }

    /// Bounds on `Ir(channel/source)`.
    pub fn ir_bounds(&mut self, source: &Operand, channel: &Operand) -> Result<RatioBounds> {
        self.bounds(source, channel, 0)
    }

    /// Parses both expressions and bounds `Ir(channel/source)`.
    pub fn ir_bounds_str(&mut self, source: &str, channel: &str) -> Result<RatioBounds> {
        let g = self.operand(source)?;
        let h = self.operand(channel)?;
        self.ir_bounds(&g, &h)
    }

    fn bounds(&mut self, g: &Operand, h: &Operand, depth: usize) -> Result<RatioBounds> {
        let key = (g.key.clone(), h.key.clone());
        if let Some((d, b)) = self.memo.get(&key) {
            if *d <= depth {
                let mut b = b.clone();
                b.source = g.label();
                b.channel = h.label();
                return Ok(b);
            }
        }
        let mut b = self.bounds_uncached(g, h, depth)?;
        b.source = g.label();
        b.channel = h.label();
        self.memo.insert(key, (depth, b.clone()));
        Ok(b)
    }

    fn degenerate(&self, g: &Operand, h: &Operand, pg: &Profile, ph: &Profile) -> Option<RatioBounds> {
        let (graph, reason, value, flag) = if pg.complete {
            (g, "source_complete", Value::Infinite, Flag::SourceComplete)
        } else if ph.complete {
            (h, "channel_complete", Value::int(0), Flag::ChannelComplete)
        } else {
            return None;
        };
        let data = match &graph.graph {
            Some(x) => json!({"graph6": x.to_graph6(), "reason": reason}),
            None => json!({"reason": reason}),
        };
        let c = Certificate::leaf(Rule::Degenerate, value, data);
        Some(RatioBounds {
            source: g.label(),
            channel: h.label(),
            lower: c.clone(),
            upper: c,
            flags: vec![flag, Flag::Exact],
        })
    }

    fn bounds_uncached(&mut self, g: &Operand, h: &Operand, depth: usize) -> Result<RatioBounds> {
        let pg = self.profile(g)?;
        let ph = self.profile(h)?;
        if let Some(b) = self.degenerate(g, h, &pg, &ph) {
            return Ok(b);
        }
        if let (Some(gg), Some(hg)) = (&g.graph, &h.graph) {
            if let (Some(s), Some(t)) = (clique_union_count(gg), clique_union_count(hg)) {
                let v = log2_int(t).div(&log2_int(s)).expect("s >= 2 for a non-complete source");
                let c = Certificate::leaf(
                    Rule::CliqueUnion,
                    Value::Exact(v),
                    json!({"source": gg.to_graph6(), "channel": hg.to_graph6(), "s": s, "t": t}),
                );
                return Ok(RatioBounds {
                    source: g.label(),
                    channel: h.label(),
                    lower: c.clone(),
                    upper: c,
                    flags: vec![Flag::Exact],
                });
            }
        }

        let mut lowers = vec![trivial_lower()];
        let mut uppers = vec![trivial_upper()];
        uppers.extend(self.upper_family(&pg, &ph).all());
        if let Some(c) = separation(&pg, &ph) {
            lowers.push(c);
        }
        if g.key == h.key {
            lowers.push(match (&g.graph, &h.graph) {
                (Some(a), Some(b)) => Certificate::leaf(
                    Rule::IdentityCode,
                    Value::int(1),
                    json!({"source": a.to_graph6(), "channel": b.to_graph6()}),
                ),
                _ => power_alignment(1, 1),
            });
        }

        let fg = self.factor_operands(g)?;
        let fh = self.factor_operands(h)?;
        if fg.len() == 1 && fh.len() == 1 && fg[0].0.key == fh[0].0.key {
            lowers.push(power_alignment(fg[0].1, fh[0].1));
        }

        if depth < self.cfg.depth {
            self.structural(g, h, &pg, &fg, &fh, depth, &mut lowers, &mut uppers)?;
        }

        let current = best_lower(lowers.clone()).expect("nonempty");
        let cap = best_upper(uppers.clone()).expect("nonempty");
        if !exact_pair(&current, &cap) && !self.out_of_time() {
            lowers.extend(self.code_lower(g, h, current.value.lo(), cap.value.hi()));
            if current.value.lo() < 1.0 && cap.value.hi() >= 1.0 {
                lowers.extend(self.complement_hom(g, h));
            }
        }

        if depth == 0 && !self.out_of_time() {
            let lo = best_lower(lowers.clone()).expect("nonempty");
            let up = best_upper(uppers.clone()).expect("nonempty");
            if !exact_pair(&lo, &up) {
                let (l, u) = self.core_candidates(g, h)?;
                lowers.extend(l);
                uppers.extend(u);
                lowers.extend(self.concat_candidates(g, h)?);
            }
        }

        let lower = best_lower(lowers).expect("nonempty");
        let upper = best_upper(uppers).expect("nonempty");
        let mut flags = Vec::new();
        if exact_pair(&lower, &upper) {
            flags.push(Flag::Exact);
        }
        if uses_rule(&lower, Rule::CoreReduction) || uses_rule(&upper, Rule::CoreReduction) {
            flags.push(Flag::CoreReduced);
        }
        if uses_snap(&lower) || uses_snap(&upper) {
            flags.push(Flag::ThetaSnapped);
        }
        if self.time_spent {
            flags.push(Flag::TimeBudget);
        }
        if lower.value.lo() > upper.value.hi() + self.cfg.tol {
            flags.push(Flag::Inconsistent);
        }
        Ok(RatioBounds {
            source: g.label(),
            channel: h.label(),
            lower,
            upper,
            flags,
        })
    }

    /// Product, union and identity rules read off the expressions.
    #[allow(clippy::too_many_arguments)]
    fn structural(
        &mut self,
        g: &Operand,
        h: &Operand,
        pg: &Profile,
        fg: &Factors,
        fh: &Factors,
        depth: usize,
        lowers: &mut Vec<Certificate>,
        uppers: &mut Vec<Certificate>,
    ) -> Result<()> {
        let units = |f: &Factors| f.iter().map(|x| x.1).sum::<usize>();
        // Channel G ⊠ R: Ir = 1 + Ir(R/G).
        if let Some(rest) = sub_factors(fh, fg) {
            let r = self.product_operand(&rest)?;
            let b = self.bounds(g, &r, depth + 1)?;
            lowers.push(Certificate::combine(Rule::IdentityPlusOne, vec![b.lower], json!({"rest": r.label()})));
            uppers.push(Certificate::combine(Rule::IdentityPlusOne, vec![b.upper], json!({"rest": r.label()})));
            return Ok(());
        }
        // Source H ⊠ R: Ir = x/(1+x) with x = Ir(H/R).
        if let Some(rest) = sub_factors(fg, fh) {
            let r = self.product_operand(&rest)?;
            let b = self.bounds(&r, h, depth + 1)?;
            lowers.push(Certificate::combine(Rule::IdentityFraction, vec![b.lower], json!({"rest": r.label()})));
            uppers.push(Certificate::combine(Rule::IdentityFraction, vec![b.upper], json!({"rest": r.label()})));
            return Ok(());
        }
        if units(fh) >= 2 {
            let (a, b) = self.split(fh)?;
            let (l, u) = self.product_rule(&a, &b, g, depth + 1)?;
            lowers.push(l);
            uppers.extend(u);
        }
        if units(fg) >= 2 {
            let (a, b) = self.split(fg)?;
            let (l, u) = self.reverse_product_rule(h, &a, &b, depth + 1)?;
            lowers.push(l);
            uppers.extend(u);
        }
        if let Expr::Union(..) = &h.expr {
            if fh.len() == 1 && fh[0].1 == 1 {
                let mut parts = Vec::new();
                union_parts(&h.expr, &mut parts);
                let a = Operand::new(parts[0].clone(), &self.cfg)?;
                let rest = parts[1..]
                    .iter()
                    .cloned()
                    .reduce(|x, y| Expr::Union(Box::new(x), Box::new(y)))
                    .expect("union has two parts");
                let b = Operand::new(rest, &self.cfg)?;
                if let Some(c) = self.power_union_rule(&a, &b, g, pg, depth + 1)? {
                    lowers.push(c);
                }
            }
        }
        Ok(())
    }

    fn product_operand(&self, fs: &[(Operand, usize)]) -> Result<Operand> {
        let es: Vec<(Expr, usize)> = fs.iter().map(|(o, k)| (o.expr.clone(), *k)).collect();
        Operand::new(product_expr(&es), &self.cfg)
    }

    /// One factor unit and the rest.
    fn split(&self, fs: &Factors) -> Result<(Operand, Operand)> {
        let a = fs[0].0.clone();
        let mut rest = fs.clone();
        if rest[0].1 == 1 {
            rest.remove(0);
        } else {
            rest[0].1 -= 1;
        }
        Ok((a, self.product_operand(&rest)?))
    }

    /// `Ir(A⊠B/F) ≥ Ir(A/F) + Ir(B/F)`, with equality under a certified
    /// weak equivalence among the three.
    fn product_rule(&mut self, a: &Operand, b: &Operand, f: &Operand, depth: usize) -> Result<(Certificate, Option<Certificate>)> {
        let x = self.bounds(f, a, depth)?;
        let y = self.bounds(f, b, depth)?;
        let lower = Certificate::combine(Rule::ProductRule, vec![x.lower.clone(), y.lower.clone()], serde_json::Value::Null);
        let tight = self.weak_pair(a, b, f, depth)?;
        let upper = tight.map(|pair| {
            Certificate::combine(
                Rule::WeakTight,
                vec![x.upper, y.upper],
                json!({"form": "sum", "weakly_equivalent": pair}),
            )
        });
        Ok((lower, upper))
    }

    /// `Ir(F/A⊠B) ≥ xy/(x+y)` with `x = Ir(F/A)`, `y = Ir(F/B)`.
    fn reverse_product_rule(
        &mut self,
        f: &Operand,
        a: &Operand,
        b: &Operand,
        depth: usize,
    ) -> Result<(Certificate, Option<Certificate>)> {
        let x = self.bounds(a, f, depth)?;
        let y = self.bounds(b, f, depth)?;
        let lower = Certificate::combine(Rule::ReverseProduct, vec![x.lower.clone(), y.lower.clone()], serde_json::Value::Null);
        let tight = self.weak_pair(a, b, f, depth)?;
        let upper = tight.map(|pair| {
            Certificate::combine(
                Rule::WeakTight,
                vec![x.upper, y.upper],
                json!({"form": "harmonic", "weakly_equivalent": pair}),
            )
        });
        Ok((lower, upper))
    }

    fn power_union_rule(&mut self, a: &Operand, b: &Operand, f: &Operand, pf: &Profile, depth: usize) -> Result<Option<Certificate>> {
        let Some(chi) = pf.log_chi().cloned() else { return Ok(None) };
        if !positive(&chi.value) {
            return Ok(None);
        }
        let x = self.bounds(f, a, depth)?;
        let y = self.bounds(f, b, depth)?;
        Ok(Some(Certificate::combine(
            Rule::PowerUnion,
            vec![x.lower, y.lower, chi],
            serde_json::Value::Null,
        )))
    }

    /// A pair among `(a, b)`, `(f, a)`, `(f, b)` certified weakly
    /// equivalent, if any.
    fn weak_pair(&mut self, a: &Operand, b: &Operand, f: &Operand, depth: usize) -> Result<Option<[String; 2]>> {
        if depth >= self.cfg.depth {
            return Ok(None);
        }
        for (x, y) in [(a, b), (f, a), (f, b)] {
            if self.weakly_equivalent(x, y, depth + 1)? {
                return Ok(Some([x.label(), y.label()]));
            }
        }
        Ok(None)
    }

    fn weakly_equivalent(&mut self, x: &Operand, y: &Operand, depth: usize) -> Result<bool> {
        if x.key == y.key {
            return Ok(true);
        }
        let p = self.bounds(x, y, depth)?;
        let q = self.bounds(y, x, depth)?;
        Ok(product_at_least_one(&p.lower.value, &q.lower.value))
    }

    /// Hom-monotone upper bounds from the two profiles.
    pub fn upper_family_of(&mut self, source: &Operand, channel: &Operand) -> Result<UpperFamily> {
        let pg = self.profile(source)?;
        let ph = self.profile(channel)?;
        Ok(self.upper_family(&pg, &ph))
    }

    fn upper_family(&self, pg: &Profile, ph: &Profile) -> UpperFamily {
        let ratio = |rule: Rule, num: Option<&Certificate>, den: Option<&Certificate>| {
            let (n, d) = (num?, den?);
            positive(&d.value).then(|| Certificate::combine(rule, vec![n.clone(), d.clone()], serde_json::Value::Null))
        };
        let capacity = if pg.cap_exact && ph.cap_exact {
            ratio(Rule::CapacityRatio, ph.log_cap_lo(), pg.log_cap_lo())
        } else {
            None
        };
        UpperFamily {
            theta: ratio(Rule::ThetaRatio, ph.log_theta(), pg.log_theta()),
            fractional: ratio(Rule::FractionalRatio, ph.log_chi(), pg.log_chi()),
            capacity,
            minrank: ratio(Rule::MinrankRatio, ph.gamma.as_ref(), pg.log_cap_lo()),
        }
    }

    /// `log Θ_lo(H) / log χ̄_f(G)`.
    pub fn separation_lower(&mut self, source: &Operand, channel: &Operand) -> Result<Option<Certificate>> {
        let pg = self.profile(source)?;
        let ph = self.profile(channel)?;
        Ok(separation(&pg, &ph))
    }

    /// `Ir(F/G) · Ir(H/F)` on lower ends.
    pub fn concat_lower(&mut self, source: &Operand, pivot: &Operand, channel: &Operand) -> Result<Certificate> {
        let a = self.bounds(source, pivot, 1)?;
        let b = self.bounds(pivot, channel, 1)?;
        Ok(Certificate::combine(
            Rule::Concatenation,
            vec![a.lower, b.lower],
            json!({"pivot": pivot.label()}),
        ))
    }

    /// `Ir(G⊠H/F) ≥ Ir(G/F) + Ir(H/F)`.
    pub fn product_lower(&mut self, g: &Operand, h: &Operand, f: &Operand) -> Result<Certificate> {
        Ok(self.product_rule(g, h, f, 1)?.0)
    }

    /// `Ir(F/G⊠H) ≥ xy/(x+y)`.
    pub fn reverse_product_lower(&mut self, f: &Operand, g: &Operand, h: &Operand) -> Result<Certificate> {
        Ok(self.reverse_product_rule(f, g, h, 1)?.0)
    }

    /// Solves `χ̄_f(F)^z = χ̄_f(F)^{Ir(G/F)} + χ̄_f(F)^{Ir(H/F)}` for a lower
    /// bound on `Ir(G+H/F)`. `None` when `χ̄_f(F)` is unknown or one.
    pub fn power_union_lower(&mut self, g: &Operand, h: &Operand, f: &Operand) -> Result<Option<Certificate>> {
        let pf = self.profile(f)?;
        self.power_union_rule(g, h, f, &pf, 1)
    }

    /// Exact rewrites for `Ir(G⊠H/F)` and `Ir(F/G⊠H)` when one of the pairs
    /// is certified weakly equivalent; `None` otherwise.
    pub fn weak_equiv_tight_rules(&mut self, g: &Operand, h: &Operand, f: &Operand) -> Result<Option<(RatioBounds, RatioBounds)>> {
        let Some(pair) = self.weak_pair(g, h, f, 0)? else { return Ok(None) };
        let data = json!({"weakly_equivalent": pair});
        let (x, y) = (self.bounds(f, g, 1)?, self.bounds(f, h, 1)?);
        let (u, v) = (self.bounds(g, f, 1)?, self.bounds(h, f, 1)?);
        let gh = format!("({}) * ({})", g.label(), h.label());
        let mut dsum = data.clone();
        dsum["form"] = json!("sum");
        let mut dh = data;
        dh["form"] = json!("harmonic");
        let sum = RatioBounds {
            source: f.label(),
            channel: gh.clone(),
            lower: Certificate::combine(Rule::WeakTight, vec![x.lower, y.lower], dsum.clone()),
            upper: Certificate::combine(Rule::WeakTight, vec![x.upper, y.upper], dsum),
            flags: vec![],
        };
        let inv = RatioBounds {
            source: gh,
            channel: f.label(),
            lower: Certificate::combine(Rule::WeakTight, vec![u.lower, v.lower], dh.clone()),
            upper: Certificate::combine(Rule::WeakTight, vec![u.upper, v.upper], dh),
            flags: vec![],
        };
        Ok(Some((with_exact_flag(sum), with_exact_flag(inv))))
    }

    /// Best `k/n` over small code searches that could beat `lo`.
    fn code_lower(&mut self, g: &Operand, h: &Operand, lo: f64, hi: f64) -> Vec<Certificate> {
        let (Some(gg), Some(hg)) = (&g.graph, &h.graph) else { return vec![] };
        let mut out = Vec::new();
        let mut best = lo;
        for (k, n) in [(1usize, 1usize), (2, 1), (1, 2), (2, 2), (3, 2), (2, 3)] {
            let r = k as f64 / n as f64;
            if r <= best || r > hi + 1e-9 {
                continue;
            }
            let gk = (gg.n() as u128).saturating_pow(k as u32);
            let hn = (hg.n() as u128).saturating_pow(n as u32);
            if gk > self.cfg.code_max_vertices as u128 || hn > CODE_CHANNEL_MAX_VERTICES as u128 {
                continue;
            }
            if self.out_of_time() {
                break;
            }
            if let Ok(CodeResult::Found(c)) =
                find_code_limited(gg, hg, k, n, self.cfg.budget_nodes, CODE_CHANNEL_MAX_VERTICES)
            {
                best = r;
                out.push(Certificate::leaf(
                    Rule::Code,
                    Value::rational(Rational::new(BigInt::from(k), BigInt::from(n))),
                    json!({"code": c}),
                ));
            }
        }
        out
    }

    /// `Ḡ → H̄` gives `Ir(H/G) ≥ 1`.
    fn complement_hom(&mut self, g: &Operand, h: &Operand) -> Vec<Certificate> {
        let (Some(gg), Some(hg)) = (&g.graph, &h.graph) else { return vec![] };
        if gg.n() > 200 || hg.n() > 200 {
            return vec![];
        }
        match hom::hom_exists(&gg.complement(), &hg.complement(), self.cfg.budget_nodes) {
            HomResult::Found(m) => vec![Certificate::leaf(
                Rule::ComplementHom,
                Value::int(1),
                json!({"source": gg.to_graph6(), "channel": hg.to_graph6(), "hom": m}),
            )],
            _ => vec![],
        }
    }

    fn core_info(&mut self, op: &Operand) -> Option<CoreInfo> {
        if let Some(c) = self.cores.get(&op.key) {
            return c.clone();
        }
        let info = op.graph.as_ref().and_then(|g| {
            if g.n() > self.cfg.core_max_vertices {
                return None;
            }
            let comp = g.complement();
            let c = hom::core_of(&comp, self.cfg.budget_nodes)?;
            if c.core.n() == g.n() {
                return None;
            }
            let reduced = c.core.complement();
            Some(CoreInfo {
                data: json!({
                    "graph": g.to_graph6(),
                    "core": reduced.to_graph6(),
                    "retraction": c.hom,
                    "inclusion": hom::HomMap { map: c.vertices.clone() },
                }),
                reduced,
            })
        });
        self.cores.insert(op.key.clone(), info.clone());
        info
    }

    /// Complement-core reduction of both operands; the flag says whether
    /// anything changed.
    pub fn core_reduce(&mut self, source: &Operand, channel: &Operand) -> (Operand, Operand, bool) {
        let a = self.core_info(source);
        let b = self.core_info(channel);
        let changed = a.is_some() || b.is_some();
        let mk = |op: &Operand, info: &Option<CoreInfo>| match info {
            Some(i) => Operand::from_graph(&i.reduced, &format!("core({})", op.label())),
            None => op.clone(),
        };
        (mk(source, &a), mk(channel, &b), changed)
    }

    fn core_candidates(&mut self, g: &Operand, h: &Operand) -> Result<(Vec<Certificate>, Vec<Certificate>)> {
        let a = self.core_info(g);
        let b = self.core_info(h);
        if a.is_none() && b.is_none() {
            return Ok((vec![], vec![]));
        }
        let (g2, h2, _) = self.core_reduce(g, h);
        let r = self.bounds(&g2, &h2, 1)?;
        let data = json!({
            "source": a.map(|i| i.data),
            "channel": b.map(|i| i.data),
        });
        Ok((
            vec![Certificate::combine(Rule::CoreReduction, vec![r.lower], data.clone())],
            vec![Certificate::combine(Rule::CoreReduction, vec![r.upper], data)],
        ))
    }

    fn concat_candidates(&mut self, g: &Operand, h: &Operand) -> Result<Vec<Certificate>> {
        let mut pivots = Vec::new();
        for p in self.cfg.pivots.clone() {
            if let Ok(op) = self.operand(&p) {
                pivots.push(op);
            }
        }
        let (gc, hc, changed) = self.core_reduce(g, h);
        if changed {
            pivots.push(gc);
            pivots.push(hc);
        }
        let mut out = Vec::new();
        for p in pivots {
            if p.key == g.key || p.key == h.key || self.out_of_time() {
                continue;
            }
            let pp = self.profile(&p)?;
            if pp.complete {
                continue;
            }
            out.push(self.concat_lower(g, &p, h)?);
        }
        Ok(out)
    }
}

fn merge(out: &mut Factors, f: Operand, k: usize) {
    match out.iter_mut().find(|(o, _)| o.key == f.key) {
        Some(e) => e.1 += k,
        None => out.push((f, k)),
    }
}

/// `big − small` as multisets, when `small ⊊ big`.
fn sub_factors(big: &Factors, small: &Factors) -> Option<Factors> {
    let mut rest = big.clone();
    for (o, k) in small {
        let e = rest.iter_mut().find(|(x, _)| x.key == o.key)?;
        if e.1 < *k {
            return None;
        }
        e.1 -= k;
    }
    rest.retain(|(_, k)| *k > 0);
    (!rest.is_empty()).then_some(rest)
}

fn log2_int(n: usize) -> Exact {
    Exact::log2_rational(&Rational::from_integer(BigInt::from(n)))
}

fn power_alignment(a: usize, b: usize) -> Certificate {
    Certificate::leaf(
        Rule::PowerAlignment,
        Value::rational(Rational::new(BigInt::from(b), BigInt::from(a))),
        json!({"a": a, "b": b}),
    )
}

fn separation(pg: &Profile, ph: &Profile) -> Option<Certificate> {
    let chi = pg.log_chi()?;
    let cap = ph.log_cap_lo()?;
    positive(&chi.value)
        .then(|| Certificate::combine(Rule::Separation, vec![cap.clone(), chi.clone()], serde_json::Value::Null))
}

fn exact_pair(lower: &Certificate, upper: &Certificate) -> bool {
    match (&lower.value, &upper.value) {
        (Value::Exact(a), Value::Exact(b)) => a == b,
        (Value::Infinite, Value::Infinite) => true,
        _ => false,
    }
}

fn with_exact_flag(mut b: RatioBounds) -> RatioBounds {
    if exact_pair(&b.lower, &b.upper) {
        b.flags.push(Flag::Exact);
    }
    b
}

/// `x · y ≥ 1`, decided exactly or by enclosure.
pub fn product_at_least_one(x: &Value, y: &Value) -> bool {
    at_least_one(&x.mul(y))
}

/// `v ≥ 1`, decided exactly or by enclosure.
pub fn at_least_one(v: &Value) -> bool {
    matches!(v.partial_cmp_value(&Value::int(1)), Some(Ordering::Greater | Ordering::Equal)) || v.lo() >= 1.0
}

/// `v < 1`, decided exactly or by enclosure.
pub fn below_one(v: &Value) -> bool {
    matches!(v.partial_cmp_value(&Value::int(1)), Some(Ordering::Less)) || v.hi() < 1.0
}

/// Lesser of two values; an enclosure when the order is undecided.
pub fn value_min(a: &Value, b: &Value) -> Value {
    match a.partial_cmp_value(b) {
        Some(Ordering::Less | Ordering::Equal) => a.clone(),
        Some(Ordering::Greater) => b.clone(),
        None => {
            let (x, y) = (a.enclosure(), b.enclosure());
            Value::Approx(Interval::new(x.lo.min(y.lo), x.hi.min(y.hi)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine() -> Engine {
        Engine::new(Config::default())
    }

    fn exact(b: &RatioBounds) -> f64 {
        assert!(b.is_exact(), "{} -> {}: [{}, {}]", b.source, b.channel, b.lo(), b.hi());
        assert!(b.verify());
        b.lower.value.approx()
    }

    #[test]
    fn pentagon_identity_and_powers() {
        let mut e = engine();
        let b = e.ir_bounds_str("C(5)", "C(5)").unwrap();
        assert_eq!(exact(&b), 1.0);
        for m in 2..=3 {
            let b = e.ir_bounds_str("C(5)", &format!("C(5)^{m}")).unwrap();
            assert!((exact(&b) - m as f64).abs() < 1e-12);
            let b = e.ir_bounds_str(&format!("C(5)^{m}"), "C(5)").unwrap();
            assert!((exact(&b) - 1.0 / m as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn clique_unions() {
        let mut e = engine();
        let b = e.ir_bounds_str("K(3) + K(2) + K(4)", "K(5) + K(5)").unwrap();
        assert!((exact(&b) - 1.0 / 3f64.log2()).abs() < 1e-12);
        for (s, t) in [(2usize, 4usize), (3, 2), (5, 5)] {
            let b = e.ir_bounds_str(&format!("Kbar({s})"), &format!("Kbar({t})")).unwrap();
            assert!((exact(&b) - (t as f64).ln() / (s as f64).ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_cases() {
        let mut e = engine();
        let b = e.ir_bounds_str("K(3)", "C(5)").unwrap();
        assert!(b.has(Flag::SourceComplete) && b.lower.value.is_infinite());
        let b = e.ir_bounds_str("C(5)", "K(4)").unwrap();
        assert!(b.has(Flag::ChannelComplete) && b.hi() == 0.0);
    }

    #[test]
    fn pure_source_and_channel() {
        let mut e = engine();
        let b = e.ir_bounds_str("Kbar(2)", "C(5)").unwrap();
        assert!((exact(&b) - 5f64.sqrt().log2()).abs() < 1e-12);
        let b = e.ir_bounds_str("C(5)", "Kbar(2)").unwrap();
        assert!((exact(&b) - 1.0 / 2.5f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn union_of_copies() {
        let mut e = engine();
        let l = 2.5f64.log2();
        let b = e.ir_bounds_str("C(5)", "C(5) + C(5)").unwrap();
        assert!((exact(&b) - (1.0 + 1.0 / l)).abs() < 1e-12);
        let t = 5f64.sqrt().log2();
        let b = e.ir_bounds_str("C(5) + C(5)", "C(5)").unwrap();
        assert!((exact(&b) - t / (1.0 + t)).abs() < 1e-12);
    }

    #[test]
    fn separation_value() {
        let mut e = engine();
        let g = e.operand("C(5)").unwrap();
        let c = e.separation_lower(&g, &g).unwrap().unwrap();
        assert!((c.value.approx() - 5f64.sqrt().log2() / 2.5f64.log2()).abs() < 1e-12);
        assert!(c.verify());
    }

    #[test]
    fn incomparable_pentagon_square() {
        let mut e = engine();
        let a = e.ir_bounds_str("C(5)^2", "Kbar(6)").unwrap();
        let b = e.ir_bounds_str("Kbar(6)", "C(5)^2").unwrap();
        assert!(a.hi() < 1.0 && b.hi() < 1.0);
        assert!((a.hi() - 6f64.ln() / 6.25f64.ln()).abs() < 1e-6);
        assert!((b.hi() - 5f64.ln() / 6f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn schlafli_complement_half() {
        let mut e = engine();
        let b = e.ir_bounds_str("~schlafli", "schlafli").unwrap();
        assert!((exact(&b) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn weak_tight_sum() {
        let mut e = engine();
        let g = e.operand("C(5)").unwrap();
        let h = e.operand("C(5)^2").unwrap();
        let (sum, inv) = e.weak_equiv_tight_rules(&g, &h, &g).unwrap().unwrap();
        assert!((exact(&sum) - 3.0).abs() < 1e-12);
        assert!((exact(&inv) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn bipartite_complement_core() {
        let mut e = engine();
        let g = e.operand("~C(6)").unwrap();
        let (r, _, changed) = e.core_reduce(&g, &g);
        assert!(changed);
        assert_eq!(r.graph.unwrap().n(), 2);
        let b = e.ir_bounds_str("~C(6)", "C(5)").unwrap();
        assert!((exact(&b) - 5f64.sqrt().log2()).abs() < 1e-12);
    }
}
