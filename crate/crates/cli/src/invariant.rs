//! The `invariant` command.

use crate::report::Out;
use anyhow::{bail, Result};
use irkit::cache::Cache;
use irkit::capacity::Profile;
use irkit::config::Config;
use irkit::expr::Expr;
use irkit::fractional::{self, FractionalValue};
use irkit::invariants::{self, MinrankValue};
use irkit::real::fmt_rational;
use irkit::theta::{self, ThetaValue};
use irkit::{Error, Graph};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};

const DEFAULT_NAMES: [&str; 5] = ["alpha", "omega", "chibarf", "theta", "graph6"];
const ALL_NAMES: [&str; 10] = [
    "alpha", "omega", "chi", "cover", "chif", "chibarf", "theta", "capacity", "minrank", "graph6",
];

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Witnessed {
    value: usize,
    witness: Vec<usize>,
}

fn cached<T, A, F>(cache: Option<&Cache>, g: &Graph, name: &str, params: &str, accept: A, compute: F) -> Result<T>
where
    T: Serialize + for<'de> Deserialize<'de>,
    A: Fn(&T) -> bool,
    F: FnOnce() -> irkit::Result<T>,
{
    Ok(match cache {
        Some(c) => c.get_or_insert(&g.to_graph6(), name, params, accept, compute)?,
        None => compute()?,
    })
}

fn fractional_report(f: &FractionalValue) -> (Json, String) {
    let q = fmt_rational(&f.value);
    let approx = f.value.numer().to_string().parse::<f64>().unwrap_or(f64::NAN)
        / f.value.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    (json!({"value": q, "approx": approx, "certificate": f}), format!("{q} ({approx})"))
}

pub fn run(out: &Out, cfg: &Config, cache: Option<&Cache>, expr: &str, names: &[String]) -> Result<bool> {
    let e = Expr::parse(expr)?;
    let g = e.eval_limited(cfg.operand_max_vertices)?;
    let names: Vec<String> = if names.is_empty() {
        DEFAULT_NAMES.iter().map(|s| s.to_string()).collect()
    } else if names.iter().any(|n| n == "all") {
        ALL_NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        names.to_vec()
    };
    let mut report = serde_json::Map::new();
    let mut text = format!("{expr}: {} vertices, {} edges", g.n(), g.edge_count());
    let mut line = |name: &str, value: Json, shown: String| {
        text.push_str(&format!("\n{name}: {shown}"));
        report.insert(name.to_string(), value);
    };
    for name in &names {
        match name.as_str() {
            "alpha" | "omega" => {
                let target = if name == "alpha" { g.clone() } else { g.complement() };
                let w: Witnessed = cached(
                    cache,
                    &g,
                    name,
                    "",
                    |w: &Witnessed| w.value == w.witness.len() && target.is_independent(&w.witness),
                    || {
                        let (value, witness) = invariants::independence_number(&target);
                        Ok(Witnessed { value, witness })
                    },
                )?;
                line(name, json!(w), format!("{} (set {:?})", w.value, w.witness));
            }
            "chi" | "cover" => {
                let target = if name == "chi" { g.clone() } else { g.complement() };
                let (value, colouring) = if name == "chi" {
                    invariants::chromatic_number(&target)
                } else {
                    invariants::clique_cover_number(&g)
                };
                if !invariants::is_proper_colouring(&target, &colouring) {
                    bail!("internal error: colouring failed verification");
                }
                line(name, json!({"value": value, "classes": colouring}), format!("{value} (classes {colouring:?})"));
            }
            "chif" | "chibarf" => {
                let target = if name == "chif" { g.clone() } else { g.complement() };
                let f: FractionalValue = cached(
                    cache,
                    &g,
                    name,
                    "",
                    |f: &FractionalValue| f.verify(&target),
                    || fractional::fractional_chromatic(&target),
                )?;
                let (v, s) = fractional_report(&f);
                line(name, v, s);
            }
            "theta" => {
                let tol = cfg.tol;
                let t: ThetaValue = cached(
                    cache,
                    &g,
                    name,
                    &format!("tol={tol}"),
                    |t: &ThetaValue| t.verify(&g, tol),
                    || theta::lovasz_theta_limited(&g, tol, cfg.theta_max_vertices),
                )?;
                line(
                    name,
                    json!({"value": t.value, "lo": t.lo, "hi": t.hi, "tol": tol}),
                    format!("{:.6}±{tol:e} (lo {}, hi {})", t.value, t.lo, t.hi),
                );
            }
            "capacity" => {
                let p = Profile::compute(&g, cfg);
                let Some(iv) = p.capacity_interval() else {
                    return Err(Error::BudgetExhausted("capacity bounds".into()).into());
                };
                let lo = p.cap_lo.as_ref().map(|(pp, _)| pp.to_string()).unwrap_or_default();
                line(
                    name,
                    json!({"lo": iv.lo, "hi": iv.hi, "lo_exact": lo, "exact": p.cap_exact, "certificate": p.log_cap_lo()}),
                    format!("[{}, {}] (lower {lo}{})", iv.lo, iv.hi, if p.cap_exact { ", exact" } else { "" }),
                );
            }
            "minrank" => {
                let m: MinrankValue = cached(
                    cache,
                    &g,
                    name,
                    "gf2",
                    |m: &MinrankValue| invariants::fits(&g, &m.matrix) && invariants::gf2_rank(&m.matrix) == m.value,
                    || invariants::minrank_gf2(&g),
                )?;
                line(name, json!(m), m.value.to_string());
            }
            "graph6" => line(name, json!(g.to_graph6()), g.to_graph6()),
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown invariant `{other}` (known: {}, all)",
                    ALL_NAMES.join(" ")
                ))
                .into())
            }
        }
    }
    out.emit(
        json!({"expr": expr, "vertices": g.n(), "edges": g.edge_count(), "invariants": report}),
        text,
    );
    Ok(true)
}
