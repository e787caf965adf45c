//! Text and JSON rendering. Both modes print the same numbers: floats use
//! the shortest round-trip form in either case.

use crate::tables::Row;
use irkit::certificate::Certificate;
use irkit::code::{CellStatus, Frontier};
use irkit::criticality::Criticality;
use irkit::hom::CoreResult;
use irkit::ratio::RatioBounds;
use irkit::relations::{Metric, Relation, Spectra};
use irkit::Graph;
use serde_json::{json, Value as Json};
use std::io::Write;

pub struct Out {
    json: bool,
}

fn rule_name(c: &Certificate) -> String {
    serde_json::to_value(c.rule)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn flags(b: &RatioBounds) -> String {
    let names: Vec<String> = b
        .flags
        .iter()
        .filter_map(|f| serde_json::to_value(f).ok()?.as_str().map(str::to_string))
        .collect();
    if names.is_empty() {
        "-".into()
    } else {
        names.join(", ")
    }
}

pub fn status_name(s: CellStatus) -> String {
    serde_json::to_value(s)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_else(|| format!("{s:?}"))
}

fn bounds_text(b: &RatioBounds) -> String {
    format!(
        "Ir({} / {})\n  lower: {} ({})\n    bound {}\n  upper: {} ({})\n    bound {}\n  flags: {}",
        b.channel,
        b.source,
        b.lower.value,
        rule_name(&b.lower),
        b.lo(),
        b.upper.value,
        rule_name(&b.upper),
        b.hi(),
        flags(b)
    )
}

impl Out {
    pub fn new(json: bool) -> Self {
        Out { json }
    }

    pub fn emit(&self, value: Json, text: String) {
        let body = if self.json {
            serde_json::to_string_pretty(&value).expect("serializable report")
        } else {
            text
        };
        // A closed pipe (e.g. `| head`) is not an error worth reporting.
        let _ = writeln!(std::io::stdout().lock(), "{body}");
    }

    pub fn bounds(&self, b: &RatioBounds) {
        self.emit(json!(b.to_json()), bounds_text(b));
    }

    pub fn table(&self, rows: &[Row]) {
        let mut text = String::new();
        let mut section = "";
        for r in rows {
            if r.section != section {
                section = &r.section;
                text.push_str(&format!("== {section}\n"));
            }
            text.push_str(&format!(
                "{}  {}\n    expected {}\n    computed {}\n",
                if r.pass { "PASS" } else { "FAIL" },
                r.item,
                r.expected,
                r.computed
            ));
            if let Some(n) = &r.note {
                text.push_str(&format!("    note: {n}\n"));
            }
        }
        let failed = rows.iter().filter(|r| !r.pass).count();
        text.push_str(&format!("{} rows, {} failed", rows.len(), failed));
        self.emit(json!({"rows": rows, "failed": failed}), text);
    }

    pub fn frontier(&self, source: &str, channel: &str, f: &Frontier) {
        let kmax = f.cells.iter().map(|c| c.k).max().unwrap_or(0);
        let nmax = f.cells.iter().map(|c| c.n).max().unwrap_or(0);
        let mut text = format!("codes {source}^k -> {channel}^n\n  k\\n");
        for n in 1..=nmax {
            text.push_str(&format!(" {n:>12}"));
        }
        text.push('\n');
        for k in 1..=kmax {
            text.push_str(&format!("  {k:>3}"));
            for n in 1..=nmax {
                let s = f.cell(k, n).map(|c| status_name(c.status)).unwrap_or_default();
                text.push_str(&format!(" {s:>12}"));
            }
            text.push('\n');
        }
        match f.best {
            Some((k, n)) => text.push_str(&format!("  best k/n = {k}/{n} = {}", k as f64 / n as f64)),
            None => text.push_str("  no code found"),
        }
        let best = f.best.map(|(k, n)| json!({"k": k, "n": n, "ratio": k as f64 / n as f64}));
        self.emit(json!({"source": source, "channel": channel, "cells": f.cells, "best": best}), text);
    }

    pub fn core(&self, expr: &str, g: &Graph, own: Option<&CoreResult>, comp: Option<&CoreResult>) {
        let part = |c: Option<&CoreResult>| match c {
            Some(c) => json!({
                "vertices": c.vertices,
                "core_order": c.core.n(),
                "core_edges": c.core.edge_count(),
                "core_graph6": c.core.to_graph6(),
                "retraction": c.hom,
            }),
            None => json!({"status": "budget_exhausted"}),
        };
        let line = |what: &str, c: Option<&CoreResult>| match c {
            Some(c) => format!(
                "  core of {what}: {} vertices, {} edges, graph6 {}\n    vertices {:?}",
                c.core.n(),
                c.core.edge_count(),
                c.core.to_graph6(),
                c.vertices
            ),
            None => format!("  core of {what}: budget exhausted"),
        };
        let text = format!(
            "{expr}: {} vertices, {} edges\n{}\n{}",
            g.n(),
            g.edge_count(),
            line("the graph", own),
            line("the complement", comp)
        );
        self.emit(
            json!({"expr": expr, "graph6": g.to_graph6(), "core": part(own), "complement_core": part(comp)}),
            text,
        );
    }

    pub fn relation(&self, r: &Relation, m: &Metric) {
        let v = |x: &Option<bool>| match x {
            Some(true) => "certified",
            Some(false) => "refuted",
            None => "unknown",
        };
        let name = |x| serde_json::to_value(x).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
        let text = format!(
            "{}\n{}\ninformation equivalence: {}\nweak equivalence: {}\n{} <= {}: {}\n{} <= {}: {}\nd = {}\nd_w = {}",
            bounds_text(&r.forward),
            bounds_text(&r.backward),
            name(r.information),
            name(r.weak),
            r.forward.source,
            r.forward.channel,
            v(&r.order.a_below_b),
            r.backward.source,
            r.backward.channel,
            v(&r.order.b_below_a),
            m.d,
            m.d_w,
        );
        self.emit(
            json!({
                "forward": r.forward.to_json(),
                "backward": r.backward.to_json(),
                "information": r.information,
                "weak": r.weak,
                "order": r.order,
                "incomparable": r.order.incomparable(),
                "metric": m,
            }),
            text,
        );
    }

    pub fn critical(&self, expr: &str, c: &Criticality) {
        let text = match c {
            Criticality::CertifiedCritical {
                chi_bar_f,
                witness,
                triangle_free_complement,
                ..
            } => format!(
                "{expr}: certified critical\n  chibar_f = {}\n  edge {:?}: independent set of size {} in power {}: {:?}{}",
                irkit::real::fmt_rational(&chi_bar_f.value),
                witness.edge,
                witness.set.len(),
                witness.power,
                witness.set,
                if *triangle_free_complement {
                    "\n  complement connected and triangle-free with chibar_f < 3"
                } else {
                    ""
                }
            ),
            Criticality::Unknown {
                chi_bar_f,
                edges_tried,
                budget_exhausted,
                ..
            } => format!(
                "{expr}: unknown\n  chibar_f = {}\n  edges tried: {edges_tried}{}",
                chi_bar_f.as_ref().map_or("?".into(), |f| irkit::real::fmt_rational(&f.value)),
                if *budget_exhausted { " (budget exhausted)" } else { "" }
            ),
        };
        self.emit(json!({"expr": expr, "result": c}), text);
    }

    pub fn spectra(&self, expr: &str, s: &Spectra) {
        let mut text = format!("spectra of {expr}\n  {:<10} {:>28} {:>28}\n", "core", "source Ir(~core / G)", "channel Ir(G / ~core)");
        let iv = |b: &RatioBounds| format!("[{}, {}]", b.lo(), b.hi());
        for (i, r) in s.references.iter().enumerate() {
            text.push_str(&format!("  {:<10} {:>28} {:>28}\n", r, iv(&s.source[i]), iv(&s.channel[i])));
        }
        let rows: Vec<Json> = s
            .references
            .iter()
            .enumerate()
            .map(|(i, r)| json!({"core": r, "source": s.source[i].to_json(), "channel": s.channel[i].to_json()}))
            .collect();
        self.emit(json!({"expr": expr, "spectra": rows}), text.trim_end().to_string());
    }
}
