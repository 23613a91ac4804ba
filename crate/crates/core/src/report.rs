//! Text and JSON renderings of a fact store.

use std::fmt::Write;

use serde_json::{json, Map, Value};

use crate::engine::{FactStore, Inv, NodeId};
use crate::interval::{Bound, Interval};
use crate::trace::Caveats;

fn trace_ref(b: Option<Bound>) -> String {
    b.map_or("-".into(), |b| format!("#{}", b.trace))
}

fn suffix(c: Caveats) -> String {
    c.tags().iter().map(|t| format!(" ({t})")).collect()
}

fn requested(st: &FactStore, rs: &[i64]) -> Vec<i64> {
    let mut out = Vec::new();
    for &r in rs {
        if st.rs().contains(&r) && !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

fn interval_line(out: &mut String, st: &FactStore, name: &str, iv: &Interval) {
    let text = iv.to_string();
    let refs = if iv.lo.map(|b| b.trace) == iv.hi.map(|b| b.trace) && iv.lo.is_some() {
        trace_ref(iv.lo)
    } else {
        format!("{} {}", trace_ref(iv.lo), trace_ref(iv.hi))
    };
    let _ = writeln!(out, "  {name:<8} {text:<16} {refs}{}", suffix(st.interval_caveats(iv)));
}

/// Human-readable report for one node, listing the shake genus for `rs`.
pub fn node_text(st: &FactStore, id: NodeId, rs: &[i64]) -> String {
    let node = st.node(id);
    let f = &node.facts;
    let mut out = format!("{}\n", node.expr);
    interval_line(&mut out, st, "g4", &f.g4);
    interval_line(&mut out, st, "tau", &f.tau);
    interval_line(&mut out, st, "s", &f.s);
    for r in requested(st, rs) {
        interval_line(&mut out, st, &format!("gsh^{r}"), &f.gsh[&r]);
    }
    let arf_ref = f.arf.trace.map_or("-".into(), |t| format!("#{t}"));
    let _ = writeln!(out, "  {:<8} {:<16} {arf_ref}", "arf", format!("= {}", f.arf.value));
    match f.tb_lo() {
        Some(w) => {
            let _ = writeln!(out, "  {:<8} {:<16} #{}", "tb", format!(">= {}", w.leg.tb), w.trace);
        }
        None => {
            let _ = writeln!(out, "  {:<8} {:<16} -", "tb", "unknown");
        }
    }
    for w in &f.witnesses {
        let c = st.trace.get(w.trace).map_or(Caveats::NONE, |t| t.caveats);
        let _ = writeln!(out, "  {:<8} {:<16} #{}{}", "witness", w.leg.to_string(), w.trace, suffix(c));
    }
    if let Some(c) = f.cert {
        let cav = st.trace.get(c.trace).map_or(Caveats::NONE, |t| t.caveats);
        let _ = writeln!(out, "  {:<8} {:<16} #{}{}", "suitable", format!("r = {}", c.r), c.trace, suffix(cav));
    }
    out
}

/// Report for the root, or every node when `all` is set.
pub fn text(st: &FactStore, rs: &[i64], all: bool) -> String {
    if all {
        (0..st.nodes().len()).map(|id| node_text(st, id, rs)).collect::<Vec<_>>().join("\n")
    } else {
        node_text(st, st.root(), rs)
    }
}

fn interval_json(st: &FactStore, iv: &Interval) -> Value {
    let latest = match (iv.lo, iv.hi) {
        (Some(a), Some(b)) => Some(a.trace.max(b.trace)),
        (a, b) => a.or(b).map(|x| x.trace),
    };
    json!({
        "lo": iv.lo(),
        "hi": iv.hi(),
        "trace_id": latest,
        "lo_trace": iv.lo.map(|b| b.trace),
        "hi_trace": iv.hi.map(|b| b.trace),
        "caveats": st.interval_caveats(iv).tags(),
    })
}

pub fn node_json(st: &FactStore, id: NodeId, rs: &[i64]) -> Value {
    let node = st.node(id);
    let f = &node.facts;
    let mut inv = Map::new();
    inv.insert("g4".into(), interval_json(st, &f.g4));
    inv.insert("tau".into(), interval_json(st, &f.tau));
    inv.insert("s".into(), interval_json(st, &f.s));
    for r in requested(st, rs) {
        inv.insert(Inv::Gsh(r).to_string(), interval_json(st, &f.gsh[&r]));
    }
    json!({
        "expr": node.expr.to_string(),
        "invariants": inv,
        "arf": {"value": f.arf.value.to_string(), "trace_id": f.arf.trace},
        "tb_lo": f.tb_lo().map(|w| json!({"value": w.leg.tb, "trace_id": w.trace})),
        "witnesses": f.witnesses.iter().map(|w| json!({"tb": w.leg.tb, "rot": w.leg.rot, "trace_id": w.trace})).collect::<Vec<_>>(),
        "suitable": f.cert.map(|c| json!({"r": c.r, "trace_id": c.trace})),
    })
}

/// JSON report for the root with the whole trace table.
pub fn json(st: &FactStore, rs: &[i64]) -> Value {
    let mut v = node_json(st, st.root(), rs);
    let trace: Vec<Value> = st
        .trace
        .nodes()
        .iter()
        .map(|t| {
            json!({
                "id": t.id,
                "rule": t.rule,
                "detail": t.detail,
                "premises": t.premises,
                "caveats": t.caveats.tags(),
            })
        })
        .collect();
    v["trace"] = Value::Array(trace);
    v["iterations"] = json!(st.iterations());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{propagate, Query};
    use crate::{parse_expr, Registry};

    #[test]
    fn text_and_json() {
        let reg = Registry::builtin();
        let e = parse_expr("(torus 2 5)", &reg).unwrap();
        let st = propagate(&e, &reg, &Query::at([0])).unwrap();
        let t = text(&st, &[0], false);
        assert!(t.lines().any(|l| l.trim_start().starts_with("gsh^0") && l.contains("= 2")), "{t}");
        assert!(t.lines().skip(1).all(|l| l.contains('#') || l.trim_end().ends_with('-')), "{t}");
        let j = json(&st, &[0]);
        assert_eq!(j["invariants"]["gsh^0"]["lo"], 2);
        assert_eq!(j["invariants"]["gsh^0"]["hi"], 2);
        let id = j["invariants"]["g4"]["trace_id"].as_u64().unwrap() as usize;
        assert!(st.trace.get(id).is_some());
        assert_eq!(j["arf"]["value"], "1");
    }

    #[test]
    fn spc4_suffix() {
        let reg = Registry::builtin();
        let e = parse_expr("(sat r2 :r 1 unknot)", &reg).unwrap();
        let st = propagate(&e, &reg, &Query::at([1])).unwrap();
        assert!(text(&st, &[1], false).contains("(mod SPC4)"));
    }
}
