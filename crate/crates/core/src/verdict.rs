//! Shake-slice verdicts from a propagated fact store.

use std::fmt;

use serde::Serialize;

use crate::alexander::Arf;
use crate::engine::{propagate, ExternalFact, FactStore, Inv, Kind, Query};
use crate::expr::{KnotExpr, PatternRef};
use crate::pattern::Registry;
use crate::trace::TraceId;
use crate::Error;

/// One reason a knot is not r-shake slice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub reason: String,
    pub rules: Vec<&'static str>,
    pub trace: Option<TraceId>,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.trace {
            Some(t) => write!(f, "{} [#{t}]", self.reason),
            None => f.write_str(&self.reason),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Every obstruction that applies, never empty.
    No {
        obstructions: Vec<Obstruction>,
    },
    CertifiedModuloSpc4 {
        trace: TraceId,
    },
    Certified {
        trace: TraceId,
    },
    Unknown,
}

impl Verdict {
    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No { .. })
    }

    pub fn obstructions(&self) -> &[Obstruction] {
        match self {
            Verdict::No { obstructions } => obstructions,
            _ => &[],
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::No { obstructions } => {
                f.write_str("no: ")?;
                for (i, o) in obstructions.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{o}")?;
                }
                Ok(())
            }
            Verdict::CertifiedModuloSpc4 { trace } => write!(f, "shake slice [#{trace}] (mod SPC4)"),
            Verdict::Certified { trace } => write!(f, "shake slice [#{trace}]"),
            Verdict::Unknown => f.write_str("unknown"),
        }
    }
}

/// The satellite `Q_r(e)` a characterization witness claims is slice.
pub fn witness_satellite(e: &KnotExpr, pattern: &str, r: i64, registry: &Registry) -> Result<KnotExpr, Error> {
    let q = registry
        .get(pattern)
        .ok_or_else(|| Error::UnknownPattern(pattern.to_string()))?;
    if q.w != 1 {
        return Err(Error::Precondition(format!(
            "characterization pattern {pattern} needs winding number 1, has {}",
            q.w
        )));
    }
    if q.tilde_ribbon != Some(true) {
        return Err(Error::Precondition(format!(
            "characterization pattern {pattern} needs a ribbon P(U)"
        )));
    }
    Ok(KnotExpr::sat(PatternRef::named(pattern), r, e.clone()))
}

/// Decide whether `e` is r-shake slice as far as the rule set can tell.
///
/// `witness` names a pattern `Q` whose satellite `Q_r(e)` is asserted slice.
pub fn shake_slice_verdict(
    e: &KnotExpr,
    r: i64,
    registry: &Registry,
    witness: Option<&str>,
    externals: &[ExternalFact],
) -> Result<(Verdict, FactStore), Error> {
    let mut query = Query::at([r]);
    query.externals = externals.to_vec();
    if let Some(q) = witness {
        query
            .externals
            .push(ExternalFact::Slice(witness_satellite(e, q, r, registry)?));
    }
    let st = propagate(e, registry, &query)?;
    Ok((verdict_from(&st, r), st))
}

/// Read the verdict for the root of `st` at twist `r`.
pub fn verdict_from(st: &FactStore, r: i64) -> Verdict {
    let f = st.facts(st.root());
    let mut obstructions = Vec::new();
    if f.arf.value == Arf::One {
        obstructions.push(Obstruction {
            reason: "Arf = 1".into(),
            rules: f.arf.trace.map(|t| st.trace.rules_below(t)).unwrap_or_default(),
            trace: f.arf.trace,
        });
    }
    if r == 0 {
        let t = match (f.tau.lo, f.tau.hi) {
            (Some(l), _) if l.value > 0 => Some(l.trace),
            (_, Some(h)) if h.value < 0 => Some(h.trace),
            _ => None,
        };
        if let Some(t) = t {
            obstructions.push(Obstruction {
                reason: format!("tau {} excludes 0", f.tau),
                rules: st.trace.rules_below(t),
                trace: Some(t),
            });
        }
    }
    if let Kind::Sat { pattern, r: twist, child } = &st.node(st.root()).kind {
        let carries = pattern.w == 1 && (pattern.tilde_slice == Some(true) || pattern.tilde_ribbon == Some(true));
        if carries && *twist == r {
            let k = st.facts(*child);
            let name = &st.node(*child).expr;
            if k.arf.value == Arf::One {
                let mut rules = vec!["satellite-arf-obstruction"];
                rules.extend(k.arf.trace.map(|t| st.trace.rules_below(t)).unwrap_or_default());
                obstructions.push(Obstruction {
                    reason: format!("companion {name} has Arf = 1"),
                    rules,
                    trace: k.arf.trace,
                });
            }
            let t = match (k.tau.lo, k.tau.hi) {
                (Some(l), _) if l.value > 0 => Some(l.trace),
                (_, Some(h)) if h.value < 0 => Some(h.trace),
                _ => None,
            };
            if let (0, Some(t)) = (r, t) {
                let mut rules = vec!["satellite-tau-obstruction"];
                rules.extend(st.trace.rules_below(t));
                obstructions.push(Obstruction {
                    reason: format!("companion {name} has tau {} excluding 0", k.tau),
                    rules,
                    trace: Some(t),
                });
            }
        }
    }
    let gsh = st.interval(st.root(), Inv::Gsh(r));
    if let Some(l) = gsh.and_then(|g| g.lo).filter(|l| l.value >= 1) {
        let rules = st.trace.rules_below(l.trace);
        obstructions.push(Obstruction {
            reason: format!("gsh^{r} >= {} by {}", l.value, rules.join(" <- ")),
            rules,
            trace: Some(l.trace),
        });
    }
    if !obstructions.is_empty() {
        return Verdict::No { obstructions };
    }
    match gsh.and_then(|g| g.hi) {
        Some(h) if h.value == 0 => {
            if st.caveats(Some(h)).spc4 {
                Verdict::CertifiedModuloSpc4 { trace: h.trace }
            } else {
                Verdict::Certified { trace: h.trace }
            }
        }
        _ => Verdict::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;

    fn verdict(text: &str, r: i64) -> Verdict {
        let reg = Registry::builtin();
        let e = parse_expr(text, &reg).unwrap();
        shake_slice_verdict(&e, r, &reg, None, &[]).unwrap().0
    }

    #[test]
    fn trefoil_obstructed_by_arf() {
        for r in -5..=5 {
            let v = verdict("(torus 2 3)", r);
            assert_eq!(v.obstructions().first().map(|o| o.reason.as_str()), Some("Arf = 1"), "r={r}: {v}");
        }
    }

    #[test]
    fn unknot_certified() {
        assert!(matches!(verdict("unknot", 0), Verdict::Certified { .. }));
    }

    #[test]
    fn spc4_family() {
        for m in 0..3 {
            for r in 1..4 {
                let v = verdict(&format!("(sat r{m} :r {r} unknot)"), r);
                assert!(matches!(v, Verdict::CertifiedModuloSpc4 { .. }), "m={m} r={r}: {v}");
            }
        }
    }

    #[test]
    fn tau_obstruction_through_satellite() {
        let v = verdict("(sat r1 :r 0 (torus 2 5))", 0);
        assert!(
            v.obstructions()
                .iter()
                .any(|o| o.rules.contains(&"satellite-tau-obstruction")),
            "{v}"
        );
    }

    #[test]
    fn witness_certifies_and_is_checked() {
        let reg = Registry::builtin();
        let k = parse_expr("(sat r1 :r 2 unknot)", &reg).unwrap();
        let (v, _) = shake_slice_verdict(&k, 2, &reg, Some("r0"), &[]).unwrap();
        assert!(matches!(v, Verdict::Certified { .. }), "{v}");
        // a slice satellite of the trefoil contradicts Arf = 1
        let t = KnotExpr::rht();
        assert!(matches!(
            shake_slice_verdict(&t, 1, &reg, Some("mazur"), &[]),
            Err(Error::Contradiction(_))
        ));
    }
}
