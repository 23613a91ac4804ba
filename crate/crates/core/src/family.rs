//! Invariant tables for iterated satellites `P^i_r(K)`.
//!
//! When the pattern has positive, exactly known slice genus and a Legendrian
//! diagram that keeps every iterate suitable, each step adds `g4(P)` to g4
//! and τ and `2·g4(P)` to s. Otherwise every row is propagated on its own.

use std::fmt;

use serde::Serialize;

use crate::engine::{propagate, FactStore, Inv, Query};
use crate::exec::Exec;
use crate::expr::KnotExpr;
use crate::interval::Interval;
use crate::pattern::{PatternDatum, Registry};
use crate::trace::Caveats;
use crate::Error;

/// Interval endpoints with `None` for an infinite side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Range {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Range {
    pub fn exact(v: i64) -> Self {
        Range { lo: Some(v), hi: Some(v) }
    }

    pub fn value(&self) -> Option<i64> {
        match (self.lo, self.hi) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        }
    }
}

impl From<Interval> for Range {
    fn from(iv: Interval) -> Self {
        Range { lo: iv.lo(), hi: iv.hi() }
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.value() {
            return write!(f, "{v}");
        }
        let lo = self.lo.map_or("-inf".to_string(), |v| v.to_string());
        let hi = self.hi.map_or("+inf".to_string(), |v| v.to_string());
        write!(f, "[{lo},{hi}]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyRow {
    pub i: usize,
    pub g4: Range,
    pub tau: Range,
    pub s: Range,
    pub gsh_r: Option<Range>,
    pub caveats: Caveats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Path {
    ClosedForm,
    PerTerm,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyTable {
    pub pattern: String,
    pub base: String,
    pub r: i64,
    pub path: Path,
    /// Why the closed form was not used, when it was not.
    pub diagnostic: Option<String>,
    pub rows: Vec<FamilyRow>,
}

impl FamilyTable {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["i", "g4", "tau", "s", "gsh_r", "caveats"]).expect("in-memory write");
        for row in &self.rows {
            w.write_record([
                row.i.to_string(),
                row.g4.to_string(),
                row.tau.to_string(),
                row.s.to_string(),
                row.gsh_r.map(|x| x.to_string()).unwrap_or_default(),
                row.caveats.tags().join(";"),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

fn need(cond: bool, what: &str) -> Result<(), Error> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(format!("closed form needs {what}")))
    }
}

fn exact(st: &FactStore, inv: Inv, what: &str) -> Result<i64, Error> {
    st.interval(st.root(), inv)
        .and_then(|iv| iv.exact())
        .ok_or_else(|| Error::Precondition(format!("closed form needs {what} of the base knot known exactly")))
}

fn pattern<'a>(registry: &'a Registry, name: &str) -> Result<&'a PatternDatum, Error> {
    registry.get(name).ok_or_else(|| Error::UnknownPattern(name.to_string()))
}

/// Rows from the closed form, or the first hypothesis that fails.
pub fn closed_form(
    registry: &Registry,
    name: &str,
    base: &KnotExpr,
    r: i64,
    iters: usize,
) -> Result<Vec<FamilyRow>, Error> {
    let p = pattern(registry, name)?;
    need(p.w == 1, "winding number w(P) = 1")?;
    let gp = p.g4_exact().ok_or_else(|| Error::Precondition("closed form needs g4(P) known exactly".into()))?;
    need(gp > 0, "g4(P) > 0")?;
    let st = propagate(base, registry, &Query::at([r]))?;
    let cert = st
        .facts(st.root())
        .cert
        .ok_or_else(|| Error::Precondition("closed form needs a suitability certificate for the base knot".into()))?;
    let legs: Vec<i64> = p
        .leg_pairs
        .iter()
        .filter(|&&(m, rho)| m >= 0 && 2 * gp <= m + rho && cert.r >= r + m)
        .map(|&(m, _)| m)
        .collect();
    need(
        !legs.is_empty(),
        &format!("a diagram of P with tb = m >= 0, 2 g4(P) <= m + rot and a base certificate >= r + m (base is {}-suitable)", cert.r),
    )?;
    let g4 = exact(&st, Inv::G4, "g4")?;
    let tau = exact(&st, Inv::Tau, "tau")?;
    let s = exact(&st, Inv::S, "s")?;
    let gsh = if legs.iter().any(|&m| m >= 1) {
        st.interval(st.root(), Inv::Gsh(r)).and_then(|iv| iv.exact())
    } else {
        None
    };
    let caveats = [Inv::G4, Inv::Tau, Inv::S, Inv::Gsh(r)]
        .iter()
        .filter_map(|&inv| st.interval(st.root(), inv))
        .fold(Caveats::NONE, |c, iv| c.union(st.interval_caveats(&iv)));
    Ok((0..=iters)
        .map(|i| {
            let k = i as i64 * gp;
            FamilyRow {
                i,
                g4: Range::exact(g4 + k),
                tau: Range::exact(tau + k),
                s: Range::exact(s + 2 * k),
                gsh_r: gsh.map(|v| Range::exact(v + k)),
                caveats,
            }
        })
        .collect())
}

/// Rows from propagating each iterate separately.
pub fn per_term(
    registry: &Registry,
    name: &str,
    base: &KnotExpr,
    r: i64,
    iters: usize,
    exec: Exec,
) -> Result<Vec<FamilyRow>, Error> {
    pattern(registry, name)?;
    let idx: Vec<usize> = (0..=iters).collect();
    exec.map(&idx, |&i| {
        let e = base.clone().iterate(name, r, i);
        let st = propagate(&e, registry, &Query::at([r]))?;
        let root = st.root();
        let get = |inv| st.interval(root, inv).expect("tracked invariant");
        let ivs = [get(Inv::G4), get(Inv::Tau), get(Inv::S), get(Inv::Gsh(r))];
        let caveats = ivs.iter().fold(Caveats::NONE, |c, iv| c.union(st.interval_caveats(iv)));
        Ok(FamilyRow {
            i,
            g4: ivs[0].into(),
            tau: ivs[1].into(),
            s: ivs[2].into(),
            gsh_r: Some(ivs[3].into()),
            caveats,
        })
    })
    .into_iter()
    .collect()
}

/// Closed form when its hypotheses hold, per-term propagation otherwise.
pub fn family_table(
    registry: &Registry,
    name: &str,
    base: &KnotExpr,
    r: i64,
    iters: usize,
    exec: Exec,
) -> Result<FamilyTable, Error> {
    let (path, diagnostic, rows) = match closed_form(registry, name, base, r, iters) {
        Ok(rows) => (Path::ClosedForm, None, rows),
        Err(Error::Precondition(why)) => (Path::PerTerm, Some(why), per_term(registry, name, base, r, iters, exec)?),
        Err(e) => return Err(e),
    };
    Ok(FamilyTable {
        pattern: name.to_string(),
        base: base.to_string(),
        r,
        path,
        diagnostic,
        rows,
    })
}
