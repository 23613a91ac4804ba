//! Certificates for `(p, q)` r-shake concordances.
//!
//! A certificate records that an r-shaking of `left` with `p` components and
//! one of `right` with `q` components cobound a genus-zero surface. The
//! relation is not transitive, so only the gluings below combine
//! certificates and queries are answered by explicit chains.

use serde::Serialize;

use crate::engine::ExternalFact;
use crate::expr::{KnotExpr, PatternRef};
use crate::pattern::PatternDatum;
use crate::trace::Caveats;
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShakeCert {
    pub r: i64,
    #[serde(serialize_with = "as_text")]
    pub left: KnotExpr,
    #[serde(serialize_with = "as_text")]
    pub right: KnotExpr,
    pub p: u64,
    pub q: u64,
    pub rule: &'static str,
    pub premises: Vec<ShakeCert>,
    #[serde(serialize_with = "caveat_tags")]
    pub caveats: Caveats,
}

fn as_text<S: serde::Serializer>(e: &KnotExpr, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&e.to_string())
}

fn caveat_tags<S: serde::Serializer>(c: &Caveats, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(c.tags())
}

fn odd(n: u64) -> bool {
    n % 2 == 1
}

impl ShakeCert {
    /// Plain concordance.
    pub fn concordance(left: KnotExpr, right: KnotExpr, r: i64, caveats: Caveats) -> ShakeCert {
        ShakeCert {
            r,
            left,
            right,
            p: 1,
            q: 1,
            rule: "concordance",
            premises: vec![],
            caveats,
        }
    }

    /// A certificate asserted from outside; the counts must be odd.
    pub fn external(left: KnotExpr, right: KnotExpr, r: i64, p: u64, q: u64) -> Result<ShakeCert, Error> {
        if !odd(p) || !odd(q) {
            return Err(Error::Precondition(format!(
                "a shaking has an odd number of components, got ({p}, {q})"
            )));
        }
        Ok(ShakeCert {
            r,
            left,
            right,
            p,
            q,
            rule: "external-shake-concordance",
            premises: vec![],
            caveats: Caveats::EXTERNAL,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }
}

/// The relation read backwards.
pub fn symmetry(c: &ShakeCert) -> ShakeCert {
    ShakeCert {
        r: c.r,
        left: c.right.clone(),
        right: c.left.clone(),
        p: c.q,
        q: c.p,
        rule: "shake-symmetry",
        premises: vec![c.clone()],
        caveats: c.caveats,
    }
}

/// `(p, 1)` then `(m, 1)` gives `(pm, 1)`; likewise `(1, p)` then `(1, m)`
/// gives `(1, pm)`.
pub fn compose_11(a: &ShakeCert, b: &ShakeCert) -> Result<ShakeCert, Error> {
    if a.r != b.r {
        return Err(Error::Precondition(format!("framings differ: {} and {}", a.r, b.r)));
    }
    if a.right != b.left {
        return Err(Error::Precondition(format!(
            "endpoints differ: {} and {}",
            a.right, b.left
        )));
    }
    let (p, q) = if a.q == 1 && b.q == 1 {
        (a.p * b.p, 1)
    } else if a.p == 1 && b.p == 1 {
        (1, a.q * b.q)
    } else {
        return Err(Error::Precondition(format!(
            "composition needs ({}, {}) and ({}, {}) both of the form (n, 1) or both (1, n)",
            a.p, a.q, b.p, b.q
        )));
    };
    Ok(ShakeCert {
        r: a.r,
        left: a.left.clone(),
        right: b.right.clone(),
        p,
        q,
        rule: "shake-compose",
        premises: vec![a.clone(), b.clone()],
        caveats: a.caveats.union(b.caveats),
    })
}

/// `P_r(K)` is `(1, n)` r-shake concordant to `K`, `n` the geometric winding
/// number of a winding-one pattern with slice `P(U)`.
pub fn satellite_shake(p: &PatternDatum, k: &KnotExpr, r: i64) -> Result<ShakeCert, Error> {
    if p.w != 1 {
        return Err(Error::Precondition(format!("pattern {} needs winding number 1, has {}", p.name, p.w)));
    }
    if p.tilde_slice != Some(true) && p.tilde_ribbon != Some(true) {
        return Err(Error::Precondition(format!("pattern {} needs a slice P(U)", p.name)));
    }
    let n = p
        .n_geom
        .ok_or_else(|| Error::Precondition(format!("pattern {} needs a known geometric winding number", p.name)))?;
    if n < 1 || n % 2 == 0 {
        return Err(Error::Precondition(format!(
            "pattern {} has geometric winding number {n}, expected odd and positive for winding number 1",
            p.name
        )));
    }
    Ok(ShakeCert {
        r,
        left: KnotExpr::sat(PatternRef::named(&p.name), r, k.clone()),
        right: k.clone(),
        p: 1,
        q: n as u64,
        rule: "satellite-shake",
        premises: vec![],
        caveats: Caveats::NONE,
    })
}

/// From `s`: `P_r(K) ~ Q_r(J)` with `(2k+1, 2l+1)`, `a`: `P_r(K) ~ K` with
/// `(1, m)` and `b`: `Q_r(J) ~ J` with `(1, n)`, glue `2k+1` copies of `a`
/// and `2l+1` copies of `b` onto `s`.
pub fn glue_general(s: &ShakeCert, a: &ShakeCert, b: &ShakeCert) -> Result<ShakeCert, Error> {
    if s.r != a.r || s.r != b.r {
        return Err(Error::Precondition(format!(
            "framings differ: {}, {}, {}",
            s.r, a.r, b.r
        )));
    }
    if a.left != s.left {
        return Err(Error::Precondition(format!(
            "left end {} does not match {}",
            s.left, a.left
        )));
    }
    if b.left != s.right {
        return Err(Error::Precondition(format!(
            "right end {} does not match {}",
            s.right, b.left
        )));
    }
    if a.p != 1 || b.p != 1 {
        return Err(Error::Precondition("satellite certificates must have the form (1, n)".into()));
    }
    Ok(ShakeCert {
        r: s.r,
        left: a.right.clone(),
        right: b.right.clone(),
        p: a.q * s.p,
        q: b.q * s.q,
        rule: "shake-glue",
        premises: vec![s.clone(), a.clone(), b.clone()],
        caveats: s.caveats.union(a.caveats).union(b.caveats),
    })
}

/// `K` is r-shake slice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShakeSliceFact {
    #[serde(serialize_with = "as_text")]
    pub expr: KnotExpr,
    pub r: i64,
    #[serde(serialize_with = "caveat_tags")]
    pub caveats: Caveats,
    pub cert: ShakeCert,
}

impl ShakeSliceFact {
    pub fn to_external(&self) -> ExternalFact {
        ExternalFact::ShakeSlice {
            expr: self.expr.clone(),
            r: self.r,
            spc4: self.caveats.spc4,
        }
    }
}

/// A `(m, 1)` r-shake concordance to the unknot makes the left end r-shake
/// slice.
pub fn shake_slice_cert(c: &ShakeCert) -> Result<ShakeSliceFact, Error> {
    if c.right != KnotExpr::Unknot {
        return Err(Error::Precondition(format!("right end {} is not the unknot", c.right)));
    }
    if c.q != 1 {
        return Err(Error::Precondition(format!("need an (m, 1) certificate, got ({}, {})", c.p, c.q)));
    }
    Ok(ShakeSliceFact {
        expr: c.left.clone(),
        r: c.r,
        caveats: c.caveats,
        cert: c.clone(),
    })
}

/// `Q_r(K)` is slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceCert {
    pub expr: KnotExpr,
    pub caveats: Caveats,
}

/// A slice satellite `Q_r(K)` for a winding-one `Q` with ribbon `Q(U)` gives
/// an `(n, 1)` r-shake concordance from `K` to the unknot.
pub fn from_slice(q: &PatternDatum, slice: &SliceCert) -> Result<(ShakeCert, ShakeSliceFact), Error> {
    if q.tilde_ribbon != Some(true) {
        return Err(Error::Precondition(format!("pattern {} needs a ribbon P(U)", q.name)));
    }
    let KnotExpr::Sat { pattern, r, companion } = &slice.expr else {
        return Err(Error::Precondition(format!("{} is not a satellite", slice.expr)));
    };
    if *pattern != PatternRef::named(&q.name) {
        return Err(Error::Precondition(format!("{} is not a satellite with pattern {}", slice.expr, q.name)));
    }
    let down = symmetry(&satellite_shake(q, companion, *r)?);
    let slice_disk = ShakeCert::concordance(slice.expr.clone(), KnotExpr::Unknot, *r, slice.caveats);
    let cert = compose_11(&down, &slice_disk)?;
    let fact = shake_slice_cert(&cert)?;
    Ok((cert, fact))
}

/// Given `K ~ J`, a chain `P_r(K) ~ K ~ J ~ P_r(J)` with the same framing.
pub fn lift_chain(c: &ShakeCert, p: &PatternDatum) -> Result<Vec<ShakeCert>, Error> {
    let up_left = satellite_shake(p, &c.left, c.r)?;
    let up_right = satellite_shake(p, &c.right, c.r)?;
    Ok(vec![up_left, c.clone(), symmetry(&up_right)])
}

/// Consecutive certificates share endpoints and framing.
pub fn chain_valid(chain: &[ShakeCert]) -> bool {
    chain
        .windows(2)
        .all(|w| w[0].right == w[1].left && w[0].r == w[1].r)
        && chain.iter().all(|c| odd(c.p) && odd(c.q))
}
