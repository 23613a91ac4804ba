//! r-suitability certificates.
//!
//! A knot is r-suitable when it has a Legendrian representative with
//! `tb = r` and `rot = 2·g4 - 1 - r`. Certificates here are constructive:
//! they record how suitability was derived and never assert its absence.

use serde::Serialize;

use crate::expr::{gcd, KnotExpr, PatternRef};
use crate::interval::ceil_half;
use crate::legendrian::LegWitness;
use crate::pattern::PatternDatum;
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuitCert {
    #[serde(serialize_with = "as_text")]
    pub expr: KnotExpr,
    pub r: i64,
    /// Slice genus, when the derivation pins it down.
    pub g4: Option<i64>,
    pub rule: &'static str,
    pub premises: Vec<SuitCert>,
    pub external: bool,
}

fn as_text<S: serde::Serializer>(e: &KnotExpr, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&e.to_string())
}

/// A fact implied by a suitability certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Consequence {
    /// `2τ = s = 2·g4`.
    TauSGenusLink,
    GenusAtLeast(i64),
    Witness(LegWitness),
    NotSlice,
}

/// Least slice genus compatible with r-suitability: `r <= 2·g4 - 1`.
pub fn suitability_genus_floor(r: i64) -> i64 {
    ceil_half(r + 1).max(0)
}

/// Positive torus knots are `(2g - 1)`-suitable with `g = (p-1)(q-1)/2`.
pub fn suit_positive_torus(p: i64, q: i64) -> Result<SuitCert, Error> {
    if p < 2 || q <= p || gcd(p, q) != 1 {
        return Err(Error::Precondition(format!(
            "torus knot ({p}, {q}) needs coprime 2 <= p < q"
        )));
    }
    let g = (p - 1) * (q - 1) / 2;
    Ok(SuitCert {
        expr: KnotExpr::torus(p, q),
        r: 2 * g - 1,
        g4: Some(g),
        rule: "torus-suitable",
        premises: vec![],
        external: false,
    })
}

/// r-suitable implies k-suitable for every `k <= r`, by positive
/// stabilization.
pub fn suit_destab(c: &SuitCert, k: i64) -> Result<SuitCert, Error> {
    if k > c.r {
        return Err(Error::Precondition(format!(
            "cannot raise suitability from {} to {k}",
            c.r
        )));
    }
    if k == c.r {
        return Ok(c.clone());
    }
    let base = if c.rule == "stabilize-suitable" {
        c.premises[0].clone()
    } else {
        c.clone()
    };
    Ok(SuitCert {
        expr: c.expr.clone(),
        r: k,
        g4: c.g4,
        rule: "stabilize-suitable",
        external: base.external,
        premises: vec![base],
    })
}

/// The untwisted positive Whitehead double of an r-suitable knot with
/// `r >= 0` is 1-suitable of genus one.
pub fn suit_wh(c: &SuitCert) -> Result<SuitCert, Error> {
    if c.r < 0 {
        return Err(Error::Precondition(format!(
            "Whitehead double needs a companion suitable at r >= 0, got r = {}",
            c.r
        )));
    }
    Ok(SuitCert {
        expr: c.expr.clone().wh(),
        r: 1,
        g4: Some(1),
        rule: "whitehead-suitable",
        premises: vec![c.clone()],
        external: c.external,
    })
}

/// `K` r-suitable and `J` k-suitable make `K # J` `(r + k + 1)`-suitable.
pub fn suit_sum(a: &SuitCert, b: &SuitCert) -> SuitCert {
    let mut items = Vec::new();
    for e in [&a.expr, &b.expr] {
        match e {
            KnotExpr::Sum(xs) => items.extend(xs.iter().cloned()),
            other => items.push(other.clone()),
        }
    }
    SuitCert {
        expr: KnotExpr::Sum(items),
        r: a.r + b.r + 1,
        g4: a.g4.zip(b.g4).map(|(x, y)| x + y),
        rule: "sum-suitable",
        premises: vec![a.clone(), b.clone()],
        external: a.external || b.external,
    }
}

/// Winding-number-one satellite of an `(r + m)`-suitable companion using a
/// pattern diagram with `tb = m`, `rot = ρ` and `0 < g4(P) <= (m + ρ)/2`.
pub fn suit_satellite(
    c: &SuitCert,
    pattern: &PatternDatum,
    leg: (i64, i64),
    r: i64,
) -> Result<SuitCert, Error> {
    let (m, rho) = leg;
    let name = &pattern.name;
    if pattern.w != 1 {
        return Err(Error::Precondition(format!("pattern `{name}` has winding number {} (needs 1)", pattern.w)));
    }
    if !pattern.leg_pairs.contains(&leg) {
        return Err(Error::Precondition(format!("pattern `{name}` has no Legendrian pair ({m}, {rho})")));
    }
    if m < 0 {
        return Err(Error::Precondition(format!("Legendrian pair ({m}, {rho}) needs tb >= 0")));
    }
    if c.r != r + m {
        return Err(Error::Precondition(format!(
            "companion is {}-suitable, needs exactly r + m = {}",
            c.r,
            r + m
        )));
    }
    let (Some(lo), Some(hi)) = (pattern.g4_lo, pattern.g4_hi) else {
        return Err(Error::Precondition(format!("pattern `{name}` has unknown slice genus")));
    };
    if lo <= 0 {
        return Err(Error::Precondition(format!("pattern `{name}` needs slice genus > 0")));
    }
    if 2 * hi > m + rho {
        return Err(Error::Precondition(format!(
            "pattern `{name}`: slice genus {hi} exceeds (m + rot)/2 for pair ({m}, {rho})"
        )));
    }
    Ok(SuitCert {
        expr: KnotExpr::sat(PatternRef::named(name.clone()), r, c.expr.clone()),
        r: r + m,
        g4: c.g4.zip(pattern.g4_exact()).map(|(k, p)| k + p),
        rule: "satellite-suitable",
        premises: vec![c.clone()],
        external: c.external,
    })
}

/// A connected sum of `max(1, ⌈(r+1)/2⌉)` copies of `Wh(T(2,3))`, which is
/// topologically slice, together with its r-suitability certificate.
pub fn topologically_slice_rsuitable(r: i64) -> (KnotExpr, SuitCert) {
    let copies = ceil_half(r + 1).max(1) as usize;
    let wh = suit_wh(&suit_positive_torus(2, 3).expect("trefoil")).expect("r = 1");
    let mut cert = wh.clone();
    for _ in 1..copies {
        cert = suit_sum(&cert, &wh);
    }
    let cert = suit_destab(&cert, r).expect("sum is at least r-suitable");
    (cert.expr.clone(), cert)
}

/// Facts every r-suitable knot satisfies.
pub fn consequences(c: &SuitCert) -> Vec<Consequence> {
    let mut out = vec![
        Consequence::TauSGenusLink,
        Consequence::GenusAtLeast(suitability_genus_floor(c.r)),
    ];
    if let Some(g) = c.g4 {
        out.push(Consequence::Witness(LegWitness::derived(c.r, 2 * g - 1 - c.r)));
    }
    if c.r >= 0 {
        out.push(Consequence::NotSlice);
    }
    out
}

/// Check a certificate against an upper bound on slice genus and, when the
/// genus is recorded, against the parity of the implied witness.
pub fn audit(c: &SuitCert, g4_hi: Option<i64>) -> Result<(), Error> {
    if let Some(h) = g4_hi {
        if c.r > 2 * h - 1 {
            return Err(Error::Precondition(format!(
                "{}-suitability of {} needs g4 >= {}, but g4 <= {h}",
                c.r,
                c.expr,
                suitability_genus_floor(c.r)
            )));
        }
    }
    if let Some(g) = c.g4 {
        if g < suitability_genus_floor(c.r) {
            return Err(Error::Precondition(format!("{}-suitable knot cannot have g4 = {g}", c.r)));
        }
    }
    Ok(())
}
