//! Pattern data and the pattern registry.
//!
//! A registry is a JSON array of pattern objects with keys `name, w, n_geom,
//! g4_lo, g4_hi, leg_pairs, tilde_slice, tilde_ribbon, meridian_ng,
//! tilde_twists`. Optional values are `null`; unknown data is never read as
//! zero.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::alexander::LaurentPoly;
use crate::expr::PatternRef;
use crate::Error;

const BUILTIN_REGISTRY: &str = include_str!("../fixtures/registry.json");

/// What is known about the knot `P_t(U)` for one twist value `t`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TildeInfo {
    pub slice: Option<bool>,
    pub ribbon: Option<bool>,
    pub alexander: Option<LaurentPoly>,
}

/// Certified data for one pattern in a solid torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternDatum {
    pub name: String,
    /// Algebraic winding number.
    pub w: i64,
    /// Geometric winding number.
    pub n_geom: Option<i64>,
    /// Bounds on the pattern slice genus.
    pub g4_lo: Option<i64>,
    pub g4_hi: Option<i64>,
    /// Certified `(tb, rot)` pairs of Legendrian diagrams of the pattern.
    pub leg_pairs: Vec<(i64, i64)>,
    pub tilde_slice: Option<bool>,
    pub tilde_ribbon: Option<bool>,
    /// Meridian of the pattern lies in the subgroup normally generated by
    /// the meridian of the solid torus.
    pub meridian_ng: Option<bool>,
    /// Per-twist data for `P_t(U)`, keyed by `t`.
    pub tilde_twists: BTreeMap<i64, TildeInfo>,
}

/// `tb` and `rot` of a pattern diagram have equal parity iff `w` is odd.
pub fn leg_pair_parity_ok(w: i64, tb: i64, rot: i64) -> bool {
    ((tb + rot).rem_euclid(2) == 0) == (w.rem_euclid(2) == 1)
}

impl PatternDatum {
    /// Exact pattern slice genus, if the bounds collapse.
    pub fn g4_exact(&self) -> Option<i64> {
        match (self.g4_lo, self.g4_hi) {
            (Some(lo), Some(hi)) if lo == hi => Some(lo),
            _ => None,
        }
    }

    pub fn tilde_twist(&self, t: i64) -> Option<&TildeInfo> {
        self.tilde_twists.get(&t)
    }

    pub fn is_winding_one(&self) -> bool {
        self.w == 1
    }

    /// Check every structural invariant, returning the first violation.
    pub fn validate(&self) -> Result<(), String> {
        let name = &self.name;
        if name.is_empty()
            || !name
                .chars()
                .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        {
            return Err(format!("pattern name `{name}` must match [a-z0-9_]+"));
        }
        if self.tilde_ribbon == Some(true) && self.tilde_slice == Some(false) {
            return Err(format!("{name}: tilde ribbon but not slice"));
        }
        if let Some(n) = self.n_geom {
            if n < 1 || n < self.w.abs() {
                return Err(format!(
                    "{name}: geometric winding number {n} below |w| = {}",
                    self.w.abs()
                ));
            }
        }
        if let Some(lo) = self.g4_lo {
            if lo < 0 {
                return Err(format!("{name}: negative pattern slice genus"));
            }
        }
        if let (Some(lo), Some(hi)) = (self.g4_lo, self.g4_hi) {
            if lo > hi {
                return Err(format!("{name}: g4 bounds [{lo}, {hi}] are empty"));
            }
        }
        for &(tb, rot) in &self.leg_pairs {
            if !leg_pair_parity_ok(self.w, tb, rot) {
                return Err(format!(
                    "{name}: Legendrian pair (tb={tb}, rot={rot}) has the wrong parity for w={}",
                    self.w
                ));
            }
        }
        for (t, info) in &self.tilde_twists {
            if info.ribbon == Some(true) && info.slice == Some(false) {
                return Err(format!("{name}: P_{t}(U) ribbon but not slice"));
            }
            if let Some(a) = &info.alexander {
                if !a.is_symmetric() || a.eval(1) != 1 {
                    return Err(format!("{name}: Alexander polynomial of P_{t}(U) not normalized"));
                }
            }
        }
        if let Some(zero) = self.tilde_twists.get(&0) {
            let clash = |a: Option<bool>, b: Option<bool>| matches!((a, b), (Some(x), Some(y)) if x != y);
            if clash(zero.slice, self.tilde_slice) || clash(zero.ribbon, self.tilde_ribbon) {
                return Err(format!("{name}: twist-0 entry disagrees with tilde flags"));
            }
        }
        Ok(())
    }
}

/// The pattern with `t` extra full twists.
///
/// Winding numbers and pattern slice genus survive twisting; tilde flags are
/// re-read from the data recorded for `P_t(U)` and Legendrian pairs are
/// dropped.
pub fn twist_pattern(p: &PatternDatum, t: i64) -> PatternDatum {
    if t == 0 {
        return p.clone();
    }
    let shifted: BTreeMap<i64, TildeInfo> = p
        .tilde_twists
        .iter()
        .map(|(s, info)| (s - t, info.clone()))
        .collect();
    let zero = shifted.get(&0).cloned().unwrap_or_default();
    PatternDatum {
        name: PatternRef::named(p.name.clone()).twist(t).to_string(),
        w: p.w,
        n_geom: p.n_geom,
        g4_lo: p.g4_lo,
        g4_hi: p.g4_hi,
        leg_pairs: vec![],
        tilde_slice: zero.slice,
        tilde_ribbon: zero.ribbon,
        // twisting is a homeomorphism of the solid torus fixing both meridians
        meridian_ng: p.meridian_ng,
        tilde_twists: shifted,
    }
}

/// The composed pattern `P ⋆ Q`. Only the winding number is determined.
pub fn compose_patterns(p: &PatternDatum, q: &PatternDatum) -> PatternDatum {
    PatternDatum {
        name: format!("(compose {} {})", p.name, q.name),
        w: p.w * q.w,
        n_geom: None,
        g4_lo: None,
        g4_hi: None,
        leg_pairs: vec![],
        tilde_slice: None,
        tilde_ribbon: None,
        meridian_ng: None,
        tilde_twists: BTreeMap::new(),
    }
}

#[derive(Serialize, Deserialize)]
struct RawTilde {
    t: i64,
    slice: Option<bool>,
    ribbon: Option<bool>,
    alexander: Option<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPattern {
    name: String,
    w: i64,
    n_geom: Option<i64>,
    g4_lo: Option<i64>,
    g4_hi: Option<i64>,
    leg_pairs: Vec<(i64, i64)>,
    tilde_slice: Option<bool>,
    tilde_ribbon: Option<bool>,
    meridian_ng: Option<bool>,
    tilde_twists: Vec<RawTilde>,
}

impl RawPattern {
    fn into_datum(self) -> Result<PatternDatum, String> {
        let mut tilde_twists = BTreeMap::new();
        for raw in self.tilde_twists {
            let alexander = match raw.alexander {
                None => None,
                Some(c) => Some(
                    LaurentPoly::new(0, c)
                        .normalized_alexander()
                        .ok_or_else(|| format!("{}: invalid Alexander polynomial at t={}", self.name, raw.t))?,
                ),
            };
            let info = TildeInfo {
                slice: raw.slice,
                ribbon: raw.ribbon,
                alexander,
            };
            if tilde_twists.insert(raw.t, info).is_some() {
                return Err(format!("{}: duplicate tilde_twists entry t={}", self.name, raw.t));
            }
        }
        Ok(PatternDatum {
            name: self.name,
            w: self.w,
            n_geom: self.n_geom,
            g4_lo: self.g4_lo,
            g4_hi: self.g4_hi,
            leg_pairs: self.leg_pairs,
            tilde_slice: self.tilde_slice,
            tilde_ribbon: self.tilde_ribbon,
            meridian_ng: self.meridian_ng,
            tilde_twists,
        })
    }

    fn from_datum(d: &PatternDatum) -> RawPattern {
        RawPattern {
            name: d.name.clone(),
            w: d.w,
            n_geom: d.n_geom,
            g4_lo: d.g4_lo,
            g4_hi: d.g4_hi,
            leg_pairs: d.leg_pairs.clone(),
            tilde_slice: d.tilde_slice,
            tilde_ribbon: d.tilde_ribbon,
            meridian_ng: d.meridian_ng,
            tilde_twists: d
                .tilde_twists
                .iter()
                .map(|(t, info)| RawTilde {
                    t: *t,
                    slice: info.slice,
                    ribbon: info.ribbon,
                    alexander: info.alexander.as_ref().map(|a| {
                        (a.min_exp()..=a.max_exp()).map(|e| a.coeff(e)).collect()
                    }),
                })
                .collect(),
        }
    }
}

/// Read-only table of named patterns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Registry {
    patterns: BTreeMap<String, PatternDatum>,
}

impl Registry {
    /// The registry shipped with the crate.
    pub fn builtin() -> Registry {
        Registry::from_json(BUILTIN_REGISTRY).expect("builtin registry is valid")
    }

    pub fn load(path: &Path) -> Result<Registry, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Registry(format!("{}: {e}", path.display())))?;
        Registry::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Registry, Error> {
        let raw: Vec<RawPattern> =
            serde_json::from_str(text).map_err(|e| Error::Registry(e.to_string()))?;
        let mut patterns = BTreeMap::new();
        for r in raw {
            let d = r.into_datum().map_err(Error::Registry)?;
            d.validate().map_err(Error::Registry)?;
            if patterns.contains_key(&d.name) {
                return Err(Error::Registry(format!("duplicate pattern `{}`", d.name)));
            }
            patterns.insert(d.name.clone(), d);
        }
        Ok(Registry { patterns })
    }

    /// Build from in-memory data, validating each entry.
    pub fn from_patterns(items: impl IntoIterator<Item = PatternDatum>) -> Result<Registry, Error> {
        let mut patterns = BTreeMap::new();
        for d in items {
            d.validate().map_err(Error::Registry)?;
            patterns.insert(d.name.clone(), d);
        }
        Ok(Registry { patterns })
    }

    pub fn to_json(&self) -> String {
        let raw: Vec<RawPattern> = self.patterns.values().map(RawPattern::from_datum).collect();
        serde_json::to_string_pretty(&raw).expect("registry serializes")
    }

    pub fn get(&self, name: &str) -> Option<&PatternDatum> {
        self.patterns.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.patterns.keys().map(String::as_str)
    }

    pub fn patterns(&self) -> impl Iterator<Item = &PatternDatum> {
        self.patterns.values()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.patterns.contains_key(name)
    }

    /// Resolve a pattern reference to its datum.
    pub fn resolve(&self, p: &PatternRef) -> Result<PatternDatum, Error> {
        match p {
            PatternRef::Named(n) => self
                .get(n)
                .cloned()
                .ok_or_else(|| Error::UnknownPattern(n.clone())),
            PatternRef::Twist(inner, t) => Ok(twist_pattern(&self.resolve(inner)?, *t)),
            PatternRef::Compose(a, b) => Ok(compose_patterns(&self.resolve(a)?, &self.resolve(b)?)),
        }
    }

    /// Winding number of a reference without building the full datum.
    pub fn winding(&self, p: &PatternRef) -> Result<i64, Error> {
        match p {
            PatternRef::Named(n) => self
                .get(n)
                .map(|d| d.w)
                .ok_or_else(|| Error::UnknownPattern(n.clone())),
            PatternRef::Twist(inner, _) => self.winding(inner),
            PatternRef::Compose(a, b) => Ok(self.winding(a)? * self.winding(b)?),
        }
    }
}

impl Default for Registry {
    fn default() -> Self {
        Registry::builtin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(name: &str, w: i64) -> PatternDatum {
        PatternDatum {
            name: name.into(),
            w,
            n_geom: None,
            g4_lo: None,
            g4_hi: None,
            leg_pairs: vec![],
            tilde_slice: None,
            tilde_ribbon: None,
            meridian_ng: None,
            tilde_twists: BTreeMap::new(),
        }
    }

    #[test]
    fn builtin_fixtures() {
        let reg = Registry::builtin();
        let names: Vec<_> = reg.names().collect();
        assert_eq!(names, vec!["core", "mazur", "r0", "r1", "r2"]);
        let m = reg.get("mazur").unwrap();
        assert_eq!((m.w, m.n_geom, m.g4_exact()), (1, Some(3), Some(1)));
        assert_eq!(m.leg_pairs, vec![(2, 0), (1, 1), (0, 2)]);
        let core = reg.get("core").unwrap();
        assert_eq!(core.g4_exact(), Some(0));
        for m in ["r0", "r1", "r2"] {
            let d = reg.get(m).unwrap();
            assert_eq!(d.w, 1);
            assert_eq!(d.g4_lo, None);
            assert_eq!(d.meridian_ng, Some(true));
            assert_eq!(d.tilde_ribbon, Some(true));
        }
    }

    #[test]
    fn json_round_trip() {
        let reg = Registry::builtin();
        let again = Registry::from_json(&reg.to_json()).unwrap();
        assert_eq!(reg, again);
    }

    #[test]
    fn parity_rule() {
        assert!(leg_pair_parity_ok(1, 1, 1));
        assert!(leg_pair_parity_ok(1, 0, 2));
        assert!(!leg_pair_parity_ok(1, -1, 0));
        assert!(leg_pair_parity_ok(2, -1, 0));
        assert!(!leg_pair_parity_ok(2, 0, 0));
        let mut bad = datum("bad", 1);
        bad.leg_pairs = vec![(1, 0)];
        assert!(bad.validate().unwrap_err().contains("parity"));
    }

    #[test]
    fn validation_failures() {
        let mut d = datum("x", 3);
        d.n_geom = Some(1);
        assert!(d.validate().is_err());
        let mut d = datum("x", 1);
        d.tilde_ribbon = Some(true);
        d.tilde_slice = Some(false);
        assert!(d.validate().is_err());
        let d = datum("Bad", 1);
        assert!(d.validate().is_err());
        let text = r#"[{"name":"a","w":1,"n_geom":null,"g4_lo":null,"g4_hi":null,"leg_pairs":[],
            "tilde_slice":null,"tilde_ribbon":null,"meridian_ng":null,"tilde_twists":[],"extra":1}]"#;
        assert!(Registry::from_json(text).is_err());
    }

    #[test]
    fn compose_multiplies_winding() {
        let reg = Registry::builtin();
        let m = reg.get("mazur").unwrap();
        assert_eq!(compose_patterns(m, m).w, 1);
        let c = compose_patterns(&datum("p", 2), &datum("q", -3));
        assert_eq!(c.w, -6);
        assert_eq!(c.g4_lo, None);
        assert!(c.leg_pairs.is_empty());
        let core = reg.get("core").unwrap();
        assert_eq!(compose_patterns(core, &datum("q", 5)).w, 5);
    }

    #[test]
    fn twisting() {
        let reg = Registry::builtin();
        let m = reg.get("mazur").unwrap();
        assert_eq!(&twist_pattern(m, 0), m);
        let t2 = twist_pattern(m, 2);
        assert_eq!(t2.tilde_slice, None);
        assert_eq!(t2.tilde_ribbon, None);
        assert_eq!((t2.w, t2.n_geom, t2.g4_lo, t2.g4_hi), (1, Some(3), Some(1), Some(1)));
        assert!(t2.leg_pairs.is_empty());
        let r1 = twist_pattern(reg.get("r1").unwrap(), 3);
        assert_eq!((r1.w, r1.tilde_slice, r1.tilde_ribbon), (1, None, None));
        // twisting back recovers the twist-0 entry
        let back = twist_pattern(&t2, -2);
        assert_eq!(back.tilde_slice, Some(true));
    }

    #[test]
    fn resolve_references() {
        let reg = Registry::builtin();
        let p = PatternRef::compose(PatternRef::named("mazur").twist(0), PatternRef::named("r1"));
        assert_eq!(reg.winding(&p).unwrap(), 1);
        assert_eq!(reg.resolve(&p).unwrap().w, 1);
        assert!(matches!(
            reg.resolve(&PatternRef::named("nope")),
            Err(Error::UnknownPattern(_))
        ));
    }
}
