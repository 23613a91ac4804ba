//! Peripheral-curve bookkeeping for iterated versus composed satellites.
//!
//! Each interface torus contributes a meridian and a longitude
//! identification between curve classes. Comparing two constructions means
//! reducing each interface to a normal form, substituting the meridian
//! identification into the longitude one, and comparing the resulting
//! relations in `H_1` of the interface.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

/// Which pattern exterior a curve lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Slot {
    P,
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Curve {
    /// Meridian of the pattern.
    Mi(Slot),
    /// Longitude of the pattern.
    Li(Slot),
    /// Meridian of the solid torus.
    Mo(Slot),
    /// Longitude of the solid torus.
    Lo(Slot),
    Mu,
    Lambda,
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Curve::Mi(s) => write!(f, "m_i({s:?})"),
            Curve::Li(s) => write!(f, "l_i({s:?})"),
            Curve::Mo(s) => write!(f, "m_o({s:?})"),
            Curve::Lo(s) => write!(f, "l_o({s:?})"),
            Curve::Mu => f.write_str("mu(K)"),
            Curve::Lambda => f.write_str("lambda(K)"),
        }
    }
}

/// Integer combination of curves.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CurveClass(BTreeMap<Curve, i64>);

impl CurveClass {
    pub fn zero() -> Self {
        CurveClass::default()
    }

    pub fn of(c: Curve) -> Self {
        CurveClass::zero().plus(1, c)
    }

    /// `self + k·c`
    pub fn plus(mut self, k: i64, c: Curve) -> Self {
        let e = self.0.entry(c).or_insert(0);
        *e += k;
        if *e == 0 {
            self.0.remove(&c);
        }
        self
    }

    pub fn add(mut self, k: i64, other: &CurveClass) -> Self {
        for (&c, &v) in &other.0 {
            self = self.plus(k * v, c);
        }
        self
    }

    pub fn coeff(&self, c: Curve) -> i64 {
        self.0.get(&c).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Curve, i64)> + '_ {
        self.0.iter().map(|(&c, &v)| (c, v))
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (n, (c, v)) in self.terms().enumerate() {
            let sign = if v < 0 { "-" } else { "+" };
            match (n, v.abs()) {
                (0, 1) if v < 0 => write!(f, "-{c}")?,
                (0, 1) => write!(f, "{c}")?,
                (0, a) if v < 0 => write!(f, "-{a}*{c}")?,
                (0, a) => write!(f, "{a}*{c}")?,
                (_, 1) => write!(f, " {sign} {c}")?,
                (_, a) => write!(f, " {sign} {a}*{c}")?,
            }
        }
        Ok(())
    }
}

/// `lhs ~ rhs`
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Identification {
    pub lhs: CurveClass,
    pub rhs: CurveClass,
}

impl Identification {
    fn relation(&self) -> CurveClass {
        self.lhs.clone().add(-1, &self.rhs)
    }
}

/// Meridian identification followed by longitude identification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Interface {
    pub name: &'static str,
    pub meridian: Identification,
    pub longitude: Identification,
}

impl Interface {
    /// The meridian relation, and the longitude relation with the outer
    /// meridian rewritten through the meridian identification.
    pub fn normal_form(&self) -> (CurveClass, CurveClass) {
        let m = self.meridian.relation();
        let l = self.longitude.relation();
        let Some((pivot, _)) = self.meridian.lhs.terms().next() else {
            return (m, l);
        };
        let unit = m.coeff(pivot);
        debug_assert!(unit.abs() == 1, "meridian identifications are primitive");
        let k = l.coeff(pivot) * unit;
        let l = l.add(-k, &m);
        (m, l)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GluingData {
    /// Companion side first.
    pub interfaces: Vec<Interface>,
    pub outer_longitude: CurveClass,
}

/// Untwisted longitude of `X_r(K)`: `l_i(X) - r·w²·m_i(X)`.
pub fn satellite_longitude(slot: Slot, w: i64, r: i64) -> CurveClass {
    CurveClass::of(Curve::Li(slot)).plus(-r * w * w, Curve::Mi(slot))
}

fn companion_interface(r: i64) -> Interface {
    Interface {
        name: "Q|K",
        meridian: Identification {
            lhs: CurveClass::of(Curve::Mo(Slot::Q)),
            rhs: CurveClass::of(Curve::Mu),
        },
        longitude: Identification {
            lhs: CurveClass::of(Curve::Lo(Slot::Q)).plus(-r, Curve::Mo(Slot::Q)),
            rhs: CurveClass::of(Curve::Lambda),
        },
    }
}

/// Gluings for `P_s(Q_r(K))` and for `(P_{s-r} * Q)_r(K)`.
pub fn build_gluings(wp: i64, wq: i64, r: i64, s: i64) -> (GluingData, GluingData) {
    let meridian = Identification {
        lhs: CurveClass::of(Curve::Mo(Slot::P)),
        rhs: CurveClass::of(Curve::Mi(Slot::Q)),
    };
    let iterated = GluingData {
        interfaces: vec![
            companion_interface(r),
            Interface {
                name: "P|Q",
                meridian: meridian.clone(),
                longitude: Identification {
                    lhs: CurveClass::of(Curve::Lo(Slot::P)).plus(-s, Curve::Mo(Slot::P)),
                    rhs: satellite_longitude(Slot::Q, wq, r),
                },
            },
        ],
        outer_longitude: satellite_longitude(Slot::P, wp, s),
    };
    // the composed pattern's solid torus is Q's, so only its inner
    // longitude feels the overall framing
    let t = s - r;
    let composed = GluingData {
        interfaces: vec![
            companion_interface(r),
            Interface {
                name: "P|Q",
                meridian,
                longitude: Identification {
                    lhs: CurveClass::of(Curve::Lo(Slot::P)).plus(-t, Curve::Mo(Slot::P)),
                    rhs: CurveClass::of(Curve::Li(Slot::Q)),
                },
            },
        ],
        outer_longitude: CurveClass::of(Curve::Li(Slot::P)).plus(-(r * wp * wp * wq * wq + t * wp * wp), Curve::Mi(Slot::P)),
    };
    (iterated, composed)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Comparison {
    Equal,
    /// Iterated minus composed relation at the first interface that differs.
    Mismatch { interface: &'static str, difference: CurveClass },
}

pub fn compare(a: &GluingData, b: &GluingData) -> Comparison {
    for (x, y) in a.interfaces.iter().zip(&b.interfaces) {
        let (xm, xl) = x.normal_form();
        let (ym, yl) = y.normal_form();
        if xm != ym {
            return Comparison::Mismatch {
                interface: x.name,
                difference: xm.add(-1, &ym),
            };
        }
        if xl != yl {
            return Comparison::Mismatch {
                interface: x.name,
                difference: xl.add(-1, &yl),
            };
        }
    }
    if a.outer_longitude != b.outer_longitude {
        return Comparison::Mismatch {
            interface: "outer",
            difference: a.outer_longitude.clone().add(-1, &b.outer_longitude),
        };
    }
    Comparison::Equal
}

pub fn compare_gluings(wp: i64, wq: i64, r: i64, s: i64) -> Comparison {
    let (a, b) = build_gluings(wp, wq, r, s);
    compare(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn longitudes() {
        assert_eq!(satellite_longitude(Slot::Q, 2, 3).coeff(Curve::Mi(Slot::Q)), -12);
        assert_eq!(satellite_longitude(Slot::Q, 1, 5).coeff(Curve::Mi(Slot::Q)), -5);
        assert_eq!(satellite_longitude(Slot::Q, 3, 0), CurveClass::of(Curve::Li(Slot::Q)));
        assert_eq!(satellite_longitude(Slot::Q, 2, 3).to_string(), "-12*m_i(Q) + l_i(Q)");
    }

    #[test]
    fn examples() {
        assert_eq!(compare_gluings(1, 1, 7, 7), Comparison::Equal);
        assert_eq!(compare_gluings(1, 2, 0, 0), Comparison::Equal);
        match compare_gluings(1, 2, 1, 1) {
            Comparison::Mismatch { interface, difference } => {
                assert_eq!(interface, "P|Q");
                assert_eq!(difference, CurveClass::zero().plus(3, Curve::Mi(Slot::Q)));
            }
            c => panic!("{c:?}"),
        }
    }

    #[test]
    fn normal_form_eliminates_meridian() {
        let (it, _) = build_gluings(1, 2, 1, 1);
        let (_, l) = it.interfaces[1].normal_form();
        assert_eq!(l.coeff(Curve::Mo(Slot::P)), 0);
    }
}
