//! Knot expressions and pattern references.
//!
//! The derived `Ord` on [`KnotExpr`] is the canonical total order used to sort
//! connected-sum summands: variant tag first, then fields lexicographically.

use std::fmt;

/// A reference to a satellite pattern: a registry name, a twisted pattern, or
/// a composition `outer ⋆ inner`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternRef {
    Named(String),
    Twist(Box<PatternRef>, i64),
    Compose(Box<PatternRef>, Box<PatternRef>),
}

impl PatternRef {
    pub fn named(name: impl Into<String>) -> Self {
        PatternRef::Named(name.into())
    }

    pub fn twist(self, t: i64) -> Self {
        PatternRef::Twist(Box::new(self), t)
    }

    /// Composition with associativity normalized to a left-nested chain.
    pub fn compose(outer: PatternRef, inner: PatternRef) -> Self {
        match inner {
            PatternRef::Compose(a, b) => PatternRef::compose(PatternRef::compose(outer, *a), *b),
            inner => PatternRef::Compose(Box::new(outer), Box::new(inner)),
        }
    }

    /// Every registry name mentioned, left to right.
    pub fn names(&self) -> Vec<&str> {
        match self {
            PatternRef::Named(n) => vec![n.as_str()],
            PatternRef::Twist(p, _) => p.names(),
            PatternRef::Compose(a, b) => {
                let mut v = a.names();
                v.extend(b.names());
                v
            }
        }
    }
}

impl fmt::Display for PatternRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternRef::Named(n) => f.write_str(n),
            PatternRef::Twist(p, t) => write!(f, "(twist {p} {t})"),
            PatternRef::Compose(a, b) => write!(f, "(compose {a} {b})"),
        }
    }
}

/// A knot built from the unknot and positive torus knots by mirror,
/// reversal, connected sum, untwisted positive Whitehead doubling and
/// twisted satellites.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KnotExpr {
    Unknot,
    /// Positive torus knot, `2 <= p < q`, coprime.
    Torus { p: i64, q: i64 },
    Mirror(Box<KnotExpr>),
    Reverse(Box<KnotExpr>),
    Sum(Vec<KnotExpr>),
    Wh(Box<KnotExpr>),
    Sat {
        pattern: PatternRef,
        r: i64,
        companion: Box<KnotExpr>,
    },
}

impl KnotExpr {
    pub fn torus(p: i64, q: i64) -> Self {
        KnotExpr::Torus {
            p: p.min(q),
            q: p.max(q),
        }
    }

    /// The right-handed trefoil, T(2,3).
    pub fn rht() -> Self {
        KnotExpr::torus(2, 3)
    }

    pub fn mirror(self) -> Self {
        KnotExpr::Mirror(Box::new(self))
    }

    pub fn reverse(self) -> Self {
        KnotExpr::Reverse(Box::new(self))
    }

    /// The concordance inverse `-K = rev(mirror(K))`.
    pub fn inverse(self) -> Self {
        self.mirror().reverse()
    }

    pub fn wh(self) -> Self {
        KnotExpr::Wh(Box::new(self))
    }

    pub fn sum(items: Vec<KnotExpr>) -> Self {
        KnotExpr::Sum(items)
    }

    pub fn sat(pattern: PatternRef, r: i64, companion: KnotExpr) -> Self {
        KnotExpr::Sat {
            pattern,
            r,
            companion: Box::new(companion),
        }
    }

    /// `P_r` applied `i` times to `self`.
    pub fn iterate(self, pattern: &str, r: i64, i: usize) -> Self {
        (0..i).fold(self, |k, _| KnotExpr::sat(PatternRef::named(pattern), r, k))
    }

    pub fn children(&self) -> Vec<&KnotExpr> {
        match self {
            KnotExpr::Unknot | KnotExpr::Torus { .. } => vec![],
            KnotExpr::Mirror(k) | KnotExpr::Reverse(k) | KnotExpr::Wh(k) => vec![k],
            KnotExpr::Sum(xs) => xs.iter().collect(),
            KnotExpr::Sat { companion, .. } => vec![companion],
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Maximum nesting of `Sat` nodes along any root-to-leaf path.
    pub fn satellite_depth(&self) -> usize {
        let below = self
            .children()
            .iter()
            .map(|c| c.satellite_depth())
            .max()
            .unwrap_or(0);
        match self {
            KnotExpr::Sat { .. } => below + 1,
            _ => below,
        }
    }
}

impl fmt::Display for KnotExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnotExpr::Unknot => f.write_str("unknot"),
            KnotExpr::Torus { p, q } => write!(f, "(torus {p} {q})"),
            KnotExpr::Mirror(k) => write!(f, "(mirror {k})"),
            KnotExpr::Reverse(k) => write!(f, "(rev {k})"),
            KnotExpr::Sum(xs) => {
                f.write_str("(sum")?;
                for x in xs {
                    write!(f, " {x}")?;
                }
                f.write_str(")")
            }
            KnotExpr::Wh(k) => write!(f, "(wh {k})"),
            KnotExpr::Sat {
                pattern,
                r,
                companion,
            } => write!(f, "(sat {pattern} :r {r} {companion})"),
        }
    }
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
