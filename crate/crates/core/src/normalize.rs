//! Canonical forms for knot expressions.
//!
//! * Connected sums are flattened, unknot summands dropped, and the rest
//!   sorted by the expression order.
//! * Mirror and reversal are pushed toward the leaves. The unknot absorbs
//!   both, torus knots absorb reversal, and both distribute over sums. What
//!   remains is one of `Mirror(x)`, `Reverse(x)` or `Reverse(Mirror(x))`
//!   with `x` a torus knot (mirror only), Whitehead double or satellite.
//! * A nested satellite `Sat(P, s, Sat(Q, r, K))` collapses to
//!   `Sat(Compose(Twist(P, s - r), Q), r, K)` exactly when `w(Q) = ±1` or
//!   `r = 0`; otherwise it is left alone.

use crate::expr::{KnotExpr, PatternRef};
use crate::pattern::Registry;

/// Whether `P_s(Q_r(K))` may be rewritten as `(P_{s-r} ⋆ Q)_r(K)`.
pub fn collapse_allowed(w_inner: i64, r: i64) -> bool {
    w_inner.abs() == 1 || r == 0
}

/// Normalize an expression. Pattern names must resolve in `registry`;
/// unresolvable inner patterns simply block the satellite collapse.
pub fn normalize(e: &KnotExpr, registry: &Registry) -> KnotExpr {
    match e {
        KnotExpr::Unknot | KnotExpr::Torus { .. } => e.clone(),
        KnotExpr::Mirror(k) => mirror(normalize(k, registry)),
        KnotExpr::Reverse(k) => reverse(normalize(k, registry)),
        KnotExpr::Sum(xs) => sum(xs.iter().map(|x| normalize(x, registry)).collect()),
        KnotExpr::Wh(k) => KnotExpr::Wh(Box::new(normalize(k, registry))),
        KnotExpr::Sat {
            pattern,
            r: s,
            companion,
        } => {
            let inner = normalize(companion, registry);
            let pattern = normalize_pattern(pattern);
            if let KnotExpr::Sat {
                pattern: q,
                r,
                companion: k,
            } = &inner
            {
                if let Ok(wq) = registry.winding(q) {
                    if collapse_allowed(wq, *r) {
                        let composed = PatternRef::compose(pattern.twist(s - r), q.clone());
                        return KnotExpr::Sat {
                            pattern: normalize_pattern(&composed),
                            r: *r,
                            companion: k.clone(),
                        };
                    }
                }
            }
            KnotExpr::Sat {
                pattern,
                r: *s,
                companion: Box::new(inner),
            }
        }
    }
}

/// Merge stacked twists and left-nest compositions.
pub fn normalize_pattern(p: &PatternRef) -> PatternRef {
    match p {
        PatternRef::Named(_) => p.clone(),
        PatternRef::Twist(inner, t) => match normalize_pattern(inner) {
            PatternRef::Twist(base, t0) => PatternRef::Twist(base, t0 + t),
            other => other.twist(*t),
        },
        PatternRef::Compose(a, b) => PatternRef::compose(normalize_pattern(a), normalize_pattern(b)),
    }
}

fn sum(items: Vec<KnotExpr>) -> KnotExpr {
    let mut flat = Vec::with_capacity(items.len());
    for x in items {
        match x {
            KnotExpr::Sum(inner) => flat.extend(inner),
            KnotExpr::Unknot => {}
            other => flat.push(other),
        }
    }
    flat.retain(|x| *x != KnotExpr::Unknot);
    flat.sort();
    match flat.len() {
        0 => KnotExpr::Unknot,
        1 => flat.pop().unwrap(),
        _ => KnotExpr::Sum(flat),
    }
}

/// Mirror of an already-normalized expression.
fn mirror(n: KnotExpr) -> KnotExpr {
    match n {
        KnotExpr::Unknot => KnotExpr::Unknot,
        KnotExpr::Mirror(x) => *x,
        KnotExpr::Reverse(x) => reverse(mirror(*x)),
        KnotExpr::Sum(xs) => sum(xs.into_iter().map(mirror).collect()),
        other => KnotExpr::Mirror(Box::new(other)),
    }
}

/// Reverse of an already-normalized expression.
fn reverse(n: KnotExpr) -> KnotExpr {
    match n {
        KnotExpr::Unknot => KnotExpr::Unknot,
        t @ KnotExpr::Torus { .. } => t,
        KnotExpr::Reverse(x) => *x,
        KnotExpr::Sum(xs) => sum(xs.into_iter().map(reverse).collect()),
        KnotExpr::Mirror(x) => match *x {
            t @ KnotExpr::Torus { .. } => KnotExpr::Mirror(Box::new(t)),
            x => KnotExpr::Reverse(Box::new(KnotExpr::Mirror(Box::new(x)))),
        },
        other => KnotExpr::Reverse(Box::new(other)),
    }
}

/// Lexicographic termination measure: satellite nesting depth, then the
/// number of adjacent out-of-order or nested summand positions.
pub fn measure(e: &KnotExpr) -> (usize, usize) {
    fn disorder(e: &KnotExpr) -> usize {
        let own = match e {
            KnotExpr::Sum(xs) => {
                xs.windows(2).filter(|w| w[0] > w[1]).count()
                    + xs
                        .iter()
                        .filter(|x| matches!(x, KnotExpr::Sum(_) | KnotExpr::Unknot))
                        .count()
            }
            _ => 0,
        };
        own + e.children().iter().map(|c| disorder(c)).sum::<usize>()
    }
    (e.satellite_depth(), disorder(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::PatternDatum;
    use std::collections::BTreeMap;

    fn bare(name: &str, w: i64) -> PatternDatum {
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

    fn reg_with_w2() -> Registry {
        let mut items: Vec<PatternDatum> = Registry::builtin().patterns().cloned().collect();
        items.push(bare("q_w2", 2));
        items.push(bare("p", 1));
        Registry::from_patterns(items).unwrap()
    }

    #[test]
    fn mazur_iterate_collapses() {
        let reg = Registry::builtin();
        let k = KnotExpr::rht();
        let e = k.clone().iterate("mazur", 5, 2);
        let expected = KnotExpr::sat(
            PatternRef::compose(PatternRef::named("mazur").twist(0), PatternRef::named("mazur")),
            5,
            k,
        );
        assert_eq!(normalize(&e, &reg), expected);
    }

    #[test]
    fn winding_two_blocks_collapse() {
        let reg = reg_with_w2();
        let inner = KnotExpr::sat(PatternRef::named("q_w2"), 1, KnotExpr::rht());
        let e = KnotExpr::sat(PatternRef::named("p"), 3, inner);
        assert_eq!(normalize(&e, &reg), e);
        // r = 0 permits it
        let inner0 = KnotExpr::sat(PatternRef::named("q_w2"), 0, KnotExpr::rht());
        let e0 = KnotExpr::sat(PatternRef::named("p"), 3, inner0);
        match normalize(&e0, &reg) {
            KnotExpr::Sat { pattern, r, .. } => {
                assert_eq!(r, 0);
                assert_eq!(
                    pattern,
                    PatternRef::compose(PatternRef::named("p").twist(3), PatternRef::named("q_w2"))
                );
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn collapse_criterion_exhaustive() {
        // every w in [-3,3], r in [-3,3]: collapse iff |w| = 1 or r = 0
        for w in -3i64..=3 {
            let mut items: Vec<PatternDatum> = Registry::builtin().patterns().cloned().collect();
            items.push(bare("q", w));
            let reg = Registry::from_patterns(items).unwrap();
            for r in -3..=3 {
                for s in -3..=3 {
                    let inner = KnotExpr::sat(PatternRef::named("q"), r, KnotExpr::rht());
                    let e = KnotExpr::sat(PatternRef::named("mazur"), s, inner);
                    let n = normalize(&e, &reg);
                    let collapsed = n.satellite_depth() == 1;
                    assert_eq!(collapsed, w.abs() == 1 || r == 0, "w={w} r={r} s={s}");
                }
            }
        }
    }

    #[test]
    fn sums() {
        let reg = Registry::builtin();
        let e = KnotExpr::sum(vec![KnotExpr::Unknot, KnotExpr::rht()]);
        assert_eq!(normalize(&e, &reg), KnotExpr::rht());
        let nested = KnotExpr::sum(vec![
            KnotExpr::torus(2, 5),
            KnotExpr::sum(vec![KnotExpr::rht(), KnotExpr::Unknot]),
            KnotExpr::rht().wh(),
        ]);
        assert_eq!(
            normalize(&nested, &reg),
            KnotExpr::Sum(vec![KnotExpr::rht(), KnotExpr::torus(2, 5), KnotExpr::rht().wh()])
        );
        assert_eq!(
            normalize(&KnotExpr::sum(vec![KnotExpr::Unknot, KnotExpr::Unknot]), &reg),
            KnotExpr::Unknot
        );
    }

    #[test]
    fn mirror_and_reverse() {
        let reg = Registry::builtin();
        let t = KnotExpr::rht();
        assert_eq!(normalize(&t.clone().reverse(), &reg), t);
        assert_eq!(normalize(&t.clone().mirror().mirror(), &reg), t);
        assert_eq!(normalize(&t.clone().inverse(), &reg), t.clone().mirror());
        let w = t.clone().wh();
        assert_eq!(
            normalize(&w.clone().reverse().mirror(), &reg),
            w.clone().mirror().reverse()
        );
        assert_eq!(normalize(&w.clone().inverse().inverse(), &reg), w);
        let s = KnotExpr::sum(vec![t.clone(), w.clone()]).inverse();
        assert_eq!(
            normalize(&s, &reg),
            KnotExpr::Sum(vec![t.mirror(), w.mirror().reverse()])
        );
        assert_eq!(normalize(&KnotExpr::Unknot.inverse(), &reg), KnotExpr::Unknot);
    }

    #[test]
    fn pattern_normalization() {
        let p = PatternRef::named("a").twist(2).twist(-2);
        assert_eq!(normalize_pattern(&p), PatternRef::named("a").twist(0));
    }

    #[test]
    fn measure_drops_to_normal_form() {
        let reg = Registry::builtin();
        let e = KnotExpr::sum(vec![
            KnotExpr::rht().wh().iterate("mazur", 1, 3),
            KnotExpr::sum(vec![KnotExpr::torus(2, 5), KnotExpr::Unknot]),
        ]);
        let n = normalize(&e, &reg);
        assert!(measure(&n) < measure(&e));
        assert_eq!(measure(&n).1, 0);
    }
}
