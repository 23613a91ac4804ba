//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so every line is printed; exits non-zero if any check fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shakecert::alexander::{alexander, LaurentPoly};
use shakecert::engine::{propagate, ExternalFact, Inv, Order, Query};
use shakecert::exec::Exec;
use shakecert::family::{closed_form, per_term, Range};
use shakecert::front::{
    builtin_front, compatible_orientation, connect_sum_front, random_front, stabilize_front, torus_front,
    OrientedFront,
};
use shakecert::gluing::{compare_gluings, Comparison, Curve, CurveClass, Slot};
use shakecert::legendrian::{reachable, Sign};
use shakecert::shake::{compose_11, glue_general, satellite_shake, ShakeCert};
use shakecert::suitability::{audit, topologically_slice_rsuitable};
use shakecert::verdict::{shake_slice_verdict, Verdict};
use shakecert::{parse_expr, Error, KnotExpr, Registry};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn corpus(reg: &Registry) -> Vec<KnotExpr> {
    include_str!("../fixtures/corpus.txt")
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| parse_expr(l, reg).unwrap_or_else(|e| panic!("corpus line `{l}`: {e}")))
        .collect()
}

fn torus_table() -> Check {
    let reg = Registry::builtin();
    let start = Instant::now();
    for (q, want) in [(3, 1), (5, 2), (7, 3)] {
        let st = propagate(&KnotExpr::torus(2, q), &reg, &Query::at([0])).map_err(|e| e.to_string())?;
        let got = st.interval(st.root(), Inv::Gsh(0)).and_then(|i| i.exact());
        ensure!(got == Some(want), "gsh^0(T(2,{q})) = {got:?}, want {want}");
    }
    let mut checked = 0;
    for p in 3..=7i64 {
        for q in (p + 1)..=7 {
            if shakecert_gcd(p, q) != 1 {
                continue;
            }
            let g = (p - 1) * (q - 1) / 2;
            let rs: Vec<i64> = (-20..(2 * g - 1)).collect();
            let st = propagate(&KnotExpr::torus(p, q), &reg, &Query::at(rs.clone())).map_err(|e| e.to_string())?;
            for r in rs {
                let got = st.interval(st.root(), Inv::Gsh(r)).and_then(|i| i.exact());
                ensure!(got == Some(g), "gsh^{r}(T({p},{q})) = {got:?}, want {g}");
                checked += 1;
            }
        }
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(1), "took {t:?}");
    Ok(format!("{checked} (knot, r) pairs exact, {t:?}"))
}

fn shakecert_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        shakecert_gcd(b, a % b)
    }
}

fn mazur_tables() -> Check {
    let reg = Registry::builtin();
    let base = KnotExpr::rht().wh();
    let mut rows = 0;
    for r in -3..=1 {
        let closed = closed_form(&reg, "mazur", &base, r, 8).map_err(|e| format!("r={r}: {e}"))?;
        let terms = per_term(&reg, "mazur", &base, r, 8, Exec::default()).map_err(|e| format!("r={r}: {e}"))?;
        for (c, t) in closed.iter().zip(&terms) {
            let i = c.i as i64;
            let want = (Range::exact(1 + i), Range::exact(1 + i), Range::exact(2 + 2 * i));
            ensure!((c.g4, c.tau, c.s) == want, "closed r={r} i={i}: {c:?}");
            ensure!((t.g4, t.tau, t.s) == want, "per-term r={r} i={i}: {t:?}");
            if r <= 0 {
                ensure!(c.gsh_r == Some(Range::exact(1 + i)), "closed gsh r={r} i={i}: {:?}", c.gsh_r);
                ensure!(t.gsh_r == Some(Range::exact(1 + i)), "per-term gsh r={r} i={i}: {:?}", t.gsh_r);
            }
            rows += 1;
        }
    }
    Ok(format!("{rows} rows, closed form and per-term agree"))
}

fn topologically_slice() -> Check {
    let reg = Registry::builtin();
    for r in 0..=6i64 {
        let copies = ((r + 2) / 2).max(1);
        let (e, cert) = topologically_slice_rsuitable(r);
        ensure!(cert.r == r && cert.g4 == Some(copies), "r={r}: certificate {cert:?}");
        let expected = if copies == 1 {
            KnotExpr::rht().wh()
        } else {
            KnotExpr::Sum(vec![KnotExpr::rht().wh(); copies as usize])
        };
        ensure!(e == expected, "r={r}: built {e}");
        let st = propagate(&e, &reg, &Query::at([r])).map_err(|x| x.to_string())?;
        let f = st.facts(st.root());
        ensure!(f.g4.exact() == Some(copies), "r={r}: g4 {}", f.g4);
        audit(&cert, f.g4.hi()).map_err(|x| x.to_string())?;
        ensure!(f.cert.is_some_and(|c| c.r >= r), "r={r}: engine certificate {:?}", f.cert);
        let target = (r, 2 * copies - 1 - r);
        ensure!(
            f.witnesses.iter().any(|w| reachable(w.leg, target)),
            "r={r}: no witness reaches {target:?}"
        );
        ensure!(alexander(&e, &reg) == Some(LaurentPoly::one()), "r={r}: Alexander polynomial is not 1");
    }
    Ok("r = 0..6 certified with exact g4".into())
}

fn composition_criterion() -> Check {
    let mut n = 0;
    for wp in (-3..=3).filter(|&w| w != 0) {
        for wq in (-3..=3i64).filter(|&w| w != 0) {
            for r in -3..=3i64 {
                for s in -3..=3i64 {
                    let got = compare_gluings(wp, wq, r, s);
                    let expect_equal = wq.abs() == 1 || r == 0;
                    ensure!(
                        (got == Comparison::Equal) == expect_equal,
                        "w(P)={wp} w(Q)={wq} r={r} s={s}: {got:?}"
                    );
                    if let Comparison::Mismatch { difference, .. } = &got {
                        let want = CurveClass::zero().plus(r * (wq * wq - 1), Curve::Mi(Slot::Q));
                        ensure!(*difference == want, "w(Q)={wq} r={r} s={s}: difference {difference}");
                    }
                    n += 1;
                }
            }
        }
    }
    Ok(format!("{n} cases"))
}

fn slot_count(f: &OrientedFront, event: usize) -> usize {
    (1..).take_while(|&s| f.strand_rightward(event, s).is_some()).count()
}

fn oracle() -> Check {
    let start = Instant::now();
    let fixed = [
        ("unknot", builtin_front("unknot"), (-1, 0)),
        ("rht", builtin_front("rht"), (1, 0)),
        ("t25", builtin_front("t25"), (3, 0)),
        ("T(2,3)", torus_front(2, 3), (1, 0)),
        ("T(2,5)", torus_front(2, 5), (3, 0)),
    ];
    let mut fronts = Vec::new();
    for (name, f, want) in fixed {
        let f = f.map_err(|e| format!("{name}: {e}"))?;
        ensure!(f.tb_rot() == want, "{name}: {:?}, want {want:?}", f.tb_rot());
        fronts.push(f);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for seed in 0..600u64 {
        fronts.push(random_front(seed, rng.gen_range(2..=7)));
    }
    let (mut stabs, mut sums) = (0, 0);
    for (k, f) in fronts.iter().enumerate() {
        let (tb, rot) = f.tb_rot();
        ensure!((tb + rot).rem_euclid(2) == 1, "front {k} `{}`: tb + rot = {}", f.word, tb + rot);
        let after = rng.gen_range(0..f.word.events.len() - 1);
        let slot = rng.gen_range(1..=slot_count(f, after + 1));
        for (sign, d) in [(Sign::Plus, 1), (Sign::Minus, -1)] {
            let g = stabilize_front(f, sign, after, slot).map_err(|e| format!("front {k}: {e}"))?;
            ensure!(g.tb_rot() == (tb - 1, rot + d), "front {k} stabilized {sign:?}: {:?}", g.tb_rot());
            stabs += 1;
        }
        let other = &fronts[(k + 1) % fronts.len()];
        let o = compatible_orientation(f, other);
        let (tb2, rot2) = o.tb_rot();
        let s = connect_sum_front(f, &o).map_err(|e| format!("front {k}: {e}"))?;
        ensure!(s.tb_rot() == (tb + tb2 + 1, rot + rot2), "front {k} # next: {:?}", s.tb_rot());
        sums += 1;
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(5), "took {t:?}");
    Ok(format!("{} fronts, {stabs} stabilizations, {sums} sums, {t:?}", fronts.len()))
}

fn shake_arithmetic() -> Check {
    let reg = Registry::builtin();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (a, b, c) = (KnotExpr::rht(), KnotExpr::torus(2, 5), KnotExpr::torus(3, 4));
    for _ in 0..100 {
        let p = 2 * rng.gen_range(0..50u64) + 1;
        let m = 2 * rng.gen_range(0..50u64) + 1;
        let x = ShakeCert::external(a.clone(), b.clone(), 2, p, 1).map_err(|e| e.to_string())?;
        let y = ShakeCert::external(b.clone(), c.clone(), 2, m, 1).map_err(|e| e.to_string())?;
        let z = compose_11(&x, &y).map_err(|e| e.to_string())?;
        ensure!((z.p, z.q) == (p * m, 1), "({p},1) o ({m},1) = ({}, {})", z.p, z.q);
    }
    let mz = satellite_shake(reg.get("mazur").unwrap(), &a, 0).map_err(|e| e.to_string())?;
    ensure!((mz.p, mz.q) == (1, 3), "mazur gives ({}, {})", mz.p, mz.q);
    let mut cells = 0;
    for k in 0..3u64 {
        for l in 0..3u64 {
            for (pp, m) in [("core", 1u64), ("mazur", 3)] {
                for (qq, n) in [("core", 1u64), ("mazur", 3)] {
                    let sa = satellite_shake(reg.get(pp).unwrap(), &a, 0).map_err(|e| e.to_string())?;
                    let sb = satellite_shake(reg.get(qq).unwrap(), &b, 0).map_err(|e| e.to_string())?;
                    let s = ShakeCert::external(sa.left.clone(), sb.left.clone(), 0, 2 * k + 1, 2 * l + 1)
                        .map_err(|e| e.to_string())?;
                    let g = glue_general(&s, &sa, &sb).map_err(|e| e.to_string())?;
                    ensure!(
                        (g.p, g.q) == (m * (2 * k + 1), n * (2 * l + 1)),
                        "k={k} l={l} m={m} n={n}: ({}, {})",
                        g.p,
                        g.q
                    );
                    cells += 1;
                }
            }
        }
    }
    Ok(format!("100 compositions, mazur (1,3), {cells} gluings"))
}

fn verdicts() -> Check {
    let reg = Registry::builtin();
    for r in -5..=5 {
        let (v, _) = shake_slice_verdict(&KnotExpr::rht(), r, &reg, None, &[]).map_err(|e| e.to_string())?;
        ensure!(v.obstructions().iter().any(|o| o.reason == "Arf = 1"), "T(2,3) r={r}: {v}");
    }
    let mut patterns = 0;
    for p in reg.patterns().filter(|p| p.w == 1 && p.tilde_slice == Some(true)) {
        let e = parse_expr(&format!("(sat {} :r 0 (torus 2 5))", p.name), &reg).map_err(|e| e.to_string())?;
        let (v, _) = shake_slice_verdict(&e, 0, &reg, None, &[]).map_err(|e| e.to_string())?;
        ensure!(
            v.obstructions().iter().any(|o| o.reason.contains("tau")),
            "{}: no tau obstruction in {v}",
            p.name
        );
        patterns += 1;
    }
    for m in 0..=2 {
        for r in 1..=3 {
            let e = parse_expr(&format!("(sat r{m} :r {r} unknot)"), &reg).map_err(|e| e.to_string())?;
            let (v, _) = shake_slice_verdict(&e, r, &reg, None, &[]).map_err(|e| e.to_string())?;
            ensure!(matches!(v, Verdict::CertifiedModuloSpc4 { .. }), "K({r},{m}): {v}");
        }
    }
    Ok(format!("Arf on r = -5..5, tau on {patterns} patterns, 9 SPC4 certificates"))
}

fn engine_properties() -> Check {
    let reg = Registry::builtin();
    let exprs = corpus(&reg);
    ensure!(exprs.len() >= 30, "corpus has {} expressions", exprs.len());
    let rs = [-1, 0, 1, 2];
    let seeds: Vec<u64> = (0..50).collect();
    for e in &exprs {
        let base = propagate(e, &reg, &Query::at(rs)).map_err(|x| format!("{e}: {x}"))?;
        let want = base.values();
        let results = Exec::default().map(&seeds, |&seed| {
            let q = Query {
                rs: rs.to_vec(),
                order: Order::Shuffled(seed),
                ..Query::default()
            };
            propagate(e, &reg, &q).map(|st| st.values())
        });
        for (seed, got) in seeds.iter().zip(results) {
            let got = got.map_err(|x| format!("{e} seed {seed}: {x}"))?;
            ensure!(got == want, "{e}: order {seed} reached a different fixpoint");
        }
        for n in base.nodes() {
            for (inv, lo, hi) in base.values().into_iter().find(|v| v.expr == n.expr.to_string()).unwrap().intervals {
                if let (Some(lo), Some(hi)) = (lo, hi) {
                    ensure!(lo <= hi, "{}: {inv} = [{lo}, {hi}]", n.expr);
                }
            }
        }
        ensure!(
            base.iterations() <= base.iteration_bound(),
            "{e}: {} iterations, bound {}",
            base.iterations(),
            base.iteration_bound()
        );
    }
    let q = Query {
        externals: vec![ExternalFact::Suitable(KnotExpr::Unknot, 1)],
        ..Query::default()
    };
    match propagate(&KnotExpr::Unknot, &reg, &q) {
        Err(Error::Contradiction(c)) if c.lo_rules.contains(&"suitability-genus-bound") => {}
        other => return Err(format!("false suitability fact: {other:?}")),
    }
    Ok(format!("{} expressions x 50 orders confluent, contradiction raised", exprs.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("torus-knot shake genus table", torus_table),
        ("Mazur iterate tables", mazur_tables),
        ("topologically slice r-suitable sums", topologically_slice),
        ("composition criterion", composition_criterion),
        ("front oracle agreement", oracle),
        ("shake-witness arithmetic", shake_arithmetic),
        ("obstruction verdicts", verdicts),
        ("engine properties", engine_properties),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
