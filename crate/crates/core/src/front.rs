//! Rectilinear Legendrian front diagrams, used as a brute-force oracle for
//! the symbolic `(tb, rot)` calculus.
//!
//! A front is a left-to-right sequence of events acting on an ordered list
//! of strands, numbered from the top starting at 1:
//!
//! * `L i` opens a left cusp, inserting two strands directly below slot `i`
//!   (`i = 0` means at the top).
//! * `R i` closes the strands in slots `i` and `i + 1` with a right cusp.
//! * `X i` crosses the strands in slots `i` and `i + 1`.
//!
//! Strands between cusps are called arcs and are numbered in creation
//! order, upper arc of each left cusp first. At a crossing the strand that
//! descends (from slot `i` to `i + 1`) has lesser slope and is in front;
//! with that convention a crossing is positive exactly when both strands
//! point the same way in `x`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::legendrian::Sign;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Event {
    Left(usize),
    Right(usize),
    Cross(usize),
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Left(i) => write!(f, "L {i}"),
            Event::Right(i) => write!(f, "R {i}"),
            Event::Cross(i) => write!(f, "X {i}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FrontWord {
    pub events: Vec<Event>,
}

impl FrontWord {
    pub fn new(events: Vec<Event>) -> Self {
        FrontWord { events }
    }
}

impl fmt::Display for FrontWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.events {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for FrontWord {
    type Err = Error;

    /// One event per line; `#` starts a comment.
    fn from_str(text: &str) -> Result<Self, Error> {
        let mut events = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Error::Front(format!("line {}: cannot read event `{line}`", n + 1));
            let mut parts = line.split_whitespace();
            let (Some(kind), Some(idx), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(bad());
            };
            let i: usize = idx.parse().map_err(|_| bad())?;
            events.push(match kind {
                "L" => Event::Left(i),
                "R" => Event::Right(i),
                "X" => Event::Cross(i),
                _ => return Err(bad()),
            });
        }
        Ok(FrontWord { events })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Cusp {
    event: usize,
    upper: usize,
    lower: usize,
    left: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Crossing {
    event: usize,
    over: usize,
    under: usize,
}

/// A validated single-component front with an orientation on every arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedFront {
    pub word: FrontWord,
    /// `rightward[a]` for each arc `a`.
    pub rightward: Vec<bool>,
    cusps: Vec<Cusp>,
    crossings: Vec<Crossing>,
    /// Arc occupying each slot just before each event.
    slots_before: Vec<Vec<usize>>,
}

struct Traced {
    arcs: usize,
    cusps: Vec<Cusp>,
    crossings: Vec<Crossing>,
    slots_before: Vec<Vec<usize>>,
}

fn trace(word: &FrontWord) -> Result<Traced, Error> {
    let mut slots: Vec<usize> = Vec::new();
    let mut arcs = 0;
    let mut cusps = Vec::new();
    let mut crossings = Vec::new();
    let mut slots_before = Vec::with_capacity(word.events.len());
    for (k, ev) in word.events.iter().enumerate() {
        slots_before.push(slots.clone());
        let n = slots.len();
        let invalid = |why: &str| Error::Front(format!("event {k} (`{ev}`): {why} with {n} strands"));
        match *ev {
            Event::Left(i) => {
                if i > n {
                    return Err(invalid("slot out of range"));
                }
                let (a, b) = (arcs, arcs + 1);
                arcs += 2;
                slots.splice(i..i, [a, b]);
                cusps.push(Cusp {
                    event: k,
                    upper: a,
                    lower: b,
                    left: true,
                });
            }
            Event::Right(i) => {
                if i < 1 || i + 1 > n {
                    return Err(invalid("slot out of range"));
                }
                let upper = slots[i - 1];
                let lower = slots[i];
                slots.drain(i - 1..=i);
                cusps.push(Cusp {
                    event: k,
                    upper,
                    lower,
                    left: false,
                });
            }
            Event::Cross(i) => {
                if i < 1 || i + 1 > n {
                    return Err(invalid("slot out of range"));
                }
                crossings.push(Crossing {
                    event: k,
                    over: slots[i - 1],
                    under: slots[i],
                });
                slots.swap(i - 1, i);
            }
        }
    }
    if !slots.is_empty() {
        return Err(Error::Front(format!("strand count ends at {}", slots.len())));
    }
    if arcs == 0 {
        return Err(Error::Front("empty front".into()));
    }
    Ok(Traced {
        arcs,
        cusps,
        crossings,
        slots_before,
    })
}

/// Orient each component, alternating direction across every cusp.
/// Returns the orientation and the number of components.
fn orient(arcs: usize, cusps: &[Cusp], seed_rightward: bool) -> (Vec<bool>, usize) {
    let mut nbrs = vec![Vec::with_capacity(2); arcs];
    for c in cusps {
        nbrs[c.upper].push(c.lower);
        nbrs[c.lower].push(c.upper);
    }
    let mut dir: Vec<Option<bool>> = vec![None; arcs];
    let mut components = 0;
    for start in 0..arcs {
        if dir[start].is_some() {
            continue;
        }
        components += 1;
        dir[start] = Some(seed_rightward);
        let mut stack = vec![start];
        while let Some(a) = stack.pop() {
            let d = dir[a].unwrap();
            for &b in &nbrs[a] {
                if dir[b].is_none() {
                    dir[b] = Some(!d);
                    stack.push(b);
                }
            }
        }
    }
    (dir.into_iter().map(|d| d.unwrap()).collect(), components)
}

/// Check a word and orient it with arc 0 pointing right.
pub fn validate(word: &FrontWord) -> Result<OrientedFront, Error> {
    let t = trace(word)?;
    let (rightward, components) = orient(t.arcs, &t.cusps, true);
    if components != 1 {
        return Err(Error::Front(format!("front has {components} components")));
    }
    Ok(OrientedFront {
        word: word.clone(),
        rightward,
        cusps: t.cusps,
        crossings: t.crossings,
        slots_before: t.slots_before,
    })
}

impl OrientedFront {
    /// Same front with the opposite orientation.
    pub fn reversed(&self) -> OrientedFront {
        let mut f = self.clone();
        for d in &mut f.rightward {
            *d = !*d;
        }
        f
    }

    pub fn writhe(&self) -> i64 {
        self.crossings
            .iter()
            .map(|c| if self.rightward[c.over] == self.rightward[c.under] { 1 } else { -1 })
            .sum()
    }

    pub fn right_cusps(&self) -> usize {
        self.cusps.iter().filter(|c| !c.left).count()
    }

    /// Number of arcs (strand segments between cusps).
    pub fn arcs(&self) -> usize {
        self.rightward.len()
    }

    /// Direction of the strand in `slot` just before event `event`.
    pub fn strand_rightward(&self, event: usize, slot: usize) -> Option<bool> {
        let slots = self.slots_before.get(event)?;
        slots.get(slot.checked_sub(1)?).map(|&a| self.rightward[a])
    }

    /// `(tb, rot)`: `tb = writhe - #right cusps`, `rot = (down - up) / 2`.
    pub fn tb_rot(&self) -> (i64, i64) {
        let tb = self.writhe() - self.right_cusps() as i64;
        let mut down = 0i64;
        let mut up = 0i64;
        for c in &self.cusps {
            // traversed from the upper branch to the lower one
            let is_down = if c.left {
                !self.rightward[c.upper]
            } else {
                self.rightward[c.upper]
            };
            if is_down {
                down += 1;
            } else {
                up += 1;
            }
        }
        debug_assert_eq!((down - up) % 2, 0);
        (tb, (down - up) / 2)
    }
}

pub fn tb_rot(f: &OrientedFront) -> (i64, i64) {
    f.tb_rot()
}

/// Insert a zigzag into the strand in `slot` just after event `after`.
/// A positive stabilization raises the rotation number by one.
pub fn stabilize_front(f: &OrientedFront, sign: Sign, after: usize, slot: usize) -> Result<OrientedFront, Error> {
    let at = after + 1;
    let n = f.slots_before.get(at).map(|s| s.len()).unwrap_or(0);
    if at >= f.word.events.len() || slot < 1 || slot > n {
        return Err(Error::Front(format!(
            "no strand in slot {slot} after event {after}"
        )));
    }
    let rightward = f.strand_rightward(at, slot).expect("slot checked above");
    let down = rightward == (sign == Sign::Plus);
    let zigzag = if down {
        [Event::Left(slot), Event::Right(slot)]
    } else {
        [Event::Left(slot - 1), Event::Right(slot + 1)]
    };
    let mut events = f.word.events.clone();
    events.splice(at..at, zigzag);
    let mut g = validate(&FrontWord::new(events))?;
    if g.strand_rightward(at, slot) != Some(rightward) {
        g = g.reversed();
    }
    Ok(g)
}

/// Splice the last right cusp of `f1` (which must be `R 1`) to the first
/// left cusp of `f2` (which must be `L 0`). The result keeps the orientation
/// of `f1`.
pub fn connect_sum_front(f1: &OrientedFront, f2: &OrientedFront) -> Result<OrientedFront, Error> {
    let (Some(Event::Right(1)), Some(Event::Left(0))) = (f1.word.events.last(), f2.word.events.first()) else {
        return Err(Error::Front("connected sum needs f1 to end with `R 1` and f2 to start with `L 0`".into()));
    };
    let mut events = f1.word.events[..f1.word.events.len() - 1].to_vec();
    events.extend_from_slice(&f2.word.events[1..]);
    validate(&FrontWord::new(events))
}

/// `f2` oriented so that it glues onto the end of `f1` in a connected sum.
pub fn compatible_orientation(f1: &OrientedFront, f2: &OrientedFront) -> OrientedFront {
    let last = f1.word.events.len() - 1;
    let joined = f1.strand_rightward(last, 1);
    if Some(f2.rightward[0]) == joined {
        f2.clone()
    } else {
        f2.reversed()
    }
}

pub fn unknot_front() -> OrientedFront {
    builtin_front("unknot").expect("fixture")
}

pub fn rht_front() -> OrientedFront {
    builtin_front("rht").expect("fixture")
}

/// Front of the positive torus knot `T(p, q)`: `p` nested left cusps, the
/// braid `(σ1 … σ_{p-1})^q` on the lower `p` strands, then `p` nested right
/// cusps.
pub fn torus_front(p: usize, q: usize) -> Result<OrientedFront, Error> {
    if p < 2 || q < 2 {
        return Err(Error::Front(format!("torus_front({p}, {q}) needs p, q >= 2")));
    }
    let mut events: Vec<Event> = (0..p).map(Event::Left).collect();
    for _ in 0..q {
        events.extend((1..p).map(|j| Event::Cross(p + j)));
    }
    events.extend((1..=p).rev().map(Event::Right));
    validate(&FrontWord::new(events))
}

const BUILTIN_FRONTS: [(&str, &str); 3] = [
    ("unknot", include_str!("../fixtures/fronts/unknot.front")),
    ("rht", include_str!("../fixtures/fronts/rht.front")),
    ("t25", include_str!("../fixtures/fronts/t25.front")),
];

pub fn builtin_front_names() -> impl Iterator<Item = &'static str> {
    BUILTIN_FRONTS.iter().map(|(n, _)| *n)
}

pub fn builtin_front(name: &str) -> Result<OrientedFront, Error> {
    let (_, text) = BUILTIN_FRONTS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Front(format!("no builtin front `{name}`")))?;
    validate(&text.parse()?)
}

/// Seeded random single-component front with `size` left cusps.
pub fn random_front(seed: u64, size: usize) -> OrientedFront {
    assert!(size >= 2, "random_front needs size >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        if let Ok(f) = validate(&random_word(&mut rng, size)) {
            return f;
        }
    }
}

fn random_word(rng: &mut ChaCha8Rng, size: usize) -> FrontWord {
    let mut events = Vec::new();
    let mut count = 0usize;
    let mut lefts = 0usize;
    let max_cross = 3 * size;
    let mut crosses = 0usize;
    while lefts < size || count > 0 {
        let can_left = lefts < size;
        let can_close = count >= 2 && (count > 2 || !can_left);
        let can_cross = count >= 2 && crosses < max_cross;
        let roll = rng.gen_range(0..10);
        let ev = if can_left && (count == 0 || roll < 3) {
            lefts += 1;
            count += 2;
            Event::Left(rng.gen_range(0..=count - 2))
        } else if can_cross && (roll < 7 || !can_close) {
            crosses += 1;
            Event::Cross(rng.gen_range(1..count))
        } else if can_close {
            count -= 2;
            Event::Right(rng.gen_range(1..=count + 1))
        } else {
            lefts += 1;
            count += 2;
            Event::Left(rng.gen_range(0..=count - 2))
        };
        events.push(ev);
    }
    FrontWord { events }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknot() {
        let f = validate(&FrontWord::new(vec![Event::Left(0), Event::Right(1)])).unwrap();
        assert_eq!(f.tb_rot(), (-1, 0));
        assert_eq!(unknot_front().tb_rot(), (-1, 0));
    }

    #[test]
    fn unbalanced_and_bad_index() {
        let e = validate(&FrontWord::new(vec![Event::Left(0)])).unwrap_err();
        assert!(e.to_string().contains("ends at 2"), "{e}");
        let e = validate(&FrontWord::new(vec![Event::Left(0), Event::Right(2)])).unwrap_err();
        assert!(e.to_string().contains("event 1"), "{e}");
        let two = "L 0\nL 2\nR 3\nR 1\n".parse().unwrap();
        let e = validate(&two).unwrap_err();
        assert!(e.to_string().contains("2 components"), "{e}");
    }

    #[test]
    fn torus_fronts() {
        assert_eq!(rht_front().tb_rot(), (1, 0));
        assert_eq!(torus_front(2, 3).unwrap().tb_rot(), (1, 0));
        assert_eq!(torus_front(2, 5).unwrap().tb_rot(), (3, 0));
        assert_eq!(builtin_front("t25").unwrap().tb_rot(), (3, 0));
        for (p, q) in [(3, 4), (3, 5), (2, 7), (4, 5)] {
            let (tb, rot) = torus_front(p, q).unwrap().tb_rot();
            assert_eq!(tb, ((p - 1) * (q - 1)) as i64 - 1, "T({p},{q})");
            assert_eq!(rot, 0);
        }
        assert!(torus_front(2, 4).is_err());
    }

    #[test]
    fn stabilizing() {
        let f = rht_front();
        let plus = stabilize_front(&f, Sign::Plus, 0, 1).unwrap();
        assert_eq!(plus.tb_rot(), (0, 1));
        let minus = stabilize_front(&f, Sign::Minus, 0, 1).unwrap();
        assert_eq!(minus.tb_rot(), (0, -1));
        let on_lower = stabilize_front(&f, Sign::Plus, 1, 4).unwrap();
        assert_eq!(on_lower.tb_rot(), (0, 1));
        assert!(stabilize_front(&f, Sign::Plus, 0, 5).is_err());
    }

    #[test]
    fn connected_sums() {
        let r = rht_front();
        assert_eq!(connect_sum_front(&r, &r).unwrap().tb_rot(), (3, 0));
        let u = unknot_front();
        assert_eq!(connect_sum_front(&u, &r).unwrap().tb_rot(), r.tb_rot());
    }

    #[test]
    fn reversal() {
        let f = stabilize_front(&rht_front(), Sign::Plus, 0, 1).unwrap();
        let (tb, rot) = f.tb_rot();
        assert_eq!(f.reversed().tb_rot(), (tb, -rot));
    }

    #[test]
    fn random_is_deterministic_and_valid() {
        let a = random_front(1, 6);
        let b = random_front(1, 6);
        assert_eq!(a, b);
        for seed in 0..50 {
            let f = random_front(seed, 2 + (seed as usize % 5));
            let (tb, rot) = f.tb_rot();
            assert_eq!((tb + rot).rem_euclid(2), 1, "seed {seed}");
        }
    }

    #[test]
    fn file_format() {
        let w: FrontWord = "# unknot\nL 0  # open\n\nR 1\n".parse().unwrap();
        assert_eq!(w.events, vec![Event::Left(0), Event::Right(1)]);
        assert_eq!(w.to_string().parse::<FrontWord>().unwrap(), w);
        assert!("Q 1".parse::<FrontWord>().is_err());
        assert!("L".parse::<FrontWord>().is_err());
    }
}
