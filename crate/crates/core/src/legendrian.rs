//! Symbolic calculus of Legendrian `(tb, rot)` witnesses.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::pattern::leg_pair_parity_ok;
use crate::Error;

/// Classical invariants of some Legendrian representative. `tb + rot` is
/// always odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LegWitness {
    pub tb: i64,
    pub rot: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl LegWitness {
    pub fn new(tb: i64, rot: i64) -> Result<Self, Error> {
        if (tb + rot).rem_euclid(2) != 1 {
            return Err(Error::Parity(format!("witness (tb={tb}, rot={rot}) has tb + rot even")));
        }
        Ok(LegWitness { tb, rot })
    }

    /// For values whose parity holds by construction; a violation is a bug.
    pub(crate) fn derived(tb: i64, rot: i64) -> Self {
        LegWitness::new(tb, rot).unwrap_or_else(|e| panic!("internal error: {e}"))
    }

    /// The standard Legendrian unknot.
    pub fn unknot() -> Self {
        LegWitness { tb: -1, rot: 0 }
    }

    /// `tb + |rot|`, the quantity bounded by the slice-Bennequin family.
    pub fn bennequin(&self) -> i64 {
        self.tb + self.rot.abs()
    }
}

impl fmt::Display for LegWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(tb={}, rot={})", self.tb, self.rot)
    }
}

/// Positive stabilization gives `(tb-1, rot+1)`, negative `(tb-1, rot-1)`.
pub fn stabilize(w: LegWitness, sign: Sign) -> LegWitness {
    let d = match sign {
        Sign::Plus => 1,
        Sign::Minus => -1,
    };
    LegWitness::derived(w.tb - 1, w.rot + d)
}

/// Whether `target` is obtained from `w` by some sequence of stabilizations.
pub fn reachable(w: LegWitness, target: (i64, i64)) -> bool {
    let (tb, rot) = target;
    let steps = w.tb - tb;
    let drot = rot - w.rot;
    steps >= 0 && drot.abs() <= steps && (steps - drot).rem_euclid(2) == 0
}

/// Every witness at `tb` reachable from `w`, ordered by rotation.
pub fn destabilize_to(w: LegWitness, tb: i64) -> Vec<LegWitness> {
    let steps = w.tb - tb;
    if steps < 0 {
        return vec![];
    }
    (0..=steps)
        .map(|k| LegWitness::derived(tb, w.rot - steps + 2 * k))
        .collect()
}

/// Connected sum: `(tb_a + tb_b + 1, rot_a + rot_b)`.
pub fn connect_sum_witness(a: LegWitness, b: LegWitness) -> LegWitness {
    LegWitness::derived(a.tb + b.tb + 1, a.rot + b.rot)
}

/// Legendrian satellite of a winding-number-one pattern diagram `(tb_P,
/// rot_P)` on a companion witness `k`: invariants add. The result
/// represents the `k.tb`-twisted satellite, so callers destabilize `k` to
/// the twist they want first.
pub fn satellite_witness(pattern: (i64, i64), w: i64, k: LegWitness) -> Result<LegWitness, Error> {
    if w != 1 {
        return Err(Error::Precondition(format!(
            "unsupported winding number {w}: the Legendrian satellite rule needs w = 1"
        )));
    }
    let (tb_p, rot_p) = pattern;
    if !leg_pair_parity_ok(w, tb_p, rot_p) {
        return Err(Error::Parity(format!(
            "pattern pair (tb={tb_p}, rot={rot_p}) violates the parity rule for w={w}; satellite would be ({}, {})",
            tb_p + k.tb,
            rot_p + k.rot
        )));
    }
    LegWitness::new(tb_p + k.tb, rot_p + k.rot)
}

/// Reversing orientation negates the rotation number.
pub fn reverse_witness(w: LegWitness) -> LegWitness {
    LegWitness::derived(w.tb, -w.rot)
}

/// No rule is available for mirrors.
pub fn mirror_witness(_w: LegWitness) -> Option<LegWitness> {
    None
}

/// Untwisted positive Whitehead double: `(1, 0)` whenever some companion
/// witness has `tb >= 0`.
pub fn wh_witness(companion: &[LegWitness]) -> Option<LegWitness> {
    companion
        .iter()
        .any(|w| w.tb >= 0)
        .then(|| LegWitness::derived(1, 0))
}

/// Drop every witness reachable from another one, returning the rest sorted.
pub fn pareto_prune(mut ws: Vec<LegWitness>) -> Vec<LegWitness> {
    ws.sort();
    ws.dedup();
    let keep: Vec<LegWitness> = ws
        .iter()
        .filter(|w| !ws.iter().any(|v| v != *w && reachable(*v, (w.tb, w.rot))))
        .copied()
        .collect();
    keep
}
