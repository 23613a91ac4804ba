//! Alexander polynomials of knot expressions and the Arf invariant derived
//! from them.
//!
//! Torus knots use the product formula, connected sums multiply, mirror and
//! reversal leave the polynomial unchanged, untwisted Whitehead doubles have
//! trivial polynomial, and a winding-number-±1 satellite multiplies the
//! companion's polynomial by the registered polynomial of `P_r(U)`.
//! Arf is read off `|Δ(-1)| mod 8`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::expr::{KnotExpr, PatternRef};
use crate::pattern::Registry;

/// Integer Laurent polynomial in `t`, stored as a dense coefficient vector
/// starting at exponent `min`. Trailing and leading zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPoly {
    min: i64,
    coeffs: Vec<i64>,
}

impl LaurentPoly {
    pub fn new(min: i64, coeffs: Vec<i64>) -> Self {
        let mut p = LaurentPoly { min, coeffs };
        p.trim();
        p
    }

    pub fn one() -> Self {
        LaurentPoly::new(0, vec![1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> i64 {
        self.min
    }

    pub fn max_exp(&self) -> i64 {
        self.min + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        let i = exp - self.min;
        if i < 0 || i >= self.coeffs.len() as i64 {
            0
        } else {
            self.coeffs[i as usize]
        }
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.min = 0;
        } else {
            self.coeffs.drain(..lead);
            self.min += lead as i64;
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::new(0, vec![]);
        }
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        LaurentPoly::new(self.min + other.min, out)
    }

    /// Evaluate at an integer point (negative exponents require `x = ±1`).
    pub fn eval(&self, x: i64) -> i64 {
        assert!(
            self.min >= 0 || x.abs() == 1,
            "negative powers only evaluable at ±1"
        );
        let mut acc = 0i64;
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.min + i as i64;
            let p = if x.abs() == 1 {
                if x == -1 && e.rem_euclid(2) == 1 {
                    -1
                } else {
                    1
                }
            } else {
                x.pow(e as u32)
            };
            acc += c * p;
        }
        acc
    }

    /// Shift to a palindromic centre and fix the sign so `Δ(1) = 1`.
    /// Returns `None` if the polynomial cannot be an Alexander polynomial
    /// (odd span or `Δ(1) ≠ ±1`).
    pub fn normalized_alexander(&self) -> Option<LaurentPoly> {
        if self.is_zero() {
            return None;
        }
        let span = self.coeffs.len() as i64 - 1;
        if span % 2 != 0 {
            return None;
        }
        let mut p = LaurentPoly::new(-span / 2, self.coeffs.clone());
        let at_one = p.eval(1);
        if at_one == -1 {
            p.coeffs.iter_mut().for_each(|c| *c = -*c);
        } else if at_one != 1 {
            return None;
        }
        Some(p)
    }

    pub fn is_symmetric(&self) -> bool {
        self.min == -self.max_exp() && (self.min..=self.max_exp()).all(|e| self.coeff(e) == self.coeff(-e))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for e in (self.min..=self.max_exp()).rev() {
            let c = self.coeff(e);
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match e {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    if e == 1 {
                        f.write_str("t")?;
                    } else {
                        write!(f, "t^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Exact division of an ordinary polynomial (coefficients lowest degree
/// first) by a monic divisor; `None` on non-zero remainder.
fn div_exact(num: &[i64], den: &[i64]) -> Option<Vec<i64>> {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    if num.len() < den.len() {
        return num.iter().all(|&c| c == 0).then(Vec::new);
    }
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (j, d) in den.iter().enumerate() {
                rem[k + j] -= c * d;
            }
        }
    }
    rem.iter().all(|&c| c == 0).then_some(quot)
}

fn binomial_minus_one(n: usize) -> Vec<i64> {
    // t^n - 1
    let mut v = vec![0i64; n + 1];
    v[0] = -1;
    v[n] = 1;
    v
}

/// Δ of the positive torus knot T(p,q) via
/// `(t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1))`, normalized.
pub fn torus_alexander(p: i64, q: i64) -> LaurentPoly {
    let (p, q) = (p as usize, q as usize);
    let num = LaurentPoly::new(0, binomial_minus_one(p * q)).mul(&LaurentPoly::new(0, binomial_minus_one(1)));
    let step = div_exact(&num.coeffs, &binomial_minus_one(p)).expect("t^p-1 divides");
    let quot = div_exact(&step, &binomial_minus_one(q)).expect("t^q-1 divides");
    LaurentPoly::new(0, quot)
        .normalized_alexander()
        .expect("torus knot polynomial is palindromic")
}

/// Alexander polynomial of an expression, or `None` when some ingredient is
/// not known (an unregistered `P_r(U)` polynomial, or a non-unit winding
/// number).
pub fn alexander(e: &KnotExpr, registry: &Registry) -> Option<LaurentPoly> {
    match e {
        KnotExpr::Unknot => Some(LaurentPoly::one()),
        KnotExpr::Torus { p, q } => Some(torus_alexander(*p, *q)),
        KnotExpr::Mirror(k) | KnotExpr::Reverse(k) => alexander(k, registry),
        KnotExpr::Sum(xs) => xs
            .iter()
            .try_fold(LaurentPoly::one(), |acc, x| Some(acc.mul(&alexander(x, registry)?))),
        KnotExpr::Wh(_) => Some(LaurentPoly::one()),
        KnotExpr::Sat {
            pattern,
            r,
            companion,
        } => {
            let tilde = tilde_alexander(pattern, *r, registry)?;
            let datum = registry.resolve(pattern).ok()?;
            if datum.w.abs() != 1 {
                return None;
            }
            Some(tilde.mul(&alexander(companion, registry)?))
        }
    }
}

fn tilde_alexander(pattern: &PatternRef, r: i64, registry: &Registry) -> Option<LaurentPoly> {
    let datum = registry.resolve(pattern).ok()?;
    datum.tilde_twist(r).and_then(|t| t.alexander.clone())
}

/// Arf invariant value: 0, 1, or unknown.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Arf {
    Zero,
    One,
    Unknown,
}

impl Arf {
    pub fn from_bit(b: u8) -> Arf {
        if b.is_multiple_of(2) {
            Arf::Zero
        } else {
            Arf::One
        }
    }

    pub fn bit(self) -> Option<u8> {
        match self {
            Arf::Zero => Some(0),
            Arf::One => Some(1),
            Arf::Unknown => None,
        }
    }
}

impl fmt::Display for Arf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arf::Zero => f.write_str("0"),
            Arf::One => f.write_str("1"),
            Arf::Unknown => f.write_str("?"),
        }
    }
}

/// Arf from a known Alexander polynomial: 0 iff `Δ(-1) ≡ ±1 (mod 8)`.
pub fn arf_from_alexander(delta: &LaurentPoly) -> Arf {
    match delta.eval(-1).rem_euclid(8) {
        1 | 7 => Arf::Zero,
        3 | 5 => Arf::One,
        _ => Arf::Unknown,
    }
}

/// Arf of an expression: through Δ when available, else by mod-2
/// additivity over sums (invariance under mirror and reversal), else unknown.
pub fn arf(e: &KnotExpr, registry: &Registry) -> Arf {
    if let Some(d) = alexander(e, registry) {
        return arf_from_alexander(&d);
    }
    match e {
        KnotExpr::Mirror(k) | KnotExpr::Reverse(k) => arf(k, registry),
        KnotExpr::Sum(xs) => {
            let mut acc = 0u8;
            for x in xs {
                match arf(x, registry).bit() {
                    Some(b) => acc ^= b,
                    None => return Arf::Unknown,
                }
            }
            Arf::from_bit(acc)
        }
        _ => Arf::Unknown,
    }
}
