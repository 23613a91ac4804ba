//! Integer intervals whose endpoints carry derivation traces.

use std::fmt;

use serde::Serialize;

use crate::trace::TraceId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bound {
    pub value: i64,
    pub trace: TraceId,
}

/// `[lo, hi]` with `None` meaning unbounded on that side.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub lo: Option<Bound>,
    pub hi: Option<Bound>,
}

impl Interval {
    pub fn unbounded() -> Self {
        Interval::default()
    }

    pub fn lo(&self) -> Option<i64> {
        self.lo.map(|b| b.value)
    }

    pub fn hi(&self) -> Option<i64> {
        self.hi.map(|b| b.value)
    }

    pub fn values(&self) -> (Option<i64>, Option<i64>) {
        (self.lo(), self.hi())
    }

    pub fn exact(&self) -> Option<i64> {
        match (self.lo(), self.hi()) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        }
    }

    pub fn contains(&self, v: i64) -> bool {
        self.lo().is_none_or(|l| l <= v) && self.hi().is_none_or(|h| v <= h)
    }

    pub fn is_empty(&self) -> bool {
        matches!((self.lo(), self.hi()), (Some(a), Some(b)) if a > b)
    }

    /// Would `v` strictly tighten the lower end?
    pub fn tightens_lo(&self, v: i64) -> bool {
        self.lo().is_none_or(|l| v > l)
    }

    pub fn tightens_hi(&self, v: i64) -> bool {
        self.hi().is_none_or(|h| v < h)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.exact() {
            return write!(f, "= {v}");
        }
        let lo = self.lo().map_or("-inf".to_string(), |v| v.to_string());
        let hi = self.hi().map_or("+inf".to_string(), |v| v.to_string());
        write!(f, "∈ [{lo}, {hi}]")
    }
}

/// `⌈a / 2⌉`.
pub fn ceil_half(a: i64) -> i64 {
    (a + 1).div_euclid(2)
}

/// `⌊a / 2⌋`.
pub fn floor_half(a: i64) -> i64 {
    a.div_euclid(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: Option<i64>, hi: Option<i64>) -> Interval {
        Interval {
            lo: lo.map(|value| Bound { value, trace: 0 }),
            hi: hi.map(|value| Bound { value, trace: 0 }),
        }
    }

    #[test]
    fn display() {
        assert_eq!(iv(Some(2), Some(2)).to_string(), "= 2");
        assert_eq!(iv(Some(0), None).to_string(), "∈ [0, +inf]");
        assert_eq!(iv(None, Some(-1)).to_string(), "∈ [-inf, -1]");
    }

    #[test]
    fn predicates() {
        let i = iv(Some(0), Some(3));
        assert!(i.contains(0) && i.contains(3) && !i.contains(4));
        assert!(i.tightens_lo(1) && !i.tightens_lo(0));
        assert!(i.tightens_hi(2) && !i.tightens_hi(3));
        assert!(iv(Some(2), Some(1)).is_empty());
        assert!(iv(None, None).contains(-100));
    }

    #[test]
    fn halves() {
        assert_eq!(ceil_half(3), 2);
        assert_eq!(ceil_half(-3), -1);
        assert_eq!(floor_half(-3), -2);
        assert_eq!(floor_half(4), 2);
    }
}
