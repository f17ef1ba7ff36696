// SPDX-License-Identifier: Apache-2.0

//! Canonical finite unions of rational intervals.
//!
//! [`IntervalSet`] lives inside the half-open segment `J = [0,1)` and is the
//! carrier of every fiber of an open set on the cylinder `X × J`.
//! [`UnitSet`] is the same algebra over the closed parameter segment
//! `I = [0,1]`, used for path preimages and homotopy-time intervals.
//!
//! Both keep their parts sorted, pairwise disjoint and non-mergeable, so
//! derived `PartialEq` is set equality.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Result;
use crate::rational::Rational;

/// A nonempty interval with rational endpoints and per-side flags.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
    lo_closed: bool,
    hi_closed: bool,
}

impl Interval {
    /// Returns `None` when the description denotes no points.
    pub fn new(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Option<Self> {
        match lo.cmp(&hi) {
            Ordering::Less => Some(Interval {
                lo,
                hi,
                lo_closed,
                hi_closed,
            }),
            Ordering::Equal if lo_closed && hi_closed => Some(Interval {
                lo,
                hi,
                lo_closed,
                hi_closed,
            }),
            _ => None,
        }
    }

    pub fn point(v: Rational) -> Self {
        Interval {
            lo: v.clone(),
            hi: v,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &Rational) -> bool {
        let above = if self.lo_closed { v >= &self.lo } else { v > &self.lo };
        let below = if self.hi_closed { v <= &self.hi } else { v < &self.hi };
        above && below
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = match cmp_lower(self, other) {
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            _ => (self.lo.clone(), self.lo_closed),
        };
        let (hi, hi_closed) = match cmp_upper(self, other) {
            Ordering::Greater => (other.hi.clone(), other.hi_closed),
            _ => (self.hi.clone(), self.hi_closed),
        };
        Interval::new(lo, hi, lo_closed, hi_closed)
    }

    /// A point strictly inside, or the point itself when degenerate.
    pub fn sample(&self) -> Rational {
        self.lo.midpoint(&self.hi)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.lo);
        }
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct IntervalWire {
    lo: Rational,
    hi: Rational,
    lo_open: bool,
    hi_open: bool,
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        IntervalWire {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
            lo_open: !self.lo_closed,
            hi_open: !self.hi_closed,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let w = IntervalWire::deserialize(deserializer)?;
        if !w.lo.in_unit() || !w.hi.in_unit() {
            return Err(serde::de::Error::custom("interval endpoint outside [0,1]"));
        }
        Interval::new(w.lo, w.hi, !w.lo_open, !w.hi_open).ok_or_else(|| serde::de::Error::custom("empty interval"))
    }
}

/// Orders lower endpoints: a closed lower endpoint starts before an open one.
fn cmp_lower(a: &Interval, b: &Interval) -> Ordering {
    a.lo.cmp(&b.lo).then_with(|| b.lo_closed.cmp(&a.lo_closed))
}

/// Orders upper endpoints: an open upper endpoint ends before a closed one.
fn cmp_upper(a: &Interval, b: &Interval) -> Ordering {
    a.hi.cmp(&b.hi).then_with(|| a.hi_closed.cmp(&b.hi_closed))
}

/// `b` starts no later than `a` ends and their union is an interval.
fn joinable(a: &Interval, b: &Interval) -> bool {
    match b.lo.cmp(&a.hi) {
        Ordering::Less => true,
        Ordering::Equal => a.hi_closed || b.lo_closed,
        Ordering::Greater => false,
    }
}

fn normalize(mut parts: Vec<Interval>) -> Vec<Interval> {
    parts.sort_by(cmp_lower);
    let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
    for p in parts {
        match out.last_mut() {
            Some(cur) if joinable(cur, &p) => {
                if cmp_upper(&p, cur) == Ordering::Greater {
                    cur.hi = p.hi;
                    cur.hi_closed = p.hi_closed;
                }
            }
            _ => out.push(p),
        }
    }
    out
}

fn union_parts(a: &[Interval], b: &[Interval]) -> Vec<Interval> {
    normalize(a.iter().chain(b).cloned().collect())
}

fn intersect_parts(a: &[Interval], b: &[Interval]) -> Vec<Interval> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            if let Some(z) = x.intersect(y) {
                out.push(z);
            }
        }
    }
    normalize(out)
}

/// Complement of canonical `parts` inside `[0, top]` (or `[0, top)`).
fn complement_parts(parts: &[Interval], top: &Rational, top_closed: bool) -> Vec<Interval> {
    let mut out = Vec::new();
    let mut cursor = Rational::zero();
    let mut cursor_closed = true;
    for p in parts {
        if let Some(gap) = Interval::new(cursor.clone(), p.lo.clone(), cursor_closed, !p.lo_closed) {
            out.push(gap);
        }
        cursor = p.hi.clone();
        cursor_closed = !p.hi_closed;
    }
    if let Some(gap) = Interval::new(cursor, top.clone(), cursor_closed, top_closed) {
        out.push(gap);
    }
    out
}

fn parts_contain(parts: &[Interval], v: &Rational) -> bool {
    parts.iter().any(|p| p.contains(v))
}

fn fmt_parts(parts: &[Interval], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if parts.is_empty() {
        return write!(f, "∅");
    }
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            write!(f, " ∪ ")?;
        }
        write!(f, "{p:?}")?;
    }
    Ok(())
}

/// A canonical subset of `J = [0,1)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { parts: Vec::new() }
    }

    /// All of `J`.
    pub fn whole() -> Self {
        IntervalSet {
            parts: vec![Interval::new(Rational::zero(), Rational::one(), true, false).unwrap()],
        }
    }

    /// `[0, v)`, empty when `v <= 0`; `v >= 1` gives all of `J`.
    pub fn below(v: &Rational) -> Self {
        let hi = v.clone().min(Rational::one());
        IntervalSet::from_intervals(Interval::new(Rational::zero(), hi, true, false))
    }

    /// `(v, 1)` intersected with `J`; `v < 0` gives all of `J`.
    pub fn above(v: &Rational) -> Self {
        if v.is_negative() {
            return IntervalSet::whole();
        }
        IntervalSet::from_intervals(Interval::new(v.clone(), Rational::one(), false, false))
    }

    /// The singleton `{v}` for `v` in `J`.
    pub fn point(v: Rational) -> Self {
        if !v.in_j() {
            return IntervalSet::empty();
        }
        IntervalSet {
            parts: vec![Interval::point(v)],
        }
    }

    /// Normalizes arbitrary intervals, clipping them to `J`.
    pub fn from_intervals(parts: impl IntoIterator<Item = Interval>) -> Self {
        let j = Interval::new(Rational::zero(), Rational::one(), true, false).unwrap();
        let clipped = parts.into_iter().filter_map(|p| p.intersect(&j)).collect();
        IntervalSet {
            parts: normalize(clipped),
        }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet {
            parts: union_parts(&self.parts, &other.parts),
        }
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet {
            parts: intersect_parts(&self.parts, &other.parts),
        }
    }

    /// Complement inside `J`.
    pub fn complement(&self) -> IntervalSet {
        IntervalSet {
            parts: complement_parts(&self.parts, &Rational::one(), false),
        }
    }

    pub fn is_subset(&self, other: &IntervalSet) -> bool {
        &self.intersect(other) == self
    }

    /// Membership of `v`, which must lie in `J`.
    pub fn contains(&self, v: &Rational) -> Result<bool> {
        v.check_j("level")?;
        Ok(parts_contain(&self.parts, v))
    }

    /// Membership without the range check; points outside `J` are absent.
    pub fn contains_unchecked(&self, v: &Rational) -> bool {
        parts_contain(&self.parts, v)
    }

    /// Least upper bound, attained or not; `None` for the empty set.
    pub fn supremum(&self) -> Option<Rational> {
        self.parts.last().map(|p| p.hi.clone())
    }

    /// `Some(v)` when the set is exactly `[0, v)` with `v > 0`, `Some(0)` when
    /// empty, `None` otherwise.
    pub fn as_down_set(&self) -> Option<Rational> {
        match self.parts.as_slice() {
            [] => Some(Rational::zero()),
            [p] if p.lo.is_zero() && p.lo_closed && !p.hi_closed && !p.is_point() => Some(p.hi.clone()),
            _ => None,
        }
    }
}

impl fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_parts(&self.parts, f)
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_parts(&self.parts, f)
    }
}

impl Serialize for IntervalSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<Interval>::deserialize(deserializer)?;
        Ok(IntervalSet::from_intervals(parts))
    }
}

/// Builds the canonical subset of `J` described by one interval, clipping the
/// point 1. Rejects endpoints outside `[0,1]`.
pub fn make_interval(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Result<IntervalSet> {
    lo.check_unit("lo")?;
    hi.check_unit("hi")?;
    Ok(IntervalSet::from_intervals(Interval::new(lo, hi, lo_closed, hi_closed)))
}

/// A canonical subset of the closed parameter segment `I = [0,1]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UnitSet {
    parts: Vec<Interval>,
}

impl UnitSet {
    pub fn empty() -> Self {
        UnitSet { parts: Vec::new() }
    }

    pub fn whole() -> Self {
        UnitSet {
            parts: vec![Interval::new(Rational::zero(), Rational::one(), true, true).unwrap()],
        }
    }

    /// Normalizes arbitrary intervals, clipping them to `[0,1]`.
    pub fn from_intervals(parts: impl IntoIterator<Item = Interval>) -> Self {
        let unit = Interval::new(Rational::zero(), Rational::one(), true, true).unwrap();
        let clipped = parts.into_iter().filter_map(|p| p.intersect(&unit)).collect();
        UnitSet {
            parts: normalize(clipped),
        }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn union(&self, other: &UnitSet) -> UnitSet {
        UnitSet {
            parts: union_parts(&self.parts, &other.parts),
        }
    }

    pub fn intersect(&self, other: &UnitSet) -> UnitSet {
        UnitSet {
            parts: intersect_parts(&self.parts, &other.parts),
        }
    }

    pub fn complement(&self) -> UnitSet {
        UnitSet {
            parts: complement_parts(&self.parts, &Rational::one(), true),
        }
    }

    pub fn contains(&self, v: &Rational) -> bool {
        parts_contain(&self.parts, v)
    }

    /// Open in the relative topology of `[0,1]`: every closed endpoint of a
    /// canonical part must sit at 0 or 1.
    pub fn is_open(&self) -> bool {
        self.parts
            .iter()
            .all(|p| (!p.lo_closed || p.lo.is_zero()) && (!p.hi_closed || p.hi.is_one()))
    }
}

impl fmt::Debug for UnitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_parts(&self.parts, f)
    }
}

impl Serialize for UnitSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    fn iv(lo: Rational, hi: Rational, lc: bool, hc: bool) -> IntervalSet {
        make_interval(lo, hi, lc, hc).unwrap()
    }

    #[test]
    fn make_interval_examples() {
        assert!(iv(q(1, 3), q(1, 3), false, false).is_empty());
        let a = iv(q(0, 1), q(1, 3), true, false);
        assert_eq!(format!("{a:?}"), "[0,1/3)");
        let b = iv(q(1, 3), q(1, 1), false, true);
        assert_eq!(format!("{b:?}"), "(1/3,1)");
        assert!(make_interval(q(-1, 2), q(1, 2), true, true).is_err());
        assert!(make_interval(q(0, 1), q(3, 2), true, true).is_err());
    }

    #[test]
    fn union_examples() {
        let a = iv(q(0, 1), q(1, 3), true, false);
        let b = iv(q(1, 3), q(1, 1), true, false);
        assert_eq!(a.union(&b), IntervalSet::whole());
        assert_eq!(IntervalSet::empty().union(&a), a);
        let c = iv(q(0, 1), q(1, 4), true, false);
        let d = iv(q(1, 2), q(3, 4), false, false);
        let u = c.union(&d);
        assert_eq!(u.parts().len(), 2);
        assert_eq!(format!("{u:?}"), "[0,1/4) ∪ (1/2,3/4)");
    }

    #[test]
    fn touching_open_endpoints_do_not_merge() {
        let a = iv(q(0, 1), q(1, 2), true, false);
        let b = iv(q(1, 2), q(1, 1), false, false);
        assert_eq!(a.union(&b).parts().len(), 2);
    }

    #[test]
    fn intersect_examples() {
        let a = iv(q(0, 1), q(1, 2), true, false);
        let b = iv(q(1, 3), q(1, 1), true, false);
        assert_eq!(format!("{:?}", a.intersect(&b)), "[1/3,1/2)");
        let c = iv(q(1, 2), q(1, 1), false, false);
        assert!(a.intersect(&c).is_empty());
        let d = iv(q(0, 1), q(5, 12), true, false);
        let e = iv(q(1, 3), q(1, 1), false, false);
        let got = d.intersect(&e);
        assert_eq!(got, iv(q(1, 3), q(5, 12), false, false));
        // brute-force grid at step 1/120
        for k in 0..120 {
            let v = q(k, 120);
            let expected = v > q(1, 3) && v < q(5, 12);
            assert_eq!(got.contains(&v).unwrap(), expected, "at {v}");
        }
    }

    #[test]
    fn complement_examples() {
        let a = iv(q(0, 1), q(1, 3), true, false);
        assert_eq!(a.complement(), iv(q(1, 3), q(1, 1), true, false));
        assert_eq!(IntervalSet::empty().complement(), IntervalSet::whole());
        let b = iv(q(1, 3), q(1, 1), false, false);
        assert_eq!(format!("{:?}", b.complement()), "[0,1/3]");
    }

    #[test]
    fn contains_examples() {
        let a = iv(q(0, 1), q(1, 3), true, false);
        assert!(!a.contains(&q(1, 3)).unwrap());
        let b = iv(q(0, 1), q(1, 3), true, true);
        assert!(b.contains(&q(1, 3)).unwrap());
        assert!(!IntervalSet::empty().contains(&q(0, 1)).unwrap());
        assert!(a.contains(&q(1, 1)).is_err());
        assert!(a.contains(&q(-1, 3)).is_err());
    }

    #[test]
    fn supremum_examples() {
        assert_eq!(iv(q(0, 1), q(1, 2), true, false).supremum(), Some(q(1, 2)));
        let two = iv(q(0, 1), q(1, 2), true, false).union(&iv(q(3, 4), q(7, 8), true, false));
        assert_eq!(two.supremum(), Some(q(7, 8)));
        assert_eq!(IntervalSet::empty().supremum(), None);
    }

    #[test]
    fn unit_set_openness() {
        assert!(UnitSet::whole().is_open());
        assert!(UnitSet::empty().is_open());
        let half_open = UnitSet::from_intervals(Interval::new(q(0, 1), q(5, 6), true, false));
        assert!(half_open.is_open());
        let closed_inner = UnitSet::from_intervals(Interval::new(q(1, 3), q(1, 1), true, true));
        assert!(!closed_inner.is_open());
        assert!(closed_inner.complement().is_open());
    }

    #[test]
    fn json_wire_format() {
        let a = iv(q(1, 3), q(1, 1), false, false);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"[{"lo":"1/3","hi":"1","lo_open":true,"hi_open":true}]"#);
        let back: IntervalSet = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }

    // Random raw descriptions: endpoints on a grid of 1/24, random flags.
    fn raw_interval() -> impl Strategy<Value = (i64, i64, bool, bool)> {
        (0i64..=24, 0i64..=24, any::<bool>(), any::<bool>()).prop_map(|(a, b, c, d)| (a.min(b), a.max(b), c, d))
    }

    fn build(raw: &[(i64, i64, bool, bool)]) -> IntervalSet {
        IntervalSet::from_intervals(
            raw.iter()
                .filter_map(|&(a, b, c, d)| Interval::new(q(a, 24), q(b, 24), c, d)),
        )
    }

    fn brute(raw: &[(i64, i64, bool, bool)], v: &Rational) -> bool {
        v.in_j()
            && raw.iter().any(|&(a, b, c, d)| {
                let lo = q(a, 24);
                let hi = q(b, 24);
                (if c { v >= &lo } else { v > &lo }) && (if d { v <= &hi } else { v < &hi })
            })
    }

    fn raw_set() -> impl Strategy<Value = Vec<(i64, i64, bool, bool)>> {
        proptest::collection::vec(raw_interval(), 0..5)
    }

    proptest! {
        #[test]
        fn membership_matches_brute_force(raw in raw_set()) {
            let s = build(&raw);
            for k in 0..240 {
                let v = q(k, 240);
                prop_assert_eq!(s.contains(&v).unwrap(), brute(&raw, &v));
            }
        }

        #[test]
        fn canonical_form_is_idempotent(raw in raw_set()) {
            let s = build(&raw);
            let again = IntervalSet::from_intervals(s.parts().to_vec());
            prop_assert_eq!(again, s);
        }

        #[test]
        fn boolean_algebra_laws(a in raw_set(), b in raw_set(), c in raw_set()) {
            let (a, b, c) = (build(&a), build(&b), build(&c));
            prop_assert_eq!(a.union(&b), b.union(&a));
            prop_assert_eq!(a.intersect(&b), b.intersect(&a));
            prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
            prop_assert_eq!(a.intersect(&b).intersect(&c), a.intersect(&b.intersect(&c)));
            prop_assert_eq!(a.complement().complement(), a.clone());
            prop_assert_eq!(a.union(&b).complement(), a.complement().intersect(&b.complement()));
            prop_assert_eq!(a.intersect(&b).complement(), a.complement().union(&b.complement()));
            prop_assert!(a.union(&a.complement()) == IntervalSet::whole());
            prop_assert!(a.intersect(&a.complement()).is_empty());
        }
    }
}
