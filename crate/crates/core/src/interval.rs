//! Half-open intervals `[l, r)` and canonical finite unions of them.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntervalError {
    #[error("interval [{}, {}) is empty", .0 .0, .0 .1)]
    EmptyInterval(Box<(Rational, Rational)>),
    #[error("hull of an empty interval set")]
    EmptySet,
}

/// A nonempty half-open interval `[left, right)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfOpenInterval {
    left: Rational,
    right: Rational,
}

impl HalfOpenInterval {
    pub fn new(left: Rational, right: Rational) -> Result<Self, IntervalError> {
        if left < right {
            Ok(HalfOpenInterval { left, right })
        } else {
            Err(IntervalError::EmptyInterval(Box::new((left, right))))
        }
    }

    /// `[left, right)` if nonempty, `None` otherwise.
    pub fn try_new(left: Rational, right: Rational) -> Option<Self> {
        (left < right).then_some(HalfOpenInterval { left, right })
    }

    pub fn unit() -> Self {
        HalfOpenInterval {
            left: Rational::zero(),
            right: Rational::one(),
        }
    }

    pub fn left(&self) -> &Rational {
        &self.left
    }

    pub fn right(&self) -> &Rational {
        &self.right
    }

    pub fn length(&self) -> Rational {
        &self.right - &self.left
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.left <= x && x < &self.right
    }

    pub fn contains_interval(&self, other: &HalfOpenInterval) -> bool {
        self.left <= other.left && other.right <= self.right
    }

    pub fn intersect(&self, other: &HalfOpenInterval) -> Option<HalfOpenInterval> {
        let l = (&self.left).max(&other.left).clone();
        let r = (&self.right).min(&other.right).clone();
        HalfOpenInterval::try_new(l, r)
    }

    pub fn translate(&self, t: &Rational) -> HalfOpenInterval {
        HalfOpenInterval {
            left: &self.left + t,
            right: &self.right + t,
        }
    }

    /// Image under the increasing affine map `x ↦ (x - offset) * scale`.
    pub fn affine(&self, offset: &Rational, scale: &Rational) -> HalfOpenInterval {
        assert!(scale.is_positive());
        HalfOpenInterval {
            left: (&self.left - offset) * scale,
            right: (&self.right - offset) * scale,
        }
    }

    pub fn midpoint(&self) -> Rational {
        (&self.left + &self.right) / Rational::from_integer(2)
    }
}

impl fmt::Display for HalfOpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.left, self.right)
    }
}

impl fmt::Debug for HalfOpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for HalfOpenInterval {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [&self.left, &self.right].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HalfOpenInterval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [l, r] = <[Rational; 2]>::deserialize(deserializer)?;
        HalfOpenInterval::new(l, r).map_err(serde::de::Error::custom)
    }
}

/// A finite union of half-open intervals in canonical form: pieces sorted,
/// pairwise disjoint and non-touching. Structural equality is set equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    pieces: Vec<HalfOpenInterval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { pieces: Vec::new() }
    }

    pub fn unit() -> Self {
        IntervalSet::from(HalfOpenInterval::unit())
    }

    /// Canonical set covering the union of `pieces`, which may overlap,
    /// touch, or arrive in any order.
    pub fn normalize(mut pieces: Vec<HalfOpenInterval>) -> Self {
        pieces.sort_by(|a, b| a.left.cmp(&b.left));
        let mut out: Vec<HalfOpenInterval> = Vec::with_capacity(pieces.len());
        for p in pieces {
            match out.last_mut() {
                Some(last) if p.left <= last.right => {
                    if p.right > last.right {
                        last.right = p.right;
                    }
                }
                _ => out.push(p),
            }
        }
        IntervalSet { pieces: out }
    }

    /// Same as [`normalize`](Self::normalize) but accepts raw endpoint pairs,
    /// dropping the empty ones.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Rational, Rational)>) -> Self {
        Self::normalize(
            pairs
                .into_iter()
                .filter_map(|(l, r)| HalfOpenInterval::try_new(l, r))
                .collect(),
        )
    }

    pub fn pieces(&self) -> &[HalfOpenInterval] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// `[inf S, sup S)`.
    pub fn hull(&self) -> Result<HalfOpenInterval, IntervalError> {
        match (self.pieces.first(), self.pieces.last()) {
            (Some(first), Some(last)) => Ok(HalfOpenInterval {
                left: first.left.clone(),
                right: last.right.clone(),
            }),
            _ => Err(IntervalError::EmptySet),
        }
    }

    /// Total length.
    pub fn measure(&self) -> Rational {
        self.pieces.iter().map(HalfOpenInterval::length).sum()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        // pieces are sorted: find the last piece starting at or before x
        let idx = self.pieces.partition_point(|p| &p.left <= x);
        idx > 0 && self.pieces[idx - 1].contains(x)
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::normalize(
            self.pieces
                .iter()
                .chain(other.pieces.iter())
                .cloned()
                .collect(),
        )
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.pieces.len() && j < other.pieces.len() {
            let (a, b) = (&self.pieces[i], &other.pieces[j]);
            if let Some(p) = a.intersect(b) {
                out.push(p);
            }
            if a.right < b.right {
                i += 1;
            } else {
                j += 1;
            }
        }
        // intersections of canonical sets are already sorted and separated
        IntervalSet::normalize(out)
    }

    /// Points of `self` outside `iv`.
    pub fn minus_interval(&self, iv: &HalfOpenInterval) -> IntervalSet {
        let mut out = Vec::with_capacity(self.pieces.len() + 1);
        for p in &self.pieces {
            if let Some(l) =
                HalfOpenInterval::try_new(p.left.clone(), (&p.right).min(&iv.left).clone())
            {
                out.push(l);
            }
            if let Some(r) =
                HalfOpenInterval::try_new((&p.left).max(&iv.right).clone(), p.right.clone())
            {
                out.push(r);
            }
        }
        IntervalSet { pieces: out }
    }

    pub fn intersect_interval(&self, iv: &HalfOpenInterval) -> IntervalSet {
        self.intersection(&IntervalSet::from(iv.clone()))
    }

    pub fn is_subset(&self, other: &IntervalSet) -> bool {
        self.pieces.iter().all(|p| {
            let idx = other.pieces.partition_point(|q| q.left <= p.left);
            idx > 0 && other.pieces[idx - 1].contains_interval(p)
        })
    }

    pub fn meets(&self, iv: &HalfOpenInterval) -> bool {
        self.pieces.iter().any(|p| p.intersect(iv).is_some())
    }
}

impl From<HalfOpenInterval> for IntervalSet {
    fn from(iv: HalfOpenInterval) -> Self {
        IntervalSet { pieces: vec![iv] }
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return write!(f, "∅");
        }
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for IntervalSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.pieces.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(IntervalSet::normalize(Vec::deserialize(deserializer)?))
    }
}

/// `true` iff `a` and `b` denote the same point set.
pub fn set_equal(a: &IntervalSet, b: &IntervalSet) -> bool {
    a == b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    fn iv(l: Rational, r: Rational) -> HalfOpenInterval {
        HalfOpenInterval::new(l, r).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let s = IntervalSet::normalize(vec![iv(q(0, 1), q(1, 2)), iv(q(1, 2), q(1, 1))]);
        assert_eq!(s, IntervalSet::unit());

        let s = IntervalSet::normalize(vec![iv(q(1, 4), q(3, 4)), iv(q(0, 1), q(1, 2))]);
        assert_eq!(s.pieces(), &[iv(q(0, 1), q(3, 4))]);

        let raw = vec![iv(q(0, 1), q(1, 4)), iv(q(1, 2), q(3, 4))];
        let s = IntervalSet::normalize(raw.clone());
        assert_eq!(s.pieces(), raw.as_slice());
    }

    #[test]
    fn zero_length_pieces_are_dropped() {
        let s = IntervalSet::from_pairs([(q(1, 2), q(1, 2)), (q(0, 1), q(1, 4))]);
        assert_eq!(s.pieces(), &[iv(q(0, 1), q(1, 4))]);
        assert!(HalfOpenInterval::new(q(1, 2), q(1, 2)).is_err());
    }

    #[test]
    fn hull_examples() {
        let s = IntervalSet::from_pairs([(q(0, 1), q(1, 4)), (q(1, 2), q(3, 4))]);
        assert_eq!(s.hull().unwrap(), iv(q(0, 1), q(3, 4)));

        // images of the three pieces of the running example map
        let s =
            IntervalSet::from_pairs([(q(1, 12), q(5, 12)), (q(1, 6), q(1, 2)), (q(1, 2), q(5, 6))]);
        assert_eq!(s.hull().unwrap(), iv(q(1, 12), q(5, 6)));

        assert_eq!(
            IntervalSet::unit().hull().unwrap(),
            HalfOpenInterval::unit()
        );
        assert_eq!(IntervalSet::empty().hull(), Err(IntervalError::EmptySet));
    }

    #[test]
    fn set_equal_examples() {
        let split = IntervalSet::from_pairs([(q(0, 1), q(1, 2)), (q(1, 2), q(1, 1))]);
        assert!(set_equal(&IntervalSet::unit(), &split));
        let a = IntervalSet::from_pairs([(q(0, 1), q(1, 2))]);
        let b = IntervalSet::from_pairs([(q(0, 1), q(1, 2)), (q(3, 4), q(1, 1))]);
        assert!(!set_equal(&a, &b));
    }

    #[test]
    fn membership_and_subsets() {
        let s = IntervalSet::from_pairs([(q(0, 1), q(1, 4)), (q(1, 2), q(3, 4))]);
        assert!(s.contains(&q(0, 1)));
        assert!(!s.contains(&q(1, 4)));
        assert!(s.contains(&q(1, 2)));
        assert!(!s.contains(&q(3, 4)));
        assert!(!s.contains(&q(-1, 4)));
        let t = IntervalSet::from_pairs([(q(1, 8), q(1, 4)), (q(5, 8), q(3, 4))]);
        assert!(t.is_subset(&s));
        assert!(!s.is_subset(&t));
        assert!(IntervalSet::empty().is_subset(&t));
    }

    #[test]
    fn serde_shape() {
        let s = IntervalSet::from_pairs([(q(0, 1), q(1, 4)), (q(1, 2), q(3, 4))]);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"[["0/1","1/4"],["1/2","3/4"]]"#);
        let back: IntervalSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<HalfOpenInterval>(r#"["1/2","1/4"]"#).is_err());
    }

    fn pieces_strategy() -> impl Strategy<Value = Vec<(i64, i64)>> {
        prop::collection::vec((0i64..48, 0i64..48), 0..8)
    }

    fn to_set(raw: &[(i64, i64)]) -> IntervalSet {
        IntervalSet::from_pairs(raw.iter().map(|&(a, b)| (q(a, 48), q(b, 48))))
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(raw in pieces_strategy()) {
            let s = to_set(&raw);
            prop_assert_eq!(IntervalSet::normalize(s.pieces().to_vec()), s.clone());
            for w in s.pieces().windows(2) {
                prop_assert!(w[0].right() < w[1].left());
            }
        }

        #[test]
        fn measure_is_additive(a in pieces_strategy(), b in pieces_strategy()) {
            let (a, b) = (to_set(&a), to_set(&b));
            let lhs = a.union(&b).measure() + a.intersection(&b).measure();
            prop_assert_eq!(lhs, a.measure() + b.measure());
        }

        #[test]
        fn hull_contains_every_piece(raw in pieces_strategy()) {
            let s = to_set(&raw);
            prop_assume!(!s.is_empty());
            let h = s.hull().unwrap();
            prop_assert!(s.pieces().iter().all(|p| h.contains_interval(p)));
            prop_assert!(s.pieces().iter().any(|p| p.left() == h.left()));
            prop_assert!(s.pieces().iter().any(|p| p.right() == h.right()));
        }

        #[test]
        fn membership_matches_pointwise_union(raw in pieces_strategy(), x in 0i64..96) {
            let s = to_set(&raw);
            let x = q(x, 96);
            let direct = raw.iter().any(|&(a, b)| q(a, 48) <= x && x < q(b, 48));
            prop_assert_eq!(s.contains(&x), direct);
        }
    }
}
