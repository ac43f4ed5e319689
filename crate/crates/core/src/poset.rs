//! Subset posets over a finite ground set `{1, …, n}`.
//!
//! Subsets are bitmasks (element `i` is bit `i - 1`). The canonical order on
//! subsets is by cardinality first and numeric bitmask second; every
//! enumeration in the crate uses it, so outputs are deterministic.
//!
//! A [`PosetView`] is a ground set plus a membership predicate:
//!
//! - `Full(n)`: all proper subsets of `{1..n}`;
//! - `Rel(V:U)`: all `X` with `U ⊆ X ⊊ V`;
//! - `Codim(n, k)`: all proper subsets with at least `k` elements;
//! - `Explicit`: an arbitrary list of subsets.
//!
//! Views are materialized on demand by [`PosetView::enumerate`].

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_GROUND: u8 = 30;

/// A subset of `{1, …, ground_n}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subset {
    ground_n: u8,
    bits: u32,
}

impl Subset {
    pub fn empty(ground_n: u8) -> Self {
        Subset { ground_n, bits: 0 }
    }

    /// Builds a subset from its members; each must lie in `1..=ground_n`.
    pub fn new(ground_n: u8, members: &[u8]) -> Result<Self> {
        check_ground(ground_n)?;
        let mut bits = 0u32;
        for &m in members {
            if m == 0 || m > ground_n {
                return Err(Error::Subset(format!(
                    "element {m} outside 1..={ground_n}"
                )));
            }
            bits |= 1 << (m - 1);
        }
        Ok(Subset { ground_n, bits })
    }

    pub fn from_bits(ground_n: u8, bits: u32) -> Result<Self> {
        check_ground(ground_n)?;
        if bits >> ground_n != 0 {
            return Err(Error::Subset(format!(
                "bitmask {bits:#b} has members outside 1..={ground_n}"
            )));
        }
        Ok(Subset { ground_n, bits })
    }

    /// `{1, …, k}` inside a ground set of size `ground_n`.
    pub fn initial(ground_n: u8, k: u8) -> Result<Self> {
        if k > ground_n {
            return Err(Error::Subset(format!("{{1..{k}}} exceeds ground {ground_n}")));
        }
        Self::from_bits(ground_n, low_mask(k))
    }

    /// The whole ground set.
    pub fn full(ground_n: u8) -> Result<Self> {
        Self::initial(ground_n, ground_n)
    }

    pub fn ground_n(&self) -> u8 {
        self.ground_n
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, element: u8) -> bool {
        element >= 1 && element <= self.ground_n && self.bits & (1 << (element - 1)) != 0
    }

    pub fn members(&self) -> Vec<u8> {
        (1..=self.ground_n).filter(|&i| self.contains(i)).collect()
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_proper_subset_of(&self, other: &Subset) -> bool {
        self.is_subset_of(other) && self.bits != other.bits
    }

    /// Whether this is a proper subset of the ground set.
    pub fn is_proper(&self) -> bool {
        self.bits != low_mask(self.ground_n)
    }

    pub fn union(&self, other: &Subset) -> Subset {
        Subset { ground_n: self.ground_n.max(other.ground_n), bits: self.bits | other.bits }
    }

    pub fn with(&self, element: u8) -> Result<Subset> {
        if element == 0 || element > self.ground_n {
            return Err(Error::Subset(format!(
                "element {element} outside 1..={}",
                self.ground_n
            )));
        }
        Ok(Subset { ground_n: self.ground_n, bits: self.bits | (1 << (element - 1)) })
    }

    pub fn without(&self, element: u8) -> Subset {
        if element == 0 || element > self.ground_n {
            return *self;
        }
        Subset { ground_n: self.ground_n, bits: self.bits & !(1 << (element - 1)) }
    }

    /// Elements of `other` not in `self`, ascending.
    pub fn missing_from(&self, other: &Subset) -> Vec<u8> {
        other.members().into_iter().filter(|&m| !self.contains(m)).collect()
    }

    /// Same members over a different ground set.
    pub fn regrounded(&self, ground_n: u8) -> Result<Subset> {
        Subset::from_bits(ground_n, self.bits)
    }

    /// Parses a literal such as `{1,3}` or `{}`.
    pub fn parse(ground_n: u8, literal: &str) -> Result<Subset> {
        let t = literal.trim();
        let inner = t
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("subset literal `{literal}` must look like {{1,2}}")))?;
        let mut members = Vec::new();
        for part in inner.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let m: u8 = part
                .parse()
                .map_err(|_| Error::Parse(format!("bad element `{part}` in `{literal}`")))?;
            members.push(m);
        }
        let mut sorted = members.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted != members {
            return Err(Error::Parse(format!(
                "subset literal `{literal}` must list distinct elements in ascending order"
            )));
        }
        Subset::new(ground_n, &members)
    }
}

fn low_mask(k: u8) -> u32 {
    if k >= 32 {
        u32::MAX
    } else {
        (1u32 << k) - 1
    }
}

fn check_ground(n: u8) -> Result<()> {
    if n == 0 || n > MAX_GROUND {
        return Err(Error::Subset(format!("ground size {n} outside 1..={MAX_GROUND}")));
    }
    Ok(())
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bits
            .count_ones()
            .cmp(&other.bits.count_ones())
            .then(self.bits.cmp(&other.bits))
            .then(self.ground_n.cmp(&other.ground_n))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members().iter().map(|m| m.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Subset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Adds `n` to a subset that does not contain it; the poset isomorphism
/// `𝔟(n−1) → 𝔟(n:{n})`.
pub fn alpha(x: &Subset, n: u8) -> Result<Subset> {
    if x.contains(n) {
        return Err(Error::Subset(format!("{n} already in {x}")));
    }
    x.with(n)
}

/// `U₊ = U ∪ {n}` for `n ∉ U`.
pub fn plus(u: &Subset, n: u8) -> Result<Subset> {
    alpha(u, n)
}

/// An edge of the Hasse diagram: `upper` has exactly one more element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CoverRelation {
    pub lower: Subset,
    pub upper: Subset,
}

impl fmt::Display for CoverRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}<{}", self.lower, self.upper)
    }
}

/// A square `bottom ⋖ left, right ⋖ top` with `left < right` canonically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Diamond {
    pub bottom: Subset,
    pub left: Subset,
    pub right: Subset,
    pub top: Subset,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ViewKind {
    Full,
    Rel { v: Subset, u: Subset },
    Codim { k: u8 },
    Explicit(Vec<Subset>),
}

/// A finite subposet of the subsets of `{1..ground_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PosetView {
    ground_n: u8,
    kind: ViewKind,
}

impl PosetView {
    /// 𝔟(n): all proper subsets of `{1..n}`.
    pub fn full(n: u8) -> Result<Self> {
        check_ground(n).map_err(|e| Error::MalformedView(e.to_string()))?;
        Ok(PosetView { ground_n: n, kind: ViewKind::Full })
    }

    /// 𝔟(V:U) = `{X | U ⊆ X ⊊ V}`. `V` may be the whole ground set.
    pub fn rel(v: Subset, u: Subset) -> Result<Self> {
        if v.ground_n != u.ground_n {
            return Err(Error::MalformedView(format!("{v} and {u} have different ground sets")));
        }
        if !u.is_proper_subset_of(&v) {
            return Err(Error::MalformedView(format!("Rel requires {u} ⊊ {v}")));
        }
        Ok(PosetView { ground_n: v.ground_n, kind: ViewKind::Rel { v, u } })
    }

    /// 𝔟(n,k): proper subsets with `|S| ≥ k`, `0 ≤ k < n`.
    pub fn codim(n: u8, k: u8) -> Result<Self> {
        check_ground(n).map_err(|e| Error::MalformedView(e.to_string()))?;
        if k >= n {
            return Err(Error::MalformedView(format!("Codim requires k < n (k={k}, n={n})")));
        }
        Ok(PosetView { ground_n: n, kind: ViewKind::Codim { k } })
    }

    /// An explicit list of proper subsets (duplicates are removed).
    pub fn explicit(n: u8, members: Vec<Subset>) -> Result<Self> {
        check_ground(n).map_err(|e| Error::MalformedView(e.to_string()))?;
        let mut members = members;
        for s in &members {
            if s.ground_n != n {
                return Err(Error::MalformedView(format!("{s} is over a different ground set")));
            }
            if !s.is_proper() {
                return Err(Error::MalformedView(format!("{s} is not a proper subset")));
            }
        }
        members.sort();
        members.dedup();
        Ok(PosetView { ground_n: n, kind: ViewKind::Explicit(members) })
    }

    pub fn ground_n(&self) -> u8 {
        self.ground_n
    }

    pub fn kind(&self) -> &ViewKind {
        &self.kind
    }

    pub fn contains(&self, s: &Subset) -> bool {
        if s.ground_n != self.ground_n {
            return false;
        }
        match &self.kind {
            ViewKind::Full => s.is_proper(),
            ViewKind::Rel { v, u } => u.is_subset_of(s) && s.is_proper_subset_of(v),
            ViewKind::Codim { k } => s.is_proper() && s.len() >= *k as usize,
            ViewKind::Explicit(list) => list.binary_search(s).is_ok(),
        }
    }

    /// All members, each once, in canonical order.
    pub fn enumerate(&self) -> Vec<Subset> {
        if let ViewKind::Explicit(list) = &self.kind {
            return list.clone();
        }
        let n = self.ground_n;
        let mut out: Vec<Subset> = (0..(1u32 << n))
            .map(|bits| Subset { ground_n: n, bits })
            .filter(|s| self.contains(s))
            .collect();
        out.sort();
        out
    }

    pub fn len(&self) -> usize {
        self.enumerate().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Hasse-diagram edges inside the view, in canonical order.
    pub fn covers(&self) -> Vec<CoverRelation> {
        let members = self.enumerate();
        let mut out = Vec::new();
        for s in &members {
            for t in &members {
                if s.is_proper_subset_of(t) && t.len() == s.len() + 1 {
                    out.push(CoverRelation { lower: *s, upper: *t });
                }
            }
        }
        out
    }

    /// All squares of covers inside the view.
    pub fn diamonds(&self) -> Vec<Diamond> {
        let members = self.enumerate();
        let mut out = Vec::new();
        for bottom in &members {
            for top in &members {
                if !(bottom.is_subset_of(top) && top.len() == bottom.len() + 2) {
                    continue;
                }
                let extra = bottom.missing_from(top);
                let a = bottom.with(extra[0]).expect("in ground");
                let b = bottom.with(extra[1]).expect("in ground");
                if !(self.contains(&a) && self.contains(&b)) {
                    continue;
                }
                let (left, right) = if a < b { (a, b) } else { (b, a) };
                out.push(Diamond { bottom: *bottom, left, right, top: *top });
            }
        }
        out.sort();
        out
    }

    /// Whether every member of `self` lies in `other`.
    pub fn is_subview_of(&self, other: &PosetView) -> bool {
        self.ground_n == other.ground_n && self.enumerate().iter().all(|s| other.contains(s))
    }
}

impl fmt::Display for PosetView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ViewKind::Full => write!(f, "Full({})", self.ground_n),
            ViewKind::Rel { v, u } => write!(f, "Rel({v}:{u})"),
            ViewKind::Codim { k } => write!(f, "Codim({},{k})", self.ground_n),
            ViewKind::Explicit(list) => {
                let parts: Vec<String> = list.iter().map(|s| s.to_string()).collect();
                write!(f, "Explicit[{}]", parts.join(", "))
            }
        }
    }
}

/// The decomposition 𝔟(n) = 𝔟(n−1) ⊔ 𝔟′(n−1) ⊔ {{1..n−1}}.
///
/// Returns the first two parts as views over the ground set `{1..n}` and
/// the top element `{1..n−1}`.
pub fn partition_b(n: u8) -> Result<(PosetView, PosetView, Subset)> {
    if n < 2 {
        return Err(Error::Precondition(format!("partition_b requires n ≥ 2, got {n}")));
    }
    let top = Subset::initial(n, n - 1)?;
    let lower = PosetView::rel(top, Subset::empty(n))?;
    let upper = PosetView::rel(Subset::full(n)?, Subset::new(n, &[n])?)?;
    Ok((lower, upper, top))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: u8, m: &[u8]) -> Subset {
        Subset::new(n, m).unwrap()
    }

    #[test]
    fn enumerate_full_two() {
        let v = PosetView::full(2).unwrap();
        assert_eq!(v.enumerate(), vec![s(2, &[]), s(2, &[1]), s(2, &[2])]);
    }

    #[test]
    fn enumerate_codim_two_one() {
        let v = PosetView::codim(2, 1).unwrap();
        assert_eq!(v.enumerate(), vec![s(2, &[1]), s(2, &[2])]);
    }

    #[test]
    fn enumerate_rel_views() {
        let v = PosetView::rel(s(2, &[1, 2]), s(2, &[])).unwrap();
        assert_eq!(v.enumerate(), vec![s(2, &[]), s(2, &[1]), s(2, &[2])]);
        let v = PosetView::rel(s(2, &[1, 2]), s(2, &[1])).unwrap();
        assert_eq!(v.enumerate(), vec![s(2, &[1])]);
    }

    #[test]
    fn malformed_views() {
        assert!(PosetView::codim(3, 3).is_err());
        assert!(PosetView::rel(s(3, &[1]), s(3, &[2])).is_err());
        assert!(PosetView::rel(s(3, &[1]), s(3, &[1])).is_err());
        assert!(PosetView::full(0).is_err());
    }

    #[test]
    fn partition_small_cases() {
        let (a, b, top) = partition_b(3).unwrap();
        assert_eq!(a.enumerate(), vec![s(3, &[]), s(3, &[1]), s(3, &[2])]);
        assert_eq!(b.enumerate(), vec![s(3, &[3]), s(3, &[1, 3]), s(3, &[2, 3])]);
        assert_eq!(top, s(3, &[1, 2]));

        let (a, b, top) = partition_b(2).unwrap();
        assert_eq!(a.enumerate(), vec![s(2, &[])]);
        assert_eq!(b.enumerate(), vec![s(2, &[2])]);
        assert_eq!(top, s(2, &[1]));
        assert!(partition_b(1).is_err());
    }

    #[test]
    fn alpha_and_plus() {
        assert_eq!(alpha(&s(3, &[1]), 3).unwrap(), s(3, &[1, 3]));
        assert_eq!(alpha(&s(2, &[]), 2).unwrap(), s(2, &[2]));
        assert!(s(3, &[]).is_subset_of(&s(3, &[1])));
        assert!(alpha(&s(3, &[]), 3).unwrap().is_subset_of(&alpha(&s(3, &[1]), 3).unwrap()));
        assert_eq!(plus(&s(4, &[2]), 4).unwrap(), s(4, &[2, 4]));
        assert_eq!(plus(&s(2, &[]), 2).unwrap(), s(2, &[2]));
        assert!(plus(&s(4, &[2, 4]), 4).is_err());
    }

    #[test]
    fn cover_examples() {
        let c = PosetView::full(2).unwrap().covers();
        assert_eq!(
            c,
            vec![
                CoverRelation { lower: s(2, &[]), upper: s(2, &[1]) },
                CoverRelation { lower: s(2, &[]), upper: s(2, &[2]) },
            ]
        );
        let c = PosetView::rel(s(3, &[1, 2, 3]), s(3, &[3])).unwrap().covers();
        assert_eq!(
            c,
            vec![
                CoverRelation { lower: s(3, &[3]), upper: s(3, &[1, 3]) },
                CoverRelation { lower: s(3, &[3]), upper: s(3, &[2, 3]) },
            ]
        );
    }

    #[test]
    fn cover_count_full_three_matches_pair_enumeration() {
        // brute force: every pair of proper subsets differing by one element
        let mut count = 0;
        for a in 0u32..7 {
            for b in 0u32..7 {
                if a & !b == 0 && b.count_ones() == a.count_ones() + 1 {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 9);
        assert_eq!(PosetView::full(3).unwrap().covers().len(), count);
    }

    #[test]
    fn literal_round_trip() {
        for lit in ["{}", "{1}", "{1,3}", "{2,3,4}"] {
            assert_eq!(Subset::parse(4, lit).unwrap().to_string(), lit);
        }
        assert!(Subset::parse(4, "{3,1}").is_err());
        assert!(Subset::parse(4, "{5}").is_err());
        assert!(Subset::parse(4, "1,2").is_err());
    }

    #[test]
    fn diamonds_of_full_three() {
        let d = PosetView::full(3).unwrap().diamonds();
        // bottoms ∅ with tops of size 2: three squares
        assert_eq!(d.len(), 3);
        assert!(d.iter().all(|q| q.bottom.is_empty() && q.top.len() == 2));
    }
}
