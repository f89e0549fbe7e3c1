//! Finite multisets over the positive integers.
//!
//! A [`Multiset`] indexes monomials of all three functor families: the
//! multiset `{1,1,2}` is `e1^2*e2` in a symmetric power and `e1[2]*e2[1]` in a
//! divided power. Every row and column order downstream is derived from the
//! canonical order defined here, so enumeration results are deterministic.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest ground element accepted by the parser and the enumerators.
pub const DEFAULT_ELEMENT_CAP: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultisetError {
    #[error("ground elements must be positive, got 0")]
    ZeroElement,
    #[error("ground element {element} exceeds the cap {cap}")]
    ElementOutOfRange { element: u32, cap: u32 },
    #[error("degree 0 is not allowed")]
    ZeroDegree,
    #[error("cannot parse multiset from {0:?}")]
    Parse(String),
}

/// A finite multiset of positive integers, stored as `(element, degree)`
/// pairs with strictly increasing elements and positive degrees.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Multiset {
    entries: Vec<(u32, u32)>,
}

impl Multiset {
    pub fn new() -> Self {
        Self { entries: Vec::new() }
    }

    /// Builds a multiset from `(element, degree)` pairs. Pairs for the same
    /// element are merged and zero degrees are dropped.
    pub fn from_degrees<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Result<Self, MultisetError> {
        let mut entries: Vec<(u32, u32)> = Vec::new();
        for (element, degree) in pairs {
            if element == 0 {
                return Err(MultisetError::ZeroElement);
            }
            if element > DEFAULT_ELEMENT_CAP {
                return Err(MultisetError::ElementOutOfRange { element, cap: DEFAULT_ELEMENT_CAP });
            }
            if degree == 0 {
                continue;
            }
            entries.push((element, degree));
        }
        entries.sort_unstable();
        entries.dedup_by(|next, prev| {
            if next.0 == prev.0 {
                prev.1 += next.1;
                true
            } else {
                false
            }
        });
        Ok(Self { entries })
    }

    /// Builds a multiset from a list of elements, repetitions counting as degree.
    pub fn from_elements<I: IntoIterator<Item = u32>>(elements: I) -> Result<Self, MultisetError> {
        Self::from_degrees(elements.into_iter().map(|e| (e, 1)))
    }

    /// `{1, 2, ..., k}`.
    pub fn range(k: u32) -> Self {
        Self { entries: (1..=k).map(|e| (e, 1)).collect() }
    }

    /// The distinct elements in increasing order.
    pub fn support(&self) -> Vec<u32> {
        self.entries.iter().map(|&(e, _)| e).collect()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// Number of elements counted with multiplicity.
    pub fn cardinality(&self) -> usize {
        self.entries.iter().map(|&(_, d)| d as usize).sum()
    }

    pub fn degree(&self, element: u32) -> u32 {
        match self.entries.binary_search_by_key(&element, |&(e, _)| e) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True when every degree is 1, i.e. the multiset is an ordinary set.
    pub fn is_strict(&self) -> bool {
        self.entries.iter().all(|&(_, d)| d == 1)
    }

    /// True when the support is exactly `{1, ..., k}`.
    pub fn has_support_range(&self, k: usize) -> bool {
        self.entries.len() == k && self.entries.iter().enumerate().all(|(i, &(e, _))| e as usize == i + 1)
    }

    /// Largest element, or 0 for the empty multiset.
    pub fn max_element(&self) -> u32 {
        self.entries.last().map_or(0, |&(e, _)| e)
    }

    /// `(element, degree)` pairs in increasing element order.
    pub fn entries(&self) -> &[(u32, u32)] {
        &self.entries
    }

    /// Elements repeated according to degree, in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().flat_map(|&(e, d)| std::iter::repeat_n(e, d as usize))
    }

    /// Multiset union adding degrees.
    pub fn sum(&self, other: &Multiset) -> Multiset {
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            let (a, b) = (self.entries[i], other.entries[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    entries.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    entries.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    entries.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        entries.extend_from_slice(&self.entries[i..]);
        entries.extend_from_slice(&other.entries[j..]);
        Multiset { entries }
    }

    /// Adds one copy of `element`.
    pub fn insert(&mut self, element: u32) {
        match self.entries.binary_search_by_key(&element, |&(e, _)| e) {
            Ok(i) => self.entries[i].1 += 1,
            Err(i) => self.entries.insert(i, (element, 1)),
        }
    }

    // Used by the enumerators, which guarantee sorted positive input.
    fn from_sorted_unchecked(entries: Vec<(u32, u32)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|&(e, d)| e > 0 && d > 0));
        Self { entries }
    }
}

/// Lexicographic order on the sorted element list, so `{1,1,2} < {1,2,2}`
/// and `{1,1,1} < {1,1,2} < {1,2,3}`.
impl Ord for Multiset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elements().cmp(other.elements())
    }
}

impl PartialOrd for Multiset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Renders as `1^3 2^1`; the empty multiset renders as `{}`.
impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "{{}}");
        }
        for (i, &(e, d)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{e}^{d}")?;
        }
        Ok(())
    }
}

/// Accepts `1^3 2^1`, `1^3 2`, the element list `1,1,1,2`, and `{}` or the
/// empty string for the empty multiset. Braces around either form are ignored.
impl FromStr for Multiset {
    type Err = MultisetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
        if body.is_empty() {
            return Ok(Multiset::new());
        }
        let bad = || MultisetError::Parse(s.to_string());
        let parse_u32 = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
        if body.contains(',') {
            let elements = body.split(',').map(parse_u32).collect::<Result<Vec<_>, _>>()?;
            return Multiset::from_elements(elements);
        }
        let mut pairs = Vec::new();
        for token in body.split_whitespace() {
            let (e, d) = match token.split_once('^') {
                Some((e, d)) => (parse_u32(e)?, parse_u32(d)?),
                None => (parse_u32(token)?, 1),
            };
            if d == 0 {
                return Err(MultisetError::ZeroDegree);
            }
            pairs.push((e, d));
        }
        Multiset::from_degrees(pairs)
    }
}

/// All multisets whose support is exactly `supp` and whose cardinality is
/// `card`, in canonical order. Returns an empty list when `card < supp.len()`.
///
/// `supp` must be strictly increasing and positive.
pub fn enumerate_with_support_and_card(supp: &[u32], card: usize) -> Vec<Multiset> {
    debug_assert!(supp.windows(2).all(|w| w[0] < w[1]));
    let parts = supp.len();
    if parts == 0 {
        return if card == 0 { vec![Multiset::new()] } else { Vec::new() };
    }
    if card < parts {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut degrees = vec![0u32; parts];
    compositions(card, 0, &mut degrees, &mut |degs| {
        out.push(Multiset::from_sorted_unchecked(supp.iter().copied().zip(degs.iter().copied()).collect()));
    });
    // Compositions come out with the first degree descending, which is
    // exactly increasing element-list order.
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    out
}

fn compositions(remaining: usize, pos: usize, degrees: &mut [u32], emit: &mut dyn FnMut(&[u32])) {
    let left_after = degrees.len() - pos - 1;
    if left_after == 0 {
        degrees[pos] = remaining as u32;
        emit(degrees);
        return;
    }
    for d in (1..=remaining - left_after).rev() {
        degrees[pos] = d as u32;
        compositions(remaining - d, pos + 1, degrees, emit);
    }
}

/// All integer partitions of `m`, largest parts first, in reverse
/// lexicographic order (`[m]` first, `[1; m]` last).
pub fn integer_partitions(m: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            current.push(part);
            rec(remaining - part, part, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, m, &mut Vec::new(), &mut out);
    out
}

/// One multiset `{1^λ1, 2^λ2, ...}` per partition `λ` of `m`, starting
/// with `{1^m}`.
pub fn partition_representatives(m: usize) -> Result<Vec<Multiset>, MultisetError> {
    if m == 0 {
        return Err(MultisetError::ZeroDegree);
    }
    if m > DEFAULT_ELEMENT_CAP as usize {
        return Err(MultisetError::ElementOutOfRange { element: m as u32, cap: DEFAULT_ELEMENT_CAP });
    }
    let mut reps: Vec<Multiset> = integer_partitions(m)
        .into_iter()
        .map(|parts| {
            Multiset::from_sorted_unchecked(
                parts.into_iter().enumerate().map(|(i, d)| (i as u32 + 1, d as u32)).collect(),
            )
        })
        .collect();
    reps.sort();
    Ok(reps)
}
