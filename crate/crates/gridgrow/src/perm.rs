//! Permutations, order isomorphism, pattern containment, and exact
//! enumeration of finite-basis avoidance classes.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Maximum pattern length accepted by the digit syntax (`Av(2143)` etc).
pub const MAX_PATTERN_DIGITS: usize = 9;

/// Default cap on the total number of entries stored across all
/// materialized avoider lists of one class (roughly 4 bytes each).
pub const DEFAULT_LIST_BUDGET: usize = 50_000_000;

/// A permutation of {1, ..., n} in one-line notation.
///
/// Length 0 (the empty permutation) is valid and is contained in every
/// permutation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    entries: Vec<u32>,
}

impl Permutation {
    /// Builds a permutation, checking that `entries` is a bijection of
    /// {1, ..., n}.
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        let n = entries.len();
        let mut seen = vec![false; n];
        for &v in &entries {
            if v == 0 || v as usize > n || seen[v as usize - 1] {
                return Err(Error::InvalidInput(format!(
                    "not a permutation of 1..{n}: {entries:?}"
                )));
            }
            seen[v as usize - 1] = true;
        }
        Ok(Self { entries })
    }

    pub fn empty() -> Self {
        Self { entries: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            entries: (1..=n as u32).collect(),
        }
    }

    pub fn decreasing(n: usize) -> Self {
        Self {
            entries: (1..=n as u32).rev().collect(),
        }
    }

    /// Parses one-line digit notation, e.g. `"231"`. Only lengths up to
    /// [`MAX_PATTERN_DIGITS`] are representable this way.
    pub fn from_digits(text: &str) -> Result<Self> {
        if text.chars().count() > MAX_PATTERN_DIGITS {
            return Err(Error::InvalidInput(format!(
                "pattern {text:?} longer than {MAX_PATTERN_DIGITS}; digit syntax stops there"
            )));
        }
        let mut entries = Vec::with_capacity(text.len());
        for ch in text.chars() {
            match ch.to_digit(10) {
                Some(d) if d >= 1 => entries.push(d),
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "pattern {text:?} must be digits 1-9"
                    )))
                }
            }
        }
        Self::new(entries)
    }

    /// The permutation order isomorphic to `values` (all distinct).
    pub fn standardize<T: PartialOrd>(values: &[T]) -> Result<Self> {
        let n = values.len();
        let mut idx: Vec<usize> = (0..n).collect();
        // sort_by with partial_cmp; detect ties/NaN separately below
        idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(Ordering::Equal));
        for w in idx.windows(2) {
            match values[w[0]].partial_cmp(&values[w[1]]) {
                Some(Ordering::Less) => {}
                _ => return Err(Error::RepeatedValues),
            }
        }
        let mut entries = vec![0u32; n];
        for (rank, &pos) in idx.iter().enumerate() {
            entries[pos] = rank as u32 + 1;
        }
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub(crate) fn from_entries_unchecked(entries: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(entries.clone()).is_ok());
        Self { entries }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "ε");
        }
        if self.entries.len() <= MAX_PATTERN_DIGITS {
            for &v in &self.entries {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let body = self
                .entries
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            write!(f, "{body}")
        }
    }
}

/// True iff `a` and `b` make the same pairwise comparisons.
///
/// Both sequences must consist of distinct, mutually comparable values;
/// repeated values are rejected with [`Error::RepeatedValues`].
pub fn order_isomorphic<T: PartialOrd>(a: &[T], b: &[T]) -> Result<bool> {
    if a.len() != b.len() {
        // still reject malformed input
        check_distinct(a)?;
        check_distinct(b)?;
        return Ok(false);
    }
    check_distinct(a)?;
    check_distinct(b)?;
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            let ca = a[i].partial_cmp(&a[j]).ok_or(Error::RepeatedValues)?;
            let cb = b[i].partial_cmp(&b[j]).ok_or(Error::RepeatedValues)?;
            if ca != cb {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn check_distinct<T: PartialOrd>(a: &[T]) -> Result<()> {
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            match a[i].partial_cmp(&a[j]) {
                Some(Ordering::Less) | Some(Ordering::Greater) => {}
                _ => return Err(Error::RepeatedValues),
            }
        }
    }
    Ok(())
}

/// True iff `host` has a subsequence order isomorphic to `pattern`.
pub fn contains(pattern: &Permutation, host: &Permutation) -> bool {
    contains_in_values(pattern, host.entries())
}

/// Containment check against a host given as raw distinct values
/// (not necessarily 1..n).
pub(crate) fn contains_in_values(pattern: &Permutation, host: &[u32]) -> bool {
    let k = pattern.len();
    let n = host.len();
    if k == 0 {
        return true;
    }
    if k > n {
        return false;
    }
    let p = pattern.entries();

    // For each pattern position i, the previous positions holding the
    // closest values below and above p[i]; these give the only value-window
    // constraints a new host entry must satisfy.
    let mut below = vec![usize::MAX; k];
    let mut above = vec![usize::MAX; k];
    for i in 0..k {
        for j in 0..i {
            if p[j] < p[i] && (below[i] == usize::MAX || p[j] > p[below[i]]) {
                below[i] = j;
            }
            if p[j] > p[i] && (above[i] == usize::MAX || p[j] < p[above[i]]) {
                above[i] = j;
            }
        }
    }

    // Backtracking over host positions, left to right in the pattern.
    let mut chosen = vec![0usize; k];
    fn search(
        i: usize,
        start: usize,
        p_len: usize,
        host: &[u32],
        below: &[usize],
        above: &[usize],
        chosen: &mut [usize],
    ) -> bool {
        let n = host.len();
        for pos in start..=(n - (p_len - i)) {
            let v = host[pos];
            let lo_ok = below[i] == usize::MAX || host[chosen[below[i]]] < v;
            let hi_ok = above[i] == usize::MAX || v < host[chosen[above[i]]];
            if lo_ok && hi_ok {
                chosen[i] = pos;
                if i + 1 == p_len
                    || search(i + 1, pos + 1, p_len, host, below, above, chosen)
                {
                    return true;
                }
            }
        }
        false
    }
    search(0, 0, k, host, &below, &above, &mut chosen)
}

/// A finite avoidance basis, normalized so that no pattern contains another.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Basis {
    patterns: Vec<Permutation>,
}

impl Basis {
    /// Normalizes on construction: duplicates and non-minimal patterns
    /// (those containing another basis pattern) are discarded.
    pub fn new(patterns: Vec<Permutation>) -> Result<Self> {
        if patterns.iter().any(Permutation::is_empty) {
            return Err(Error::InvalidInput(
                "basis patterns must have length >= 1".into(),
            ));
        }
        let mut sorted = patterns;
        sorted.sort();
        sorted.dedup();
        let mut minimal: Vec<Permutation> = Vec::with_capacity(sorted.len());
        for cand in sorted {
            if !minimal.iter().any(|kept| contains(kept, &cand)) {
                minimal.push(cand);
            }
        }
        Ok(Self { patterns: minimal })
    }

    pub fn single(pattern: Permutation) -> Result<Self> {
        Self::new(vec![pattern])
    }

    /// Parses `Av(231)` or `Av(2143,3412)`; whitespace is ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix("Av(")
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or_else(|| Error::InvalidInput(format!("expected Av(...), got {text:?}")))?;
        if inner.is_empty() {
            return Err(Error::InvalidInput(
                "empty basis: write at least one pattern inside Av(...)".into(),
            ));
        }
        let patterns = inner
            .split(',')
            .map(Permutation::from_digits)
            .collect::<Result<Vec<_>>>()?;
        Self::new(patterns)
    }

    pub fn patterns(&self) -> &[Permutation] {
        &self.patterns
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// True iff the basis forbids the single-point pattern, so the class
    /// is {ε}.
    pub fn forbids_everything(&self) -> bool {
        self.patterns.iter().any(|p| p.len() == 1)
    }

    /// True iff Av(basis) is finite: the basis contains both an increasing
    /// and a decreasing pattern, so long permutations always realize one.
    pub fn is_finite_class(&self) -> bool {
        let incr = self
            .patterns
            .iter()
            .any(|p| p.entries().windows(2).all(|w| w[0] < w[1]));
        let decr = self
            .patterns
            .iter()
            .any(|p| p.entries().windows(2).all(|w| w[0] > w[1]));
        incr && decr
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self
            .patterns
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",");
        write!(f, "Av({body})")
    }
}

impl fmt::Debug for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Basis({self})")
    }
}

/// True iff `host` avoids every pattern in `basis`.
pub fn avoids_all(basis: &Basis, host: &Permutation) -> bool {
    basis.patterns.iter().all(|p| !contains(p, host))
}

pub(crate) fn avoids_all_values(basis: &Basis, host: &[u32]) -> bool {
    basis.patterns.iter().all(|p| !contains_in_values(p, host))
}

/// Exact counts of a class by length, indexed 0..=N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountSequence {
    counts: Vec<BigUint>,
}

impl CountSequence {
    pub fn new(counts: Vec<BigUint>) -> Result<Self> {
        match counts.first() {
            Some(c0) if c0.is_one() => Ok(Self { counts }),
            _ => Err(Error::InvalidInput(
                "count sequence must start with counts[0] = 1".into(),
            )),
        }
    }

    pub fn get(&self, m: usize) -> Option<&BigUint> {
        self.counts.get(m)
    }

    pub fn max_len(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }
}

/// Incremental avoider enumeration for one basis, materializing the list of
/// avoiders per length.
///
/// Each avoider of length m+1 arises uniquely by inserting the value m+1
/// into a gap of an avoider of length m (deleting the maximum preserves
/// avoidance), so depth-first extension with containment pruning visits
/// every avoider exactly once.
pub struct AvEnumerator {
    basis: Basis,
    lists: Vec<Vec<Permutation>>,
    stored_entries: usize,
    budget: usize,
}

impl AvEnumerator {
    pub fn new(basis: Basis) -> Self {
        Self::with_budget(basis, DEFAULT_LIST_BUDGET)
    }

    pub fn with_budget(basis: Basis, budget: usize) -> Self {
        Self {
            basis,
            lists: vec![vec![Permutation::empty()]],
            stored_entries: 0,
            budget,
        }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    fn extend_to(&mut self, n: usize) -> Result<()> {
        while self.lists.len() <= n {
            let m = self.lists.len() - 1;
            let mut next = Vec::new();
            for perm in &self.lists[m] {
                for gap in 0..=m {
                    let mut entries = Vec::with_capacity(m + 1);
                    entries.extend_from_slice(&perm.entries()[..gap]);
                    entries.push(m as u32 + 1);
                    entries.extend_from_slice(&perm.entries()[gap..]);
                    let cand = Permutation::from_entries_unchecked(entries);
                    if avoids_all(&self.basis, &cand) {
                        next.push(cand);
                    }
                }
            }
            self.stored_entries += next.len() * (m + 1);
            if self.stored_entries > self.budget {
                return Err(Error::ResourceCap(format!(
                    "avoider lists for {} exceed the {}-entry budget at length {}",
                    self.basis,
                    self.budget,
                    m + 1
                )));
            }
            self.lists.push(next);
        }
        Ok(())
    }

    /// Counts of avoiders for every length 0..=n.
    pub fn counts(&mut self, n: usize) -> Result<CountSequence> {
        self.extend_to(n)?;
        let counts = self.lists[..=n]
            .iter()
            .map(|l| BigUint::from(l.len()))
            .collect();
        CountSequence::new(counts)
    }

    /// All avoiders of length `m`, in a fixed generation order.
    pub fn list(&mut self, m: usize) -> Result<&[Permutation]> {
        self.extend_to(m)?;
        Ok(&self.lists[m])
    }
}

/// Counts the permutations of each length 0..=n avoiding every basis
/// pattern, by incremental extension.
pub fn enumerate_av(basis: &Basis, n: usize) -> Result<CountSequence> {
    AvEnumerator::new(basis.clone()).counts(n)
}
