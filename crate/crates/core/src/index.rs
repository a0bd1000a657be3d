//! Multi-index combinatorics.
//!
//! A [`MultiIndex`] is a tuple `i = (i_1, ..., i_m)` of variable indices in
//! `1..=n`; the set of all of them is `M(m, n)`. Two tuples are equivalent
//! when one is a rearrangement of the other, and every class has exactly one
//! nondecreasing representative, a [`CanonicalIndex`]. The canonical indices
//! form `J(m, n)` and are in bijection with exponent vectors `alpha` of
//! degree `m` in `n` variables.
//!
//! All positions and variable indices are 1-based.

use std::fmt;
use std::ops::Deref;

use crate::error::{invalid, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    entries: Vec<usize>,
    n: usize,
}

impl MultiIndex {
    pub fn new(entries: Vec<usize>, n: usize) -> Result<Self> {
        if entries.is_empty() {
            return invalid("multi-index must have degree m >= 1");
        }
        if n == 0 {
            return invalid("dimension n must be >= 1");
        }
        if let Some(&bad) = entries.iter().find(|&&e| e == 0 || e > n) {
            return invalid(format!("entry {bad} outside 1..={n}"));
        }
        Ok(Self { entries, n })
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn degree(&self) -> usize {
        self.entries.len()
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn is_canonical(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] <= w[1])
    }

    /// The nondecreasing representative of the class `[i]`.
    pub fn canonical(&self) -> CanonicalIndex {
        let mut entries = self.entries.clone();
        entries.sort_unstable();
        CanonicalIndex(MultiIndex { entries, n: self.n })
    }

    /// `|i|`, the number of distinct rearrangements of `i`.
    pub fn multiplicity(&self) -> Result<u64> {
        multinomial(&self.counts())
    }

    /// Repetition count of each variable `1..=n` (the exponent vector).
    fn counts(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.n];
        for &e in &self.entries {
            counts[e - 1] += 1;
        }
        counts
    }

    /// `i^k`: drop the entry at 1-based position `k`.
    pub fn remove_coordinate(&self, k: usize) -> Result<MultiIndex> {
        let m = self.degree();
        if m < 2 {
            return invalid("cannot remove a coordinate from a degree-1 index");
        }
        if k == 0 || k > m {
            return invalid(format!("position {k} outside 1..={m}"));
        }
        let mut entries = self.entries.clone();
        entries.remove(k - 1);
        Ok(MultiIndex { entries, n: self.n })
    }

    /// Insert variable `d` so that it lands at 1-based position `k`.
    pub fn insert_coordinate(&self, k: usize, d: usize) -> Result<MultiIndex> {
        if k == 0 || k > self.degree() + 1 {
            return invalid(format!("position {k} outside 1..={}", self.degree() + 1));
        }
        if d == 0 || d > self.n {
            return invalid(format!("variable {d} outside 1..={}", self.n));
        }
        let mut entries = self.entries.clone();
        entries.insert(k - 1, d);
        Ok(MultiIndex { entries, n: self.n })
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// A multi-index with nondecreasing entries; an element of `J(m, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalIndex(MultiIndex);

impl CanonicalIndex {
    pub fn new(entries: Vec<usize>, n: usize) -> Result<Self> {
        let idx = MultiIndex::new(entries, n)?;
        if !idx.is_canonical() {
            return invalid(format!("{idx} is not nondecreasing"));
        }
        Ok(Self(idx))
    }

    pub fn as_multi(&self) -> &MultiIndex {
        &self.0
    }

    pub fn to_exponent(&self) -> ExponentVector {
        ExponentVector { alpha: self.0.counts() }
    }

    /// Inverse of [`CanonicalIndex::to_exponent`]; `m` is the expected degree.
    pub fn from_exponent(alpha: &ExponentVector, m: usize) -> Result<Self> {
        if alpha.degree() != m {
            return invalid(format!(
                "exponent vector has degree {} but {m} was expected",
                alpha.degree()
            ));
        }
        Self::try_from(alpha)
    }

    /// All distinct rearrangements of this index, lexicographic order.
    pub fn permutations(&self) -> DistinctPermutations {
        DistinctPermutations::new(self.0.entries.clone())
    }
}

impl Deref for CanonicalIndex {
    type Target = MultiIndex;

    fn deref(&self) -> &MultiIndex {
        &self.0
    }
}

impl fmt::Display for CanonicalIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<&ExponentVector> for CanonicalIndex {
    type Error = Error;

    fn try_from(alpha: &ExponentVector) -> Result<Self> {
        let n = alpha.alpha.len();
        let mut entries = Vec::with_capacity(alpha.degree());
        for (k, &a) in alpha.alpha.iter().enumerate() {
            entries.extend(std::iter::repeat_n(k + 1, a as usize));
        }
        Ok(Self(MultiIndex::new(entries, n)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector {
    pub alpha: Vec<u32>,
}

impl ExponentVector {
    pub fn new(alpha: Vec<u32>) -> Self {
        Self { alpha }
    }

    pub fn degree(&self) -> usize {
        self.alpha.iter().map(|&a| a as usize).sum()
    }

    pub fn dimension(&self) -> usize {
        self.alpha.len()
    }

    /// `m! / prod(alpha_k!)`.
    pub fn multinomial(&self) -> Result<u64> {
        multinomial(&self.alpha)
    }
}

/// Exact binomial coefficient with overflow detection.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // acc * (n - k + i) / i stays integral at every step
        acc = acc
            .checked_mul((n - k + i) as u128)
            .ok_or_else(|| Error::Overflow(format!("binomial({n}, {k})")))?
            / i as u128;
    }
    u64::try_from(acc).map_err(|_| Error::Overflow(format!("binomial({n}, {k})")))
}

/// `(sum r_k)! / prod(r_k!)` as a product of binomials.
pub fn multinomial(counts: &[u32]) -> Result<u64> {
    let mut total: u64 = 0;
    let mut acc: u64 = 1;
    for &r in counts {
        total += r as u64;
        acc = acc
            .checked_mul(binomial(total, r as u64)?)
            .ok_or_else(|| Error::Overflow(format!("multinomial of {counts:?}")))?;
    }
    Ok(acc)
}

/// `|J(m, n)| = C(n + m - 1, m)`, the number of monomials of degree `m` in
/// `n` variables.
pub fn dimension_count(m: usize, n: usize) -> Result<u64> {
    if m == 0 || n == 0 {
        return invalid("dimension_count requires m, n >= 1");
    }
    binomial((n + m - 1) as u64, m as u64)
}

/// `J(m, n)` in lexicographic order.
pub fn enumerate_j(m: usize, n: usize) -> Result<Vec<CanonicalIndex>> {
    if m == 0 || n == 0 {
        return invalid("enumerate_j requires m, n >= 1");
    }
    let count = dimension_count(m, n)?;
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = vec![1usize; m];
    loop {
        out.push(CanonicalIndex(MultiIndex { entries: cur.clone(), n }));
        // rightmost entry that can still grow
        let Some(pos) = cur.iter().rposition(|&e| e < n) else {
            break;
        };
        let next = cur[pos] + 1;
        for e in &mut cur[pos..] {
            *e = next;
        }
    }
    Ok(out)
}

/// Iterator over the distinct permutations of a multiset, in lexicographic
/// order starting from the sorted arrangement.
pub struct DistinctPermutations {
    current: Option<Vec<usize>>,
}

impl DistinctPermutations {
    pub fn new(mut items: Vec<usize>) -> Self {
        items.sort_unstable();
        Self { current: Some(items) }
    }
}

impl Iterator for DistinctPermutations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.take()?;
        let mut next = cur.clone();
        if next_permutation(&mut next) {
            self.current = Some(next);
        }
        Some(cur)
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v.iter().rposition(|&x| x > v[i]).expect("pivot has a successor");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}
