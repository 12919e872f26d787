//! Finite ground sets and binary relations stored as packed bit rows.
//!
//! A relation `R ⊆ Y×X` has one row per target element `y`; bit `x` of row
//! `y` is set iff `(y,x) ∈ R`. Composition is the boolean matrix product.

use std::fmt;

use crate::error::{Error, Result};

/// Ordered list of distinct element names. Indices are what the algorithms use.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    labels: Vec<String>,
}

impl GroundSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::validation(format!("duplicate label {l:?}")));
            }
        }
        Ok(GroundSet { labels })
    }

    /// `{0, 1, ..., n-1}` labelled by decimal indices.
    pub fn indexed(n: usize) -> Self {
        GroundSet { labels: (0..n).map(|i| i.to_string()).collect() }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// A subset of `target × source`, row-major over targets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    target: usize,
    source: usize,
    words: usize,
    bits: Vec<u64>,
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation({}←{}) ", self.target, self.source)?;
        f.debug_set().entries(self.pairs()).finish()
    }
}

/// Flags returned by [`Relation::classify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub reflexive: bool,
    pub transitive: bool,
    pub antisymmetric: bool,
    pub is_preorder: bool,
    pub is_order: bool,
}

impl Relation {
    pub fn empty(target: usize, source: usize) -> Self {
        let words = words_for(source);
        Relation { target, source, words, bits: vec![0; words * target] }
    }

    pub fn full(target: usize, source: usize) -> Self {
        let mut r = Self::empty(target, source);
        for y in 0..target {
            for x in 0..source {
                r.insert(y, x);
            }
        }
        r
    }

    /// The diagonal `Δ_X`.
    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n, n);
        for i in 0..n {
            r.insert(i, i);
        }
        r
    }

    /// Builds a relation from `(y, x)` pairs, target first.
    pub fn from_pairs(
        target: usize,
        source: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut r = Self::empty(target, source);
        for (y, x) in pairs {
            if y >= target || x >= source {
                return Err(Error::validation(format!(
                    "pair ({y},{x}) outside {target}×{source}"
                )));
            }
            r.insert(y, x);
        }
        Ok(r)
    }

    /// Relation whose `y`-th row is the bitmask `rows[y]` (requires `source ≤ 64`).
    pub fn from_row_masks(source: usize, rows: &[u64]) -> Self {
        assert!(source <= 64);
        let mut r = Self::empty(rows.len(), source);
        if r.words == 1 {
            let keep = if source == 64 { u64::MAX } else { (1u64 << source) - 1 };
            for (y, &m) in rows.iter().enumerate() {
                r.bits[y] = m & keep;
            }
        }
        r
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn source(&self) -> usize {
        self.source
    }

    #[inline]
    pub fn contains(&self, y: usize, x: usize) -> bool {
        (self.bits[y * self.words + x / 64] >> (x % 64)) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, y: usize, x: usize) {
        self.bits[y * self.words + x / 64] |= 1 << (x % 64);
    }

    #[inline]
    pub fn remove(&mut self, y: usize, x: usize) {
        self.bits[y * self.words + x / 64] &= !(1 << (x % 64));
    }

    #[inline]
    pub fn row(&self, y: usize) -> &[u64] {
        &self.bits[y * self.words..(y + 1) * self.words]
    }

    /// Row `y` as a single mask; only valid when `source ≤ 64`.
    #[inline]
    pub fn row_mask(&self, y: usize) -> u64 {
        debug_assert!(self.source <= 64);
        if self.words == 0 {
            0
        } else {
            self.bits[y]
        }
    }

    /// Sources related to `y`, ascending.
    pub fn row_iter(&self, y: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(y).iter().enumerate().flat_map(|(w, &word)| BitIter(word).map(move |b| w * 64 + b))
    }

    /// All pairs `(y, x)` in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.target).flat_map(move |y| self.row_iter(y).map(move |x| (y, x)))
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    fn same_shape(&self, other: &Relation) -> bool {
        self.target == other.target && self.source == other.source
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.same_shape(other) && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        if !self.same_shape(other) {
            return Err(Error::validation("union of relations with different shapes"));
        }
        let mut r = self.clone();
        for (a, b) in r.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
        Ok(r)
    }

    /// `RS`: `(z,x) ∈ RS` iff `(z,y) ∈ R` and `(y,x) ∈ S` for some `y`.
    pub fn compose(&self, s: &Relation) -> Result<Relation> {
        if self.source != s.target {
            return Err(Error::validation(format!(
                "cannot compose {}←{} with {}←{}",
                self.target, self.source, s.target, s.source
            )));
        }
        let mut out = Relation::empty(self.target, s.source);
        let w = out.words;
        for z in 0..self.target {
            let dst = z * w;
            for y in self.row_iter(z) {
                let src = s.row(y);
                for k in 0..w {
                    out.bits[dst + k] |= src[k];
                }
            }
        }
        Ok(out)
    }

    pub fn opposite(&self) -> Relation {
        let mut out = Relation::empty(self.source, self.target);
        for (y, x) in self.pairs() {
            out.insert(x, y);
        }
        out
    }

    pub fn is_square(&self) -> bool {
        self.target == self.source
    }

    pub fn classify(&self) -> Result<Classification> {
        if !self.is_square() {
            return Err(Error::validation("classify needs a relation on one set"));
        }
        let n = self.target;
        let reflexive = (0..n).all(|i| self.contains(i, i));
        let transitive = self.compose(self)?.is_subset(self);
        let antisymmetric = self.pairs().all(|(a, b)| a == b || !self.contains(b, a));
        let is_preorder = reflexive && transitive;
        Ok(Classification {
            reflexive,
            transitive,
            antisymmetric,
            is_preorder,
            is_order: is_preorder && antisymmetric,
        })
    }

    /// Collapses the equivalence `x∼y ⇔ xRy ∧ yRx`. Classes are numbered by
    /// first occurrence; returns the induced order and the projection.
    pub fn preorder_quotient(&self) -> Result<(Relation, Vec<usize>)> {
        if !self.classify()?.is_preorder {
            return Err(Error::validation("relation is not a preorder"));
        }
        let n = self.target;
        let mut proj = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for i in 0..n {
            if proj[i] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(i);
            for j in i..n {
                if self.contains(i, j) && self.contains(j, i) {
                    proj[j] = c;
                }
            }
        }
        let k = reps.len();
        let mut q = Relation::empty(k, k);
        for a in 0..k {
            for b in 0..k {
                if self.contains(reps[a], reps[b]) {
                    q.insert(a, b);
                }
            }
        }
        Ok((q, proj))
    }
}

/// Iterates the set bits of a word, ascending.
#[derive(Clone, Copy)]
pub struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// A bijection of `{0..n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::validation(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Permutation { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `Δ_σ = {(σ(x), x)}`.
    pub fn delta(&self) -> Relation {
        let n = self.len();
        let mut r = Relation::empty(n, n);
        for (x, &y) in self.images.iter().enumerate() {
            r.insert(y, x);
        }
        r
    }

    /// All permutations of `{0..n-1}` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut cur: Vec<usize> = (0..n).collect();
        let mut out = vec![Permutation { images: cur.clone() }];
        // next_permutation
        loop {
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
            out.push(Permutation { images: cur.clone() });
        }
        out
    }
}

/// `Δ_σ R Δ_{σ⁻¹}`, i.e. `{(σa, σb) | (a,b) ∈ R}`.
pub fn conjugate(sigma: &Permutation, r: &Relation) -> Result<Relation> {
    sigma.delta().compose(r)?.compose(&sigma.inverse().delta())
}
