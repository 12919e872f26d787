//! Finite posets: ideals, bounds, Möbius function, automorphisms.
//!
//! Subsets of a poset are `u64` bitmasks, so mask-valued operations need
//! at most 64 elements. Pointwise queries work at any size.

use crate::error::{Error, Result};
use crate::relation::{BitIter, GroundSet, Permutation, Relation};

pub const DEFAULT_AUT_BOUND: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    elements: GroundSet,
    leq: Relation,
    geq: Relation,
}

impl Poset {
    /// `leq` must satisfy `(a,b) ∈ leq ⇔ a ≤ b` and be an order.
    pub fn new(elements: GroundSet, leq: Relation) -> Result<Self> {
        let n = elements.len();
        if leq.target() != n || leq.source() != n {
            return Err(Error::validation("order relation does not match the element count"));
        }
        if !leq.classify()?.is_order {
            return Err(Error::validation("relation is not an order"));
        }
        let geq = leq.opposite();
        Ok(Poset { elements, leq, geq })
    }

    /// Pairs `a ≤ b`; the reflexive closure is added, transitivity is checked.
    pub fn from_pairs(elements: GroundSet, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = elements.len();
        let mut leq = Relation::from_pairs(n, n, pairs.iter().copied())?;
        for i in 0..n {
            leq.insert(i, i);
        }
        let c = leq.classify()?;
        if !c.transitive {
            return Err(Error::validation("order relation is not transitive"));
        }
        if !c.antisymmetric {
            return Err(Error::validation("order relation is not antisymmetric"));
        }
        Poset::new(elements, leq)
    }

    /// Reflexive-transitive closure of the given cover pairs `a < b`.
    pub fn from_covers(elements: GroundSet, covers: &[(usize, usize)]) -> Result<Self> {
        let n = elements.len();
        let mut leq = Relation::from_pairs(n, n, covers.iter().copied())?;
        for i in 0..n {
            leq.insert(i, i);
        }
        loop {
            let next = leq.compose(&leq)?;
            if next == leq {
                break;
            }
            leq = next;
        }
        Poset::new(elements, leq)
    }

    pub fn antichain(n: usize) -> Self {
        Poset::new(GroundSet::indexed(n), Relation::identity(n)).unwrap()
    }

    /// `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Self {
        let mut leq = Relation::empty(n, n);
        for a in 0..n {
            for b in a..n {
                leq.insert(a, b);
            }
        }
        Poset::new(GroundSet::indexed(n), leq).unwrap()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &GroundSet {
        &self.elements
    }

    pub fn label(&self, i: usize) -> &str {
        self.elements.label(i)
    }

    /// The order as a relation: `(a,b)` present iff `a ≤ b`.
    pub fn relation(&self) -> &Relation {
        &self.leq
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq.contains(a, b)
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    /// `[a,·[` as a mask.
    #[inline]
    pub fn up_mask(&self, a: usize) -> u64 {
        self.leq.row_mask(a)
    }

    /// `]·,a]` as a mask.
    #[inline]
    pub fn down_mask(&self, a: usize) -> u64 {
        self.geq.row_mask(a)
    }

    pub fn full_mask(&self) -> u64 {
        mask_of_len(self.len())
    }

    pub fn opposite(&self) -> Poset {
        Poset { elements: self.elements.clone(), leq: self.geq.clone(), geq: self.leq.clone() }
    }

    /// Full subposet on `keep` (in the given order), with the original labels.
    pub fn subposet(&self, keep: &[usize]) -> Poset {
        let labels = keep.iter().map(|&i| self.label(i).to_string());
        let elements = GroundSet::new(labels).expect("subposet labels are distinct");
        let k = keep.len();
        let mut leq = Relation::empty(k, k);
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                if self.leq(a, b) {
                    leq.insert(i, j);
                }
            }
        }
        Poset::new(elements, leq).expect("restriction of an order is an order")
    }

    /// Elements sorted so that `a < b` implies `a` comes first.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        let below: Vec<usize> = idx.iter().map(|&a| self.geq.row_iter(a).count()).collect();
        idx.sort_by_key(|&a| (below[a], a));
        idx
    }

    /// Covering pairs `a ⋖ b`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    fn check_mask_size(&self) {
        assert!(self.len() <= 64, "mask operations need at most 64 elements");
    }

    pub fn is_lower_ideal(&self, a: u64) -> bool {
        BitIter(a).all(|e| self.down_mask(e) & !a == 0)
    }

    /// Every lower ideal, sorted by (size, mask), plus the index of each
    /// principal ideal `]·,e]` in that list.
    pub fn lower_ideals(&self) -> Ideals {
        self.check_mask_size();
        let order = self.linear_extension();
        let mut masks = Vec::new();
        let mut stack = vec![(0usize, 0u64)];
        while let Some((depth, cur)) = stack.pop() {
            if depth == order.len() {
                masks.push(cur);
                continue;
            }
            let e = order[depth];
            stack.push((depth + 1, cur));
            let strict_below = self.down_mask(e) & !(1u64 << e);
            if strict_below & !cur == 0 {
                stack.push((depth + 1, cur | (1u64 << e)));
            }
        }
        masks.sort_by_key(|&m| (m.count_ones(), m));
        let principal = (0..self.len())
            .map(|e| masks.binary_search_by_key(&key(self.down_mask(e)), |&m| key(m)).unwrap())
            .collect();
        Ideals { masks, principal }
    }

    /// `(Ub A, Lb A)`.
    pub fn bounds(&self, a: u64) -> (u64, u64) {
        self.check_mask_size();
        let mut ub = self.full_mask();
        let mut lb = self.full_mask();
        for e in BitIter(a) {
            ub &= self.up_mask(e);
            lb &= self.down_mask(e);
        }
        (ub, lb)
    }

    /// Fresh Möbius table for this poset.
    pub fn mobius_table(&self) -> MobiusTable {
        MobiusTable::new(self)
    }

    /// `μ(a,b)`; zero unless `a ≤ b`.
    pub fn mobius(&self, a: usize, b: usize) -> i64 {
        if !self.leq(a, b) {
            return 0;
        }
        // μ(a,z) for z in [a,b], filled along a linear extension.
        let order = self.linear_extension();
        let mut mu = vec![0i64; self.len()];
        for &z in &order {
            if !self.leq(a, z) || !self.leq(z, b) {
                continue;
            }
            mu[z] = if z == a {
                1
            } else {
                -self.geq.row_iter(z).filter(|&w| w != z && self.leq(a, w)).map(|w| mu[w]).sum::<i64>()
            };
        }
        mu[b]
    }

    /// Order automorphisms, i.e. `σ` with `^σR = R`. Fails above `bound` elements.
    pub fn automorphisms(&self, bound: usize) -> Result<Vec<Permutation>> {
        if self.len() > bound {
            return Err(Error::Budget {
                what: "automorphism search".into(),
                requested: self.len() as u128,
                limit: bound as u128,
            });
        }
        let mut out = Vec::new();
        isomorphisms(self, self, false, &mut out);
        out.sort();
        Ok(out)
    }

    /// Some order isomorphism `self → other` (brute-force search).
    pub fn isomorphism_to(&self, other: &Poset) -> Option<Permutation> {
        if self.len() != other.len() {
            return None;
        }
        let mut out = Vec::new();
        isomorphisms(self, other, true, &mut out);
        out.pop()
    }

    pub fn is_isomorphic(&self, other: &Poset) -> bool {
        self.isomorphism_to(other).is_some()
    }
}

fn key(m: u64) -> (u32, u64) {
    (m.count_ones(), m)
}

pub fn mask_of_len(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Backtracking search for order isomorphisms, pruned by the pair
/// (number of elements above, number below) of each element.
fn isomorphisms(p: &Poset, q: &Poset, first_only: bool, out: &mut Vec<Permutation>) {
    let n = p.len();
    let sig = |s: &Poset, a: usize| (s.leq.row_iter(a).count(), s.geq.row_iter(a).count());
    let sp: Vec<_> = (0..n).map(|a| sig(p, a)).collect();
    let sq: Vec<_> = (0..n).map(|a| sig(q, a)).collect();
    let mut img = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn go(
        i: usize,
        p: &Poset,
        q: &Poset,
        sp: &[(usize, usize)],
        sq: &[(usize, usize)],
        img: &mut [usize],
        used: &mut [bool],
        first_only: bool,
        out: &mut Vec<Permutation>,
    ) -> bool {
        let n = img.len();
        if i == n {
            out.push(Permutation::new(img.to_vec()).unwrap());
            return first_only;
        }
        for c in 0..n {
            if used[c] || sp[i] != sq[c] {
                continue;
            }
            let ok = (0..i).all(|j| p.leq(i, j) == q.leq(c, img[j]) && p.leq(j, i) == q.leq(img[j], c));
            if !ok {
                continue;
            }
            img[i] = c;
            used[c] = true;
            if go(i + 1, p, q, sp, sq, img, used, first_only, out) {
                return true;
            }
            used[c] = false;
        }
        img[i] = usize::MAX;
        false
    }

    go(0, p, q, &sp, &sq, &mut img, &mut used, first_only, out);
}

/// Result of [`Poset::lower_ideals`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideals {
    pub masks: Vec<u64>,
    /// `principal[e]` is the position of `]·,e]` in `masks`.
    pub principal: Vec<usize>,
}

impl Ideals {
    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.masks.binary_search_by_key(&key(mask), |&m| key(m)).ok()
    }
}

/// All values `μ(a,b)` of one poset, computed once.
#[derive(Clone, Debug)]
pub struct MobiusTable {
    n: usize,
    vals: Vec<i64>,
}

impl MobiusTable {
    pub fn new(p: &Poset) -> Self {
        let n = p.len();
        let order = p.linear_extension();
        let mut vals = vec![0i64; n * n];
        for a in 0..n {
            for &z in &order {
                if !p.leq(a, z) {
                    continue;
                }
                vals[a * n + z] = if z == a {
                    1
                } else {
                    -(0..n).filter(|&w| w != z && p.leq(a, w) && p.leq(w, z)).map(|w| vals[a * n + w]).sum::<i64>()
                };
            }
        }
        MobiusTable { n, vals }
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> i64 {
        self.vals[a * self.n + b]
    }
}
