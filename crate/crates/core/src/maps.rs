//! Integer combinations of maps between finite sets.
//!
//! A [`FormalMapSum`] with `dom == cod` is an element of the monoid algebra
//! `ℤ(T^T)`; with `dom = |X|`, `cod = |T|` it is a vector of `F_T(X)`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A map `{0..dom-1} → {0..cod-1}` given by its images.
pub type MapImages = Vec<u32>;

#[derive(Clone, PartialEq, Eq)]
pub struct FormalMapSum {
    dom: usize,
    cod: usize,
    terms: HashMap<MapImages, BigInt>,
}

/// Element of `F_T(X)`: combination of maps `X → T`.
pub type MapVector = FormalMapSum;

impl FormalMapSum {
    pub fn zero(dom: usize, cod: usize) -> Self {
        FormalMapSum { dom, cod, terms: HashMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::single(n, (0..n as u32).collect())
    }

    /// A single map with coefficient 1.
    pub fn single(cod: usize, images: MapImages) -> Self {
        let mut s = Self::zero(images.len(), cod);
        s.add_term(images, BigInt::one());
        s
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, map: &[u32]) -> BigInt {
        self.terms.get(map).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MapImages, &BigInt)> {
        self.terms.iter()
    }

    /// Terms sorted lexicographically by image list.
    pub fn sorted_terms(&self) -> Vec<(&MapImages, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort();
        v
    }

    pub fn add_term(&mut self, map: MapImages, c: BigInt) {
        debug_assert_eq!(map.len(), self.dom);
        debug_assert!(map.iter().all(|&t| (t as usize) < self.cod));
        if c.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(map) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(Error::validation("map sums live on different sets"));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.dom, self.cod);
        }
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect();
        FormalMapSum { dom: self.dom, cod: self.cod, terms }
    }

    /// `self ∘ v`, extended bilinearly.
    pub fn compose(&self, v: &Self) -> Result<Self> {
        if self.dom != v.cod {
            return Err(Error::validation(format!(
                "cannot compose maps on {} points after maps into {} points",
                self.dom, v.cod
            )));
        }
        let mut out = Self::zero(v.dom, self.cod);
        for (f, a) in &self.terms {
            for (g, b) in &v.terms {
                let fg = g.iter().map(|&x| f[x as usize]).collect();
                out.add_term(fg, a * b);
            }
        }
        Ok(out)
    }

    pub fn is_idempotent(&self) -> bool {
        self.dom == self.cod && self.compose(self).is_ok_and(|sq| &sq == self)
    }

    /// Every point hit by some map in the support.
    pub fn support_image(&self) -> Vec<bool> {
        let mut hit = vec![false; self.cod];
        for m in self.terms.keys() {
            for &t in m {
                hit[t as usize] = true;
            }
        }
        hit
    }

    /// Keeps only the terms satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&[u32]) -> bool) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect();
        FormalMapSum { dom: self.dom, cod: self.cod, terms }
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }
}

/// Post-composition of a vector of `F_T(X)` by an element of `ℤ(T^T)`.
pub fn apply_to_vector(u: &FormalMapSum, v: &MapVector) -> Result<MapVector> {
    u.compose(v)
}

/// `u ∘ v` for map sums.
pub fn sum_compose(u: &FormalMapSum, v: &FormalMapSum) -> Result<FormalMapSum> {
    u.compose(v)
}

impl fmt::Display for FormalMapSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, c) in self.sorted_terms() {
            let imgs: Vec<String> = m.iter().map(u32::to_string).collect();
            writeln!(f, "{c}: [{}]", imgs.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for FormalMapSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FormalMapSum({} → {})", self.dom, self.cod)?;
        fmt::Display::fmt(self, f)
    }
}

/// The map `[a₀,…,a_k]`: `a_j ↦ a_{j+1}` for `j < k`, identity elsewhere.
/// The `a_j` must be distinct.
pub fn seq_map(n: usize, seq: &[usize]) -> MapImages {
    let mut m: MapImages = (0..n as u32).collect();
    for w in seq.windows(2) {
        m[w[0]] = w[1] as u32;
    }
    m
}

/// `h_ā = Σ_{i=0}^{k} (−1)^i [a₀,…,a_i]`.
pub fn h_seq(n: usize, seq: &[usize]) -> FormalMapSum {
    let mut out = FormalMapSum::zero(n, n);
    for i in 0..seq.len() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        out.add_term(seq_map(n, &seq[..=i]), BigInt::from(sign));
    }
    out
}

/// `κ_ā = Σ_{i=1}^{k} (−1)^{i−1} [a₀,…,a_i] = id − h_ā`.
pub fn kappa(n: usize, seq: &[usize]) -> FormalMapSum {
    let mut out = FormalMapSum::zero(n, n);
    for i in 1..seq.len() {
        let sign = if i % 2 == 1 { 1 } else { -1 };
        out.add_term(seq_map(n, &seq[..=i]), BigInt::from(sign));
    }
    out
}

/// Product of a list of endomorphism sums, left to right (`u₁ ∘ u₂ ∘ …`).
pub fn product(n: usize, factors: &[FormalMapSum]) -> Result<FormalMapSum> {
    factors.iter().try_fold(FormalMapSum::identity(n), |acc, f| acc.compose(f))
}

/// Sign helper: `(−1)^k`.
pub fn sign(k: usize) -> BigInt {
    if k.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

impl FormalMapSum {
    /// Sum of all coefficients (the augmentation).
    pub fn augmentation(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn is_positive_single(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().all(|c| c.is_one())
    }

    pub fn has_negative(&self) -> bool {
        self.terms.values().any(|c| c.is_negative())
    }
}
