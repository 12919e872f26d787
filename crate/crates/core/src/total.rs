//! The total order `n̄ = {0 < … < n}` as an object of the lattice category:
//! the morphisms `s_A`, `i_{A,C}`, the elements `f_{A,B}`, `ε_n`, `β_l` of its
//! endomorphism algebra, and join-morphisms `T → n̄` via chains of `T`.
//!
//! Subsets of `[n] = {1..n}` are bitmasks with bit `j` standing for `j`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::linalg::IntegerMatrix;
use crate::maps::{sign, FormalMapSum, MapImages};
use crate::relation::BitIter;

pub const STRUCTURE_CHECK_MAX_N: usize = 4;

fn elements(a: u64) -> Vec<usize> {
    BitIter(a).collect()
}

/// All subsets of `[n]`.
pub fn subsets(n: usize) -> impl Iterator<Item = u64> {
    (0u64..1 << n).map(|m| m << 1)
}

/// `s_A(j) = |]0,j] ∩ A|`, a map `n̄ → l̄`.
pub fn s_a(n: usize, a: u64) -> FormalMapSum {
    let l = a.count_ones() as usize;
    let images = (0..=n).map(|j| (a & (((1u64 << (j + 1)) - 1) & !1)).count_ones()).collect();
    FormalMapSum::single(l + 1, images)
}

/// `i_{A,C}: l̄ → n̄`, `j ↦ a_j` or `a_j − 1` when `j ∈ C`; `0 ↦ 0`.
pub fn i_ac_map(a: u64, c: u64) -> MapImages {
    let aj = elements(a);
    let mut m = vec![0u32];
    for (k, &x) in aj.iter().enumerate() {
        let j = k + 1;
        let v = if c >> j & 1 == 1 { x - 1 } else { x };
        m.push(v as u32);
    }
    m
}

pub fn i_ac(n: usize, a: u64, c: u64) -> FormalMapSum {
    FormalMapSum::single(n + 1, i_ac_map(a, c))
}

/// `i_A = Σ_{C ⊆ [l]} (−1)^{|C|} i_{A,C}`.
pub fn i_a(n: usize, a: u64) -> FormalMapSum {
    let l = a.count_ones() as usize;
    let mut out = FormalMapSum::zero(l + 1, n + 1);
    for c in subsets(l) {
        out.add_term(i_ac_map(a, c), sign(c.count_ones() as usize));
    }
    out
}

/// `f_{A,B} = i_A ∘ s_B`.
pub fn f_ab(n: usize, a: u64, b: u64) -> Result<FormalMapSum> {
    if a.count_ones() != b.count_ones() {
        return Err(Error::validation("f_{A,B} needs |A| = |B|"));
    }
    check_subset(n, a)?;
    check_subset(n, b)?;
    i_a(n, a).compose(&s_a(n, b))
}

fn check_subset(n: usize, a: u64) -> Result<()> {
    if a & 1 == 1 || (n < 63 && a >> (n + 1) != 0) {
        return Err(Error::validation(format!("{a:#b} is not a subset of [{n}]")));
    }
    Ok(())
}

/// `ε_n = i_{[n]}`.
pub fn epsilon(n: usize) -> FormalMapSum {
    i_a(n, full(n))
}

fn full(n: usize) -> u64 {
    ((1u64 << n) - 1) << 1
}

/// `β_l = Σ_{|A| = l} f_{A,A}`.
pub fn beta(n: usize, l: usize) -> FormalMapSum {
    let mut out = FormalMapSum::zero(n + 1, n + 1);
    for a in subsets(n).filter(|a| a.count_ones() as usize == l) {
        out = out.add(&f_ab(n, a, a).unwrap()).unwrap();
    }
    out
}

/// Order-preserving maps `n̄ → n̄` fixing 0, in lexicographic order.
pub fn join_endomaps(n: usize) -> Vec<MapImages> {
    let mut out = Vec::new();
    let mut cur = vec![0u32];
    fn go(n: usize, cur: &mut MapImages, out: &mut Vec<MapImages>) {
        if cur.len() == n + 1 {
            out.push(cur.clone());
            return;
        }
        let lo = *cur.last().unwrap();
        for v in lo..=n as u32 {
            cur.push(v);
            go(n, cur, out);
            cur.pop();
        }
    }
    go(n, &mut cur, &mut out);
    out
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Debug, Default)]
pub struct StructureReport {
    pub n: usize,
    pub quadruples_checked: usize,
    pub join_endomaps: usize,
    pub expected_basis: usize,
    /// Rank of the family `f_{A,B}` inside the span of the join-endomaps.
    pub f_rank: usize,
    pub blocks: Vec<usize>,
    pub failures: Vec<String>,
}

impl StructureReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the matrix-unit relations, the basis count and the central
/// idempotents `β_l` of `End(n̄)`.
pub fn structure_check(n: usize) -> Result<StructureReport> {
    if n > STRUCTURE_CHECK_MAX_N {
        return Err(Error::Budget { what: "structure_check n".into(), requested: n as u128, limit: STRUCTURE_CHECK_MAX_N as u128 });
    }
    let mut rep = StructureReport { n, ..Default::default() };
    let pairs: Vec<(u64, u64)> = subsets(n)
        .flat_map(|a| subsets(n).filter(move |b| b.count_ones() == a.count_ones()).map(move |b| (a, b)))
        .collect();
    let f: Vec<FormalMapSum> = pairs.iter().map(|&(a, b)| f_ab(n, a, b).unwrap()).collect();
    let zero = FormalMapSum::zero(n + 1, n + 1);
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for (j, &(c, d)) in pairs.iter().enumerate() {
            let prod = f[i].compose(&f[j])?;
            let expected = if b == c { f[pairs.iter().position(|&p| p == (a, d)).unwrap()].clone() } else { zero.clone() };
            rep.quadruples_checked += 1;
            if prod != expected {
                rep.failures.push(format!("f({a:#b},{b:#b})·f({c:#b},{d:#b}) is wrong"));
            }
        }
    }
    let basis = join_endomaps(n);
    rep.join_endomaps = basis.len();
    rep.expected_basis = (0..=n).map(|l| binomial(n, l).pow(2)).sum();
    rep.blocks = (0..=n).map(|l| binomial(n, l)).collect();
    if rep.join_endomaps != rep.expected_basis {
        rep.failures.push(format!("{} join-endomaps, expected {}", rep.join_endomaps, rep.expected_basis));
    }
    let rows: Vec<Vec<BigInt>> = f.iter().map(|u| basis.iter().map(|m| u.coeff(m)).collect()).collect();
    for (u, &(a, b)) in f.iter().zip(&pairs) {
        if u.terms().any(|(m, _)| !basis.contains(m)) {
            rep.failures.push(format!("f({a:#b},{b:#b}) leaves the join-endomaps"));
        }
    }
    rep.f_rank = IntegerMatrix::from_rows(rows).rank();
    if rep.f_rank != rep.expected_basis {
        rep.failures.push(format!("the f_(A,B) span rank {}, expected {}", rep.f_rank, rep.expected_basis));
    }
    let betas: Vec<FormalMapSum> = (0..=n).map(|l| beta(n, l)).collect();
    let mut total = zero.clone();
    for (l, bl) in betas.iter().enumerate() {
        total = total.add(bl)?;
        for (m, bm) in betas.iter().enumerate() {
            let p = bl.compose(bm)?;
            let want = if l == m { bl.clone() } else { zero.clone() };
            if p != want {
                rep.failures.push(format!("β_{l}·β_{m} is wrong"));
            }
        }
        for g in &basis {
            let g = FormalMapSum::single(n + 1, g.clone());
            if bl.compose(&g)? != g.compose(bl)? {
                rep.failures.push(format!("β_{l} is not central"));
                break;
            }
        }
    }
    if total != FormalMapSum::identity(n + 1) {
        rep.failures.push("Σ β_l ≠ id".into());
    }
    Ok(rep)
}

/// Nondecreasing sequences `u₀ ≤ … ≤ u_n = 1̂` of a lattice, i.e. the
/// join-morphisms `T → n̄`.
#[derive(Clone, Debug)]
pub struct ChainSet {
    pub lattice: Lattice,
    pub n: usize,
    pub sequences: Vec<Vec<usize>>,
    pub strict: Vec<bool>,
}

impl ChainSet {
    /// `|𝒱_n|`, the strictly increasing sequences.
    pub fn strict_count(&self) -> usize {
        self.strict.iter().filter(|&&s| s).count()
    }

    /// `ǔ(t) = min{j | t ≤ u_j}`.
    pub fn check(&self, u: &[usize]) -> MapImages {
        let l = &self.lattice;
        (0..l.len()).map(|t| u.iter().position(|&uj| l.leq(t, uj)).unwrap() as u32).collect()
    }

    /// `φ̂_j = ⋁{t | φ(t) ≤ j}`.
    pub fn hat(&self, phi: &[u32]) -> Vec<usize> {
        let l = &self.lattice;
        (0..=self.n).map(|j| l.join_all((0..l.len()).filter(|&t| phi[t] as usize <= j))).collect()
    }
}

pub fn join_morphisms(t: &Lattice, n: usize) -> ChainSet {
    let mut sequences = Vec::new();
    let mut cur = vec![t.top(); n + 1];
    fn go(t: &Lattice, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if j == 0 {
            out.push(cur.clone());
            return;
        }
        let above = cur[j];
        for x in 0..t.len() {
            if t.leq(x, above) {
                cur[j - 1] = x;
                go(t, j - 1, cur, out);
            }
        }
    }
    go(t, n, &mut cur, &mut sequences);
    sequences.sort();
    let strict = sequences.iter().map(|u| u.windows(2).all(|w| w[0] != w[1])).collect();
    ChainSet { lattice: t.clone(), n, sequences, strict }
}

/// Whether a map `T → n̄` is order-preserving and sends `0̂` to 0.
pub fn is_join_morphism_to_chain(t: &Lattice, phi: &[u32]) -> bool {
    let n = t.len();
    phi[t.bottom()] == 0 && (0..n).all(|a| (0..n).all(|b| phi[t.join(a, b)] == phi[a].max(phi[b])))
}
