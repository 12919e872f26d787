//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the algorithms it is used to check.
#![allow(dead_code)]

use corfun_core::lattice::Lattice;
use corfun_core::relation::Relation;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rand::Rng;

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn pow(b: i64, e: usize) -> BigInt {
    BigInt::from(b).pow(e as u32)
}

pub fn binom(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// All maps `{0..x} → {0..t}`, by recursion.
pub fn maps(t: usize, x: usize) -> Vec<Vec<u32>> {
    if x == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for head in 0..t as u32 {
        for tail in maps(t, x - 1) {
            let mut m = vec![head];
            m.extend(tail);
            out.push(m);
        }
    }
    out
}

/// Rank over `ℚ` by textbook Gaussian elimination on rationals.
pub fn rank_q(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &pivot;
                for k in c..cols {
                    let v = &m[rank][k] * &f;
                    m[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Least upper bound by scanning the order.
pub fn brute_join(l: &Lattice, items: &[usize]) -> usize {
    let n = l.len();
    let ubs: Vec<usize> = (0..n).filter(|&u| items.iter().all(|&i| l.leq(i, u))).collect();
    *ubs.iter().find(|&&u| ubs.iter().all(|&v| l.leq(u, v))).expect("join exists")
}

pub fn brute_meet(l: &Lattice, items: &[usize]) -> usize {
    let n = l.len();
    let lbs: Vec<usize> = (0..n).filter(|&u| items.iter().all(|&i| l.leq(u, i))).collect();
    *lbs.iter().find(|&&u| lbs.iter().all(|&v| l.leq(v, u))).expect("meet exists")
}

pub fn random_relation<R: Rng>(rng: &mut R, target: usize, source: usize) -> Relation {
    let mut r = Relation::empty(target, source);
    for y in 0..target {
        for x in 0..source {
            if rng.gen_bool(0.5) {
                r.insert(y, x);
            }
        }
    }
    r
}

/// Relation on `n` points from the low `n²` bits, row-major.
pub fn relation_from_bits(n: usize, bits: u64) -> Relation {
    let mut r = Relation::empty(n, n);
    for y in 0..n {
        for x in 0..n {
            if bits >> (y * n + x) & 1 == 1 {
                r.insert(y, x);
            }
        }
    }
    r
}

/// Join-irreducibles by definition: not the bottom, and not the join of
/// the elements strictly below.
pub fn brute_irreducibles(l: &Lattice) -> Vec<usize> {
    (0..l.len())
        .filter(|&t| {
            let below: Vec<usize> = (0..l.len()).filter(|&s| l.lt(s, t)).collect();
            brute_join(l, &below) != t
        })
        .collect()
}

/// Closes a family of subsets of `0..k` under intersection (adding the full
/// set) and returns the closed sets ordered by inclusion, sorted by
/// (size, mask). Every finite lattice arises this way.
pub fn intersection_closed_order(k: usize, family: &[u64]) -> (Vec<u64>, Vec<(usize, usize)>) {
    let full = (1u64 << k) - 1;
    let mut sets: Vec<u64> = vec![full];
    for &f in family {
        let f = f & full;
        let mut add = vec![f];
        add.extend(sets.iter().map(|&s| s & f));
        for a in add {
            if !sets.contains(&a) {
                sets.push(a);
            }
        }
    }
    sets.sort_by_key(|&m| (m.count_ones(), m));
    let mut pairs = Vec::new();
    for (i, &a) in sets.iter().enumerate() {
        for (j, &b) in sets.iter().enumerate() {
            if a & !b == 0 {
                pairs.push((i, j));
            }
        }
    }
    (sets, pairs)
}

pub fn random_lattice(k: usize, family: &[u64]) -> Lattice {
    use corfun_core::poset::Poset;
    use corfun_core::relation::GroundSet;
    let (sets, pairs) = intersection_closed_order(k, family);
    Lattice::build(Poset::from_pairs(GroundSet::indexed(sets.len()), &pairs).unwrap()).unwrap()
}
