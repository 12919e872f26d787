//! Evaluations of correspondence functors on a finite set `X`.
//!
//! Maps `X → T` are image arrays; enumerations are lexicographic with `x = 0`
//! most significant, following the element order of `T`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::forest::u_t;
use crate::lattice::{ideal_lattice, Lattice, MarkedLattice};
use crate::linalg::IntegerMatrix;
use crate::maps::{kappa, sign, FormalMapSum, MapImages, MapVector};
use crate::par::{map_indices, Exec};
use crate::poset::{Poset, DEFAULT_AUT_BOUND};
use crate::relation::Relation;

pub const DEFAULT_BUDGET: u128 = 2_000_000;
/// Dense matrices are capped separately so a within-budget request cannot
/// allocate `budget²` big integers.
pub const DENSE_ENTRY_LIMIT: u128 = 16_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub maps: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { maps: DEFAULT_BUDGET }
    }
}

impl Budget {
    pub fn new(maps: u128) -> Self {
        Budget { maps }
    }

    pub fn check(&self, what: &str, requested: u128) -> Result<()> {
        if requested > self.maps {
            return Err(Error::Budget { what: what.into(), requested, limit: self.maps });
        }
        Ok(())
    }
}

/// `base^exp`, saturating.
pub fn count_maps(base: usize, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base as u128))
}

/// The `index`-th map `X → T` in lexicographic order.
pub fn decode_map(mut index: usize, t: usize, x: usize) -> MapImages {
    let mut m = vec![0u32; x];
    for slot in m.iter_mut().rev() {
        *slot = (index % t) as u32;
        index /= t;
    }
    m
}

pub fn encode_map(m: &[u32], t: usize) -> usize {
    m.iter().fold(0usize, |acc, &v| acc * t + v as usize)
}

/// All maps `X → T`, lexicographic.
pub fn all_maps(t: usize, x: usize) -> impl Iterator<Item = MapImages> {
    let total = if x == 0 { 1 } else if t == 0 { 0 } else { t.pow(x as u32) };
    (0..total).map(move |i| decode_map(i, t.max(1), x))
}

/// `(Rφ)(y) = ⋁_{(y,x) ∈ R} φ(x)`.
pub fn act(t: &Lattice, r: &Relation, phi: &[u32]) -> Result<MapImages> {
    if r.source() != phi.len() {
        return Err(Error::validation("relation source does not match the map domain"));
    }
    Ok((0..r.target()).map(|y| t.join_all(r.row_iter(y).map(|x| phi[x] as usize)) as u32).collect())
}

/// Bilinear extension of [`act`].
pub fn act_vec(t: &Lattice, r: &Relation, v: &MapVector) -> Result<MapVector> {
    let mut out = MapVector::zero(r.target(), v.cod());
    for (m, c) in v.terms() {
        out.add_term(act(t, r, m)?, c.clone());
    }
    Ok(out)
}

/// `Γ_φ = {(x,e) | e ≤ φ(x)}`, a relation `X ← E`.
pub fn gamma(t: &MarkedLattice, phi: &[u32]) -> Relation {
    let rows: Vec<u64> = phi.iter().map(|&v| t.e_below(v as usize)).collect();
    Relation::from_row_masks(t.e_len(), &rows)
}

/// Inverse of [`gamma`]: requires `S R^op = S` and each row to be the set
/// of irreducibles below some element.
pub fn gamma_inv(t: &MarkedLattice, s: &Relation) -> Result<MapImages> {
    let p = t.irr();
    if s.source() != p.len() {
        return Err(Error::validation("relation source is not E"));
    }
    let r_op = p.relation().opposite();
    if s.compose(&r_op)? != *s {
        return Err(Error::validation("S·R^op ≠ S"));
    }
    (0..s.target())
        .map(|x| {
            let row = s.row_mask(x);
            let v = t.join_of_mask(row);
            if t.e_below(v) != row {
                return Err(Error::validation("row is not the down-set of an element of T"));
            }
            Ok(v as u32)
        })
        .collect()
}

/// Upper ideals of `(E,R)`, ordered like the lower ideals of `(E,R^op)`.
pub fn upper_ideals(p: &Poset) -> Vec<u64> {
    p.opposite().lower_ideals().masks
}

/// Precomputed data for evaluating `φ ⊢ ψ`.
#[derive(Clone, Debug)]
pub struct Vdash<'a> {
    t: &'a MarkedLattice,
    below: Vec<u64>,
    above: Vec<u64>,
    down_e: Vec<u64>,
    up_e: Vec<u64>,
}

/// The four equivalent descriptions of `φ ⊢ ψ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VdashConditions {
    pub a: bool,
    pub d: bool,
    pub e: bool,
    pub f: bool,
}

impl VdashConditions {
    pub fn agree(&self) -> bool {
        self.a == self.d && self.d == self.e && self.e == self.f
    }
}

impl<'a> Vdash<'a> {
    pub fn new(t: &'a MarkedLattice) -> Self {
        let p = t.irr();
        assert!(p.len() <= 64, "⊢ needs |E| ≤ 64");
        Vdash {
            t,
            below: (0..t.len()).map(|v| t.e_below(v)).collect(),
            above: (0..t.len()).map(|v| t.e_above(v)).collect(),
            down_e: (0..p.len()).map(|e| p.down_mask(e)).collect(),
            up_e: (0..p.len()).map(|e| p.up_mask(e)).collect(),
        }
    }

    /// Condition (d): `Γ_ψ^op Γ_φ = R^op`.
    pub fn holds(&self, phi: &[u32], psi: &[u64]) -> bool {
        (0..self.down_e.len()).all(|e| {
            let mut u = 0u64;
            for (x, &s) in psi.iter().enumerate() {
                if s >> e & 1 == 1 {
                    u |= self.below[phi[x] as usize];
                }
            }
            u == self.down_e[e]
        })
    }

    pub fn conditions(&self, phi: &[u32], psi: &[u64]) -> VdashConditions {
        let t = self.t;
        let l = t.lattice();
        let ne = self.down_e.len();
        // (a) Γ_ψ^op φ = ι
        let a = (0..ne).all(|e| {
            let j = l.join_all((0..phi.len()).filter(|&x| psi[x] >> e & 1 == 1).map(|x| phi[x] as usize));
            j == t.embed()[e]
        });
        // (e) φ ≤ ∧ψ, and every e is hit by some x with ψ(x) = [e,·[
        let e_cond = (0..phi.len()).all(|x| l.leq(phi[x] as usize, t.meet_of_mask(psi[x])))
            && (0..ne).all(|e| (0..phi.len()).any(|x| phi[x] as usize == t.embed()[e] && psi[x] == self.up_e[e]));
        // (f) ψ(φ⁻¹(t)) ⊆ [t,·[ ∩ E, with equality [e,·[ over e ∈ E
        let union_over = |v: usize| (0..phi.len()).filter(|&x| phi[x] as usize == v).fold(0u64, |m, x| m | psi[x]);
        let f = (0..l.len()).all(|v| union_over(v) & !self.above[v] == 0)
            && (0..ne).all(|e| union_over(t.embed()[e]) == self.up_e[e]);
        VdashConditions { a, d: self.holds(phi, psi), e: e_cond, f }
    }

    /// Condition (d), asserting agreement with (a), (e), (f).
    pub fn checked(&self, phi: &[u32], psi: &[u64]) -> Result<bool> {
        let c = self.conditions(phi, psi);
        if !c.agree() {
            return Err(Error::invariant(format!("⊢ conditions disagree on φ={phi:?}, ψ={psi:?}: {c:?}")));
        }
        Ok(c.d)
    }
}

/// `φ ⊢ ψ` via condition (d); in debug builds all four conditions are
/// evaluated and must agree.
pub fn vdash(t: &MarkedLattice, phi: &[u32], psi: &[u64]) -> bool {
    let v = Vdash::new(t);
    if cfg!(debug_assertions) {
        v.checked(phi, psi).expect("⊢ conditions agree")
    } else {
        v.holds(phi, psi)
    }
}

/// `N_{ψ,φ} = [φ ⊢ ψ]`, rows `ψ: X → I↑(E,R)`, columns `φ: X → T`.
pub fn matrix_n(t: &MarkedLattice, x: usize, budget: Budget, exec: Exec) -> Result<IntegerMatrix> {
    let ups = upper_ideals(t.irr());
    let rows = count_maps(ups.len(), x);
    let cols = count_maps(t.len(), x);
    budget.check("maps X → I↑(E,R)", rows)?;
    budget.check("maps X → T", cols)?;
    if rows.saturating_mul(cols) > DENSE_ENTRY_LIMIT {
        return Err(Error::Budget { what: "entries of N".into(), requested: rows * cols, limit: DENSE_ENTRY_LIMIT });
    }
    let (rows, cols) = (rows as usize, cols as usize);
    let v = Vdash::new(t);
    let phis: Vec<MapImages> = all_maps(t.len(), x).collect();
    let bool_rows = map_indices(exec, rows, |r| {
        let psi: Vec<u64> = decode_map(r, ups.len(), x).iter().map(|&i| ups[i as usize]).collect();
        phis.iter().map(|phi| v.holds(phi, &psi)).collect::<Vec<bool>>()
    });
    Ok(IntegerMatrix::from_bool_rows(cols, &bool_rows))
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `s` = number of surjections `X → E`; `ss` = number of maps `X → G` whose
/// image contains `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurjectionCounts {
    pub s: BigInt,
    pub ss: Option<BigInt>,
}

pub fn surjection_counts(x: usize, e: usize, g: Option<usize>) -> Result<SurjectionCounts> {
    if g.is_some_and(|g| g < e) {
        return Err(Error::validation("need e ≤ g"));
    }
    let s = (0..=e).map(|j| sign(j) * binomial(e, j) * BigInt::from(e - j).pow(x as u32)).sum();
    let ss = g.map(|g| ss_count(x, e, g));
    Ok(SurjectionCounts { s, ss })
}

/// `Σ_i (−1)^i C(e,i) (g−i)^x`.
pub fn ss_count(x: usize, e: usize, g: usize) -> BigInt {
    (0..=e).map(|i| sign(i) * binomial(e, i) * BigInt::from(g - i).pow(x as u32)).sum()
}

/// `|G|` for the ideal lattice of `p`.
pub fn g_size(p: &Poset) -> Result<usize> {
    Ok(ideal_lattice(p).g_partition()?.g.len())
}

/// Rank of `𝕊_{E,R^op}(X)` for `P = (E,R)`, with `G` taken from `I↓(P)`.
pub fn rank_formula(p: &Poset, x: usize) -> Result<BigInt> {
    Ok(ss_count(x, p.len(), g_size(p)?))
}

/// Rank of `N` by exact elimination.
pub fn rank_bruteforce(t: &MarkedLattice, x: usize, budget: Budget) -> Result<usize> {
    Ok(matrix_n(t, x, budget, Exec::default())?.rank())
}

pub fn smith(m: &IntegerMatrix) -> Vec<BigInt> {
    m.smith()
}

/// Maps `φ: X → T` with `E ⊆ φ(X) ⊆ G`, lexicographic.
pub fn basis_bx(t: &MarkedLattice, x: usize, budget: Budget) -> Result<Vec<MapImages>> {
    let gp = t.g_partition()?;
    budget.check("maps X → G", count_maps(gp.g.len(), x))?;
    let g = &gp.g;
    let need: Vec<u32> = t.embed().iter().map(|&e| e as u32).collect();
    Ok(all_maps(g.len(), x)
        .map(|m| m.iter().map(|&i| g[i as usize] as u32).collect::<MapImages>())
        .filter(|m| need.iter().all(|e| m.contains(e)))
        .collect())
}

/// Whether the image of `m` contains every irreducible.
pub fn hits_e(t: &MarkedLattice, m: &[u32]) -> bool {
    t.embed().iter().all(|&e| m.contains(&(e as u32)))
}

// ---------------------------------------------------------------- duality

/// `(λ, φ°) = 1` iff `λ ≤ φ` pointwise.
pub fn pairing(t: &Lattice, lambda: &[u32], phi: &[u32]) -> bool {
    lambda.iter().zip(phi).all(|(&a, &b)| t.leq(a as usize, b as usize))
}

/// `φ* = Σ_{ρ ≤ φ} μ(ρ,φ) ρ°`.
pub fn star(t: &Lattice, mu: &crate::poset::MobiusTable, phi: &[u32]) -> MapVector {
    let options: Vec<Vec<(u32, i64)>> = phi
        .iter()
        .map(|&v| {
            (0..t.len())
                .filter_map(|r| {
                    let m = mu.get(r, v as usize);
                    (m != 0).then_some((r as u32, m))
                })
                .collect()
        })
        .collect();
    let mut out = MapVector::zero(phi.len(), t.len());
    let mut idx = vec![0usize; phi.len()];
    if options.iter().any(Vec::is_empty) {
        return out;
    }
    loop {
        let map: MapImages = idx.iter().zip(&options).map(|(&i, o)| o[i].0).collect();
        let c: i64 = idx.iter().zip(&options).map(|(&i, o)| o[i].1).product();
        out.add_term(map, BigInt::from(c));
        let mut k = 0;
        loop {
            if k == idx.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < options[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// `(Q⋆ψ)(y) = ⋀_{(y,x) ∈ Q} ψ(x)`: the action of `F_{T^op}` written in `T`.
pub fn star_act(t: &Lattice, q: &Relation, psi: &[u32]) -> MapImages {
    (0..q.target()).map(|y| t.meet_all(q.row_iter(y).map(|x| psi[x] as usize)) as u32).collect()
}

pub fn star_act_vec(t: &Lattice, q: &Relation, v: &MapVector) -> MapVector {
    let mut out = MapVector::zero(q.target(), v.cod());
    for (m, c) in v.terms() {
        out.add_term(star_act(t, q, m), c.clone());
    }
    out
}

/// `ι: E → T`.
pub fn iota(t: &MarkedLattice) -> MapImages {
    t.embed().iter().map(|&e| e as u32).collect()
}

/// `γ_T = Σ_{A ⊆ E} (−1)^{|A|} η_A°`, `η_A(e) = r(e)` on `A`, `e` elsewhere.
pub fn gamma_t(t: &MarkedLattice) -> MapVector {
    let ne = t.e_len();
    let r: Vec<u32> = t.embed().iter().map(|&e| t.r(e) as u32).collect();
    let mut out = MapVector::zero(ne, t.len());
    for a in 0u64..1 << ne {
        let eta = (0..ne).map(|e| if a >> e & 1 == 1 { r[e] } else { t.embed()[e] as u32 }).collect();
        out.add_term(eta, sign(a.count_ones() as usize));
    }
    out
}

/// Pairing matrix between maps and maps°, both in lexicographic order.
pub fn pairing_matrix(t: &Lattice, x: usize, budget: Budget) -> Result<IntegerMatrix> {
    let n = count_maps(t.len(), x);
    budget.check("maps X → T", n)?;
    let maps: Vec<MapImages> = all_maps(t.len(), x).collect();
    let rows: Vec<Vec<bool>> = maps.iter().map(|l| maps.iter().map(|p| pairing(t, l, p)).collect()).collect();
    Ok(IntegerMatrix::from_bool_rows(maps.len(), &rows))
}

/// Rank of the span of `{S⋆γ_T | S ⊆ X × E}` in `F_{T^op}(X)`; `T` must be
/// distributive (hence `I↓(E,R)`).
pub fn span_rank_gamma(t: &MarkedLattice, x: usize, budget: Budget) -> Result<usize> {
    if !t.lattice().is_distributive() {
        return Err(Error::validation("span_rank_gamma needs T = I↓(E,R)"));
    }
    let ne = t.e_len();
    let cells = x * ne;
    if cells >= 64 {
        return Err(Error::Budget { what: "relations X → E".into(), requested: u128::MAX, limit: budget.maps });
    }
    budget.check("relations X → E", 1u128 << cells)?;
    budget.check("maps X → T", count_maps(t.len(), x))?;
    let l = t.lattice();
    let g = gamma_t(t);
    let mut seen = HashSet::new();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for s in 0u64..1 << cells {
        let q = Relation::from_row_masks(ne, &(0..x).map(|i| (s >> (i * ne)) & crate::poset::mask_of_len(ne)).collect::<Vec<_>>());
        let v = star_act_vec(l, &q, &g);
        let mut sparse: Vec<(usize, BigInt)> = v.terms().map(|(m, c)| (encode_map(m, l.len()), c.clone())).collect();
        sparse.sort();
        if sparse.is_empty() || !seen.insert(sparse.clone()) {
            continue;
        }
        let mut row = vec![BigInt::zero(); count_maps(l.len(), x) as usize];
        for (i, c) in sparse {
            row[i] = c;
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Ok(0);
    }
    Ok(IntegerMatrix::from_rows(rows).rank())
}

// ------------------------------------------------------- fundamental action

/// `𝕊_{E,R^op}` realised on the bases `B_X` through `u_T`.
#[derive(Clone, Debug)]
pub struct FundamentalFunctor {
    t: MarkedLattice,
    u_t: FormalMapSum,
    in_g: Vec<bool>,
    budget: Budget,
}

impl FundamentalFunctor {
    pub fn new(t: &MarkedLattice, budget: Budget) -> Result<Self> {
        let gp = t.g_partition()?;
        Ok(FundamentalFunctor { t: t.clone(), u_t: u_t(t)?, in_g: gp.in_g, budget })
    }

    pub fn lattice(&self) -> &MarkedLattice {
        &self.t
    }

    pub fn u_t(&self) -> &FormalMapSum {
        &self.u_t
    }

    pub fn basis(&self, x: usize) -> Result<Vec<MapImages>> {
        basis_bx(&self.t, x, self.budget)
    }

    /// `π_{T,Y}(u_T ∘ Uφ)` as a vector on `B_Y` (given in basis order).
    pub fn act(&self, u: &Relation, phi: &[u32], by: &[MapImages]) -> Result<Vec<BigInt>> {
        if !hits_e(&self.t, phi) || phi.iter().any(|&v| !self.in_g[v as usize]) {
            return Err(Error::validation("φ is not in B_X"));
        }
        let image = act(self.t.lattice(), u, phi)?;
        let v = self.u_t.compose(&FormalMapSum::single(self.t.len(), image))?;
        let kept = v.filter(|m| hits_e(&self.t, m));
        let mut out = vec![BigInt::zero(); by.len()];
        for (m, c) in kept.terms() {
            if m.iter().any(|&t| !self.in_g[t as usize]) {
                return Err(Error::invariant("u_T∘Uφ has a term leaving G"));
            }
            let i = by.binary_search(m).map_err(|_| Error::invariant("term missing from B_Y"))?;
            out[i] = c.clone();
        }
        Ok(out)
    }

    /// Matrix of `𝕊(U)`: columns `B_X`, rows `B_Y`.
    pub fn matrix(&self, u: &Relation) -> Result<IntegerMatrix> {
        let bx = self.basis(u.source())?;
        let by = self.basis(u.target())?;
        let cols: Vec<Vec<BigInt>> = bx.iter().map(|phi| self.act(u, phi, &by)).collect::<Result<_>>()?;
        let mut m = IntegerMatrix::zeros(by.len(), bx.len());
        for (c, col) in cols.into_iter().enumerate() {
            for (r, v) in col.into_iter().enumerate() {
                m.set(r, c, v);
            }
        }
        Ok(m)
    }
}

/// One-shot version of [`FundamentalFunctor::act`].
pub fn fundamental_action(t: &MarkedLattice, u: &Relation, phi: &[u32]) -> Result<Vec<BigInt>> {
    let f = FundamentalFunctor::new(t, Budget::default())?;
    let by = f.basis(u.target())?;
    f.act(u, phi, &by)
}

/// `(dim V / |Aut|) · rank_formula(P^op, x)`, which must be integral.
pub fn dim_simple(p: &Poset, x: usize, dim_v: u64, aut_order: u64) -> Result<BigInt> {
    if dim_v == 0 || aut_order == 0 {
        return Err(Error::validation("dim V and |Aut| must be positive"));
    }
    let auts = p.automorphisms(DEFAULT_AUT_BOUND)?.len() as u64;
    if auts != aut_order {
        return Err(Error::validation(format!("|Aut(E,R)| is {auts}, not {aut_order}")));
    }
    let num = BigInt::from(dim_v) * rank_formula(&p.opposite(), x)?;
    let (q, r) = num.div_rem(&BigInt::from(aut_order));
    if !r.is_zero() {
        return Err(Error::invariant(format!("{num} is not divisible by {aut_order}")));
    }
    Ok(q)
}

// ------------------------------------------------------------- structure

/// Surjections `X → E`, lexicographic.
pub fn surjections(e: usize, x: usize) -> Vec<MapImages> {
    all_maps(e, x).filter(|m| (0..e as u32).all(|v| m.contains(&v))).collect()
}

/// `M_{ψ,φ} = [Γ↓_ψ^op Γ↑_φ = R]` over surjections `ψ, φ: X → E`, rows and
/// columns sorted along a linear extension of the pointwise order.
pub fn matrix_m(p: &Poset, x: usize) -> IntegerMatrix {
    let n = p.len();
    let pos: Vec<usize> = {
        let ext = p.linear_extension();
        let mut pos = vec![0; n];
        for (i, &e) in ext.iter().enumerate() {
            pos[e] = i;
        }
        pos
    };
    let mut surj = surjections(n, x);
    surj.sort_by_key(|m| (m.iter().map(|&v| pos[v as usize]).sum::<usize>(), m.clone()));
    let rows: Vec<Vec<bool>> = surj
        .iter()
        .map(|psi| {
            surj.iter()
                .map(|phi| {
                    // (e,f) in the product iff ∃x: e ≤ ψ(x) and φ(x) ≤ f.
                    (0..n).all(|e| {
                        let mut reach = 0u64;
                        for k in 0..x {
                            if p.leq(e, psi[k] as usize) {
                                reach |= p.up_mask(phi[k] as usize);
                            }
                        }
                        reach == p.up_mask(e)
                    })
                })
                .collect()
        })
        .collect();
    IntegerMatrix::from_bool_rows(surj.len(), &rows)
}

/// Two descriptions of `ker N`: its dimension `cols − rank N`, and the rank
/// of the explicit family `{φ | E ⊄ φ(X)} ∪ {φ − u_a∘φ}` which it contains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelReport {
    pub nullity: usize,
    pub generators_rank: usize,
    pub generators_in_kernel: bool,
}

pub fn kernel_report(t: &MarkedLattice, x: usize, budget: Budget) -> Result<KernelReport> {
    let n = matrix_n(t, x, budget, Exec::default())?;
    let nullity = n.cols() - n.rank();
    let lf = crate::forest::graph_of_lattice(t)?;
    let us: Vec<FormalMapSum> = lf.sequences.iter().map(|s| kappa(t.len(), s)).collect();
    let cols = n.cols();
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for (i, phi) in all_maps(t.len(), x).enumerate() {
        if !hits_e(t, &phi) {
            let mut v = vec![BigInt::zero(); cols];
            v[i] = BigInt::one();
            gens.push(v);
            continue;
        }
        let single = FormalMapSum::single(t.len(), phi.clone());
        for u in &us {
            let d = single.sub(&u.compose(&single)?)?;
            let mut v = vec![BigInt::zero(); cols];
            for (m, c) in d.terms() {
                v[encode_map(m, t.len())] = c.clone();
            }
            gens.push(v);
        }
    }
    let generators_in_kernel = gens.iter().all(|g| n.mul_vec(g).iter().all(Zero::is_zero));
    let generators_rank = if gens.is_empty() { 0 } else { IntegerMatrix::from_rows(gens).rank() };
    Ok(KernelReport { nullity, generators_rank, generators_in_kernel })
}
