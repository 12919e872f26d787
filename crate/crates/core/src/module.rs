//! The fundamental module `P_E f_R`: free on `Δ_σ f_R`, `σ ∈ Σ_E`, with the
//! explicit action of relations on `E`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::functor::act;
use crate::lattice::ideal_lattice;
use crate::poset::Poset;
use crate::relation::{conjugate, Permutation, Relation};

/// `Σ c_σ Δ_σ f_R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PEfRElement {
    poset: Poset,
    terms: BTreeMap<Permutation, BigInt>,
}

impl PEfRElement {
    pub fn zero(poset: &Poset) -> Self {
        PEfRElement { poset: poset.clone(), terms: BTreeMap::new() }
    }

    /// `Δ_σ f_R`.
    pub fn basis(poset: &Poset, sigma: Permutation) -> Result<Self> {
        if sigma.len() != poset.len() {
            return Err(Error::validation("permutation is not on E"));
        }
        let mut m = Self::zero(poset);
        m.terms.insert(sigma, BigInt::from(1));
        Ok(m)
    }

    /// `f_R` itself.
    pub fn unit(poset: &Poset) -> Self {
        Self::basis(poset, Permutation::identity(poset.len())).expect("identity has the right size")
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, sigma: Permutation, c: BigInt) {
        let e = self.terms.entry(sigma).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }
}

/// The `τ` with `Δ_E ⊆ Δ_{τ⁻¹}Q ⊆ ^σR`, if any. Searches all of `Σ_E` and
/// fails if two candidates succeed.
pub fn find_tau(p: &Poset, q: &Relation, sigma: &Permutation) -> Result<Option<Permutation>> {
    let n = p.len();
    let sr = conjugate(sigma, p.relation())?;
    let mut found: Option<Permutation> = None;
    for tau in Permutation::all(n) {
        // Δ_E ⊆ Δ_{τ⁻¹}Q  ⇔  (τ(e), e) ∈ Q for all e.
        if !(0..n).all(|e| q.contains(tau.apply(e), e)) {
            continue;
        }
        if !tau.inverse().delta().compose(q)?.is_subset(&sr) {
            continue;
        }
        if let Some(prev) = &found {
            return Err(Error::invariant(format!("two τ for σ={:?}: {:?} and {:?}", sigma.images(), prev.images(), tau.images())));
        }
        found = Some(tau);
    }
    Ok(found)
}

/// `Q · m`, term by term: `Q Δ_σ f_R = Δ_{τσ} f_R` or `0`.
pub fn act_pefr(q: &Relation, m: &PEfRElement) -> Result<PEfRElement> {
    let p = &m.poset;
    if q.target() != p.len() || q.source() != p.len() {
        return Err(Error::validation("Q is not a relation on E"));
    }
    let mut out = PEfRElement::zero(p);
    for (sigma, c) in &m.terms {
        if let Some(tau) = find_tau(p, q, sigma)? {
            out.add_term(tau.compose(sigma), c.clone());
        }
    }
    Ok(out)
}

/// Outcome of [`theta_transport_check`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ThetaReport {
    pub relations: usize,
    pub comparisons: usize,
    pub nonzero: usize,
    pub mismatches: Vec<String>,
}

impl ThetaReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub const THETA_MAX_E: usize = 5;
/// Above this many relations on `E` the check samples instead of
/// enumerating.
pub const THETA_EXHAUSTIVE_RELATIONS: u64 = 1 << 16;

/// Compares `Q·d_σ` in `(F_T/H_T)(E)`, `T = I↓(E,R)`, `d_σ = ι∘σ⁻¹`, with
/// `act_pefr(Q, Δ_σ f_{R^op})`. Exhaustive over `Q` when there are at most
/// 2¹⁶ relations, otherwise over `samples` relations drawn from `rng`.
pub fn theta_transport_check_with<R: rand::Rng + ?Sized>(p: &Poset, samples: usize, rng: &mut R) -> Result<ThetaReport> {
    let n = p.len();
    if n > THETA_MAX_E {
        return Err(Error::Budget { what: "|E| for the θ check".into(), requested: n as u128, limit: THETA_MAX_E as u128 });
    }
    let t = ideal_lattice(p);
    let l = t.lattice();
    let pop = p.opposite();
    let iota: Vec<u32> = t.embed().iter().map(|&e| e as u32).collect();
    let perms = Permutation::all(n);
    // d_ρ for every ρ, for reverse lookup.
    let d: BTreeMap<Vec<u32>, Permutation> = perms
        .iter()
        .map(|rho| ((0..n).map(|e| iota[rho.inverse().apply(e)]).collect(), rho.clone()))
        .collect();
    let cells = n * n;
    let total = 1u64 << cells;
    let qs: Box<dyn Iterator<Item = u64>> = if total <= THETA_EXHAUSTIVE_RELATIONS {
        Box::new(0..total)
    } else {
        Box::new((0..samples).map(|_| rng.gen_range(0..total)).collect::<Vec<_>>().into_iter())
    };
    let mut rep = ThetaReport::default();
    for bits in qs {
        let rows: Vec<u64> = (0..n).map(|y| (bits >> (y * n)) & ((1u64 << n) - 1)).collect();
        let q = Relation::from_row_masks(n, &rows);
        rep.relations += 1;
        for sigma in &perms {
            let d_sigma: Vec<u32> = (0..n).map(|e| iota[sigma.inverse().apply(e)]).collect();
            let lhs = act(l, &q, &d_sigma)?;
            let lhs = d.get(&lhs).cloned();
            let rhs = act_pefr(&q, &PEfRElement::basis(&pop, sigma.clone())?)?;
            let rhs: Option<Permutation> = match rhs.terms.len() {
                0 => None,
                1 => Some(rhs.terms.keys().next().unwrap().clone()),
                _ => return Err(Error::invariant("a basis element acted to a sum")),
            };
            rep.comparisons += 1;
            if lhs.is_some() {
                rep.nonzero += 1;
            }
            if lhs != rhs {
                rep.mismatches.push(format!("Q={q:?}, σ={:?}: {:?} vs {:?}", sigma.images(), lhs.map(|r| r.images().to_vec()), rhs.map(|r| r.images().to_vec())));
            }
        }
    }
    Ok(rep)
}

/// [`theta_transport_check_with`] with a fixed seed and 2000 samples.
pub fn theta_transport_check(p: &Poset) -> Result<ThetaReport> {
    use rand::SeedableRng;
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x7e7a);
    theta_transport_check_with(p, 2000, &mut rng)
}
