//! Closure operations on `I↓(E,R)`, the extremal lattices `L(E,R)` and
//! `K(E,R)`, and the canonical join-preserving maps between them.

use crate::error::{Error, Result};
use crate::lattice::{ideal_lattice, irreducibles, subset_label, Lattice, MarkedLattice};
use crate::poset::{Ideals, Poset};
use crate::relation::{BitIter, GroundSet, Relation};

/// A closure operation on the lower ideals of a poset, fixing principal ideals.
#[derive(Clone, Debug)]
pub struct ClosureOperation {
    poset: Poset,
    ideals: Ideals,
    close: Vec<usize>,
}

impl ClosureOperation {
    /// Tabulates `f` on every ideal and checks the closure laws.
    pub fn new(poset: &Poset, f: impl Fn(u64) -> u64) -> Result<Self> {
        let ideals = poset.lower_ideals();
        let mut close = Vec::with_capacity(ideals.masks.len());
        for &a in &ideals.masks {
            let c = f(a);
            let idx = ideals
                .index_of(c)
                .ok_or_else(|| Error::validation(format!("closure of {} is not an ideal", subset_label(poset, a))))?;
            close.push(idx);
        }
        let cl = ClosureOperation { poset: poset.clone(), ideals, close };
        cl.validate()?;
        Ok(cl)
    }

    /// Builds from a table indexed like `poset.lower_ideals()`.
    pub fn from_table(poset: &Poset, close: Vec<usize>) -> Result<Self> {
        let ideals = poset.lower_ideals();
        if close.len() != ideals.masks.len() || close.iter().any(|&c| c >= ideals.masks.len()) {
            return Err(Error::validation("closure table has the wrong shape"));
        }
        let cl = ClosureOperation { poset: poset.clone(), ideals, close };
        cl.validate()?;
        Ok(cl)
    }

    fn validate(&self) -> Result<()> {
        let m = &self.ideals.masks;
        for (i, &a) in m.iter().enumerate() {
            let c = m[self.close[i]];
            if a & !c != 0 {
                return Err(Error::validation("closure is not extensive"));
            }
            if self.close[self.close[i]] != self.close[i] {
                return Err(Error::validation("closure is not idempotent"));
            }
            for (j, &b) in m.iter().enumerate() {
                if a & !b == 0 && c & !m[self.close[j]] != 0 {
                    return Err(Error::validation("closure is not monotone"));
                }
            }
        }
        for &p in &self.ideals.principal {
            if self.close[p] != p {
                return Err(Error::validation("closure moves a principal ideal"));
            }
        }
        Ok(())
    }

    pub fn identity(poset: &Poset) -> Self {
        Self::new(poset, |a| a).expect("identity is a closure")
    }

    /// `A ↦ Lb Ub A`.
    pub fn lbub(poset: &Poset) -> Self {
        Self::new(poset, |a| poset.bounds(poset.bounds(a).0).1).expect("LbUb is a closure")
    }

    /// `Â = ]·,a[` if `A` is not principal but `LbUb A = ]·,a]`; else `LbUb A`.
    pub fn k_closure(poset: &Poset) -> Self {
        let principal = |m: u64| (0..poset.len()).find(|&e| poset.down_mask(e) == m);
        Self::new(poset, |a| {
            let bar = poset.bounds(poset.bounds(a).0).1;
            match (principal(a), principal(bar)) {
                (None, Some(top)) => bar & !(1u64 << top),
                _ => bar,
            }
        })
        .expect("the K-closure is a closure")
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn ideals(&self) -> &Ideals {
        &self.ideals
    }

    pub fn close_index(&self, i: usize) -> usize {
        self.close[i]
    }

    pub fn close_mask(&self, a: u64) -> u64 {
        let i = self.ideals.index_of(a).expect("argument must be a lower ideal");
        self.ideals.masks[self.close[i]]
    }
}

/// The lattice of closed ideals together with its maps to and from `E`.
#[derive(Clone, Debug)]
pub struct ClosedLattice {
    pub marked: MarkedLattice,
    /// Closed ideals, ascending in the base order.
    pub masks: Vec<u64>,
    /// `gen[e]` is the element representing `e ∈ E` (its principal ideal).
    pub gen: Vec<usize>,
    /// Image of each base ideal under `A ↦ close(A)`.
    pub projection: Vec<usize>,
}

impl ClosedLattice {
    pub fn lattice(&self) -> &Lattice {
        self.marked.lattice()
    }

    pub fn index_of_mask(&self, m: u64) -> Option<usize> {
        self.masks.iter().position(|&x| x == m)
    }
}

/// Closed ideals ordered by inclusion: meet is `∩`, join is `close(∪)`.
pub fn lattice_of_closed(cl: &ClosureOperation) -> ClosedLattice {
    let p = &cl.poset;
    let base = &cl.ideals.masks;
    let closed: Vec<usize> = (0..base.len()).filter(|&i| cl.close[i] == i).collect();
    let mut pos = vec![usize::MAX; base.len()];
    for (k, &i) in closed.iter().enumerate() {
        pos[i] = k;
    }
    let masks: Vec<u64> = closed.iter().map(|&i| base[i]).collect();
    let n = masks.len();
    let lookup = |m: u64| cl.ideals.index_of(m).unwrap();
    let mut leq = Relation::empty(n, n);
    let mut join = vec![0; n * n];
    let mut meet = vec![0; n * n];
    for (i, &a) in masks.iter().enumerate() {
        for (j, &b) in masks.iter().enumerate() {
            if a & !b == 0 {
                leq.insert(i, j);
            }
            join[i * n + j] = pos[cl.close[lookup(a | b)]];
            meet[i * n + j] = pos[lookup(a & b)];
        }
    }
    let labels = GroundSet::new(masks.iter().map(|&m| subset_label(p, m))).unwrap();
    let lattice = Lattice::from_parts(Poset::new(labels, leq).unwrap(), join, meet);
    let gen: Vec<usize> = cl.ideals.principal.iter().map(|&i| pos[i]).collect();
    let marked = MarkedLattice::new(lattice.clone(), p.clone(), gen.clone()).unwrap_or_else(|_| irreducibles(&lattice));
    let projection = (0..base.len()).map(|i| pos[cl.close[i]]).collect();
    ClosedLattice { marked, masks, gen, projection }
}

/// `L(E,R)`: ideals closed under `Lb∘Ub`.
pub fn l_of(p: &Poset) -> ClosedLattice {
    lattice_of_closed(&ClosureOperation::lbub(p))
}

/// `K(E,R)`: the largest lattice whose irreducibles are exactly `E`.
pub fn k_of(p: &Poset) -> ClosedLattice {
    lattice_of_closed(&ClosureOperation::k_closure(p))
}

/// A map between lattices that is supposed to commute with joins.
#[derive(Clone, Debug)]
pub struct JoinMorphism {
    pub source: Lattice,
    pub target: Lattice,
    pub images: Vec<usize>,
}

impl JoinMorphism {
    pub fn new(source: Lattice, target: Lattice, images: Vec<usize>) -> Result<Self> {
        let f = JoinMorphism { source, target, images };
        if f.images.len() != f.source.len() || f.images.iter().any(|&t| t >= f.target.len()) {
            return Err(Error::validation("map has the wrong shape"));
        }
        if !f.preserves_joins() {
            return Err(Error::validation("map does not preserve joins"));
        }
        Ok(f)
    }

    pub fn apply(&self, t: usize) -> usize {
        self.images[t]
    }

    /// Exhaustive over subsets for small sources, pairs plus `0̂` otherwise.
    pub fn preserves_joins(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        if self.images[s.bottom()] != t.bottom() {
            return false;
        }
        let n = s.len();
        if n <= 16 {
            (0u32..1 << n).all(|sub| {
                let members = BitIter(sub as u64);
                self.images[s.join_all(members)] == t.join_all(members.map(|x| self.images[x]))
            })
        } else {
            (0..n).all(|a| (0..n).all(|b| self.images[s.join(a, b)] == t.join(self.images[a], self.images[b])))
        }
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        for &t in &self.images {
            hit[t] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// `f^op(t) = ⋁{x | f(x) ≤ t}`, the upper adjoint.
    pub fn adjoint(&self) -> Vec<usize> {
        let s = &self.source;
        (0..self.target.len())
            .map(|t| s.join_all((0..s.len()).filter(|&x| self.target.leq(self.images[x], t))))
            .collect()
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &JoinMorphism) -> Result<JoinMorphism> {
        if g.source != self.target {
            return Err(Error::validation("cannot compose maps with mismatched lattices"));
        }
        let images = self.images.iter().map(|&t| g.images[t]).collect();
        Ok(JoinMorphism { source: self.source.clone(), target: g.target.clone(), images })
    }
}

/// `π(A) = ⋁A` from `I↓(E,R)` onto a lattice generated by `gen(E)`.
pub fn pi_generated(t: &Lattice, p: &Poset, gen: &[usize]) -> Result<JoinMorphism> {
    let base = ideal_lattice(p);
    let ideals = p.lower_ideals();
    let images = ideals.masks.iter().map(|&a| t.join_all(BitIter(a).map(|e| gen[e]))).collect();
    JoinMorphism::new(base.lattice().clone(), t.clone(), images)
}

/// `π_T: I↓(Irr T) → T`.
pub fn pi_t(t: &MarkedLattice) -> JoinMorphism {
    pi_generated(t.lattice(), t.irr(), t.embed()).expect("π_T preserves joins")
}

/// `φ_T: T → L(E,R)` and, when `gen(E)` is exactly `Irr(T)`, `ψ_T: T → K(E,R)`.
#[derive(Clone, Debug)]
pub struct PhiPsi {
    pub phi: JoinMorphism,
    pub psi: std::result::Result<JoinMorphism, String>,
    pub l: ClosedLattice,
    pub k: ClosedLattice,
}

/// `E` must generate `t` (every element is a join of `gen` elements) and
/// sit in it as a full subposet.
pub fn phi_psi_generated(t: &Lattice, p: &Poset, gen: &[usize]) -> Result<PhiPsi> {
    let l = l_of(p);
    let k = k_of(p);
    let above = |x: usize| gen.iter().enumerate().filter(|&(_, &g)| t.leq(x, g)).fold(0u64, |m, (e, _)| m | 1 << e);
    let below = |x: usize| gen.iter().enumerate().filter(|&(_, &g)| t.leq(g, x)).fold(0u64, |m, (e, _)| m | 1 << e);
    let phi_images: Vec<usize> = (0..t.len())
        .map(|x| l.index_of_mask(p.bounds(above(x)).1).ok_or_else(|| Error::invariant("Lb of an up-set is not closed")))
        .collect::<Result<_>>()?;
    let phi = JoinMorphism::new(t.clone(), l.lattice().clone(), phi_images)
        .map_err(|_| Error::invariant("φ_T does not preserve joins"))?;
    let irr_exact = {
        let mut irr: Vec<usize> = (0..t.len()).filter(|&x| t.is_join_irreducible(x)).collect();
        let mut g = gen.to_vec();
        irr.sort_unstable();
        g.sort_unstable();
        irr == g
    };
    let psi = if irr_exact {
        let kcl = ClosureOperation::k_closure(p);
        let images: Vec<usize> = (0..t.len())
            .map(|x| k.index_of_mask(kcl.close_mask(below(x))).expect("closed"))
            .collect();
        Ok(JoinMorphism::new(t.clone(), k.lattice().clone(), images)
            .map_err(|_| Error::invariant("ψ_T does not preserve joins"))?)
    } else {
        Err("the generating set is not the set of irreducible elements".to_string())
    };
    Ok(PhiPsi { phi, psi, l, k })
}

pub fn phi_psi(t: &MarkedLattice) -> Result<PhiPsi> {
    phi_psi_generated(t.lattice(), t.irr(), t.embed())
}
