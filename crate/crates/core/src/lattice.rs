//! Finite lattices with materialized join/meet tables, their irreducible
//! elements, the operators r, s, r∞, s∞ and the partition `T = G ⊔ Γ`.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::poset::{mask_of_len, Poset};
use crate::relation::{BitIter, GroundSet, Relation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    poset: Poset,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl Lattice {
    /// Validates that every pair has a join and a meet.
    pub fn build(poset: Poset) -> Result<Lattice> {
        let n = poset.len();
        if n == 0 {
            return Err(Error::validation("not a lattice: empty order"));
        }
        let rel = poset.relation();
        let opp = rel.opposite();
        let extremum = |a: usize, b: usize, r: &Relation| -> Option<usize> {
            // Least element of the common up-set (w.r.t. r) of a and b.
            let common: Vec<u64> = r.row(a).iter().zip(r.row(b)).map(|(x, y)| x & y).collect();
            let members = common.iter().enumerate().flat_map(|(w, &word)| BitIter(word).map(move |i| w * 64 + i));
            members.into_iter().find(|&u| common.iter().zip(r.row(u)).all(|(c, up)| c & !up == 0))
        };
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let j = extremum(a, b, rel).ok_or_else(|| Error::NotALattice {
                    a: poset.label(a).into(),
                    b: poset.label(b).into(),
                    missing: "join",
                })?;
                let m = extremum(a, b, &opp).ok_or_else(|| Error::NotALattice {
                    a: poset.label(a).into(),
                    b: poset.label(b).into(),
                    missing: "meet",
                })?;
                join[a * n + b] = j;
                join[b * n + a] = j;
                meet[a * n + b] = m;
                meet[b * n + a] = m;
            }
        }
        let bottom = (0..n).fold(0, |acc, t| meet[acc * n + t]);
        let top = (0..n).fold(0, |acc, t| join[acc * n + t]);
        Ok(Lattice { poset, join, meet, bottom, top })
    }

    /// Builds from tables that are already known to be correct.
    pub(crate) fn from_parts(poset: Poset, join: Vec<usize>, meet: Vec<usize>) -> Lattice {
        let n = poset.len();
        let bottom = (0..n).fold(0, |acc, t| meet[acc * n + t]);
        let top = (0..n).fold(0, |acc, t| join[acc * n + t]);
        Lattice { poset, join, meet, bottom, top }
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn label(&self, t: usize) -> &str {
        self.poset.label(t)
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.poset.leq(a, b)
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.poset.lt(a, b)
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    /// Join of a family; the empty join is `0̂`.
    pub fn join_all(&self, it: impl IntoIterator<Item = usize>) -> usize {
        it.into_iter().fold(self.bottom, |acc, t| self.join(acc, t))
    }

    /// Meet of a family; the empty meet is `1̂`.
    pub fn meet_all(&self, it: impl IntoIterator<Item = usize>) -> usize {
        it.into_iter().fold(self.top, |acc, t| self.meet(acc, t))
    }

    pub fn lower_covers(&self, t: usize) -> Vec<usize> {
        let n = self.len();
        (0..n).filter(|&s| self.lt(s, t) && !(0..n).any(|u| self.lt(s, u) && self.lt(u, t))).collect()
    }

    /// `e ≠ 0̂` whose strict down-set has a unique maximal element.
    pub fn is_join_irreducible(&self, t: usize) -> bool {
        t != self.bottom && self.lower_covers(t).len() == 1
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.len();
        (0..n).all(|t| {
            (0..n).all(|r| (0..n).all(|s| self.meet(t, self.join(r, s)) == self.join(self.meet(t, r), self.meet(t, s))))
        })
    }

    /// Checks the lattice laws on all pairs; used by tests and `--validate`.
    pub fn check_laws(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            self.join(a, a) == a
                && self.meet(a, a) == a
                && (0..n).all(|b| {
                    self.join(a, self.meet(a, b)) == a
                        && self.meet(a, self.join(a, b)) == a
                        && (self.leq(a, b) == (self.join(a, b) == b))
                        && (self.leq(a, b) == (self.meet(a, b) == a))
                })
        })
    }

    pub fn opposite(&self) -> Lattice {
        Lattice {
            poset: self.poset.opposite(),
            join: self.meet.clone(),
            meet: self.join.clone(),
            bottom: self.top,
            top: self.bottom,
        }
    }

    /// Same lattice with fresh labels.
    pub fn relabel(&self, labels: GroundSet) -> Result<Lattice> {
        let poset = Poset::new(labels, self.poset.relation().clone())?;
        Ok(Lattice { poset, ..self.clone() })
    }
}

/// A lattice with its full subposet `(E,R)` of irreducible elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedLattice {
    lattice: Lattice,
    irr: Poset,
    embed: Vec<usize>,
    irr_index: Vec<Option<usize>>,
}

impl MarkedLattice {
    /// `embed[e]` is the element of `lattice` representing `e ∈ irr`.
    pub fn new(lattice: Lattice, irr: Poset, embed: Vec<usize>) -> Result<Self> {
        if embed.len() != irr.len() {
            return Err(Error::validation("embedding length differs from |E|"));
        }
        let mut irr_index = vec![None; lattice.len()];
        for (e, &t) in embed.iter().enumerate() {
            if t >= lattice.len() || irr_index[t].is_some() {
                return Err(Error::validation("embedding is not injective"));
            }
            irr_index[t] = Some(e);
        }
        for t in 0..lattice.len() {
            if lattice.is_join_irreducible(t) != irr_index[t].is_some() {
                return Err(Error::validation(format!(
                    "element {} is misclassified as {}irreducible",
                    lattice.label(t),
                    if irr_index[t].is_some() { "" } else { "not " }
                )));
            }
        }
        for a in 0..irr.len() {
            for b in 0..irr.len() {
                if irr.leq(a, b) != lattice.leq(embed[a], embed[b]) {
                    return Err(Error::validation("embedding is not a full subposet"));
                }
            }
        }
        Ok(MarkedLattice { lattice, irr, embed, irr_index })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn irr(&self) -> &Poset {
        &self.irr
    }

    pub fn embed(&self) -> &[usize] {
        &self.embed
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn e_len(&self) -> usize {
        self.irr.len()
    }

    /// Position in `E` of a lattice element, if irreducible.
    pub fn irr_index(&self, t: usize) -> Option<usize> {
        self.irr_index[t]
    }

    pub fn is_irreducible(&self, t: usize) -> bool {
        self.irr_index[t].is_some()
    }

    /// `{e ∈ E | e ≤ t}` as a mask over `E`.
    pub fn e_below(&self, t: usize) -> u64 {
        let mut m = 0u64;
        for (e, &te) in self.embed.iter().enumerate() {
            if self.lattice.leq(te, t) {
                m |= 1 << e;
            }
        }
        m
    }

    /// `{e ∈ E | t ≤ e}` as a mask over `E`.
    pub fn e_above(&self, t: usize) -> u64 {
        let mut m = 0u64;
        for (e, &te) in self.embed.iter().enumerate() {
            if self.lattice.leq(t, te) {
                m |= 1 << e;
            }
        }
        m
    }

    /// Join of the irreducibles in a mask.
    pub fn join_of_mask(&self, a: u64) -> usize {
        self.lattice.join_all(BitIter(a).map(|e| self.embed[e]))
    }

    /// Meet of the irreducibles in a mask (`1̂` when empty).
    pub fn meet_of_mask(&self, a: u64) -> usize {
        self.lattice.meet_all(BitIter(a).map(|e| self.embed[e]))
    }

    /// `r(t)`: join of all elements strictly below `t`.
    pub fn r(&self, t: usize) -> usize {
        let l = &self.lattice;
        l.join_all((0..l.len()).filter(|&s| l.lt(s, t)))
    }

    /// `s(t)`: meet of the irreducibles strictly above `t`.
    pub fn s(&self, t: usize) -> usize {
        let l = &self.lattice;
        l.meet_all(self.embed.iter().copied().filter(|&e| l.lt(t, e)))
    }

    pub fn r_inf(&self, mut t: usize) -> usize {
        loop {
            let n = self.r(t);
            if n == t {
                return t;
            }
            t = n;
        }
    }

    pub fn s_inf(&self, mut t: usize) -> usize {
        loop {
            let n = self.s(t);
            if n == t {
                return t;
            }
            t = n;
        }
    }

    pub fn rs_operators(&self, t: usize) -> RsValues {
        RsValues { r: self.r(t), s: self.s(t), r_inf: self.r_inf(t), s_inf: self.s_inf(t) }
    }

    /// All meets of subsets of `E`, including the empty meet `1̂`.
    pub fn meet_closure_of_e(&self) -> Vec<bool> {
        let l = &self.lattice;
        let mut seen = vec![false; l.len()];
        let mut queue = VecDeque::from([l.top()]);
        seen[l.top()] = true;
        while let Some(t) = queue.pop_front() {
            for &e in &self.embed {
                let m = l.meet(t, e);
                if !seen[m] {
                    seen[m] = true;
                    queue.push_back(m);
                }
            }
        }
        seen
    }

    /// `G = ∧E ⊔ bulbs` and `Γ = T ∖ G`, cross-checked against
    /// `G = E ⊔ {a | a = r∞s∞(a)}`.
    pub fn g_partition(&self) -> Result<GPartition> {
        let n = self.len();
        let meet_e = self.meet_closure_of_e();
        let mut bulb = vec![false; n];
        for &e in &self.embed {
            if self.s(e) == e {
                let t = self.r_inf(e);
                if !meet_e[t] {
                    bulb[t] = true;
                }
            }
        }
        let in_g: Vec<bool> = (0..n).map(|t| meet_e[t] || bulb[t]).collect();
        for t in 0..n {
            let alt = self.is_irreducible(t) || self.r_inf(self.s_inf(t)) == t;
            if alt != in_g[t] {
                return Err(Error::invariant(format!(
                    "the two descriptions of G disagree at {}",
                    self.lattice.label(t)
                )));
            }
        }
        let pick = |v: &[bool]| (0..n).filter(|&t| v[t]).collect::<Vec<_>>();
        Ok(GPartition {
            meet_e: pick(&meet_e),
            bulbs: pick(&bulb),
            g: pick(&in_g),
            gamma: (0..n).filter(|&t| !in_g[t]).collect(),
            in_g,
        })
    }

    pub fn opposite(&self) -> MarkedLattice {
        irreducibles(&self.lattice.opposite())
    }

    /// Hasse diagram in DOT: irreducibles as open circles, other elements
    /// filled, bulbs double-circled.
    pub fn to_dot(&self, name: &str) -> String {
        let gp = self.g_partition().ok();
        let l = &self.lattice;
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", escape(name));
        let _ = writeln!(out, "  rankdir=BT;");
        let _ = writeln!(out, "  node [shape=circle, label=\"\", width=0.25];");
        for t in 0..l.len() {
            let bulb = gp.as_ref().is_some_and(|g| g.bulbs.contains(&t));
            let shape = if bulb { "doublecircle" } else { "circle" };
            let style = if self.is_irreducible(t) { "solid" } else { "filled" };
            let _ = writeln!(
                out,
                "  n{t} [shape={shape}, style={style}, fillcolor=black, xlabel=\"{}\"];",
                escape(l.label(t))
            );
        }
        for (a, b) in l.poset().covers() {
            let _ = writeln!(out, "  n{a} -> n{b} [arrowhead=none];");
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RsValues {
    pub r: usize,
    pub s: usize,
    pub r_inf: usize,
    pub s_inf: usize,
}

/// Index lists (ascending) of the parts of `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GPartition {
    pub meet_e: Vec<usize>,
    pub bulbs: Vec<usize>,
    pub g: Vec<usize>,
    pub gamma: Vec<usize>,
    pub in_g: Vec<bool>,
}

/// Marks the join-irreducible elements; `E` is listed in lattice order.
pub fn irreducibles(t: &Lattice) -> MarkedLattice {
    let embed: Vec<usize> = (0..t.len()).filter(|&x| t.is_join_irreducible(x)).collect();
    let irr = t.poset().subposet(&embed);
    MarkedLattice::new(t.clone(), irr, embed).expect("irreducibles are consistent by construction")
}

/// Renders a subset mask of a poset as `{a,b}`.
pub fn subset_label(p: &Poset, m: u64) -> String {
    let parts: Vec<&str> = BitIter(m).map(|e| p.label(e)).collect();
    format!("{{{}}}", parts.join(","))
}

/// `I↓(E,R)` ordered by inclusion; `E` embeds via principal ideals, in the
/// order of `P`.
pub fn ideal_lattice(p: &Poset) -> MarkedLattice {
    let ideals = p.lower_ideals();
    let masks = &ideals.masks;
    let n = masks.len();
    let labels = GroundSet::new(masks.iter().map(|&m| subset_label(p, m))).expect("distinct ideals");
    let mut leq = Relation::empty(n, n);
    let mut join = vec![0; n * n];
    let mut meet = vec![0; n * n];
    for (i, &a) in masks.iter().enumerate() {
        for (j, &b) in masks.iter().enumerate() {
            if a & !b == 0 {
                leq.insert(i, j);
            }
            join[i * n + j] = ideals.index_of(a | b).unwrap();
            meet[i * n + j] = ideals.index_of(a & b).unwrap();
        }
    }
    let poset = Poset::new(labels, leq).unwrap();
    let lattice = Lattice::from_parts(poset, join, meet);
    MarkedLattice::new(lattice, p.clone(), ideals.principal.clone()).expect("principal ideals are the irreducibles")
}

/// The chain `n̄ = {0 < 1 < … < n}`.
pub fn total_order(n: usize) -> Lattice {
    let p = Poset::chain(n + 1);
    let join = (0..=n).flat_map(|a| (0..=n).map(move |b| a.max(b))).collect();
    let meet = (0..=n).flat_map(|a| (0..=n).map(move |b| a.min(b))).collect();
    Lattice::from_parts(p, join, meet)
}

/// Subsets of an `n`-set, ordered by (size, mask).
pub fn subset_lattice(n: usize) -> Lattice {
    ideal_lattice(&Poset::antichain(n)).lattice().clone()
}

/// `T × T'` with componentwise order; element `(a,b)` has index `a·|T'| + b`.
pub fn product(t: &Lattice, u: &Lattice) -> Lattice {
    let (n, m) = (t.len(), u.len());
    let size = n * m;
    let labels = GroundSet::new(
        (0..n).flat_map(|a| (0..m).map(move |b| (a, b))).map(|(a, b)| format!("({},{})", t.label(a), u.label(b))),
    )
    .expect("pair labels are distinct");
    let mut leq = Relation::empty(size, size);
    let mut join = vec![0; size * size];
    let mut meet = vec![0; size * size];
    for x in 0..size {
        let (a, b) = (x / m, x % m);
        for y in 0..size {
            let (c, d) = (y / m, y % m);
            if t.leq(a, c) && u.leq(b, d) {
                leq.insert(x, y);
            }
            join[x * size + y] = t.join(a, c) * m + u.join(b, d);
            meet[x * size + y] = t.meet(a, c) * m + u.meet(b, d);
        }
    }
    Lattice::from_parts(Poset::new(labels, leq).unwrap(), join, meet)
}

/// `E ⊔ {0̂, 1̂}` for a forest order (roots minimal) or any poset in which
/// every pair with a common lower bound has a meet and a join.
pub fn bounded_extension(p: &Poset) -> Result<Lattice> {
    let n = p.len();
    let mut labels: Vec<String> = vec!["0".into()];
    labels.extend(p.elements().labels().iter().cloned());
    labels.push("1".into());
    let ground = GroundSet::new(labels)?;
    let mut leq = Relation::empty(n + 2, n + 2);
    for a in 0..n + 2 {
        leq.insert(0, a);
        leq.insert(a, n + 1);
    }
    for (a, b) in p.relation().pairs() {
        leq.insert(a + 1, b + 1);
    }
    Lattice::build(Poset::new(ground, leq)?)
}

/// Full mask over the irreducibles of `t`.
pub fn e_full_mask(t: &MarkedLattice) -> u64 {
    mask_of_len(t.e_len())
}
