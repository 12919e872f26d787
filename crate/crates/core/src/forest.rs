//! Forests, the graph `𝒢(T)` of a lattice, and the geodesic idempotents.
//!
//! Edge sets are stored by source vertex: a vertex has at most one outgoing
//! edge `(x, d(x))`, so a set of edges is a set of vertices.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::{escape, MarkedLattice};
use crate::maps::{h_seq, kappa, product, sign, FormalMapSum, MapImages};
use crate::relation::GroundSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forest {
    vertices: GroundSet,
    parent: Vec<Option<usize>>,
}

impl Forest {
    pub fn new(vertices: GroundSet, parent: Vec<Option<usize>>) -> Result<Self> {
        let n = vertices.len();
        if parent.len() != n {
            return Err(Error::validation("parent list length differs from vertex count"));
        }
        if parent.iter().flatten().any(|&p| p >= n) {
            return Err(Error::validation("parent index out of range"));
        }
        for start in 0..n {
            let mut x = start;
            for _ in 0..=n {
                match parent[x] {
                    Some(p) => x = p,
                    None => break,
                }
            }
            if parent[x].is_some() {
                return Err(Error::validation(format!("cycle through {}", vertices.label(start))));
            }
        }
        Ok(Forest { vertices, parent })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn vertices(&self) -> &GroundSet {
        &self.vertices
    }

    pub fn parent(&self, x: usize) -> Option<usize> {
        self.parent[x]
    }

    /// `d(x)`, with `d(x) = x` on roots.
    pub fn d(&self, x: usize) -> usize {
        self.parent[x].unwrap_or(x)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len()).filter_map(|x| self.parent[x].map(|p| (x, p))).collect()
    }

    fn has_child(&self) -> Vec<bool> {
        let mut c = vec![false; self.len()];
        for p in self.parent.iter().flatten() {
            c[*p] = true;
        }
        c
    }

    /// Vertices with an outgoing edge and no incoming edge.
    pub fn leaves(&self) -> Vec<usize> {
        let c = self.has_child();
        (0..self.len()).filter(|&x| self.parent[x].is_some() && !c[x]).collect()
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.parent[x].is_none()).collect()
    }

    pub fn is_leaf(&self, x: usize) -> bool {
        self.parent[x].is_some() && !self.parent.contains(&Some(x))
    }

    /// `(x, d(x), …, d^δ(x))` ending at a root.
    pub fn geodesic(&self, x: usize) -> Vec<usize> {
        let mut g = vec![x];
        let mut cur = x;
        while let Some(p) = self.parent[cur] {
            g.push(p);
            cur = p;
        }
        g
    }

    /// `τ_A(x) = d(x)` if `x ∈ A`, else `x`.
    pub fn tau(&self, a: &[bool]) -> MapImages {
        (0..self.len()).map(|x| if a[x] { self.d(x) as u32 } else { x as u32 }).collect()
    }

    /// Unions of partial geodesics starting in subsets of `b`, each flagged
    /// with whether it contains the first edge of every `x ∈ b`.
    pub fn partial_geodesic_unions(&self, b: &[usize]) -> BTreeMap<Vec<bool>, bool> {
        let geos: Vec<Vec<usize>> = b.iter().map(|&x| self.geodesic(x)).collect();
        let mut out = BTreeMap::new();
        let mut lens = vec![0usize; b.len()];
        loop {
            let mut a = vec![false; self.len()];
            for (g, &l) in geos.iter().zip(&lens) {
                for &v in &g[..l] {
                    a[v] = true;
                }
            }
            let full = lens.iter().all(|&l| l >= 1);
            out.insert(a, full);
            // Odometer over l_x ∈ {0..δ(x)}.
            let mut i = 0;
            loop {
                if i == lens.len() {
                    return out;
                }
                lens[i] += 1;
                if lens[i] < geos[i].len() {
                    break;
                }
                lens[i] = 0;
                i += 1;
            }
        }
    }

    /// `v_B = Σ_{A ∈ 𝒮_B} (−1)^{|A|} τ_A`.
    pub fn v_b(&self, b: &[usize]) -> FormalMapSum {
        let mut out = FormalMapSum::zero(self.len(), self.len());
        for a in self.partial_geodesic_unions(b).keys() {
            out.add_term(self.tau(a), sign(count(a)));
        }
        out
    }

    /// `u_B = Σ_{A ∈ 𝒮̊_B} (−1)^{|B|+|A|} τ_A`.
    pub fn u_b(&self, b: &[usize]) -> FormalMapSum {
        let mut out = FormalMapSum::zero(self.len(), self.len());
        for (a, &full) in &self.partial_geodesic_unions(b) {
            if full {
                out.add_term(self.tau(a), sign(b.len() + count(a)));
            }
        }
        out
    }

    /// DOT rendering with the leaves highlighted.
    pub fn to_dot(&self, name: &str) -> String {
        let c = self.has_child();
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", escape(name));
        for x in 0..self.len() {
            let leaf = self.parent[x].is_some() && !c[x];
            let style = if leaf { ", style=filled, fillcolor=lightblue, penwidth=2" } else { "" };
            let _ = writeln!(out, "  v{x} [label=\"{}\"{style}];", escape(self.vertices.label(x)));
        }
        for (x, p) in self.edges() {
            let _ = writeln!(out, "  v{x} -> v{p};");
        }
        out.push_str("}\n");
        out
    }
}

fn count(a: &[bool]) -> usize {
    a.iter().filter(|&&x| x).count()
}

/// Uniform parent function on `0..n`: vertex `i` gets no parent or a parent
/// among `i+1..n`, each with equal probability.
pub fn random_forest<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Forest {
    let parent = (0..n)
        .map(|i| {
            let k = rng.gen_range(0..n - i);
            if k == 0 {
                None
            } else {
                Some(i + k)
            }
        })
        .collect();
    Forest::new(GroundSet::indexed(n), parent).expect("parents point forward")
}

/// `h`, `v_x`, `u_x` per leaf and `v_B`, `u_B` for a leaf set `B`.
#[derive(Clone, Debug)]
pub struct GeodesicIdempotents {
    pub leaves: Vec<usize>,
    /// `h` of the complete geodesic of each leaf.
    pub h: Vec<FormalMapSum>,
    pub v_x: Vec<FormalMapSum>,
    pub u_x: Vec<FormalMapSum>,
    pub v_b: FormalMapSum,
    pub u_b: FormalMapSum,
}

pub fn geodesic_idempotents(f: &Forest, b: &[usize]) -> Result<GeodesicIdempotents> {
    if let Some(&x) = b.iter().find(|&&x| x >= f.len() || !f.is_leaf(x)) {
        return Err(Error::validation(format!("vertex {x} is not a leaf")));
    }
    let n = f.len();
    Ok(GeodesicIdempotents {
        leaves: b.to_vec(),
        h: b.iter().map(|&x| h_seq(n, &f.geodesic(x))).collect(),
        v_x: b.iter().map(|&x| f.v_b(&[x])).collect(),
        u_x: b.iter().map(|&x| f.u_b(&[x])).collect(),
        v_b: f.v_b(b),
        u_b: f.u_b(b),
    })
}

/// `𝒢(T)` with the reduction sequence of every `a ∈ Γ`.
#[derive(Clone, Debug)]
pub struct LatticeForest {
    pub forest: Forest,
    pub gamma: Vec<usize>,
    /// `sequences[i]` starts at `gamma[i]`.
    pub sequences: Vec<Vec<usize>>,
}

/// `a < s(a) < … < s^r(a) < r∞s∞(a)`.
pub fn reduction_sequence(t: &MarkedLattice, a: usize) -> Result<Vec<usize>> {
    let l = t.lattice();
    let b = t.r_inf(t.s_inf(a));
    if !l.lt(a, b) {
        return Err(Error::invariant(format!("{} is not below r∞s∞ of itself", l.label(a))));
    }
    let mut seq = vec![a];
    let mut cur = a;
    loop {
        let next = t.s(cur);
        if !l.lt(cur, next) {
            return Err(Error::invariant(format!("s does not increase at {}", l.label(cur))));
        }
        if !l.lt(next, b) {
            if !l.leq(b, next) {
                return Err(Error::invariant(format!("reduction sequence of {} overshoots", l.label(a))));
            }
            break;
        }
        if !t.is_irreducible(next) {
            return Err(Error::invariant(format!("{} in a reduction sequence is reducible", l.label(next))));
        }
        seq.push(next);
        cur = next;
    }
    seq.push(b);
    Ok(seq)
}

pub fn graph_of_lattice(t: &MarkedLattice) -> Result<LatticeForest> {
    let gp = t.g_partition()?;
    let n = t.len();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut sequences = Vec::new();
    for &a in &gp.gamma {
        let seq = reduction_sequence(t, a)?;
        for w in seq.windows(2) {
            match parent[w[0]] {
                Some(p) if p != w[1] => {
                    return Err(Error::invariant(format!("{} has two outgoing edges", t.lattice().label(w[0]))))
                }
                _ => parent[w[0]] = Some(w[1]),
            }
        }
        sequences.push(seq);
    }
    let forest = Forest::new(t.lattice().poset().elements().clone(), parent)
        .map_err(|e| Error::invariant(format!("𝒢(T) is not a forest: {e}")))?;
    let mut leaves = forest.leaves();
    leaves.sort_unstable();
    if leaves != gp.gamma {
        return Err(Error::invariant("the leaves of 𝒢(T) differ from Γ"));
    }
    Ok(LatticeForest { forest, gamma: gp.gamma, sequences })
}

/// `u_a` for every `a ∈ Γ`, ascending.
pub fn u_factors(t: &MarkedLattice) -> Result<(LatticeForest, Vec<FormalMapSum>)> {
    let lf = graph_of_lattice(t)?;
    let us = lf.sequences.iter().map(|s| kappa(t.len(), s)).collect();
    Ok((lf, us))
}

/// `u_T = Π_{a∈Γ} u_a`, with commutation of the factors and agreement with
/// the expansion over `𝒮̊_Γ` asserted.
pub fn u_t(t: &MarkedLattice) -> Result<FormalMapSum> {
    let (lf, us) = u_factors(t)?;
    for i in 0..us.len() {
        for j in i + 1..us.len() {
            if us[i].compose(&us[j])? != us[j].compose(&us[i])? {
                return Err(Error::invariant("two u_a do not commute"));
            }
        }
    }
    let prod = product(t.len(), &us)?;
    if prod != lf.forest.u_b(&lf.gamma) {
        return Err(Error::invariant("u_T differs from its geodesic expansion"));
    }
    Ok(prod)
}
