//! Named lattices and posets, and the decomposition identities of the
//! small-lattice examples.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::functor::rank_formula;
use crate::lattice::{bounded_extension, product, subset_lattice, total_order, Lattice};
use crate::poset::Poset;
use crate::relation::GroundSet;
use crate::total::join_morphisms;

fn lattice(labels: &[&str], covers: &[(usize, usize)]) -> Lattice {
    let p = Poset::from_covers(GroundSet::new(labels.iter().copied()).unwrap(), covers).unwrap();
    Lattice::build(p).expect("catalog entries are lattices")
}

fn poset(labels: &[&str], covers: &[(usize, usize)]) -> Poset {
    Poset::from_covers(GroundSet::new(labels.iter().copied()).unwrap(), covers).unwrap()
}

/// The four-element Boolean lattice.
pub fn lozenge() -> Lattice {
    lattice(&["0", "a", "b", "1"], &[(0, 1), (0, 2), (1, 3), (2, 3)])
}

pub fn m3() -> Lattice {
    lattice(&["0", "a", "b", "c", "1"], &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
}

/// `0 < a < b < 1`, `0 < c < 1`.
pub fn n5() -> Lattice {
    lattice(&["0", "a", "b", "c", "1"], &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
}

/// `0 < c < a, b < 1`.
pub fn c() -> Lattice {
    lattice(&["0", "c", "a", "b", "1"], &[(0, 1), (1, 2), (1, 3), (2, 4), (3, 4)])
}

pub fn cop() -> Lattice {
    c().opposite()
}

/// The product of the chains with 3 and 2 elements.
pub fn p32() -> Lattice {
    product(&total_order(2), &total_order(1))
}

/// A tree with branches of lengths 2 and 1 under the root `r`; roots are
/// minimal.
pub fn branch_tree() -> Poset {
    poset(&["r", "x1", "x2", "y1"], &[(0, 1), (1, 2), (0, 3)])
}

/// `E ⊔ {0̂, 1̂}` for the forest [`branch_tree`].
pub fn union_tree() -> Lattice {
    bounded_extension(&branch_tree()).expect("a forest with two maximal elements bounds to a lattice")
}

pub const LATTICE_NAMES: &[&str] = &["lozenge", "m3", "n5", "c", "cop", "p32", "tree", "chainN", "booleanN"];

/// Resolves `lozenge`, `m3`, `n5`, `c`, `cop`, `p32`, `tree`, `chain<N>` (the
/// lattice `N̄` with `N+1` elements) and `boolean<N>`.
pub fn lattice_by_name(name: &str) -> Result<Lattice> {
    let sized = |prefix: &str| -> Option<Result<usize>> {
        name.strip_prefix(prefix).map(|s| s.parse::<usize>().map_err(|_| Error::validation(format!("bad size in '{name}'"))))
    };
    match name {
        "lozenge" => Ok(lozenge()),
        "m3" => Ok(m3()),
        "n5" => Ok(n5()),
        "c" => Ok(c()),
        "cop" => Ok(cop()),
        "p32" => Ok(p32()),
        "tree" => Ok(union_tree()),
        _ => {
            if let Some(n) = sized("chain") {
                let n = n?;
                if n > 62 {
                    return Err(Error::validation("chain size must be at most 62"));
                }
                Ok(total_order(n))
            } else if let Some(n) = sized("boolean") {
                let n = n?;
                if n > 6 {
                    return Err(Error::validation("boolean size must be at most 6"));
                }
                Ok(subset_lattice(n))
            } else {
                Err(Error::validation(format!("unknown lattice '{name}'; known: {}", LATTICE_NAMES.join(", "))))
            }
        }
    }
}

/// `c < a`, `c < b`.
pub fn v_poset() -> Poset {
    poset(&["c", "a", "b"], &[(0, 1), (0, 2)])
}

/// `a < t`, `b < t`.
pub fn lambda_poset() -> Poset {
    poset(&["a", "b", "t"], &[(0, 2), (1, 2)])
}

/// `a < b` beside an isolated `c`.
pub fn chain_plus_point() -> Poset {
    poset(&["a", "b", "c"], &[(0, 1)])
}

/// Four elements `b1 < t2 > b3 < t4`.
pub fn n_poset() -> Poset {
    poset(&["b1", "t2", "b3", "t4"], &[(0, 1), (2, 1), (2, 3)])
}

pub const POSET_NAMES: &[&str] = &["antichainN", "equalityN", "chainN", "v", "lambda", "chain-plus-point", "n", "tree"];

/// `antichain<N>` (alias `equality<N>`), `chain<N>`, `v`, `lambda`,
/// `chain-plus-point`, `n`, `tree`.
pub fn poset_by_name(name: &str) -> Result<Poset> {
    let sized = |prefix: &str| -> Option<Result<usize>> {
        name.strip_prefix(prefix).map(|s| {
            s.parse::<usize>()
                .ok()
                .filter(|&n| n <= 64)
                .ok_or_else(|| Error::validation(format!("bad size in '{name}'")))
        })
    };
    match name {
        "v" => Ok(v_poset()),
        "lambda" => Ok(lambda_poset()),
        "chain-plus-point" => Ok(chain_plus_point()),
        "n" => Ok(n_poset()),
        "tree" => Ok(branch_tree()),
        _ => {
            if let Some(n) = sized("antichain").or_else(|| sized("equality")) {
                Ok(Poset::antichain(n?))
            } else if let Some(n) = sized("chain") {
                Ok(Poset::chain(n?))
            } else {
                Err(Error::validation(format!("unknown poset '{name}'; known: {}", POSET_NAMES.join(", "))))
            }
        }
    }
}

/// Posets used by the catalog-wide checks.
pub fn catalog_posets() -> Vec<(String, Poset)> {
    let mut out: Vec<(String, Poset)> = Vec::new();
    for n in 0..=3 {
        out.push((format!("antichain{n}"), Poset::antichain(n)));
    }
    for n in 1..=4 {
        out.push((format!("chain{n}"), Poset::chain(n)));
    }
    out.push(("v".into(), v_poset()));
    out.push(("lambda".into(), lambda_poset()));
    out.push(("chain-plus-point".into(), chain_plus_point()));
    out.push(("n".into(), n_poset()));
    out.push(("tree".into(), branch_tree()));
    out
}

/// Lattices used by the catalog-wide checks.
pub fn catalog_lattices() -> Vec<(String, Lattice)> {
    let mut out: Vec<(String, Lattice)> =
        ["lozenge", "m3", "n5", "c", "cop", "p32", "tree"].iter().map(|&n| (n.to_string(), lattice_by_name(n).unwrap())).collect();
    for n in 0..=4 {
        out.push((format!("chain{n}"), total_order(n)));
    }
    out
}

/// One side of a decomposition `|T|^x = Σ mult · rank_formula(poset, x)`.
#[derive(Clone, Debug)]
pub struct Summand {
    pub multiplicity: usize,
    pub poset_name: String,
    pub poset: Poset,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub name: &'static str,
    pub lattice: Lattice,
    /// Chain summands `|𝒱_n| · 𝕊_n`, then the remaining ones.
    pub summands: Vec<Summand>,
}

/// Chain summands from strictly increasing sequences ending at `1̂`.
fn chain_summands(t: &Lattice) -> Vec<Summand> {
    (0..t.len())
        .map(|n| (n, join_morphisms(t, n).strict_count()))
        .take_while(|&(_, m)| m > 0)
        .map(|(n, m)| Summand { multiplicity: m, poset_name: format!("chain{n}"), poset: Poset::chain(n) })
        .collect()
}

fn with_chains(name: &'static str, lattice: Lattice, extra: Vec<(usize, &str, Poset)>) -> Decomposition {
    let mut summands = chain_summands(&lattice);
    summands.extend(extra.into_iter().map(|(m, n, p)| Summand { multiplicity: m, poset_name: n.into(), poset: p }));
    Decomposition { name, lattice, summands }
}

/// The decompositions of `F_T` for the five small examples.
pub fn decompositions() -> Vec<Decomposition> {
    vec![
        with_chains("lozenge", lozenge(), vec![(1, "antichain2", Poset::antichain(2))]),
        with_chains("m3", m3(), vec![(3, "antichain2", Poset::antichain(2)), (1, "antichain3", Poset::antichain(3))]),
        with_chains("n5", n5(), vec![(2, "antichain2", Poset::antichain(2)), (1, "chain-plus-point", chain_plus_point())]),
        with_chains("c", c(), vec![(1, "antichain2", Poset::antichain(2)), (1, "v", v_poset())]),
        with_chains(
            "p32",
            p32(),
            vec![
                (3, "antichain2", Poset::antichain(2)),
                (1, "v", v_poset()),
                (1, "lambda", lambda_poset()),
                (2, "chain-plus-point", chain_plus_point()),
                (1, "n", n_poset()),
            ],
        ),
    ]
}

/// Evaluation of one decomposition at `x`.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub x: usize,
    pub lhs: BigInt,
    pub terms: Vec<(usize, String, BigInt)>,
    pub rhs: BigInt,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn check_decomposition(d: &Decomposition, x: usize) -> Result<IdentityCheck> {
    let lhs = BigInt::from(d.lattice.len()).pow(x as u32);
    let mut terms = Vec::new();
    let mut rhs = BigInt::from(0);
    for s in &d.summands {
        let r = rank_formula(&s.poset, x)?;
        rhs += BigInt::from(s.multiplicity) * &r;
        terms.push((s.multiplicity, s.poset_name.clone(), r));
    }
    Ok(IdentityCheck { name: d.name, x, lhs, terms, rhs })
}
