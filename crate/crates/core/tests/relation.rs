mod common;

use common::*;
use corfun_core::poset::Poset;
use corfun_core::relation::{conjugate, GroundSet, Permutation, Relation};
use proptest::prelude::*;

fn rel(t: usize, s: usize, pairs: &[(usize, usize)]) -> Relation {
    Relation::from_pairs(t, s, pairs.iter().copied()).unwrap()
}

/// Triple-loop boolean product.
fn brute_compose(r: &Relation, s: &Relation) -> Relation {
    let mut out = Relation::empty(r.target(), s.source());
    for z in 0..r.target() {
        for x in 0..s.source() {
            if (0..r.source()).any(|y| r.contains(z, y) && s.contains(y, x)) {
                out.insert(z, x);
            }
        }
    }
    out
}

fn arb_relation(t: usize, s: usize) -> impl Strategy<Value = Relation> {
    proptest::collection::vec(any::<bool>(), t * s).prop_map(move |bits| {
        let mut r = Relation::empty(t, s);
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                r.insert(i / s.max(1), i % s.max(1));
            }
        }
        r
    })
}

#[test]
fn ground_set_rejects_duplicates() {
    assert!(GroundSet::new(["a", "b", "a"]).is_err());
    assert_eq!(GroundSet::new(Vec::<String>::new()).unwrap().len(), 0);
    assert_eq!(GroundSet::new(["x", "y"]).unwrap().index_of("y"), Some(1));
}

#[test]
fn compose_examples() {
    assert_eq!(rel(1, 1, &[(0, 0)]).compose(&rel(1, 1, &[(0, 0)])).unwrap(), rel(1, 1, &[(0, 0)]));
    let s = rel(3, 2, &[(0, 1), (2, 0)]);
    assert_eq!(Relation::identity(3).compose(&s).unwrap(), s);
    assert!(s.compose(&s).is_err(), "shape mismatch must be rejected");
    // Empty middle set.
    let r = Relation::empty(2, 0);
    let t = Relation::empty(0, 3);
    assert_eq!(r.compose(&t).unwrap(), Relation::empty(2, 3));
}

#[test]
fn compose_matches_brute_force_on_wide_relations() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    for &(a, b, c) in &[(3, 3, 3), (5, 70, 4), (70, 66, 130)] {
        let r = random_relation(&mut rng, a, b);
        let s = random_relation(&mut rng, b, c);
        assert_eq!(r.compose(&s).unwrap(), brute_compose(&r, &s));
    }
}

#[test]
fn opposite_examples() {
    assert_eq!(Relation::identity(4).opposite(), Relation::identity(4));
    let r = rel(1, 2, &[(0, 0), (0, 1)]);
    assert_eq!(r.opposite(), rel(2, 1, &[(0, 0), (1, 0)]));
}

#[test]
fn classify_examples() {
    let c = Relation::identity(3).classify().unwrap();
    assert!(c.reflexive && c.transitive && c.antisymmetric && c.is_preorder && c.is_order);
    let c = Relation::full(2, 2).classify().unwrap();
    assert!(c.is_preorder && !c.antisymmetric && !c.is_order);
    assert!(rel(2, 2, &[(0, 0), (1, 1), (0, 1)]).classify().unwrap().is_order);
    assert!(rel(2, 3, &[]).classify().is_err());
}

#[test]
fn preorder_quotient_examples() {
    let order = Poset::chain(3).relation().clone();
    let (q, proj) = order.preorder_quotient().unwrap();
    assert_eq!(q, order);
    assert_eq!(proj, vec![0, 1, 2]);

    let (q, proj) = Relation::full(3, 3).preorder_quotient().unwrap();
    assert_eq!(q.target(), 1);
    assert_eq!(proj, vec![0, 0, 0]);

    // a ~ b, both below c.
    let r = rel(3, 3, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 0), (0, 2), (1, 2)]);
    let (q, proj) = r.preorder_quotient().unwrap();
    assert_eq!(q.target(), 2);
    assert_eq!(proj[0], proj[1]);
    assert!(q.contains(proj[0], proj[2]) && !q.contains(proj[2], proj[0]));
    assert!(q.classify().unwrap().is_order);

    assert!(rel(2, 2, &[(0, 1)]).preorder_quotient().is_err());
}

#[test]
fn delta_examples() {
    assert_eq!(Permutation::identity(2).delta(), Relation::identity(2));
    let swap = Permutation::transposition(2, 0, 1);
    assert_eq!(swap.delta(), rel(2, 2, &[(1, 0), (0, 1)]));
    assert_eq!(swap.delta().compose(&swap.delta()).unwrap(), Relation::identity(2));
    assert!(Permutation::new(vec![0, 0]).is_err());
}

#[test]
fn permutations_enumerate_lexicographically() {
    let all = Permutation::all(4);
    assert_eq!(all.len(), 24);
    assert!(all.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(Permutation::all(0).len(), 1);
}

#[test]
fn conjugation_relabels_pairs() {
    let r = Poset::chain(3).relation().clone();
    let sigma = Permutation::new(vec![2, 0, 1]).unwrap();
    let c = conjugate(&sigma, &r).unwrap();
    for (a, b) in r.pairs() {
        assert!(c.contains(sigma.apply(a), sigma.apply(b)));
    }
    assert_eq!(c.len(), r.len());
}

/// Lower ideals of a preorder: down-closed subsets, by brute force.
fn preorder_ideals(r: &Relation) -> Vec<u64> {
    let n = r.target();
    (0u64..1 << n)
        .filter(|&a| (0..n).all(|y| a >> y & 1 == 0 || (0..n).all(|x| !r.contains(x, y) || a >> x & 1 == 1)))
        .collect()
}

fn arb_preorder(n: usize) -> impl Strategy<Value = Relation> {
    arb_relation(n, n).prop_map(move |mut r| {
        for i in 0..n {
            r.insert(i, i);
        }
        loop {
            let next = r.compose(&r).unwrap();
            if next == r {
                return r;
            }
            r = next;
        }
    })
}

proptest! {
    #[test]
    fn compose_is_associative(
        (r, s, t) in (1usize..5, 1usize..5, 1usize..5, 1usize..5)
            .prop_flat_map(|(a, b, c, d)| (arb_relation(a, b), arb_relation(b, c), arb_relation(c, d)))
    ) {
        prop_assert_eq!(r.compose(&s).unwrap().compose(&t).unwrap(), r.compose(&s.compose(&t).unwrap()).unwrap());
    }

    #[test]
    fn compose_agrees_with_triple_loop(
        (r, s) in (0usize..6, 0usize..6, 0usize..6).prop_flat_map(|(a, b, c)| (arb_relation(a, b), arb_relation(b, c)))
    ) {
        prop_assert_eq!(r.compose(&s).unwrap(), brute_compose(&r, &s));
    }

    #[test]
    fn opposite_reverses_composition(
        (r, s) in (1usize..5, 1usize..5, 1usize..5).prop_flat_map(|(a, b, c)| (arb_relation(a, b), arb_relation(b, c)))
    ) {
        prop_assert_eq!(r.compose(&s).unwrap().opposite(), s.opposite().compose(&r.opposite()).unwrap());
        prop_assert_eq!(r.opposite().opposite(), r);
    }

    #[test]
    fn preorder_quotient_preserves_ideals(r in (1usize..6).prop_flat_map(arb_preorder)) {
        let (q, proj) = r.preorder_quotient().unwrap();
        prop_assert!(q.classify().unwrap().is_order);
        let ideals_r = preorder_ideals(&r);
        let ideals_q = preorder_ideals(&q);
        prop_assert_eq!(ideals_r.len(), ideals_q.len());
        // Pulling back along the projection is the bijection, and it
        // preserves inclusion.
        let pull = |b: u64| (0..r.target()).filter(|&x| b >> proj[x] & 1 == 1).fold(0u64, |m, x| m | 1 << x);
        let mut pulled: Vec<u64> = ideals_q.iter().map(|&b| pull(b)).collect();
        for (i, &a) in ideals_q.iter().enumerate() {
            for (j, &b) in ideals_q.iter().enumerate() {
                prop_assert_eq!(a & !b == 0, pulled[i] & !pulled[j] == 0);
            }
        }
        pulled.sort_unstable();
        prop_assert_eq!(pulled, ideals_r);
    }
}
