//! Acceptance suite: one line per criterion, non-zero exit on any failure.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use corfun_core::catalog::{self, catalog_lattices, catalog_posets, decompositions};
use corfun_core::forest::{geodesic_idempotents, random_forest, u_factors, u_t};
use corfun_core::functor::{
    self, gamma_t, iota, pairing, pairing_matrix, rank_bruteforce, rank_formula, span_rank_gamma, star, star_act_vec,
    surjection_counts, upper_ideals, Budget, FundamentalFunctor, Vdash,
};
use corfun_core::lattice::{ideal_lattice, irreducibles, total_order, MarkedLattice};
use corfun_core::maps::{h_seq, product};
use corfun_core::module::{act_pefr, find_tau, theta_transport_check, PEfRElement};
use corfun_core::par::Exec;
use corfun_core::poset::{MobiusTable, Poset};
use corfun_core::quotients::{k_of, l_of, phi_psi, pi_t};
use corfun_core::relation::{Permutation, Relation};
use corfun_core::total::{is_join_morphism_to_chain, structure_check};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn small_posets() -> Vec<(String, Poset)> {
    catalog_posets().into_iter().filter(|(_, p)| p.len() <= 2).collect()
}

// 1 ----------------------------------------------------------------------
fn lozenge_ranks() -> Check {
    let p = Poset::antichain(2);
    let t = ideal_lattice(&p);
    for x in 0..=5 {
        let want = pow(4, x) - 2 * pow(3, x) + pow(2, x);
        let got = rank_formula(&p, x).map_err(err)?;
        ensure(got == want, || format!("formula at x={x}: {got} ≠ {want}"))?;
        if x <= 3 {
            let bf = rank_bruteforce(&t, x, Budget::default()).map_err(err)?;
            ensure(BigInt::from(bf) == want, || format!("elimination at x={x}: {bf} ≠ {want}"))?;
        }
    }
    Ok("x=0..5 formula, x≤3 elimination".into())
}

// 2 ----------------------------------------------------------------------
fn total_order_ranks() -> Check {
    for n in 0..=3 {
        for x in 0..=4 {
            let closed: BigInt = (0..=n)
                .map(|i| {
                    let s = if (n - i) % 2 == 0 { big(1) } else { big(-1) };
                    s * binom(n, i) * pow(i as i64 + 1, x)
                })
                .sum();
            let hitting = maps(n + 1, x).iter().filter(|m| (1..=n as u32).all(|j| m.contains(&j))).count();
            let got = rank_formula(&Poset::chain(n), x).map_err(err)?;
            ensure(got == closed && closed == BigInt::from(hitting), || format!("n={n}, x={x}: {got}, {closed}, {hitting}"))?;
        }
    }
    Ok("n≤3, x≤4".into())
}

// 3 ----------------------------------------------------------------------
fn elementary_divisors() -> Check {
    let mut cases = 0;
    for (name, p) in small_posets() {
        let lattices = [("I↓", ideal_lattice(&p)), ("K", k_of(&p).marked)];
        for (tn, t) in &lattices {
            for x in 0..=3 {
                let n = functor::matrix_n(t, x, Budget::default(), Exec::default()).map_err(err)?;
                let d = n.smith();
                let nonzero: Vec<&BigInt> = d.iter().filter(|v| !v.is_zero()).collect();
                ensure(nonzero.iter().all(|v| v.is_one()), || format!("{name}/{tn}, x={x}: divisors {d:?}"))?;
                let want = rank_formula(&p, x).map_err(err)?;
                ensure(BigInt::from(nonzero.len()) == want, || format!("{name}/{tn}, x={x}: {} divisors, want {want}", nonzero.len()))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} matrices"))
}

// 4 ----------------------------------------------------------------------
fn idempotent_suite() -> Check {
    let mut lattices: Vec<(String, MarkedLattice)> =
        catalog_lattices().into_iter().map(|(n, l)| (n, irreducibles(&l))).collect();
    // Catalog lattices have small Γ; these have more factors.
    for n in [3, 4] {
        lattices.push((format!("boolean{n}"), irreducibles(&catalog::lattice_by_name(&format!("boolean{n}")).unwrap())));
    }
    lattices.push(("I↓(n)".into(), ideal_lattice(&catalog::n_poset())));
    let mut factors = 0;
    for (name, t) in &lattices {
        let (lf, us) = u_factors(t).map_err(err)?;
        for (seq, u) in lf.sequences.iter().zip(&us) {
            let h = h_seq(t.len(), seq);
            ensure(h.is_idempotent(), || format!("{name}: h of {seq:?} is not idempotent"))?;
            ensure(u.is_idempotent(), || format!("{name}: u_a of {seq:?} is not idempotent"))?;
            factors += 1;
        }
        for a in &us {
            for b in &us {
                ensure(a.compose(b).unwrap() == b.compose(a).unwrap(), || format!("{name}: u_a do not commute"))?;
            }
        }
        let ut = u_t(t).map_err(|e| format!("{name}: {e}"))?;
        ensure(ut.is_idempotent(), || format!("{name}: u_T is not idempotent"))?;
        ensure(ut == product(t.len(), &us).unwrap(), || format!("{name}: u_T differs from Π u_a"))?;
        ensure(ut == lf.forest.u_b(&lf.gamma), || format!("{name}: u_T differs from its expansion"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..100 {
        let n = rng.gen_range(1..=8);
        let f = random_forest(n, &mut rng);
        let leaves = f.leaves();
        let gi = geodesic_idempotents(&f, &leaves).map_err(err)?;
        for (k, &x) in leaves.iter().enumerate() {
            ensure(gi.h[k].is_idempotent(), || format!("forest {i}: h at leaf {x}"))?;
            ensure(gi.v_x[k].is_idempotent() && gi.u_x[k].is_idempotent(), || format!("forest {i}: v/u at leaf {x}"))?;
        }
        for a in &gi.u_x {
            for b in &gi.u_x {
                ensure(a.compose(b).unwrap() == b.compose(a).unwrap(), || format!("forest {i}: u_x do not commute"))?;
            }
        }
        ensure(gi.v_b == product(n, &gi.v_x).unwrap(), || format!("forest {i}: v_B ≠ Π v_x"))?;
        ensure(gi.u_b == product(n, &gi.u_x).unwrap(), || format!("forest {i}: u_B ≠ Π u_x"))?;
        ensure(gi.u_b.is_idempotent(), || format!("forest {i}: u_B not idempotent"))?;
    }
    Ok(format!("{} lattices ({factors} factors), 100 forests", lattices.len()))
}

// 5 ----------------------------------------------------------------------
fn end_algebra() -> Check {
    for n in 0..=3 {
        let rep = structure_check(n).map_err(err)?;
        ensure(rep.ok(), || format!("n={n}: {:?}", rep.failures))?;
        // Independent count of join-endomorphisms of n̄ over all maps.
        let t = total_order(n);
        let count = maps(n + 1, n + 1).iter().filter(|m| is_join_morphism_to_chain(&t, m)).count();
        let want: BigInt = (0..=n).map(|l| binom(n, l) * binom(n, l)).sum();
        ensure(BigInt::from(count) == want && rep.join_endomaps == count, || format!("n={n}: {count} endomaps, want {want}"))?;
    }
    Ok("n≤3".into())
}

// 6 ----------------------------------------------------------------------
fn vdash_equivalence() -> Check {
    let mut lattices: Vec<MarkedLattice> = Vec::new();
    for (_, p) in catalog_posets().into_iter().filter(|(_, p)| (1..=3).contains(&p.len())) {
        lattices.push(ideal_lattice(&p));
        lattices.push(k_of(&p).marked);
    }
    for name in ["m3", "n5", "c", "cop"] {
        lattices.push(irreducibles(&catalog::lattice_by_name(name).unwrap()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut positives = 0;
    for _ in 0..10_000 {
        let t = &lattices[rng.gen_range(0..lattices.len())];
        let p = t.irr();
        let ne = p.len();
        let x = rng.gen_range(1..=4);
        let ups = upper_ideals(p);
        let mut phi: Vec<u32> = (0..x).map(|_| rng.gen_range(0..t.len()) as u32).collect();
        let mut psi: Vec<u64> = (0..x).map(|_| ups[rng.gen_range(0..ups.len())]).collect();
        // Half the samples plant witnesses (ι(e), [e,·[) so that ⊢ can hold.
        if rng.gen_bool(0.5) && x >= ne {
            for e in 0..ne {
                phi[e] = t.embed()[e] as u32;
                psi[e] = p.up_mask(e);
            }
            for k in ne..x {
                if rng.gen_bool(0.5) {
                    psi[k] = 0;
                }
            }
        }
        let c = Vdash::new(t).conditions(&phi, &psi);
        ensure(c.agree(), || format!("φ={phi:?} ψ={psi:?}: {c:?}"))?;
        // Oracle for (d) by relation composition.
        let mut g_phi = Relation::empty(x, ne);
        let mut g_psi = Relation::empty(x, ne);
        for k in 0..x {
            for e in 0..ne {
                if t.lattice().leq(t.embed()[e], phi[k] as usize) {
                    g_phi.insert(k, e);
                }
                if psi[k] >> e & 1 == 1 {
                    g_psi.insert(k, e);
                }
            }
        }
        let d = g_psi.opposite().compose(&g_phi).unwrap() == p.relation().opposite();
        ensure(d == c.d, || format!("oracle disagrees on φ={phi:?} ψ={psi:?}"))?;
        positives += usize::from(d);
    }
    ensure(positives > 500, || format!("only {positives} positive samples"))?;
    Ok(format!("10000 pairs, {positives} with φ ⊢ ψ"))
}

// 7 ----------------------------------------------------------------------
fn duality() -> Check {
    let mut checked = 0;
    for (name, l) in catalog_lattices().into_iter().filter(|(_, l)| l.len() <= 5) {
        let mu = MobiusTable::new(l.poset());
        for x in 0..=2 {
            let all = maps(l.len(), x);
            for phi in &all {
                let s = star(&l, &mu, phi);
                for lambda in &all {
                    let v: BigInt = s.terms().filter(|(rho, _)| pairing(&l, lambda, rho)).map(|(_, c)| c.clone()).sum();
                    let want = if lambda == phi { big(1) } else { big(0) };
                    ensure(v == want, || format!("{name}: (λ,φ*) wrong for λ={lambda:?}, φ={phi:?}"))?;
                    checked += 1;
                }
            }
            let pm = pairing_matrix(&l, x, Budget::default()).map_err(err)?;
            let det = pm.det();
            ensure(det == big(1) || det == big(-1), || format!("{name}, x={x}: det {det}"))?;
        }
    }
    for (name, l) in catalog_lattices() {
        let t = irreducibles(&l);
        let mu = MobiusTable::new(l.poset());
        let g = gamma_t(&t);
        ensure(g == star(&l, &mu, &iota(&t)), || format!("{name}: γ_T ≠ ι*"))?;
        ensure(star_act_vec(&l, t.irr().relation(), &g) == g, || format!("{name}: R⋆γ_T ≠ γ_T"))?;
    }
    Ok(format!("{checked} pairings"))
}

// 8 ----------------------------------------------------------------------
fn gamma_span() -> Check {
    for (name, p) in [("antichain2", Poset::antichain(2)), ("chain2", Poset::chain(2)), ("v", catalog::v_poset())] {
        let t = ideal_lattice(&p);
        for x in 0..=3 {
            let got = span_rank_gamma(&t, x, Budget::default()).map_err(err)?;
            let want = rank_formula(&p.opposite(), x).map_err(err)?;
            ensure(BigInt::from(got) == want, || format!("{name}, x={x}: {got} ≠ {want}"))?;
        }
    }
    Ok("antichain2, chain2, v; x≤3".into())
}

// 9 ----------------------------------------------------------------------
fn action_functoriality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut report = Vec::new();
    for (name, sizes) in [("lozenge", vec![2]), ("p32", vec![2, 3])] {
        let t = irreducibles(&catalog::lattice_by_name(name).unwrap());
        let f = FundamentalFunctor::new(&t, Budget::default()).map_err(err)?;
        for &x in &sizes {
            let b = f.basis(x).map_err(err)?;
            let id = f.matrix(&Relation::identity(x)).map_err(err)?;
            ensure(id == corfun_core::linalg::IntegerMatrix::identity(b.len()), || format!("{name}, x={x}: 𝕊(Δ) ≠ id"))?;
            for _ in 0..50 {
                let u = random_relation(&mut rng, x, x);
                let v = random_relation(&mut rng, x, x);
                let lhs = f.matrix(&v).map_err(err)?.mul(&f.matrix(&u).map_err(err)?);
                let rhs = f.matrix(&v.compose(&u).unwrap()).map_err(err)?;
                ensure(lhs == rhs, || format!("{name}, x={x}: 𝕊(V)𝕊(U) ≠ 𝕊(VU) for U={u:?}, V={v:?}"))?;
            }
            report.push(format!("{name} |B_{x}|={}", b.len()));
        }
    }
    Ok(report.join(", "))
}

// 10 ---------------------------------------------------------------------
fn examples_identities() -> Check {
    // Chain multiplicities and closing summand as printed for each example.
    let expected_chains: [(&str, &[usize]); 5] =
        [("lozenge", &[1, 3, 2]), ("m3", &[1, 4, 3]), ("n5", &[1, 4, 4, 1]), ("c", &[1, 4, 5, 2]), ("p32", &[1, 5, 7, 3])];
    for d in decompositions() {
        let want = expected_chains.iter().find(|(n, _)| *n == d.name).unwrap().1;
        let chains: Vec<usize> = d.summands.iter().filter(|s| s.poset_name.starts_with("chain") && s.poset_name != "chain-plus-point").map(|s| s.multiplicity).collect();
        ensure(chains == want, || format!("{}: chain multiplicities {chains:?}", d.name))?;
        for x in 0..=5 {
            let c = catalog::check_decomposition(&d, x).map_err(err)?;
            ensure(c.holds(), || format!("{} at x={x}: {} ≠ {}", d.name, c.lhs, c.rhs))?;
        }
    }
    for x in 0..=5 {
        let three = pow(5, x) - 3 * pow(4, x) + 3 * pow(3, x) - pow(2, x);
        for p in [Poset::antichain(3), catalog::chain_plus_point(), catalog::v_poset()] {
            ensure(rank_formula(&p, x).map_err(err)? == three, || format!("closing summand at x={x}"))?;
        }
    }
    Ok("lozenge, m3, n5, c, p32; x=0..5".into())
}

// 11 ---------------------------------------------------------------------
fn fundamental_module() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut pairs = 0usize;
    for (name, p) in catalog_posets().into_iter().filter(|(_, p)| p.len() <= 3) {
        let n = p.len();
        let rels = 1u64 << (n * n);
        let basis: Vec<PEfRElement> = Permutation::all(n).into_iter().map(|s| PEfRElement::basis(&p, s).unwrap()).collect();
        let samples: Vec<(u64, u64)> = if rels * rels <= 10_000 {
            (0..rels).flat_map(|a| (0..rels).map(move |b| (a, b))).collect()
        } else {
            (0..10_000).map(|_| (rng.gen_range(0..rels), rng.gen_range(0..rels))).collect()
        };
        for (a, b) in samples {
            let (q, q2) = (relation_from_bits(n, a), relation_from_bits(n, b));
            let qq = q2.compose(&q).unwrap();
            for m in &basis {
                let lhs = act_pefr(&q2, &act_pefr(&q, m).map_err(err)?).map_err(err)?;
                let rhs = act_pefr(&qq, m).map_err(err)?;
                ensure(lhs == rhs, || format!("{name}: module axiom fails for Q={q:?}, Q'={q2:?}"))?;
            }
            pairs += 1;
        }
        // Orders between Δ and R fix f_R.
        for bits in 0..rels {
            let q = relation_from_bits(n, bits);
            if Relation::identity(n).is_subset(&q) && q.is_subset(p.relation()) {
                ensure(find_tau(&p, &q, &Permutation::identity(n)).map_err(err)? == Some(Permutation::identity(n)), || format!("{name}: Q ⊆ R does not fix f_R"))?;
            }
        }
    }
    for (name, p) in [("antichain2", Poset::antichain(2)), ("chain2", Poset::chain(2)), ("v", catalog::v_poset())] {
        let rep = theta_transport_check(&p).map_err(err)?;
        ensure(rep.ok() && rep.nonzero > 0, || format!("{name}: {:?}", rep.mismatches.first()))?;
    }
    Ok(format!("{pairs} relation pairs, θ on 3 posets"))
}

// 12 ---------------------------------------------------------------------
fn lattice_quotients() -> Check {
    for n in 1..=5 {
        let p = Poset::chain(n);
        let l = l_of(&p);
        ensure(l.lattice().len() == n, || format!("|L(chain{n})| = {}", l.lattice().len()))?;
        let k = k_of(&p);
        ensure(k.masks == p.lower_ideals().masks, || format!("K(chain{n}) ≠ I↓"))?;
    }
    for m in 2..=5 {
        let l = l_of(&Poset::antichain(m));
        ensure(l.lattice().len() == m + 2, || format!("|L(equality{m})| = {}", l.lattice().len()))?;
    }
    for (name, p) in catalog_posets() {
        let k = k_of(&p);
        let irr = irreducibles(k.lattice());
        ensure(irr.irr().is_isomorphic(&p), || format!("Irr K({name}) ≇ {name}"))?;
    }
    for (name, l) in catalog_lattices() {
        let t = irreducibles(&l);
        let pi = pi_t(&t);
        let pp = phi_psi(&t).map_err(err)?;
        ensure(pi.is_surjective() && pi.preserves_joins(), || format!("{name}: I↓ → T"))?;
        ensure(pp.phi.is_surjective() && pp.phi.preserves_joins(), || format!("{name}: T → L"))?;
        let psi = pp.psi.as_ref().map_err(|e| format!("{name}: {e}"))?;
        ensure(psi.preserves_joins(), || format!("{name}: T → K"))?;
    }
    Ok("chains, equality, catalog sandwiches".into())
}

// 13 ---------------------------------------------------------------------
fn g_invariance() -> Check {
    let mut sizes = Vec::new();
    for (name, p) in catalog_posets() {
        let a = ideal_lattice(&p).g_partition().map_err(err)?.g.len();
        let b = k_of(&p).marked.g_partition().map_err(err)?.g.len();
        ensure(a == b, || format!("{name}: |G| = {a} on I↓, {b} on K"))?;
        sizes.push(format!("{name}:{a}"));
    }
    Ok(sizes.join(" "))
}

// 14 ---------------------------------------------------------------------
fn counting() -> Check {
    for x in 0..=5 {
        for g in 0..=6 {
            let all = maps(g, x);
            for e in 0..=g.min(4) {
                let hit = all.iter().filter(|m| (0..e as u32).all(|v| m.contains(&v))).count();
                let c = surjection_counts(x, e, Some(g)).map_err(err)?;
                ensure(c.ss == Some(BigInt::from(hit)), || format!("ss({x},{e},{g})"))?;
                if g == e {
                    ensure(c.s == BigInt::from(hit), || format!("s({x},{e})"))?;
                }
            }
        }
    }
    Ok("x≤5, e≤4, g≤6".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 14] = [
        ("lozenge ranks", lozenge_ranks),
        ("total order ranks", total_order_ranks),
        ("elementary divisors", elementary_divisors),
        ("idempotent suite", idempotent_suite),
        ("end algebra of n̄", end_algebra),
        ("⊢ equivalence", vdash_equivalence),
        ("duality", duality),
        ("γ-span", gamma_span),
        ("action functoriality", action_functoriality),
        ("decomposition identities", examples_identities),
        ("fundamental module", fundamental_module),
        ("lattice quotients", lattice_quotients),
        ("|G| invariance", g_invariance),
        ("counting", counting),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

