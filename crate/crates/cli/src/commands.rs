use std::fmt::Write as _;

use corfun_core::catalog::{check_decomposition, decompositions};
use corfun_core::forest::{geodesic_idempotents, graph_of_lattice, random_forest, u_factors, u_t};
use corfun_core::functor::{
    basis_bx, matrix_n, rank_formula, smith, span_rank_gamma, upper_ideals, Budget, FundamentalFunctor, Vdash,
};
use corfun_core::lattice::{ideal_lattice, irreducibles, subset_label, Lattice, MarkedLattice};
use corfun_core::maps::{FormalMapSum, MapImages};
use corfun_core::module::theta_transport_check;
use corfun_core::par::{map_indices, Exec};
use corfun_core::poset::Poset;
use corfun_core::quotients::{k_of, l_of, phi_psi, pi_t, ClosedLattice, JoinMorphism};
use corfun_core::total::structure_check;
use corfun_core::{Error, Result};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::input::{load_relation, Source};

/// Fixed seed for every randomized command.
pub const SEED: u64 = 0xC0F;

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Exact integers: JSON numbers when they fit, decimal strings otherwise.
fn num(n: &BigInt) -> Value {
    i64::try_from(n).map_or_else(|_| Value::String(n.to_string()), Value::from)
}

fn labels(l: &Lattice, m: &[u32]) -> Vec<String> {
    m.iter().map(|&t| l.label(t as usize).to_string()).collect()
}

fn element_labels(l: &Lattice, ts: &[usize]) -> Vec<String> {
    ts.iter().map(|&t| l.label(t).to_string()).collect()
}

fn covers_json(l: &Lattice) -> Value {
    l.poset().covers().into_iter().map(|(a, b)| json!([l.label(a), l.label(b)])).collect()
}

fn sum_json(l: &Lattice, s: &FormalMapSum) -> Value {
    s.sorted_terms().into_iter().map(|(m, c)| json!({"coeff": num(c), "map": labels(l, m)})).collect()
}

// ---------------------------------------------------------------- poset

pub fn poset_ideals(src: &Source) -> Result<String> {
    let p = src.poset()?;
    let ideals = p.lower_ideals();
    let list: Vec<String> = ideals.masks.iter().map(|&m| subset_label(&p, m)).collect();
    Ok(pretty(&json!({"count": list.len(), "ideals": list})))
}

pub fn poset_auts(src: &Source, bound: usize) -> Result<String> {
    let p = src.poset()?;
    let auts = p.automorphisms(bound)?;
    let list: Vec<Vec<&str>> = auts.iter().map(|s| s.images().iter().map(|&i| p.label(i)).collect()).collect();
    Ok(pretty(&json!({"elements": p.elements().labels(), "order": auts.len(), "automorphisms": list})))
}

/// CSV `a,b,mu` over all pairs `a ≤ b`.
pub fn poset_mobius(src: &Source) -> Result<String> {
    let p = src.poset()?;
    let mu = p.mobius_table();
    let mut out = String::from("a,b,mu\n");
    for (b, a) in p.relation().opposite().pairs() {
        let _ = writeln!(out, "{},{},{}", p.label(a), p.label(b), mu.get(a, b));
    }
    Ok(out)
}

// -------------------------------------------------------------- lattice

pub fn lattice_build(src: &Source) -> Result<String> {
    let t = src.marked()?;
    let l = t.lattice();
    Ok(pretty(&json!({
        "elements": l.poset().elements().labels(),
        "covers": covers_json(l),
        "bottom": l.label(l.bottom()),
        "top": l.label(l.top()),
    })))
}

pub fn lattice_info(src: &Source) -> Result<String> {
    let t = src.marked()?;
    let l = t.lattice();
    let gp = t.g_partition()?;
    Ok(pretty(&json!({
        "name": src.label(),
        "size": l.len(),
        "irr": t.e_len(),
        "irreducibles": element_labels(l, t.embed()),
        "distributive": l.is_distributive(),
        "G": gp.g.len(),
        "meet_closure": element_labels(l, &gp.meet_e),
        "bulbs": element_labels(l, &gp.bulbs),
        "Gamma": element_labels(l, &gp.gamma),
    })))
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    #[value(name = "L")]
    L,
    #[value(name = "K")]
    K,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Dot,
}

/// The closed-ideal lattice and the fibres of `I↓(P) → L` (or `K`).
pub fn lattice_closure(src: &Source, mode: Mode, format: Format) -> Result<String> {
    let p = src.poset()?;
    let cl: ClosedLattice = match mode {
        Mode::L => l_of(&p),
        Mode::K => k_of(&p),
    };
    let l = cl.lattice();
    if format == Format::Dot {
        return Ok(cl.marked.to_dot(&format!("{}_{mode:?}", src.label())));
    }
    let base = p.lower_ideals();
    let fibres: Vec<Value> = (0..l.len())
        .map(|c| {
            let members: Vec<String> = (0..base.masks.len())
                .filter(|&i| cl.projection[i] == c)
                .map(|i| subset_label(&p, base.masks[i]))
                .collect();
            json!({"closed": l.label(c), "ideals": members})
        })
        .collect();
    Ok(pretty(&json!({
        "mode": format!("{mode:?}"),
        "elements": l.poset().elements().labels(),
        "covers": covers_json(l),
        "generators": element_labels(l, &cl.gen),
        "fibres": fibres,
    })))
}

fn morphism_json(f: &JoinMorphism) -> Value {
    let images: Vec<Value> =
        (0..f.source.len()).map(|t| json!([f.source.label(t), f.target.label(f.apply(t))])).collect();
    json!({"images": images, "joins": f.preserves_joins(), "surjective": f.is_surjective()})
}

/// The sandwich `I↓(E,R) → T → L(E,R)` and, when defined, `T → K(E,R)`.
pub fn lattice_quotients(src: &Source) -> Result<String> {
    let t = src.marked()?;
    let pi = pi_t(&t);
    let pp = phi_psi(&t)?;
    let psi = match &pp.psi {
        Ok(f) => morphism_json(f),
        Err(reason) => json!({"undefined": reason}),
    };
    let ok = pi.is_surjective() && pp.phi.is_surjective() && pp.phi.preserves_joins();
    if !ok {
        return Err(Error::invariant("a sandwich map is not a surjective join-morphism"));
    }
    Ok(pretty(&json!({"pi": morphism_json(&pi), "phi": morphism_json(&pp.phi), "psi": psi})))
}

pub fn lattice_dot(src: &Source) -> Result<String> {
    Ok(src.marked()?.to_dot(&src.label()))
}

// ----------------------------------------------------------------- endo

pub fn endo_total(n: usize) -> Result<String> {
    let rep = structure_check(n)?;
    let out = pretty(&json!({
        "n": rep.n,
        "quadruples": rep.quadruples_checked,
        "join_endomaps": rep.join_endomaps,
        "expected": rep.expected_basis,
        "f_rank": rep.f_rank,
        "blocks": rep.blocks,
        "failures": rep.failures,
    }));
    if rep.ok() {
        Ok(out)
    } else {
        Err(Error::invariant(format!("End(n̄) check failed: {}", rep.failures.join("; "))))
    }
}

// --------------------------------------------------------------- forest

/// `𝒢(T)` of a lattice, or a seeded random forest on `random` vertices.
pub fn forest_build(src: Option<&Source>, random: Option<usize>, seed: u64, format: Format) -> Result<String> {
    let (forest, name) = match (src, random) {
        (Some(s), _) => (graph_of_lattice(&s.marked()?)?.forest, s.label()),
        (None, Some(n)) => (random_forest(n, &mut ChaCha8Rng::seed_from_u64(seed)), format!("random{n}")),
        (None, None) => return Err(Error::validation("give a lattice source or --random N")),
    };
    if format == Format::Dot {
        return Ok(forest.to_dot(&name));
    }
    let v = forest.vertices();
    let edges: Vec<Value> = forest.edges().into_iter().map(|(a, b)| json!([v.label(a), v.label(b)])).collect();
    let leaves: Vec<&str> = forest.leaves().into_iter().map(|x| v.label(x)).collect();
    let roots: Vec<&str> = forest.roots().into_iter().map(|x| v.label(x)).collect();
    Ok(pretty(&json!({"vertices": v.labels(), "edges": edges, "leaves": leaves, "roots": roots})))
}

/// `u_T` with its factors for a lattice; `v_B`, `u_B` over all leaves for a
/// random forest.
pub fn forest_idempotents(src: Option<&Source>, random: Option<usize>, seed: u64) -> Result<String> {
    if let Some(s) = src {
        let t = s.marked()?;
        let l = t.lattice();
        let (lf, _) = u_factors(&t)?;
        let u = u_t(&t)?;
        let seqs: Vec<Vec<String>> = lf.sequences.iter().map(|q| element_labels(l, q)).collect();
        return Ok(pretty(&json!({
            "Gamma": element_labels(l, &lf.gamma),
            "sequences": seqs,
            "idempotent": u.is_idempotent(),
            "u_T": sum_json(l, &u),
        })));
    }
    let n = random.ok_or_else(|| Error::validation("give a lattice source or --random N"))?;
    let f = random_forest(n, &mut ChaCha8Rng::seed_from_u64(seed));
    let leaves = f.leaves();
    let g = geodesic_idempotents(&f, &leaves)?;
    let terms = |s: &FormalMapSum| -> Value {
        s.sorted_terms().into_iter().map(|(m, c)| json!({"coeff": num(c), "map": m})).collect()
    };
    if !(g.v_b.is_idempotent() && g.u_b.is_idempotent()) {
        return Err(Error::invariant("v_B or u_B is not idempotent"));
    }
    Ok(pretty(&json!({
        "parent": (0..n).map(|x| f.parent(x)).collect::<Vec<_>>(),
        "leaves": leaves,
        "v_B": terms(&g.v_b),
        "u_B": terms(&g.u_b),
    })))
}

// -------------------------------------------------------------- functor

/// CSV `x,formula,bruteforce,basis_count`; cells run in parallel and print
/// in order. Fails with an invariant error after printing if a row disagrees.
pub fn functor_rank(src: &Source, xs: (usize, usize), bruteforce: bool, budget: Budget) -> Result<(String, Option<Error>)> {
    let t = src.marked()?;
    let p = t.irr().clone();
    let range: Vec<usize> = (xs.0..=xs.1).collect();
    let rows = map_indices(Exec::default(), range.len(), |i| -> Result<(usize, BigInt, Option<usize>, usize)> {
        let x = range[i];
        let formula = rank_formula(&p, x)?;
        let bf = if bruteforce { Some(matrix_n(&t, x, budget, Exec::Sequential)?.rank()) } else { None };
        let basis = basis_bx(&t, x, budget)?.len();
        Ok((x, formula, bf, basis))
    });
    let mut out = String::from("x,formula,bruteforce,basis_count\n");
    let mut bad = None;
    for row in rows {
        let (x, formula, bf, basis) = row?;
        let bf_s = bf.map_or_else(String::new, |b| b.to_string());
        let _ = writeln!(out, "{x},{formula},{bf_s},{basis}");
        let agree = BigInt::from(basis) == formula && bf.is_none_or(|b| BigInt::from(b) == formula);
        if !agree && bad.is_none() {
            bad = Some(Error::invariant(format!("rank mismatch at x={x}")));
        }
    }
    Ok((out, bad))
}

pub fn functor_smith(src: &Source, x: usize, budget: Budget) -> Result<String> {
    let t = src.marked()?;
    let n = matrix_n(&t, x, budget, Exec::default())?;
    let d = smith(&n);
    let nonzero: Vec<Value> = d.iter().filter(|v| **v != BigInt::from(0)).map(num).collect();
    Ok(pretty(&json!({
        "x": x,
        "rows": n.rows(),
        "cols": n.cols(),
        "rank": nonzero.len(),
        "divisors": nonzero,
        "zeros": d.len() - nonzero.len(),
    })))
}

pub fn functor_basis(src: &Source, x: usize, budget: Budget) -> Result<String> {
    let t = src.marked()?;
    let b = basis_bx(&t, x, budget)?;
    let maps: Vec<Vec<String>> = b.iter().map(|m| labels(t.lattice(), m)).collect();
    Ok(pretty(&json!({"x": x, "count": maps.len(), "basis": maps})))
}

/// Matrix of `𝕊(U): 𝕊(X) → 𝕊(Y)` in the bases `B_X`, `B_Y`.
pub fn functor_action(src: &Source, corr: &std::path::Path, budget: Budget) -> Result<String> {
    let t = src.marked()?;
    let (xs, ys, u) = load_relation(corr)?;
    let f = FundamentalFunctor::new(&t, budget)?;
    let m = f.matrix(&u)?;
    let l = t.lattice();
    let show = |b: Vec<MapImages>| -> Vec<Vec<String>> { b.iter().map(|m| labels(l, m)).collect() };
    let matrix: Vec<Vec<Value>> = (0..m.rows()).map(|r| m.row(r).iter().map(num).collect()).collect();
    Ok(pretty(&json!({
        "X": xs.labels(),
        "Y": ys.labels(),
        "cols": show(f.basis(xs.len())?),
        "rows": show(f.basis(ys.len())?),
        "matrix": matrix,
    })))
}

/// CSV `x,span_rank,formula_op`: the span of `{Q·γ_T}` against the rank of
/// the dual simple functor.
pub fn functor_gamma_span(src: &Source, xs: (usize, usize), budget: Budget) -> Result<(String, Option<Error>)> {
    let t = src.marked()?;
    let pop = t.irr().opposite();
    let mut out = String::from("x,span_rank,formula_op\n");
    let mut bad = None;
    for x in xs.0..=xs.1 {
        let span = span_rank_gamma(&t, x, budget)?;
        let f = rank_formula(&pop, x)?;
        let _ = writeln!(out, "{x},{span},{f}");
        if BigInt::from(span) != f && bad.is_none() {
            bad = Some(Error::invariant(format!("γ-span mismatch at x={x}")));
        }
    }
    Ok((out, bad))
}

// --------------------------------------------------------------- module

pub fn module_check(src: &Source) -> Result<String> {
    let p = src.poset()?;
    let rep = theta_transport_check(&p)?;
    let out = pretty(&json!({
        "E": p.len(),
        "relations": rep.relations,
        "comparisons": rep.comparisons,
        "nonzero": rep.nonzero,
        "mismatches": rep.mismatches.len(),
    }));
    if rep.ok() {
        Ok(out)
    } else {
        Err(Error::invariant(format!("θ transport failed: {}", rep.mismatches[0])))
    }
}

// --------------------------------------------------------------- verify

/// CSV `name,x,lhs,rhs,terms,holds` over the five decompositions.
pub fn verify_examples(x_max: usize) -> Result<(String, Option<Error>)> {
    let mut out = String::from("name,x,lhs,rhs,terms,holds\n");
    let mut bad = None;
    for d in decompositions() {
        for x in 0..=x_max {
            let c = check_decomposition(&d, x)?;
            let terms: Vec<String> = c.terms.iter().map(|(m, n, r)| format!("{m}*{n}[{r}]")).collect();
            let _ = writeln!(out, "{},{x},{},{},{},{}", c.name, c.lhs, c.rhs, terms.join(" + "), c.holds());
            if !c.holds() && bad.is_none() {
                bad = Some(Error::invariant(format!("{} fails at x={x}", c.name)));
            }
        }
    }
    Ok((out, bad))
}

/// Seeded property sweep; one `ok`/`FAIL` line per property.
pub fn verify_invariants(cases: usize, budget: Budget) -> Result<(String, Option<Error>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut lines: Vec<(String, bool)> = Vec::new();
    let lattices: Vec<(String, MarkedLattice)> = corfun_core::catalog::catalog_lattices()
        .into_iter()
        .map(|(n, l)| (n, irreducibles(&l)))
        .chain(corfun_core::catalog::catalog_posets().into_iter().map(|(n, p)| (format!("I({n})"), ideal_lattice(&p))))
        .collect();

    let mut ok = true;
    for (_, t) in &lattices {
        ok &= u_t(t).is_ok_and(|u| u.is_idempotent());
    }
    lines.push(("u_T idempotent and equal to its expansion".into(), ok));

    let mut ok = true;
    for _ in 0..cases {
        let (_, t) = &lattices[rng.gen_range(0..lattices.len())];
        let ups = upper_ideals(t.irr());
        let x = rng.gen_range(0..=3);
        let phi: Vec<u32> = (0..x).map(|_| rng.gen_range(0..t.len()) as u32).collect();
        let psi: Vec<u64> = (0..x).map(|_| ups[rng.gen_range(0..ups.len())]).collect();
        ok &= Vdash::new(t).conditions(&phi, &psi).agree();
    }
    lines.push((format!("⊢ conditions agree on {cases} random pairs"), ok));

    let mut ok = true;
    for (_, t) in lattices.iter().filter(|(_, t)| t.len() <= 8) {
        for x in 0..=2 {
            let r = matrix_n(t, x, budget, Exec::default())?.rank();
            ok &= BigInt::from(r) == rank_formula(t.irr(), x)?;
        }
    }
    lines.push(("rank N = rank formula for |T| ≤ 8, x ≤ 2".into(), ok));

    let mut ok = true;
    for (_, p) in corfun_core::catalog::catalog_posets().into_iter().filter(|(_, p)| p.len() <= 3) {
        let t = ideal_lattice(&p);
        for x in 0..=2 {
            ok &= BigInt::from(span_rank_gamma(&t, x, budget)?) == rank_formula(&p.opposite(), x)?;
        }
    }
    lines.push(("γ-span rank = dual rank formula, |E| ≤ 3, x ≤ 2".into(), ok));

    let mut ok = true;
    for _ in 0..cases.min(100) {
        let n = rng.gen_range(1..=8);
        let f = random_forest(n, &mut rng);
        let g = geodesic_idempotents(&f, &f.leaves())?;
        ok &= g.v_b.is_idempotent() && g.u_b.is_idempotent();
    }
    lines.push(("v_B, u_B idempotent on random forests".into(), ok));

    let mut ok = true;
    for p in [Poset::antichain(2), Poset::chain(2), corfun_core::catalog::v_poset()] {
        ok &= theta_transport_check(&p)?.ok();
    }
    lines.push(("θ transport on antichain2, chain2, v".into(), ok));

    let mut out = String::new();
    let mut bad = None;
    for (what, pass) in lines {
        let _ = writeln!(out, "{} {what}", if pass { "ok  " } else { "FAIL" });
        if !pass && bad.is_none() {
            bad = Some(Error::invariant(format!("property failed: {what}")));
        }
    }
    Ok((out, bad))
}
