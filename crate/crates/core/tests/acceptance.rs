//! Acceptance gate: prints one PASS/FAIL line per criterion and fails if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use clap::Parser;
use num_bigint::BigUint;
use rand::Rng;
use rayon::prelude::*;
use serde_json::Value;

use thomp::action::{non_membership_witness, stabilizes_sample, WordClass};
use thomp::cli::{run, Cli};
use thomp::coloring::{
    checkerboard, dehn_colorings, determinant, element_link, fox_colorings_bruteforce, is_trivial,
    is_valid,
};
use thomp::fixtures;
use thomp::fp::{exact_bifurcations, is_member, is_member_by_length, ord2};
use thomp::links::{jones_graph, link_of, Convention};
use thomp::random::{member_generators, random_diagram, random_tree, sample_rng, MemberSampler};
use thomp::{
    evaluate_word, finite_relators, generator, infinite_relators, phi_q, pl_map, unphi_q,
    NaryTree,
};

const MODULI: [u64; 5] = [3, 5, 7, 9, 15];

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn member_json(name: &str, p: u64) -> std::result::Result<Value, String> {
    let p = p.to_string();
    let cli = Cli::try_parse_from(["thomp", "member", name, "-p", &p, "--format", "json"])
        .map_err(err)?;
    let out = run(&cli).map_err(err)?;
    ensure(out.code == 0, format!("{name}: exit code {}", out.code))?;
    serde_json::from_str(&out.stdout).map_err(err)
}

fn residue_fixtures() -> Check {
    for (name, p, expected) in [
        ("ex3", 3, vec![0u64, 1, 2, 0, 2]),
        ("ex7", 7, vec![0, 2, 4, 6, 0, 1, 2, 3, 4]),
    ] {
        let j = member_json(name, p)?;
        ensure(j["member"] == Value::Bool(true), format!("{name} not reported as member"))?;
        for side in ["domain_residues", "range_residues"] {
            let got: Vec<u64> = serde_json::from_value(j[side].clone()).map_err(err)?;
            ensure(got == expected, format!("{name} {side} {got:?} != {expected:?}"))?;
        }
    }
    Ok("ex3 p=3 residues (0,1,2,0,2); ex7 p=7 residues (0,2,4,6,0,1,2,3,4)".into())
}

fn knot_outputs() -> Check {
    for (name, p, crossings) in [("ex3", 3u64, 8usize), ("ex7", 7, 16)] {
        let l = element_link(&fixtures::element(name).map_err(err)?).map_err(err)?;
        ensure(l.components() == 1, format!("{name}: {} components", l.components()))?;
        ensure(
            l.crossing_count() == crossings,
            format!("{name}: {} crossings", l.crossing_count()),
        )?;
        let sol = dehn_colorings(&l, p).map_err(err)?;
        let c = sol.nontrivial.ok_or(format!("{name}: no nontrivial {p}-coloring"))?;
        ensure(is_valid(&l, &c), format!("{name}: invalid sample coloring"))?;
        let det = determinant(&l).map_err(err)?;
        ensure(det == BigUint::from(p), format!("{name}: determinant {det}"))?;
        let fox = fox_colorings_bruteforce(&l, p).map_err(err)?;
        ensure(fox == BigUint::from(p * p), format!("{name}: {fox} Fox colorings"))?;
    }
    Ok("ex3: 1 component, 8 crossings, det 3, 9 Fox 3-colorings; ex7: 1 component, 16 crossings, det 7, 49 Fox 7-colorings".into())
}

fn members_are_colorable() -> Check {
    let mut report = Vec::new();
    for p in MODULI {
        let sampler = MemberSampler::new(p, 3).map_err(err)?;
        let failures: Vec<u64> = (0..100u64)
            .into_par_iter()
            .filter(|&i| {
                let ok = (|| -> thomp::Result<bool> {
                    let d = sampler.sample(&mut sample_rng(1000 + p, i))?;
                    if !is_member(&d, p)? {
                        return Ok(false);
                    }
                    let l = element_link(&d)?;
                    Ok(match dehn_colorings(&l, p)?.nontrivial {
                        Some(c) => is_valid(&l, &c) && !is_trivial(&c, &checkerboard(&l)?)?,
                        None => false,
                    })
                })();
                !matches!(ok, Ok(true))
            })
            .collect();
        ensure(failures.is_empty(), format!("p={p}: samples {failures:?} failed"))?;
        report.push(format!("p={p} 100/100"));
    }
    Ok(report.join(", "))
}

fn embedding_round_trip() -> Check {
    for q in [2u32, 3] {
        let n = 1u32 << q;
        let p = (1u64 << q) - 1;
        for i in 0..200u64 {
            let mut rng = sample_rng(40 + q as u64, i);
            let carets = rng.gen_range(0..8);
            let d = random_diagram(&mut rng, n, carets);
            let e = phi_q(&d, q).map_err(err)?;
            let back = unphi_q(&e, q).map_err(err)?;
            ensure(back.same_element(&d), format!("F({n}) sample {i}: round trip differs"))?;
            ensure(
                is_member(&e, p).map_err(err)? && is_member_by_length(&e, p).map_err(err)?,
                format!("F({n}) sample {i}: image fails a membership test"),
            )?;
        }
    }
    for i in 0..200u64 {
        let p = MODULI[i as usize % MODULI.len()];
        let q = ord2(p).map_err(err)?;
        let sampler = MemberSampler::new(p, 2).map_err(err)?;
        let m = sampler.sample(&mut sample_rng(77, i)).map_err(err)?;
        let f = unphi_q(&m, q).map_err(|e| format!("p={p} sample {i}: factor failed: {e}"))?;
        ensure(
            f.arity() == 1 << q && phi_q(&f, q).map_err(err)?.same_element(&m),
            format!("p={p} sample {i}: factor does not map back"),
        )?;
    }
    Ok("200 elements each of F(4), F(8) round trip; factor succeeds on 200 members".into())
}

fn membership_tests_agree() -> Check {
    let mut members = 0;
    for p in MODULI {
        let sampler = MemberSampler::new(p, 2).map_err(err)?;
        for i in 0..500u64 {
            let mut rng = sample_rng(500 + p, i);
            let d = if i % 2 == 0 {
                let carets = rng.gen_range(1..12);
                random_diagram(&mut rng, 2, carets)
            } else {
                sampler.sample(&mut rng).map_err(err)?
            };
            let a = is_member(&d, p).map_err(err)?;
            let b = is_member_by_length(&d, p).map_err(err)?;
            ensure(a == b, format!("p={p} sample {i}: residue {a}, length {b}"))?;
            members += a as usize;
        }
    }
    Ok(format!("2500 diagrams, 0 disagreements ({members} members)"))
}

fn bifurcation_identity() -> Check {
    let mut count = 0;
    for i in 0..200u64 {
        let mut rng = sample_rng(6, i);
        let carets = rng.gen_range(1..40);
        let t = random_tree(&mut rng, 2, carets);
        for (a, b, c) in exact_bifurcations(&t).map_err(err)? {
            ensure(b.mul_pow2(1) == &a + &c, format!("tree {i}: 2*{b} != {a} + {c}"))?;
            count += 1;
        }
    }
    Ok(format!("2b = a + c at all {count} bifurcations of 200 trees"))
}

fn group_algebra() -> Check {
    for n in [2u32, 3, 4, 8] {
        for r in infinite_relators(n, 2 * n + 2).iter().chain(&finite_relators(n)) {
            ensure(
                evaluate_word(r).map_err(err)?.is_identity(),
                format!("F({n}): relator {r} is not trivial"),
            )?;
        }
    }
    for i in 0..200u64 {
        let mut rng = sample_rng(7, i);
        let n = [2, 3][i as usize % 2];
        let pick = |rng: &mut rand_chacha::ChaCha8Rng| {
            let carets = rng.gen_range(0..7);
            random_diagram(rng, n, carets)
        };
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let left = a.multiply(&b).map_err(err)?.multiply(&c).map_err(err)?;
        let right = a.multiply(&b.multiply(&c).map_err(err)?).map_err(err)?;
        ensure(left == right, format!("triple {i} is not associative"))?;
    }
    let table = |i: u32| -> std::result::Result<Vec<(String, String)>, String> {
        Ok(pl_map(&generator(2, i).map_err(err)?)
            .map_err(err)?
            .breakpoints()
            .iter()
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect())
    };
    let s = |a: &str, b: &str| (a.to_string(), b.to_string());
    ensure(
        table(0)? == vec![s("0", "0"), s("1/4", "1/2"), s("1/2", "3/4"), s("1", "1")],
        "f0 breakpoints differ",
    )?;
    ensure(
        table(1)?
            == vec![
                s("0", "0"),
                s("1/2", "1/2"),
                s("5/8", "3/4"),
                s("3/4", "7/8"),
                s("1", "1"),
            ],
        "f1 breakpoints differ",
    )?;
    Ok("relators trivial for n in {2,3,4,8}; 200 triples associative; f0, f1 tables exact".into())
}

fn action_fixtures() -> Check {
    let c = |s: &str, q: u32| WordClass::parse(s, q).map_err(err);
    let x0 = generator(2, 0).map_err(err)?;
    let x0i = x0.inverse();
    for q in 2..=4u32 {
        ensure(
            c("01", q)?.act(&x0i).map_err(err)? == c("001", q)?,
            format!("q={q}: [01]x0^-1 != [001]"),
        )?;
        let expected = format!("01{}", "0".repeat(q as usize - 1));
        ensure(
            c("1", q)?.act(&x0i).map_err(err)? == c(&expected, q)?,
            format!("q={q}: [1]x0^-1 != [{expected}]"),
        )?;
    }
    let w = non_membership_witness(&x0, 3)
        .map_err(err)?
        .ok_or("no witness for x0")?;
    let before = w.representative().rho_mod(3).map_err(err)?;
    let image = w.act(&x0).map_err(err)?;
    let after = image.representative().rho_mod(3).map_err(err)?;
    ensure(before != after, "witness residue unchanged")?;
    for (i, g) in member_generators(2).map_err(err)?.iter().enumerate() {
        ensure(
            stabilizes_sample(g, 3, 8).map_err(err)?,
            format!("generator {i} of the 3-colorable subgroup moves a residue"),
        )?;
    }
    Ok(format!(
        "[01], [1] under x0^-1 for q=2..4; witness {w} -> {image} ({before} -> {after} mod 3); 4 generators stabilize to length 8"
    ))
}

fn planarity() -> Check {
    let mut extra = 0;
    for i in 0..500u64 {
        let mut rng = sample_rng(9, i);
        let carets = rng.gen_range(1..25);
        let d = random_diagram(&mut rng, 2, carets);
        if d.size() == 0 {
            continue;
        }
        let k = d.size() as i64;
        let g = jones_graph(&d, false).map_err(err)?;
        let (v, e, f) = (
            g.map.vertex_count() as i64,
            g.map.edge_count() as i64,
            g.map.faces().count() as i64,
        );
        ensure(
            v == 2 * k && e == 4 * k && f == 2 * k + 2 && v - e + f == 2,
            format!("diagram {i}: V={v} E={e} F={f} k={k}"),
        )?;
        let l = g.link_diagram(Convention::STANDARD);
        let cb = checkerboard(&l).map_err(err)?;
        let faces = l.faces();
        for x in 0..l.map().dart_count() {
            let (a, b) = l.map().faces_beside(&faces, x);
            ensure(cb.black[a] != cb.black[b], format!("diagram {i}: edge with one color"))?;
        }
        let leaf = rng.gen_range(0..d.leaf_count());
        let bigger = d.insert(leaf, &NaryTree::caret(2)).map_err(err)?;
        let more = link_of(&bigger, Convention::STANDARD, true).map_err(err)?;
        ensure(
            more.components() == l.components() + 1,
            format!("diagram {i}: insertion at leaf {leaf} did not add one component"),
        )?;
        extra += 1;
    }
    Ok(format!("{extra} graphs: Euler, counts, bipartite faces, insertion adds one component"))
}

fn figure_eight() -> Check {
    let l = fixtures::fig8();
    let five = dehn_colorings(&l, 5).map_err(err)?;
    let c = five.nontrivial.ok_or("no nontrivial 5-coloring")?;
    ensure(is_valid(&l, &c), "sample 5-coloring invalid")?;
    let three = dehn_colorings(&l, 3).map_err(err)?;
    ensure(three.nontrivial.is_none(), "found a nontrivial 3-coloring")?;
    let fox3 = fox_colorings_bruteforce(&l, 3).map_err(err)?;
    ensure(fox3 == BigUint::from(3u32), format!("{fox3} Fox 3-colorings"))?;
    let det = determinant(&l).map_err(err)?;
    ensure(det == BigUint::from(5u32), format!("determinant {det}"))?;
    Ok(format!(
        "{} Dehn 5-colorings with a nontrivial sample; only the 3 trivial 3-colorings; det 5",
        five.count
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("residue fixtures", residue_fixtures),
        ("knot outputs", knot_outputs),
        ("members are p-colorable", members_are_colorable),
        ("embedding round trip", embedding_round_trip),
        ("membership tests agree", membership_tests_agree),
        ("bifurcation identity", bifurcation_identity),
        ("group algebra", group_algebra),
        ("action fixtures", action_fixtures),
        ("planarity and structure", planarity),
        ("figure-eight fixture", figure_eight),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match result {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
