//! End-to-end acceptance run: one line per criterion; exits nonzero if any fails.

use std::collections::HashSet;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use mbs_core::cousin::{all_cohomology, constructibility_check, coperversity_check, support_check};
use mbs_core::coxeter::{CoxeterDatum, CoxeterType};
use mbs_core::f1::{build_e1, build_e1v};
use mbs_core::fq::eq::{bicube_mismatches, build_eq};
use mbs_core::fq::hecke::{b_invariant_sub, hecke_generators, verify_hecke};
use mbs_core::fq::points::orbit_point_checks;
use mbs_core::io::{emit_mbs, parse_mbs, to_canonical_string};
use mbs_core::orbit_poly::{property_suite, validate_counts};
use mbs_core::reps;
use mbs_core::sheaf::{generator_loop, monodromy, phi_psi, MixedBruhatSheaf};
use mbs_core::xi::{Order, XiPoset};
use mbs_core::{Rational, RationalMatrix};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn poset(t: CoxeterType, r: usize) -> Arc<XiPoset> {
    Arc::new(XiPoset::new(CoxeterDatum::new(t, r).unwrap()).unwrap())
}

fn supported() -> Vec<(CoxeterType, usize)> {
    use CoxeterType::*;
    vec![(A, 1), (A, 2), (A, 3), (A, 4), (B, 2), (B, 3), (C, 3), (G, 2)]
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn a1_order_diagram() -> Outcome {
    let p = poset(CoxeterType::A, 1);
    ensure(p.len() == 5, || format!("{} elements", p.len()))?;
    let id = |l: &str| p.parse_label(l).unwrap();
    let (origin, real, imag, diag, open) = (id("0:0|0:0"), id(":0|0:0"), id("0:0|:0"), id(":0|:0"), id(":0|:1"));
    let mut expected = vec![
        (Order::Prime, diag, imag, true),
        (Order::Prime, open, imag, true),
        (Order::Prime, real, origin, false),
        (Order::Second, diag, real, true),
        (Order::Second, open, real, true),
        (Order::Second, imag, origin, false),
    ];
    expected.sort();
    let mut found = Vec::new();
    for order in [Order::Prime, Order::Second] {
        for (m, n) in p.covers(order) {
            found.push((order, m, n, p.orbit_size(m) == p.orbit_size(n)));
        }
    }
    found.sort();
    ensure(found == expected, || format!("covers {found:?}"))?;
    let relations = p.strict_relations();
    ensure(relations.len() == 8, || format!("{} strict relations", relations.len()))?;
    let anodyne = relations.iter().filter(|&&(m, n)| p.is_anodyne(m, n).unwrap()).count();
    ensure(anodyne == 4, || format!("{anodyne} anodyne relations"))?;
    Ok("5 cells, 8 relations, 4 anodyne".into())
}

/// Nonnegative integer matrices of total `n` without zero rows or columns, any shape.
fn count_contingency(n: usize) -> usize {
    fn fill(cells: &mut Vec<usize>, left: usize, k: usize, rows: usize, cols: usize) -> usize {
        if k == cells.len() {
            let rows_ok = (0..rows).all(|i| (0..cols).any(|j| cells[i * cols + j] > 0));
            let cols_ok = (0..cols).all(|j| (0..rows).any(|i| cells[i * cols + j] > 0));
            return usize::from(left == 0 && rows_ok && cols_ok);
        }
        (0..=left)
            .map(|x| {
                cells[k] = x;
                fill(cells, left - x, k + 1, rows, cols)
            })
            .sum()
    }
    let mut total = 0;
    for rows in 1..=n {
        for cols in 1..=n {
            total += fill(&mut vec![0; rows * cols], n, 0, rows, cols);
        }
    }
    total
}

fn contingency_counts() -> Outcome {
    let mut shown = Vec::new();
    for n in 2..=4 {
        let cells = poset(CoxeterType::A, n - 1).len();
        let brute = count_contingency(n);
        ensure(cells == brute, || format!("n = {n}: {cells} cells vs {brute} matrices"))?;
        shown.push(format!("n={n}: {cells}"));
    }
    ensure(poset(CoxeterType::A, 1).len() == 5, || "n = 2 is not 5".into())?;
    Ok(shown.join(", "))
}

fn e1_axioms() -> Outcome {
    use CoxeterType::*;
    for (t, r) in [(A, 1), (A, 2), (A, 3), (B, 2), (B, 3), (G, 2)] {
        let rep = build_e1(poset(t, r)).sheaf.check_mbs();
        ensure(rep.is_ok(), || format!("{t}{r}: {:?}", rep.violations))?;
    }
    Ok("A1 A2 A3 B2 B3 G2".into())
}

fn eq_axioms() -> Outcome {
    for (n, q) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        let e = build_eq(n, q).map_err(|e| e.to_string())?;
        let rep = e.sheaf.check_mbs();
        ensure(rep.is_ok(), || format!("({n},{q}): {:?}", rep.violations))?;
    }
    Ok("(2,2) (2,3) (3,2) (3,3)".into())
}

fn anodyne_equivalence() -> Outcome {
    let mut pairs = 0;
    for (t, r) in supported() {
        let p = poset(t, r);
        for (m, n) in p.strict_relations() {
            pairs += 1;
            let by_size = p.orbit_size(m) == p.orbit_size(n);
            let by_flat = p.element(m).flat == p.element(n).flat;
            let pi = p.pi_map(m, n).map_err(|e| e.to_string())?;
            let by_pi = pi.iter().collect::<HashSet<_>>().len() == pi.len();
            ensure(by_size == by_flat && by_size == by_pi, || format!("{t}{r}: {} >= {}", p.label(m), p.label(n)))?;
        }
    }
    Ok(format!("{pairs} comparable pairs"))
}

fn hecke() -> Outcome {
    for q in [2, 3] {
        let (_, gens) = hecke_generators(3, q).map_err(|e| e.to_string())?;
        let rep = verify_hecke(&gens, q);
        ensure(rep.quadratic && rep.braid, || format!("q = {q}: {rep:?}"))?;
    }
    Ok("quadratic and braid relations, q = 2, 3".into())
}

fn borel_invariants() -> Outcome {
    for q in [2, 3] {
        let e = build_eq(3, q).map_err(|e| e.to_string())?;
        let (sub, _) = b_invariant_sub(&e).map_err(|e| e.to_string())?;
        let p = &e.sheaf.poset;
        for m in p.ids() {
            ensure(sub.dims[m] == p.orbit_size(m), || format!("q = {q} at {}: {} vs {}", p.label(m), sub.dims[m], p.orbit_size(m)))?;
        }
    }
    Ok("n = 3, q = 2, 3".into())
}

fn perverse(name: &str, e: &MixedBruhatSheaf) -> Result<(), String> {
    let s = support_check(e);
    ensure(s.is_ok(), || format!("{name} support: {:?} {:?}", s.errors, s.failures().collect::<Vec<_>>()))?;
    let c = coperversity_check(e);
    ensure(c.is_ok(), || format!("{name} dual support: {:?} {:?}", c.errors, c.failures().collect::<Vec<_>>()))?;
    let k = constructibility_check(e);
    ensure(k.is_ok(), || format!("{name} constructibility: {:?}", k.failures))
}

fn cousin() -> Outcome {
    let mut checked = 0;
    for (t, r) in [(CoxeterType::A, 1), (CoxeterType::A, 2), (CoxeterType::B, 2)] {
        let e1 = build_e1(poset(t, r));
        for h in all_cohomology(&e1.sheaf) {
            let h = h.map_err(|e| format!("{t}{r} E1: {e}"))?;
            ensure(h.iter().all(|&(d, x)| x == 0 || d == -(r as i64)), || format!("{t}{r} E1 cohomology {h:?}"))?;
        }
        perverse(&format!("{t}{r} E1"), &e1.sheaf)?;
        let g = &e1.sheaf.poset.complex.group;
        for rep in [reps::sign(g), reps::reflection(g)] {
            let ev = build_e1v(&e1, &rep).map_err(|e| e.to_string())?;
            perverse(&format!("{t}{r} {}", rep.name), &ev.sheaf)?;
        }
        checked += 3;
    }
    for (n, q) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        perverse(&format!("Eq({n},{q})"), &build_eq(n, q).map_err(|e| e.to_string())?.sheaf)?;
        checked += 1;
    }
    Ok(format!("{checked} sheaves"))
}

fn orbit_polynomials() -> Outcome {
    let mut pairs = 0;
    for (t, r) in supported() {
        let rep = property_suite(&poset(t, r));
        ensure(rep.is_ok(), || format!("{t}{r}: {:?}", rep.failures))?;
        pairs += rep.anodyne_pairs;
    }
    for (n, q) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        let rep = validate_counts(n, q).map_err(|e| e.to_string())?;
        ensure(rep.is_ok(), || format!("({n},{q}): {:?}", rep.failures))?;
    }
    Ok(format!("all types, {pairs} anodyne pairs, counts for n <= 3"))
}

fn induction_bicube() -> Outcome {
    for (n, q) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        let e = build_eq(n, q).map_err(|e| e.to_string())?;
        let diff = bicube_mismatches(&e).map_err(|e| e.to_string())?;
        ensure(diff.is_empty(), || format!("({n},{q}): {diff:?}"))?;
    }
    Ok("n = 2, 3, q = 2, 3".into())
}

fn rank_one() -> Outcome {
    let e1 = build_e1(poset(CoxeterType::A, 1));
    let sign = build_e1v(&e1, &reps::sign(&e1.sheaf.poset.complex.group)).map_err(|e| e.to_string())?.sheaf;
    let mut sheaves = vec![("E1".to_string(), e1.sheaf), ("E1 sign".to_string(), sign)];
    for q in [2, 3] {
        sheaves.push((format!("Eq q={q}"), build_eq(2, q).map_err(|e| e.to_string())?.sheaf));
    }
    for (name, e) in &sheaves {
        let pp = phi_psi(e).map_err(|err| err.to_string())?;
        ensure(pp.t_invertible, || format!("{name}: T not invertible"))?;
    }
    let mut variants = Vec::new();
    for q in [2u32, 3, 5] {
        let e = build_eq(2, q).map_err(|e| e.to_string())?.sheaf;
        let m = monodromy(&e, &generator_loop(&e.poset, 0)).map_err(|e| e.to_string())?;
        let id = RationalMatrix::identity(m.nrows());
        let qi = id.scale(&Rational::from_int(q as i64));
        let first = m.sub(&qi).mul(&m.add(&id)).is_zero();
        let second = m.add(&qi).mul(&m.sub(&id)).is_zero();
        ensure(first != second, || format!("q = {q}: both or neither variant holds"))?;
        variants.push(first);
    }
    ensure(variants.iter().all(|&v| v == variants[0]), || "variant changes with q".into())?;
    let which = if variants[0] { "(M-q)(M+1)=0" } else { "(M+q)(M-1)=0" };
    Ok(format!("T invertible for 4 sheaves, monodromy {which} for q = 2, 3, 5"))
}

fn point_geometry() -> Outcome {
    let mut total = (0, 0);
    for n in [2, 3] {
        let rep = orbit_point_checks(n, 2).map_err(|e| e.to_string())?;
        ensure(rep.is_ok(), || format!("n = {n}: {:?}", rep.failures))?;
        total.0 += rep.configurations;
        total.1 += rep.anodyne_pairs;
    }
    Ok(format!("{} fiber products, {} anodyne projections", total.0, total.1))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_mbs")).args(args).output().map_err(|e| e.to_string())?;
    ensure(o.status.success(), || format!("{args:?} exited with {:?}", o.status.code()))?;
    Ok(o.stdout)
}

fn determinism() -> Outcome {
    let dumps: &[&[&str]] = &[
        &["xi", "--type", "A", "--rank", "1", "--json"],
        &["xi", "--type", "G", "--rank", "2", "--json"],
        &["poly", "--type", "B", "--rank", "3", "--json"],
        &["poly", "--type", "A", "--rank", "2", "--counts", "3", "--json"],
        &["hecke", "3", "3", "--json"],
        &["orbits", "3", "2", "--json"],
    ];
    let sheaves: &[&[&str]] = &[
        &["example", "e1", "--type", "B", "--rank", "2"],
        &["example", "e1v:reflection", "--type", "A", "--rank", "2"],
        &["example", "eq", "3", "2"],
        &["example", "eq-binv", "3", "3"],
    ];
    for args in dumps.iter().chain(sheaves) {
        let (a, b) = (run_cli(args)?, run_cli(args)?);
        ensure(a == b, || format!("{args:?} differs between runs"))?;
    }
    for args in dumps {
        let text = String::from_utf8(run_cli(args)?).map_err(|e| e.to_string())?;
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        ensure(to_canonical_string(&v).unwrap() == text, || format!("{args:?} does not round-trip"))?;
    }
    for args in sheaves {
        let text = String::from_utf8(run_cli(args)?).map_err(|e| e.to_string())?;
        let back = parse_mbs(&text).map_err(|e| e.to_string())?;
        ensure(emit_mbs(&back).unwrap() == text, || format!("{args:?} does not round-trip"))?;
    }
    Ok(format!("{} dumps", dumps.len() + sheaves.len()))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("A1 order diagram", Duration::from_secs(1), a1_order_diagram),
        ("cell counts vs contingency matrices", Duration::from_secs(10), contingency_counts),
        ("E1 axioms", Duration::from_secs(60), e1_axioms),
        ("Eq axioms", Duration::from_secs(300), eq_axioms),
        ("anodyne equivalence", Duration::from_secs(600), anodyne_equivalence),
        ("Hecke relations", Duration::from_secs(10), hecke),
        ("Borel-invariant dimensions", Duration::from_secs(600), borel_invariants),
        ("Cousin suite", Duration::from_secs(120), cousin),
        ("orbit polynomials", Duration::from_secs(30), orbit_polynomials),
        ("induction bicube", Duration::from_secs(600), induction_bicube),
        ("rank-one reduction and monodromy", Duration::from_secs(600), rank_one),
        ("point-level geometry", Duration::from_secs(600), point_geometry),
        ("determinism and round trips", Duration::from_secs(600), determinism),
    ];
    let mut failed = Vec::new();
    for (k, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|s| {
            if elapsed <= *limit {
                Ok(s)
            } else {
                Err(format!("took {elapsed:.1?}, limit {limit:?}"))
            }
        });
        match &outcome {
            Ok(detail) => println!("criterion {:2} PASS  {name}: {detail} [{elapsed:.2?}]", k + 1),
            Err(why) => {
                println!("criterion {:2} FAIL  {name}: {why} [{elapsed:.2?}]", k + 1);
                failed.push(k + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} criteria pass", criteria.len());
}
