use std::collections::BTreeMap;
use std::sync::Arc;

use mbs_core::coxeter::{CoxeterDatum, CoxeterType};
use mbs_core::f1::{build_e1, build_e1v};
use mbs_core::fq::eq::build_eq;
use mbs_core::io::{check_report, emit_mbs, parse_mbs, xi_to_json};
use mbs_core::reps;
use mbs_core::sheaf::MixedBruhatSheaf;
use mbs_core::xi::{Order, XiPoset};
use mbs_core::{Error, Rational, RationalMatrix};
use proptest::prelude::*;

fn poset(t: CoxeterType, r: usize) -> Arc<XiPoset> {
    Arc::new(XiPoset::new(CoxeterDatum::new(t, r).unwrap()).unwrap())
}

fn assert_round_trip(e: &MixedBruhatSheaf) {
    let text = emit_mbs(e).unwrap();
    let back = parse_mbs(&text).unwrap();
    assert_eq!(back.dims, e.dims);
    assert_eq!(back.dprime, e.dprime);
    assert_eq!(back.dsecond, e.dsecond);
    assert_eq!(emit_mbs(&back).unwrap(), text);
}

#[test]
fn examples_round_trip() {
    let e1 = build_e1(poset(CoxeterType::A, 2));
    assert_round_trip(&e1.sheaf);
    let g = &e1.sheaf.poset.complex.group;
    assert_round_trip(&build_e1v(&e1, &reps::reflection(g)).unwrap().sheaf);
    assert_round_trip(&build_e1(poset(CoxeterType::G, 2)).sheaf);
    assert_round_trip(&build_eq(2, 3).unwrap().sheaf);
    assert_round_trip(&MixedBruhatSheaf::zero(poset(CoxeterType::B, 2)));
}

fn parse_error(text: &str) -> String {
    match parse_mbs(text) {
        Err(Error::Parse(msg)) => msg,
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn parse_errors_name_the_location() {
    let good = emit_mbs(&build_e1(poset(CoxeterType::A, 1)).sheaf).unwrap();
    assert!(parse_error("{").starts_with("$:"));
    assert!(parse_error(&good.replacen("\"A\"", "\"Q\"", 1)).starts_with("$.datum"));
    assert!(parse_error(&good.replacen("\"0:0|0:0\": 1", "\"0:0|0:0\": -1", 1)).contains("$.dims"));
    assert!(parse_error(&good.replacen("\":0|:0\": 2,", "", 1)).contains("missing cell :0|:0"));
    assert!(parse_error(&good.replacen("\"from\": \":0|:0\"", "\"from\": \"nowhere\"", 1)).contains(".from"));
    let v: serde_json::Value = serde_json::from_str(&good).unwrap();
    let mut bad = v.clone();
    bad["dprime"][0]["matrix"][1][0] = serde_json::json!("2/4");
    assert!(parse_error(&bad.to_string()).starts_with("$.dprime[0].matrix[1][0]"));
    let mut bad = v.clone();
    bad["dsecond"][1]["matrix"][0] = serde_json::json!(["1"]);
    assert!(parse_error(&bad.to_string()).starts_with("$.dsecond[1].matrix[0]"));
    let mut bad = v;
    let first = bad["dprime"][0].clone();
    bad["dprime"].as_array_mut().unwrap().push(first);
    assert!(parse_error(&bad.to_string()).contains("duplicate"));
}

#[test]
fn check_report_flags_violations() {
    let mut e = build_e1(poset(CoxeterType::A, 2)).sheaf;
    let (v, pass) = check_report(&e);
    assert!(pass);
    assert_eq!(v["mbs"]["pass"], true);
    let key = *e.dprime.keys().find(|&&(m, n)| e.poset.is_anodyne(m, n).unwrap()).unwrap();
    let (r, c) = e.dprime[&key].shape();
    e.dprime.insert(key, RationalMatrix::zeros(r, c));
    let (v, pass) = check_report(&e);
    assert!(!pass);
    let axioms: Vec<&str> = v["mbs"]["violations"].as_array().unwrap().iter().map(|x| x["axiom"].as_str().unwrap()).collect();
    assert!(axioms.contains(&"MBS3"));
}

#[test]
fn poset_dump_is_stable() {
    let p = poset(CoxeterType::A, 1);
    let v = xi_to_json(&p);
    assert_eq!(v["element_count"], 5);
    assert_eq!(v["relation_count"], 8);
    let anodyne = v["relations"].as_array().unwrap().iter().filter(|x| x["anodyne"] == true).count();
    assert_eq!(anodyne, 4);
    assert_eq!(serde_json::to_string(&v).unwrap(), serde_json::to_string(&xi_to_json(&poset(CoxeterType::A, 1))).unwrap());
}

fn random_sheaf(p: Arc<XiPoset>, mut dims: Vec<usize>, seed: Vec<(i64, i64)>) -> MixedBruhatSheaf {
    dims.resize(p.len(), 0);
    let mut e = MixedBruhatSheaf { poset: p.clone(), dims, dprime: BTreeMap::new(), dsecond: BTreeMap::new() };
    let mut k = 0;
    let mut next = || {
        let (a, b) = seed[k % seed.len()];
        k += 1;
        Rational::new(a, b)
    };
    for order in [Order::Prime, Order::Second] {
        for (m, n) in p.covers(order) {
            let (rows, cols) = match order {
                Order::Prime => (e.dims[n], e.dims[m]),
                Order::Second => (e.dims[m], e.dims[n]),
            };
            let dense: Vec<Vec<Rational>> = (0..rows).map(|_| (0..cols).map(|_| next()).collect()).collect();
            let a = RationalMatrix::from_dense(rows, cols, &dense);
            match order {
                Order::Prime => e.dprime.insert((m, n), a),
                Order::Second => e.dsecond.insert((m, n), a),
            };
        }
    }
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn arbitrary_sheaves_round_trip(
        dims in proptest::collection::vec(0usize..3, 64),
        seed in proptest::collection::vec((-9i64..10, 1i64..7), 1..20),
    ) {
        let e = random_sheaf(poset(CoxeterType::A, 2), dims, seed);
        let text = emit_mbs(&e).unwrap();
        let back = parse_mbs(&text).unwrap();
        prop_assert_eq!(&back.dprime, &e.dprime);
        prop_assert_eq!(&back.dsecond, &e.dsecond);
        prop_assert_eq!(emit_mbs(&back).unwrap(), text);
    }
}
