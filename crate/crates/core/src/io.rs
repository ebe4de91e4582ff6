//! Canonical JSON formats: sheaves, poset dumps and reports.
//!
//! Sheaf files look like
//! `{"datum": {"type": "A", "rank": 1}, "dims": {"<label>": d, ...},
//!   "dprime": [{"from": "<label>", "to": "<label>", "matrix": [["n/d", ...], ...]}, ...],
//!   "dsecond": [...]}`.
//! `from`/`to` are the domain and codomain of the stored map. Cells are listed
//! in canonical order and maps sorted by their key pair, so emitting is
//! deterministic and `emit(parse(emit(x))) == emit(x)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::cousin::{constructibility_check, coperversity_check, support_check, PerversityReport};
use crate::coxeter::CoxeterDatum;
use crate::error::{Error, Result};
use crate::fq::eq::orbit_counts;
use crate::fq::hecke::{hecke_generators, verify_hecke};
use crate::fq::points::orbit_point_checks;
use crate::matrix::RationalMatrix;
use crate::orbit_poly::{is_compact, property_suite, validate_counts};
use crate::rational::Rational;
use crate::sheaf::MixedBruhatSheaf;
use crate::xi::{Order, XiId, XiPoset};

/// Pretty JSON with a trailing newline.
pub fn to_canonical_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn datum_json(d: &CoxeterDatum) -> Value {
    json!({"type": d.type_label.to_string(), "rank": d.rank})
}

fn matrix_json(a: &RationalMatrix) -> Value {
    Value::Array(
        a.to_dense()
            .iter()
            .map(|row| Value::Array(row.iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

pub fn mbs_to_json(e: &MixedBruhatSheaf) -> Value {
    let p = &*e.poset;
    let dims: Map<String, Value> = p.ids().map(|m| (p.label(m), json!(e.dims[m]))).collect();
    // Second-order keys are (bigger, smaller) while the map runs smaller -> bigger.
    let maps = |order: Order, table: &BTreeMap<(XiId, XiId), RationalMatrix>| -> Value {
        Value::Array(
            table
                .iter()
                .map(|(&(m, n), a)| {
                    let (from, to) = match order {
                        Order::Prime => (m, n),
                        Order::Second => (n, m),
                    };
                    json!({"from": p.label(from), "to": p.label(to), "matrix": matrix_json(a)})
                })
                .collect(),
        )
    };
    json!({
        "datum": datum_json(p.datum()),
        "dims": dims,
        "dprime": maps(Order::Prime, &e.dprime),
        "dsecond": maps(Order::Second, &e.dsecond),
    })
}

pub fn emit_mbs(e: &MixedBruhatSheaf) -> Result<String> {
    to_canonical_string(&mbs_to_json(e))
}

fn perr(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| perr(&format!("{path}.{key}"), "missing"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| perr(path, "expected a string"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| perr(path, "expected a nonnegative integer"))
}

pub fn parse_datum(v: &Value) -> Result<CoxeterDatum> {
    let d = field(v, "datum", "$")?;
    let t = as_str(field(d, "type", "$.datum")?, "$.datum.type")?;
    let r = as_usize(field(d, "rank", "$.datum")?, "$.datum.rank")?;
    CoxeterDatum::parse(t, r).map_err(|e| perr("$.datum", e))
}

fn parse_matrix(v: &Value, path: &str, shape: (usize, usize)) -> Result<RationalMatrix> {
    let rows = v.as_array().ok_or_else(|| perr(path, "expected an array of rows"))?;
    if rows.len() != shape.0 {
        return Err(perr(path, format!("expected {} rows, found {}", shape.0, rows.len())));
    }
    let mut dense = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let cells = row.as_array().ok_or_else(|| perr(&rp, "expected an array"))?;
        if cells.len() != shape.1 {
            return Err(perr(&rp, format!("expected {} entries, found {}", shape.1, cells.len())));
        }
        let mut out = Vec::with_capacity(cells.len());
        for (j, x) in cells.iter().enumerate() {
            let xp = format!("{rp}[{j}]");
            let s = as_str(x, &xp)?;
            let r: Rational = s.parse().map_err(|e| perr(&xp, e))?;
            if r.to_string() != s && format!("{}", r.numer()) != s {
                return Err(perr(&xp, format!("{s:?} is not a reduced fraction with positive denominator")));
            }
            out.push(r);
        }
        dense.push(out);
    }
    Ok(RationalMatrix::from_dense(shape.0, shape.1, &dense))
}

/// Parses a sheaf file against an already built poset of the same datum.
pub fn mbs_from_json(v: &Value, poset: Arc<XiPoset>) -> Result<MixedBruhatSheaf> {
    let datum = parse_datum(v)?;
    if datum.name() != poset.datum().name() {
        return Err(perr("$.datum", format!("{} does not match {}", datum.name(), poset.datum().name())));
    }
    let p = &*poset;
    let dims_obj = field(v, "dims", "$")?.as_object().ok_or_else(|| perr("$.dims", "expected an object"))?;
    let mut dims = vec![0usize; p.len()];
    let mut seen = vec![false; p.len()];
    for (label, d) in dims_obj {
        let path = format!("$.dims[{label:?}]");
        let m = p.parse_label(label).map_err(|e| perr(&path, e))?;
        dims[m] = as_usize(d, &path)?;
        seen[m] = true;
    }
    if let Some(m) = seen.iter().position(|&s| !s) {
        return Err(perr("$.dims", format!("missing cell {}", p.label(m))));
    }
    let mut e = MixedBruhatSheaf { poset: poset.clone(), dims, dprime: BTreeMap::new(), dsecond: BTreeMap::new() };
    for (key, order) in [("dprime", Order::Prime), ("dsecond", Order::Second)] {
        let list = field(v, key, "$")?.as_array().ok_or_else(|| perr(&format!("$.{key}"), "expected an array"))?;
        for (k, item) in list.iter().enumerate() {
            let path = format!("$.{key}[{k}]");
            let from = p.parse_label(as_str(field(item, "from", &path)?, &format!("{path}.from"))?)
                .map_err(|err| perr(&format!("{path}.from"), err))?;
            let to = p.parse_label(as_str(field(item, "to", &path)?, &format!("{path}.to"))?)
                .map_err(|err| perr(&format!("{path}.to"), err))?;
            let a = parse_matrix(field(item, "matrix", &path)?, &format!("{path}.matrix"), (e.dims[to], e.dims[from]))?;
            let (table, pair) = match order {
                Order::Prime => (&mut e.dprime, (from, to)),
                Order::Second => (&mut e.dsecond, (to, from)),
            };
            if table.insert(pair, a).is_some() {
                return Err(perr(&path, "duplicate map"));
            }
        }
    }
    Ok(e)
}

pub fn parse_mbs(text: &str) -> Result<MixedBruhatSheaf> {
    let v: Value = serde_json::from_str(text).map_err(|e| perr("$", e))?;
    let poset = Arc::new(XiPoset::new(parse_datum(&v)?)?);
    mbs_from_json(&v, poset)
}

/// Elements with their invariants, and every strict relation of the joint order.
pub fn xi_to_json(p: &XiPoset) -> Value {
    let elements: Vec<Value> = p
        .ids()
        .map(|m| {
            let e = p.element(m);
            json!({
                "id": m,
                "label": p.label(m),
                "first_type": e.first_type.to_string(),
                "second_type": e.second_type.to_string(),
                "orbit_size": e.orbit_size,
                "hor": e.hor.to_string(),
                "ver": e.ver.to_string(),
                "flat": e.flat,
                "flat_dim": p.flat(m).dim,
                "compact": is_compact(p, m),
                "double_coset_rep": p.complex.group.reduced_word(e.double_coset_rep),
            })
        })
        .collect();
    let covers: BTreeMap<(XiId, XiId), Order> = p
        .covers(Order::Prime)
        .into_iter()
        .map(|k| (k, Order::Prime))
        .chain(p.covers(Order::Second).into_iter().map(|k| (k, Order::Second)))
        .collect();
    let relations: Vec<Value> = p
        .strict_relations()
        .into_iter()
        .map(|(m, n)| {
            let order = if p.geq_prime(m, n) {
                "prime"
            } else if p.geq_second(m, n) {
                "second"
            } else {
                "mixed"
            };
            json!({
                "from": p.label(m),
                "to": p.label(n),
                "order": order,
                "covering": covers.contains_key(&(m, n)),
                "anodyne": p.orbit_size(m) == p.orbit_size(n),
            })
        })
        .collect();
    json!({
        "datum": datum_json(p.datum()),
        "element_count": p.len(),
        "elements": elements,
        "relation_count": relations.len(),
        "relations": relations,
    })
}

/// Axioms, support, co-support and constructibility of one sheaf.
pub fn check_report(e: &MixedBruhatSheaf) -> (Value, bool) {
    let mbs = e.check_mbs();
    let support = support_check(e);
    let cosupport = coperversity_check(e);
    let constructible = constructibility_check(e);
    let pass = mbs.is_ok() && support.is_ok() && cosupport.is_ok() && constructible.is_ok();
    let counts: Map<String, Value> = ["shape", "MBS1", "MBS2", "MBS3"]
        .iter()
        .map(|a| (a.to_string(), json!(mbs.count(a))))
        .collect();
    let summary = |r: &PerversityReport| {
        json!({
            "pass": r.is_ok(),
            "failures": r.failures().collect::<Vec<_>>(),
            "errors": r.errors,
        })
    };
    let v = json!({
        "datum": datum_json(e.poset.datum()),
        "pass": pass,
        "mbs": {
            "pass": mbs.is_ok(),
            "counts": counts,
            "violations": mbs.violations.iter().map(|x| json!({"axiom": x.axiom(), "detail": x.to_string()})).collect::<Vec<_>>(),
        },
        "support": summary(&support),
        "cosupport": summary(&cosupport),
        "constructibility": {
            "pass": constructible.is_ok(),
            "classes": constructible.classes,
            "failures": constructible.failures,
        },
    });
    (v, pass)
}

pub fn poly_report(p: &XiPoset) -> (Value, bool) {
    let r = property_suite(p);
    let pass = r.is_ok();
    let v = json!({
        "datum": datum_json(p.datum()),
        "pass": pass,
        "anodyne_pairs": r.anodyne_pairs,
        "rows": r.rows,
        "failures": r.failures,
    });
    (v, pass)
}

pub fn counts_report(n: usize, q: u32) -> Result<(Value, bool)> {
    let r = validate_counts(n, q)?;
    let pass = r.is_ok();
    let counts: Map<String, Value> = r.counts.iter().map(|(l, c)| (l.clone(), json!(c))).collect();
    Ok((json!({"n": n, "q": q, "pass": pass, "counts": counts, "failures": r.failures}), pass))
}

pub fn hecke_report(n: usize, q: u32) -> Result<(Value, bool)> {
    let (space, gens) = hecke_generators(n, q)?;
    let r = verify_hecke(&gens, q);
    let pass = r.is_ok();
    Ok((json!({"n": n, "q": q, "full_flags": space.len(), "pass": pass, "relations": r}), pass))
}

pub fn orbits_report(n: usize, q: u32) -> Result<(Value, bool)> {
    let r = orbit_point_checks(n, q)?;
    let pass = r.is_ok();
    let counts = orbit_counts(n, q)?;
    let p = XiPoset::new(CoxeterDatum::new(crate::coxeter::CoxeterType::A, n - 1)?)?;
    let sizes: Map<String, Value> = p.ids().map(|m| (p.label(m), json!(counts[m]))).collect();
    Ok((
        json!({
            "n": n,
            "q": q,
            "pass": pass,
            "orbit_points": sizes,
            "configurations": r.configurations,
            "anodyne_pairs": r.anodyne_pairs,
            "failures": r.failures,
        }),
        pass,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterType;
    use crate::f1::build_e1;

    #[test]
    fn round_trip_a1() {
        let p = Arc::new(XiPoset::new(CoxeterDatum::new(CoxeterType::A, 1).unwrap()).unwrap());
        let e = build_e1(p.clone()).sheaf;
        let text = emit_mbs(&e).unwrap();
        let back = parse_mbs(&text).unwrap();
        assert_eq!(emit_mbs(&back).unwrap(), text);
        assert_eq!(back.dims, e.dims);
    }

    #[test]
    fn parse_error_names_path() {
        let p = Arc::new(XiPoset::new(CoxeterDatum::new(CoxeterType::A, 1).unwrap()).unwrap());
        let text = emit_mbs(&build_e1(p).sheaf).unwrap().replacen("\"1/1\"", "\"x\"", 1);
        let err = parse_mbs(&text).unwrap_err().to_string();
        assert!(err.contains("$.dprime[0].matrix") || err.contains("$.dsecond[0].matrix"), "{err}");
    }
}
