//! Point-count polynomials of Bruhat orbits, from the affine fibration over
//! the horizontal (or vertical) flag variety.

use serde::{Deserialize, Serialize};

use crate::coxeter::ParabolicSubset;
use crate::error::{Error, Result};
use crate::polynomial::IntPolynomial;
use crate::xi::{XiId, XiPoset};

/// `|Δ| - #{α ∈ Δ : α|_C >= 0 and α|_D >= 0}`.
pub fn dim_orbit(p: &XiPoset, m: XiId) -> usize {
    let e = p.element(m);
    let (c, d) = (&p.complex.sign(e.first).0, &p.complex.sign(e.second).0);
    let nonneg = c
        .iter()
        .zip(d)
        .map(|(&a, &b)| usize::from(a >= 0 && b >= 0) + usize::from(a <= 0 && b <= 0))
        .sum::<usize>();
    2 * c.len() - nonneg
}

/// `|Δ+| - |Δ+_I|`.
pub fn dim_flag(p: &XiPoset, i: ParabolicSubset) -> usize {
    let roots = &p.datum().positive_roots;
    let inside = roots
        .iter()
        .filter(|v| v.iter().enumerate().all(|(k, &c)| c == 0 || i.contains(k)))
        .count();
    roots.len() - inside
}

fn via(p: &XiPoset, m: XiId, t: ParabolicSubset) -> Result<IntPolynomial> {
    let base = dim_flag(p, t);
    let top = dim_orbit(p, m);
    let shift = top
        .checked_sub(base)
        .ok_or_else(|| Error::Internal(format!("{} is smaller than its flag variety", p.label(m))))?;
    Ok(p.complex.group.poincare_poly(t).shift(shift))
}

pub fn orbit_poly(p: &XiPoset, m: XiId) -> Result<IntPolynomial> {
    let hor = via(p, m, p.hor(m))?;
    let ver = via(p, m, p.ver(m))?;
    if hor != ver {
        return Err(Error::Internal(format!("Hor and Ver polynomials differ at {}: {hor} vs {ver}", p.label(m))));
    }
    Ok(hor)
}

/// `{α : α|_C > 0} ⊆ {α : α|_D >= 0}` and the same with `C`, `D` swapped.
pub fn is_compact(p: &XiPoset, m: XiId) -> bool {
    let e = p.element(m);
    let (c, d) = (&p.complex.sign(e.first).0, &p.complex.sign(e.second).0);
    let inside = |x: &[i8], y: &[i8]| x.iter().zip(y).all(|(&a, &b)| (a <= 0 || b >= 0) && (a >= 0 || b <= 0));
    inside(c, d) && inside(d, c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRow {
    pub cell: String,
    pub coefficients: Vec<i64>,
    pub dim: usize,
    pub compact: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub rows: Vec<PolyRow>,
    pub anodyne_pairs: usize,
    pub failures: Vec<String>,
}

impl PropertyReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn property_suite(p: &XiPoset) -> PropertyReport {
    let mut rep = PropertyReport::default();
    let mut polys = Vec::new();
    for m in p.ids() {
        let label = p.label(m);
        let poly = match orbit_poly(p, m) {
            Ok(x) => x,
            Err(e) => {
                rep.failures.push(e.to_string());
                polys.push(None);
                continue;
            }
        };
        let dim = dim_orbit(p, m);
        let compact = is_compact(p, m);
        if poly.eval(1) != p.orbit_size(m) as i64 {
            rep.failures.push(format!("{label}: n(1) = {} but the orbit has {}", poly.eval(1), p.orbit_size(m)));
        }
        if poly.divisible_by_q_minus_one() {
            rep.failures.push(format!("{label}: divisible by q - 1"));
        }
        if poly.divisible_by_q() == compact {
            rep.failures.push(format!("{label}: divisibility by q disagrees with compactness"));
        }
        if compact && poly.eval(0) != 1 {
            rep.failures.push(format!("{label}: compact but n(0) = {}", poly.eval(0)));
        }
        if poly.degree() != Some(dim) {
            rep.failures.push(format!("{label}: degree {:?} differs from dimension {dim}", poly.degree()));
        }
        rep.rows.push(PolyRow { cell: label, coefficients: poly.coeffs().to_vec(), dim, compact });
        polys.push(Some(poly));
    }
    for (m, n) in p.strict_relations() {
        if p.orbit_size(m) != p.orbit_size(n) {
            continue;
        }
        rep.anodyne_pairs += 1;
        let (Some(a), Some(b)) = (&polys[m], &polys[n]) else { continue };
        let gap = dim_orbit(p, m).checked_sub(dim_orbit(p, n));
        if gap.is_none_or(|g| *a != b.shift(g)) {
            rep.failures.push(format!("{} >= {}: {a} is not a q-power multiple of {b}", p.label(m), p.label(n)));
        }
    }
    rep
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub n: usize,
    pub q: u32,
    pub counts: Vec<(String, usize)>,
    pub failures: Vec<String>,
}

impl CountReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compares `orbit_poly(m)(q)` with a brute-force count of flag pairs over `F_q`.
pub fn validate_counts(n: usize, q: u32) -> Result<CountReport> {
    let geo = crate::fq::eq::FlagGeometry::new(n, q, crate::fq::eq::FlagOrder::Canonical)?;
    let p = &*geo.poset;
    let mut rep = CountReport { n, q, ..Default::default() };
    for m in p.ids() {
        let counted = geo.orbits[m].points.len();
        let predicted = orbit_poly(p, m)?.eval(q as i64);
        if predicted != counted as i64 {
            rep.failures.push(format!("{}: polynomial gives {predicted}, enumeration {counted}", p.label(m)));
        }
        rep.counts.push((p.label(m), counted));
    }
    Ok(rep)
}
