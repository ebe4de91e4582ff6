//! Sheaves of functions on orbits: `E_1` and its isotypic pieces `E_1^V`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::faces::FaceId;
use crate::matrix::RationalMatrix;
use crate::rational::Rational;
use crate::reps::WRepresentation;
use crate::sheaf::MixedBruhatSheaf;
use crate::xi::{Order, XiId, XiPoset};

/// `E_1(m)` = functions on the orbit `m`; `∂'` sums over fibers, `∂''` pulls back.
#[derive(Clone, Debug)]
pub struct E1Sheaf {
    pub sheaf: MixedBruhatSheaf,
    pub points: Vec<Vec<(FaceId, FaceId)>>,
}

fn cover_projection(p: &XiPoset, points: &[Vec<(FaceId, FaceId)>], m: XiId, n: XiId) -> Vec<usize> {
    let (i, j) = p.types(n);
    let index: HashMap<(FaceId, FaceId), usize> = points[n].iter().enumerate().map(|(k, &x)| (x, k)).collect();
    points[m]
        .iter()
        .map(|&(c, d)| index[&(p.complex.contract(c, i), p.complex.contract(d, j))])
        .collect()
}

pub fn build_e1(poset: Arc<XiPoset>) -> E1Sheaf {
    let p = &*poset;
    let points: Vec<Vec<(FaceId, FaceId)>> = p.ids().map(|m| p.orbit_points(m)).collect();
    let dims = points.iter().map(|v| v.len()).collect();
    let mut sheaf = MixedBruhatSheaf { poset: poset.clone(), dims, dprime: Default::default(), dsecond: Default::default() };
    for (m, n) in p.covers(Order::Prime) {
        let proj = cover_projection(p, &points, m, n);
        let entries = proj.iter().enumerate().map(|(k, &t)| (t, k, Rational::one()));
        sheaf.dprime.insert((m, n), RationalMatrix::from_entries(points[n].len(), points[m].len(), entries));
    }
    for (m, n) in p.covers(Order::Second) {
        let proj = cover_projection(p, &points, m, n);
        let entries = proj.iter().enumerate().map(|(k, &t)| (k, t, Rational::one()));
        sheaf.dsecond.insert((m, n), RationalMatrix::from_entries(points[m].len(), points[n].len(), entries));
    }
    E1Sheaf { sheaf, points }
}

impl E1Sheaf {
    /// Permutation action of the group element `w` on `E_1(m)`.
    pub fn action(&self, w: usize, m: XiId) -> RationalMatrix {
        let k = &self.sheaf.poset.complex;
        let pts = &self.points[m];
        let index: HashMap<(FaceId, FaceId), usize> = pts.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let entries = pts
            .iter()
            .enumerate()
            .map(|(i, &(c, d))| (index[&(k.act(w, c), k.act(w, d))], i, Rational::one()));
        RationalMatrix::from_entries(pts.len(), pts.len(), entries)
    }

    /// Number of orbit points fixed by `w`.
    pub fn fixed_points(&self, w: usize, m: XiId) -> usize {
        let k = &self.sheaf.poset.complex;
        self.points[m].iter().filter(|&&(c, d)| k.act(w, c) == c && k.act(w, d) == d).count()
    }
}

/// `E_1^V(m) = (E_1(m) ⊗ V)^W`, realized as the image of the averaging
/// projector with a pivot-column basis.
#[derive(Clone, Debug)]
pub struct E1VSheaf {
    pub sheaf: MixedBruhatSheaf,
    pub bases: Vec<RationalMatrix>,
}

pub fn build_e1v(e1: &E1Sheaf, rep: &WRepresentation) -> Result<E1VSheaf> {
    let p = &*e1.sheaf.poset;
    let g = &p.complex.group;
    if !rep.satisfies_coxeter_relations(g) {
        return Err(Error::Domain(format!("{} does not satisfy the Coxeter relations", rep.name)));
    }
    let mats = rep.matrices(g);
    let dv = rep.dim;
    let weight = Rational::new(1, g.order() as i64);
    let mut bases = Vec::with_capacity(p.len());
    for m in p.ids() {
        let pts = &e1.points[m];
        let index: HashMap<(FaceId, FaceId), usize> = pts.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let size = pts.len() * dv;
        let mut entries = Vec::new();
        for (w, rho) in mats.iter().enumerate() {
            for (i, &(c, d)) in pts.iter().enumerate() {
                let target = index[&(p.complex.act(w, c), p.complex.act(w, d))];
                for (a, b, v) in rho.entries() {
                    entries.push((target * dv + a, i * dv + b, v * &weight));
                }
            }
        }
        let proj = RationalMatrix::from_entries(size, size, entries);
        let pivots = proj.pivot_columns();
        bases.push(proj.select_columns(&pivots));
    }
    let id_v = RationalMatrix::identity(dv);
    let mut lifted = e1.sheaf.clone();
    lifted.dims = e1.sheaf.dims.iter().map(|d| d * dv).collect();
    for a in lifted.dprime.values_mut() {
        *a = a.kron(&id_v);
    }
    for a in lifted.dsecond.values_mut() {
        *a = a.kron(&id_v);
    }
    let sheaf = lifted.restrict(&bases)?;
    Ok(E1VSheaf { sheaf, bases })
}
