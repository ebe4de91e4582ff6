//! W-orbits on pairs of faces: the two-sided Coxeter complex and its orders.
//!
//! An element of type `(I, J)` is an orbit `W(C, D)` with `C` of type `I` and
//! `D` of type `J`. `m >=' n` when `n` is obtained from `m` by contracting the
//! first face, `m >='' n` when the second face is contracted.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterDatum, ParabolicSubset};
use crate::error::{Error, Result};
use crate::faces::{CoxeterComplex, FaceId};
use crate::matrix::RationalMatrix;

pub type XiId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Order {
    /// Contract the first face.
    Prime,
    /// Contract the second face.
    Second,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Order::Prime => "prime",
            Order::Second => "second",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StratumKind {
    /// Same W-orbit of flats.
    Flat,
    /// Generated by anodyne `>=''` relations.
    Second,
    /// Generated by anodyne `>='` relations.
    Prime,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XiElement {
    pub id: XiId,
    /// Canonical representative; `first` is always a standard face `C_I^+`.
    pub first: FaceId,
    pub second: FaceId,
    pub first_type: ParabolicSubset,
    pub second_type: ParabolicSubset,
    pub orbit_size: usize,
    pub hor: ParabolicSubset,
    pub ver: ParabolicSubset,
    pub flat: usize,
    /// Minimal element of the double coset `W_I v W_J`.
    pub double_coset_rep: usize,
}

/// Canonical W-orbit representative of a flat, by positive-root indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FlatOrbit {
    pub roots: Vec<usize>,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct XiPoset {
    pub complex: CoxeterComplex,
    pub elements: Vec<XiElement>,
    pub flats: Vec<FlatOrbit>,
    lookup: HashMap<(FaceId, FaceId), XiId>,
    contract_first: Vec<Vec<Option<XiId>>>,
    contract_second: Vec<Vec<Option<XiId>>>,
    by_type: BTreeMap<(ParabolicSubset, ParabolicSubset), Vec<XiId>>,
    tau: Vec<XiId>,
    labels: HashMap<String, XiId>,
}

fn span_rank(datum: &CoxeterDatum, roots: &[usize]) -> usize {
    if roots.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<i64>> = roots.iter().map(|&k| datum.positive_roots[k].clone()).collect();
    RationalMatrix::from_ints(&rows).rank()
}

impl XiPoset {
    pub fn new(datum: CoxeterDatum) -> Result<Self> {
        let complex = CoxeterComplex::new(datum)?;
        let r = complex.rank();
        let group = &complex.group;

        struct Raw {
            first: FaceId,
            second: FaceId,
            members: Vec<FaceId>,
            stab: usize,
        }
        let mut raw: Vec<Raw> = Vec::new();
        for i in ParabolicSubset::all(r) {
            let c = complex.base_face(i);
            let w_i = group.parabolic_elements(i);
            for j in ParabolicSubset::all(r) {
                let mut done = vec![false; complex.num_faces()];
                for d in 0..complex.num_faces() {
                    if complex.face_type(d) != j || done[d] {
                        continue;
                    }
                    let mut members: Vec<FaceId> = w_i.iter().map(|&u| complex.act(u, d)).collect();
                    members.sort_unstable();
                    members.dedup();
                    for &x in &members {
                        done[x] = true;
                    }
                    let stab = w_i.iter().filter(|&&u| complex.act(u, members[0]) == members[0]).count();
                    raw.push(Raw { first: c, second: members[0], members, stab });
                }
            }
        }
        raw.sort_by_key(|x| (x.first, x.second));

        let mut lookup = HashMap::new();
        for (id, x) in raw.iter().enumerate() {
            for &d in &x.members {
                lookup.insert((x.first, d), id);
            }
        }

        let mut flat_index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut flats: Vec<FlatOrbit> = Vec::new();
        let datum = complex.datum().clone();
        let mut elements = Vec::with_capacity(raw.len());
        for (id, x) in raw.iter().enumerate() {
            let hor = complex.face_type(complex.tits_product(x.first, x.second));
            let ver = complex.face_type(complex.tits_product(x.second, x.first));

            let zc = complex.zero_set(x.first);
            let zd: BTreeSet<usize> = complex.zero_set(x.second).into_iter().collect();
            let zero: Vec<usize> = zc.into_iter().filter(|k| zd.contains(k)).collect();
            let rank = span_rank(&datum, &zero);
            let closed: Vec<usize> = (0..datum.positive_roots.len())
                .filter(|k| zero.contains(k) || span_rank(&datum, &[zero.clone(), vec![*k]].concat()) == rank)
                .collect();
            let canon = (0..group.order())
                .map(|w| {
                    let mut v: Vec<usize> = closed.iter().map(|&k| group.root_image(w, k).0).collect();
                    v.sort_unstable();
                    v
                })
                .min()
                .unwrap_or_default();
            let flat = *flat_index.entry(canon.clone()).or_insert_with(|| {
                flats.push(FlatOrbit { roots: canon, dim: r - rank });
                flats.len() - 1
            });

            let j = complex.face_type(x.second);
            let double_coset_rep = (0..group.order())
                .filter(|&w| x.members.contains(&complex.coset_face(j, w)))
                .min_by_key(|&w| (group.length(w), w))
                .expect("nonempty double coset");

            elements.push(XiElement {
                id,
                first: x.first,
                second: x.second,
                first_type: complex.face_type(x.first),
                second_type: j,
                orbit_size: group.order() / x.stab,
                hor,
                ver,
                flat,
                double_coset_rep,
            });
        }

        let mut poset = XiPoset {
            complex,
            elements,
            flats,
            lookup,
            contract_first: Vec::new(),
            contract_second: Vec::new(),
            by_type: BTreeMap::new(),
            tau: Vec::new(),
            labels: HashMap::new(),
        };
        let n = poset.elements.len();
        let masks = 1usize << r;
        let mut cf = vec![vec![None; masks]; n];
        let mut cs = vec![vec![None; masks]; n];
        for m in 0..n {
            let e = &poset.elements[m];
            for t in e.first_type.supersets(r) {
                let c = poset.complex.base_face(t);
                cf[m][t.0 as usize] = Some(poset.lookup[&(c, e.second)]);
            }
            for t in e.second_type.supersets(r) {
                let d = poset.complex.contract(e.second, t);
                cs[m][t.0 as usize] = Some(poset.lookup[&(e.first, d)]);
            }
        }
        poset.contract_first = cf;
        poset.contract_second = cs;
        for e in &poset.elements {
            poset.by_type.entry((e.first_type, e.second_type)).or_default().push(e.id);
        }
        poset.tau = (0..n).map(|m| poset.orbit_of(poset.elements[m].second, poset.elements[m].first)).collect();
        poset.labels = (0..n).map(|m| (poset.label(m), m)).collect();
        Ok(poset)
    }

    pub fn datum(&self) -> &CoxeterDatum {
        self.complex.datum()
    }

    pub fn rank(&self) -> usize {
        self.complex.rank()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn ids(&self) -> std::ops::Range<XiId> {
        0..self.elements.len()
    }

    pub fn element(&self, m: XiId) -> &XiElement {
        &self.elements[m]
    }

    pub fn types(&self, m: XiId) -> (ParabolicSubset, ParabolicSubset) {
        let e = &self.elements[m];
        (e.first_type, e.second_type)
    }

    pub fn of_type(&self, i: ParabolicSubset, j: ParabolicSubset) -> &[XiId] {
        self.by_type.get(&(i, j)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// The orbit of an arbitrary pair of faces.
    pub fn orbit_of(&self, c: FaceId, d: FaceId) -> XiId {
        let winv = self.complex.group.inv(self.complex.faces[c].rep);
        let c0 = self.complex.act(winv, c);
        let d0 = self.complex.act(winv, d);
        self.lookup[&(c0, d0)]
    }

    /// `I:w|J:w'` with the representative's group-element indices.
    pub fn label(&self, m: XiId) -> String {
        let e = &self.elements[m];
        let f = &self.complex.faces;
        format!("{}:{}|{}:{}", e.first_type, f[e.first].rep, e.second_type, f[e.second].rep)
    }

    pub fn parse_label(&self, s: &str) -> Result<XiId> {
        self.labels.get(s).copied().ok_or_else(|| Error::Parse(format!("unknown cell id {s:?}")))
    }

    pub fn tau(&self, m: XiId) -> XiId {
        self.tau[m]
    }

    pub fn hor(&self, m: XiId) -> ParabolicSubset {
        self.elements[m].hor
    }

    pub fn ver(&self, m: XiId) -> ParabolicSubset {
        self.elements[m].ver
    }

    pub fn orbit_size(&self, m: XiId) -> usize {
        self.elements[m].orbit_size
    }

    pub fn flat(&self, m: XiId) -> &FlatOrbit {
        &self.flats[self.elements[m].flat]
    }

    /// Contract the first face of `m` to type `t`.
    pub fn contract_first(&self, m: XiId, t: ParabolicSubset) -> Option<XiId> {
        self.contract_first[m].get(t.0 as usize).copied().flatten()
    }

    pub fn contract_second(&self, m: XiId, t: ParabolicSubset) -> Option<XiId> {
        self.contract_second[m].get(t.0 as usize).copied().flatten()
    }

    pub fn contract(&self, order: Order, m: XiId, t: ParabolicSubset) -> Option<XiId> {
        match order {
            Order::Prime => self.contract_first(m, t),
            Order::Second => self.contract_second(m, t),
        }
    }

    /// `m >=' n`
    pub fn geq_prime(&self, m: XiId, n: XiId) -> bool {
        let (i, _) = self.types(n);
        self.types(m).1 == self.types(n).1 && self.contract_first(m, i) == Some(n)
    }

    /// `m >='' n`
    pub fn geq_second(&self, m: XiId, n: XiId) -> bool {
        let (_, j) = self.types(n);
        self.types(m).0 == self.types(n).0 && self.contract_second(m, j) == Some(n)
    }

    pub fn geq_in(&self, order: Order, m: XiId, n: XiId) -> bool {
        match order {
            Order::Prime => self.geq_prime(m, n),
            Order::Second => self.geq_second(m, n),
        }
    }

    /// The joint order: `m >= n` iff `m >=' m' >='' n` for some `m'`.
    pub fn geq(&self, m: XiId, n: XiId) -> bool {
        let (i, j) = self.types(n);
        self.contract_first(m, i).and_then(|x| self.contract_second(x, j)) == Some(n)
    }

    /// Covering relations `(m, n, s)` of one order, with `s` the added index.
    pub fn covers(&self, order: Order) -> Vec<(XiId, XiId)> {
        let r = self.rank();
        let mut out = Vec::new();
        for m in self.ids() {
            let (i, j) = self.types(m);
            let t = if order == Order::Prime { i } else { j };
            for s in 0..r {
                if !t.contains(s) {
                    out.push((m, self.contract(order, m, t.with(s)).unwrap()));
                }
            }
        }
        out
    }

    /// All strict relations of the joint order, `(m, n)` with `m > n`.
    pub fn strict_relations(&self) -> Vec<(XiId, XiId)> {
        let r = self.rank();
        let mut out = Vec::new();
        for m in self.ids() {
            let (i, j) = self.types(m);
            for ti in i.supersets(r) {
                let x = self.contract_first(m, ti).unwrap();
                for tj in j.supersets(r) {
                    if ti == i && tj == j {
                        continue;
                    }
                    out.push((m, self.contract_second(x, tj).unwrap()));
                }
            }
        }
        out
    }

    pub fn is_anodyne(&self, m: XiId, n: XiId) -> Result<bool> {
        if !self.geq(m, n) {
            return Err(Error::Order(format!("{} is not above {}", self.label(m), self.label(n))));
        }
        Ok(self.orbit_size(m) == self.orbit_size(n))
    }

    /// Points of the orbit as pairs of faces, sorted.
    pub fn orbit_points(&self, m: XiId) -> Vec<(FaceId, FaceId)> {
        let e = &self.elements[m];
        let g = &self.complex.group;
        let mut pts: Vec<(FaceId, FaceId)> =
            (0..g.order()).map(|w| (self.complex.act(w, e.first), self.complex.act(w, e.second))).collect();
        pts.sort_unstable();
        pts.dedup();
        pts
    }

    /// The projection of orbit points for `m >= n`, as indices into `orbit_points`.
    pub fn pi_map(&self, m: XiId, n: XiId) -> Result<Vec<usize>> {
        if !self.geq(m, n) {
            return Err(Error::Order(format!("{} is not above {}", self.label(m), self.label(n))));
        }
        let (i, j) = self.types(n);
        let target: HashMap<(FaceId, FaceId), usize> =
            self.orbit_points(n).into_iter().enumerate().map(|(k, p)| (p, k)).collect();
        Ok(self
            .orbit_points(m)
            .into_iter()
            .map(|(c, d)| target[&(self.complex.contract(c, i), self.complex.contract(d, j))])
            .collect())
    }

    /// Orbits of the fiber product of `m'` (type `(I1, J2)`) and `n` (type
    /// `(I2, J1)`) over their common image in type `(I2, J2)`.
    pub fn sup(&self, m_prime: XiId, n: XiId) -> Vec<XiId> {
        let (i1, j2) = self.types(m_prime);
        let (i2, j1) = self.types(n);
        if !i1.is_subset(i2) || !j1.is_subset(j2) {
            return Vec::new();
        }
        let k = &self.complex;
        let mut fibers: HashMap<(FaceId, FaceId), Vec<FaceId>> = HashMap::new();
        for (c2, d) in self.orbit_points(n) {
            fibers.entry((c2, k.contract(d, j2))).or_default().push(d);
        }
        let mut out = BTreeSet::new();
        for (c, d2) in self.orbit_points(m_prime) {
            if let Some(ds) = fibers.get(&(k.contract(c, i2), d2)) {
                for &d in ds {
                    out.insert(self.orbit_of(c, d));
                }
            }
        }
        out.into_iter().collect()
    }

    /// Same set as [`XiPoset::sup`], read off the contraction tables.
    pub fn sup_by_contraction(&self, m_prime: XiId, n: XiId) -> Vec<XiId> {
        let (i1, j2) = self.types(m_prime);
        let (i2, j1) = self.types(n);
        if !i1.is_subset(i2) || !j1.is_subset(j2) {
            return Vec::new();
        }
        self.of_type(i1, j1)
            .iter()
            .copied()
            .filter(|&m| self.contract_second(m, j2) == Some(m_prime) && self.contract_first(m, i2) == Some(n))
            .collect()
    }

    /// Equivalence classes of cells, each sorted, classes ordered by first member.
    pub fn stratum_classes(&self, kind: StratumKind) -> Vec<Vec<XiId>> {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let union = |a: usize, b: usize, p: &mut Vec<usize>| {
            let (ra, rb) = (find(p, a), find(p, b));
            if ra != rb {
                p[ra.max(rb)] = ra.min(rb);
            }
        };
        match kind {
            StratumKind::Flat => {
                let mut first: HashMap<usize, usize> = HashMap::new();
                for m in self.ids() {
                    let f = self.elements[m].flat;
                    match first.get(&f) {
                        Some(&x) => union(x, m, &mut parent),
                        None => {
                            first.insert(f, m);
                        }
                    }
                }
            }
            StratumKind::Second | StratumKind::Prime => {
                let order = if kind == StratumKind::Second { Order::Second } else { Order::Prime };
                for (m, k) in self.covers(order) {
                    if self.orbit_size(m) == self.orbit_size(k) {
                        union(m, k, &mut parent);
                    }
                }
            }
        }
        let mut classes: BTreeMap<usize, Vec<XiId>> = BTreeMap::new();
        for m in 0..n {
            let root = find(&mut parent, m);
            classes.entry(root).or_default().push(m);
        }
        classes.into_values().collect()
    }

    /// Bruhat order on double cosets via minimal representatives; both cells
    /// must have the same type.
    pub fn double_coset_leq(&self, m: XiId, n: XiId) -> bool {
        self.types(m) == self.types(n)
            && self.complex.group.bruhat_leq(self.elements[m].double_coset_rep, self.elements[n].double_coset_rep)
    }

    pub fn delta_faces(&self, c: FaceId, d: FaceId) -> usize {
        self.complex.delta_faces(c, d)
    }

    pub fn face_distance(&self, c: FaceId, d: FaceId) -> Result<usize> {
        self.complex.face_distance(c, d)
    }

    pub fn tits_product(&self, c: FaceId, d: FaceId) -> FaceId {
        self.complex.tits_product(c, d)
    }
}

/// Builds the poset for a datum.
pub fn enumerate_xi(datum: &CoxeterDatum) -> Result<XiPoset> {
    XiPoset::new(datum.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterType;

    #[test]
    fn a1_has_five_cells() {
        let p = enumerate_xi(&CoxeterDatum::new(CoxeterType::A, 1).unwrap()).unwrap();
        assert_eq!(p.len(), 5);
        let sizes: Vec<usize> = p.ids().map(|m| p.orbit_size(m)).collect();
        assert_eq!(sizes, vec![2, 2, 2, 2, 1]);
        assert_eq!(p.label(4), "0:0|0:0");
        assert_eq!(p.parse_label(":0|:1").unwrap(), 1);
    }

    #[test]
    fn a2_flat_classes() {
        let p = enumerate_xi(&CoxeterDatum::new(CoxeterType::A, 2).unwrap()).unwrap();
        assert_eq!(p.stratum_classes(StratumKind::Flat).len(), 3);
    }
}
