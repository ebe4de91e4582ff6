//! Mixed Bruhat sheaves: data, axiom checks, duality and derived structures.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coxeter::ParabolicSubset;
use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::rational::Rational;
use crate::xi::{Order, XiId, XiPoset};

/// A vector space per cell and a matrix per covering relation of each order.
///
/// For a cover `m >=' n` the matrix of `∂'` maps `E(m) -> E(n)` and has shape
/// `dim E(n) x dim E(m)`; for `m >='' n` the matrix of `∂''` maps
/// `E(n) -> E(m)` and has shape `dim E(m) x dim E(n)`.
#[derive(Clone, Debug)]
pub struct MixedBruhatSheaf {
    pub poset: Arc<XiPoset>,
    pub dims: Vec<usize>,
    pub dprime: BTreeMap<(XiId, XiId), RationalMatrix>,
    pub dsecond: BTreeMap<(XiId, XiId), RationalMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    Shape { order: Order, from: String, to: String, expected: (usize, usize), found: (usize, usize) },
    Missing { order: Order, from: String, to: String },
    NotCovering { order: Order, from: String, to: String },
    Mbs1 { order: Order, from: String, to: String },
    Mbs2 { m_prime: String, n_prime: String, n: String },
    Mbs3 { order: Order, from: String, to: String },
}

impl Violation {
    pub fn axiom(&self) -> &'static str {
        match self {
            Violation::Shape { .. } | Violation::Missing { .. } | Violation::NotCovering { .. } => "shape",
            Violation::Mbs1 { .. } => "MBS1",
            Violation::Mbs2 { .. } => "MBS2",
            Violation::Mbs3 { .. } => "MBS3",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { order, from, to, expected, found } => write!(
                f,
                "shape: {order} map {from} -> {to} expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            Violation::Missing { order, from, to } => write!(f, "shape: missing {order} map {from} -> {to}"),
            Violation::NotCovering { order, from, to } => {
                write!(f, "shape: {order} map {from} -> {to} is not a covering relation")
            }
            Violation::Mbs1 { order, from, to } => {
                write!(f, "MBS1: {order} composites {from} -> {to} depend on the chain")
            }
            Violation::Mbs2 { m_prime, n_prime, n } => {
                write!(f, "MBS2: square at m'={m_prime}, n'={n_prime}, n={n} does not commute")
            }
            Violation::Mbs3 { order, from, to } => {
                write!(f, "MBS3: anodyne {order} map {from} -> {to} is not invertible")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MbsReport {
    pub violations: Vec<Violation>,
}

impl MbsReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, axiom: &str) -> usize {
        self.violations.iter().filter(|v| v.axiom() == axiom).count()
    }
}

/// Composites along chains of covers, for every comparable pair of one order.
struct Composites {
    maps: HashMap<(XiId, XiId), RationalMatrix>,
    disagreements: Vec<(XiId, XiId)>,
}

impl MixedBruhatSheaf {
    pub fn zero(poset: Arc<XiPoset>) -> Self {
        let dims = vec![0; poset.len()];
        let mut s = MixedBruhatSheaf { poset, dims, dprime: BTreeMap::new(), dsecond: BTreeMap::new() };
        for (m, n) in s.poset.covers(Order::Prime) {
            s.dprime.insert((m, n), RationalMatrix::zeros(0, 0));
        }
        for (m, n) in s.poset.covers(Order::Second) {
            s.dsecond.insert((m, n), RationalMatrix::zeros(0, 0));
        }
        s
    }

    pub fn maps(&self, order: Order) -> &BTreeMap<(XiId, XiId), RationalMatrix> {
        match order {
            Order::Prime => &self.dprime,
            Order::Second => &self.dsecond,
        }
    }

    pub fn cover_map(&self, order: Order, m: XiId, n: XiId) -> Result<&RationalMatrix> {
        self.maps(order).get(&(m, n)).ok_or_else(|| {
            Error::Order(format!(
                "no {order} covering map {} -> {}",
                self.poset.label(m),
                self.poset.label(n)
            ))
        })
    }

    fn expected_shape(&self, order: Order, m: XiId, n: XiId) -> (usize, usize) {
        match order {
            Order::Prime => (self.dims[n], self.dims[m]),
            Order::Second => (self.dims[m], self.dims[n]),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Composite of `∂'` (or `∂''`) for `m >= n` in the given order, checking
    /// that every chain of covers gives the same answer.
    pub fn compose(&self, order: Order, m: XiId, n: XiId) -> Result<RationalMatrix> {
        if !self.poset.geq_in(order, m, n) {
            return Err(Error::Order(format!(
                "{} is not {order}-above {}",
                self.poset.label(m),
                self.poset.label(n)
            )));
        }
        let comp = self.composites_from(order, &[m])?;
        if comp.disagreements.is_empty() {
            Ok(comp.maps[&(m, n)].clone())
        } else {
            let (a, b) = comp.disagreements[0];
            Err(Error::Path(format!(
                "{order} chains from {} to {} disagree",
                self.poset.label(a),
                self.poset.label(b)
            )))
        }
    }

    pub fn compose_prime(&self, m: XiId, n: XiId) -> Result<RationalMatrix> {
        self.compose(Order::Prime, m, n)
    }

    pub fn compose_second(&self, m: XiId, n: XiId) -> Result<RationalMatrix> {
        self.compose(Order::Second, m, n)
    }

    fn order_type(&self, order: Order, m: XiId) -> ParabolicSubset {
        let (i, j) = self.poset.types(m);
        match order {
            Order::Prime => i,
            Order::Second => j,
        }
    }

    /// Chain composites from each start cell (and everything below it).
    /// A pair disagrees when two first steps lead to different composites;
    /// by induction that covers every pair of maximal chains.
    fn composites_from(&self, order: Order, starts: &[XiId]) -> Result<Composites> {
        let p = &*self.poset;
        let r = p.rank();
        let mut maps: HashMap<(XiId, XiId), RationalMatrix> = HashMap::new();
        let mut disagreements = Vec::new();

        // Every cell reachable from the starts, processed by decreasing type size.
        let mut cells: Vec<XiId> = Vec::new();
        let mut seen = vec![false; p.len()];
        for &s in starts {
            let t = self.order_type(order, s);
            for u in t.supersets(r) {
                let x = p.contract(order, s, u).unwrap();
                if !seen[x] {
                    seen[x] = true;
                    cells.push(x);
                }
            }
        }
        cells.sort_by_key(|&x| std::cmp::Reverse(self.order_type(order, x).len()));

        for &m in &cells {
            let t = self.order_type(order, m);
            maps.insert((m, m), RationalMatrix::identity(self.dims[m]));
            for u in t.supersets(r) {
                if u == t {
                    continue;
                }
                let n = p.contract(order, m, u).unwrap();
                let mut first: Option<RationalMatrix> = None;
                let mut bad = false;
                for s in u.indices() {
                    if t.contains(s) {
                        continue;
                    }
                    let x = p.contract(order, m, t.with(s)).unwrap();
                    let step = self.cover_map(order, m, x)?;
                    let rest = &maps[&(x, n)];
                    let cand = match order {
                        Order::Prime => rest.mul(step),
                        Order::Second => step.mul(rest),
                    };
                    match &first {
                        None => first = Some(cand),
                        Some(f) => bad |= *f != cand,
                    }
                }
                if bad {
                    disagreements.push((m, n));
                }
                maps.insert((m, n), first.unwrap());
            }
        }
        Ok(Composites { maps, disagreements })
    }

    fn shape_violations(&self) -> Vec<Violation> {
        let p = &*self.poset;
        let mut out = Vec::new();
        for order in [Order::Prime, Order::Second] {
            let covers = p.covers(order);
            let set: std::collections::HashSet<(XiId, XiId)> = covers.iter().copied().collect();
            for (m, n) in covers {
                match self.maps(order).get(&(m, n)) {
                    None => out.push(Violation::Missing { order, from: p.label(m), to: p.label(n) }),
                    Some(a) => {
                        let expected = self.expected_shape(order, m, n);
                        if a.shape() != expected {
                            out.push(Violation::Shape {
                                order,
                                from: p.label(m),
                                to: p.label(n),
                                expected,
                                found: a.shape(),
                            });
                        }
                    }
                }
            }
            for &(m, n) in self.maps(order).keys() {
                if !set.contains(&(m, n)) {
                    out.push(Violation::NotCovering { order, from: p.label(m), to: p.label(n) });
                }
            }
        }
        out
    }

    /// Checks all three axioms over every cell and configuration.
    pub fn check_mbs(&self) -> MbsReport {
        let p = &*self.poset;
        let mut violations = self.shape_violations();
        if !violations.is_empty() || self.dims.len() != p.len() {
            return MbsReport { violations };
        }

        for order in [Order::Prime, Order::Second] {
            for &(m, n) in self.maps(order).keys() {
                if p.orbit_size(m) == p.orbit_size(n) && !self.maps(order)[&(m, n)].is_invertible() {
                    violations.push(Violation::Mbs3 { order, from: p.label(m), to: p.label(n) });
                }
            }
        }

        let all: Vec<XiId> = p.ids().collect();
        let prime = self.composites_from(Order::Prime, &all).expect("shapes checked");
        let second = self.composites_from(Order::Second, &all).expect("shapes checked");
        for (order, comp) in [(Order::Prime, &prime), (Order::Second, &second)] {
            let mut d = comp.disagreements.clone();
            d.sort_unstable();
            for (m, n) in d {
                violations.push(Violation::Mbs1 { order, from: p.label(m), to: p.label(n) });
            }
        }

        let configs = mbs2_configurations(p);
        let mut bad: Vec<(XiId, XiId, XiId)> = configs
            .par_iter()
            .filter(|c| {
                let lhs = second.maps[&(c.n, c.n_prime)].mul(&prime.maps[&(c.m_prime, c.n_prime)]);
                let rhs = c.sup.iter().fold(RationalMatrix::zeros(lhs.nrows(), lhs.ncols()), |acc, &m| {
                    acc.add(&prime.maps[&(m, c.n)].mul(&second.maps[&(m, c.m_prime)]))
                });
                lhs != rhs
            })
            .map(|c| (c.m_prime, c.n_prime, c.n))
            .collect();
        bad.sort_unstable();
        for (a, b, c) in bad {
            violations.push(Violation::Mbs2 { m_prime: p.label(a), n_prime: p.label(b), n: p.label(c) });
        }
        MbsReport { violations }
    }

    /// The dual sheaf: `E^τ(m) = E(τm)*` with transposed maps of the other order.
    pub fn dual(&self) -> MixedBruhatSheaf {
        let p = &self.poset;
        let dims = p.ids().map(|m| self.dims[p.tau(m)]).collect();
        let mut dprime = BTreeMap::new();
        for (m, n) in p.covers(Order::Prime) {
            if let Some(a) = self.dsecond.get(&(p.tau(m), p.tau(n))) {
                dprime.insert((m, n), a.transpose());
            }
        }
        let mut dsecond = BTreeMap::new();
        for (m, n) in p.covers(Order::Second) {
            if let Some(a) = self.dprime.get(&(p.tau(m), p.tau(n))) {
                dsecond.insert((m, n), a.transpose());
            }
        }
        MixedBruhatSheaf { poset: p.clone(), dims, dprime, dsecond }
    }

    /// Rebuilds the sheaf on a subspace per cell; `bases[m]` has the basis
    /// vectors as columns and must be stable under every map.
    pub fn restrict(&self, bases: &[RationalMatrix]) -> Result<MixedBruhatSheaf> {
        let p = &self.poset;
        let dims: Vec<usize> = bases.iter().map(|b| b.ncols()).collect();
        let mut out = MixedBruhatSheaf { poset: p.clone(), dims, dprime: BTreeMap::new(), dsecond: BTreeMap::new() };
        for order in [Order::Prime, Order::Second] {
            for (&(m, n), a) in self.maps(order) {
                let (src, dst) = match order {
                    Order::Prime => (m, n),
                    Order::Second => (n, m),
                };
                let image = a.mul(&bases[src]);
                let x = bases[dst].solve(&image).ok_or_else(|| {
                    Error::Domain(format!("subspace at {} not preserved", p.label(src)))
                })?;
                match order {
                    Order::Prime => out.dprime.insert((m, n), x),
                    Order::Second => out.dsecond.insert((m, n), x),
                };
            }
        }
        Ok(out)
    }
}

/// One instance of the second axiom: `m' >=' n' <='' n` with strict steps.
#[derive(Clone, Debug)]
pub struct Mbs2Configuration {
    pub m_prime: XiId,
    pub n_prime: XiId,
    pub n: XiId,
    pub sup: Vec<XiId>,
}

pub fn mbs2_configurations(p: &XiPoset) -> Vec<Mbs2Configuration> {
    let r = p.rank();
    let mut second_pre: HashMap<(XiId, ParabolicSubset), Vec<XiId>> = HashMap::new();
    for n in p.ids() {
        let (_, j1) = p.types(n);
        for j2 in j1.supersets(r) {
            if j2 != j1 {
                second_pre.entry((p.contract_second(n, j2).unwrap(), j1)).or_default().push(n);
            }
        }
    }
    let mut out = Vec::new();
    for m_prime in p.ids() {
        let (i1, j2) = p.types(m_prime);
        for i2 in i1.supersets(r) {
            if i2 == i1 {
                continue;
            }
            let n_prime = p.contract_first(m_prime, i2).unwrap();
            for j1 in j2.subsets() {
                if j1 == j2 {
                    continue;
                }
                for &n in second_pre.get(&(n_prime, j1)).map(|v| v.as_slice()).unwrap_or(&[]) {
                    let sup = p.sup_by_contraction(m_prime, n);
                    out.push(Mbs2Configuration { m_prime, n_prime, n, sup });
                }
            }
        }
    }
    out
}

/// Cells of the quiver description: `m'_I = W(0, K_I)`, `m_I = W(K_I, K_I)`,
/// `m''_I = W(K_I, 0)`.
pub fn bicube_cells(p: &XiPoset, i: ParabolicSubset) -> (XiId, XiId, XiId) {
    let k = &p.complex;
    let origin = k.base_face(ParabolicSubset::full(p.rank()));
    let face = k.base_face(i);
    (p.orbit_of(origin, face), p.orbit_of(face, face), p.orbit_of(face, origin))
}

/// Spaces `Q_I = E(m'_I)` with `u_IJ : Q_J -> Q_I` and `v_IJ : Q_I -> Q_J` for `I ⊂ J`.
#[derive(Clone, Debug)]
pub struct Bicube {
    pub rank: usize,
    pub spaces: BTreeMap<ParabolicSubset, usize>,
    pub u: BTreeMap<(ParabolicSubset, ParabolicSubset), RationalMatrix>,
    pub v: BTreeMap<(ParabolicSubset, ParabolicSubset), RationalMatrix>,
}

pub fn bicube(e: &MixedBruhatSheaf) -> Result<Bicube> {
    let p = &*e.poset;
    let r = p.rank();
    let mut spaces = BTreeMap::new();
    // phi_I : Q_I -> E(m''_I) through E(m_I), inverted anodyne maps
    let mut phi = BTreeMap::new();
    let mut phi_inv = BTreeMap::new();
    for i in ParabolicSubset::all(r) {
        let (mp, m, mpp) = bicube_cells(p, i);
        spaces.insert(i, e.dims[mp]);
        let to_q = e.compose(Order::Prime, m, mp)?;
        let from_pp = e.compose(Order::Second, m, mpp)?;
        let back = to_q.mul(&from_pp);
        let fwd = back
            .inverse()
            .ok_or_else(|| Error::Axiom(format!("anodyne maps at {} are not invertible", p.label(m))))?;
        phi.insert(i, fwd);
        phi_inv.insert(i, back);
    }
    let mut u = BTreeMap::new();
    let mut v = BTreeMap::new();
    for i in ParabolicSubset::all(r) {
        for j in i.supersets(r) {
            if i == j {
                continue;
            }
            let (mpi, _, mppi) = bicube_cells(p, i);
            let (mpj, _, mppj) = bicube_cells(p, j);
            u.insert((i, j), e.compose(Order::Second, mpi, mpj)?);
            let middle = e.compose(Order::Prime, mppi, mppj)?;
            v.insert((i, j), phi_inv[&j].mul(&middle).mul(&phi[&i]));
        }
    }
    Ok(Bicube { rank: r, spaces, u, v })
}

/// Rank-one reduction: `Φ = Q_S`, `Ψ = Q_∅`, `T = 1 - u v` on `Ψ`.
#[derive(Clone, Debug)]
pub struct PhiPsi {
    pub phi_dim: usize,
    pub psi_dim: usize,
    pub u: RationalMatrix,
    pub v: RationalMatrix,
    pub t: RationalMatrix,
    pub t_invertible: bool,
}

pub fn phi_psi(e: &MixedBruhatSheaf) -> Result<PhiPsi> {
    if e.poset.rank() != 1 {
        return Err(Error::Config("the (Φ, Ψ) reduction needs rank one".into()));
    }
    let b = bicube(e)?;
    let key = (ParabolicSubset::empty(), ParabolicSubset::full(1));
    let u = b.u[&key].clone();
    let v = b.v[&key].clone();
    let psi_dim = b.spaces[&ParabolicSubset::empty()];
    let t = RationalMatrix::identity(psi_dim).sub(&u.mul(&v));
    let t_invertible = t.is_invertible();
    Ok(PhiPsi { phi_dim: b.spaces[&ParabolicSubset::full(1)], psi_dim, u, v, t, t_invertible })
}

/// A walk through cells; consecutive cells must be related by an anodyne
/// relation of one of the two orders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellPath {
    pub cells: Vec<XiId>,
}

/// Transport `E(start) -> E(end)`: `(∂')^{-1}` going up a `>='` relation,
/// `∂''` going up a `>=''` relation, inverses going down.
pub fn transport(e: &MixedBruhatSheaf, path: &CellPath) -> Result<RationalMatrix> {
    let p = &*e.poset;
    let first = *path.cells.first().ok_or_else(|| Error::Path("empty path".into()))?;
    let mut acc = RationalMatrix::identity(e.dims[first]);
    for w in path.cells.windows(2) {
        let (a, b) = (w[0], w[1]);
        let anodyne = p.orbit_size(a) == p.orbit_size(b);
        let step = if p.geq_prime(b, a) && anodyne {
            invert(e.compose(Order::Prime, b, a)?, p, b)?
        } else if p.geq_prime(a, b) && anodyne {
            e.compose(Order::Prime, a, b)?
        } else if p.geq_second(b, a) && anodyne {
            e.compose(Order::Second, b, a)?
        } else if p.geq_second(a, b) && anodyne {
            invert(e.compose(Order::Second, a, b)?, p, a)?
        } else if a == b {
            RationalMatrix::identity(e.dims[a])
        } else {
            return Err(Error::Path(format!(
                "{} and {} are not related by an anodyne relation",
                p.label(a),
                p.label(b)
            )));
        };
        acc = step.mul(&acc);
    }
    Ok(acc)
}

fn invert(a: RationalMatrix, p: &XiPoset, at: XiId) -> Result<RationalMatrix> {
    a.inverse().ok_or_else(|| Error::Axiom(format!("anodyne map at {} is not invertible", p.label(at))))
}

pub fn monodromy(e: &MixedBruhatSheaf, path: &CellPath) -> Result<RationalMatrix> {
    if path.cells.first() != path.cells.last() {
        return Err(Error::Path("monodromy needs a closed path".into()));
    }
    transport(e, path)
}

/// Loop in the open stratum around the wall of simple reflection `s`:
/// `W(0,C) -> W(C,C) -> W(C,F_s) -> W(C,sC) -> W(0,sC)`.
pub fn generator_loop(p: &XiPoset, s: usize) -> CellPath {
    let k = &p.complex;
    let r = p.rank();
    let chamber = k.base_face(ParabolicSubset::empty());
    let origin = k.base_face(ParabolicSubset::full(r));
    let wall = k.base_face(ParabolicSubset::from_indices(&[s]));
    let flipped = k.coset_face(ParabolicSubset::empty(), k.group.generator(s));
    let cells = vec![
        p.orbit_of(origin, chamber),
        p.orbit_of(chamber, chamber),
        p.orbit_of(chamber, wall),
        p.orbit_of(chamber, flipped),
        p.orbit_of(origin, flipped),
    ];
    CellPath { cells }
}

/// A subspace per cell, as column bases.
#[derive(Clone, Debug)]
pub struct Subsheaf {
    pub bases: Vec<RationalMatrix>,
}

impl Subsheaf {
    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(|b| b.ncols()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.bases.iter().map(|b| b.ncols()).sum()
    }
}

/// Smallest family of subspaces containing the seeds and stable under all
/// maps and under inverses of anodyne maps.
pub fn generated_sub(e: &MixedBruhatSheaf, seeds: &[(XiId, Vec<Rational>)]) -> Result<Subsheaf> {
    let p = &*e.poset;
    let mut out_edges: Vec<Vec<(XiId, RationalMatrix)>> = vec![Vec::new(); p.len()];
    for order in [Order::Prime, Order::Second] {
        for (&(m, n), a) in e.maps(order) {
            let (src, dst) = match order {
                Order::Prime => (m, n),
                Order::Second => (n, m),
            };
            out_edges[src].push((dst, a.clone()));
            if p.orbit_size(m) == p.orbit_size(n) {
                out_edges[dst].push((src, invert(a.clone(), p, m)?));
            }
        }
    }
    let mut vectors: Vec<Vec<Vec<Rational>>> = vec![Vec::new(); p.len()];
    let mut queue: Vec<(XiId, Vec<Rational>)> = seeds.to_vec();
    let independent = |vs: &[Vec<Rational>], v: &[Rational]| -> bool {
        let dense: Vec<Vec<Rational>> = vs.iter().cloned().chain(std::iter::once(v.to_vec())).collect();
        RationalMatrix::from_dense(dense.len(), v.len(), &dense).rank() == dense.len()
    };
    while let Some((m, v)) = queue.pop() {
        if v.len() != e.dims[m] {
            return Err(Error::Domain(format!("seed at {} has wrong length", p.label(m))));
        }
        if v.iter().all(|x| x.is_zero()) || !independent(&vectors[m], &v) {
            continue;
        }
        for (dst, a) in &out_edges[m] {
            queue.push((*dst, a.mul_vec(&v)));
        }
        vectors[m].push(v);
    }
    let bases = p
        .ids()
        .map(|m| {
            let vs = &vectors[m];
            let rows = vs.len();
            RationalMatrix::from_dense(rows, e.dims[m], vs).transpose()
        })
        .collect();
    Ok(Subsheaf { bases })
}

/// Semi-decision: no basis vector generates a proper nonzero subsheaf.
pub fn is_simple(e: &MixedBruhatSheaf) -> Result<bool> {
    let total = e.total_dim();
    if total == 0 {
        return Ok(false);
    }
    for m in e.poset.ids() {
        for k in 0..e.dims[m] {
            let mut v = vec![Rational::zero(); e.dims[m]];
            v[k] = Rational::one();
            if generated_sub(e, &[(m, v)])?.total_dim() < total {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
