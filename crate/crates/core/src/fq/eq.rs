//! The sheaf `E_q` of functions on orbits of `GL_n(F_q)` on pairs of flags,
//! pulled back from the horizontal flag variety.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::contingency::{composition_of, contingency_to_xi, xi_to_contingency, ContingencyMatrix};
use super::field::PrimeField;
use super::flags::{enumerate_flags, relative_position, Flag, FlagSpace, Subspace};
use crate::coxeter::{CoxeterDatum, CoxeterType, ParabolicSubset};
use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::rational::Rational;
use crate::sheaf::MixedBruhatSheaf;
use crate::xi::{Order, XiId, XiPoset};

/// Largest number of flag pairs we are willing to classify.
pub const MAX_FLAG_PAIRS: usize = 10_000_000;

/// Points of one orbit as pairs of flag indices, with the horizontal flag of each.
#[derive(Clone, Debug)]
pub struct OrbitTable {
    pub contingency: ContingencyMatrix,
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub hor: Vec<usize>,
    pub points: Vec<(usize, usize)>,
    pub index: HashMap<(usize, usize), usize>,
    /// Horizontal flag (index in the `hor` flag space) of each point.
    pub r_prime: Vec<usize>,
}

/// All flag spaces of `F_q^n` and the orbit decomposition of pairs.
#[derive(Clone, Debug)]
pub struct FlagGeometry {
    pub n: usize,
    pub field: PrimeField,
    pub poset: Arc<XiPoset>,
    pub spaces: BTreeMap<Vec<usize>, FlagSpace>,
    pub orbits: Vec<OrbitTable>,
}

/// Flag order used when enumerating points; results must not depend on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlagOrder {
    Canonical,
    Reversed,
}

/// Common refinement `V_{i-1} + (V_i ∩ V'_j)`, `(i, j)` in row-major order.
pub fn hor_flag(f: &PrimeField, a: &Flag, b: &Flag) -> Flag {
    let mut subspaces: Vec<Subspace> = Vec::new();
    for i in 1..=a.subspaces.len() {
        let (prev, cur) = (a.part(i - 1), a.part(i));
        for j in 1..=b.subspaces.len() {
            let v = prev.sum(f, &cur.intersect(f, &b.part(j)));
            if subspaces.last().map_or(0, Subspace::dim) < v.dim() {
                subspaces.push(v);
            }
        }
    }
    Flag { subspaces }
}

impl FlagGeometry {
    pub fn new(n: usize, q: u32, order: FlagOrder) -> Result<Self> {
        if !(2..=4).contains(&n) {
            return Err(Error::Config(format!("n = {n} outside 2..=4")));
        }
        let field = PrimeField::new(q)?;
        let poset = Arc::new(XiPoset::new(CoxeterDatum::new(CoxeterType::A, n - 1)?)?);
        let mut spaces = BTreeMap::new();
        let mut total = 0usize;
        for t in ParabolicSubset::all(n - 1) {
            let comp = composition_of(t, n);
            let mut space = enumerate_flags(&field, &comp)?;
            if order == FlagOrder::Reversed {
                space.flags.reverse();
                space.index = space.flags.iter().enumerate().map(|(i, fl)| (fl.clone(), i)).collect();
            }
            total += space.len();
            spaces.insert(comp, space);
        }
        if total.saturating_mul(total) > MAX_FLAG_PAIRS {
            return Err(Error::Resource(format!("{} flag pairs over F_{q}", total * total)));
        }

        let mut orbits: Vec<OrbitTable> = poset
            .ids()
            .map(|m| -> Result<OrbitTable> {
                let (i, j) = poset.types(m);
                Ok(OrbitTable {
                    contingency: xi_to_contingency(&poset, m)?,
                    first: composition_of(i, n),
                    second: composition_of(j, n),
                    hor: composition_of(poset.hor(m), n),
                    points: Vec::new(),
                    index: HashMap::new(),
                    r_prime: Vec::new(),
                })
            })
            .collect::<Result<_>>()?;
        let mut cell_of: HashMap<ContingencyMatrix, XiId> = HashMap::new();
        for a in spaces.values() {
            for b in spaces.values() {
                for (x, fa) in a.flags.iter().enumerate() {
                    for (y, fb) in b.flags.iter().enumerate() {
                        let mat = relative_position(&field, fa, fb);
                        let m = match cell_of.get(&mat) {
                            Some(&m) => m,
                            None => {
                                let m = contingency_to_xi(&poset, &mat)?;
                                cell_of.insert(mat, m);
                                m
                            }
                        };
                        let table = &mut orbits[m];
                        let h = hor_flag(&field, fa, fb);
                        let hs = &spaces[&table.hor];
                        let hk = *hs
                            .index
                            .get(&h)
                            .ok_or_else(|| Error::Internal("horizontal flag has the wrong type".into()))?;
                        table.index.insert((x, y), table.points.len());
                        table.points.push((x, y));
                        table.r_prime.push(hk);
                    }
                }
            }
        }
        Ok(FlagGeometry { n, field, poset, spaces, orbits })
    }

    pub fn space(&self, comp: &[usize]) -> &FlagSpace {
        &self.spaces[comp]
    }

    /// Index map of `coarsen` between two flag spaces.
    pub fn coarsening(&self, from: &[usize], to: &[usize]) -> Vec<usize> {
        let target = &self.spaces[to];
        self.spaces[from].flags.iter().map(|fl| target.position(&fl.coarsen(to))).collect()
    }

    /// Projection of orbit points for `m >= n`.
    pub fn point_projection(&self, m: XiId, n: XiId) -> Vec<usize> {
        let (a, b) = (&self.orbits[m], &self.orbits[n]);
        let c1 = self.coarsening(&a.first, &b.first);
        let c2 = self.coarsening(&a.second, &b.second);
        a.points.iter().map(|&(x, y)| b.index[&(c1[x], c2[y])]).collect()
    }
}

/// `E_q` together with the point tables it was built from.
#[derive(Clone, Debug)]
pub struct EqSheaf {
    pub q: u32,
    pub geometry: FlagGeometry,
    pub sheaf: MixedBruhatSheaf,
}

fn fibers(r_prime: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); size];
    for (o, &h) in r_prime.iter().enumerate() {
        out[h].push(o);
    }
    out
}

pub fn build_eq(n: usize, q: u32) -> Result<EqSheaf> {
    build_eq_ordered(n, q, FlagOrder::Canonical)
}

pub fn build_eq_ordered(n: usize, q: u32, order: FlagOrder) -> Result<EqSheaf> {
    let geo = FlagGeometry::new(n, q, order)?;
    let p = geo.poset.clone();
    let dims: Vec<usize> = geo.orbits.iter().map(|t| geo.spaces[&t.hor].len()).collect();
    let mut sheaf = MixedBruhatSheaf { poset: p.clone(), dims: dims.clone(), dprime: BTreeMap::new(), dsecond: BTreeMap::new() };

    for (m, k) in p.covers(Order::Second) {
        // Pullback: read off the horizontal square and check it is well defined.
        let proj = geo.point_projection(m, k);
        let (tm, tk) = (&geo.orbits[m], &geo.orbits[k]);
        let mut image: Vec<Option<usize>> = vec![None; dims[m]];
        for (o, &o2) in proj.iter().enumerate() {
            let (h, h2) = (tm.r_prime[o], tk.r_prime[o2]);
            match image[h] {
                None => image[h] = Some(h2),
                Some(x) if x == h2 => {}
                Some(_) => return Err(Error::Internal("horizontal square does not commute".into())),
            }
        }
        let entries = image.iter().enumerate().map(|(h, h2)| (h, h2.expect("r' is onto"), Rational::one()));
        sheaf.dsecond.insert((m, k), RationalMatrix::from_entries(dims[m], dims[k], entries));
    }

    for (m, k) in p.covers(Order::Prime) {
        // Pushforward of each pulled-back basis function, read back on the target.
        let proj = geo.point_projection(m, k);
        let (tm, tk) = (&geo.orbits[m], &geo.orbits[k]);
        let target_fibers = fibers(&tk.r_prime, dims[k]);
        let mut entries = Vec::new();
        for (h, src) in fibers(&tm.r_prime, dims[m]).iter().enumerate() {
            let mut counts: HashMap<usize, i64> = HashMap::new();
            for &o in src {
                *counts.entry(proj[o]).or_default() += 1;
            }
            let mut touched: Vec<usize> = counts.keys().map(|&o2| tk.r_prime[o2]).collect();
            touched.sort_unstable();
            touched.dedup();
            for h2 in touched {
                let vals: Vec<i64> = target_fibers[h2].iter().map(|o2| counts.get(o2).copied().unwrap_or(0)).collect();
                if vals.iter().any(|&v| v != vals[0]) {
                    return Err(Error::Internal("pushforward is not a pulled-back function".into()));
                }
                entries.push((h2, h, Rational::from_int(vals[0])));
            }
        }
        sheaf.dprime.insert((m, k), RationalMatrix::from_entries(dims[k], dims[m], entries));
    }
    Ok(EqSheaf { q, geometry: geo, sheaf })
}

/// Induction/restriction data on partial flag varieties: `Fun(F_I)` with
/// `(q_IJ)_*` and `q_IJ^*` for `I ⊂ J`, built straight from the flags.
#[derive(Clone, Debug)]
pub struct InductionCube {
    pub spaces: BTreeMap<ParabolicSubset, usize>,
    pub pull: BTreeMap<(ParabolicSubset, ParabolicSubset), RationalMatrix>,
    pub push: BTreeMap<(ParabolicSubset, ParabolicSubset), RationalMatrix>,
}

pub fn induction_cube(geo: &FlagGeometry) -> InductionCube {
    let n = geo.n;
    let r = n - 1;
    let mut spaces = BTreeMap::new();
    let mut pull = BTreeMap::new();
    let mut push = BTreeMap::new();
    for i in ParabolicSubset::all(r) {
        let ci = composition_of(i, n);
        spaces.insert(i, geo.spaces[&ci].len());
        for j in i.supersets(r) {
            if i == j {
                continue;
            }
            let cj = composition_of(j, n);
            let map = geo.coarsening(&ci, &cj);
            let (di, dj) = (map.len(), geo.spaces[&cj].len());
            pull.insert((i, j), RationalMatrix::from_entries(di, dj, map.iter().enumerate().map(|(x, &y)| (x, y, Rational::one()))));
            push.insert((i, j), RationalMatrix::from_entries(dj, di, map.iter().enumerate().map(|(x, &y)| (y, x, Rational::one()))));
        }
    }
    InductionCube { spaces, pull, push }
}

/// Orbit sizes `|O_m(F_q)|` in cell order.
pub fn orbit_counts(n: usize, q: u32) -> Result<Vec<usize>> {
    Ok(FlagGeometry::new(n, q, FlagOrder::Canonical)?.orbits.iter().map(|t| t.points.len()).collect())
}

/// Differences between the bicube of `E_q` and the induction cube, with `Q_I`
/// identified with `Fun(F_I)` through the horizontal flag.
pub fn bicube_mismatches(e: &EqSheaf) -> Result<Vec<String>> {
    let b = crate::sheaf::bicube(&e.sheaf)?;
    let cube = induction_cube(&e.geometry);
    let mut out = Vec::new();
    for (i, d) in &cube.spaces {
        if b.spaces[i] != *d {
            out.push(format!("Q_{{{i}}} has dim {} instead of {d}", b.spaces[i]));
        }
    }
    for (key, m) in &cube.pull {
        if b.u[key] != *m {
            out.push(format!("u_{{{}}},{{{}}} differs from the pullback", key.0, key.1));
        }
    }
    for (key, m) in &cube.push {
        if b.v[key] != *m {
            out.push(format!("v_{{{}}},{{{}}} differs from the pushforward", key.0, key.1));
        }
    }
    Ok(out)
}
