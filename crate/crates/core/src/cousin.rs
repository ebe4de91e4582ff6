//! Cousin stalk complexes of a mixed Bruhat sheaf and the perversity checks.
//!
//! At `m ∈ Ξ(I0, J)` the term of degree `|I| - r` is `⊕ E(n)` over
//! `n ∈ Ξ(I, J)` with `n >=' m`, for every `I ⊆ I0`. The component from
//! `(I, n)` to `(I ∪ {α}, n')` is `ε · ∂'_{n,n'}` when `n'` is the contraction
//! of `n` to `I ∪ {α}`, where `ε = (-1)^{#{i ∈ I : i > α}}`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coxeter::ParabolicSubset;
use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::sheaf::MixedBruhatSheaf;
use crate::xi::{Order, StratumKind, XiId};

#[derive(Clone, Debug)]
pub struct StalkTerm {
    pub degree: i64,
    /// `(I, n, offset)` blocks in basis order.
    pub blocks: Vec<(ParabolicSubset, XiId, usize)>,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct StalkComplex {
    pub cell: XiId,
    /// Terms from degree `-r` up to `|I0| - r`.
    pub terms: Vec<StalkTerm>,
    /// `differentials[k]` maps `terms[k]` to `terms[k + 1]`.
    pub differentials: Vec<RationalMatrix>,
}

impl StalkComplex {
    pub fn lowest_degree(&self) -> i64 {
        self.terms.first().map_or(0, |t| t.degree)
    }

    pub fn squares_to_zero(&self) -> bool {
        self.differentials.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    /// `(degree, dim H^degree)` for every degree with a term.
    pub fn cohomology(&self) -> Vec<(i64, usize)> {
        let ranks: Vec<usize> = self.differentials.iter().map(RationalMatrix::rank).collect();
        self.terms
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let out = ranks.get(k).copied().unwrap_or(0);
                let inc = if k > 0 { ranks[k - 1] } else { 0 };
                (t.degree, t.dim - out - inc)
            })
            .collect()
    }

    pub fn euler_terms(&self) -> i64 {
        self.terms.iter().map(|t| sign(t.degree) * t.dim as i64).sum()
    }
}

fn sign(d: i64) -> i64 {
    if d.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub fn stalk_complex(e: &MixedBruhatSheaf, m: XiId) -> Result<StalkComplex> {
    let p = &*e.poset;
    let r = p.rank() as i64;
    let (top, second_type) = p.types(m);
    let mut terms: Vec<StalkTerm> = (0..=top.len())
        .map(|k| StalkTerm { degree: k as i64 - r, blocks: Vec::new(), dim: 0 })
        .collect();
    for i in top.subsets() {
        for &n in p.of_type(i, second_type) {
            if p.contract_first(n, top) == Some(m) {
                let t = &mut terms[i.len()];
                t.blocks.push((i, n, t.dim));
                t.dim += e.dims[n];
            }
        }
    }
    let mut differentials = Vec::new();
    for k in 0..top.len() {
        let (src, dst) = (&terms[k], &terms[k + 1]);
        let position: BTreeMap<(ParabolicSubset, XiId), usize> =
            dst.blocks.iter().map(|&(i, n, off)| ((i, n), off)).collect();
        let mut entries = Vec::new();
        for &(i, n, off) in &src.blocks {
            for alpha in top.indices() {
                if i.contains(alpha) {
                    continue;
                }
                let bigger = i.with(alpha);
                let target = p
                    .contract_first(n, bigger)
                    .ok_or_else(|| Error::Internal(format!("{} does not contract to {{{bigger}}}", p.label(n))))?;
                let off2 = position[&(bigger, target)];
                let eps = sign(i.indices().iter().filter(|&&x| x > alpha).count() as i64);
                let map = e.cover_map(Order::Prime, n, target)?;
                for (row, col, v) in map.entries() {
                    let v = if eps < 0 { -v } else { v.clone() };
                    entries.push((off2 + row, off + col, v));
                }
            }
        }
        differentials.push(RationalMatrix::from_entries(dst.dim, src.dim, entries));
    }
    let c = StalkComplex { cell: m, terms, differentials };
    if !c.squares_to_zero() {
        return Err(Error::Axiom(format!("d² ≠ 0 at {}", p.label(m))));
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StalkEntry {
    pub cell: String,
    pub degree: i64,
    pub cohomology: usize,
    pub stratum_dim: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerversityReport {
    pub entries: Vec<StalkEntry>,
    /// Cells where the complex could not be built (`d² ≠ 0` or missing maps).
    pub errors: Vec<String>,
}

impl PerversityReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty() && self.entries.iter().all(|x| x.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &StalkEntry> {
        self.entries.iter().filter(|x| !x.pass)
    }
}

/// Stalk cohomology of every cell, in cell order.
pub fn all_cohomology(e: &MixedBruhatSheaf) -> Vec<Result<Vec<(i64, usize)>>> {
    e.poset
        .ids()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&m| stalk_complex(e, m).map(|c| c.cohomology()))
        .collect()
}

/// `H^d ≠ 0` at `m` forces the stratum of `m` to have dimension `<= -d`.
pub fn support_check(e: &MixedBruhatSheaf) -> PerversityReport {
    let p = &*e.poset;
    let mut rep = PerversityReport::default();
    for (m, h) in p.ids().zip(all_cohomology(e)) {
        match h {
            Err(err) => rep.errors.push(format!("{}: {err}", p.label(m))),
            Ok(h) => {
                let dim = p.flat(m).dim;
                for (degree, cohomology) in h {
                    rep.entries.push(StalkEntry {
                        cell: p.label(m),
                        degree,
                        cohomology,
                        stratum_dim: dim,
                        pass: cohomology == 0 || dim as i64 <= -degree,
                    });
                }
            }
        }
    }
    rep
}

/// The support check applied to the dual sheaf.
pub fn coperversity_check(e: &MixedBruhatSheaf) -> PerversityReport {
    support_check(&e.dual())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructibilityReport {
    pub classes: usize,
    pub failures: Vec<String>,
}

impl ConstructibilityReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Graded stalk cohomology is constant on each class of cells sharing a flat orbit.
pub fn constructibility_check(e: &MixedBruhatSheaf) -> ConstructibilityReport {
    let p = &*e.poset;
    let all = all_cohomology(e);
    let mut rep = ConstructibilityReport::default();
    for class in p.stratum_classes(StratumKind::Flat) {
        rep.classes += 1;
        let profiles: Vec<Option<Vec<usize>>> = class
            .iter()
            .map(|&m| {
                all[m].as_ref().ok().map(|h| {
                    let mut v = vec![0; p.rank() + 1];
                    for &(d, x) in h {
                        v[(d + p.rank() as i64) as usize] = x;
                    }
                    v
                })
            })
            .collect();
        if profiles.iter().any(|x| x.is_none() || *x != profiles[0]) {
            let shown: Vec<String> = class
                .iter()
                .zip(&profiles)
                .map(|(&m, h)| format!("{} {:?}", p.label(m), h))
                .collect();
            rep.failures.push(shown.join(", "));
        }
    }
    rep
}

/// Replaces the first anodyne cover map of `order` by zero; used to exercise the checks.
pub fn corrupt_anodyne(e: &MixedBruhatSheaf, order: Order) -> Option<MixedBruhatSheaf> {
    let p = &*e.poset;
    let mut out = e.clone();
    let maps = match order {
        Order::Prime => &mut out.dprime,
        Order::Second => &mut out.dsecond,
    };
    let key = *maps
        .iter()
        .find(|&(&(m, n), a)| p.orbit_size(m) == p.orbit_size(n) && !a.is_zero())?
        .0;
    let (r, c) = maps[&key].shape();
    maps.insert(key, RationalMatrix::zeros(r, c));
    Some(out)
}
