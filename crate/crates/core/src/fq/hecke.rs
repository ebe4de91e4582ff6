//! Hecke operators on functions on full flags and the Borel-invariant subsheaf.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::eq::EqSheaf;
use super::field::PrimeField;
use super::flags::{enumerate_flags, Flag, FlagSpace};
use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::rational::Rational;
use crate::sheaf::MixedBruhatSheaf;

/// `σ_α = q_α^* q_α* - 1` on `Fun(F)`, one per simple root, full flags of `F_q^n`.
pub fn hecke_generators(n: usize, q: u32) -> Result<(FlagSpace, Vec<RationalMatrix>)> {
    if !(2..=4).contains(&n) {
        return Err(Error::Config(format!("n = {n} outside 2..=4")));
    }
    let f = PrimeField::new(q)?;
    let full = enumerate_flags(&f, &vec![1; n])?;
    let mut gens = Vec::new();
    for a in 0..n - 1 {
        let mut comp = vec![1; n - 1];
        comp[a] = 2;
        let coarse: Vec<Flag> = full.flags.iter().map(|fl| fl.coarsen(&comp)).collect();
        let mut groups: BTreeMap<&Flag, Vec<usize>> = BTreeMap::new();
        for (x, c) in coarse.iter().enumerate() {
            groups.entry(c).or_default().push(x);
        }
        let mut entries = Vec::new();
        for members in groups.values() {
            for &x in members {
                for &y in members {
                    if x != y {
                        entries.push((x, y, Rational::one()));
                    }
                }
            }
        }
        gens.push(RationalMatrix::from_entries(full.len(), full.len(), entries));
    }
    Ok((full, gens))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeReport {
    pub quadratic: bool,
    pub braid: bool,
    pub commuting: bool,
    /// Both `σ - q` and `σ + 1` are nonzero while their product vanishes.
    pub spectrum_q_minus_one: bool,
}

impl HeckeReport {
    pub fn is_ok(&self) -> bool {
        self.quadratic && self.braid && self.commuting && self.spectrum_q_minus_one
    }
}

pub fn verify_hecke(gens: &[RationalMatrix], q: u32) -> HeckeReport {
    let Some(first) = gens.first() else {
        return HeckeReport { quadratic: true, braid: true, commuting: true, spectrum_q_minus_one: true };
    };
    let id = RationalMatrix::identity(first.nrows());
    let qr = Rational::from_int(q as i64);
    let mut rep = HeckeReport { quadratic: true, braid: true, commuting: true, spectrum_q_minus_one: true };
    for s in gens {
        let plus = s.add(&id);
        let minus = s.sub(&id.scale(&qr));
        rep.quadratic &= plus.mul(&minus).is_zero();
        rep.spectrum_q_minus_one &= !plus.is_zero() && !minus.is_zero();
    }
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let (a, b) = (&gens[i], &gens[j]);
            if j == i + 1 {
                rep.braid &= a.mul(b).mul(a) == b.mul(a).mul(b);
            } else {
                rep.commuting &= a.mul(b) == b.mul(a);
            }
        }
    }
    rep
}

/// Generators of the upper triangular Borel subgroup of `GL_n(F_q)`.
fn borel_generators(f: &PrimeField, n: usize) -> Vec<Vec<Vec<u8>>> {
    let id = |n: usize| -> Vec<Vec<u8>> { (0..n).map(|i| (0..n).map(|j| u8::from(i == j)).collect()).collect() };
    let mut out = Vec::new();
    let g = f.primitive_root();
    for k in 0..n {
        let mut m = id(n);
        m[k][k] = g;
        out.push(m);
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut m = id(n);
            m[i][j] = 1;
            out.push(m);
        }
    }
    out
}

/// Borel orbits on a flag space, each sorted, ordered by first member.
pub fn borel_orbits(f: &PrimeField, space: &FlagSpace) -> Vec<Vec<usize>> {
    let n = space.composition.iter().sum();
    let gens = borel_generators(f, n);
    let mut orbit_of = vec![usize::MAX; space.len()];
    let mut orbits = Vec::new();
    for start in 0..space.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        orbit_of[start] = id;
        let mut members = vec![start];
        let mut k = 0;
        while k < members.len() {
            let fl = &space.flags[members[k]];
            for g in &gens {
                let y = space.position(&fl.transform(f, g));
                if orbit_of[y] == usize::MAX {
                    orbit_of[y] = id;
                    members.push(y);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        orbits.push(members);
    }
    orbits
}

/// Functions on each orbit pulled back from Borel-invariant functions on the
/// horizontal flag variety; the basis is one indicator per Borel orbit.
pub fn b_invariant_sub(e: &EqSheaf) -> Result<(MixedBruhatSheaf, Vec<RationalMatrix>)> {
    let geo = &e.geometry;
    let mut bases = Vec::new();
    for t in &geo.orbits {
        let space = &geo.spaces[&t.hor];
        let orbits = borel_orbits(&geo.field, space);
        let entries = orbits
            .iter()
            .enumerate()
            .flat_map(|(k, o)| o.iter().map(move |&x| (x, k, Rational::one())));
        bases.push(RationalMatrix::from_entries(space.len(), orbits.len(), entries.collect::<Vec<_>>()));
    }
    let sub = e.sheaf.restrict(&bases)?;
    Ok((sub, bases))
}
