//! Rational representations of W given by matrices of the simple reflections.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterType, WeylGroup};
use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct WRepresentation {
    pub name: String,
    pub dim: usize,
    pub generators: Vec<RationalMatrix>,
}

impl WRepresentation {
    pub fn new(name: impl Into<String>, dim: usize, generators: Vec<RationalMatrix>) -> Self {
        WRepresentation { name: name.into(), dim, generators }
    }

    /// `s_i^2 = 1` and `(s_i s_j)^{m_ij} = 1`.
    pub fn satisfies_coxeter_relations(&self, group: &WeylGroup) -> bool {
        let r = group.rank();
        if self.generators.len() != r {
            return false;
        }
        (0..r).all(|i| {
            (0..r).all(|j| {
                let m = group.datum.coxeter_exponent(i, j);
                self.generators[i].mul(&self.generators[j]).pow(m).is_identity()
            })
        })
    }

    /// Matrices of every group element, in enumeration order.
    pub fn matrices(&self, group: &WeylGroup) -> Vec<RationalMatrix> {
        (0..group.order())
            .map(|w| {
                group
                    .reduced_word(w)
                    .iter()
                    .fold(RationalMatrix::identity(self.dim), |acc, &s| acc.mul(&self.generators[s]))
            })
            .collect()
    }

    /// Trace of every group element, in enumeration order.
    pub fn character(&self, group: &WeylGroup) -> Vec<Rational> {
        self.matrices(group)
            .iter()
            .map(|a| (0..self.dim).fold(Rational::zero(), |s, i| s + a.get(i, i)))
            .collect()
    }

    pub fn tensor(&self, other: &WRepresentation, name: impl Into<String>) -> WRepresentation {
        let gens = self.generators.iter().zip(&other.generators).map(|(a, b)| a.kron(b)).collect();
        WRepresentation::new(name, self.dim * other.dim, gens)
    }
}

/// Character values on conjugacy classes, classes in order of first element.
pub fn class_character(group: &WeylGroup, chi: &[Rational]) -> Vec<Rational> {
    group.conjugacy_classes().iter().map(|c| chi[c[0]].clone()).collect()
}

/// `(1/|W|) sum_w chi(w) psi(w)` for real characters.
pub fn character_inner(chi: &[Rational], psi: &[Rational]) -> Rational {
    let s = chi.iter().zip(psi).fold(Rational::zero(), |acc, (a, b)| acc + a * b);
    s / Rational::from_int(chi.len() as i64)
}

fn linear(name: String, signs: &[i64]) -> WRepresentation {
    let gens = signs.iter().map(|&e| RationalMatrix::from_ints(&[vec![e]])).collect();
    WRepresentation::new(name, 1, gens)
}

pub fn trivial(group: &WeylGroup) -> WRepresentation {
    linear("trivial".into(), &vec![1; group.rank()])
}

pub fn sign(group: &WeylGroup) -> WRepresentation {
    linear("sign".into(), &vec![-1; group.rank()])
}

/// The action on the root lattice in simple-root coordinates.
pub fn reflection(group: &WeylGroup) -> WRepresentation {
    let r = group.rank();
    let gens = (0..r)
        .map(|i| {
            let m = group.datum.simple_reflection(i);
            let rows: Vec<Vec<i64>> = m.chunks(r).map(|c| c.to_vec()).collect();
            RationalMatrix::from_ints(&rows)
        })
        .collect();
    WRepresentation::new("reflection", r, gens)
}

/// One-dimensional characters other than trivial and sign: sign patterns
/// that agree on simple reflections joined by an odd Coxeter exponent.
pub fn mixed_linear_characters(group: &WeylGroup) -> Vec<WRepresentation> {
    let r = group.rank();
    let mut out = Vec::new();
    for pattern in (0..r).map(|_| [1i64, -1]).multi_cartesian_product() {
        if pattern.iter().all_equal() {
            continue;
        }
        let ok = (0..r).all(|i| {
            (0..r).all(|j| group.datum.coxeter_exponent(i, j).is_multiple_of(2) || pattern[i] == pattern[j])
        });
        if ok {
            let tag: String = pattern.iter().map(|&e| if e > 0 { '+' } else { '-' }).collect();
            out.push(linear(format!("linear{tag}"), &pattern));
        }
    }
    out
}

/// Specht module of a partition of `rank + 1`, in the standard polytabloid basis.
pub fn specht(group: &WeylGroup, shape: &[usize]) -> Result<WRepresentation> {
    let datum = &group.datum;
    let n = datum.rank + 1;
    if datum.type_label != CoxeterType::A {
        return Err(Error::Config("Specht modules are defined for type A only".into()));
    }
    if shape.iter().sum::<usize>() != n || shape.windows(2).any(|w| w[0] < w[1]) || shape.contains(&0) {
        return Err(Error::Domain(format!("{shape:?} is not a partition of {n}")));
    }
    // A tabloid is the row index of each entry.
    let tabloids: Vec<Vec<usize>> = {
        let mut all = Vec::new();
        let mut row_of = vec![0usize; n];
        fn fill(k: usize, free: &mut Vec<usize>, row_of: &mut Vec<usize>, all: &mut Vec<Vec<usize>>) {
            if k == row_of.len() {
                all.push(row_of.clone());
                return;
            }
            for r in 0..free.len() {
                if free[r] > 0 {
                    free[r] -= 1;
                    row_of[k] = r;
                    fill(k + 1, free, row_of, all);
                    free[r] += 1;
                }
            }
        }
        fill(0, &mut shape.to_vec(), &mut row_of, &mut all);
        all
    };
    let tabloid_index: HashMap<Vec<usize>, usize> =
        tabloids.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();

    // Standard tableaux as row-major entry lists.
    let cells: Vec<(usize, usize)> =
        shape.iter().enumerate().flat_map(|(r, &len)| (0..len).map(move |c| (r, c))).collect();
    let standard: Vec<Vec<usize>> = (0..n)
        .permutations(n)
        .filter(|perm| {
            let at: HashMap<(usize, usize), usize> = cells.iter().copied().zip(perm.iter().copied()).collect();
            cells.iter().all(|&(r, c)| {
                let v = at[&(r, c)];
                at.get(&(r, c + 1)).is_none_or(|&x| x > v) && at.get(&(r + 1, c)).is_none_or(|&x| x > v)
            })
        })
        .collect();

    let polytabloid = |entries: &[usize]| -> Vec<Rational> {
        let at: HashMap<(usize, usize), usize> = cells.iter().copied().zip(entries.iter().copied()).collect();
        let ncols = shape[0];
        let columns: Vec<Vec<(usize, usize)>> =
            (0..ncols).map(|c| cells.iter().copied().filter(|&(_, cc)| cc == c).collect()).collect();
        let mut vec = vec![Rational::zero(); tabloids.len()];
        let perms: Vec<Vec<Vec<usize>>> =
            columns.iter().map(|col| (0..col.len()).permutations(col.len()).collect()).collect();
        for choice in perms.iter().map(|p| p.iter()).multi_cartesian_product() {
            let mut row_of = vec![0usize; n];
            let mut sgn = 1i64;
            for (col, perm) in columns.iter().zip(&choice) {
                sgn *= perm_sign(perm);
                for (k, &(r, c)) in col.iter().enumerate() {
                    let target = col[perm[k]];
                    row_of[at[&(r, c)]] = target.0;
                }
            }
            vec[tabloid_index[&row_of]] += &Rational::from_int(sgn);
        }
        vec
    };
    let basis_cols: Vec<Vec<Rational>> = standard.iter().map(|t| polytabloid(t)).collect();
    let dim = basis_cols.len();
    let basis = RationalMatrix::from_dense(dim, tabloids.len(), &basis_cols).transpose();
    let mut gens = Vec::new();
    for i in 0..datum.rank {
        let images: Vec<Vec<Rational>> = standard
            .iter()
            .map(|t| {
                let swapped: Vec<usize> = t
                    .iter()
                    .map(|&x| {
                        if x == i {
                            i + 1
                        } else if x == i + 1 {
                            i
                        } else {
                            x
                        }
                    })
                    .collect();
                polytabloid(&swapped)
            })
            .collect();
        let rhs = RationalMatrix::from_dense(dim, tabloids.len(), &images).transpose();
        let x = basis.solve(&rhs).ok_or_else(|| Error::Internal("polytabloid straightening failed".into()))?;
        gens.push(x);
    }
    let name = format!("specht({})", shape.iter().map(|x| x.to_string()).join(","));
    Ok(WRepresentation::new(name, dim, gens))
}

fn perm_sign(p: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            prefix.push(k);
            go(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Named representations: trivial, sign, reflection, reflection twisted by
/// sign and by each mixed linear character, the mixed linear characters
/// themselves, and Specht modules in type A.
pub fn catalog(group: &WeylGroup) -> Vec<WRepresentation> {
    let mut out = vec![trivial(group), sign(group), reflection(group)];
    out.push(reflection(group).tensor(&sign(group), "reflection-sign"));
    for lin in mixed_linear_characters(group) {
        let twisted = reflection(group).tensor(&lin, format!("reflection-{}", lin.name));
        out.push(lin);
        out.push(twisted);
    }
    if group.datum.type_label == CoxeterType::A {
        for shape in partitions(group.rank() + 1) {
            out.push(specht(group, &shape).expect("valid partition"));
        }
    }
    out
}

pub fn lookup(group: &WeylGroup, name: &str) -> Result<WRepresentation> {
    catalog(group)
        .into_iter()
        .find(|v| v.name == name)
        .ok_or_else(|| Error::Config(format!("no representation named {name:?} for {}", group.datum.name())))
}

/// Pairwise non-isomorphic irreducibles from the catalog, and whether they
/// exhaust the group (sum of squared dimensions equals `|W|`).
pub fn irreducibles(group: &WeylGroup) -> (Vec<WRepresentation>, bool) {
    let mut seen: BTreeMap<Vec<Rational>, ()> = BTreeMap::new();
    let mut out = Vec::new();
    for v in catalog(group) {
        let chi = v.character(group);
        if !character_inner(&chi, &chi).is_one() || seen.contains_key(&chi) {
            continue;
        }
        seen.insert(chi, ());
        out.push(v);
    }
    let total: usize = out.iter().map(|v| v.dim * v.dim).sum();
    let complete = total == group.order();
    (out, complete)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharacterRow {
    pub name: String,
    pub values: Vec<Rational>,
}
