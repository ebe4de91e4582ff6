//! Subspaces and partial flags of `F_q^n`.

use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::field::PrimeField;
use crate::error::{Error, Result};

/// Upper bound on flags enumerated for a single composition.
pub const MAX_FLAGS: usize = 1_000_000;

/// A subspace stored by its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subspace {
    pub n: usize,
    pub rows: Vec<Vec<u8>>,
}

fn rref(f: &PrimeField, mut rows: Vec<Vec<u8>>, n: usize) -> Vec<Vec<u8>> {
    let mut lead = 0;
    let mut r = 0;
    while r < rows.len() && lead < n {
        match (r..rows.len()).find(|&i| rows[i][lead] != 0) {
            None => lead += 1,
            Some(i) => {
                rows.swap(r, i);
                let inv = f.inv(rows[r][lead]);
                for x in rows[r].iter_mut() {
                    *x = f.mul(*x, inv);
                }
                for k in 0..rows.len() {
                    if k != r && rows[k][lead] != 0 {
                        let c = rows[k][lead];
                        for j in 0..n {
                            let v = f.mul(c, rows[r][j]);
                            rows[k][j] = f.sub(rows[k][j], v);
                        }
                    }
                }
                r += 1;
                lead += 1;
            }
        }
    }
    rows.truncate(r);
    rows
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { n, rows: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Subspace { n, rows: (0..n).map(|i| (0..n).map(|j| u8::from(i == j)).collect()).collect() }
    }

    pub fn span(f: &PrimeField, n: usize, rows: Vec<Vec<u8>>) -> Self {
        Subspace { n, rows: rref(f, rows, n) }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn sum(&self, f: &PrimeField, other: &Subspace) -> Subspace {
        Subspace::span(f, self.n, self.rows.iter().chain(&other.rows).cloned().collect())
    }

    pub fn contains(&self, f: &PrimeField, other: &Subspace) -> bool {
        self.sum(f, other).dim() == self.dim()
    }

    /// Orthogonal complement for the standard dot product.
    pub fn perp(&self, f: &PrimeField) -> Subspace {
        let n = self.n;
        let pivots: Vec<usize> = self.rows.iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect();
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let rows = free
            .iter()
            .map(|&c| {
                let mut v = vec![0u8; n];
                v[c] = 1;
                for (r, &pc) in self.rows.iter().zip(&pivots) {
                    v[pc] = f.sub(0, r[c]);
                }
                v
            })
            .collect();
        Subspace::span(f, n, rows)
    }

    pub fn intersect(&self, f: &PrimeField, other: &Subspace) -> Subspace {
        self.perp(f).sum(f, &other.perp(f)).perp(f)
    }

    pub fn intersection_dim(&self, f: &PrimeField, other: &Subspace) -> usize {
        self.dim() + other.dim() - self.sum(f, other).dim()
    }

    /// `g . V` for a matrix acting on column vectors.
    pub fn transform(&self, f: &PrimeField, g: &[Vec<u8>]) -> Subspace {
        let n = self.n;
        let rows = self
            .rows
            .iter()
            .map(|v| {
                (0..n)
                    .map(|i| (0..n).fold(0u8, |acc, j| f.add(acc, f.mul(g[i][j], v[j]))))
                    .collect()
            })
            .collect();
        Subspace::span(f, n, rows)
    }

    /// Echelon basis as digit strings, one per row.
    pub fn digits(&self) -> Vec<String> {
        self.rows.iter().map(|r| r.iter().map(|d| d.to_string()).collect()).collect()
    }
}

/// All subspaces of dimension `k` in `F_q^n`, by echelon pattern.
pub fn enumerate_subspaces(f: &PrimeField, n: usize, k: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    for pivots in (0..n).combinations(k) {
        let mut slots = Vec::new();
        for (r, &pc) in pivots.iter().enumerate() {
            for c in pc + 1..n {
                if !pivots.contains(&c) {
                    slots.push((r, c));
                }
            }
        }
        let total = (f.p as usize).pow(slots.len() as u32);
        for code in 0..total {
            let mut rows = vec![vec![0u8; n]; k];
            for (r, &pc) in pivots.iter().enumerate() {
                rows[r][pc] = 1;
            }
            let mut c = code;
            for &(r, col) in &slots {
                rows[r][col] = (c % f.p as usize) as u8;
                c /= f.p as usize;
            }
            out.push(Subspace { n, rows });
        }
    }
    out
}

/// A chain `V_1 < V_2 < ... < V_p = F_q^n`; the composition lists the jumps.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Flag {
    pub subspaces: Vec<Subspace>,
}

impl Flag {
    pub fn composition(&self) -> Vec<usize> {
        let mut prev = 0;
        self.subspaces
            .iter()
            .map(|v| {
                let d = v.dim() - prev;
                prev = v.dim();
                d
            })
            .collect()
    }

    /// `V_i`, with `V_0 = 0`.
    pub fn part(&self, i: usize) -> Subspace {
        if i == 0 {
            Subspace::zero(self.subspaces[0].n)
        } else {
            self.subspaces[i - 1].clone()
        }
    }

    /// Keeps only the members whose dimensions are partial sums of `coarser`.
    pub fn coarsen(&self, coarser: &[usize]) -> Flag {
        let dims: Vec<usize> = coarser.iter().scan(0, |s, &x| {
            *s += x;
            Some(*s)
        }).collect();
        Flag { subspaces: self.subspaces.iter().filter(|v| dims.contains(&v.dim())).cloned().collect() }
    }

    pub fn transform(&self, f: &PrimeField, g: &[Vec<u8>]) -> Flag {
        Flag { subspaces: self.subspaces.iter().map(|v| v.transform(f, g)).collect() }
    }
}

/// `[n]_q! / prod [a_i]_q!`, the number of flags of a composition.
pub fn flag_count(q: u64, composition: &[usize]) -> u128 {
    let qfact = |k: usize| -> u128 {
        (1..=k).map(|i| (0..i).map(|e| (q as u128).pow(e as u32)).sum::<u128>()).product()
    };
    let n: usize = composition.iter().sum();
    composition.iter().fold(qfact(n), |acc, &a| acc / qfact(a))
}

/// Flags of one composition with an index.
#[derive(Clone, Debug)]
pub struct FlagSpace {
    pub composition: Vec<usize>,
    pub flags: Vec<Flag>,
    pub index: HashMap<Flag, usize>,
}

impl FlagSpace {
    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn position(&self, flag: &Flag) -> usize {
        self.index[flag]
    }
}

pub fn enumerate_flags(f: &PrimeField, composition: &[usize]) -> Result<FlagSpace> {
    if composition.is_empty() || composition.contains(&0) {
        return Err(Error::Domain(format!("{composition:?} is not a composition")));
    }
    let n: usize = composition.iter().sum();
    let expected = flag_count(f.p as u64, composition);
    if expected > MAX_FLAGS as u128 {
        return Err(Error::Resource(format!("{expected} flags of type {composition:?} over F_{}", f.p)));
    }
    let dims: Vec<usize> = composition.iter().scan(0, |s, &x| {
        *s += x;
        Some(*s)
    }).collect();
    let by_dim: HashMap<usize, Vec<Subspace>> =
        dims.iter().map(|&d| (d, enumerate_subspaces(f, n, d))).collect();
    let mut flags = Vec::new();
    let mut chain: Vec<Subspace> = Vec::new();
    fn extend(
        f: &PrimeField,
        dims: &[usize],
        by_dim: &HashMap<usize, Vec<Subspace>>,
        chain: &mut Vec<Subspace>,
        out: &mut Vec<Flag>,
    ) {
        let k = chain.len();
        if k == dims.len() {
            out.push(Flag { subspaces: chain.clone() });
            return;
        }
        for v in &by_dim[&dims[k]] {
            if chain.last().is_none_or(|u| v.contains(f, u)) {
                chain.push(v.clone());
                extend(f, dims, by_dim, chain, out);
                chain.pop();
            }
        }
    }
    extend(f, &dims, &by_dim, &mut chain, &mut flags);
    let index = flags.iter().enumerate().map(|(i, fl)| (fl.clone(), i)).collect();
    Ok(FlagSpace { composition: composition.to_vec(), flags, index })
}

/// `m_ij = d(i,j) - d(i-1,j) - d(i,j-1) + d(i-1,j-1)` with `d(i,j) = dim(V_i ∩ V'_j)`.
pub fn relative_position(f: &PrimeField, a: &Flag, b: &Flag) -> Vec<Vec<usize>> {
    let (p, q) = (a.subspaces.len(), b.subspaces.len());
    let mut d = vec![vec![0i64; q + 1]; p + 1];
    for i in 1..=p {
        for j in 1..=q {
            d[i][j] = a.subspaces[i - 1].intersection_dim(f, &b.subspaces[j - 1]) as i64;
        }
    }
    (1..=p)
        .map(|i| (1..=q).map(|j| (d[i][j] - d[i - 1][j] - d[i][j - 1] + d[i - 1][j - 1]) as usize).collect())
        .collect()
}
