//! Finite crystallographic Coxeter groups: root systems, group enumeration,
//! lengths, Bruhat order and parabolic coset representatives.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::polynomial::IntPolynomial;
use crate::rational::Rational;

/// Largest group we are willing to enumerate.
pub const MAX_GROUP_ORDER: usize = 384;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoxeterType {
    A,
    B,
    C,
    D,
    G,
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CoxeterType::A => "A",
            CoxeterType::B => "B",
            CoxeterType::C => "C",
            CoxeterType::D => "D",
            CoxeterType::G => "G",
        };
        f.write_str(s)
    }
}

impl FromStr for CoxeterType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(CoxeterType::A),
            "B" => Ok(CoxeterType::B),
            "C" => Ok(CoxeterType::C),
            "D" => Ok(CoxeterType::D),
            "G" => Ok(CoxeterType::G),
            other => Err(Error::Config(format!("unknown Coxeter type {other:?}"))),
        }
    }
}

/// Subset of the simple reflections, as a bitmask over their indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct ParabolicSubset(pub u32);

impl ParabolicSubset {
    pub fn empty() -> Self {
        ParabolicSubset(0)
    }

    pub fn full(rank: usize) -> Self {
        ParabolicSubset((1u32 << rank) - 1)
    }

    pub fn from_indices(idx: &[usize]) -> Self {
        ParabolicSubset(idx.iter().fold(0, |m, &i| m | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn with(self, i: usize) -> Self {
        ParabolicSubset(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Self {
        ParabolicSubset(self.0 & !(1 << i))
    }

    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|&i| self.contains(i)).collect()
    }

    /// All subsets of `{0, .., rank-1}`, by bitmask.
    pub fn all(rank: usize) -> impl Iterator<Item = ParabolicSubset> {
        (0..1u32 << rank).map(ParabolicSubset)
    }

    /// All subsets of `self`, by bitmask.
    pub fn subsets(self) -> Vec<ParabolicSubset> {
        (0..=self.0).filter(|m| m & !self.0 == 0).map(ParabolicSubset).collect()
    }

    /// All supersets of `self` inside `{0, .., rank-1}`.
    pub fn supersets(self, rank: usize) -> Vec<ParabolicSubset> {
        Self::all(rank).filter(|s| self.is_subset(*s)).collect()
    }
}

/// Comma separated indices; the empty set renders as the empty string.
impl fmt::Display for ParabolicSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for ParabolicSubset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Ok(ParabolicSubset::empty());
        }
        let mut idx = Vec::new();
        for part in s.split(',') {
            let i: usize = part.parse().map_err(|_| Error::Parse(format!("bad subset {s:?}")))?;
            if i >= 32 {
                return Err(Error::Parse(format!("bad subset {s:?}")));
            }
            idx.push(i);
        }
        Ok(ParabolicSubset::from_indices(&idx))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxeterDatum {
    pub type_label: CoxeterType,
    pub rank: usize,
    /// `cartan[i][j] = <alpha_i^vee, alpha_j>`
    pub cartan: Vec<Vec<i64>>,
    pub simple_roots: Vec<Vec<i64>>,
    /// Simple-root coordinates, sorted by height then reverse-lexicographically,
    /// so the simple roots come first in index order.
    pub positive_roots: Vec<Vec<i64>>,
    /// Dual basis to the simple roots, in simple-coroot coordinates.
    pub fundamental_coweights: Vec<Vec<Rational>>,
}

fn cartan_matrix(t: CoxeterType, r: usize) -> Result<Vec<Vec<i64>>> {
    let supported = matches!(
        (t, r),
        (CoxeterType::A, 1..=4) | (CoxeterType::B, 2..=3) | (CoxeterType::C, 3) | (CoxeterType::G, 2)
    );
    if !supported {
        return Err(Error::Config(format!(
            "{t}{r} is not supported (supported: A1-A4, B2, B3, C3, G2)"
        )));
    }
    let mut a = vec![vec![0i64; r]; r];
    for i in 0..r {
        a[i][i] = 2;
        if i + 1 < r {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    }
    match t {
        CoxeterType::B => a[r - 1][r - 2] = -2,
        CoxeterType::C => a[r - 2][r - 1] = -2,
        CoxeterType::G => a[0][1] = -3,
        _ => {}
    }
    Ok(a)
}

fn height(v: &[i64]) -> i64 {
    v.iter().sum()
}

impl CoxeterDatum {
    pub fn new(type_label: CoxeterType, rank: usize) -> Result<Self> {
        let cartan = cartan_matrix(type_label, rank)?;
        let simple_roots: Vec<Vec<i64>> = (0..rank)
            .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
            .collect();

        // s_i(beta) = beta - <alpha_i^vee, beta> alpha_i
        let reflect = |i: usize, beta: &[i64]| -> Vec<i64> {
            let pairing: i64 = (0..rank).map(|j| cartan[i][j] * beta[j]).sum();
            let mut out = beta.to_vec();
            out[i] -= pairing;
            out
        };
        let mut seen: HashSet<Vec<i64>> = simple_roots.iter().cloned().collect();
        let mut queue: VecDeque<Vec<i64>> = simple_roots.iter().cloned().collect();
        while let Some(beta) = queue.pop_front() {
            for i in 0..rank {
                let gamma = reflect(i, &beta);
                if gamma.iter().all(|&c| c >= 0) && seen.insert(gamma.clone()) {
                    queue.push_back(gamma);
                }
            }
        }
        let mut positive_roots: Vec<Vec<i64>> = seen.into_iter().collect();
        positive_roots.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| b.cmp(a)));

        let inv = RationalMatrix::from_ints(&cartan)
            .inverse()
            .ok_or_else(|| Error::Internal("singular Cartan matrix".into()))?;
        let fundamental_coweights = inv.to_dense();

        Ok(CoxeterDatum { type_label, rank, cartan, simple_roots, positive_roots, fundamental_coweights })
    }

    pub fn parse(type_label: &str, rank: usize) -> Result<Self> {
        Self::new(type_label.parse()?, rank)
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.type_label, self.rank)
    }

    /// Coxeter exponent `m_ij`, the order of `s_i s_j`.
    pub fn coxeter_exponent(&self, i: usize, j: usize) -> u32 {
        if i == j {
            return 1;
        }
        match self.cartan[i][j] * self.cartan[j][i] {
            0 => 2,
            1 => 3,
            2 => 4,
            3 => 6,
            p => panic!("not crystallographic: product {p}"),
        }
    }

    /// Matrix of `s_i` on simple-root coordinates (columns are images of simple roots).
    pub fn simple_reflection(&self, i: usize) -> Vec<i64> {
        let r = self.rank;
        let mut m = vec![0i64; r * r];
        for k in 0..r {
            m[k * r + k] = 1;
        }
        for j in 0..r {
            m[i * r + j] -= self.cartan[i][j];
        }
        m
    }

    /// Value of a root (simple-root coordinates) at the point
    /// `sum_{s not in I} omega_s^vee`; stays integral.
    pub fn root_value_at_face(&self, root: &[i64], face_type: ParabolicSubset) -> i64 {
        (0..self.rank).filter(|&s| !face_type.contains(s)).map(|s| root[s]).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    /// Row-major `rank x rank` action on simple-root coordinates.
    pub matrix: Vec<i64>,
    pub length: usize,
}

fn mat_mul(a: &[i64], b: &[i64], r: usize) -> Vec<i64> {
    let mut out = vec![0i64; r * r];
    for i in 0..r {
        for k in 0..r {
            let x = a[i * r + k];
            if x != 0 {
                for j in 0..r {
                    out[i * r + j] += x * b[k * r + j];
                }
            }
        }
    }
    out
}

fn apply(m: &[i64], v: &[i64], r: usize) -> Vec<i64> {
    (0..r).map(|i| (0..r).map(|j| m[i * r + j] * v[j]).sum()).collect()
}

fn count_inversions(datum: &CoxeterDatum, m: &[i64]) -> usize {
    datum
        .positive_roots
        .iter()
        .filter(|a| apply(m, a, datum.rank).iter().any(|&c| c < 0))
        .count()
}

/// All elements of W, ordered by length and then lexicographically on the matrix.
pub fn enumerate_group(datum: &CoxeterDatum) -> Result<Vec<GroupElement>> {
    let r = datum.rank;
    let gens: Vec<Vec<i64>> = (0..r).map(|i| datum.simple_reflection(i)).collect();
    let mut id = vec![0i64; r * r];
    for k in 0..r {
        id[k * r + k] = 1;
    }
    let mut seen: HashSet<Vec<i64>> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(w) = queue.pop_front() {
        for g in &gens {
            let x = mat_mul(&w, g, r);
            if seen.insert(x.clone()) {
                if seen.len() > MAX_GROUP_ORDER {
                    return Err(Error::Resource(format!("|W| exceeds {MAX_GROUP_ORDER}")));
                }
                queue.push_back(x);
            }
        }
    }
    let mut elems: Vec<GroupElement> = seen
        .into_iter()
        .map(|m| GroupElement { length: count_inversions(datum, &m), matrix: m })
        .collect();
    elems.sort_by(|a, b| a.length.cmp(&b.length).then_with(|| a.matrix.cmp(&b.matrix)));
    Ok(elems)
}

/// A Coxeter group with multiplication, inverse and root-permutation tables.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub datum: CoxeterDatum,
    pub elements: Vec<GroupElement>,
    index: HashMap<Vec<i64>, usize>,
    mult: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    /// `root_action[w][k] = (j, sign)` with `w(alpha_k) = sign * alpha_j`.
    root_action: Vec<Vec<(usize, i8)>>,
}

impl WeylGroup {
    pub fn new(datum: CoxeterDatum) -> Result<Self> {
        let elements = enumerate_group(&datum)?;
        let r = datum.rank;
        let index: HashMap<Vec<i64>, usize> =
            elements.iter().enumerate().map(|(i, e)| (e.matrix.clone(), i)).collect();
        let mult: Vec<Vec<usize>> = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&mat_mul(&a.matrix, &b.matrix, r)]).collect())
            .collect();
        let inverse = (0..elements.len())
            .map(|a| (0..elements.len()).find(|&b| mult[a][b] == 0).expect("group inverse"))
            .collect();
        let generators = (0..r).map(|i| index[&datum.simple_reflection(i)]).collect();
        let root_index: HashMap<&Vec<i64>, usize> =
            datum.positive_roots.iter().enumerate().map(|(i, a)| (a, i)).collect();
        let root_action = elements
            .iter()
            .map(|e| {
                datum
                    .positive_roots
                    .iter()
                    .map(|a| {
                        let img = apply(&e.matrix, a, r);
                        if img.iter().all(|&c| c >= 0) {
                            (root_index[&img], 1)
                        } else {
                            let neg: Vec<i64> = img.iter().map(|c| -c).collect();
                            (root_index[&neg], -1)
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(WeylGroup { datum, elements, index, mult, inverse, generators, root_action })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.datum.rank
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn generator(&self, i: usize) -> usize {
        self.generators[i]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn length(&self, w: usize) -> usize {
        self.elements[w].length
    }

    pub fn index_of(&self, matrix: &[i64]) -> Option<usize> {
        self.index.get(matrix).copied()
    }

    pub fn root_image(&self, w: usize, k: usize) -> (usize, i8) {
        self.root_action[w][k]
    }

    pub fn num_positive_roots(&self) -> usize {
        self.datum.positive_roots.len()
    }

    /// Indices `s` with `l(ws) < l(w)`.
    pub fn right_descents(&self, w: usize) -> Vec<usize> {
        (0..self.rank())
            .filter(|&s| self.length(self.mul(w, self.generators[s])) < self.length(w))
            .collect()
    }

    pub fn left_descents(&self, w: usize) -> Vec<usize> {
        (0..self.rank())
            .filter(|&s| self.length(self.mul(self.generators[s], w)) < self.length(w))
            .collect()
    }

    pub fn reduced_word(&self, mut w: usize) -> Vec<usize> {
        let mut word = Vec::new();
        while w != 0 {
            let s = self.right_descents(w)[0];
            word.push(s);
            w = self.mul(w, self.generators[s]);
        }
        word.reverse();
        word
    }

    /// Bruhat order by the subword property: `u <= w` iff `u` is the product of
    /// some subword of a reduced word for `w`.
    pub fn bruhat_leq(&self, u: usize, w: usize) -> bool {
        if self.length(u) > self.length(w) {
            return false;
        }
        let mut reach = vec![false; self.order()];
        reach[0] = true;
        let mut current = vec![0usize];
        for s in self.reduced_word(w) {
            let g = self.generators[s];
            let extra: Vec<usize> = current.iter().map(|&x| self.mul(x, g)).filter(|&y| !reach[y]).collect();
            for y in extra {
                if !reach[y] {
                    reach[y] = true;
                    current.push(y);
                }
            }
        }
        reach[u]
    }

    pub fn is_min_coset_rep(&self, w: usize, i: ParabolicSubset) -> bool {
        i.indices().iter().all(|&s| self.length(self.mul(w, self.generators[s])) > self.length(w))
    }

    /// Minimal-length representatives of `W / W_I`, in enumeration order.
    pub fn min_coset_reps(&self, i: ParabolicSubset) -> Vec<usize> {
        (0..self.order()).filter(|&w| self.is_min_coset_rep(w, i)).collect()
    }

    /// Elements of the standard parabolic subgroup `W_I`.
    pub fn parabolic_elements(&self, i: ParabolicSubset) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0usize];
        let mut k = 0;
        while k < out.len() {
            let w = out[k];
            for s in i.indices() {
                let x = self.mul(w, self.generators[s]);
                if !seen[x] {
                    seen[x] = true;
                    out.push(x);
                }
            }
            k += 1;
        }
        out.sort_unstable();
        out
    }

    /// `sum_{w in W^I} q^{l(w)}`
    pub fn poincare_poly(&self, i: ParabolicSubset) -> IntPolynomial {
        let mut c = vec![0i64; self.num_positive_roots() + 1];
        for w in self.min_coset_reps(i) {
            c[self.length(w)] += 1;
        }
        IntPolynomial::new(c)
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.order()];
        let mut classes = Vec::new();
        for w in 0..self.order() {
            if class_of[w] != usize::MAX {
                continue;
            }
            let mut cls: Vec<usize> =
                (0..self.order()).map(|x| self.mul(self.mul(x, w), self.inverse[x])).collect();
            cls.sort_unstable();
            cls.dedup();
            for &c in &cls {
                class_of[c] = classes.len();
            }
            classes.push(cls);
        }
        classes
    }

    /// The longest element.
    pub fn longest(&self) -> usize {
        self.order() - 1
    }
}

/// Convenience: `poincare_poly` straight from a datum.
pub fn poincare_poly(datum: &CoxeterDatum, i: ParabolicSubset) -> Result<IntPolynomial> {
    Ok(WeylGroup::new(datum.clone())?.poincare_poly(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(t: CoxeterType, r: usize) -> WeylGroup {
        WeylGroup::new(CoxeterDatum::new(t, r).unwrap()).unwrap()
    }

    #[test]
    fn positive_root_counts() {
        let cases = [
            (CoxeterType::A, 1, 1),
            (CoxeterType::A, 2, 3),
            (CoxeterType::A, 3, 6),
            (CoxeterType::A, 4, 10),
            (CoxeterType::B, 2, 4),
            (CoxeterType::B, 3, 9),
            (CoxeterType::C, 3, 9),
            (CoxeterType::G, 2, 6),
        ];
        for (t, r, n) in cases {
            let d = CoxeterDatum::new(t, r).unwrap();
            assert_eq!(d.positive_roots.len(), n, "{t}{r}");
            assert_eq!(&d.positive_roots[..r], &d.simple_roots[..]);
        }
    }

    #[test]
    fn group_orders() {
        let cases = [
            (CoxeterType::A, 1, 2),
            (CoxeterType::A, 2, 6),
            (CoxeterType::A, 3, 24),
            (CoxeterType::A, 4, 120),
            (CoxeterType::B, 2, 8),
            (CoxeterType::B, 3, 48),
            (CoxeterType::C, 3, 48),
            (CoxeterType::G, 2, 12),
        ];
        for (t, r, n) in cases {
            assert_eq!(group(t, r).order(), n, "{t}{r}");
        }
    }

    #[test]
    fn unsupported_types_are_config_errors() {
        assert!(matches!(CoxeterDatum::new(CoxeterType::A, 9), Err(Error::Config(_))));
        assert!(matches!(CoxeterDatum::new(CoxeterType::D, 4), Err(Error::Config(_))));
    }

    #[test]
    fn coweights_are_dual_to_simple_roots() {
        for (t, r) in [(CoxeterType::B, 3), (CoxeterType::G, 2), (CoxeterType::A, 4)] {
            let d = CoxeterDatum::new(t, r).unwrap();
            for i in 0..r {
                for k in 0..r {
                    let v = (0..r).fold(Rational::zero(), |s, j| {
                        s + &d.fundamental_coweights[i][j] * &Rational::from_int(d.cartan[j][k])
                    });
                    assert_eq!(v, Rational::from_int(i64::from(i == k)));
                }
            }
        }
    }

    #[test]
    fn a2_poincare() {
        let w = group(CoxeterType::A, 2);
        assert_eq!(w.poincare_poly(ParabolicSubset::empty()), IntPolynomial::new(vec![1, 2, 2, 1]));
        assert_eq!(w.poincare_poly(ParabolicSubset::from_indices(&[0])), IntPolynomial::new(vec![1, 1, 1]));
    }

    #[test]
    fn longest_element_length() {
        let w = group(CoxeterType::B, 3);
        assert_eq!(w.length(w.longest()), 9);
        assert_eq!(w.elements.iter().filter(|e| e.length == 9).count(), 1);
    }

    #[test]
    fn subset_rendering() {
        let s = ParabolicSubset::from_indices(&[0, 2]);
        assert_eq!(s.to_string(), "0,2");
        assert_eq!("0,2".parse::<ParabolicSubset>().unwrap(), s);
        assert_eq!("".parse::<ParabolicSubset>().unwrap(), ParabolicSubset::empty());
    }
}
