//! Sparse row-major matrices over the rationals.
//!
//! Every row keeps its nonzero entries sorted by column, so equality is
//! structural and products cost time proportional to the nonzeros touched.

use std::collections::BTreeMap;
use std::fmt;

use crate::rational::Rational;

type Row = Vec<(usize, Rational)>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Row>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|r| r.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

fn axpy(target: &Row, scale: &Rational, source: &Row) -> Row {
    // target - scale * source
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < source.len() {
        let ti = target.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let sj = source.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ti < sj {
            out.push(target[i].clone());
            i += 1;
        } else if sj < ti {
            out.push((sj, -(scale * &source[j].1)));
            j += 1;
        } else {
            let v = &target[i].1 - &(scale * &source[j].1);
            if !v.is_zero() {
                out.push((ti, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Row echelon form keyed by pivot column; each stored row has leading entry 1.
fn echelon(rows: impl IntoIterator<Item = Row>) -> BTreeMap<usize, Row> {
    let mut pivots: BTreeMap<usize, Row> = BTreeMap::new();
    for mut row in rows {
        while let Some((lead, coeff)) = row.first().cloned() {
            match pivots.get(&lead) {
                Some(p) => row = axpy(&row, &coeff, p),
                None => {
                    let inv = coeff.recip();
                    for e in row.iter_mut() {
                        e.1 = &e.1 * &inv;
                    }
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    pivots
}

fn reduce(mut pivots: BTreeMap<usize, Row>) -> BTreeMap<usize, Row> {
    let cols: Vec<usize> = pivots.keys().rev().copied().collect();
    for &c in &cols {
        let mut row = pivots.remove(&c).unwrap();
        let hits: Vec<(usize, Rational)> = row
            .iter()
            .filter(|(j, _)| *j != c && pivots.contains_key(j))
            .cloned()
            .collect();
        for (j, v) in hits {
            row = axpy(&row, &v, &pivots[&j]);
        }
        pivots.insert(c, row);
    }
    pivots
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, Rational::one())]).collect();
        RationalMatrix { rows: n, cols: n, data }
    }

    /// Accumulates `(row, col, value)` triples; repeated positions are summed.
    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Self {
        let mut acc: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); rows];
        for (i, j, v) in entries {
            assert!(i < rows && j < cols, "entry ({i},{j}) outside {rows}x{cols}");
            let slot = acc[i].entry(j).or_insert_with(Rational::zero);
            *slot += &v;
        }
        let data = acc
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        RationalMatrix { rows, cols, data }
    }

    pub fn from_dense(rows: usize, cols: usize, dense: &[Vec<Rational>]) -> Self {
        assert_eq!(dense.len(), rows);
        let data = dense
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols);
                r.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect()
            })
            .collect();
        RationalMatrix { rows, cols, data }
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let dense: Vec<Vec<Rational>> =
            rows.iter().map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect();
        Self::from_dense(rows.len(), cols, &dense)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn row(&self, i: usize) -> &[(usize, Rational)] {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        match self.data[i].binary_search_by_key(&j, |e| e.0) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.data.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (i, j, v) in self.entries() {
            out[i][j] = v.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self.data.iter().enumerate().all(|(i, r)| r.len() == 1 && r[0].0 == i && r[0].1.is_one())
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<Row> = vec![Vec::new(); self.cols];
        for (i, j, v) in self.entries() {
            data[j].push((i, v.clone()));
        }
        RationalMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let data = self.data.iter().map(|r| r.iter().map(|(j, v)| (*j, v * s)).collect()).collect();
        RationalMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        let minus_one = -Rational::one();
        let data = self.data.iter().zip(&other.data).map(|(a, b)| axpy(a, &minus_one, b)).collect();
        RationalMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sub");
        let one = Rational::one();
        let data = self.data.iter().zip(&other.data).map(|(a, b)| axpy(a, &one, b)).collect();
        RationalMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// `self * other`; panics when the inner dimensions disagree.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul: {:?} * {:?}", self.shape(), other.shape());
        let mut acc = vec![Rational::zero(); other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut seen = vec![false; other.cols];
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            for (k, a) in row {
                for (j, b) in &other.data[*k] {
                    if !seen[*j] {
                        seen[*j] = true;
                        touched.push(*j);
                    }
                    acc[*j] += &(a * b);
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for &j in &touched {
                let v = std::mem::take(&mut acc[j]);
                if !v.is_zero() {
                    out.push((j, v));
                }
                seen[j] = false;
            }
            touched.clear();
            data.push(out);
        }
        RationalMatrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        self.data
            .iter()
            .map(|r| r.iter().fold(Rational::zero(), |s, (j, a)| s + &(a * &v[*j])))
            .collect()
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut entries = Vec::new();
        for (i, j, a) in self.entries() {
            for (k, l, b) in other.entries() {
                entries.push((i * other.rows + k, j * other.cols + l, a * b));
            }
        }
        Self::from_entries(r, c, entries)
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().cloned().chain(b.iter().map(|(j, v)| (j + self.cols, v.clone()))).collect())
            .collect();
        RationalMatrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        RationalMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let entries = self
            .entries()
            .filter_map(|(i, j, v)| pos.get(&j).map(|&k| (i, k, v.clone())))
            .collect::<Vec<_>>();
        Self::from_entries(self.rows, cols.len(), entries)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let data = rows.iter().map(|&i| self.data[i].clone()).collect();
        RationalMatrix { rows: rows.len(), cols: self.cols, data }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let reduced = reduce(echelon(self.data.iter().cloned()));
        let pivots: Vec<usize> = reduced.keys().copied().collect();
        let mut data: Vec<Row> = reduced.into_values().collect();
        data.resize(self.rows, Vec::new());
        (RationalMatrix { rows: self.rows, cols: self.cols, data }, pivots)
    }

    pub fn rank(&self) -> usize {
        // Eliminating along the shorter side keeps the pivot table small.
        if self.rows <= self.cols {
            echelon(self.data.iter().cloned()).len()
        } else {
            echelon(self.transpose().data).len()
        }
    }

    /// Columns that form the first basis of the column space, in order.
    pub fn pivot_columns(&self) -> Vec<usize> {
        echelon(self.data.iter().cloned()).keys().copied().collect()
    }

    /// Some `X` with `self * X = rhs`, or `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows, "shape mismatch in solve");
        let n = self.cols;
        let aug = self.hstack(rhs);
        let reduced = reduce(echelon(aug.data));
        if reduced.keys().any(|&c| c >= n) {
            return None;
        }
        let mut entries = Vec::new();
        for (c, row) in &reduced {
            for (j, v) in row {
                if *j >= n {
                    entries.push((*c, j - n, v.clone()));
                }
            }
        }
        Some(Self::from_entries(n, rhs.cols, entries))
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols || self.rank() != self.rows {
            return None;
        }
        self.solve(&Self::identity(self.rows))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }
}
