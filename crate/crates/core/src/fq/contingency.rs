//! Type A dictionary: faces are ordered set partitions, cells are contingency
//! matrices with rows indexed by the blocks of the first face.

use crate::coxeter::{CoxeterType, ParabolicSubset};
use crate::error::{Error, Result};
use crate::faces::{FaceId, SignVector};
use crate::xi::{XiId, XiPoset};

pub type ContingencyMatrix = Vec<Vec<usize>>;

/// Block sizes of the standard face of type `t` in `A_{n-1}`.
pub fn composition_of(t: ParabolicSubset, n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut run = 1;
    for i in 0..n - 1 {
        if t.contains(i) {
            run += 1;
        } else {
            out.push(run);
            run = 1;
        }
    }
    out.push(run);
    out
}

pub fn subset_of_composition(comp: &[usize]) -> ParabolicSubset {
    let mut idx = Vec::new();
    let mut pos = 0;
    for &a in comp {
        idx.extend(pos..pos + a - 1);
        pos += a;
    }
    ParabolicSubset::from_indices(&idx)
}

fn check_type_a(p: &XiPoset) -> Result<usize> {
    if p.datum().type_label != CoxeterType::A {
        return Err(Error::Config("contingency matrices need type A".into()));
    }
    Ok(p.rank() + 1)
}

/// Root `e_a - e_b` (a < b) as the pair `(a, b)`.
fn root_pairs(p: &XiPoset) -> Vec<(usize, usize)> {
    p.datum()
        .positive_roots
        .iter()
        .map(|v| {
            let a = v.iter().position(|&c| c != 0).unwrap();
            let b = a + v.iter().filter(|&&c| c != 0).count();
            (a, b)
        })
        .collect()
}

/// Blocks of a face, in decreasing order of coordinate value.
pub fn ordered_partition(p: &XiPoset, c: FaceId) -> Result<Vec<Vec<usize>>> {
    let n = check_type_a(p)?;
    let sign = p.complex.sign(c);
    let mut above = vec![0usize; n];
    for (k, &(a, b)) in root_pairs(p).iter().enumerate() {
        match sign.0[k] {
            1 => above[b] += 1,
            -1 => above[a] += 1,
            _ => {}
        }
    }
    let mut levels: Vec<usize> = above.clone();
    levels.sort_unstable();
    levels.dedup();
    Ok(levels.iter().map(|&l| (0..n).filter(|&x| above[x] == l).collect()).collect())
}

pub fn face_of_partition(p: &XiPoset, blocks: &[Vec<usize>]) -> Result<FaceId> {
    let n = check_type_a(p)?;
    let mut block_of = vec![usize::MAX; n];
    for (i, b) in blocks.iter().enumerate() {
        for &x in b {
            block_of[x] = i;
        }
    }
    if block_of.contains(&usize::MAX) {
        return Err(Error::Domain("blocks do not cover {0..n-1}".into()));
    }
    let sign = SignVector(
        root_pairs(p)
            .iter()
            .map(|&(a, b)| match block_of[a].cmp(&block_of[b]) {
                std::cmp::Ordering::Less => 1,
                std::cmp::Ordering::Greater => -1,
                std::cmp::Ordering::Equal => 0,
            })
            .collect(),
    );
    p.complex.face_of_sign(&sign).ok_or_else(|| Error::Internal("partition is not a face".into()))
}

pub fn xi_to_contingency(p: &XiPoset, m: XiId) -> Result<ContingencyMatrix> {
    let e = p.element(m);
    let rows = ordered_partition(p, e.first)?;
    let cols = ordered_partition(p, e.second)?;
    Ok(rows
        .iter()
        .map(|b| cols.iter().map(|b2| b.iter().filter(|x| b2.contains(x)).count()).collect())
        .collect())
}

pub fn contingency_to_xi(p: &XiPoset, mat: &ContingencyMatrix) -> Result<XiId> {
    let n = check_type_a(p)?;
    let total: usize = mat.iter().flatten().sum();
    if total != n || mat.is_empty() {
        return Err(Error::Domain(format!("content {total} differs from {n}")));
    }
    let ncols = mat[0].len();
    if mat.iter().any(|r| r.len() != ncols || r.iter().sum::<usize>() == 0)
        || (0..ncols).any(|j| mat.iter().all(|r| r[j] == 0))
    {
        return Err(Error::Domain("matrix has a zero margin or is ragged".into()));
    }
    let mut rows = Vec::new();
    let mut cols: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    let mut next = 0;
    for r in mat {
        let mut block = Vec::new();
        for (j, &k) in r.iter().enumerate() {
            for _ in 0..k {
                block.push(next);
                cols[j].push(next);
                next += 1;
            }
        }
        rows.push(block);
    }
    let c = face_of_partition(p, &rows)?;
    let d = face_of_partition(p, &cols)?;
    Ok(p.orbit_of(c, d))
}

/// All matrices of nonnegative integers with content `n` and no zero row or column.
pub fn enumerate_contingency(n: usize) -> Vec<ContingencyMatrix> {
    fn compositions(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        (1..=n)
            .flat_map(|k| {
                compositions(n - k).into_iter().map(move |mut c| {
                    c.insert(0, k);
                    c
                })
            })
            .collect()
    }
    fn fill(
        rows: &[usize],
        cols: &mut Vec<usize>,
        i: usize,
        j: usize,
        left: usize,
        cur: &mut Vec<Vec<usize>>,
        out: &mut Vec<ContingencyMatrix>,
    ) {
        if i == rows.len() {
            if cols.iter().all(|&c| c == 0) {
                out.push(cur.clone());
            }
            return;
        }
        if j == cols.len() {
            if left == 0 {
                let next = if i + 1 < rows.len() { rows[i + 1] } else { 0 };
                fill(rows, cols, i + 1, 0, next, cur, out);
            }
            return;
        }
        for v in 0..=left.min(cols[j]) {
            cur[i][j] = v;
            cols[j] -= v;
            fill(rows, cols, i, j + 1, left - v, cur, out);
            cols[j] += v;
        }
        cur[i][j] = 0;
    }
    let mut out = Vec::new();
    for a in compositions(n) {
        for b in compositions(n) {
            let mut cur = vec![vec![0; b.len()]; a.len()];
            let mut cols = b.clone();
            fill(&a, &mut cols, 0, 0, a[0], &mut cur, &mut out);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions_round_trip() {
        for mask in 0..8 {
            let t = ParabolicSubset(mask);
            assert_eq!(subset_of_composition(&composition_of(t, 4)), t);
        }
        assert_eq!(composition_of(ParabolicSubset::from_indices(&[0]), 3), vec![2, 1]);
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_contingency(2).len(), 5);
        assert_eq!(enumerate_contingency(3).len(), 33);
    }
}
