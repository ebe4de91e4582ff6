//! Point-level checks on orbits of flag pairs.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::eq::{FlagGeometry, FlagOrder};
use super::flags::relative_position;
use crate::error::Result;
use crate::sheaf::mbs2_configurations;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCheckReport {
    pub configurations: usize,
    pub anodyne_pairs: usize,
    pub failures: Vec<String>,
}

impl PointCheckReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// (i) each fiber product `O_m' ×_{O_n'} O_n` is the disjoint union of the
/// orbits in the supremum, and (ii) over anodyne `m >= n` every fiber of the
/// projection has the same size, a power of `q`.
pub fn orbit_point_checks(n: usize, q: u32) -> Result<PointCheckReport> {
    let geo = FlagGeometry::new(n, q, FlagOrder::Canonical)?;
    let p = geo.poset.clone();
    let f = geo.field;
    let mut rep = PointCheckReport::default();

    for c in mbs2_configurations(&p) {
        rep.configurations += 1;
        let (tm, tn) = (&geo.orbits[c.m_prime], &geo.orbits[c.n]);
        let pm = geo.point_projection(c.m_prime, c.n_prime);
        let pn = geo.point_projection(c.n, c.n_prime);
        let mut over: HashMap<usize, Vec<usize>> = HashMap::new();
        for (y, &img) in pn.iter().enumerate() {
            over.entry(img).or_default().push(y);
        }
        let first_space = &geo.spaces[&tm.first];
        let second_space = &geo.spaces[&tn.second];
        let mut glued: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut size = 0usize;
        let mut cells = BTreeSet::new();
        for (x, &img) in pm.iter().enumerate() {
            for &y in over.get(&img).map(|v| v.as_slice()).unwrap_or(&[]) {
                size += 1;
                let a = tm.points[x].0;
                let b = tn.points[y].1;
                glued.insert((a, b));
                let mat = relative_position(&f, &first_space.flags[a], &second_space.flags[b]);
                let target = c
                    .sup
                    .iter()
                    .copied()
                    .find(|&m| geo.orbits[m].contingency == mat);
                match target {
                    Some(m) => {
                        cells.insert(m);
                    }
                    None => rep.failures.push(format!(
                        "fiber product at ({}, {}, {}) meets a cell outside the supremum",
                        p.label(c.m_prime),
                        p.label(c.n_prime),
                        p.label(c.n)
                    )),
                }
            }
        }
        let expected: usize = c.sup.iter().map(|&m| geo.orbits[m].points.len()).sum();
        if glued.len() != size || size != expected || cells.len() != c.sup.len() {
            rep.failures.push(format!(
                "fiber product at ({}, {}, {}) has {size} points, {} distinct, expected {expected}",
                p.label(c.m_prime),
                p.label(c.n_prime),
                p.label(c.n),
                glued.len()
            ));
        }
    }

    for (m, k) in p.strict_relations() {
        if p.orbit_size(m) != p.orbit_size(k) {
            continue;
        }
        rep.anodyne_pairs += 1;
        let proj = geo.point_projection(m, k);
        let mut counts = vec![0usize; geo.orbits[k].points.len()];
        for &y in &proj {
            counts[y] += 1;
        }
        let c0 = counts[0];
        let power = (0..).map(|e| (q as usize).pow(e)).take_while(|&x| x <= c0).any(|x| x == c0);
        if counts.iter().any(|&c| c != c0) || !power {
            rep.failures.push(format!("fibers over {} -> {} are {:?}", p.label(m), p.label(k), counts));
        }
    }
    Ok(rep)
}
