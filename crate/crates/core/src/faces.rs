//! Faces of the Coxeter arrangement, their sign vectors and the Tits product.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterDatum, ParabolicSubset, WeylGroup};
use crate::error::{Error, Result};

pub type FaceId = usize;

/// Signs of the positive roots on a face, in root order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignVector(pub Vec<i8>);

impl SignVector {
    /// Sign rule of the Tits product: take `self` where nonzero, else `other`.
    pub fn compose(&self, other: &SignVector) -> SignVector {
        SignVector(self.0.iter().zip(&other.0).map(|(&a, &b)| if a != 0 { a } else { b }).collect())
    }

    /// `self` lies in the closure of the face with signs `other`.
    pub fn in_closure_of(&self, other: &SignVector) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || a == b)
    }

    pub fn zero_set(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &s)| s == 0).map(|(k, _)| k).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub face_type: ParabolicSubset,
    /// Minimal representative of the coset `w W_I`.
    pub rep: usize,
    pub sign: SignVector,
}

#[derive(Clone, Debug)]
pub struct CoxeterComplex {
    pub group: WeylGroup,
    pub faces: Vec<Face>,
    by_sign: HashMap<SignVector, FaceId>,
    coset: Vec<Vec<FaceId>>,
    action: Vec<Vec<FaceId>>,
    base: Vec<FaceId>,
}

fn sign_at(group: &WeylGroup, w: usize, face_type: ParabolicSubset) -> SignVector {
    let winv = group.inv(w);
    let roots = &group.datum.positive_roots;
    SignVector(
        (0..roots.len())
            .map(|k| {
                let (j, s) = group.root_image(winv, k);
                let v = group.datum.root_value_at_face(&roots[j], face_type);
                if v == 0 {
                    0
                } else {
                    s
                }
            })
            .collect(),
    )
}

impl CoxeterComplex {
    pub fn new(datum: CoxeterDatum) -> Result<Self> {
        let group = WeylGroup::new(datum)?;
        let r = group.rank();
        let mut faces = Vec::new();
        for t in ParabolicSubset::all(r) {
            for w in group.min_coset_reps(t) {
                faces.push(Face { face_type: t, rep: w, sign: sign_at(&group, w, t) });
            }
        }
        faces.sort_by_key(|f| (f.face_type.len(), f.rep, f.face_type));
        let by_sign: HashMap<SignVector, FaceId> =
            faces.iter().enumerate().map(|(i, f)| (f.sign.clone(), i)).collect();
        let coset: Vec<Vec<FaceId>> = ParabolicSubset::all(r)
            .map(|t| (0..group.order()).map(|w| by_sign[&sign_at(&group, w, t)]).collect())
            .collect();
        let action = (0..group.order())
            .map(|w| {
                faces
                    .iter()
                    .map(|f| coset[f.face_type.0 as usize][group.mul(w, f.rep)])
                    .collect()
            })
            .collect();
        let base = ParabolicSubset::all(r).map(|t| coset[t.0 as usize][0]).collect();
        Ok(CoxeterComplex { group, faces, by_sign, coset, action, base })
    }

    pub fn datum(&self) -> &CoxeterDatum {
        &self.group.datum
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn face_type(&self, c: FaceId) -> ParabolicSubset {
        self.faces[c].face_type
    }

    pub fn sign(&self, c: FaceId) -> &SignVector {
        &self.faces[c].sign
    }

    /// Dimension of the face, `rank - |I|`.
    pub fn face_dim(&self, c: FaceId) -> usize {
        self.rank() - self.faces[c].face_type.len()
    }

    /// The standard face `C_I^+` of the dominant chamber.
    pub fn base_face(&self, t: ParabolicSubset) -> FaceId {
        self.base[t.0 as usize]
    }

    /// The face `w C_I^+`.
    pub fn coset_face(&self, t: ParabolicSubset, w: usize) -> FaceId {
        self.coset[t.0 as usize][w]
    }

    pub fn act(&self, w: usize, c: FaceId) -> FaceId {
        self.action[w][c]
    }

    pub fn face_of_sign(&self, s: &SignVector) -> Option<FaceId> {
        self.by_sign.get(s).copied()
    }

    /// The face of type `t` containing `c` in its closure.
    pub fn contract(&self, c: FaceId, t: ParabolicSubset) -> FaceId {
        self.coset_face(t, self.faces[c].rep)
    }

    pub fn tits_product(&self, c: FaceId, d: FaceId) -> FaceId {
        let s = self.sign(c).compose(self.sign(d));
        self.face_of_sign(&s).expect("Tits product of faces is a face")
    }

    /// `c` lies in the closure of `d`.
    pub fn face_leq(&self, c: FaceId, d: FaceId) -> bool {
        self.sign(c).in_closure_of(self.sign(d))
    }

    pub fn zero_set(&self, c: FaceId) -> Vec<usize> {
        self.sign(c).zero_set()
    }

    /// Same linear span.
    pub fn associated(&self, c: FaceId, d: FaceId) -> bool {
        self.zero_set(c) == self.zero_set(d)
    }

    /// Number of roots positive on `c` and negative on `d`.
    pub fn delta_faces(&self, c: FaceId, d: FaceId) -> usize {
        self.sign(c).0.iter().zip(&self.sign(d).0).filter(|(&a, &b)| a * b < 0).count()
    }

    /// Faces adjacent to `c` inside its span: they share a codimension-one face.
    pub fn adjacent_associated(&self, c: FaceId) -> Vec<FaceId> {
        let dim = self.face_dim(c);
        if dim == 0 {
            return Vec::new();
        }
        let walls: Vec<FaceId> = (0..self.num_faces())
            .filter(|&p| self.face_dim(p) + 1 == dim && self.face_leq(p, c))
            .collect();
        let mut out: Vec<FaceId> = (0..self.num_faces())
            .filter(|&d| d != c && self.associated(c, d))
            .filter(|&d| walls.iter().any(|&p| self.face_leq(p, d)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Gallery distance between associated faces.
    pub fn face_distance(&self, c: FaceId, d: FaceId) -> Result<usize> {
        if !self.associated(c, d) {
            return Err(Error::Domain(format!("faces {c} and {d} do not span the same subspace")));
        }
        let mut dist: HashMap<FaceId, usize> = HashMap::from([(c, 0)]);
        let mut queue = VecDeque::from([c]);
        while let Some(x) = queue.pop_front() {
            if x == d {
                return Ok(dist[&x]);
            }
            let k = dist[&x];
            for y in self.adjacent_associated(x) {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(y) {
                    e.insert(k + 1);
                    queue.push_back(y);
                }
            }
        }
        Err(Error::Internal(format!("no gallery from {c} to {d}")))
    }
}
