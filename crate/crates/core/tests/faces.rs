use mbs_core::coxeter::{CoxeterDatum, CoxeterType, ParabolicSubset};
use mbs_core::faces::{CoxeterComplex, SignVector};
use mbs_core::Rational;
use proptest::prelude::*;

fn complex(t: CoxeterType, r: usize) -> CoxeterComplex {
    CoxeterComplex::new(CoxeterDatum::new(t, r).unwrap()).unwrap()
}

fn small_types() -> Vec<(CoxeterType, usize)> {
    use CoxeterType::*;
    vec![(A, 1), (A, 2), (A, 3), (B, 2), (B, 3), (C, 3), (G, 2)]
}

/// Values of every positive root at the interior point `w · Σ_{s ∉ I} ω_s^∨`,
/// paired through the Cartan matrix in coroot coordinates.
fn root_values(k: &CoxeterComplex, c: usize) -> Vec<Rational> {
    let d = k.datum();
    let r = d.rank;
    let face = &k.faces[c];
    let winv = &k.group.elements[k.group.inv(face.rep)].matrix;
    let point: Vec<Rational> = (0..r)
        .map(|i| {
            (0..r)
                .filter(|&s| !face.face_type.contains(s))
                .fold(Rational::zero(), |acc, s| acc + d.fundamental_coweights[s][i].clone())
        })
        .collect();
    d.positive_roots
        .iter()
        .map(|root| {
            let moved: Vec<i64> = (0..r).map(|i| (0..r).map(|j| winv[i * r + j] * root[j]).sum()).collect();
            let mut total = Rational::zero();
            for (i, ci) in point.iter().enumerate() {
                for (j, &aj) in moved.iter().enumerate() {
                    total += &(ci.clone() * Rational::from_int(aj * d.cartan[i][j]));
                }
            }
            total
        })
        .collect()
}

fn sign_of(x: &Rational) -> i8 {
    x.signum() as i8
}

#[test]
fn face_counts() {
    for (t, r) in small_types() {
        let k = complex(t, r);
        let expected: usize = ParabolicSubset::all(r).map(|i| k.group.min_coset_reps(i).len()).sum();
        assert_eq!(k.num_faces(), expected);
    }
    assert_eq!(complex(CoxeterType::A, 1).num_faces(), 3);
    assert_eq!(complex(CoxeterType::A, 2).num_faces(), 13);
}

#[test]
fn sign_vectors_are_realized_by_interior_points() {
    for (t, r) in small_types() {
        let k = complex(t, r);
        for c in 0..k.num_faces() {
            let signs: Vec<i8> = root_values(&k, c).iter().map(sign_of).collect();
            assert_eq!(&SignVector(signs), k.sign(c), "{t}{r} face {c}");
        }
    }
}

/// `C ∘ D` is the face containing `x_C + ε x_D` for small `ε > 0`.
#[test]
fn tits_product_matches_perturbed_points() {
    for (t, r) in small_types() {
        let k = complex(t, r);
        let values: Vec<Vec<Rational>> = (0..k.num_faces()).map(|c| root_values(&k, c)).collect();
        let eps = Rational::new(1, 1000);
        for c in 0..k.num_faces() {
            for d in 0..k.num_faces() {
                let signs: Vec<i8> = values[c]
                    .iter()
                    .zip(&values[d])
                    .map(|(a, b)| sign_of(&(a.clone() + eps.clone() * b.clone())))
                    .collect();
                assert_eq!(k.face_of_sign(&SignVector(signs)), Some(k.tits_product(c, d)), "{t}{r} {c} {d}");
            }
        }
    }
}

#[test]
fn tits_product_laws() {
    for (t, r) in small_types() {
        let k = complex(t, r);
        let n = k.num_faces();
        let origin = k.base_face(ParabolicSubset::full(r));
        for c in 0..n {
            assert_eq!(k.tits_product(c, c), c);
            assert_eq!(k.tits_product(origin, c), c);
            assert!(k.face_leq(c, k.tits_product(c, origin)));
            for d in 0..n {
                let cd = k.tits_product(c, d);
                assert!(k.face_leq(c, cd));
                if k.face_type(c).is_empty() {
                    assert_eq!(cd, c);
                }
            }
        }
        // associativity and monotonicity, exhaustively for |Δ+| <= 9
        if k.datum().positive_roots.len() <= 9 && n <= 80 {
            for a in 0..n {
                for b in 0..n {
                    let ab = k.tits_product(a, b);
                    for c in 0..n {
                        assert_eq!(k.tits_product(ab, c), k.tits_product(a, k.tits_product(b, c)));
                        if k.face_leq(c, b) {
                            assert!(k.face_leq(k.tits_product(a, c), ab));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn action_and_contraction() {
    for (t, r) in small_types() {
        let k = complex(t, r);
        for c in 0..k.num_faces() {
            for w in 0..k.group.order() {
                let wc = k.act(w, c);
                assert_eq!(k.face_type(wc), k.face_type(c));
                assert_eq!(k.act(k.group.inv(w), wc), c);
            }
            for big in k.face_type(c).supersets(r) {
                let small = k.contract(c, big);
                assert_eq!(k.face_type(small), big);
                assert!(k.face_leq(small, c));
            }
        }
    }
}

#[test]
fn chamber_distance_and_delta() {
    let a1 = complex(CoxeterType::A, 1);
    let plus = a1.base_face(ParabolicSubset::empty());
    let minus = a1.coset_face(ParabolicSubset::empty(), a1.group.generator(0));
    assert_eq!(a1.delta_faces(plus, minus), 1);
    assert_eq!(a1.face_distance(plus, minus).unwrap(), 1);
    let origin = a1.base_face(ParabolicSubset::full(1));
    assert!(a1.face_distance(plus, origin).is_err());

    let a2 = complex(CoxeterType::A, 2);
    let c = a2.base_face(ParabolicSubset::empty());
    let opposite = a2.coset_face(ParabolicSubset::empty(), a2.group.longest());
    assert_eq!(a2.delta_faces(c, opposite), 3);
    assert_eq!(a2.face_distance(c, opposite).unwrap(), 3);
}

/// `δ` adds up along minimal galleries between associated faces.
#[test]
fn delta_is_additive_on_galleries() {
    for (t, r) in [(CoxeterType::A, 2), (CoxeterType::B, 2), (CoxeterType::G, 2), (CoxeterType::A, 3)] {
        let k = complex(t, r);
        let n = k.num_faces();
        let dist: Vec<Vec<Option<usize>>> =
            (0..n).map(|c| (0..n).map(|d| k.face_distance(c, d).ok()).collect()).collect();
        for c in 0..n {
            for d in 0..n {
                let Some(cd) = dist[c][d] else { continue };
                if k.face_type(c).is_empty() {
                    assert_eq!(k.delta_faces(c, d), cd);
                }
                for e in 0..n {
                    if dist[c][e].zip(dist[e][d]).is_some_and(|(x, y)| x + y == cd) {
                        assert_eq!(k.delta_faces(c, d), k.delta_faces(c, e) + k.delta_faces(e, d), "{t}{r} {c} {e} {d}");
                    }
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn sign_rule_is_associative(a in proptest::collection::vec(-1i8..=1, 9), b in proptest::collection::vec(-1i8..=1, 9), c in proptest::collection::vec(-1i8..=1, 9)) {
        let (a, b, c) = (SignVector(a), SignVector(b), SignVector(c));
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert!(a.in_closure_of(&a.compose(&b)));
        prop_assert_eq!(a.compose(&a), a.clone());
    }
}
