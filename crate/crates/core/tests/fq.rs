use mbs_core::fq::contingency::composition_of;
use mbs_core::fq::eq::{bicube_mismatches, build_eq, build_eq_ordered, hor_flag, orbit_counts, FlagOrder};
use mbs_core::fq::field::PrimeField;
use mbs_core::fq::flags::{enumerate_flags, enumerate_subspaces, flag_count, relative_position, Subspace};
use mbs_core::fq::hecke::{b_invariant_sub, borel_orbits, hecke_generators, verify_hecke};
use mbs_core::fq::points::orbit_point_checks;
use mbs_core::xi::Order;
use mbs_core::{RationalMatrix, Rational};

#[test]
fn field_arithmetic() {
    for p in [2u32, 3, 5, 7] {
        let f = PrimeField::new(p).unwrap();
        for a in 1..p as u8 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
            assert_eq!(f.add(a, f.sub(0, a)), 0);
        }
        let g = f.primitive_root();
        let order = (1..p).find(|&k| (0..k).fold(1u8, |acc, _| f.mul(acc, g)) == 1).unwrap();
        assert_eq!(order, p - 1);
    }
    assert!(PrimeField::new(4).is_err());
}

/// Number of `k`-dimensional subspaces of `F_q^n` by counting ordered bases.
fn grassmannian_size(q: u64, n: u32, k: u32) -> u64 {
    let ordered = |m: u32| (0..k).map(|i| q.pow(m) - q.pow(i)).product::<u64>();
    ordered(n) / ordered(k)
}

#[test]
fn flag_counts() {
    for q in [2u32, 3] {
        let f = PrimeField::new(q).unwrap();
        for n in 1..=4u32 {
            for k in 0..=n {
                assert_eq!(enumerate_subspaces(&f, n as usize, k as usize).len() as u64, grassmannian_size(q as u64, n, k));
            }
        }
        for comp in [vec![1, 1], vec![2, 1], vec![1, 1, 1], vec![1, 2, 1], vec![2, 2]] {
            let space = enumerate_flags(&f, &comp).unwrap();
            assert_eq!(space.len() as u128, flag_count(q as u64, &comp));
            for (i, fl) in space.flags.iter().enumerate() {
                assert_eq!(fl.composition(), comp);
                assert_eq!(space.position(fl), i);
            }
        }
        let q = q as u128;
        assert_eq!(flag_count(q as u64, &[1, 1, 1]), (q * q + q + 1) * (q + 1));
    }
    assert!(enumerate_flags(&PrimeField::new(2).unwrap(), &[1, 0]).is_err());
}

#[test]
fn eq_is_a_mixed_bruhat_sheaf() {
    for (n, q) in [(2, 2), (2, 3), (2, 5), (3, 2)] {
        let e = build_eq(n, q).unwrap();
        let report = e.sheaf.check_mbs();
        assert!(report.is_ok(), "({n},{q}): {:?}", report.violations);
        // E_q(m) is functions on the horizontal flag variety
        for m in e.sheaf.poset.ids() {
            let hor = composition_of(e.sheaf.poset.hor(m), n);
            assert_eq!(e.sheaf.dims[m] as u128, flag_count(q as u64, &hor));
        }
    }
}

#[test]
fn rank_one_dims() {
    for q in [2u32, 3, 5] {
        let e = build_eq(2, q).unwrap();
        let p = &e.sheaf.poset;
        let origin = p.parse_label("0:0|0:0").unwrap();
        for m in p.ids() {
            let want = if m == origin { 1 } else { q as usize + 1 };
            assert_eq!(e.sheaf.dims[m], want);
        }
    }
}

/// Orbits of `GL_n(F_q)` on pairs of flags, counted by relative position.
#[test]
fn orbit_counts_partition_flag_pairs() {
    for (n, q) in [(2, 2), (2, 3), (3, 2)] {
        let counts = orbit_counts(n, q).unwrap();
        let e = build_eq(n, q).unwrap();
        let p = &e.sheaf.poset;
        let f = PrimeField::new(q).unwrap();
        for m in p.ids() {
            let (i, j) = p.types(m);
            let a = enumerate_flags(&f, &composition_of(i, n)).unwrap();
            let b = enumerate_flags(&f, &composition_of(j, n)).unwrap();
            let target = &e.geometry.orbits[m].contingency;
            let brute = a
                .flags
                .iter()
                .flat_map(|x| b.flags.iter().map(move |y| (x, y)))
                .filter(|(x, y)| relative_position(&f, x, y) == *target)
                .count();
            assert_eq!(counts[m], brute, "({n},{q}) {}", p.label(m));
        }
    }
}

#[test]
fn hecke_relations() {
    for (n, q) in [(2, 2), (2, 5), (3, 2), (3, 3)] {
        let (space, gens) = hecke_generators(n, q).unwrap();
        assert_eq!(gens.len(), n - 1);
        assert_eq!(space.len() as u128, flag_count(q as u64, &vec![1; n]));
        let report = verify_hecke(&gens, q);
        assert!(report.is_ok(), "({n},{q}) {report:?}");
        // each generator has row sums q
        for s in &gens {
            for i in 0..s.nrows() {
                let sum = s.row(i).iter().fold(Rational::zero(), |acc, (_, x)| acc + x.clone());
                assert_eq!(sum, Rational::from_int(q as i64));
            }
        }
    }
    // the wrong parameter is caught
    let (_, gens) = hecke_generators(3, 2).unwrap();
    assert!(!verify_hecke(&gens, 3).quadratic);
}

#[test]
fn borel_invariant_subsheaf_has_the_e1_dimensions() {
    for (n, q) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        let e = build_eq(n, q).unwrap();
        let (sub, _) = b_invariant_sub(&e).unwrap();
        let p = &e.sheaf.poset;
        for m in p.ids() {
            assert_eq!(sub.dims[m], p.orbit_size(m), "({n},{q}) {}", p.label(m));
        }
        assert!(sub.check_mbs().is_ok());
    }
}

#[test]
fn borel_orbits_on_full_flags_are_bruhat_cells() {
    let f = PrimeField::new(2).unwrap();
    let space = enumerate_flags(&f, &[1, 1, 1]).unwrap();
    let orbits = borel_orbits(&f, &space);
    let mut sizes: Vec<usize> = orbits.iter().map(Vec::len).collect();
    sizes.sort_unstable();
    // q^{length(w)} over S_3
    assert_eq!(sizes, vec![1, 2, 2, 4, 4, 8]);
}

#[test]
fn point_level_geometry() {
    for (n, q) in [(2, 2), (2, 3), (3, 2)] {
        let report = orbit_point_checks(n, q).unwrap();
        assert!(report.is_ok(), "({n},{q}) {:?}", report.failures);
        assert!(report.configurations > 0 && report.anodyne_pairs > 0);
    }
}

#[test]
fn bicube_is_the_induction_cube() {
    for (n, q) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        let e = build_eq(n, q).unwrap();
        let diff = bicube_mismatches(&e).unwrap();
        assert!(diff.is_empty(), "({n},{q}) {diff:?}");
    }
}

fn reverse_both(a: &RationalMatrix) -> RationalMatrix {
    let (r, c) = a.shape();
    RationalMatrix::from_entries(r, c, a.entries().map(|(i, j, x)| (r - 1 - i, c - 1 - j, x.clone())))
}

#[test]
fn results_do_not_depend_on_flag_order() {
    for (n, q) in [(2, 3), (3, 2)] {
        let a = build_eq(n, q).unwrap().sheaf;
        let b = build_eq_ordered(n, q, FlagOrder::Reversed).unwrap().sheaf;
        assert_eq!(a.dims, b.dims);
        assert!(b.check_mbs().is_ok());
        for order in [Order::Prime, Order::Second] {
            for (key, m) in a.maps(order) {
                assert_eq!(&reverse_both(m), &b.maps(order)[key]);
            }
        }
    }
}

fn general_linear(f: &PrimeField, n: usize) -> Vec<Vec<Vec<u8>>> {
    let p = f.p as usize;
    let total = p.pow((n * n) as u32);
    (0..total)
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            let d = (code % p) as u8;
                            code /= p;
                            d
                        })
                        .collect()
                })
                .collect::<Vec<Vec<u8>>>()
        })
        .filter(|g| Subspace::span(f, n, g.clone()).dim() == n)
        .collect()
}

#[test]
fn horizontal_flag_is_equivariant() {
    let f = PrimeField::new(2).unwrap();
    let gl = general_linear(&f, 3);
    assert_eq!(gl.len(), 168);
    let full = enumerate_flags(&f, &[1, 1, 1]).unwrap();
    let lines = enumerate_flags(&f, &[1, 2]).unwrap();
    let e = build_eq(3, 2).unwrap();
    let p = &e.sheaf.poset;
    for a in lines.flags.iter().step_by(2) {
        for b in full.flags.iter().step_by(3) {
            let h = hor_flag(&f, a, b);
            let m = e.geometry.orbits.iter().position(|t| t.contingency == relative_position(&f, a, b)).unwrap();
            assert_eq!(h.composition(), composition_of(p.hor(m), 3));
            for g in gl.iter().step_by(7) {
                assert_eq!(hor_flag(&f, &a.transform(&f, g), &b.transform(&f, g)), h.transform(&f, g));
            }
        }
    }
}
