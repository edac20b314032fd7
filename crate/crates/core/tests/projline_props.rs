//! Invariants of the point classification, level-change maps and
//! specialization order.

use f1curve_core::cyclo::{CycloMonoid, Root};
use f1curve_core::projline::{
    enumerate_points, fiber_phi, is_valid_point, phi_map, psi_map, specializes,
    specializes_via_quotient, PointUniverse, ProjPoint,
};
use proptest::prelude::*;

fn roots_of_order_dividing_any_up_to(bound: u64) -> Vec<Root> {
    let mut out = vec![Root::one()];
    for n in 2..=bound {
        for k in 1..n {
            if num_integer::gcd(k, n) == 1 {
                out.push(Root::from_u64(k, n).unwrap());
            }
        }
    }
    out
}

#[test]
fn fibers_partition_the_geometric_points() {
    // For every level m <= 12, the fibers of the level-change map over its
    // images slice the universe of roots of order <= 60 into disjoint
    // pieces that cover it.
    for m in 1..=12u64 {
        let monoid = CycloMonoid::finite(m).unwrap();
        let universe = roots_of_order_dividing_any_up_to(60);
        let mut covered: Vec<Root> = Vec::new();
        let mut images: Vec<ProjPoint> = Vec::new();
        for zeta in &universe {
            let p = ProjPoint::pt(1, zeta.clone());
            let image = phi_map(&monoid, &p).unwrap();
            if !images.contains(&image) {
                images.push(image);
            }
        }
        for image in &images {
            for member in fiber_phi(&monoid, image).unwrap() {
                let ProjPoint::Pt { lambda, .. } = member else {
                    panic!("fiber of a non-special point contains {member}");
                };
                // Fibers over distinct points are disjoint.
                assert!(!covered.contains(&lambda), "m={m} root {lambda} seen twice");
                covered.push(lambda);
            }
        }
        // Fibers of the realized images exactly cover the universe.
        let mut covered_sorted = covered.clone();
        covered_sorted.sort();
        let mut universe_sorted = universe.clone();
        universe_sorted.sort();
        assert_eq!(covered_sorted, universe_sorted, "level {m}");
    }
}

#[test]
fn psi_after_phi_is_the_f1_map() {
    for m in 1..=12u64 {
        let monoid = CycloMonoid::finite(m).unwrap();
        let f1 = CycloMonoid::f1();
        for zeta in roots_of_order_dividing_any_up_to(60) {
            let p = ProjPoint::pt(1, zeta);
            let through_level = psi_map(&monoid, &phi_map(&monoid, &p).unwrap()).unwrap();
            let direct = phi_map(&f1, &p).unwrap();
            assert_eq!(through_level, direct, "level {m} point {p}");
        }
    }
}

#[test]
fn psi_bijectivity_on_truncations() {
    // Points of the line over F_{1^2} whose image index stays within the
    // bound map bijectively onto the F1 labels within the bound.
    let f2 = CycloMonoid::f1_squared();
    let bound = 100u64;
    let domain: Vec<ProjPoint> = enumerate_points(&PointUniverse::new(f2, bound).unwrap())
        .unwrap()
        .into_iter()
        .filter(|p| !p.is_special())
        .filter(|p| match psi_map(&f2, p) {
            Ok(ProjPoint::Pt { n, .. }) => n <= bound,
            _ => false,
        })
        .collect();
    let mut images: Vec<ProjPoint> = domain.iter().map(|p| psi_map(&f2, p).unwrap()).collect();
    images.sort();
    images.dedup();
    assert_eq!(images.len(), domain.len(), "collision under the descent map");
    let expected: Vec<ProjPoint> = (1..=bound).map(ProjPoint::f1_label).collect();
    let mut sorted_expected = expected.clone();
    sorted_expected.sort();
    assert_eq!(images, sorted_expected);
}

#[test]
fn psi_preserves_specialization_forward() {
    // x specializing to y descends to the images (the inverse direction is
    // a different story, reported by the acceptance suite).
    let f2 = CycloMonoid::f1_squared();
    let f1 = CycloMonoid::f1();
    let pts: Vec<ProjPoint> = enumerate_points(&PointUniverse::new(f2, 24).unwrap()).unwrap();
    for x in &pts {
        for y in &pts {
            if specializes(&f2, x, y).unwrap() {
                let (ix, iy) = (psi_map(&f2, x).unwrap(), psi_map(&f2, y).unwrap());
                assert!(
                    specializes(&f1, &ix, &iy).unwrap(),
                    "{x} -> {y} but {ix} -/-> {iy}"
                );
            }
        }
    }
}

#[test]
fn specialization_is_a_partial_order() {
    for (monoid, bound) in [
        (CycloMonoid::f1(), 30u64),
        (CycloMonoid::f1_squared(), 24),
        (CycloMonoid::finite(6).unwrap(), 12),
    ] {
        let pts = enumerate_points(&PointUniverse::new(monoid, bound).unwrap()).unwrap();
        for x in &pts {
            assert!(specializes(&monoid, x, x).unwrap(), "{x} not reflexive");
        }
        for x in &pts {
            for y in &pts {
                let xy = specializes(&monoid, x, y).unwrap();
                let yx = specializes(&monoid, y, x).unwrap();
                if xy && yx {
                    assert_eq!(x, y, "antisymmetry broken at {x}, {y}");
                }
            }
        }
        for x in &pts {
            for y in &pts {
                if !specializes(&monoid, x, y).unwrap() {
                    continue;
                }
                for z in &pts {
                    if specializes(&monoid, y, z).unwrap() {
                        assert!(
                            specializes(&monoid, x, z).unwrap(),
                            "transitivity broken at {x} -> {y} -> {z}"
                        );
                    }
                }
            }
        }
        // Generic is the unique minimum; [0] and [inf] are maximal.
        for y in &pts {
            assert!(specializes(&monoid, &ProjPoint::Generic, y).unwrap());
            if *y != ProjPoint::Generic {
                assert!(!specializes(&monoid, y, &ProjPoint::Generic).unwrap());
            }
            for closed in [ProjPoint::Zero, ProjPoint::Infinity] {
                if *y != closed {
                    assert!(
                        !specializes(&monoid, &closed, y).unwrap(),
                        "{closed} specializes to {y}"
                    );
                }
            }
        }
    }
}

#[test]
fn non_generic_points_are_the_classical_labels() {
    // Over F1 the non-generic enumerated points are exactly [0], [inf]
    // and the labels [n].
    let pts = enumerate_points(&PointUniverse::new(CycloMonoid::f1(), 40).unwrap()).unwrap();
    let non_generic: Vec<&ProjPoint> =
        pts.iter().filter(|p| **p != ProjPoint::Generic).collect();
    assert_eq!(non_generic.len(), 42);
    for (idx, n) in (1..=40u64).enumerate() {
        assert_eq!(*non_generic[idx + 2], ProjPoint::f1_label(n));
    }
    // Over the full cyclotomic monoid the geometric labels [ζ] are the
    // valid points and nothing with a higher exponent is.
    let inf = CycloMonoid::infinite();
    for zeta in roots_of_order_dividing_any_up_to(20) {
        assert!(is_valid_point(&inf, 1, &zeta).unwrap());
        assert!(!is_valid_point(&inf, 2, &zeta).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn symbolic_and_quotient_specialization_agree(
        m in 1u64..=6,
        n1 in 1u64..=24,
        a1 in 0u64..6,
        n2 in 1u64..=24,
        a2 in 0u64..6,
    ) {
        let monoid = CycloMonoid::finite(m).unwrap();
        let l1 = Root::from_u64(a1 % m, m).unwrap();
        let l2 = Root::from_u64(a2 % m, m).unwrap();
        prop_assume!(is_valid_point(&monoid, n1, &l1).unwrap());
        prop_assume!(is_valid_point(&monoid, n2, &l2).unwrap());
        let x = ProjPoint::pt(n1, l1);
        let y = ProjPoint::pt(n2, l2);
        prop_assert_eq!(
            specializes(&monoid, &x, &y).unwrap(),
            specializes_via_quotient(&monoid, &x, &y).unwrap()
        );
    }

    #[test]
    fn phi_images_are_valid_points(
        m in 1u64..=12,
        n in 1u64..=60,
        k in 0u64..60,
    ) {
        let monoid = CycloMonoid::finite(m).unwrap();
        let zeta = Root::from_u64(k % n, n).unwrap();
        let image = phi_map(&monoid, &ProjPoint::pt(1, zeta)).unwrap();
        if let ProjPoint::Pt { n: w, lambda } = image {
            prop_assert!(is_valid_point(&monoid, w, &lambda).unwrap());
        }
    }

    #[test]
    fn fiber_members_map_back(
        m in 1u64..=8,
        n in 1u64..=20,
        k in 0u64..20,
    ) {
        let monoid = CycloMonoid::finite(m).unwrap();
        let zeta = Root::from_u64(k % n, n).unwrap();
        let source = ProjPoint::pt(1, zeta);
        let image = phi_map(&monoid, &source).unwrap();
        let fiber = fiber_phi(&monoid, &image).unwrap();
        prop_assert!(fiber.contains(&source), "{} missing from its fiber", source);
        for member in fiber {
            prop_assert_eq!(phi_map(&monoid, &member).unwrap(), image.clone());
        }
    }
}
