//! Invariants of places, valuations, degrees and defect sums.

use num_bigint::BigInt;
use num_rational::BigRational;

use f1curve_core::arith::{
    defect_sum, map_degree, place_map, product_formula_check, ramified_place,
    residue_embedding_check, strong_congruence_of_prime, valuation, x_of, Place, Rat,
    SectionSpace,
};
use f1curve_core::factor::factorize;
use f1curve_core::ledger::{roughly_equal, DegreeLedger};
use f1curve_core::projline::{point_degree, ProjPoint};
use proptest::prelude::*;

fn rat(a: i64, b: i64) -> Rat {
    Rat::from_i64(a, b).unwrap()
}

#[test]
fn x_of_finite_part_is_the_prime_support_of_ab_diff_sum() {
    for (a, b) in [(2i64, 3i64), (9, 8), (3, 1), (-7, 5), (30, 77), (-45, 64)] {
        let q = rat(a, b);
        let places = x_of(&q).unwrap();
        let finite: Vec<u128> = places
            .iter()
            .filter_map(|p| match p {
                Place::Finite(p) => Some(*p),
                _ => None,
            })
            .collect();
        let product = (q.numer() * q.denom() * (q.numer() - q.denom())
            * (q.numer() + q.denom()))
        .magnitude()
        .clone();
        let support: Vec<u128> = factorize(&product).unwrap().iter().map(|&(p, _)| p).collect();
        assert_eq!(finite, support, "q = {q}");
        assert_eq!(places.last(), Some(&Place::Arch));
    }
}

#[test]
fn x_of_images_partition_into_the_four_fibers() {
    for (a, b) in [(2i64, 3i64), (9, 8), (3, 1), (-15, 4), (21, 20)] {
        let q = rat(a, b);
        for place in x_of(&q).unwrap() {
            let image = place_map(&q, &place).unwrap();
            let ok = matches!(
                image,
                ProjPoint::Zero | ProjPoint::Infinity
            ) || image == ProjPoint::f1_label(1)
                || image == ProjPoint::f1_label(2);
            assert!(ok, "q={q} place={place} image={image}");
            assert_eq!(point_degree(&image).unwrap().value(), 1.0);
        }
    }
}

#[test]
fn defect_numerator_of_x_equals_value_times_degree() {
    for (a, b) in [(2i64, 1i64), (9, 8), (-5, 3), (64, 27)] {
        let q = rat(a, b);
        let d = defect_sum(&q).unwrap();
        assert!(
            roughly_equal(d.value * d.degree.value(), d.numerator.value(), 1e-9),
            "q = {q}"
        );
        assert!(roughly_equal(d.value, d.closed_form_value, 1e-9), "q = {q}");
    }
}

#[test]
fn congruence_of_prime_matches_place_map_on_the_chart() {
    let primes: Vec<u128> = (2u128..=50).filter(|&p| f1curve_core::factor::is_prime(p)).collect();
    for b in 1i64..=30 {
        for a in 1i64..=30 {
            if num_integer::gcd(a, b) != 1 {
                continue;
            }
            for signed in [a, -a] {
                let q = rat(signed, b);
                if q.is_exceptional() {
                    continue;
                }
                for &p in &primes {
                    match strong_congruence_of_prime(&q, p) {
                        Ok(cong) => {
                            assert_eq!(
                                cong.as_point(),
                                place_map(&q, &Place::Finite(p)).unwrap(),
                                "q={q} p={p}"
                            );
                        }
                        Err(_) => {
                            // Off-chart: p divides the denominator, and the
                            // inverse chart recovers the pole.
                            assert_eq!(
                                place_map(&q, &Place::Finite(p)).unwrap(),
                                ProjPoint::Infinity
                            );
                            let inv = f1curve_core::arith::strong_congruence_inverse_chart(&q, p)
                                .unwrap();
                            assert_eq!(
                                inv.as_point_from_inverse_chart(),
                                ProjPoint::Infinity,
                                "q={q} p={p}"
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn embedding_check_agrees_with_image_order() {
    for (a, b) in [(2i64, 3i64), (9, 8), (-7, 5)] {
        let q = rat(a, b);
        for p in [5u128, 7, 11, 13, 97, 101] {
            let image = place_map(&q, &Place::Finite(p)).unwrap();
            if let ProjPoint::Pt { .. } = image {
                assert!(residue_embedding_check(&q, p).unwrap(), "q={q} p={p}");
            }
        }
    }
}

#[test]
fn sections_are_multiplicatively_closed_sampled() {
    let spaces = [
        SectionSpace::new(&[]).unwrap(),
        SectionSpace::new(&[Place::Arch]).unwrap(),
        SectionSpace::new(&[Place::Finite(2), Place::Arch]).unwrap(),
        SectionSpace::new(&[Place::Finite(3)]).unwrap(),
    ];
    for space in &spaces {
        let members = space.enumerate(6);
        for x in &members {
            for y in &members {
                let prod = x * y;
                assert!(space.contains(&prod), "{x} * {y} = {prod} escaped");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn product_formula_random(a in 1i64..100_000, b in 1i64..100_000, neg in any::<bool>()) {
        let q = rat(if neg { -a } else { a }, b);
        prop_assert!(product_formula_check(&q).unwrap());
    }

    #[test]
    fn map_degree_equals_height_ledger(a in 2i64..1_000_000, b in 1i64..1_000_000, neg in any::<bool>()) {
        let q = rat(if neg { -a } else { a }, b);
        prop_assume!(!q.is_exceptional());
        let height = q.height();
        let expected = DegreeLedger::from_factorization(&factorize(&height).unwrap());
        prop_assert_eq!(map_degree(&q).unwrap(), expected);
    }

    #[test]
    fn valuation_is_additive(a1 in 1i64..10_000, b1 in 1i64..10_000, a2 in 1i64..10_000, b2 in 1i64..10_000) {
        let q1 = rat(a1, b1);
        let q2 = rat(a2, b2);
        let prod = BigRational::new(q1.numer() * q2.numer(), q1.denom() * q2.denom());
        prop_assume!(prod.numer() != &BigInt::from(0));
        let q12 = Rat::new(prod.numer().clone(), prod.denom().clone()).unwrap();
        for p in [2u128, 3, 5, 7, 13] {
            prop_assert_eq!(
                valuation(&q12, p).unwrap(),
                valuation(&q1, p).unwrap() + valuation(&q2, p).unwrap()
            );
        }
    }

    #[test]
    fn defect_routes_agree_random(a in 2i64..500, b in 1i64..500, neg in any::<bool>()) {
        let q = rat(if neg { -a } else { a }, b);
        prop_assume!(!q.is_exceptional());
        let d = defect_sum(&q).unwrap();
        prop_assert!(roughly_equal(d.value, d.closed_form_value, 1e-9));
    }

    #[test]
    fn ramified_places_have_positive_finite_index(a in 2i64..2_000, b in 1i64..2_000) {
        let q = rat(a, b);
        prop_assume!(!q.is_exceptional());
        for place in x_of(&q).unwrap() {
            let rp = ramified_place(&q, &place).unwrap();
            if let f1curve_core::arith::Ramification::Finite(e) = rp.ram {
                prop_assert!(e >= 1, "place {} has e = {}", place, e);
            }
        }
    }
}
