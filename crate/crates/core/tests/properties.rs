use gdet_core::classify::{classify_c22, classify_c23};
use gdet_core::factor::is_prime_u128;
use gdet_core::{
    a_set_oracle, bcde_decompose, build, classify_c24, d2_closed_form, det_group,
    det_matrix_oracle, factor_odd, factor_step, is_in_a, witness_for, Assignment, FactorPolicy,
    WitnessFamily,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn assignment() -> impl Strategy<Value = Assignment> {
    (0u32..=4).prop_flat_map(|rank| {
        prop::collection::vec(-20i64..=20, 1 << rank)
            .prop_map(move |v| Assignment::from_i64(rank, &v).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn transform_matches_matrix_oracle(a in assignment()) {
        prop_assert_eq!(det_group(&a), det_matrix_oracle(&a).unwrap());
    }

    #[test]
    fn factor_step_multiplies(a in assignment().prop_filter("rank >= 1", |a| a.rank() >= 1)) {
        let (plus, minus) = factor_step(&a).unwrap();
        prop_assert_eq!(det_group(&a), det_group(&plus) * det_group(&minus));
    }

    #[test]
    fn bcde_product_is_the_determinant(v in prop::collection::vec(-9i64..=9, 16)) {
        let a = Assignment::from_i64(4, &v).unwrap();
        let quad = bcde_decompose(&a).unwrap();
        prop_assert_eq!(quad.d2_product(), det_group(&a));
        prop_assert!(quad.congruences_hold());
    }

    #[test]
    fn closed_form_is_symmetric(x in prop::array::uniform4(-1000i64..=1000)) {
        let b: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        let reference = det_group(&Assignment::from_i64(2, &x).unwrap());
        prop_assert_eq!(d2_closed_form(&b[0], &b[1], &b[2], &b[3]), reference.clone());
        prop_assert_eq!(d2_closed_form(&b[3], &b[1], &b[0], &b[2]), reference);
    }

    #[test]
    fn rank_four_values_are_members(v in prop::collection::vec(-6i64..=6, 16)) {
        let d = det_group(&Assignment::from_i64(4, &v).unwrap());
        let class = classify_c24(&d, &FactorPolicy::default()).unwrap();
        prop_assert!(class.is_member(), "{} -> {}", d, class);
        prop_assert_eq!(class.reconstruct().unwrap(), d);
    }

    #[test]
    fn low_rank_values_are_members(v in prop::collection::vec(-30i64..=30, 8)) {
        let d3 = det_group(&Assignment::from_i64(3, &v).unwrap());
        prop_assert!(classify_c23(&d3).is_member(), "{}", d3);
        let d2 = det_group(&Assignment::from_i64(2, &v[..4]).unwrap());
        prop_assert!(classify_c22(&d2).is_member(), "{}", d2);
    }

    #[test]
    fn members_get_witnesses(kind in 0u8..7, p in -100_000i64..=100_000, q in -1000i64..=1000) {
        let p = BigInt::from(p);
        let q = BigInt::from(q);
        let family = match kind {
            0 => WitnessFamily::F1 { m: p },
            1 => WitnessFamily::F2a { k: p },
            2 => WitnessFamily::F2b { k: p },
            3 => WitnessFamily::F3 { m: p },
            4 => WitnessFamily::F4 { m: p, n: q },
            5 => WitnessFamily::F5Even { k: p },
            _ => WitnessFamily::F5Odd { k: p },
        };
        let target = family.target();
        prop_assert_eq!(det_group(&build(&family)), target.clone());
        let w = witness_for(&target, &FactorPolicy::default()).unwrap().unwrap();
        prop_assert_eq!(det_group(&w.assignment), target);
    }

    #[test]
    fn factorization_multiplies_back(u in (1u64..u64::MAX).prop_map(|u| u | 1), sign in any::<bool>()) {
        let v = if sign { -BigInt::from(u) } else { BigInt::from(u) };
        let f = factor_odd(&v, &FactorPolicy::default()).unwrap();
        prop_assert_eq!(f.value(), v);
        for (p, _) in &f.prime_powers {
            prop_assert!(is_prime_u128(*p));
        }
    }
}

#[test]
fn a_membership_agrees_with_the_double_loop() {
    let bound = 3000u64;
    let oracle = a_set_oracle(bound);
    let policy = FactorPolicy::default();
    for u in -(bound as i64)..=bound as i64 {
        if u % 2 == 0 {
            continue;
        }
        let pair = is_in_a(&BigInt::from(u), &policy).unwrap();
        assert_eq!(
            pair.is_some(),
            oracle.binary_search(&(u as i128)).is_ok(),
            "{u}"
        );
        if let Some(pair) = pair {
            assert_eq!(pair.product(), BigInt::from(u));
        }
    }
}
