mod common;

use common::strategies::{nonzero_rational, rational};
use num::BigRational;
use proptest::prelude::*;
use qflag_core::einstein::{einstein_lift, einstein_scan, symmetry_check};
use qflag_core::{Error, Scalar};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lift_identities(a in rational(), b in rational()) {
        let sum = &a + &b;
        match einstein_lift(&a, &b) {
            Err(e) => {
                prop_assert!(sum.is_zero());
                prop_assert_eq!(e, Error::NoEinsteinLift);
            }
            Ok(l) => {
                prop_assert_eq!(&l.c1 + &l.c2, Scalar::one());
                prop_assert_eq!(&l.c1 * &a, l.lambda.clone());
                prop_assert_eq!(&l.c2 * &b, l.lambda.clone());
                prop_assert_eq!(l.lambda.clone(), &(&a * &b) / &sum);
                prop_assert!(symmetry_check(&a, &b, &l.c1, &l.c2));
            }
        }
    }

    #[test]
    fn scale_covariance(a in rational(), b in rational(), t in nonzero_rational()) {
        prop_assume!(!(&a + &b).is_zero());
        let l = einstein_lift(&a, &b).unwrap();
        let lt = einstein_lift(&(&a * &t), &(&b * &t)).unwrap();
        prop_assert_eq!(lt.c1, l.c1);
        prop_assert_eq!(lt.c2, l.c2);
        prop_assert_eq!(lt.lambda, &l.lambda * &t);
    }

    #[test]
    fn symmetry_only_for_the_einstein_weights(a in nonzero_rational(), b in nonzero_rational(), c1 in rational()) {
        prop_assume!(!(&a + &b).is_zero());
        let c2 = &Scalar::one() - &c1;
        let l = einstein_lift(&a, &b).unwrap();
        prop_assert_eq!(symmetry_check(&a, &b, &c1, &c2), c1 == l.c1);
    }

    #[test]
    fn scan_at_one_matches_classical_lift(a in rational(), b in rational()) {
        let (Ok(a1), Ok(b1)) = (a.classical_limit(), b.classical_limit()) else { return Ok(()) };
        prop_assume!(a1.clone() + b1.clone() != BigRational::from_integer(0.into()));
        let r = einstein_scan(&a, &b, 1.0, 1.0, 1).unwrap();
        let classical = einstein_lift(&Scalar::from_rational(a1), &Scalar::from_rational(b1)).unwrap();
        let expected = num::ToPrimitive::to_f64(&classical.lambda.classical_limit().unwrap()).unwrap();
        let sample = &r.q_samples[0];
        prop_assert_eq!(sample.q, 1.0);
        if sample.einstein_ok {
            prop_assert!((sample.lambda.unwrap() - expected).abs() <= 1e-9 * expected.abs().max(1.0));
        }
    }

    #[test]
    fn scan_is_deterministic(a in rational(), b in rational()) {
        let r1 = einstein_scan(&a, &b, 0.5, 2.0, 17).unwrap();
        let r2 = einstein_scan(&a, &b, 0.5, 2.0, 17).unwrap();
        prop_assert_eq!(serde_json::to_string(&r1).unwrap(), serde_json::to_string(&r2).unwrap());
    }
}
