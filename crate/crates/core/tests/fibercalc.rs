mod common;

use common::strategies::unit_at_one;
use proptest::prelude::*;
use qflag_core::cartan::FlagSpec;
use qflag_core::fibercalc::{combine, cotangent_fibers, FiberCalculus};
use qflag_core::uqrep::{braiding, invariants};
use qflag_core::{Error, Matrix, Scalar};

fn flag(s: &str) -> FlagSpec {
    s.parse().unwrap()
}

fn all_pass(fc: &FiberCalculus) {
    for c in fc.run_checks() {
        assert!(c.passed, "{} {}: {:?}", fc.flag(), c.name, c.detail);
    }
}

#[test]
fn series_a_flags_pass_every_check() {
    for f in ["A1:1", "A2:1", "A2:2", "A3:1", "A3:2"] {
        all_pass(&FiberCalculus::with_default_normalization(&flag(f)).unwrap());
    }
}

#[test]
fn fiber_dimensions_follow_the_grassmannian() {
    // V(1,0) of A_n:k is k(n+1-k)-dimensional
    for (f, d) in [("A1:1", 1), ("A2:1", 2), ("A3:2", 4), ("A3:1", 3)] {
        let (v10, v01) = cotangent_fibers(&flag(f)).unwrap();
        assert_eq!((v10.dim(), v01.dim()), (d, d));
        let fc = FiberCalculus::with_default_normalization(&flag(f)).unwrap();
        assert_eq!(fc.v11().dim(), d * d);
    }
}

#[test]
fn unsupported_and_reducible_flags() {
    assert!(matches!("G2:1".parse::<FlagSpec>(), Err(Error::NotIrreducible(_))));
    assert!(matches!(FiberCalculus::with_default_normalization(&flag("C3:3")), Err(Error::NotImplementedForFlag(_))));
}

#[test]
fn normalization_must_be_one_at_q_equal_one() {
    let err = FiberCalculus::new(&flag("A2:1"), &Scalar::from_int(2));
    assert!(matches!(err, Err(Error::NormalizationRejected(_))));
}

#[test]
fn non_convex_weights_are_rejected() {
    let fc = FiberCalculus::with_default_normalization(&flag("A2:1")).unwrap();
    let (pm, mp) = (fc.lift_pm().unwrap(), fc.lift_mp().unwrap());
    assert_eq!(combine(&pm, &mp, &Scalar::one(), &Scalar::one()).unwrap_err(), Error::NotConvex);
}

#[test]
fn yang_baxter_on_a_levi_fiber() {
    let (v10, v01) = cotangent_fibers(&flag("A2:1")).unwrap();
    let r = |a: &qflag_core::uqrep::UqModule, b| braiding(a, b).unwrap().into_matrix();
    let id = Matrix::identity;
    let (a, b, c) = (&v10, &v01, &v10);
    let (da, db, dc) = (a.dim(), b.dim(), c.dim());
    let lhs = r(b, c).kron(&id(da)).checked_mul(&id(db).kron(&r(a, c))).unwrap().checked_mul(&r(a, b).kron(&id(dc)));
    let rhs = id(dc).kron(&r(a, b)).checked_mul(&r(a, c).kron(&id(db))).unwrap().checked_mul(&id(da).kron(&r(b, c)));
    assert_eq!(lhs.unwrap(), rhs.unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn checks_do_not_depend_on_normalization(norm in unit_at_one(), which in 0usize..3) {
        let f = flag(["A1:1", "A2:1", "A2:2"][which]);
        let fc = FiberCalculus::new(&f, &norm).unwrap();
        all_pass(&fc);
        let base = FiberCalculus::with_default_normalization(&f).unwrap();
        prop_assert_eq!(fc.v11().dim(), base.v11().dim());
        prop_assert_eq!(
            fc.lift_pm().unwrap().matrix().classical_limit().unwrap(),
            base.lift_pm().unwrap().matrix().classical_limit().unwrap()
        );
        prop_assert_eq!(
            fc.lift_mp().unwrap().matrix().classical_limit().unwrap(),
            base.lift_mp().unwrap().matrix().classical_limit().unwrap()
        );
    }

    #[test]
    fn convex_lifts_split_the_wedge(c1 in common::strategies::rational()) {
        let fc = FiberCalculus::with_default_normalization(&flag("A2:1")).unwrap();
        let c2 = &Scalar::one() - &c1;
        let l = combine(&fc.lift_pm().unwrap(), &fc.lift_mp().unwrap(), &c1, &c2).unwrap();
        prop_assert!(fc.check_lift(&l).is_ok());
    }
}

#[test]
fn two_invariants_in_one_forms_squared() {
    for f in ["A1:1", "A2:1", "A3:1"] {
        let fc = FiberCalculus::with_default_normalization(&flag(f)).unwrap();
        let v1 = fc.one_forms().unwrap();
        assert_eq!(invariants(&v1.tensor(&v1).unwrap()).len(), 2);
    }
}
