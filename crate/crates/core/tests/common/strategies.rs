use proptest::prelude::*;
use qflag_core::Scalar;

/// Laurent polynomial in `q` with small integer coefficients.
pub fn laurent() -> impl Strategy<Value = Scalar> {
    prop::collection::vec((-3i64..=3, -4i64..=4), 1..4).prop_map(|terms| {
        terms.into_iter().map(|(e, c)| &Scalar::from_int(c) * &Scalar::q_pow(e)).sum()
    })
}

pub fn nonzero_laurent() -> impl Strategy<Value = Scalar> {
    laurent().prop_filter("nonzero", |s| !s.is_zero())
}

/// Ratio of Laurent polynomials.
pub fn rational() -> impl Strategy<Value = Scalar> {
    (laurent(), nonzero_laurent()).prop_map(|(n, d)| &n / &d)
}

pub fn nonzero_rational() -> impl Strategy<Value = Scalar> {
    rational().prop_filter("nonzero", |s| !s.is_zero())
}

/// Rational function of `q` whose value at `q = 1` is 1.
pub fn unit_at_one() -> impl Strategy<Value = Scalar> {
    (-3i64..=3, laurent()).prop_filter_map("defined at 1", |(k, p)| {
        let shifted = &Scalar::q_pow(k) * &(&Scalar::one() + &(&p * &(&Scalar::q() - &Scalar::one())));
        (!shifted.is_zero() && shifted.classical_limit().ok()? == num::BigRational::from_integer(1.into()))
            .then_some(shifted)
    })
}
