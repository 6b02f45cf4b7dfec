//! Exact arithmetic in the field of rational functions in `s = q^{1/2}`.
//!
//! A [`Scalar`] is stored as `s^shift * num(s) / den(s)` where `num` and `den`
//! are ordinary polynomials with rational coefficients, `num(0) != 0`,
//! `den(0) == 1` and `gcd(num, den) == 1`. Every value has exactly one such
//! representation, so equality is structural.

mod parse;
pub mod poly;

use std::fmt;
use std::hash::Hash;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
pub use poly::Poly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
    shift: i64,
}

impl Scalar {
    pub fn zero() -> Self {
        Self { num: Poly::zero(), den: Poly::one(), shift: 0 }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn from_rational(c: BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { num: Poly::constant(c), den: Poly::one(), shift: 0 }
    }

    /// `c * s^k`, i.e. `c * q^{k/2}`.
    pub fn s_monomial(c: BigRational, k: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { num: Poly::constant(c), den: Poly::one(), shift: k }
    }

    /// `q^{k/2}`.
    pub fn s_pow(k: i64) -> Self {
        Self::s_monomial(BigRational::one(), k)
    }

    /// `q^n`.
    pub fn q_pow(n: i64) -> Self {
        Self::s_pow(2 * n)
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// The q-integer `[n]_{q^d} = (q^{dn} - q^{-dn}) / (q^d - q^{-d})`.
    pub fn q_int_d(n: i64, d: i64) -> Self {
        let sign = if n < 0 { -1 } else { 1 };
        let n = n.abs();
        // q^{d(n-1)} + q^{d(n-3)} + ... + q^{-d(n-1)}
        let mut acc = Scalar::zero();
        let mut e = n - 1;
        while e >= -(n - 1) {
            acc += &Scalar::q_pow(d * e);
            e -= 2;
        }
        acc * &Scalar::from_int(sign)
    }

    pub fn q_int(n: i64) -> Self {
        Self::q_int_d(n, 1)
    }

    /// `[n]_{q^d}!`
    pub fn q_factorial_d(n: u32, d: i64) -> Self {
        (1..=n as i64).map(|k| Scalar::q_int_d(k, d)).product()
    }

    /// Gaussian binomial `[n choose k]_{q^d}`.
    pub fn q_binomial_d(n: u32, k: u32, d: i64) -> Self {
        if k > n {
            return Scalar::zero();
        }
        let num = Scalar::q_factorial_d(n, d);
        let den = Scalar::q_factorial_d(k, d) * &Scalar::q_factorial_d(n - k, d);
        num.checked_div(&den).expect("q-factorials are nonzero")
    }

    /// Reduce the fraction `s^shift * num / den` to canonical form.
    pub fn reduce(num: Poly, den: Poly, shift: i64) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let vn = num.valuation().unwrap();
        let vd = den.valuation().unwrap();
        let mut num = num.shift_down(vn);
        let mut den = den.shift_down(vd);
        let shift = shift + vn as i64 - vd as i64;
        if den.degree() != Some(0) && num.degree() != Some(0) {
            let g = num.gcd(&den);
            if g.degree() != Some(0) {
                num = num.div_exact(&g);
                den = den.div_exact(&g);
            }
        }
        let c = den.coeff(0).recip();
        if !c.is_one() {
            num = num.scale(&c);
            den = den.scale(&c);
        }
        Ok(Self { num, den, shift })
    }

    /// Build from Laurent numerator and denominator given as `(poly, lowest power)` pairs.
    pub fn from_laurent(num: Poly, num_low: i64, den: Poly, den_low: i64) -> Result<Self> {
        Self::reduce(num, den, num_low - den_low)
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    /// Power of `s` factored out of the numerator.
    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    /// True for values in ℚ (no dependence on q).
    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.shift == 0 && self.num.degree() == Some(0) && self.den.is_one())
    }

    /// True when the value is a Laurent polynomial in `s`.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// If the value is `c * s^k`, return `(c, k)`.
    pub fn as_s_monomial(&self) -> Option<(BigRational, i64)> {
        if self.den.is_one() && self.num.degree() == Some(0) {
            Some((self.num.coeff(0), self.shift))
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::reduce(self.den.clone(), self.num.clone(), -self.shift)
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..n.unsigned_abs() {
            acc *= &base;
        }
        Ok(acc)
    }

    /// Value at the rational point `s = s0`.
    pub fn eval_s(&self, s0: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(s0);
        if d.is_zero() || (s0.is_zero() && self.shift < 0) {
            return Err(Error::Pole(s0.to_f64().unwrap_or(f64::NAN).powi(2)));
        }
        let sp = if self.shift >= 0 {
            num::pow::pow(s0.clone(), self.shift as usize)
        } else {
            num::pow::pow(s0.recip(), (-self.shift) as usize)
        };
        Ok(self.num.eval(s0) * sp / d)
    }

    /// Numeric value at `q = q0 > 0` in double precision.
    pub fn eval_at(&self, q0: f64) -> Result<f64> {
        if !(q0 > 0.0) || !q0.is_finite() {
            return Err(Error::Pole(q0));
        }
        let s0 = q0.sqrt();
        let d = self.den.eval_f64(s0);
        let scale: f64 = self
            .den
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c.to_f64().unwrap_or(0.0).abs() * s0.powi(i as i32))
            .sum();
        if d.abs() <= 1e-13 * scale {
            return Err(Error::Pole(q0));
        }
        Ok(self.num.eval_f64(s0) * s0.powi(self.shift as i32) / d)
    }

    /// Exact value at `q = 1`.
    pub fn classical_limit(&self) -> Result<BigRational> {
        let one = BigRational::one();
        let d = self.den.eval(&one);
        if d.is_zero() {
            return Err(Error::NoClassicalLimit);
        }
        Ok(self.num.eval(&one) / d)
    }

    /// Rough measure of representation size, used for pivot selection.
    pub fn complexity(&self) -> usize {
        self.num.size_hint() + self.den.size_hint()
    }

    fn fmt_terms(terms: &[(i64, BigRational)]) -> String {
        let mut out = String::new();
        for (idx, (e, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let qpart = match (e % 2 == 0, e / 2) {
                (true, 0) => String::new(),
                (true, 1) => "q".to_string(),
                (true, n) => format!("q^{n}"),
                (false, _) => format!("q^({e}/2)"),
            };
            match (qpart.is_empty(), a.is_one()) {
                (true, _) => out.push_str(&a.to_string()),
                (false, true) => out.push_str(&qpart),
                (false, false) => {
                    out.push_str(&a.to_string());
                    out.push('*');
                    out.push_str(&qpart);
                }
            }
        }
        out
    }

    fn terms_of(p: &Poly, shift: i64) -> Vec<(i64, BigRational)> {
        p.coeffs()
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64 + shift, c.clone()))
            .collect()
    }
}

impl fmt::Display for Scalar {
    /// Canonical text form, e.g. `q+q^-1` or `(q^(1/2))/(1+q^2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let num = Self::fmt_terms(&Self::terms_of(&self.num, self.shift));
        if self.den.is_one() {
            write!(f, "{num}")
        } else {
            let den = Self::fmt_terms(&Self::terms_of(&self.den, 0));
            write!(f, "({num})/({den})")
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse::parse_scalar(s)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let m = self.shift.min(rhs.shift);
        let a = self.num.shift_up((self.shift - m) as usize);
        let b = rhs.num.shift_up((rhs.shift - m) as usize);
        if self.den == rhs.den {
            let num = &a + &b;
            return Scalar::reduce(num, self.den.clone(), m).expect("nonzero denominator");
        }
        let num = &(&a * &rhs.den) + &(&b * &self.den);
        let den = &self.den * &rhs.den;
        Scalar::reduce(num, den, m).expect("nonzero denominator")
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        let shift = self.shift + rhs.shift;
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar { num: &self.num * &rhs.num, den: Poly::one(), shift };
        }
        // cross-cancel; both inputs are reduced so the result is too
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1);
        let d2 = rhs.den.div_exact(&g1);
        let n2 = rhs.num.div_exact(&g2);
        let d1 = self.den.div_exact(&g2);
        Scalar::reduce(&n1 * &n2, &d1 * &d2, shift).expect("nonzero denominator")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: -self.num.clone(), den: self.den.clone(), shift: self.shift }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

/// Panics on division by zero; use [`Scalar::checked_div`] for a `Result`.
impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by zero scalar")
    }
}

forward_binop!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |a, b| a * b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sc(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn reduce_examples() {
        // (q^2 - 1)/(q - 1) = q + 1, in s: (s^4 - 1)/(s^2 - 1)
        let x = Scalar::reduce(Poly::from_i64s(&[-1, 0, 0, 0, 1]), Poly::from_i64s(&[-1, 0, 1]), 0).unwrap();
        assert_eq!(x, sc("q+1"));
        let z = Scalar::reduce(Poly::zero(), Poly::from_i64s(&[2, 0, 0, 0, 0, 0, 1]), 0).unwrap();
        assert!(z.is_zero());
        let qi = (sc("q^5") - sc("q^-5")) / &(sc("q") - sc("q^-1"));
        assert_eq!(qi, sc("q^4+q^2+1+q^-2+q^-4"));
        assert_eq!(qi, Scalar::q_int(5));
    }

    #[test]
    fn reduce_rejects_zero_denominator() {
        assert_eq!(Scalar::reduce(Poly::one(), Poly::zero(), 0), Err(Error::DivisionByZero));
        assert_eq!(Scalar::one().checked_div(&Scalar::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn reduce_is_idempotent() {
        let x = sc("(q^3-q)/(q^2+q)");
        let again = Scalar::reduce(x.num.clone(), x.den.clone(), x.shift).unwrap();
        assert_eq!(x, again);
    }

    #[test]
    fn eval_examples() {
        assert!((sc("q+q^-1").eval_at(1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((sc("(q^2-1)/(q-1)").eval_at(1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((Scalar::s_pow(1).eval_at(4.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(matches!(sc("1/(q-2)").eval_at(2.0), Err(Error::Pole(_))));
    }

    #[test]
    fn classical_limit_examples() {
        for n in -4..=4 {
            assert_eq!(Scalar::q_pow(n).classical_limit().unwrap(), rat(1));
        }
        assert_eq!(Scalar::q_int(3).classical_limit().unwrap(), rat(3));
        assert_eq!(sc("1/(q-1)").classical_limit(), Err(Error::NoClassicalLimit));
    }

    #[test]
    fn denominator_lowest_coefficient_is_one() {
        let x = sc("1/(2+4*q)");
        assert!(x.denominator().coeff(0).is_one());
        assert_eq!(x.to_string(), "(1/2)/(2*q+1)");
    }

    #[test]
    fn display_round_trip_samples() {
        for s in ["0", "1", "-3/4", "q+q^-1", "q^(1/2)", "-q^(-3/2)+2*q", "(q^2+1)/(q)", "(1+q)/(1-q^3)"] {
            let x = sc(s);
            assert_eq!(sc(&x.to_string()), x, "{s} -> {x}");
        }
    }

    #[test]
    fn q_binomial_small() {
        assert_eq!(Scalar::q_binomial_d(2, 1, 1), Scalar::q_int(2));
        assert_eq!(Scalar::q_binomial_d(4, 2, 1).classical_limit().unwrap(), rat(6));
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (
            prop::collection::vec(-4i64..=4, 1..4),
            prop::collection::vec(-3i64..=3, 1..3),
            -3i64..=3,
        )
            .prop_filter_map("zero denominator", |(n, d, sh)| {
                Scalar::reduce(Poly::from_i64s(&n), Poly::from_i64s(&d), sh).ok()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn text_round_trip(a in arb_scalar()) {
            prop_assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a);
        }

        #[test]
        fn eval_is_multiplicative(a in arb_scalar(), b in arb_scalar(), q0 in 0.3f64..3.0) {
            if let (Ok(x), Ok(y), Ok(xy)) = (a.eval_at(q0), b.eval_at(q0), (&a * &b).eval_at(q0)) {
                let tol = 1e-9 * (1.0 + (x * y).abs());
                prop_assert!((xy - x * y).abs() <= tol, "{} vs {}", xy, x * y);
            }
        }

        #[test]
        fn classical_limit_matches_eval(a in arb_scalar()) {
            if let Ok(c) = a.classical_limit() {
                if let Ok(v) = a.eval_at(1.0) {
                    prop_assert!((c.to_f64().unwrap() - v).abs() <= 1e-9 * (1.0 + v.abs()));
                }
            }
        }
    }
}
