//! Forms and tensor products of forms in frame coordinates.
//!
//! `Ω⁺` is spanned by `x ω₊` with `x` of grade -2, `Ω⁻` by `y ω₋` with `y` of
//! grade +2, and `Ω²` by `z Vol` with `Vol = ω₊∧ω₋`. Frame symbols commute
//! with coefficients, so a tensor product of forms is recorded as a
//! coefficient per word of frame symbols.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::algebra::{AlgebraElement, Mono};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Slot {
    /// `ω₊`
    P,
    /// `ω₋`
    M,
    /// `ω₊∧ω₋`
    Vol,
}

impl Slot {
    /// Grade of a coefficient multiplying this frame symbol.
    pub fn grade(self) -> i64 {
        match self {
            Slot::P => -2,
            Slot::M => 2,
            Slot::Vol => 0,
        }
    }
}

pub type Key = Vec<Slot>;

#[derive(Clone, PartialEq, Eq, Default)]
pub struct FrameTensor {
    terms: BTreeMap<Key, AlgebraElement>,
}

impl FrameTensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(key: Key, coeff: AlgebraElement) -> Self {
        let mut t = Self::zero();
        t.add_term(key, &coeff);
        t
    }

    pub fn add_term(&mut self, key: Key, coeff: &AlgebraElement) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key.clone()).or_default();
        *entry = &*entry + coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &AlgebraElement)> {
        self.terms.iter()
    }

    pub fn get(&self, key: &[Slot]) -> AlgebraElement {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = &Key> {
        self.terms.keys()
    }

    pub fn add(&self, other: &FrameTensor) -> FrameTensor {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &FrameTensor) -> FrameTensor {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> FrameTensor {
        let mut out = FrameTensor::zero();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &c.scale(s));
        }
        out
    }

    pub fn mul_left(&self, x: &AlgebraElement) -> FrameTensor {
        let mut out = FrameTensor::zero();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &(x * c));
        }
        out
    }

    pub fn mul_right(&self, x: &AlgebraElement) -> FrameTensor {
        let mut out = FrameTensor::zero();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &(c * x));
        }
        out
    }

    /// `self ⊗ other`, coefficients multiplied in order.
    pub fn tensor(&self, other: &FrameTensor) -> FrameTensor {
        let mut out = FrameTensor::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let mut k = k1.clone();
                k.extend(k2);
                out.add_term(k, &(c1 * c2));
            }
        }
        out
    }

    /// True iff every coefficient is homogeneous of the grade its frame word requires.
    pub fn grades_consistent(&self) -> bool {
        self.terms.iter().all(|(k, c)| c.grade() == Some(k.iter().map(|s| s.grade()).sum()))
    }

    /// Coordinates indexed by frame word and normal monomial.
    pub fn flatten(&self) -> BTreeMap<(Key, Mono), Scalar> {
        let mut out = BTreeMap::new();
        for (k, c) in &self.terms {
            for (m, s) in c.terms() {
                out.insert((k.clone(), *m), s.clone());
            }
        }
        out
    }
}

impl fmt::Debug for FrameTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, c)| format!("[{c}]{k:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `x ω₊ + y ω₋`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct OneForm {
    pub plus: AlgebraElement,
    pub minus: AlgebraElement,
}

impl OneForm {
    pub fn new(plus: AlgebraElement, minus: AlgebraElement) -> Self {
        Self { plus, minus }
    }

    pub fn plus(x: AlgebraElement) -> Self {
        Self { plus: x, minus: AlgebraElement::zero() }
    }

    pub fn minus(y: AlgebraElement) -> Self {
        Self { plus: AlgebraElement::zero(), minus: y }
    }

    pub fn is_zero(&self) -> bool {
        self.plus.is_zero() && self.minus.is_zero()
    }

    pub fn to_tensor(&self) -> FrameTensor {
        let mut t = FrameTensor::zero();
        t.add_term(vec![Slot::P], &self.plus);
        t.add_term(vec![Slot::M], &self.minus);
        t
    }

    pub fn mul_left(&self, z: &AlgebraElement) -> OneForm {
        OneForm { plus: z * &self.plus, minus: z * &self.minus }
    }

    pub fn mul_right(&self, z: &AlgebraElement) -> OneForm {
        OneForm { plus: &self.plus * z, minus: &self.minus * z }
    }

    pub fn add(&self, other: &OneForm) -> OneForm {
        OneForm { plus: &self.plus + &other.plus, minus: &self.minus + &other.minus }
    }

    /// Degree (1,0) and (0,1) parts have the right coefficient grades.
    pub fn grades_consistent(&self) -> bool {
        (self.plus.is_zero() || self.plus.grade() == Some(-2))
            && (self.minus.is_zero() || self.minus.grade() == Some(2))
    }
}
