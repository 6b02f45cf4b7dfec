//! The quantized coordinate ring of SU(2) in normal form.
//!
//! Relations: `ab = q ba`, `ac = q ca`, `bc = cb`, `bd = q db`, `cd = q dc`,
//! `ad = 1 + q bc`, `da = 1 + q⁻¹ bc`. Normal monomials are `a^i b^j c^k`
//! and `d^i b^j c^k`. The grading has `a, c` in degree +1 and `b, d` in
//! degree -1.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    A,
    B,
    C,
    D,
}

impl Letter {
    pub fn grade(self) -> i64 {
        match self {
            Letter::A | Letter::C => 1,
            Letter::B | Letter::D => -1,
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'a' => Ok(Letter::A),
            'b' => Ok(Letter::B),
            'c' => Ok(Letter::C),
            'd' => Ok(Letter::D),
            _ => Err(Error::Parse(format!("unknown generator {c:?}"))),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::C => 'c',
            Letter::D => 'd',
        }
    }
}

/// Parses a word such as `"dab"`.
pub fn parse_word(s: &str) -> Result<Vec<Letter>> {
    s.chars().filter(|c| !c.is_whitespace()).map(Letter::from_char).collect()
}

/// `head^i b^j c^k` with `head` either `a` or `d`; `a` when `i = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mono {
    pub head: Letter,
    pub i: u32,
    pub j: u32,
    pub k: u32,
}

impl Mono {
    pub const ONE: Mono = Mono { head: Letter::A, i: 0, j: 0, k: 0 };

    pub fn new(head: Letter, i: u32, j: u32, k: u32) -> Self {
        debug_assert!(matches!(head, Letter::A | Letter::D));
        let head = if i == 0 { Letter::A } else { head };
        Self { head, i, j, k }
    }

    pub fn grade(&self) -> i64 {
        let h = if self.head == Letter::A { 1 } else { -1 };
        h * self.i as i64 - self.j as i64 + self.k as i64
    }

    pub fn word(&self) -> Vec<Letter> {
        let mut w = vec![self.head; self.i as usize];
        w.extend(std::iter::repeat_n(Letter::B, self.j as usize));
        w.extend(std::iter::repeat_n(Letter::C, self.k as usize));
        w
    }

    /// `self · x` expanded in normal monomials.
    fn mul_letter(&self, x: Letter) -> Vec<(Scalar, Mono)> {
        let Mono { head, i, j, k } = *self;
        match x {
            Letter::C => vec![(Scalar::one(), Mono::new(head, i, j, k + 1))],
            Letter::B => vec![(Scalar::one(), Mono::new(head, i, j + 1, k))],
            Letter::A => {
                // b^j c^k a = q^{-(j+k)} a b^j c^k
                let f = Scalar::q_pow(-((j + k) as i64));
                if head == Letter::A || i == 0 {
                    vec![(f, Mono::new(Letter::A, i + 1, j, k))]
                } else {
                    // d a = 1 + q⁻¹ bc
                    vec![
                        (f.clone(), Mono::new(Letter::D, i - 1, j, k)),
                        (f * Scalar::q_pow(-1), Mono::new(Letter::D, i - 1, j + 1, k + 1)),
                    ]
                }
            }
            Letter::D => {
                // b^j c^k d = q^{j+k} d b^j c^k
                let f = Scalar::q_pow((j + k) as i64);
                if head == Letter::D || i == 0 {
                    vec![(f, Mono::new(Letter::D, i + 1, j, k))]
                } else {
                    // a d = 1 + q bc
                    vec![
                        (f.clone(), Mono::new(Letter::A, i - 1, j, k)),
                        (f * Scalar::q(), Mono::new(Letter::A, i - 1, j + 1, k + 1)),
                    ]
                }
            }
        }
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.i + self.j + self.k == 0 {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (ch, e) in [(self.head.to_char(), self.i), ('b', self.j), ('c', self.k)] {
            match e {
                0 => {}
                1 => parts.push(ch.to_string()),
                _ => parts.push(format!("{ch}^{e}")),
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// A finite linear combination of normal monomials.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<Mono, Scalar>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(Scalar::one())
    }

    pub fn scalar(s: Scalar) -> Self {
        Self::monomial(s, Mono::ONE)
    }

    pub fn monomial(c: Scalar, m: Mono) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn generator(x: Letter) -> Self {
        Self::one().mul_letter(x)
    }

    /// Normal form of a product of generators, e.g. `"dab"`.
    pub fn from_word(s: &str) -> Result<Self> {
        Ok(normal_form(&parse_word(s)?))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Scalar::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect() }
    }

    /// The grade if the element is homogeneous; `None` for zero or mixed grades.
    pub fn grade(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(Mono::grade);
        let g = it.next()?;
        it.all(|h| h == g).then_some(g)
    }

    /// If the element is `s · 1`, return `s`.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Mono::ONE).cloned(),
            _ => None,
        }
    }

    pub fn mul_letter(&self, x: Letter) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (f, m2) in m.mul_letter(x) {
                out.add_term(m2, c * &f);
            }
        }
        out
    }

    pub fn mul_word(&self, w: &[Letter]) -> Self {
        w.iter().fold(self.clone(), |acc, &x| acc.mul_letter(x))
    }

    /// `K ▷ self`, acting on each homogeneous part by `q^{-grade}`.
    pub fn k_act(&self, power: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (*m, c * &Scalar::q_pow(-power * m.grade()))).collect(),
        }
    }

    /// `E ▷ self` with `E ▷ a = b`, `E ▷ c = d` and `E ▷ (xy) = (E ▷ x)(K ▷ y) + x (E ▷ y)`.
    pub fn e_act(&self) -> Self {
        self.act(Letter::A, Letter::B, Letter::C, Letter::D, true)
    }

    /// `F ▷ self` with `F ▷ b = a`, `F ▷ d = c` and `F ▷ (xy) = (F ▷ x) y + (K⁻¹ ▷ x)(F ▷ y)`.
    pub fn f_act(&self) -> Self {
        self.act(Letter::B, Letter::A, Letter::D, Letter::C, false)
    }

    fn act(&self, from1: Letter, to1: Letter, from2: Letter, to2: Letter, is_e: bool) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let w = m.word();
            for p in 0..w.len() {
                let img = if w[p] == from1 {
                    to1
                } else if w[p] == from2 {
                    to2
                } else {
                    continue;
                };
                let factor = if is_e {
                    -w[p + 1..].iter().map(|x| x.grade()).sum::<i64>()
                } else {
                    w[..p].iter().map(|x| x.grade()).sum::<i64>()
                };
                let mut nw = w.clone();
                nw[p] = img;
                let term = normal_form(&nw).scale(&(c * &Scalar::q_pow(factor)));
                out = &out + &term;
            }
        }
        out
    }
}

/// Normal form of a product of generators.
pub fn normal_form(word: &[Letter]) -> AlgebraElement {
    AlgebraElement::one().mul_word(word)
}

impl Add<&AlgebraElement> for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub<&AlgebraElement> for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(&Scalar::from_int(-1))
    }
}

impl Mul<&AlgebraElement> for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (m, c) in &rhs.terms {
            out = &out + &self.mul_word(&m.word()).scale(c);
        }
        out
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})*{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraElement({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(w: &str) -> AlgebraElement {
        AlgebraElement::from_word(w).unwrap()
    }

    fn sc(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    #[test]
    fn basic_normal_forms() {
        assert_eq!(el("ba"), el("ab").scale(&sc("q^-1")));
        assert_eq!(el("ad"), &AlgebraElement::one() + &el("bc").scale(&sc("q")));
        assert_eq!(el("da"), &AlgebraElement::one() + &el("bc").scale(&sc("q^-1")));
        assert_eq!(el("cb"), el("bc"));
        assert_eq!(el("db"), el("bd").scale(&sc("q^-1")));
    }

    #[test]
    fn defining_relations_hold() {
        let q = sc("q");
        assert_eq!(el("ab"), el("ba").scale(&q));
        assert_eq!(el("ac"), el("ca").scale(&q));
        assert_eq!(el("bd"), el("db").scale(&q));
        assert_eq!(el("cd"), el("dc").scale(&q));
        let lhs = &el("ad") - &el("da");
        assert_eq!(lhs, el("bc").scale(&(sc("q") - sc("q^-1"))));
    }

    #[test]
    fn grading_is_additive() {
        for w in ["ab", "dd", "acb", "dabc", "ccd"] {
            let x = el(w);
            let g: i64 = parse_word(w).unwrap().iter().map(|l| l.grade()).sum();
            assert_eq!(x.grade(), Some(g), "{w}");
        }
    }

    #[test]
    fn actions_on_generators() {
        let a = AlgebraElement::generator(Letter::A);
        assert_eq!(a.e_act(), AlgebraElement::generator(Letter::B));
        assert!(AlgebraElement::generator(Letter::B).e_act().is_zero());
        assert_eq!(AlgebraElement::generator(Letter::D).f_act(), AlgebraElement::generator(Letter::C));
        assert!(a.f_act().is_zero());
    }

    #[test]
    fn actions_respect_relations() {
        // E and F must annihilate every defining relation
        let one = AlgebraElement::one();
        let rels = [
            &el("ab") - &el("ba").scale(&sc("q")),
            &el("ac") - &el("ca").scale(&sc("q")),
            &el("bc") - &el("cb"),
            &el("bd") - &el("db").scale(&sc("q")),
            &el("cd") - &el("dc").scale(&sc("q")),
            &(&el("ad") - &one) - &el("bc").scale(&sc("q")),
        ];
        for r in rels {
            assert!(r.e_act().is_zero());
            assert!(r.f_act().is_zero());
        }
        // on the raw word "da", before normal ordering
        let raw = {
            let mut t = AlgebraElement::zero();
            t.add_term(Mono::new(Letter::D, 1, 0, 0), Scalar::one());
            t.mul_letter(Letter::A)
        };
        assert_eq!(raw, el("da"));
    }

    #[test]
    fn e_and_f_commute_on_grade_zero() {
        for w in ["ab", "bc", "dc", "abab", "dcab"] {
            let x = el(w);
            assert_eq!(x.e_act().f_act(), x.f_act().e_act(), "{w}");
        }
    }
}
