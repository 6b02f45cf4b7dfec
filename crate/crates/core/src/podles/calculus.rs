//! First and second order differential calculus on the grade-zero subalgebra.
//!
//! `d b = (E ▷ b) ω₊ + (F ▷ b) ω₋` on functions,
//! `d(x ω₊) = c₊ (F ▷ x) ω₋∧ω₊`, `d(y ω₋) = c₋ (E ▷ y) ω₊∧ω₋` on 1-forms,
//! with `ω₋∧ω₊ = -ŝ⁻¹ ω₊∧ω₋`. The scalars `c₋`, `ŝ` and `c₊` are not
//! hard-coded: they are solved in that order from the Leibniz rules and then
//! every remaining identity, including `d² = 0`, is re-checked.

use serde::{Deserialize, Serialize};

use super::algebra::AlgebraElement;
use super::forms::{FrameTensor, OneForm, Slot};
use super::{samples, solve_scalar};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Calculus {
    /// Relation scalar in `ω₋∧ω₊ = -ŝ⁻¹ ω₊∧ω₋`.
    pub shat: Scalar,
    pub c_plus: Scalar,
    pub c_minus: Scalar,
}

impl Calculus {
    /// Determines the calculus constants and verifies all identities.
    pub fn solve() -> Result<Self> {
        let zs = samples::grade_zero();
        let xs = samples::grade_minus_two();
        let ys = samples::grade_plus_two();

        // left Leibniz on y ω₋: c₋ (E▷(zy) - z E▷y) = (E▷z) y
        let mut eqs = Vec::new();
        for z in &zs {
            for y in &ys {
                let coef = &(z * y).e_act() - &(z * &y.e_act());
                eqs.push((coef, &z.e_act() * y));
            }
        }
        let c_minus = solve_scalar(&eqs).map_err(|e| ctx("d on Ω⁻", e))?;

        // right Leibniz on y ω₋: t · y (E▷z) = c₋ (E▷(yz) - (E▷y) z), t = ŝ⁻¹
        let mut eqs = Vec::new();
        for z in &zs {
            for y in &ys {
                let rhs = (&(y * z).e_act() - &(&y.e_act() * z)).scale(&c_minus);
                eqs.push((y * &z.e_act(), rhs));
            }
        }
        let t = solve_scalar(&eqs).map_err(|e| ctx("wedge relation", e))?;

        // left Leibniz on x ω₊: c₊ (-t)(F▷(zx) - z F▷x) = -t (F▷z) x
        let mut eqs = Vec::new();
        for z in &zs {
            for x in &xs {
                let coef = (&(z * x).f_act() - &(z * &x.f_act())).scale(&-&t);
                eqs.push((coef, (&z.f_act() * x).scale(&-&t)));
            }
        }
        let c_plus = solve_scalar(&eqs).map_err(|e| ctx("d on Ω⁺", e))?;

        let calc = Calculus { shat: t.inv()?, c_plus, c_minus };
        calc.verify()?;
        Ok(calc)
    }

    fn t(&self) -> Scalar {
        self.shat.inv().expect("ŝ is nonzero")
    }

    /// `d` on grade-zero elements.
    pub fn d0(&self, x: &AlgebraElement) -> Result<OneForm> {
        if let Some((m, _)) = x.terms().find(|(m, _)| m.grade() != 0) {
            return Err(Error::NonzeroGrade(m.grade()));
        }
        Ok(OneForm::new(x.e_act(), x.f_act()))
    }

    /// `d` on 1-forms; returns the coefficient of `ω₊∧ω₋`.
    pub fn d1(&self, xi: &OneForm) -> AlgebraElement {
        let p = xi.plus.f_act().scale(&-&(&self.c_plus * &self.t()));
        let m = xi.minus.e_act().scale(&self.c_minus);
        &p + &m
    }

    /// `ξ ∧ η` as a coefficient of `ω₊∧ω₋`.
    pub fn wedge(&self, xi: &OneForm, eta: &OneForm) -> AlgebraElement {
        &(&xi.plus * &eta.minus) - &(&xi.minus * &eta.plus).scale(&self.t())
    }

    /// `ω_i ∧ ω_j` as a multiple of `ω₊∧ω₋`.
    pub fn wedge_slots(&self, a: Slot, b: Slot) -> Scalar {
        match (a, b) {
            (Slot::P, Slot::M) => Scalar::one(),
            (Slot::M, Slot::P) => -self.t(),
            _ => Scalar::zero(),
        }
    }

    /// Applies `∧` to the first two frame slots of every term.
    pub fn wedge_tensor(&self, t: &FrameTensor) -> FrameTensor {
        let mut out = FrameTensor::zero();
        for (k, c) in t.terms() {
            if k.len() < 2 {
                continue;
            }
            let w = self.wedge_slots(k[0], k[1]);
            if w.is_zero() {
                continue;
            }
            let mut key = vec![Slot::Vol];
            key.extend_from_slice(&k[2..]);
            out.add_term(key, &c.scale(&w));
        }
        out
    }

    /// Leibniz rules, `d1 = 0`, and `d² = 0` on the sample elements.
    pub fn verify(&self) -> Result<()> {
        let zs = samples::grade_zero();
        let fail = |what: &str| Err(Error::RelationFailure(what.to_string()));
        if !self.d0(&AlgebraElement::one())?.is_zero() {
            return fail("d1 != 0");
        }
        for z in &zs {
            if !self.d1(&self.d0(z)?).is_zero() {
                return fail("d² != 0 on a generator of B");
            }
            for w in &zs {
                let zw = z * w;
                let lhs = self.d0(&zw)?;
                let rhs = self.d0(z)?.mul_right(w).add(&self.d0(w)?.mul_left(z));
                if lhs != rhs {
                    return fail("Leibniz rule on B");
                }
                if !self.d1(&lhs).is_zero() {
                    return fail("d² != 0 on a product in B");
                }
            }
            for xi in samples::one_forms() {
                let dz = self.d0(z)?;
                let left = &self.d1(&xi.mul_left(z)) - &(&self.wedge(&dz, &xi) + &(z * &self.d1(&xi)));
                if !left.is_zero() {
                    return fail("left Leibniz rule on 1-forms");
                }
                let right = &self.d1(&xi.mul_right(z)) - &(&(&self.d1(&xi) * z) - &self.wedge(&xi, &dz));
                if !right.is_zero() {
                    return fail("right Leibniz rule on 1-forms");
                }
            }
        }
        Ok(())
    }
}

fn ctx(what: &str, e: Error) -> Error {
    Error::InconsistentSystem(format!("{what}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solved_constants() {
        let c = Calculus::solve().unwrap();
        assert_eq!(c.shat, Scalar::q_pow(-2));
        assert_eq!(c.c_plus, Scalar::one());
        assert_eq!(c.c_minus, Scalar::q_pow(2));
    }

    #[test]
    fn d_rejects_nonzero_grade() {
        let c = Calculus::solve().unwrap();
        let a = AlgebraElement::from_word("a").unwrap();
        assert_eq!(c.d0(&a), Err(Error::NonzeroGrade(1)));
        assert!(c.d0(&AlgebraElement::one()).unwrap().is_zero());
    }
}
