#![allow(dead_code)]

pub mod classical;
pub mod strategies;

use qflag_core::podles::AlgebraElement;

/// `X` with `op ▷ u = u·X` on `u = [[a, b], [c, d]]`, read off at `q = 1`.
pub fn classical_generator(op: impl Fn(&AlgebraElement) -> AlgebraElement) -> [[f64; 2]; 2] {
    let u = [["a", "b"], ["c", "d"]];
    let gen = |w: &str| AlgebraElement::from_word(w).unwrap();
    let coeff = |x: &AlgebraElement, w: &str| {
        let m = *gen(w).terms().next().unwrap().0;
        let c = x.coeff(&m).classical_limit().unwrap();
        num::ToPrimitive::to_f64(&c).unwrap()
    };
    let mut out = [[0.0; 2]; 2];
    for row in 0..2 {
        for col in 0..2 {
            let img = op(&gen(u[row][col]));
            for k in 0..2 {
                let v = coeff(&img, u[row][k]);
                if row == 0 {
                    out[k][col] = v;
                } else {
                    assert_eq!(out[k][col], v, "action is not right multiplication");
                }
            }
        }
    }
    out
}
