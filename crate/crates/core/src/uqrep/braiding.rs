//! Braiding `M ⊗ N → N ⊗ M` from the quasi-R-matrix.
//!
//! `R̂ = flip ∘ D ∘ Θ`, where `D` multiplies `m ⊗ n` by `q^{(wt m, wt n)}`
//! and `Θ` is the ordered product over positive roots `β` of the acting
//! algebra of
//!
//! ```text
//! Θ_β = Σ_n q^{n(n-1)/2} (q - q⁻¹)^n / [n]! · E_β^n ⊗ F_β^n
//! ```
//!
//! Only series A is supported. For `β = ε_i - ε_j` the root vectors are
//! built recursively, `E_{i,j+1} = E_{ij} E_j - q⁻¹ E_j E_{ij}` and
//! `F_{i,j+1} = F_j F_{ij} - q F_{ij} F_j`, and the product runs over
//! `(i, j)` in lexicographic order.

use num::{One, ToPrimitive};

use super::{flip_matrix, EquivariantMap, UqModule};
use crate::cartan::Series;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Root vectors `(E_β on M, F_β on N)` in the product order of `Θ`.
fn root_vectors(m: &UqModule, n: &UqModule) -> Result<Vec<(Matrix, Matrix)>> {
    let q = Scalar::q();
    let qi = Scalar::q_pow(-1);
    let mut out = Vec::new();
    for comp in m.algebra().components() {
        // ε indices run over comp[0] ..= last + 1
        let lo = comp[0];
        let hi = *comp.last().unwrap() + 1;
        for i in lo..hi {
            let mut e = m.e(i)?.clone();
            let mut f = n.f(i)?.clone();
            out.push((e.clone(), f.clone()));
            for j in i + 1..hi {
                let ej = m.e(j)?;
                let fj = n.f(j)?;
                e = &(&e * ej) - &(ej * &e).scale(&qi);
                f = &(fj * &f) - &(&f * fj).scale(&q);
                out.push((e.clone(), f.clone()));
            }
        }
    }
    Ok(out)
}

fn theta_factor(e: &Matrix, f: &Matrix) -> Result<Matrix> {
    let q = Scalar::q();
    let dq = &q - &q.inv()?;
    let mut acc = Matrix::identity(e.rows() * f.rows());
    let mut en = Matrix::identity(e.rows());
    let mut fnn = Matrix::identity(f.rows());
    let mut n = 0i64;
    loop {
        en = &en * e;
        fnn = &fnn * f;
        n += 1;
        if en.is_zero() || fnn.is_zero() {
            return Ok(acc);
        }
        let mut c = Scalar::q_pow(n * (n - 1) / 2) * dq.pow(n)?;
        c = c.checked_div(&Scalar::q_factorial_d(n as u32, 1))?;
        acc = &acc + &en.kron(&fnn).scale(&c);
    }
}

/// The braiding `M ⊗ N → N ⊗ M`; equivariance and invertibility are re-verified.
pub fn braiding(m: &UqModule, n: &UqModule) -> Result<EquivariantMap> {
    let mn = m.tensor(n)?;
    let nm = n.tensor(m)?;
    let cartan = m.algebra().cartan();
    if cartan.series() != Series::A {
        return Err(Error::NotImplementedForFlag(format!(
            "braiding is implemented for series A only, got {}{}",
            cartan.series(),
            cartan.rank()
        )));
    }
    let mut theta = Matrix::identity(mn.dim());
    for (e, f) in root_vectors(m, n)? {
        theta = &theta * &theta_factor(&e, &f)?;
    }
    let mut diag = Vec::with_capacity(mn.dim());
    for wm in m.weights() {
        for wn in n.weights() {
            let pairing = cartan.weight_pairing(wm, wn);
            let twice = pairing * num::BigRational::from_integer(2.into());
            if !twice.denom().is_one() {
                return Err(Error::NotImplementedForFlag(format!(
                    "weight pairing {} is not a half-integer",
                    twice / num::BigRational::from_integer(2.into())
                )));
            }
            let k = twice.numer().to_i64().ok_or_else(|| Error::InvalidConfig("weight pairing overflow".into()))?;
            diag.push(Scalar::s_pow(k));
        }
    }
    let r = &flip_matrix(m.dim(), n.dim()) * &(&Matrix::diagonal(diag) * &theta);
    let map = EquivariantMap::new(mn, nm, r)
        .map_err(|e| Error::NotEquivariant(format!("braiding failed its equivariance check: {e}")))?;
    map.matrix()
        .inverse()
        .map_err(|e| Error::Singular(format!("braiding is not invertible: {e}")))?;
    Ok(map)
}
