//! Geometry of the quantum projective line (the standard Podleś sphere):
//! coordinate ring, calculus, metric, Levi-Civita connection, curvature and
//! the Ricci coefficients `a(q)`, `b(q)`.

pub mod algebra;
pub mod calculus;
pub mod forms;
pub mod geometry;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

pub use algebra::{normal_form, parse_word, AlgebraElement, Letter, Mono};
pub use calculus::Calculus;
pub use forms::{FrameTensor, OneForm, Slot};
pub use geometry::{ConnectionData, CurvatureData, FrameLift, Geometry, MetricData, RicciInputs};

/// Elements used to impose and verify identities.
pub mod samples {
    use super::algebra::AlgebraElement;
    use super::forms::OneForm;

    fn words(ws: &[&str]) -> Vec<AlgebraElement> {
        ws.iter().map(|w| AlgebraElement::from_word(w).expect("valid word")).collect()
    }

    /// Generators of the grade-zero subalgebra.
    pub fn grade_zero() -> Vec<AlgebraElement> {
        words(&["ab", "cb", "cd"])
    }

    pub fn grade_minus_two() -> Vec<AlgebraElement> {
        words(&["bb", "db", "dd", "bbbc"])
    }

    pub fn grade_plus_two() -> Vec<AlgebraElement> {
        words(&["cc", "ac", "aa", "accb"])
    }

    pub fn one_forms() -> Vec<OneForm> {
        let mut out: Vec<OneForm> = grade_minus_two().into_iter().map(OneForm::plus).collect();
        out.extend(grade_plus_two().into_iter().map(OneForm::minus));
        out
    }
}

/// The unique `t` with `coef · t = rhs` for every pair.
pub(crate) fn solve_scalar(eqs: &[(AlgebraElement, AlgebraElement)]) -> Result<Scalar> {
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (coef, r) in eqs {
        let mut monos: Vec<_> = coef.terms().map(|(m, _)| *m).collect();
        monos.extend(r.terms().map(|(m, _)| *m));
        monos.sort();
        monos.dedup();
        for m in monos {
            rows.push(vec![coef.coeff(&m)]);
            rhs.push(r.coeff(&m));
        }
    }
    if rows.is_empty() {
        return Err(Error::NonUniqueSolution("no equations".into()));
    }
    Ok(Matrix::from_rows(rows)?.solve_unique(&rhs)?.remove(0))
}

/// Solves `f(θ) = 0` for an affine map `f` into frame tensors; the solution must be unique.
///
/// Returns the solution and the dimension of the solution space of the
/// homogeneous system (zero on success).
pub(crate) fn solve_affine(
    unknowns: usize,
    f: impl Fn(&[Scalar]) -> Result<Vec<FrameTensor>>,
) -> Result<Vec<Scalar>> {
    let zero = vec![Scalar::zero(); unknowns];
    let base = flatten_all(&f(&zero)?);
    let mut cols = Vec::with_capacity(unknowns);
    for u in 0..unknowns {
        let mut e = zero.clone();
        e[u] = Scalar::one();
        let val = flatten_all(&f(&e)?);
        let mut col = BTreeMap::new();
        for (k, v) in &val {
            let b = base.get(k).cloned().unwrap_or_else(Scalar::zero);
            let d = v - &b;
            if !d.is_zero() {
                col.insert(k.clone(), d);
            }
        }
        for (k, b) in &base {
            if !val.contains_key(k) {
                col.insert(k.clone(), -b);
            }
        }
        cols.push(col);
    }
    let mut keys: Vec<_> = base.keys().cloned().collect();
    for c in &cols {
        keys.extend(c.keys().cloned());
    }
    keys.sort();
    keys.dedup();
    if keys.is_empty() {
        return Err(Error::NonUniqueSolution(format!("{unknowns} unknowns and no constraints")));
    }
    let a = Matrix::from_fn(keys.len(), unknowns, |r, c| {
        cols[c].get(&keys[r]).cloned().unwrap_or_else(Scalar::zero)
    });
    let b: Vec<Scalar> = keys.iter().map(|k| -base.get(k).cloned().unwrap_or_else(Scalar::zero)).collect();
    let (x, kernel) = a.solve_affine(&b).map_err(|e| match e {
        Error::InconsistentSystem(_) => Error::InconsistentSystem(format!(
            "{} equations in {unknowns} unknowns (rank {}) have no solution",
            keys.len(),
            a.rank()
        )),
        other => other,
    })?;
    if !kernel.is_empty() {
        return Err(Error::NonUniqueSolution(format!(
            "solution space of dimension {} in an ansatz of {unknowns} unknowns",
            kernel.len()
        )));
    }
    Ok(x)
}

type FlatKey = (usize, Vec<Slot>, Mono);

fn flatten_all(ts: &[FrameTensor]) -> BTreeMap<FlatKey, Scalar> {
    let mut out = BTreeMap::new();
    for (i, t) in ts.iter().enumerate() {
        for ((k, m), v) in t.flatten() {
            out.insert((i, k, m), v);
        }
    }
    out
}

/// Result of the full pipeline: fiber lifting maps transported to the frame,
/// geometry, and the Ricci coefficients.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub geometry: Geometry,
    pub lift_pm: FrameLift,
    pub lift_mp: FrameLift,
    pub inputs: RicciInputs,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PodlesReport {
    pub a: Scalar,
    pub b: Scalar,
    pub a_plus_b: Scalar,
    /// Exact rational, `a(1) b(1) / (a(1) + b(1))`.
    pub classical_lambda: String,
}

/// Runs fiber lifts, geometry and Ricci for the quantum projective line with the given Ŝ normalization.
pub fn run_pipeline(shat_normalization: &Scalar) -> Result<Pipeline> {
    let flag: crate::cartan::FlagSpec = "A1:1".parse()?;
    let fc = crate::fibercalc::FiberCalculus::new(&flag, shat_normalization)?;
    let lift_pm = FrameLift::from_fiber(&fc, &fc.lift_pm()?)?;
    let lift_mp = FrameLift::from_fiber(&fc, &fc.lift_mp()?)?;
    let geometry = Geometry::build()?;
    let inputs = geometry.ricci_inputs(&lift_pm, &lift_mp)?;
    Ok(Pipeline { geometry, lift_pm, lift_mp, inputs })
}

impl Pipeline {
    pub fn report(&self) -> Result<PodlesReport> {
        let RicciInputs { a, b } = &self.inputs;
        let (a1, b1) = (a.classical_limit()?, b.classical_limit()?);
        let s1 = &a1 + &b1;
        if s1 == num::BigRational::from_integer(0.into()) {
            return Err(Error::NoEinsteinLift);
        }
        Ok(PodlesReport {
            a: a.clone(),
            b: b.clone(),
            a_plus_b: a + b,
            classical_lambda: (a1 * b1 / s1).to_string(),
        })
    }
}
