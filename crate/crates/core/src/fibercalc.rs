//! Fiber-level first and second order forms of a series-A flag, and the
//! lifting maps splitting the wedge projection.
//!
//! With `N = V10 ⊗ V01` and `N' = V01 ⊗ V10`, the degree-two fiber is
//! `V11 = (N ⊕ N') / span{x + Ŝx}`. It is identified with `N` through the
//! complement `[I; 0]`, so the wedge projection is read off from the inverse
//! of `[R | C]` where `R = [I; Ŝ]` spans the relations.

use num::{BigRational, One};
use serde::Serialize;

use crate::cartan::{FlagSpec, Series};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::uqrep::{self, check_equivariant, flip_matrix, ActingAlgebra, EquivariantMap, UqModule};

/// Cotangent fibers `(V10, V01)` as modules over the Levi factor.
///
/// For `A_n` with crossed node `s`, `V10` has basis `e_ij` with `i <= s < j`
/// and weight `ε_i - ε_j`; `V01` is its dual.
pub fn cotangent_fibers(flag: &FlagSpec) -> Result<(UqModule, UqModule)> {
    let cartan = flag.cartan();
    if cartan.series() != Series::A {
        return Err(Error::NotImplementedForFlag(flag.to_string()));
    }
    let n = cartan.rank();
    let s = flag.node();
    let basis: Vec<(usize, usize)> = (1..=s).flat_map(|i| (s + 1..=n + 1).map(move |j| (i, j))).collect();
    let index = |i: usize, j: usize| basis.iter().position(|&b| b == (i, j));
    let weights: Vec<Vec<i64>> = basis
        .iter()
        .map(|&(i, j)| {
            (1..=n)
                .map(|k| {
                    i64::from(i == k) - i64::from(i == k + 1) - i64::from(j == k) + i64::from(j == k + 1)
                })
                .collect()
        })
        .collect();
    let algebra = ActingAlgebra::levi(flag);
    let dim = basis.len();
    let mut es = Vec::new();
    let mut fs = Vec::new();
    for &node in algebra.nodes() {
        let k = node + 1;
        let mut e = Matrix::zeros(dim, dim);
        for &(i, j) in &basis {
            // E_k raises e_{k+1,j} -> e_{k,j} on the left index, e_{i,k} -> e_{i,k+1} on the right
            let target = if k < s && i == k + 1 {
                index(k, j)
            } else if k > s && j == k {
                index(i, k + 1)
            } else {
                None
            };
            if let Some(t) = target {
                e.set(t, index(i, j).unwrap(), Scalar::one());
            }
        }
        fs.push(e.transpose());
        es.push(e);
    }
    let v10 = UqModule::new(algebra, weights, es, fs)?;
    let v01 = v10.dual();
    v01.check_relations()?;
    Ok((v10, v01))
}

/// Default scalar relating Ŝ to the braiding.
pub fn default_shat_normalization(_flag: &FlagSpec) -> Scalar {
    Scalar::one()
}

/// `Ŝ = normalization · R̂_{V10,V01}`; the normalization must have classical limit 1.
pub fn shat(flag: &FlagSpec, normalization: &Scalar) -> Result<EquivariantMap> {
    match normalization.classical_limit() {
        Ok(c) if c.is_one() => {}
        Ok(c) => {
            return Err(Error::NormalizationRejected(format!(
                "{normalization} has classical limit {c}, expected 1"
            )))
        }
        Err(_) => {
            return Err(Error::NormalizationRejected(format!("{normalization} has a pole at q = 1")))
        }
    }
    let (v10, v01) = cotangent_fibers(flag)?;
    let r = uqrep::braiding(&v10, &v01)?.scale(normalization);
    r.check()?;
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LiftImage {
    /// Image inside `V10 ⊗ V01`.
    PlusMinus,
    /// Image inside `V01 ⊗ V10`.
    MinusPlus,
    Mixed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftingMap {
    matrix: Matrix,
    image: LiftImage,
    weights: Option<(Scalar, Scalar)>,
}

impl LiftingMap {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn image(&self) -> LiftImage {
        self.image
    }

    /// Convex weights `(c1, c2)` when built by [`combine`].
    pub fn weights(&self) -> Option<&(Scalar, Scalar)> {
        self.weights.as_ref()
    }
}

/// `c1·l1 + c2·l2`, accepted only when `c1 + c2 = 1`.
pub fn combine(l1: &LiftingMap, l2: &LiftingMap, c1: &Scalar, c2: &Scalar) -> Result<LiftingMap> {
    if !(c1 + c2).is_one() {
        return Err(Error::NotConvex);
    }
    if (l1.matrix.rows(), l1.matrix.cols()) != (l2.matrix.rows(), l2.matrix.cols()) {
        return Err(Error::DimensionMismatch("lifting maps of different calculi".into()));
    }
    let matrix = &l1.matrix.scale(c1) + &l2.matrix.scale(c2);
    let image = if c2.is_zero() {
        l1.image
    } else if c1.is_zero() {
        l2.image
    } else if l1.image == l2.image {
        l1.image
    } else {
        LiftImage::Mixed
    };
    Ok(LiftingMap { matrix, image, weights: Some((c1.clone(), c2.clone())) })
}

#[derive(Clone, Debug)]
pub struct FiberCalculus {
    flag: FlagSpec,
    v10: UqModule,
    v01: UqModule,
    normalization: Scalar,
    shat: EquivariantMap,
    shat_inv: Matrix,
    v_sum: UqModule,
    relations: Matrix,
    complement: Matrix,
    wedge: Matrix,
    v11: UqModule,
}

impl FiberCalculus {
    pub fn new(flag: &FlagSpec, normalization: &Scalar) -> Result<Self> {
        let (v10, v01) = cotangent_fibers(flag)?;
        let shat = shat(flag, normalization)?;
        let shat_inv = shat.matrix().inverse()?;
        let n = shat.matrix().rows();
        let relations = Matrix::identity(n).vstack(shat.matrix())?;
        let rank = relations.rank();
        if rank != n {
            return Err(Error::RankDeficient(format!("relation space has rank {rank}, expected {n}")));
        }
        let complement = Matrix::identity(n).vstack(&Matrix::zeros(n, n))?;
        let frame = relations.hstack(&complement)?;
        let frame_inv = frame
            .inverse()
            .map_err(|_| Error::RankDeficient("complement does not span the quotient".into()))?;
        let wedge = frame_inv.submatrix(n..2 * n, 0..2 * n);
        let pm = v10.tensor(&v01)?;
        let mp = v01.tensor(&v10)?;
        let v_sum = pm.direct_sum(&mp)?;
        let v11 = v_sum.transport(&wedge, &complement, pm.weights().to_vec())?;
        Ok(Self {
            flag: flag.clone(),
            v10,
            v01,
            normalization: normalization.clone(),
            shat,
            shat_inv,
            v_sum,
            relations,
            complement,
            wedge,
            v11,
        })
    }

    pub fn with_default_normalization(flag: &FlagSpec) -> Result<Self> {
        Self::new(flag, &default_shat_normalization(flag))
    }

    pub fn flag(&self) -> &FlagSpec {
        &self.flag
    }

    pub fn v10(&self) -> &UqModule {
        &self.v10
    }

    pub fn v01(&self) -> &UqModule {
        &self.v01
    }

    pub fn v11(&self) -> &UqModule {
        &self.v11
    }

    /// `(V10 ⊗ V01) ⊕ (V01 ⊗ V10)`.
    pub fn v_sum(&self) -> &UqModule {
        &self.v_sum
    }

    pub fn normalization(&self) -> &Scalar {
        &self.normalization
    }

    pub fn shat(&self) -> &EquivariantMap {
        &self.shat
    }

    /// Columns span the relation subspace.
    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    pub fn wedge(&self) -> &Matrix {
        &self.wedge
    }

    fn block(&self) -> usize {
        self.shat.matrix().rows()
    }

    /// `v ⊗ w ↦ v ⊗ w`, `w ⊗ v ↦ -Ŝ⁻¹(w ⊗ v)`, as a map into `V10 ⊗ V01`.
    pub fn premap_pm(&self) -> Matrix {
        let n = self.block();
        Matrix::identity(n).hstack(&-&self.shat_inv).expect("square blocks")
    }

    /// `v ⊗ w ↦ -Ŝ(v ⊗ w)`, `w ⊗ v ↦ w ⊗ v`, as a map into `V01 ⊗ V10`.
    pub fn premap_mp(&self) -> Matrix {
        let n = self.block();
        (-self.shat.matrix()).hstack(&Matrix::identity(n)).expect("square blocks")
    }

    fn descend(&self, premap: &Matrix, what: &str) -> Result<Matrix> {
        let on_relations = premap * &self.relations;
        if !on_relations.is_zero() {
            return Err(Error::NotWellDefined(format!(
                "{what} does not vanish on {} relation vectors",
                (0..on_relations.cols()).filter(|&c| on_relations.col(c).iter().any(|x| !x.is_zero())).count()
            )));
        }
        Ok(premap * &self.complement)
    }

    pub fn lift_pm(&self) -> Result<LiftingMap> {
        let n = self.block();
        let top = self.descend(&self.premap_pm(), "s+-")?;
        let matrix = top.vstack(&Matrix::zeros(n, n))?;
        Ok(LiftingMap { matrix, image: LiftImage::PlusMinus, weights: None })
    }

    pub fn lift_mp(&self) -> Result<LiftingMap> {
        let n = self.block();
        let bottom = self.descend(&self.premap_mp(), "s-+")?;
        let matrix = Matrix::zeros(n, n).vstack(&bottom)?;
        Ok(LiftingMap { matrix, image: LiftImage::MinusPlus, weights: None })
    }

    /// Exact checks that `ℓ` splits the wedge and is equivariant.
    pub fn check_lift(&self, lift: &LiftingMap) -> Result<()> {
        let w = self.wedge.checked_mul(&lift.matrix)?;
        if !w.is_identity() {
            return Err(Error::NotWellDefined("wedge ∘ lift is not the identity".into()));
        }
        check_equivariant(&self.v11, &self.v_sum, &lift.matrix)
    }

    /// `V¹ = V10 ⊕ V01`.
    pub fn one_forms(&self) -> Result<UqModule> {
        self.v10.direct_sum(&self.v01)
    }

    pub fn dump(&self) -> Result<FiberDump> {
        Ok(FiberDump {
            flag: self.flag.to_string(),
            dim_v10: self.v10.dim(),
            dim_v01: self.v01.dim(),
            dim_v11: self.v11.dim(),
            shat: self.shat.matrix().clone(),
            lift_pm: self.lift_pm()?.matrix,
            lift_mp: self.lift_mp()?.matrix,
        })
    }

    /// Runs every fiber-level invariant and reports each by name.
    pub fn run_checks(&self) -> Vec<CheckResult> {
        let mut out = Vec::new();
        let mut push = |name: &str, r: Result<()>| {
            out.push(CheckResult {
                name: name.to_string(),
                passed: r.is_ok(),
                detail: r.err().map(|e| e.to_string()),
            })
        };
        push("shat_equivariant", self.shat.check());
        push("shat_classical_flip", self.check_shat_classical());
        push("dim_v11", {
            let expected = self.v10.dim() * self.v01.dim();
            if self.v11.dim() == expected {
                Ok(())
            } else {
                Err(Error::RankDeficient(format!("dim V11 = {}, expected {expected}", self.v11.dim())))
            }
        });
        push("wedge_kills_relations", self.check_wedge_relations());
        let lifts = self.lift_pm().and_then(|pm| {
            let mp = self.lift_mp()?;
            let half = Scalar::from_ratio(1, 2);
            let mid = combine(&pm, &mp, &half, &half)?;
            Ok((pm, mp, mid))
        });
        match &lifts {
            Ok((pm, mp, mid)) => {
                for (name, l) in [("lift_pm", pm), ("lift_mp", mp), ("lift_half", mid)] {
                    push(name, self.check_lift(l));
                }
                push("lift_classical_limits", self.check_lift_classical(pm, mp));
            }
            Err(e) => push("lift_construction", Err(e.clone())),
        }
        push("invariants_v1_v1", {
            self.one_forms().and_then(|v1| {
                let d = uqrep::invariants(&v1.tensor(&v1)?).len();
                if d == 2 {
                    Ok(())
                } else {
                    Err(Error::RankDeficient(format!("invariant space has dimension {d}, expected 2")))
                }
            })
        });
        out
    }

    fn check_shat_classical(&self) -> Result<()> {
        let lim = self.shat.matrix().classical_limit()?;
        let flip = flip_matrix(self.v10.dim(), self.v01.dim()).classical_limit()?;
        if lim == flip {
            Ok(())
        } else {
            Err(Error::NotWellDefined("classical limit of Ŝ is not the flip".into()))
        }
    }

    fn check_wedge_relations(&self) -> Result<()> {
        if (&self.wedge * &self.relations).is_zero() {
            Ok(())
        } else {
            Err(Error::NotWellDefined("wedge does not vanish on v⊗w + Ŝ(v⊗w)".into()))
        }
    }

    /// Expected classical limits: `s+-` is `[I; 0]` and `s-+` is `[0; -flip]`.
    fn check_lift_classical(&self, pm: &LiftingMap, mp: &LiftingMap) -> Result<()> {
        let n = self.block();
        let flip = flip_matrix(self.v10.dim(), self.v01.dim());
        let expect_pm = Matrix::identity(n).vstack(&Matrix::zeros(n, n))?.classical_limit()?;
        let expect_mp = Matrix::zeros(n, n).vstack(&-&flip)?.classical_limit()?;
        let got_pm: Vec<Vec<BigRational>> = pm.matrix.classical_limit()?;
        let got_mp: Vec<Vec<BigRational>> = mp.matrix.classical_limit()?;
        if got_pm != expect_pm {
            return Err(Error::NotWellDefined("classical limit of s+- is not v∧w ↦ v⊗w".into()));
        }
        if got_mp != expect_mp {
            return Err(Error::NotWellDefined("classical limit of s-+ is not v∧w ↦ -w⊗v".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberDump {
    pub flag: String,
    pub dim_v10: usize,
    pub dim_v01: usize,
    pub dim_v11: usize,
    pub shat: Matrix,
    pub lift_pm: Matrix,
    pub lift_mp: Matrix,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flag(s: &str) -> FlagSpec {
        s.parse().unwrap()
    }

    #[test]
    fn fiber_dimensions() {
        let (a, b) = cotangent_fibers(&flag("A1:1")).unwrap();
        assert_eq!((a.dim(), b.dim()), (1, 1));
        assert_eq!(a.weights()[0], vec![2]);
        assert_eq!(b.weights()[0], vec![-2]);
        let (a, b) = cotangent_fibers(&flag("A2:1")).unwrap();
        assert_eq!((a.dim(), b.dim()), (2, 2));
        let (a, _) = cotangent_fibers(&flag("A3:2")).unwrap();
        assert_eq!(a.dim(), 4);
    }

    #[test]
    fn unsupported_series() {
        assert!(matches!(cotangent_fibers(&flag("C3:3")), Err(Error::NotImplementedForFlag(_))));
    }

    #[test]
    fn cp1_shat_is_a_q_power() {
        let s = shat(&flag("A1:1"), &Scalar::one()).unwrap();
        assert_eq!(s.matrix().get(0, 0), &Scalar::q_pow(-2));
    }

    #[test]
    fn normalization_must_have_limit_one() {
        let f = flag("A1:1");
        assert!(matches!(shat(&f, &Scalar::from_int(2)), Err(Error::NormalizationRejected(_))));
        assert!(matches!(shat(&f, &"1/(q-1)".parse().unwrap()), Err(Error::NormalizationRejected(_))));
        shat(&f, &Scalar::q_pow(3)).unwrap();
    }

    #[test]
    fn cp2_v11() {
        let fc = FiberCalculus::with_default_normalization(&flag("A2:1")).unwrap();
        assert_eq!(fc.v11().dim(), 4);
        assert_eq!(fc.relations().rank(), 4);
    }

    #[test]
    fn premaps_descend() {
        let fc = FiberCalculus::with_default_normalization(&flag("A2:1")).unwrap();
        assert!((&fc.premap_pm() * fc.relations()).is_zero());
        assert!((&fc.premap_mp() * fc.relations()).is_zero());
    }

    #[test]
    fn combine_rules() {
        let fc = FiberCalculus::with_default_normalization(&flag("A1:1")).unwrap();
        let pm = fc.lift_pm().unwrap();
        let mp = fc.lift_mp().unwrap();
        let same = combine(&pm, &mp, &Scalar::one(), &Scalar::zero()).unwrap();
        assert_eq!(same.matrix(), pm.matrix());
        assert_eq!(same.image(), LiftImage::PlusMinus);
        let half = Scalar::from_ratio(1, 2);
        let mid = combine(&pm, &mp, &half, &half).unwrap();
        assert_eq!(mid.image(), LiftImage::Mixed);
        fc.check_lift(&mid).unwrap();
        assert_eq!(combine(&pm, &mp, &Scalar::one(), &Scalar::one()), Err(Error::NotConvex));
    }

    #[test]
    fn all_checks_pass_on_small_flags() {
        for f in ["A1:1", "A2:1", "A2:2", "A3:2"] {
            let fc = FiberCalculus::with_default_normalization(&flag(f)).unwrap();
            for c in fc.run_checks() {
                assert!(c.passed, "{f}: {} failed: {:?}", c.name, c.detail);
            }
        }
    }
}
