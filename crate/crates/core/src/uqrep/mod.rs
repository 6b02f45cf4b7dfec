//! Finite-dimensional weight modules over a quantized enveloping algebra or
//! one of its Levi factors.
//!
//! A module stores the weight of each basis vector (Dynkin labels) and the
//! matrices of `E_j`, `F_j` for the acting nodes `j`. Every `K_i`, for all
//! nodes of the root system, acts diagonally by `q^{d_i lambda_i}`.
//!
//! Tensor products use `Δ(E) = E⊗K + 1⊗E`, `Δ(F) = F⊗1 + K⁻¹⊗F`,
//! `Δ(K) = K⊗K`; duals use the antipode `S(E) = -EK⁻¹`, `S(F) = -KF`.

mod braiding;

use std::sync::Arc;

use serde::Serialize;

use crate::cartan::{CartanData, FlagSpec};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

pub use braiding::braiding;

/// The subalgebra generated by all `K_i^{±1}` and the `E_j`, `F_j` for `j` in `nodes`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ActingAlgebra {
    cartan: CartanData,
    nodes: Vec<usize>,
}

impl ActingAlgebra {
    pub fn full(cartan: CartanData) -> Arc<Self> {
        let nodes = (0..cartan.rank()).collect();
        Arc::new(Self { cartan, nodes })
    }

    pub fn levi(flag: &FlagSpec) -> Arc<Self> {
        Arc::new(Self { cartan: flag.cartan().clone(), nodes: flag.levi_set() })
    }

    /// Acting nodes are 0-based and must be sorted and distinct.
    pub fn with_nodes(cartan: CartanData, nodes: Vec<usize>) -> Result<Arc<Self>> {
        if nodes.windows(2).any(|w| w[0] >= w[1]) || nodes.iter().any(|&n| n >= cartan.rank()) {
            return Err(Error::InvalidConfig(format!("bad acting node list {nodes:?}")));
        }
        Ok(Arc::new(Self { cartan, nodes }))
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cartan
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    /// Maximal runs of consecutive acting nodes.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for &n in &self.nodes {
            match out.last_mut() {
                Some(run) if *run.last().unwrap() + 1 == n => run.push(n),
                _ => out.push(vec![n]),
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Generator {
    K(usize),
    E(usize),
    F(usize),
}

#[derive(Clone, Debug)]
pub struct UqModule {
    algebra: Arc<ActingAlgebra>,
    weights: Vec<Vec<i64>>,
    e: Vec<Matrix>,
    f: Vec<Matrix>,
}

impl PartialEq for UqModule {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.weights == other.weights && self.e == other.e && self.f == other.f
    }
}

impl UqModule {
    /// Builds a module and verifies every defining relation exactly.
    pub fn new(algebra: Arc<ActingAlgebra>, weights: Vec<Vec<i64>>, e: Vec<Matrix>, f: Vec<Matrix>) -> Result<Self> {
        let m = Self::from_parts(algebra, weights, e, f)?;
        m.check_relations()?;
        Ok(m)
    }

    fn from_parts(algebra: Arc<ActingAlgebra>, weights: Vec<Vec<i64>>, e: Vec<Matrix>, f: Vec<Matrix>) -> Result<Self> {
        let dim = weights.len();
        let n = algebra.nodes.len();
        if e.len() != n || f.len() != n {
            return Err(Error::DimensionMismatch(format!("expected {n} E and F matrices")));
        }
        if weights.iter().any(|w| w.len() != algebra.rank()) {
            return Err(Error::DimensionMismatch("weight length differs from rank".into()));
        }
        if e.iter().chain(&f).any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::DimensionMismatch(format!("generator matrices must be {dim}x{dim}")));
        }
        Ok(Self { algebra, weights, e, f })
    }

    pub fn trivial(algebra: Arc<ActingAlgebra>) -> Self {
        let n = algebra.nodes.len();
        let rank = algebra.rank();
        Self { algebra, weights: vec![vec![0; rank]], e: vec![Matrix::zeros(1, 1); n], f: vec![Matrix::zeros(1, 1); n] }
    }

    /// The defining `(n+1)`-dimensional module of `A_n`, restricted to the given acting nodes.
    pub fn vector_rep(algebra: Arc<ActingAlgebra>) -> Result<Self> {
        let cartan = algebra.cartan();
        if cartan.series() != crate::cartan::Series::A {
            return Err(Error::NotImplementedForFlag("vector module needs series A".into()));
        }
        let n = cartan.rank();
        let weights: Vec<Vec<i64>> = (0..=n)
            .map(|k| (0..n).map(|i| i64::from(i == k) - i64::from(i + 1 == k)).collect())
            .collect();
        let mut e = Vec::new();
        let mut f = Vec::new();
        for &i in algebra.nodes() {
            let mut em = Matrix::zeros(n + 1, n + 1);
            em.set(i, i + 1, Scalar::one());
            f.push(em.transpose());
            e.push(em);
        }
        Self::new(algebra, weights, e, f)
    }

    /// The irreducible `U_q(sl_2)` module of dimension `m + 1`.
    pub fn sl2_irrep(m: usize) -> Result<Self> {
        let algebra = ActingAlgebra::full(CartanData::new(crate::cartan::Series::A, 1)?);
        let dim = m + 1;
        let weights = (0..dim).map(|k| vec![m as i64 - 2 * k as i64]).collect();
        let mut e = Matrix::zeros(dim, dim);
        let mut f = Matrix::zeros(dim, dim);
        for k in 0..dim {
            if k > 0 {
                e.set(k - 1, k, Scalar::q_int((m - k + 1) as i64));
            }
            if k + 1 < dim {
                f.set(k + 1, k, Scalar::q_int(k as i64 + 1));
            }
        }
        Self::new(algebra, weights, vec![e], vec![f])
    }

    pub fn algebra(&self) -> &Arc<ActingAlgebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    fn pos(&self, node: usize) -> Result<usize> {
        self.algebra
            .nodes
            .iter()
            .position(|&n| n == node)
            .ok_or(Error::NodeOutOfRange { node: node + 1, rank: self.algebra.rank() })
    }

    /// Matrix of `E_node` (0-based node, must be acting).
    pub fn e(&self, node: usize) -> Result<&Matrix> {
        Ok(&self.e[self.pos(node)?])
    }

    pub fn f(&self, node: usize) -> Result<&Matrix> {
        Ok(&self.f[self.pos(node)?])
    }

    pub fn k_power(&self, node: usize, power: i64) -> Matrix {
        let d = self.algebra.cartan().d(node);
        Matrix::diagonal(self.weights.iter().map(|w| Scalar::q_pow(power * d * w[node])).collect())
    }

    pub fn k(&self, node: usize) -> Matrix {
        self.k_power(node, 1)
    }

    pub fn k_inv(&self, node: usize) -> Matrix {
        self.k_power(node, -1)
    }

    /// Every generator with its matrix: `K_i` for all nodes, then `E_j`, `F_j` for acting nodes.
    pub fn generators(&self) -> Vec<(Generator, Matrix)> {
        let mut out: Vec<(Generator, Matrix)> = (0..self.algebra.rank()).map(|i| (Generator::K(i), self.k(i))).collect();
        for (p, &j) in self.algebra.nodes.iter().enumerate() {
            out.push((Generator::E(j), self.e[p].clone()));
            out.push((Generator::F(j), self.f[p].clone()));
        }
        out
    }

    pub fn generator(&self, g: &Generator) -> Result<Matrix> {
        match *g {
            Generator::K(i) if i < self.algebra.rank() => Ok(self.k(i)),
            Generator::K(i) => Err(Error::NodeOutOfRange { node: i + 1, rank: self.algebra.rank() }),
            Generator::E(j) => self.e(j).cloned(),
            Generator::F(j) => self.f(j).cloned(),
        }
    }

    /// Checks the defining relations as exact matrix identities.
    pub fn check_relations(&self) -> Result<()> {
        let cartan = self.algebra.cartan();
        let nodes = &self.algebra.nodes;
        for i in 0..cartan.rank() {
            let k = self.k(i);
            let kinv = self.k_inv(i);
            for (p, &j) in nodes.iter().enumerate() {
                let qa = Scalar::q_pow(cartan.d(i) * cartan.a(i, j));
                if &(&k * &self.e[p]) * &kinv != self.e[p].scale(&qa) {
                    return Err(Error::RelationFailure(format!("K{} E{} K{}^-1", i + 1, j + 1, i + 1)));
                }
                let qa_inv = qa.inv()?;
                if &(&k * &self.f[p]) * &kinv != self.f[p].scale(&qa_inv) {
                    return Err(Error::RelationFailure(format!("K{} F{} K{}^-1", i + 1, j + 1, i + 1)));
                }
            }
        }
        for (p, &i) in nodes.iter().enumerate() {
            for (r, &j) in nodes.iter().enumerate() {
                let comm = &(&self.e[p] * &self.f[r]) - &(&self.f[r] * &self.e[p]);
                let expected = if i == j {
                    let di = cartan.d(i);
                    let denom = Scalar::q_pow(di) - Scalar::q_pow(-di);
                    (&self.k(i) - &self.k_inv(i)).scale(&denom.inv()?)
                } else {
                    Matrix::zeros(self.dim(), self.dim())
                };
                if comm != expected {
                    return Err(Error::RelationFailure(format!("[E{}, F{}]", i + 1, j + 1)));
                }
                if i != j {
                    let n = (1 - cartan.a(i, j)) as u32;
                    let d = cartan.d(i);
                    if !serre(&self.e[p], &self.e[r], n, d).is_zero() {
                        return Err(Error::RelationFailure(format!("Serre relation for E{}, E{}", i + 1, j + 1)));
                    }
                    if !serre(&self.f[p], &self.f[r], n, d).is_zero() {
                        return Err(Error::RelationFailure(format!("Serre relation for F{}, F{}", i + 1, j + 1)));
                    }
                }
            }
        }
        Ok(())
    }

    fn same_algebra(&self, other: &UqModule) -> Result<()> {
        if self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::MismatchedAlgebras)
        }
    }

    /// `self ⊗ other`; basis index `i * other.dim() + j`.
    pub fn tensor(&self, other: &UqModule) -> Result<UqModule> {
        self.same_algebra(other)?;
        let weights = self
            .weights
            .iter()
            .flat_map(|a| other.weights.iter().map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect()))
            .collect();
        let id_l = Matrix::identity(self.dim());
        let id_r = Matrix::identity(other.dim());
        let mut e = Vec::new();
        let mut f = Vec::new();
        for (p, &j) in self.algebra.nodes.iter().enumerate() {
            e.push(&self.e[p].kron(&other.k(j)) + &id_l.kron(&other.e[p]));
            f.push(&self.f[p].kron(&id_r) + &self.k_inv(j).kron(&other.f[p]));
        }
        UqModule::from_parts(self.algebra.clone(), weights, e, f)
    }

    pub fn dual(&self) -> UqModule {
        let weights = self.weights.iter().map(|w| w.iter().map(|x| -x).collect()).collect();
        let mut e = Vec::new();
        let mut f = Vec::new();
        for (p, &j) in self.algebra.nodes.iter().enumerate() {
            e.push((-&(&self.e[p] * &self.k_inv(j))).transpose());
            f.push((-&(&self.k(j) * &self.f[p])).transpose());
        }
        UqModule { algebra: self.algebra.clone(), weights, e, f }
    }

    pub fn direct_sum(&self, other: &UqModule) -> Result<UqModule> {
        self.same_algebra(other)?;
        let weights = self.weights.iter().chain(&other.weights).cloned().collect();
        let e = self.e.iter().zip(&other.e).map(|(a, b)| a.block_diag(b)).collect();
        let f = self.f.iter().zip(&other.f).map(|(a, b)| a.block_diag(b)).collect();
        UqModule::from_parts(self.algebra.clone(), weights, e, f)
    }

    /// The same module viewed over a subalgebra with fewer acting nodes.
    pub fn restrict(&self, sub: Arc<ActingAlgebra>) -> Result<UqModule> {
        if sub.cartan != self.algebra.cartan {
            return Err(Error::MismatchedAlgebras);
        }
        let mut e = Vec::new();
        let mut f = Vec::new();
        for &j in &sub.nodes {
            e.push(self.e(j)?.clone());
            f.push(self.f(j)?.clone());
        }
        UqModule::from_parts(sub, self.weights.clone(), e, f)
    }

    /// Module structure on a space given by a projection and an embedding,
    /// `X ↦ proj · X · emb`. The caller guarantees the image is a submodule
    /// or the kernel of `proj` is one; the result is re-verified.
    pub fn transport(&self, proj: &Matrix, emb: &Matrix, weights: Vec<Vec<i64>>) -> Result<UqModule> {
        let e = self.e.iter().map(|x| proj * &(x * emb)).collect();
        let f = self.f.iter().map(|x| proj * &(x * emb)).collect();
        UqModule::new(self.algebra.clone(), weights, e, f)
    }
}

/// `sum_k (-1)^k [n choose k]_{q^d} X^{n-k} Y X^k`.
fn serre(x: &Matrix, y: &Matrix, n: u32, d: i64) -> Matrix {
    let dim = x.rows();
    let mut pows = vec![Matrix::identity(dim)];
    for k in 1..=n as usize {
        pows.push(&pows[k - 1] * x);
    }
    let mut acc = Matrix::zeros(dim, dim);
    for k in 0..=n {
        let c = Scalar::q_binomial_d(n, k, d);
        let c = if k % 2 == 1 { -c } else { c };
        let term = &(&pows[(n - k) as usize] * y) * &pows[k as usize];
        acc = &acc + &term.scale(&c);
    }
    acc
}

/// A linear map between modules that commutes with every generator.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantMap {
    source: UqModule,
    target: UqModule,
    matrix: Matrix,
}

impl EquivariantMap {
    pub fn new(source: UqModule, target: UqModule, matrix: Matrix) -> Result<Self> {
        let map = Self { source, target, matrix };
        map.check()?;
        Ok(map)
    }

    pub fn source(&self) -> &UqModule {
        &self.source
    }

    pub fn target(&self) -> &UqModule {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    /// Re-verifies equivariance against every generator.
    pub fn check(&self) -> Result<()> {
        check_equivariant(&self.source, &self.target, &self.matrix)
    }

    pub fn compose(&self, after: &EquivariantMap) -> Result<EquivariantMap> {
        if self.target != after.source {
            return Err(Error::DimensionMismatch("composition of maps with different middle modules".into()));
        }
        Ok(EquivariantMap {
            source: self.source.clone(),
            target: after.target.clone(),
            matrix: after.matrix.checked_mul(&self.matrix)?,
        })
    }

    pub fn inverse(&self) -> Result<EquivariantMap> {
        Ok(EquivariantMap {
            source: self.target.clone(),
            target: self.source.clone(),
            matrix: self.matrix.inverse()?,
        })
    }

    pub fn scale(&self, k: &Scalar) -> EquivariantMap {
        EquivariantMap { source: self.source.clone(), target: self.target.clone(), matrix: self.matrix.scale(k) }
    }
}

/// Checks `matrix · X_source = X_target · matrix` for every generator `X`.
pub fn check_equivariant(source: &UqModule, target: &UqModule, matrix: &Matrix) -> Result<()> {
    source.same_algebra(target)?;
    if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
        return Err(Error::DimensionMismatch(format!(
            "map is {}x{}, modules have dimensions {} -> {}",
            matrix.rows(),
            matrix.cols(),
            source.dim(),
            target.dim()
        )));
    }
    for (g, xs) in source.generators() {
        let xt = target.generator(&g)?;
        if matrix.checked_mul(&xs)? != xt.checked_mul(matrix)? {
            return Err(Error::NotEquivariant(format!("fails to commute with {g:?}")));
        }
    }
    Ok(())
}

/// Basis of the space of equivariant maps `M → N`.
pub fn intertwiners(m: &UqModule, n: &UqModule) -> Result<Vec<EquivariantMap>> {
    m.same_algebra(n)?;
    // only weight-preserving entries can be nonzero since every K_i acts
    let mut unknowns = Vec::new();
    let mut index = vec![vec![None; m.dim()]; n.dim()];
    for r in 0..n.dim() {
        for c in 0..m.dim() {
            if n.weights[r] == m.weights[c] {
                index[r][c] = Some(unknowns.len());
                unknowns.push((r, c));
            }
        }
    }
    if unknowns.is_empty() {
        return Ok(Vec::new());
    }
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for p in 0..m.algebra.nodes.len() {
        for (xm, xn) in [(&m.e[p], &n.e[p]), (&m.f[p], &n.f[p])] {
            // (T xm - xn T)[r, c]
            for r in 0..n.dim() {
                for c in 0..m.dim() {
                    let mut eq = vec![Scalar::zero(); unknowns.len()];
                    let mut any = false;
                    for k in 0..m.dim() {
                        if let Some(u) = index[r][k] {
                            let v = xm.get(k, c);
                            if !v.is_zero() {
                                eq[u] += v;
                                any = true;
                            }
                        }
                    }
                    for k in 0..n.dim() {
                        if let Some(u) = index[k][c] {
                            let v = xn.get(r, k);
                            if !v.is_zero() {
                                eq[u] -= v;
                                any = true;
                            }
                        }
                    }
                    if any && eq.iter().any(|x| !x.is_zero()) {
                        rows.push(eq);
                    }
                }
            }
        }
    }
    let basis = if rows.is_empty() {
        (0..unknowns.len())
            .map(|u| (0..unknowns.len()).map(|v| if u == v { Scalar::one() } else { Scalar::zero() }).collect())
            .collect()
    } else {
        Matrix::from_rows(rows)?.nullspace()
    };
    basis
        .into_iter()
        .map(|v| {
            let mut t = Matrix::zeros(n.dim(), m.dim());
            for (u, &(r, c)) in unknowns.iter().enumerate() {
                t.set(r, c, v[u].clone());
            }
            EquivariantMap::new(m.clone(), n.clone(), t)
        })
        .collect()
}

/// Basis of the invariant vectors of `M`.
pub fn invariants(m: &UqModule) -> Vec<Vec<Scalar>> {
    let triv = UqModule::trivial(m.algebra.clone());
    intertwiners(&triv, m)
        .expect("trivial module shares the acting algebra")
        .into_iter()
        .map(|t| t.matrix().col(0))
        .collect()
}

/// Permutation `M ⊗ N → N ⊗ M` of tensor basis vectors.
pub fn flip_matrix(dim_m: usize, dim_n: usize) -> Matrix {
    let mut p = Matrix::zeros(dim_m * dim_n, dim_m * dim_n);
    for i in 0..dim_m {
        for j in 0..dim_n {
            p.set(j * dim_m + i, i * dim_n + j, Scalar::one());
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::Series;

    fn a(n: usize) -> Arc<ActingAlgebra> {
        ActingAlgebra::full(CartanData::new(Series::A, n).unwrap())
    }

    #[test]
    fn vector_modules_satisfy_relations() {
        for n in 1..=4 {
            let v = UqModule::vector_rep(a(n)).unwrap();
            v.dual().check_relations().unwrap();
            v.tensor(&v).unwrap().check_relations().unwrap();
            v.tensor(&v.dual()).unwrap().check_relations().unwrap();
        }
        for m in 0..=4 {
            let v = UqModule::sl2_irrep(m).unwrap();
            v.tensor(&v).unwrap().check_relations().unwrap();
        }
    }

    #[test]
    fn broken_module_is_rejected() {
        let alg = a(1);
        let mut e = Matrix::zeros(2, 2);
        e.set(0, 1, Scalar::from_int(2));
        let f = e.transpose();
        let r = UqModule::new(alg, vec![vec![1], vec![-1]], vec![e], vec![f]);
        assert!(matches!(r, Err(Error::RelationFailure(_))));
    }

    #[test]
    fn tensor_with_trivial_and_weights() {
        let alg = a(2);
        let v = UqModule::vector_rep(alg.clone()).unwrap();
        let t = UqModule::trivial(alg).tensor(&v).unwrap();
        assert_eq!(t, v);
        let vv = v.tensor(&v.dual()).unwrap();
        assert_eq!(vv.dim(), 9);
        for i in 0..3 {
            for j in 0..3 {
                let w: Vec<i64> = v.weights()[i].iter().zip(&v.dual().weights()[j]).map(|(x, y)| x + y).collect();
                assert_eq!(vv.weights()[3 * i + j], w);
            }
        }
    }

    #[test]
    fn sl2_tensor_square_e_has_rank_two() {
        let v = UqModule::vector_rep(a(1)).unwrap();
        assert_eq!(v.tensor(&v).unwrap().e(0).unwrap().rank(), 2);
    }

    #[test]
    fn schur_and_coevaluation() {
        let alg = a(2);
        let v = UqModule::vector_rep(alg.clone()).unwrap();
        assert_eq!(intertwiners(&v, &v).unwrap().len(), 1);
        let triv = UqModule::trivial(alg);
        assert_eq!(intertwiners(&triv, &v.tensor(&v.dual()).unwrap()).unwrap().len(), 1);
        assert_eq!(invariants(&triv).len(), 1);
        assert!(invariants(&UqModule::vector_rep(a(1)).unwrap()).is_empty());
    }

    #[test]
    fn mismatched_algebras() {
        let v1 = UqModule::vector_rep(a(1)).unwrap();
        let v2 = UqModule::vector_rep(a(2)).unwrap();
        assert_eq!(v1.tensor(&v2).unwrap_err(), Error::MismatchedAlgebras);
        assert_eq!(intertwiners(&v1, &v2).unwrap_err(), Error::MismatchedAlgebras);
    }

    #[test]
    fn levi_components() {
        let flag: FlagSpec = "A4:2".parse().unwrap();
        assert_eq!(ActingAlgebra::levi(&flag).components(), vec![vec![0], vec![2, 3]]);
    }
}
