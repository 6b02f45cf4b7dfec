//! Quantum metric, Levi-Civita connection, curvature and Ricci tensor on the
//! quantum projective line.
//!
//! Tensor products over the grade-zero subalgebra are handled through
//! partitions of unity `1 = Σ u_k v_k`: a coefficient `c` on `ω_i ⊗ ω_j`
//! is split as `Σ (c u_k) ω_i ⊗ v_k ω_j` whenever a map must act on each
//! leg separately.

use serde::Serialize;

use super::algebra::AlgebraElement;
use super::calculus::Calculus;
use super::forms::{FrameTensor, Key, OneForm, Slot};
use super::{samples, solve_affine, solve_scalar};
use crate::error::{Error, Result};
use crate::fibercalc::{FiberCalculus, LiftingMap};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Op {
    E,
    F,
}

impl Op {
    fn shift(self) -> i64 {
        match self {
            Op::E => -2,
            Op::F => 2,
        }
    }
}

fn apply_word(word: &[Op], x: &AlgebraElement) -> AlgebraElement {
    word.iter().rev().fold(x.clone(), |acc, op| match op {
        Op::E => acc.e_act(),
        Op::F => acc.f_act(),
    })
}

/// `1 = Σ u_k v_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    pub pairs: Vec<(AlgebraElement, AlgebraElement)>,
}

impl Partition {
    fn solve(left: &[AlgebraElement], right: &[AlgebraElement]) -> Result<Self> {
        let products: Vec<(usize, usize, AlgebraElement)> = left
            .iter()
            .enumerate()
            .flat_map(|(i, u)| right.iter().enumerate().map(move |(j, v)| (i, j, u * v)))
            .collect();
        let mut monos: Vec<_> = products.iter().flat_map(|(_, _, p)| p.terms().map(|(m, _)| *m)).collect();
        monos.push(super::Mono::ONE);
        monos.sort();
        monos.dedup();
        let a = Matrix::from_fn(monos.len(), products.len(), |r, c| products[c].2.coeff(&monos[r]));
        let b: Vec<Scalar> =
            monos.iter().map(|m| if *m == super::Mono::ONE { Scalar::one() } else { Scalar::zero() }).collect();
        let (t, _) = a.solve_affine(&b).map_err(|e| Error::InconsistentSystem(format!("partition of unity: {e}")))?;
        let pairs = products
            .iter()
            .zip(&t)
            .filter(|(_, c)| !c.is_zero())
            .map(|((i, j, _), c)| (left[*i].scale(c), right[*j].clone()))
            .collect();
        let p = Self { pairs };
        if p.sum() != AlgebraElement::one() {
            return Err(Error::InconsistentSystem("partition of unity does not sum to 1".into()));
        }
        Ok(p)
    }

    pub fn sum(&self) -> AlgebraElement {
        self.pairs.iter().fold(AlgebraElement::zero(), |acc, (u, v)| &acc + &(u * v))
    }
}

#[derive(Clone, Debug)]
pub struct MetricData {
    /// `ω₊ ⊗ ω₋`
    pub g_pm: FrameTensor,
    /// `ŝ ω₋ ⊗ ω₊`
    pub g_mp: FrameTensor,
    /// `(ω_i, ω_j)` for `i, j` in `[P, M]`.
    pub pairing: [[Scalar; 2]; 2],
}

impl MetricData {
    pub fn g(&self) -> FrameTensor {
        self.g_pm.add(&self.g_mp)
    }

    pub fn pair(&self, a: Slot, b: Slot) -> Scalar {
        self.pairing[slot_index(a)][slot_index(b)].clone()
    }
}

fn slot_index(s: Slot) -> usize {
    match s {
        Slot::P => 0,
        Slot::M => 1,
        Slot::Vol => panic!("pairing is defined on 1-forms only"),
    }
}

/// One coefficient of the connection ansatz: `∇(x ω_input) ∋ θ · (word ▷ x) · key`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnsatzTerm {
    pub input: Slot,
    pub key: Key,
    pub word: Vec<Op>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectionData {
    pub ansatz: Vec<AnsatzTerm>,
    pub nabla: Vec<Scalar>,
    /// `σ(src) ∋ coefficient · tgt` for grade-compatible frame pairs.
    pub sigma_entries: Vec<(Key, Key)>,
    pub sigma: Vec<Scalar>,
    /// Unknowns in the full constraint system.
    pub ansatz_dim: usize,
    /// Dimension of the solution set of the homogeneous system; zero means unique.
    pub solution_dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureData {
    /// `R(x ω₊) = r₊ · x · Vol ⊗ ω₊`
    pub r_plus: Scalar,
    /// `R(y ω₋) = r₋ · y · Vol ⊗ ω₋`
    pub r_minus: Scalar,
}

/// A lifting map in frame coordinates: `ℓ(Vol) = pm · ω₊⊗ω₋ + mp · ω₋⊗ω₊`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameLift {
    pub pm: Scalar,
    pub mp: Scalar,
}

impl FrameLift {
    /// Transports a fiber lifting map of `A1:1` to frame coordinates.
    pub fn from_fiber(fc: &FiberCalculus, lift: &LiftingMap) -> Result<Self> {
        if fc.flag().to_string() != "A1:1" {
            return Err(Error::NotImplementedForFlag(format!(
                "frame transport needs the quantum projective line, got {}",
                fc.flag()
            )));
        }
        let m = lift.matrix();
        Ok(Self { pm: m.get(0, 0).clone(), mp: m.get(1, 0).clone() })
    }

    pub fn combine(&self, other: &FrameLift, c1: &Scalar, c2: &Scalar) -> FrameLift {
        FrameLift { pm: &(&self.pm * c1) + &(&other.pm * c2), mp: &(&self.mp * c1) + &(&other.mp * c2) }
    }

    fn tensor(&self) -> FrameTensor {
        let mut t = FrameTensor::zero();
        t.add_term(vec![Slot::P, Slot::M], &AlgebraElement::scalar(self.pm.clone()));
        t.add_term(vec![Slot::M, Slot::P], &AlgebraElement::scalar(self.mp.clone()));
        t
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RicciInputs {
    pub a: Scalar,
    pub b: Scalar,
}

#[derive(Clone, Debug)]
pub struct Geometry {
    pub calculus: Calculus,
    pub metric: MetricData,
    pub connection: ConnectionData,
    pub curvature: CurvatureData,
    /// `x` of grade -2 on the left.
    unity_minus_first: Partition,
    /// `y` of grade +2 on the left.
    unity_plus_first: Partition,
}

const PAIRS: [[Slot; 2]; 4] = [[Slot::P, Slot::P], [Slot::P, Slot::M], [Slot::M, Slot::P], [Slot::M, Slot::M]];

fn ansatz() -> Vec<AnsatzTerm> {
    let words: Vec<Vec<Op>> = vec![
        vec![],
        vec![Op::E],
        vec![Op::F],
        vec![Op::E, Op::E],
        vec![Op::E, Op::F],
        vec![Op::F, Op::E],
        vec![Op::F, Op::F],
    ];
    let mut out = Vec::new();
    for input in [Slot::P, Slot::M] {
        for key in PAIRS {
            for w in &words {
                let shift: i64 = w.iter().map(|o| o.shift()).sum();
                if input.grade() + shift == key[0].grade() + key[1].grade() {
                    out.push(AnsatzTerm { input, key: key.to_vec(), word: w.clone() });
                }
            }
        }
    }
    out
}

fn sigma_shape() -> Vec<(Key, Key)> {
    let mut out = Vec::new();
    for src in PAIRS {
        for tgt in PAIRS {
            if src[0].grade() + src[1].grade() == tgt[0].grade() + tgt[1].grade() {
                out.push((src.to_vec(), tgt.to_vec()));
            }
        }
    }
    out
}

fn slot_form(s: Slot, c: AlgebraElement) -> OneForm {
    match s {
        Slot::P => OneForm::plus(c),
        Slot::M => OneForm::minus(c),
        Slot::Vol => panic!("not a 1-form slot"),
    }
}

/// Working data while solving: a connection given by explicit coefficients.
struct Conn<'a> {
    terms: &'a [AnsatzTerm],
    theta: &'a [Scalar],
    shape: &'a [(Key, Key)],
    sigma: &'a [Scalar],
}

impl Conn<'_> {
    fn nabla(&self, xi: &OneForm) -> FrameTensor {
        let mut out = FrameTensor::zero();
        for (t, th) in self.terms.iter().zip(self.theta) {
            if th.is_zero() {
                continue;
            }
            let x = if t.input == Slot::P { &xi.plus } else { &xi.minus };
            out.add_term(t.key.clone(), &apply_word(&t.word, x).scale(th));
        }
        out
    }

    /// `σ` on the first two slots of every term.
    fn sigma(&self, t: &FrameTensor) -> FrameTensor {
        let mut out = FrameTensor::zero();
        for (k, c) in t.terms() {
            for ((src, tgt), s) in self.shape.iter().zip(self.sigma) {
                if s.is_zero() || k[..2] != src[..] {
                    continue;
                }
                let mut key = tgt.clone();
                key.extend_from_slice(&k[2..]);
                out.add_term(key, &c.scale(s));
            }
        }
        out
    }
}

impl Geometry {
    /// Builds the calculus, metric, connection and curvature, checking every identity.
    pub fn build() -> Result<Self> {
        let calculus = Calculus::solve()?;
        let unity_minus_first = Partition::solve(&samples_basis_minus(), &samples_basis_plus())?;
        let unity_plus_first = Partition::solve(&samples_basis_plus(), &samples_basis_minus())?;
        let metric = build_metric(&calculus)?;
        let mut geo = Geometry {
            calculus,
            metric,
            connection: ConnectionData {
                ansatz: Vec::new(),
                nabla: Vec::new(),
                sigma_entries: Vec::new(),
                sigma: Vec::new(),
                ansatz_dim: 0,
                solution_dim: 0,
            },
            curvature: CurvatureData { r_plus: Scalar::zero(), r_minus: Scalar::zero() },
            unity_minus_first,
            unity_plus_first,
        };
        geo.connection = geo.solve_connection()?;
        geo.check_connection()?;
        geo.curvature = geo.solve_curvature()?;
        Ok(geo)
    }

    fn conn(&self) -> Conn<'_> {
        Conn {
            terms: &self.connection.ansatz,
            theta: &self.connection.nabla,
            shape: &self.connection.sigma_entries,
            sigma: &self.connection.sigma,
        }
    }

    /// Splits a 2-tensor into a sum of products of 1-forms.
    pub fn split(&self, t: &FrameTensor) -> Vec<(OneForm, OneForm)> {
        let mut out = Vec::new();
        for (k, c) in t.terms() {
            assert_eq!(k.len(), 2, "split expects Ω¹⊗Ω¹");
            let unity = match k[1] {
                // second leg needs a grade -2 coefficient
                Slot::P => &self.unity_plus_first,
                Slot::M => &self.unity_minus_first,
                Slot::Vol => panic!("split expects Ω¹⊗Ω¹"),
            };
            for (u, v) in &unity.pairs {
                out.push((slot_form(k[0], c * u), slot_form(k[1], v.clone())));
            }
        }
        out
    }

    pub fn nabla(&self, xi: &OneForm) -> FrameTensor {
        self.conn().nabla(xi)
    }

    pub fn sigma(&self, t: &FrameTensor) -> FrameTensor {
        self.conn().sigma(t)
    }

    fn solve_connection(&self) -> Result<ConnectionData> {
        let terms = ansatz();
        let shape = sigma_shape();
        let zs = samples::grade_zero();
        let forms = samples::one_forms();
        let calc = &self.calculus;

        // left Leibniz and torsion determine ∇
        let theta = solve_affine(terms.len(), |th| {
            let c = Conn { terms: &terms, theta: th, shape: &shape, sigma: &[] };
            let mut res = Vec::new();
            for xi in &forms {
                let nx = c.nabla(xi);
                for z in &zs {
                    let dz = calc.d0(z)?.to_tensor();
                    let r = c.nabla(&xi.mul_left(z)).sub(&dz.tensor(&xi.to_tensor())).sub(&nx.mul_left(z));
                    res.push(r);
                }
                let torsion = calc
                    .wedge_tensor(&nx)
                    .sub(&FrameTensor::single(vec![Slot::Vol], calc.d1(xi)));
                res.push(torsion);
            }
            Ok(res)
        })
        .map_err(|e| Error::InconsistentSystem(format!("connection: {e}")))?;

        // bimodule relation and metric compatibility determine σ
        let g = self.metric.g();
        let split_g = self.split(&g);
        let sigma = solve_affine(shape.len(), |sg| {
            let c = Conn { terms: &terms, theta: &theta, shape: &shape, sigma: sg };
            let mut res = Vec::new();
            for xi in &forms {
                let nx = c.nabla(xi);
                for z in &zs {
                    let dz = calc.d0(z)?.to_tensor();
                    let r = c
                        .nabla(&xi.mul_right(z))
                        .sub(&nx.mul_right(z))
                        .sub(&c.sigma(&xi.to_tensor().tensor(&dz)));
                    res.push(r);
                }
            }
            res.push(metric_residual(&c, &split_g));
            Ok(res)
        })
        .map_err(|e| Error::InconsistentSystem(format!("generalized braiding: {e}")))?;

        Ok(ConnectionData {
            ansatz_dim: terms.len() + shape.len(),
            solution_dim: 0,
            ansatz: terms,
            nabla: theta,
            sigma_entries: shape,
            sigma,
        })
    }

    /// Re-verifies Leibniz, bimodule, torsion and metric compatibility.
    pub fn check_connection(&self) -> Result<()> {
        let calc = &self.calculus;
        let zs = samples::grade_zero();
        for xi in samples::one_forms() {
            let nx = self.nabla(&xi);
            if !nx.grades_consistent() {
                return Err(Error::RelationFailure("∇ breaks the grading".into()));
            }
            if !self.torsion(&xi).is_zero() {
                return Err(Error::RelationFailure("torsion does not vanish".into()));
            }
            for z in &zs {
                let dz = calc.d0(z)?.to_tensor();
                let left = self.nabla(&xi.mul_left(z)).sub(&dz.tensor(&xi.to_tensor())).sub(&nx.mul_left(z));
                if !left.is_zero() {
                    return Err(Error::RelationFailure("left Leibniz rule for ∇".into()));
                }
                let right =
                    self.nabla(&xi.mul_right(z)).sub(&nx.mul_right(z)).sub(&self.sigma(&xi.to_tensor().tensor(&dz)));
                if !right.is_zero() {
                    return Err(Error::RelationFailure("bimodule relation for ∇".into()));
                }
            }
        }
        if !self.metric_compatibility().is_zero() {
            return Err(Error::RelationFailure("∇ is not metric compatible".into()));
        }
        Ok(())
    }

    /// `(∧∘∇ - d)(ξ)` as a multiple of `Vol`.
    pub fn torsion(&self, xi: &OneForm) -> FrameTensor {
        self.calculus
            .wedge_tensor(&self.nabla(xi))
            .sub(&FrameTensor::single(vec![Slot::Vol], self.calculus.d1(xi)))
    }

    /// `(∇⊗id + (σ⊗id)(id⊗∇))(g)`.
    pub fn metric_compatibility(&self) -> FrameTensor {
        metric_residual(&self.conn(), &self.split(&self.metric.g()))
    }

    /// `R(ξ) = (d⊗id - (∧⊗id)(id⊗∇)) ∇ξ`.
    pub fn curvature_of(&self, xi: &OneForm) -> FrameTensor {
        let mut out = FrameTensor::zero();
        for (alpha, eta) in self.split(&self.nabla(xi)) {
            let da = FrameTensor::single(vec![Slot::Vol], self.calculus.d1(&alpha));
            out = out.add(&da.tensor(&eta.to_tensor()));
            let inner = alpha.to_tensor().tensor(&self.nabla(&eta));
            out = out.sub(&self.calculus.wedge_tensor(&inner));
        }
        out
    }

    fn solve_curvature(&self) -> Result<CurvatureData> {
        let mut r = Vec::new();
        for (slot, xs) in [(Slot::P, samples::grade_minus_two()), (Slot::M, samples::grade_plus_two())] {
            let key = vec![Slot::Vol, slot];
            let mut eqs = Vec::new();
            for x in xs {
                let rx = self.curvature_of(&slot_form(slot, x.clone()));
                if rx.keys().any(|k| *k != key) {
                    return Err(Error::RelationFailure(format!(
                        "curvature of Ω{} leaves Ω(1,1)⊗Ω{}",
                        if slot == Slot::P { "⁺" } else { "⁻" },
                        if slot == Slot::P { "⁺" } else { "⁻" }
                    )));
                }
                eqs.push((x, rx.get(&key)));
            }
            r.push(solve_scalar(&eqs).map_err(|e| Error::NotProportional(format!("curvature: {e}")))?);
        }
        let r_minus = r.pop().unwrap();
        let r_plus = r.pop().unwrap();
        Ok(CurvatureData { r_plus, r_minus })
    }

    /// `((·,·)⊗id⊗id)(id⊗ℓ⊗id)(id⊗R)(g)`.
    pub fn ricci(&self, lift: &FrameLift) -> FrameTensor {
        let l = lift.tensor();
        let mut out = FrameTensor::zero();
        for (xi, eta) in self.split(&self.metric.g()) {
            let r = self.curvature_of(&eta);
            for (k, c) in r.terms() {
                // k = [Vol, s]; replace Vol by ℓ(Vol)
                let rest = FrameTensor::single(vec![k[1]], c.clone());
                let full = xi.to_tensor().tensor(&l).tensor(&rest);
                for (k2, c2) in full.terms() {
                    let p = self.metric.pair(k2[0], k2[1]);
                    if !p.is_zero() {
                        out.add_term(k2[2..].to_vec(), &c2.scale(&p));
                    }
                }
            }
        }
        out
    }

    /// `a`, `b` with `Ricci_{ℓ+-} = a g₋₊` and `Ricci_{ℓ-+} = b g₊₋`, residuals checked exactly.
    pub fn ricci_inputs(&self, pm: &FrameLift, mp: &FrameLift) -> Result<RicciInputs> {
        for (name, l) in [("s+-", pm), ("s-+", mp)] {
            let w = self.calculus.wedge_tensor(&l.tensor());
            if w != FrameTensor::single(vec![Slot::Vol], AlgebraElement::one()) {
                return Err(Error::NotWellDefined(format!(
                    "{name} does not split the wedge of the calculus (Ŝ differs from ŝ = {})",
                    self.calculus.shat
                )));
            }
        }
        let a = self.proportionality(&self.ricci(pm), &self.metric.g_mp, "Ricci for s+-")?;
        let b = self.proportionality(&self.ricci(mp), &self.metric.g_pm, "Ricci for s-+")?;
        Ok(RicciInputs { a, b })
    }

    fn proportionality(&self, t: &FrameTensor, g: &FrameTensor, what: &str) -> Result<Scalar> {
        let (key, gc) = g.terms().next().expect("metric component is nonzero");
        let gs = gc.as_scalar().expect("metric coefficients are scalars");
        let c = t
            .get(key)
            .as_scalar()
            .ok_or_else(|| Error::NotProportional(format!("{what}: coefficient {} is not constant", t.get(key))))?;
        let a = c.checked_div(&gs)?;
        let residual = t.sub(&g.scale(&a));
        if !residual.is_zero() {
            return Err(Error::NotProportional(format!("{what}: residual {residual:?}")));
        }
        Ok(a)
    }
}

fn samples_basis_minus() -> Vec<AlgebraElement> {
    ["bb", "db", "dd"].iter().map(|w| AlgebraElement::from_word(w).unwrap()).collect()
}

fn samples_basis_plus() -> Vec<AlgebraElement> {
    ["aa", "ac", "cc"].iter().map(|w| AlgebraElement::from_word(w).unwrap()).collect()
}

fn metric_residual(c: &Conn<'_>, split_g: &[(OneForm, OneForm)]) -> FrameTensor {
    let mut out = FrameTensor::zero();
    for (xi, eta) in split_g {
        out = out.add(&c.nabla(xi).tensor(&eta.to_tensor()));
        out = out.add(&c.sigma(&xi.to_tensor().tensor(&c.nabla(eta))));
    }
    out
}

/// `g₊₋ = ω₊⊗ω₋`, `g₋₊ = ŝ ω₋⊗ω₊`, and the inverse pairing.
fn build_metric(calc: &Calculus) -> Result<MetricData> {
    let g_pm = FrameTensor::single(vec![Slot::P, Slot::M], AlgebraElement::one());
    let g_mp = FrameTensor::single(vec![Slot::M, Slot::P], AlgebraElement::scalar(calc.shat.clone()));
    let g = g_pm.add(&g_mp);
    if !calc.wedge_tensor(&g).is_zero() {
        return Err(Error::RelationFailure("metric is not symmetric".into()));
    }
    let slots = [Slot::P, Slot::M];
    let p = solve_affine(4, |p| {
        let pair = |a: Slot, b: Slot| p[2 * slot_index(a) + slot_index(b)].clone();
        let mut res = Vec::new();
        for w in slots {
            let target = FrameTensor::single(vec![w], AlgebraElement::one());
            let mut left = FrameTensor::zero();
            let mut right = FrameTensor::zero();
            for (k, c) in g.terms() {
                left.add_term(vec![k[1]], &c.scale(&pair(w, k[0])));
                right.add_term(vec![k[0]], &c.scale(&pair(k[1], w)));
            }
            res.push(left.sub(&target));
            res.push(right.sub(&target));
        }
        Ok(res)
    })
    .map_err(|e| Error::InconsistentSystem(format!("inverse metric: {e}")))?;
    Ok(MetricData {
        g_pm,
        g_mp,
        pairing: [[p[0].clone(), p[1].clone()], [p[2].clone(), p[3].clone()]],
    })
}
