//! Classical Riemannian oracle for the round 2-sphere.
//!
//! The sphere is SU(2)/U(1) with local section `u0 · (1+X)(1-X)^-1`,
//! `X = x A + y B` horizontal. Pulling back the Maurer-Cartan form gives the
//! frame `ω±`, hence the metric `g = ω+⊗ω- + ω-⊗ω+` in coordinates. The
//! Levi-Civita connection, its curvature and the Ricci contraction with the
//! antisymmetric lift are then computed from Taylor jets of `g` at the origin.

#![allow(dead_code)]

use num_complex::Complex64 as C;

const N: usize = 4;

/// Taylor coefficients `c[i][j]` of `x^i y^j`, total degree at most 3.
#[derive(Clone, Copy, Debug)]
pub struct Jet([[C; N]; N]);

impl Jet {
    fn zero() -> Self {
        Jet([[C::new(0.0, 0.0); N]; N])
    }

    fn constant(c: C) -> Self {
        let mut j = Self::zero();
        j.0[0][0] = c;
        j
    }

    fn x() -> Self {
        let mut j = Self::zero();
        j.0[1][0] = C::new(1.0, 0.0);
        j
    }

    fn y() -> Self {
        let mut j = Self::zero();
        j.0[0][1] = C::new(1.0, 0.0);
        j
    }

    fn value(&self) -> C {
        self.0[0][0]
    }

    fn add(&self, o: &Jet) -> Jet {
        let mut r = *self;
        for i in 0..N {
            for j in 0..N - i {
                r.0[i][j] += o.0[i][j];
            }
        }
        r
    }

    fn sub(&self, o: &Jet) -> Jet {
        self.add(&o.scale(C::new(-1.0, 0.0)))
    }

    fn scale(&self, c: C) -> Jet {
        let mut r = *self;
        for i in 0..N {
            for j in 0..N - i {
                r.0[i][j] *= c;
            }
        }
        r
    }

    fn mul(&self, o: &Jet) -> Jet {
        let mut r = Jet::zero();
        for i1 in 0..N {
            for j1 in 0..N - i1 {
                for i2 in 0..N - i1 - j1 {
                    for j2 in 0..N - i1 - j1 - i2 {
                        r.0[i1 + i2][j1 + j2] += self.0[i1][j1] * o.0[i2][j2];
                    }
                }
            }
        }
        r
    }

    fn inv(&self) -> Jet {
        let c0 = self.value();
        let n = self.scale(1.0 / c0).sub(&Jet::constant(C::new(1.0, 0.0)));
        // 1/(1+n) = 1 - n + n² - n³
        let mut acc = Jet::constant(C::new(1.0, 0.0));
        let mut p = Jet::constant(C::new(1.0, 0.0));
        for k in 1..N {
            p = p.mul(&n);
            let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
            acc = acc.add(&p.scale(C::new(sign, 0.0)));
        }
        acc.scale(1.0 / c0)
    }

    fn d(&self, var: usize) -> Jet {
        let mut r = Jet::zero();
        for i in 0..N {
            for j in 0..N - i {
                let (src_i, src_j, f) = if var == 0 { (i + 1, j, i + 1) } else { (i, j + 1, j + 1) };
                if src_i + src_j < N {
                    r.0[i][j] = self.0[src_i][src_j] * f as f64;
                }
            }
        }
        r
    }
}

type M2 = [[Jet; 2]; 2];

fn m_const(m: [[C; 2]; 2]) -> M2 {
    [[Jet::constant(m[0][0]), Jet::constant(m[0][1])], [Jet::constant(m[1][0]), Jet::constant(m[1][1])]]
}

fn m_mul(a: &M2, b: &M2) -> M2 {
    let mut r = [[Jet::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
        }
    }
    r
}

fn m_add(a: &M2, b: &M2, sign: f64) -> M2 {
    let mut r = *a;
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][j].add(&b[i][j].scale(C::new(sign, 0.0)));
        }
    }
    r
}

fn m_inv(a: &M2) -> M2 {
    let det_inv = a[0][0].mul(&a[1][1]).sub(&a[0][1].mul(&a[1][0])).inv();
    let neg = C::new(-1.0, 0.0);
    [
        [a[1][1].mul(&det_inv), a[0][1].mul(&det_inv).scale(neg)],
        [a[1][0].mul(&det_inv).scale(neg), a[0][0].mul(&det_inv)],
    ]
}

fn m_d(a: &M2, var: usize) -> M2 {
    let mut r = *a;
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][j].d(var);
        }
    }
    r
}

/// The unique off-diagonal position where `m` is nonzero.
fn support(m: [[f64; 2]; 2]) -> (usize, usize) {
    let nz: Vec<(usize, usize)> =
        [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().filter(|&(i, j)| m[i][j] != 0.0).collect();
    assert!(nz.len() == 1 && nz[0].0 != nz[0].1, "generator must be a single off-diagonal entry: {m:?}");
    nz[0]
}

pub struct Oracle {
    pub metric: [[C; 2]; 2],
    pub ricci: [[C; 2]; 2],
}

impl Oracle {
    /// `Ricci = λ g`, with the largest component deviation from proportionality.
    pub fn lambda(&self) -> (f64, f64) {
        let (mut bi, mut bj) = (0, 0);
        for i in 0..2 {
            for j in 0..2 {
                if self.metric[i][j].norm() > self.metric[bi][bj].norm() {
                    (bi, bj) = (i, j);
                }
            }
        }
        let lam = self.ricci[bi][bj] / self.metric[bi][bj];
        let mut res: f64 = lam.im.abs();
        for i in 0..2 {
            for j in 0..2 {
                res = res.max((self.ricci[i][j] - lam * self.metric[i][j]).norm());
            }
        }
        (lam.re, res)
    }
}

/// `xe`, `xf`: matrices with `E ▷ u = u·xe`, `F ▷ u = u·xf` on the defining matrix `u`.
pub fn round_sphere(xe: [[f64; 2]; 2], xf: [[f64; 2]; 2], base: [[C; 2]; 2]) -> Oracle {
    let i = C::new(0.0, 1.0);
    let one = C::new(1.0, 0.0);
    let zero = C::new(0.0, 0.0);
    let a = [[zero, one], [-one, zero]];
    let b = [[zero, i], [i, zero]];
    let (x, y) = (Jet::x(), Jet::y());
    let mut xm = [[Jet::zero(); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            xm[r][c] = x.scale(a[r][c]).add(&y.scale(b[r][c]));
        }
    }
    let id = m_const([[one, zero], [zero, one]]);
    let cayley = m_mul(&m_add(&id, &xm, 1.0), &m_inv(&m_add(&id, &xm, -1.0)));
    let sigma = m_mul(&m_const(base), &cayley);
    let sigma_inv = m_inv(&sigma);

    let (pe, pf) = (support(xe), support(xf));
    assert_ne!(pe, pf);
    // frame coefficients: σ⁻¹ ∂_k σ = ω+_k xe + ω-_k xf + (diagonal)
    let mut wp = [Jet::zero(); 2];
    let mut wm = [Jet::zero(); 2];
    for k in 0..2 {
        let mc = m_mul(&sigma_inv, &m_d(&sigma, k));
        wp[k] = mc[pe.0][pe.1].scale(C::new(1.0 / xe[pe.0][pe.1], 0.0));
        wm[k] = mc[pf.0][pf.1].scale(C::new(1.0 / xf[pf.0][pf.1], 0.0));
    }
    let mut g = [[Jet::zero(); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            g[r][c] = wp[r].mul(&wm[c]).add(&wm[r].mul(&wp[c]));
        }
    }
    let ginv = m_inv(&g);
    let dg = [m_d(&g, 0), m_d(&g, 1)];
    // Γ^k_ij = ½ g^kl (∂_i g_lj + ∂_j g_li - ∂_l g_ij)
    let mut gamma = [[[Jet::zero(); 2]; 2]; 2];
    for k in 0..2 {
        for ii in 0..2 {
            for jj in 0..2 {
                let mut acc = Jet::zero();
                for l in 0..2 {
                    let t = dg[ii][l][jj].add(&dg[jj][l][ii]).sub(&dg[l][ii][jj]);
                    acc = acc.add(&ginv[k][l].mul(&t));
                }
                gamma[k][ii][jj] = acc.scale(C::new(0.5, 0.0));
            }
        }
    }
    // R(dx^k) = ρ^k_m Vol ⊗ dx^m with Vol = dx^0∧dx^1 and ∇dx^k = -Γ^k_ij dx^i⊗dx^j
    let mut rho = [[zero; 2]; 2];
    for k in 0..2 {
        for m in 0..2 {
            let mut v = gamma[k][1][m].d(0).value() - gamma[k][0][m].d(1).value();
            for j in 0..2 {
                v += gamma[k][0][j].value() * gamma[j][1][m].value() - gamma[k][1][j].value() * gamma[j][0][m].value();
            }
            rho[k][m] = -v;
        }
    }
    // ℓ(Vol) = ½(dx^0⊗dx^1 - dx^1⊗dx^0), contracted against g with the inverse metric
    let mut ricci = [[zero; 2]; 2];
    for m in 0..2 {
        ricci[1][m] = rho[0][m] * 0.5;
        ricci[0][m] = -rho[1][m] * 0.5;
    }
    let metric = [[g[0][0].value(), g[0][1].value()], [g[1][0].value(), g[1][1].value()]];
    Oracle { metric, ricci }
}

pub fn identity() -> [[C; 2]; 2] {
    let (o, z) = (C::new(1.0, 0.0), C::new(0.0, 0.0));
    [[o, z], [z, o]]
}

/// A point of SU(2) away from the identity.
pub fn generic_point() -> [[C; 2]; 2] {
    let (t, phi) = (0.7f64, 0.4f64);
    let a = C::new(t.cos() * phi.cos(), t.cos() * phi.sin());
    let b = C::new(t.sin() * 0.6, t.sin() * 0.8);
    [[a, b], [-b.conj(), a.conj()]]
}
