//! Einstein lifting weights and constant from the Ricci coefficients `a`, `b`,
//! and scans of the Einstein condition over `q`-intervals.
//!
//! A scan never decides anything with floating point. The failure set of
//! the condition is the zero set of the reduced numerator of `a + b` together
//! with the poles of `a` and `b`; both are polynomials in `s = q^(1/2)` whose
//! real roots are isolated with Sturm sequences over the rationals.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::poly::{count_roots, Poly};
use crate::scalar::Scalar;

/// Bisection stops once a root bracket in `s` is narrower than `2^-ROOT_BITS`.
const ROOT_BITS: u32 = 48;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EinsteinLift {
    pub c1: Scalar,
    pub c2: Scalar,
    pub lambda: Scalar,
}

/// `c1 = b/(a+b)`, `c2 = a/(a+b)`, `λ = ab/(a+b)`.
pub fn einstein_lift(a: &Scalar, b: &Scalar) -> Result<EinsteinLift> {
    let sum = a + b;
    if sum.is_zero() {
        return Err(Error::NoEinsteinLift);
    }
    let c1 = b.checked_div(&sum)?;
    let c2 = a.checked_div(&sum)?;
    let lambda = &c1 * a;
    debug_assert_eq!(lambda, &c2 * b);
    Ok(EinsteinLift { c1, c2, lambda })
}

/// `c1·a = c2·b`, i.e. the Ricci tensor of the weighted lift is symmetric.
pub fn symmetry_check(a: &Scalar, b: &Scalar, c1: &Scalar, c2: &Scalar) -> bool {
    c1 * a == c2 * b
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub q: f64,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub lambda: Option<f64>,
    pub einstein_ok: bool,
}

/// An isolating interval for one root, in `s` (exact) and in `q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootBracket {
    pub s_lo: String,
    pub s_hi: String,
    pub q_lo: f64,
    pub q_hi: f64,
}

/// A closed `s`-interval around `1` containing no root of the failure polynomial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Neighbourhood {
    pub s_lo: String,
    pub s_hi: String,
    pub q_lo: f64,
    pub q_hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RicciReport {
    pub a: Scalar,
    pub b: Scalar,
    pub a_plus_b: Scalar,
    pub c1: Option<Scalar>,
    pub c2: Option<Scalar>,
    pub lambda: Option<Scalar>,
    pub qmin: f64,
    pub qmax: f64,
    pub q_samples: Vec<Sample>,
    /// `a + b` is not identically zero.
    pub a_plus_b_nonzero: bool,
    pub contains_one: bool,
    /// `a(1) = b(1)`, both defined.
    pub anchor_ok: bool,
    /// Roots of the failure polynomial within the scanned interval.
    pub failure_points: Vec<RootBracket>,
    pub neighbourhood_of_one: Option<Neighbourhood>,
    /// Every sample passes and `a + b` is not identically zero.
    pub einstein_ok: bool,
}

impl RicciReport {
    /// `q,a,b,lambda,einstein_ok`, one row per sample.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidConfig(format!("csv: {e}"));
        w.write_record(["q", "a", "b", "lambda", "einstein_ok"]).map_err(io)?;
        for s in &self.q_samples {
            let f = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
            w.write_record([s.q.to_string(), f(s.a), f(s.b), f(s.lambda), s.einstein_ok.to_string()])
                .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidConfig(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Square-free polynomials in `s` whose positive roots are exactly where the
/// Einstein lift is undefined: zeros of `a + b` and poles of `a` or `b`.
/// Empty when `a + b` vanishes identically.
pub fn failure_polynomials(a: &Scalar, b: &Scalar) -> Vec<Poly> {
    let sum = a + b;
    if sum.is_zero() {
        return Vec::new();
    }
    [sum.numerator(), a.denominator(), b.denominator()]
        .into_iter()
        .filter(|p| p.degree().unwrap_or(0) > 0)
        .map(|p| p.square_free())
        .collect()
}

fn rat(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::InvalidConfig(format!("{x} is not a finite number")))
}

fn rat_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Rationals `lo <= sqrt(x) <= hi` with `hi - lo <= 2^-bits`; equal when `x` is a rational square.
fn sqrt_bracket(x: &BigRational, bits: u32) -> (BigRational, BigRational) {
    let guess = BigRational::from_float(rat_f64(x).sqrt()).unwrap_or_else(BigRational::one);
    if &(&guess * &guess) == x {
        return (guess.clone(), guess);
    }
    let mut lo = guess.clone();
    let mut hi = guess;
    let mut step = BigRational::new(BigInt::one(), BigInt::one() << 40u32);
    while &(&lo * &lo) > x {
        lo -= &step;
        step = &step * BigInt::from(2);
    }
    if lo.is_negative() {
        lo = BigRational::zero();
    }
    step = BigRational::new(BigInt::one(), BigInt::one() << 40u32);
    while &(&hi * &hi) < x {
        hi += &step;
        step = &step * BigInt::from(2);
    }
    let eps = BigRational::new(BigInt::one(), BigInt::one() << bits);
    while &hi - &lo > eps {
        let mid = (&lo + &hi) / BigInt::from(2);
        match (&mid * &mid).cmp(x) {
            std::cmp::Ordering::Less => lo = mid,
            std::cmp::Ordering::Greater => hi = mid,
            std::cmp::Ordering::Equal => return (mid.clone(), mid),
        }
    }
    (lo, hi)
}

/// Roots in the closed interval `[lo, hi]`.
fn roots_closed(seq: &[Poly], lo: &BigRational, hi: &BigRational) -> usize {
    let at_lo = usize::from(seq[0].sign_at(lo) == 0);
    at_lo + count_roots(seq, lo, hi)
}

/// Isolating brackets for every root of the square-free `p` in `[lo, hi]`.
fn isolate(p: &Poly, lo: &BigRational, hi: &BigRational) -> Vec<(BigRational, BigRational)> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let seq = p.sturm_sequence();
    let eps = BigRational::new(BigInt::one(), BigInt::one() << ROOT_BITS);
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((l, h)) = stack.pop() {
        let n = roots_closed(&seq, &l, &h);
        if n == 0 {
            continue;
        }
        if l == h {
            out.push((l, h));
            continue;
        }
        if n == 1 && &h - &l <= eps {
            out.push((l, h));
            continue;
        }
        // split off-centre when the midpoint is itself a root
        let mut mid = (&l + &h) / BigInt::from(2);
        let mut nudge = (&h - &l) / BigInt::from(64);
        while p.sign_at(&mid) == 0 {
            mid += &nudge;
            nudge = nudge / BigInt::from(2);
        }
        stack.push((mid.clone(), h));
        stack.push((l, mid));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out.dedup();
    out
}

/// Sorted brackets with overlapping ones joined.
fn merge(mut brackets: Vec<(BigRational, BigRational)>) -> Vec<(BigRational, BigRational)> {
    brackets.sort();
    let mut out: Vec<(BigRational, BigRational)> = Vec::new();
    for (l, h) in brackets {
        match out.last_mut() {
            Some(last) if l <= last.1 => {
                if h > last.1 {
                    last.1 = h;
                }
            }
            _ => out.push((l, h)),
        }
    }
    out
}

/// Decides exactly whether `p` vanishes at `s = sqrt(q0)`, `q0 > 0`.
fn vanishes_at_sqrt(p: &Poly, q0: &BigRational) -> bool {
    if let Some(r) = rational_sqrt(q0) {
        return p.sign_at(&r) == 0;
    }
    // p(s) = e(s²) + s·o(s²) with sqrt(q0) irrational: both parts must vanish
    let e = Poly::from_coeffs(p.coeffs().iter().step_by(2).cloned().collect());
    let o = Poly::from_coeffs(p.coeffs().iter().skip(1).step_by(2).cloned().collect());
    e.eval(q0).is_zero() && o.eval(q0).is_zero()
}

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    let (n, d) = (x.numer(), x.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| BigRational::new(rn, rd))
}

/// Evaluates `a`, `b` and `λ` on an evenly spaced `q`-grid and isolates every failure point.
pub fn einstein_scan(a: &Scalar, b: &Scalar, qmin: f64, qmax: f64, samples: usize) -> Result<RicciReport> {
    if samples == 0 {
        return Err(Error::InvalidConfig("sample count must be at least 1".into()));
    }
    if !(qmin > 0.0 && qmax > 0.0 && qmin.is_finite() && qmax.is_finite()) {
        return Err(Error::InvalidConfig(format!("q-interval [{qmin}, {qmax}] must lie in q > 0")));
    }
    if qmin > qmax {
        return Err(Error::InvalidConfig(format!("qmin = {qmin} exceeds qmax = {qmax}")));
    }
    if samples > 1 && qmin == qmax {
        return Err(Error::InvalidConfig("a degenerate interval takes exactly one sample".into()));
    }

    let sum = a + b;
    let a_plus_b_nonzero = !sum.is_zero();
    let lift = einstein_lift(a, b).ok();
    let factors = failure_polynomials(a, b);
    let seqs: Vec<Vec<Poly>> = factors.iter().map(Poly::sturm_sequence).collect();
    let vanishes = |x: &BigRational| factors.iter().any(|p| p.sign_at(x) == 0);

    let (qlo, qhi) = (rat(qmin)?, rat(qmax)?);
    let s_lo = sqrt_bracket(&qlo, ROOT_BITS).0;
    let s_hi = sqrt_bracket(&qhi, ROOT_BITS).1;
    let roots = merge(factors.iter().flat_map(|p| isolate(p, &s_lo, &s_hi)).collect());

    let grid: Vec<f64> = (0..samples)
        .map(|k| if samples == 1 { qmin } else { qmin + (qmax - qmin) * k as f64 / (samples - 1) as f64 })
        .collect();
    let q_samples: Vec<Sample> = grid
        .par_iter()
        .map(|&q0| {
            let av = a.eval_at(q0).ok();
            let bv = b.eval_at(q0).ok();
            let ok = a_plus_b_nonzero
                && match rat(q0) {
                    Ok(q0r) => !factors.iter().any(|p| vanishes_at_sqrt(p, &q0r)),
                    Err(_) => false,
                };
            let lambda = match (&lift, ok) {
                (Some(l), true) => l.lambda.eval_at(q0).ok(),
                _ => None,
            };
            Sample { q: q0, a: av, b: bv, lambda, einstein_ok: ok }
        })
        .collect();

    let one = BigRational::one();
    let contains_one = qlo <= one && one <= qhi;
    let anchor_ok = matches!((a.classical_limit(), b.classical_limit()), (Ok(x), Ok(y)) if x == y);

    let neighbourhood_of_one = if contains_one && a_plus_b_nonzero && !vanishes(&one) {
        let below = roots.iter().filter(|r| r.1 < one).map(|r| r.1.clone()).max();
        let above = roots.iter().filter(|r| r.0 > one).map(|r| r.0.clone()).min();
        // shrink away from the brackets so the closed interval is root free
        let lo = match below {
            Some(x) => (&x + &one) / BigInt::from(2),
            None => s_lo.clone(),
        };
        let hi = match above {
            Some(x) => (&x + &one) / BigInt::from(2),
            None => s_hi.clone(),
        };
        let lo = if vanishes(&lo) { (&lo + &one) / BigInt::from(2) } else { lo };
        let hi = if vanishes(&hi) { (&hi + &one) / BigInt::from(2) } else { hi };
        if seqs.iter().all(|seq| roots_closed(seq, &lo, &hi) == 0) {
            Some(Neighbourhood {
                q_lo: rat_f64(&(&lo * &lo)),
                q_hi: rat_f64(&(&hi * &hi)),
                s_lo: lo.to_string(),
                s_hi: hi.to_string(),
            })
        } else {
            None
        }
    } else {
        None
    };

    let failure_points = roots
        .iter()
        .map(|(l, h)| RootBracket {
            s_lo: l.to_string(),
            s_hi: h.to_string(),
            q_lo: rat_f64(&(l * l)),
            q_hi: rat_f64(&(h * h)),
        })
        .collect();

    let einstein_ok = a_plus_b_nonzero && q_samples.iter().all(|s| s.einstein_ok);
    let (c1, c2, lambda) = match lift {
        Some(EinsteinLift { c1, c2, lambda }) => (Some(c1), Some(c2), Some(lambda)),
        None => (None, None, None),
    };
    Ok(RicciReport {
        a: a.clone(),
        b: b.clone(),
        a_plus_b: sum,
        c1,
        c2,
        lambda,
        qmin,
        qmax,
        q_samples,
        a_plus_b_nonzero,
        contains_one,
        anchor_ok,
        failure_points,
        neighbourhood_of_one,
        einstein_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sc(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    #[test]
    fn lift_examples() {
        let l = einstein_lift(&Scalar::one(), &Scalar::from_int(3)).unwrap();
        assert_eq!(l.c1, Scalar::from_ratio(3, 4));
        assert_eq!(l.c2, Scalar::from_ratio(1, 4));
        assert_eq!(l.lambda, Scalar::from_ratio(3, 4));
        assert_eq!(einstein_lift(&Scalar::one(), &Scalar::from_int(-1)), Err(Error::NoEinsteinLift));
        let l = einstein_lift(&sc("2*q+2"), &sc("2*q+2")).unwrap();
        assert_eq!(l.c1, Scalar::from_ratio(1, 2));
        assert_eq!(l.lambda, sc("q+1"));
    }

    #[test]
    fn symmetry_examples() {
        let (a, b) = (sc("q+q^-1"), sc("q^3+q^5"));
        let l = einstein_lift(&a, &b).unwrap();
        assert!(symmetry_check(&a, &b, &l.c1, &l.c2));
        assert!(!symmetry_check(&a, &b, &Scalar::one(), &Scalar::zero()));
        let h = Scalar::from_ratio(1, 2);
        assert!(symmetry_check(&a, &a, &h, &h));
    }

    #[test]
    fn constant_scan() {
        let four = Scalar::from_int(4);
        let r = einstein_scan(&four, &four, 0.5, 2.0, 7).unwrap();
        assert!(r.einstein_ok && r.anchor_ok && r.contains_one);
        assert!(r.q_samples.iter().all(|s| s.lambda == Some(2.0)));
        assert!(r.failure_points.is_empty());
    }

    #[test]
    fn identically_zero_sum() {
        let r = einstein_scan(&sc("q-1"), &sc("1-q"), 0.5, 2.0, 5).unwrap();
        assert!(!r.a_plus_b_nonzero && !r.einstein_ok);
        assert!(r.lambda.is_none());
    }

    #[test]
    fn roots_are_isolated_and_hit_exactly() {
        // a + b = q - 3/2 vanishes between grid points; a + b = q - 2 at the grid point q = 2
        let r = einstein_scan(&sc("q-2"), &Scalar::from_ratio(1, 2), 0.5, 2.0, 5).unwrap();
        assert_eq!(r.failure_points.len(), 1);
        assert!((r.failure_points[0].q_lo - 1.5).abs() < 1e-9);
        assert!(r.q_samples.iter().all(|s| s.einstein_ok));
        let nb = r.neighbourhood_of_one.unwrap();
        assert!(nb.q_hi < 1.5 && nb.q_lo <= 0.5);
        let r = einstein_scan(&sc("q-2"), &Scalar::zero(), 0.5, 2.0, 4).unwrap();
        assert!(!r.q_samples[3].einstein_ok && r.q_samples[2].einstein_ok);
        assert!(!r.einstein_ok);
    }

    #[test]
    fn poles_count_as_failures() {
        let a = sc("1/(q-2)");
        let r = einstein_scan(&a, &Scalar::one(), 1.0, 3.0, 3).unwrap();
        assert!(!r.q_samples[1].einstein_ok);
        assert!(r.q_samples[1].a.is_none());
    }

    #[test]
    fn irrational_sample_points() {
        // s - 3/4 vanishes at q = 9/16
        let r = einstein_scan(&sc("s-3/4"), &Scalar::zero(), 0.5, 0.5625, 2).unwrap();
        assert!(r.q_samples[0].einstein_ok);
        assert!(!r.q_samples[1].einstein_ok);
    }

    #[test]
    fn scan_rejects_bad_config() {
        let one = Scalar::one();
        assert!(einstein_scan(&one, &one, 0.5, 2.0, 0).is_err());
        assert!(einstein_scan(&one, &one, 2.0, 0.5, 3).is_err());
        assert!(einstein_scan(&one, &one, -1.0, 0.5, 3).is_err());
        assert!(einstein_scan(&one, &one, 1.0, 1.0, 1).is_ok());
    }

    #[test]
    fn csv_layout() {
        let one = Scalar::one();
        let r = einstein_scan(&one, &one, 1.0, 2.0, 2).unwrap();
        assert_eq!(r.to_csv().unwrap(), "q,a,b,lambda,einstein_ok\n1,1,1,0.5,true\n2,1,1,0.5,true\n");
    }
}
